"""Undirected simple graphs stored as one neighbor bitmask per vertex.

Vertex sets are plain ``int`` bitmasks over ``0..n-1``: bit ``v`` is set iff
``v`` is in the set.  All graph objects are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

VertexSet = int


class GraphFormatError(ValueError):
    """Base class for graph file parse errors."""


class MalformedHeaderError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class SelfLoopError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class EdgeCountError(GraphFormatError):
    pass


class OddDegreeSumError(ValueError):
    """Raised when n*d is odd, so no d-regular graph on n vertices exists."""


class GenerationError(RuntimeError):
    """Raised when a random construction keeps failing after its retry budget."""


def members(mask: VertexSet) -> Iterator[int]:
    """Yield the vertices of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def popcount(mask: VertexSet) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal n")
        full = self.full
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbor outside 0..n-1")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in members(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def full(self) -> VertexSet:
        return (1 << self.n) - 1

    def complement(self, mask: VertexSet) -> VertexSet:
        return self.full & ~mask

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def max_degree(self) -> int:
        return max((row.bit_count() for row in self.adj), default=0)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in members(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def neighbors_of_set(self, mask: VertexSet) -> VertexSet:
        """Neighbors of ``mask`` lying outside ``mask``."""
        out = 0
        for v in members(mask):
            out |= self.adj[v]
        return out & ~mask

    def adjacency_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            mat[u, v] = mat[v, u] = 1
        return mat


def neighbors_of_set(g: Graph, mask: VertexSet) -> VertexSet:
    return g.neighbors_of_set(mask)


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; every random routine in the package uses this."""
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))


def trial_seed(seed: int, trial: int) -> int:
    return (seed ^ trial) & 0xFFFFFFFFFFFFFFFF


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p): each pair ``u < v`` drawn in lexicographic order."""
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def _pairing_attempt(n: int, d: int, rng: np.random.Generator) -> list[tuple[int, int]] | None:
    stubs = np.repeat(np.arange(n), d)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    seen = set()
    for a, b in pairs.tolist():
        if a == b:
            return None
        key = (a, b) if a < b else (b, a)
        if key in seen:
            return None
        seen.add(key)
    return sorted(seen)


def gen_random_regular(n: int, d: int, seed: int, max_tries: int = 100_000) -> Graph:
    """Random simple d-regular graph by the configuration model with rejection.

    Stubs are shuffled and paired consecutively; a pairing containing a loop or
    a repeated edge is discarded and redrawn.  For ``d > (n - 1) / 2`` the
    complement of a random ``(n - 1 - d)``-regular graph is returned instead,
    which keeps the rejection rate low.  The distribution is not claimed to
    be uniform.
    """
    if n < 1 or d < 0 or d >= n:
        raise ValueError(f"need 0 <= d < n, got n={n}, d={d}")
    if n * d % 2:
        raise OddDegreeSumError(f"n*d = {n * d} is odd")
    if 2 * d > n - 1:
        g = gen_random_regular(n, n - 1 - d, seed, max_tries)
        full = g.full
        return Graph(n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.adj)))
    if d == 0:
        return Graph(n, (0,) * n)
    rng = make_rng(seed)
    for _ in range(max_tries):
        edges = _pairing_attempt(n, d, rng)
        if edges is not None:
            return Graph.from_edges(n, edges)
    raise GenerationError(f"no simple {d}-regular pairing on {n} vertices in {max_tries} tries")


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` edge-list format or a DIMACS ``p edge n m`` file.

    The plain format is 0-indexed; DIMACS ``e u v`` lines are 1-indexed.
    Lines starting with ``#`` (and DIMACS ``c`` lines) are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line.split())
    if not lines:
        raise MalformedHeaderError("empty graph file")

    header = lines[0]
    dimacs = header[0] in ("p", "c")
    if dimacs:
        lines = [tok for tok in lines if tok[0] != "c"]
        header = lines[0]
        if len(header) != 4 or header[0] != "p":
            raise MalformedHeaderError(f"bad DIMACS header: {' '.join(header)}")
        header = header[2:]
    if len(header) != 2:
        raise MalformedHeaderError(f"expected 'n m', got: {' '.join(header)}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise MalformedHeaderError(f"non-integer header: {' '.join(header)}") from exc
    if n < 0 or m < 0:
        raise MalformedHeaderError("negative counts in header")

    offset = 1 if dimacs else 0
    adj = [0] * n
    count = 0
    for tok in lines[1:]:
        if dimacs:
            if tok[0] != "e":
                raise GraphFormatError(f"unexpected DIMACS line: {' '.join(tok)}")
            tok = tok[1:]
        if len(tok) != 2:
            raise GraphFormatError(f"expected 'u v', got: {' '.join(tok)}")
        try:
            u, v = int(tok[0]) - offset, int(tok[1]) - offset
        except ValueError as exc:
            raise GraphFormatError(f"non-integer edge: {' '.join(tok)}") from exc
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"edge ({tok[0]}, {tok[1]}) out of range for n={n}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {tok[0]}")
        if adj[u] >> v & 1:
            raise DuplicateEdgeError(f"duplicate edge ({tok[0]}, {tok[1]})")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        count += 1
    if count != m:
        raise EdgeCountError(f"header declares {m} edges, found {count}")
    return Graph(n, tuple(adj))


def write_graph(g: Graph) -> str:
    edges = g.edges()
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def matching_graph(k: int) -> Graph:
    """k disjoint edges (2i, 2i+1)."""
    return Graph.from_edges(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])


def edgeless_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)
