"""Minimum/maximum (sigma, rho) vertex subset problems.

A set ``X`` is a (sigma, rho)-set when every vertex of ``X`` has a number
of neighbors in ``X`` lying in sigma and every other vertex has a number
lying in rho.  Solved exactly by dynamic programming over a decomposition
tree, where subsets of one side of a cut are grouped by their truncated
neighbor counts on the other side.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .decomposition import DecompositionTree, Nested
from .graph import Graph, VertexSet, members


class CapExceeded(Exception):
    def __init__(self, side: VertexSet, count: int, cap: int):
        super().__init__(f"more than {cap} classes at cut side {sorted(members(side))} "
                         f"(partial count {count})")
        self.side = side
        self.count = count
        self.cap = cap


class ProblemSpecError(ValueError):
    pass


@dataclass(frozen=True)
class CofiniteSet:
    """A finite set of naturals, or the complement of one.

    ``elements`` are the members when ``cofinite`` is false and the
    non-members otherwise.
    """

    cofinite: bool
    elements: frozenset[int]

    @classmethod
    def finite(cls, *xs: int) -> "CofiniteSet":
        return cls(False, frozenset(xs))

    @classmethod
    def naturals(cls) -> "CofiniteSet":
        return cls(True, frozenset())

    @classmethod
    def at_least(cls, p: int) -> "CofiniteSet":
        return cls(True, frozenset(range(p)))

    def __post_init__(self):
        if any(x < 0 for x in self.elements):
            raise ValueError("naturals only")

    def __contains__(self, x: int) -> bool:
        return (x in self.elements) != self.cofinite

    @property
    def is_naturals(self) -> bool:
        return self.cofinite and not self.elements

    @property
    def is_empty(self) -> bool:
        return not self.cofinite and not self.elements

    def __str__(self):
        inner = ",".join(str(x) for x in sorted(self.elements))
        return ("cofinite{" if self.cofinite else "{") + inner + "}"


def d_of_set(mu: CofiniteSet) -> int:
    """1 + min(max member, max non-member); 0 for the naturals.

    A missing maximum (the infinite side) counts as infinity.
    """
    if mu.is_naturals:
        return 0
    if mu.is_empty:
        raise ValueError("d is undefined for the empty set")
    return 1 + max(mu.elements)


def membership_truncated(count_truncated: int, d: int, mu: CofiniteSet) -> bool:
    """Decide ``c in mu`` from ``min(c, d)``; valid for any ``d >= d(mu)``."""
    if d < d_of_set(mu):
        raise ValueError(f"truncation level {d} below d(mu) = {d_of_set(mu)}")
    if count_truncated < d:
        return count_truncated in mu
    return mu.cofinite


@dataclass(frozen=True)
class SigmaRhoProblem:
    sigma: CofiniteSet
    rho: CofiniteSet
    maximize: bool

    @property
    def d(self) -> int:
        return max(d_of_set(self.sigma), d_of_set(self.rho))

    def is_solution(self, g: Graph, x: VertexSet) -> bool:
        """Direct check against the definition, with untruncated counts."""
        for v in range(g.n):
            count = (g.adj[v] & x).bit_count()
            if count not in (self.sigma if x >> v & 1 else self.rho):
                return False
        return True


def _parse_mu(text: str) -> CofiniteSet:
    m = re.fullmatch(r"\s*(cofinite)?\{([\d\s,]*)\}\s*", text)
    if not m:
        raise ProblemSpecError(f"bad set {text!r}; expected '{{a,b}}' or 'cofinite{{a,b}}'")
    items = [t for t in m.group(2).replace(" ", "").split(",") if t]
    return CofiniteSet(bool(m.group(1)), frozenset(int(t) for t in items))


def parse_problem(spec: str) -> SigmaRhoProblem:
    """``mis``, ``mds``, ``pdom:p``, ``pbdeg:p`` or ``sigma=..,rho=..,dir=min|max``."""
    spec = spec.strip()
    if spec == "mis":
        return max_independent_set()
    if spec == "mds":
        return min_dominating_set()
    m = re.fullmatch(r"(pdom|pbdeg):(\d+)", spec)
    if m:
        p = int(m.group(2))
        return min_p_dominating_set(p) if m.group(1) == "pdom" else max_induced_bounded_degree(p)
    m = re.fullmatch(r"sigma=(.*\}),\s*rho=(.*\}),\s*dir=(min|max)", spec)
    if m:
        return SigmaRhoProblem(_parse_mu(m.group(1)), _parse_mu(m.group(2)), m.group(3) == "max")
    raise ProblemSpecError(f"unknown problem {spec!r}")


def max_independent_set() -> SigmaRhoProblem:
    return SigmaRhoProblem(CofiniteSet.finite(0), CofiniteSet.naturals(), True)


def min_dominating_set() -> SigmaRhoProblem:
    return SigmaRhoProblem(CofiniteSet.naturals(), CofiniteSet.at_least(1), False)


def min_p_dominating_set(p: int) -> SigmaRhoProblem:
    return SigmaRhoProblem(CofiniteSet.naturals(), CofiniteSet.at_least(p), False)


def max_induced_bounded_degree(p: int) -> SigmaRhoProblem:
    return SigmaRhoProblem(CofiniteSet.finite(*range(p + 1)), CofiniteSet.naturals(), True)


FIXTURE_PROBLEMS = {
    "mis": max_independent_set(),
    "mds": min_dominating_set(),
    "pdom:2": min_p_dominating_set(2),
    "pbdeg:1": max_induced_bounded_degree(1),
}


# --- d-neighbor equivalence classes -------------------------------------------------

@dataclass
class ClassIndex:
    """Classes of subsets of ``side`` under truncated neighbor counts.

    Two subsets are equivalent when every vertex across the cut sees the
    same number of neighbors in each, counts capped at ``d``.
    """

    g: Graph
    side: VertexSet
    d: int
    reps: list[VertexSet] = field(default_factory=list)
    signature_map: dict[tuple, int] = field(default_factory=dict)
    _memo: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._cross = [self.g.adj[u] for u in members(self.g.complement(self.side))]

    def signature(self, x: VertexSet) -> tuple:
        d = self.d
        return tuple(min(d, (row & x).bit_count()) for row in self._cross)

    def class_of(self, x: VertexSet) -> int:
        idx = self._memo.get(x)
        if idx is None:
            try:
                idx = self.signature_map[self.signature(x)]
            except KeyError:
                raise AssertionError(f"signature of {sorted(members(x))} not indexed") from None
            self._memo[x] = idx
        return idx

    def __len__(self):
        return len(self.reps)


def build_class_index(g: Graph, side: VertexSet, d: int, cap: int = 1 << 16) -> ClassIndex:
    """Breadth-first closure from the empty set by single-vertex additions.

    The first set reaching a signature becomes its representative; frontier
    sets are extended in FIFO order by vertices in increasing order.
    """
    index = ClassIndex(g, side, d)
    index.reps.append(0)
    index.signature_map[index.signature(0)] = 0
    if d == 0:
        return index
    side_vertices = list(members(side))
    queue = deque([0])
    while queue:
        rep = queue.popleft()
        for v in side_vertices:
            if rep >> v & 1:
                continue
            x = rep | 1 << v
            sig = index.signature(x)
            if sig not in index.signature_map:
                index.signature_map[sig] = len(index.reps)
                index.reps.append(x)
                if len(index.reps) > cap:
                    raise CapExceeded(side, len(index.reps), cap)
                queue.append(x)
    return index


def class_of(index: ClassIndex, x: VertexSet) -> int:
    return index.class_of(x)


# --- dynamic programming ------------------------------------------------------------

@dataclass
class Solution:
    size: int | None
    witness: VertexSet | None
    class_counts: list[tuple[VertexSet, int, int]] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.size is not None


@dataclass
class _Node:
    vertices: VertexSet
    children: tuple = ()
    vertex: int | None = None
    inner: ClassIndex | None = None
    outer: ClassIndex | None = None
    # (inner class, outer class) -> (size, back-pointer)
    table: dict = field(default_factory=dict)


def _to_nodes(t: Nested) -> _Node:
    if isinstance(t, int):
        return _Node(1 << t, vertex=t)
    left, right = _to_nodes(t[0]), _to_nodes(t[1])
    return _Node(left.vertices | right.vertices, (left, right))


def _postorder(root: _Node) -> list[_Node]:
    out, stack = [], [root]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(node.children)
    return out[::-1]


def solve_sigma_rho(g: Graph, tree: DecompositionTree, prob: SigmaRhoProblem,
                    cap: int = 1 << 16, d: int | None = None) -> Solution:
    """Optimum (sigma, rho)-set by DP over ``tree`` rooted at its first edge.

    ``d`` overrides the truncation level; it must be at least d(sigma, rho).
    Table entry ``(i, j)`` at node ``w`` is the best ``|X|`` over subsets
    ``X`` of the node's vertices in inner class ``i`` such that, with any
    outside set in outer class ``j`` added, every vertex of the node meets
    its sigma/rho constraint.
    """
    if d is None:
        d = max(1, prob.d)
    elif d < prob.d:
        raise ValueError("truncation level below d(sigma, rho)")
    sigma, rho = prob.sigma, prob.rho
    better = (lambda a, b: a > b) if prob.maximize else (lambda a, b: a < b)

    nested = tree.rooted(0) if tree.edges else tree.rooted()
    root = _to_nodes(nested) if not isinstance(nested, int) else _Node(1, vertex=0)
    counts: list[tuple[VertexSet, int, int]] = []

    def offer(table, key, size, ptr):
        old = table.get(key)
        if old is None or better(size, old[0]):
            table[key] = (size, ptr)

    for node in _postorder(root):
        node.inner = build_class_index(g, node.vertices, d, cap)
        node.outer = build_class_index(g, g.complement(node.vertices), d, cap)
        counts.append((node.vertices, len(node.inner), len(node.outer)))
        if node.vertex is not None:
            v = node.vertex
            for x in (0, 1 << v):
                mu = sigma if x else rho
                i = node.inner.class_of(x)
                for j, rep in enumerate(node.outer.reps):
                    c = min(d, (g.adj[v] & rep).bit_count())
                    if membership_truncated(c, d, mu):
                        offer(node.table, (i, j), x.bit_count(), x)
            continue
        a, b = node.children
        reps_a, reps_b, reps_w = a.inner.reps, b.inner.reps, node.outer.reps
        # outer class of a given (b's inner rep, w's outer rep), and vice versa
        out_a = [[a.outer.class_of(rb | rw) for rw in reps_w] for rb in reps_b]
        out_b = [[b.outer.class_of(ra | rw) for rw in reps_w] for ra in reps_a]
        by_a: dict[int, list] = {}
        for (ia, ja), entry in a.table.items():
            by_a.setdefault(ia, []).append((ja, entry[0]))
        tab_b = b.table
        for ia, ra in enumerate(reps_a):
            if ia not in by_a:
                continue
            tab_a_row = {ja: size for ja, size in by_a[ia]}
            row_b = out_b[ia]
            for ib, rb in enumerate(reps_b):
                inner = node.inner.class_of(ra | rb)
                row_a = out_a[ib]
                for jw in range(len(reps_w)):
                    sa = tab_a_row.get(row_a[jw])
                    if sa is None:
                        continue
                    eb = tab_b.get((ib, row_b[jw]))
                    if eb is None:
                        continue
                    offer(node.table, (inner, jw), sa + eb[0],
                          ((ia, row_a[jw]), (ib, row_b[jw])))

    best = None
    for key, (size, _) in root.table.items():
        if best is None or better(size, root.table[best][0]):
            best = key
    if best is None:
        return Solution(None, None, counts)
    return Solution(root.table[best][0], _witness(root, best), counts)


def _witness(node: _Node, key) -> VertexSet:
    out = 0
    stack = [(node, key)]
    while stack:
        node, key = stack.pop()
        _, ptr = node.table[key]
        if node.vertex is not None:
            out |= ptr
            continue
        stack.append((node.children[0], ptr[0]))
        stack.append((node.children[1], ptr[1]))
    return out


def brute_force_sigma_rho(g: Graph, prob: SigmaRhoProblem, n_max: int = 22) -> Solution:
    """Exhaustive optimum over all 2^n subsets (vectorized with numpy)."""
    n = g.n
    if n > n_max:
        raise ValueError(f"brute force limited to n <= {n_max}, got {n}")
    masks = np.arange(1 << n, dtype=np.uint32)
    ok = np.ones(masks.size, dtype=bool)
    in_sigma, in_rho = _member_table(prob.sigma, n), _member_table(prob.rho, n)
    for v in range(n):
        counts = np.bitwise_count(masks & np.uint32(g.adj[v]))
        inside = (masks >> np.uint32(v)) & np.uint32(1)
        ok &= np.where(inside == 1, in_sigma[counts], in_rho[counts])
    feasible = masks[ok]
    if feasible.size == 0:
        return Solution(None, None)
    sizes = np.bitwise_count(feasible)
    pick = int(np.argmax(sizes) if prob.maximize else np.argmin(sizes))
    return Solution(int(sizes[pick]), int(feasible[pick]))


def _member_table(mu: CofiniteSet, n: int) -> np.ndarray:
    return np.array([c in mu for c in range(n + 1)], dtype=bool)
