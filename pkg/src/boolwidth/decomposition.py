"""Decomposition trees: unrooted cubic trees whose leaves are the vertices.

A tree is stored as an edge list over node ids plus ``leaf_of``, the leaf
node of each vertex.  Rooted views are nested pairs of vertex ids, e.g.
``((0, 1), (2, 3))``, where the top-level pair is a tree edge.
"""

from __future__ import annotations

import math
import re
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from .cuts import (DEFAULT_CAP, DEFAULT_LIMIT, CapExceeded, cut_car, family_size,
                   greedy_private_pairs, sauer_upper_bound, vc_exact)
from .graph import Graph, VertexSet, make_rng, members

Nested = Union[int, tuple]
Bounds = namedtuple("Bounds", "lower upper")
CutValue = Union[float, Bounds]


class TreeError(ValueError):
    """Invalid decomposition tree or tree file."""


@dataclass(frozen=True)
class TreeCut:
    edge: int
    side: VertexSet


@dataclass(frozen=True)
class DecompositionTree:
    n: int
    edges: tuple[tuple[int, int], ...]
    leaf_of: tuple[int, ...]
    num_nodes: int
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = [[] for _ in range(self.num_nodes)]
        for a, b in self.edges:
            if not (0 <= a < self.num_nodes and 0 <= b < self.num_nodes) or a == b:
                raise TreeError(f"bad tree edge ({a}, {b})")
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adj", tuple(tuple(x) for x in adj))
        self._validate()

    def _validate(self):
        n = self.n
        if n < 1:
            raise TreeError("a decomposition tree needs at least one leaf")
        if len(self.leaf_of) != n or len(set(self.leaf_of)) != n:
            raise TreeError("leaf map is not a bijection")
        expected_nodes = 1 if n == 1 else 2 if n == 2 else 2 * n - 2
        if self.num_nodes != expected_nodes or len(self.edges) != self.num_nodes - 1:
            raise TreeError(f"expected {expected_nodes} nodes and {expected_nodes - 1} edges")
        leaves = set(self.leaf_of)
        for node, nbrs in enumerate(self._adj):
            deg = len(nbrs)
            if node in leaves:
                if deg != (0 if n == 1 else 1):
                    raise TreeError(f"leaf node {node} has degree {deg}")
            elif deg != 3:
                raise TreeError(f"internal node {node} has degree {deg}")
        seen = {0}
        stack = [0]
        while stack:
            for y in self._adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != self.num_nodes:
            raise TreeError("tree is not connected")

    def neighbors(self, node: int) -> tuple[int, ...]:
        return self._adj[node]

    @property
    def vertex_of(self) -> dict[int, int]:
        return {node: v for v, node in enumerate(self.leaf_of)}

    def _subtree_masks(self) -> tuple[list[int], list[int]]:
        """Parent pointers and leaf masks of the tree rooted at node 0."""
        vertex_of = self.vertex_of
        parent = [-1] * self.num_nodes
        order = [0]
        parent[0] = 0
        for x in order:
            for y in self._adj[x]:
                if parent[y] == -1:
                    parent[y] = x
                    order.append(y)
        mask = [0] * self.num_nodes
        for x in reversed(order):
            if x in vertex_of:
                mask[x] |= 1 << vertex_of[x]
            if x:
                mask[parent[x]] |= mask[x]
        parent[0] = -1
        return parent, mask

    def all_cuts(self) -> list[TreeCut]:
        parent, mask = self._subtree_masks()
        cuts = []
        for i, (a, b) in enumerate(self.edges):
            child = b if parent[b] == a else a
            cuts.append(TreeCut(i, mask[child]))
        return cuts

    def rooted(self, edge: int | None = None) -> Nested:
        """Nested-pair view rooted at a tree edge.

        The default root is the leaf edge of vertex 0, with children ordered
        by their smallest vertex, which makes the view canonical.
        """
        if self.n == 1:
            return 0
        vertex_of = self.vertex_of
        if edge is None:
            leaf = self.leaf_of[0]
            a, b = leaf, self._adj[leaf][0]
        else:
            a, b = self.edges[edge]

        def build(x: int, came: int) -> tuple[Nested, int]:
            if x in vertex_of:
                return vertex_of[x], vertex_of[x]
            kids = sorted((build(y, x) for y in self._adj[x] if y != came), key=lambda k: k[1])
            return (kids[0][0], kids[1][0]), kids[0][1]

        left, right = sorted((build(a, b), build(b, a)), key=lambda k: k[1])
        return (left[0], right[0])

    def to_string(self, edge: int | None = None) -> str:
        return nested_to_string(self.rooted(edge))

    @classmethod
    def from_nested(cls, nested: Nested, n: int | None = None) -> "DecompositionTree":
        edges: list[tuple[int, int]] = []
        leaf_at: dict[int, int] = {}
        counter = [0]

        def new_node() -> int:
            counter[0] += 1
            return counter[0] - 1

        def build(t: Nested) -> int:
            if isinstance(t, int):
                if t in leaf_at:
                    raise TreeError(f"vertex {t} appears twice")
                node = new_node()
                leaf_at[t] = node
                return node
            if not isinstance(t, tuple) or len(t) != 2:
                raise TreeError("every internal node needs exactly two children")
            node = new_node()
            for child in t:
                edges.append((node, build(child)))
            return node

        if isinstance(nested, int):
            build(nested)
        else:
            if not isinstance(nested, tuple) or len(nested) != 2:
                raise TreeError("the root must be a pair")
            left, right = build(nested[0]), build(nested[1])
            edges.append((left, right))
        size = len(leaf_at) if n is None else n
        if sorted(leaf_at) != list(range(size)):
            raise TreeError("leaves must be exactly the vertices 0..n-1")
        return cls(size, tuple(edges), tuple(leaf_at[v] for v in range(size)), counter[0])


def nested_to_string(t: Nested) -> str:
    if isinstance(t, int):
        return str(t)
    return f"({nested_to_string(t[0])},{nested_to_string(t[1])})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def parse_tree(text: str, n: int | None = None) -> DecompositionTree:
    """Parse the nested-parentheses tree format, e.g. ``((0,1),(2,3))``."""
    tokens = []
    for m in _TOKEN.finditer(text.strip()):
        num, ch = m.groups()
        if num is not None:
            tokens.append(int(num))
        elif ch in "(),":
            tokens.append(ch)
        elif ch.strip():
            raise TreeError(f"unexpected character {ch!r}")
    pos = 0

    def parse() -> Nested:
        nonlocal pos
        if pos >= len(tokens):
            raise TreeError("unexpected end of tree")
        tok = tokens[pos]
        pos += 1
        if isinstance(tok, int):
            return tok
        if tok != "(":
            raise TreeError(f"unexpected {tok!r}")
        left = parse()
        if pos >= len(tokens) or tokens[pos] != ",":
            raise TreeError("expected ',' (internal nodes are binary)")
        pos += 1
        right = parse()
        if pos >= len(tokens) or tokens[pos] != ")":
            raise TreeError("expected ')' (internal nodes are binary)")
        pos += 1
        return (left, right)

    nested = parse()
    if pos != len(tokens):
        raise TreeError("trailing characters after tree")
    return DecompositionTree.from_nested(nested, n)


# --- construction by leaf insertion -------------------------------------------------

def tree_from_insertions(n: int, choices: list[int]) -> DecompositionTree:
    """Build the tree obtained by inserting leaves 3..n-1 into edges ``choices``.

    Start from the star on leaves 0, 1, 2; leaf ``i`` subdivides edge
    ``choices[i-3]`` of the current edge list.  The subdivided edge keeps
    its slot, the lower half and the new leaf edge are appended.
    """
    if n == 1:
        return DecompositionTree(1, (), (0,), 1)
    if n == 2:
        return DecompositionTree(2, ((0, 1),), (0, 1), 2)
    leaf_of = [0, 1, 2]
    center = 3
    # edges point away from leaf 0, so slot j always holds the upper half
    edges = [(0, center), (center, 1), (center, 2)]
    next_node = 4
    for i, j in zip(range(3, n), choices):
        a, b = edges[j]
        w, leaf = next_node, next_node + 1
        next_node += 2
        edges[j] = (a, w)
        edges.append((w, b))
        edges.append((w, leaf))
        leaf_of.append(leaf)
    return DecompositionTree(n, tuple(edges), tuple(leaf_of), next_node)


def build_random_tree(g: Graph | int, seed: int) -> DecompositionTree:
    """Uniform random leaf-labeled cubic tree (leaf i subdivides a uniform edge)."""
    n = g if isinstance(g, int) else g.n
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = make_rng(seed)
    choices = [int(rng.integers(2 * i - 3)) for i in range(3, n)]
    return tree_from_insertions(n, choices)


def iter_tree_cut_sides(n: int) -> Iterator[tuple[list[int], list[int]]]:
    """Every leaf-labeled cubic tree on n >= 3 leaves, as (cut sides, choices).

    Sides are stored as the part not containing vertex 0.  Inserting leaf i
    into edge e adds i to the side of every edge whose side contains e's.
    """
    def rec(sides: list[int], choices: list[int], i: int):
        if i == n:
            yield sides, choices
            return
        bit = 1 << i
        for j in range(len(sides)):
            low = sides[j]
            new = [s | bit if low & ~s == 0 else s for s in sides]
            new.append(low)
            new.append(bit)
            yield from rec(new, choices + [j], i + 1)

    yield from rec([0b110, 0b010, 0b100], [], 3)


def double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


# --- cut functions and widths --------------------------------------------------------

def _normal(g: Graph, side: VertexSet) -> VertexSet:
    comp = g.complement(side)
    return min(side, comp)


def cutbool_function(g: Graph, cap: int = DEFAULT_CAP, limit: int = DEFAULT_LIMIT) -> Callable[[VertexSet], CutValue]:
    """Memoized cut-bool.  Falls back to ``Bounds`` when the family outgrows ``cap``."""
    cache: dict[int, CutValue] = {}

    def f(side: VertexSet) -> CutValue:
        key = _normal(g, side)
        if key in cache:
            return cache[key]
        comp = g.complement(key)
        rows = key if key.bit_count() <= comp.bit_count() else comp
        try:
            value: CutValue = math.log2(family_size(g, rows, cap))
        except CapExceeded:
            s, _ = greedy_private_pairs(g, rows)
            vc = vc_exact(g, rows, limit)
            lo = max(s.bit_count(), vc.value)
            hi = min(key.bit_count(), comp.bit_count())
            if vc.exact:
                hi = min(hi, sauer_upper_bound(vc.value, g.complement(rows).bit_count()))
            value = Bounds(float(max(lo, math.log2(cap))), float(hi))
        cache[key] = value
        return value

    return f


def cutcar_function(g: Graph) -> Callable[[VertexSet], float]:
    return lambda side: float(cut_car(g, side))


def upper(value: CutValue) -> float:
    return value.upper if isinstance(value, Bounds) else value


def lower(value: CutValue) -> float:
    return value.lower if isinstance(value, Bounds) else value


def f_width(tree: DecompositionTree, f: Callable[[VertexSet], CutValue]) -> CutValue:
    """Max of ``f`` over the cuts of ``tree``; ``Bounds`` if any cut was inexact."""
    values = [f(c.side) for c in tree.all_cuts()]
    if not values:
        return 0.0
    if any(isinstance(v, Bounds) for v in values):
        return Bounds(max(lower(v) for v in values), max(upper(v) for v in values))
    return max(values)


def boolw(g: Graph, tree: DecompositionTree, cap: int = DEFAULT_CAP) -> CutValue:
    return f_width(tree, cutbool_function(g, cap))


def width_vector(tree: DecompositionTree, f) -> tuple[float, int]:
    """(max cut value, number of cuts attaining it), pessimistic on bounds."""
    values = [upper(f(c.side)) for c in tree.all_cuts()]
    if not values:
        return (0.0, 0)
    top = max(values)
    return (top, sum(1 for v in values if math.isclose(v, top, abs_tol=1e-9)))


def most_balanced_cut(tree: DecompositionTree) -> TreeCut | None:
    full = (1 << tree.n) - 1
    best = None
    for c in tree.all_cuts():
        small = min(c.side.bit_count(), (full & ~c.side).bit_count())
        if best is None or small > best[0]:
            best = (small, c)
    return None if best is None else best[1]


# --- exact boolean-width --------------------------------------------------------------

def exact_boolw(g: Graph, n_max: int = 8, cap: int = DEFAULT_CAP) -> tuple[float, DecompositionTree]:
    """Minimum boolean-width over all (2n-5)!! leaf-labeled cubic trees."""
    n = g.n
    if n > n_max:
        raise ValueError(f"exact boolean-width limited to n <= {n_max}, got {n}")
    if n <= 2:
        tree = tree_from_insertions(n, [])
        return float(upper(boolw(g, tree, cap))), tree
    f = cutbool_function(g, cap)
    best_value, best_choices = math.inf, None
    for sides, choices in iter_tree_cut_sides(n):
        width = 0.0
        for side in sides:
            width = max(width, upper(f(side)))
            if width >= best_value:
                break
        if width < best_value:
            best_value, best_choices = width, list(choices)
    return best_value, tree_from_insertions(n, best_choices)


# --- greedy bisection ---------------------------------------------------------------

def _split_score(f, part: VertexSet, rest: VertexSet) -> tuple[float, float]:
    a, b = upper(f(part)), upper(f(rest))
    return (max(a, b), a + b)


def _bisect(g: Graph, s: VertexSet, f, rng, max_passes: int) -> tuple[VertexSet, VertexSet]:
    verts = list(members(s))
    k = len(verts)
    perm = [verts[i] for i in rng.permutation(k)]
    half = k // 2
    part = sum(1 << v for v in perm[:half])
    lo = math.ceil(k / 3)
    hi = k - lo

    def score(p: VertexSet):
        return _split_score(f, p, s & ~p)

    cur = score(part)
    for _ in range(max_passes):
        improved = False
        for v in perm:
            cand = part ^ (1 << v)
            size = cand.bit_count()
            if not lo <= size <= hi:
                continue
            sc = score(cand)
            if sc < cur:
                part, cur, improved = cand, sc, True
        if not improved:
            for v in perm:
                if not part >> v & 1:
                    continue
                for u in perm:
                    if part >> u & 1:
                        continue
                    cand = part ^ (1 << v) ^ (1 << u)
                    sc = score(cand)
                    if sc < cur:
                        part, cur, improved = cand, sc, True
                        break
        if not improved:
            break
    return part, s & ~part


def build_greedy_tree(g: Graph, seed: int, cap: int = 1 << 14, max_passes: int = 4) -> DecompositionTree:
    """Recursive bisection tree, each split chosen by local search.

    Moves are single-vertex transfers, then pair exchanges when no transfer
    helps.

    Parts stay within a factor two of each other.  A split of ``S`` into
    ``P, Q`` is scored by the larger of cut-bool(P) and cut-bool(Q) in the
    whole graph, then their sum.  Inexact cuts are scored by their upper
    bound.
    """
    if g.n < 2:
        raise ValueError("greedy tree needs at least two vertices")
    rng = make_rng(seed)
    f = cutbool_function(g, cap)

    def build(s: VertexSet) -> Nested:
        if s.bit_count() == 1:
            return s.bit_length() - 1
        p, q = _bisect(g, s, f, rng, max_passes)
        return (build(p), build(q))

    return DecompositionTree.from_nested(build(g.full), g.n)


# --- local search ------------------------------------------------------------------

def _swap_leaves(tree: DecompositionTree, u: int, v: int) -> DecompositionTree:
    leaf_of = list(tree.leaf_of)
    leaf_of[u], leaf_of[v] = leaf_of[v], leaf_of[u]
    return DecompositionTree(tree.n, tree.edges, tuple(leaf_of), tree.num_nodes)


def _reinsert_leaf(tree: DecompositionTree, v: int, target: tuple[int, int]) -> DecompositionTree | None:
    """Detach the leaf of ``v`` and re-attach it by subdividing edge ``target``."""
    leaf = tree.leaf_of[v]
    (w,) = tree.neighbors(leaf)
    x, y = [z for z in tree.neighbors(w) if z != leaf]
    if w in target or leaf in target:
        return None
    kept = [e for e in tree.edges if leaf not in e and w not in e]
    kept.append((x, y))
    a, b = target
    if (a, b) not in kept and (b, a) not in kept:
        return None
    kept = [e for e in kept if e not in ((a, b), (b, a))]
    kept.extend([(a, w), (w, b), (w, leaf)])
    return DecompositionTree(tree.n, tuple(kept), tree.leaf_of, tree.num_nodes)


def _moves(tree: DecompositionTree) -> Iterator[DecompositionTree]:
    n = tree.n
    for u in range(n):
        for v in range(u + 1, n):
            yield _swap_leaves(tree, u, v)
    if n < 4:
        return
    for v in range(n):
        for e in tree.edges:
            moved = _reinsert_leaf(tree, v, e)
            if moved is not None:
                yield moved


def _better(vec: tuple[float, int], cur: tuple[float, int]) -> bool:
    if math.isclose(vec[0], cur[0], abs_tol=1e-9):
        return vec[1] < cur[1]
    return vec[0] < cur[0]


def local_search_improve(g: Graph, tree: DecompositionTree, budget: int = 2000,
                         cap: int = DEFAULT_CAP, f=None) -> DecompositionTree:
    """First-improvement local search over leaf swaps and leaf re-insertions.

    A move is taken only if it strictly lowers the width vector
    ``(max cut value, number of cuts at the max)``.  ``budget`` caps the
    number of candidate trees evaluated.
    """
    f = f or cutbool_function(g, cap)
    cur = width_vector(tree, f)
    spent = 0
    while spent < budget:
        for cand in _moves(tree):
            spent += 1
            vec = width_vector(cand, f)
            if _better(vec, cur):
                tree, cur = cand, vec
                break
            if spent >= budget:
                return tree
        else:
            return tree
    return tree
