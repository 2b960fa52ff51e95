"""Cut functions of a single cut {A, complement(A)}.

``A`` is a vertex bitmask.  The union family of a cut is the set of all
``N(X) & ~A`` for ``X`` a subset of ``A``; cut-bool is log2 of its size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import Graph, VertexSet, members

DEFAULT_CAP = 1 << 20
DEFAULT_LIMIT = 200_000


class CapExceeded(Exception):
    """Signal that an enumeration stopped at its size cap.

    ``partial`` is the number of members found when enumeration stopped.
    """

    def __init__(self, partial: int, cap: int, side: VertexSet | None = None):
        super().__init__(f"family size exceeded cap {cap} (partial count {partial})")
        self.partial = partial
        self.cap = cap
        self.side = side


def cross_rows(g: Graph, a: VertexSet) -> list[int]:
    """Rows ``N(v) & ~A`` for ``v`` in ``A``, in vertex order."""
    comp = g.complement(a)
    return [g.adj[v] & comp for v in members(a)]


def cut_car(g: Graph, a: VertexSet) -> int:
    comp = g.complement(a)
    return sum((g.adj[v] & comp).bit_count() for v in members(a))


def enumerate_union_family(g: Graph, a: VertexSet, cap: int = DEFAULT_CAP) -> set[int]:
    """All distinct unions of cross rows of ``A`` (the empty union included).

    Closure is row by row: after processing a row ``r`` the family holds
    every union of the rows seen so far, so ``F | {f | r : f in F}`` is
    the closure over one more generator.  Raises :class:`CapExceeded` as
    soon as the family outgrows ``cap``.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    family = {0}
    for row in set(cross_rows(g, a)):
        if not row or row in family:
            continue
        new = {f | row for f in family}
        family |= new
        if len(family) > cap:
            raise CapExceeded(len(family), cap, a)
    return family


def family_size(g: Graph, a: VertexSet, cap: int = DEFAULT_CAP) -> int:
    return len(enumerate_union_family(g, a, cap))


def cut_bool_exact(g: Graph, a: VertexSet, cap: int = DEFAULT_CAP) -> float:
    return math.log2(family_size(g, a, cap))


def sauer_upper_bound(vc: int, m: int) -> float:
    """log2 of sum_{i<=vc} C(m, i), summed exactly before the logarithm."""
    if vc < 0 or m < 0:
        raise ValueError("vc and m must be non-negative")
    return math.log2(sum(math.comb(m, i) for i in range(min(vc, m) + 1)))


def greedy_private_pairs(g: Graph, a: VertexSet) -> tuple[VertexSet, VertexSet]:
    """Greedy paired sets ``S`` in A and ``S'`` across, with private partners.

    Repeatedly take the lexicographically smallest surviving cut edge
    ``(v, u)``, put ``v`` in ``S`` and ``u`` in ``S'``, then delete
    ``N(v)`` on the far side and ``N(u)`` on the near side.  Every ``u`` in
    ``S'`` has exactly its own partner as neighbor inside ``S``.
    """
    comp = g.complement(a)
    live_a, live_b = a, comp
    s = s_prime = 0
    while True:
        pick = None
        for v in members(live_a):
            row = g.adj[v] & live_b
            if row:
                pick = v, (row & -row).bit_length() - 1
                break
        if pick is None:
            return s, s_prime
        v, u = pick
        s |= 1 << v
        s_prime |= 1 << u
        live_b &= ~g.adj[v]
        live_a &= ~g.adj[u]


def is_permutation_submatrix(g: Graph, rows: VertexSet, cols: VertexSet) -> bool:
    """True iff the rows x cols block of the adjacency matrix is a permutation matrix."""
    if rows.bit_count() != cols.bit_count():
        return False
    for v in members(rows):
        if (g.adj[v] & cols).bit_count() != 1:
            return False
    for u in members(cols):
        if (g.adj[u] & rows).bit_count() != 1:
            return False
    return True


@dataclass
class VCResult:
    value: int
    exact: bool
    rows: VertexSet
    cols: VertexSet
    nodes: int


def _matching_bound(g: Graph, rows: VertexSet, cols: VertexSet) -> int:
    # maximum bipartite matching between candidate rows and columns (augmenting paths)
    match_col: dict[int, int] = {}

    def augment(v: int, seen: set[int]) -> bool:
        for u in members(g.adj[v] & cols):
            if u in seen:
                continue
            seen.add(u)
            if u not in match_col or augment(match_col[u], seen):
                match_col[u] = v
                return True
        return False

    size = 0
    for v in members(rows):
        if augment(v, set()):
            size += 1
    return size


def vc_exact(g: Graph, a: VertexSet, limit: int = DEFAULT_LIMIT) -> VCResult:
    """Largest permutation submatrix of the A x complement(A) adjacency block.

    Branch and bound on the lowest-numbered candidate row: either it is
    left out, or it is paired with one of its candidate columns.  Pairing
    ``(v, u)`` removes every candidate row adjacent to ``u`` and every
    candidate column adjacent to ``v``.  The bound is a maximum matching
    on the surviving candidates.  Seeded with the greedy private pairs.
    When more than ``limit`` search nodes are expanded the best pairing
    found so far is returned with ``exact=False``.
    """
    comp = g.complement(a)
    s, s_prime = greedy_private_pairs(g, a)
    best = [s.bit_count(), s, s_prime]
    nodes = 0
    exhausted = False

    def search(cand_r: VertexSet, cand_c: VertexSet, depth: int, rows: VertexSet, cols: VertexSet):
        nonlocal nodes, exhausted
        nodes += 1
        if nodes > limit:
            exhausted = True
            return
        # drop rows with no candidate column and columns with no candidate row
        useful_r = 0
        useful_c = 0
        for v in members(cand_r):
            row = g.adj[v] & cand_c
            if row:
                useful_r |= 1 << v
                useful_c |= row
        if depth > best[0]:
            best[:] = [depth, rows, cols]
        if not useful_r:
            return
        if depth + min(useful_r.bit_count(), useful_c.bit_count()) <= best[0]:
            return
        if depth + _matching_bound(g, useful_r, useful_c) <= best[0]:
            return
        v = (useful_r & -useful_r).bit_length() - 1
        for u in members(g.adj[v] & useful_c):
            search(useful_r & ~g.adj[u] & ~(1 << v), useful_c & ~g.adj[v],
                   depth + 1, rows | 1 << v, cols | 1 << u)
            if exhausted:
                return
        search(useful_r & ~(1 << v), useful_c, depth, rows, cols)

    search(a, comp, 0, 0, 0)
    return VCResult(best[0], not exhausted, best[1], best[2], nodes)


def shattered(family: set[int], t: VertexSet) -> bool:
    traces = {f & t for f in family}
    return len(traces) == 1 << t.bit_count()


@dataclass
class CutStats:
    n: int
    size_a: int
    size_complement: int
    cut_car: int
    family_size: int | None
    cutbool_exact: float | None
    vc_lower: int
    vc_exact: int | None
    cutbool_lower: float
    cutbool_upper: float

    CSV_FIELDS = ("n", "size_a", "cut_car", "family_size", "cutbool_exact",
                  "vc_lower", "vc_exact", "cutbool_lower", "cutbool_upper")

    def csv_row(self) -> list[str]:
        return [
            str(self.n), str(self.size_a), str(self.cut_car),
            _fmt(self.family_size), _fmt(self.cutbool_exact),
            str(self.vc_lower), _fmt(self.vc_exact),
            _fmt(self.cutbool_lower), _fmt(self.cutbool_upper),
        ]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def cut_stats(g: Graph, a: VertexSet, cap: int = DEFAULT_CAP, limit: int = DEFAULT_LIMIT) -> CutStats:
    comp = g.complement(a)
    size_a, size_c = a.bit_count(), comp.bit_count()
    try:
        fsize = family_size(g, a, cap)
        exact = math.log2(fsize)
    except CapExceeded:
        fsize = exact = None
    s, _ = greedy_private_pairs(g, a)
    vc = vc_exact(g, a, limit)
    vc_lower = max(s.bit_count(), vc.value)
    vc_value = vc.value if vc.exact else None
    lower = float(max(vc_lower, s.bit_count()))
    upper = float(min(size_a, size_c))
    if vc_value is not None:
        upper = min(upper, sauer_upper_bound(vc_value, size_c))
    return CutStats(g.n, size_a, size_c, cut_car(g, a), fsize, exact,
                    vc_lower, vc_value, lower, upper)
