"""Empirical checks of the random-graph and bounded-degree width claims.

Each experiment returns a :class:`Table` of rows with a fixed schema and is
deterministic in its arguments.  Trial ``t`` uses seed ``seed ^ t``.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .cuts import (DEFAULT_CAP, DEFAULT_LIMIT, CapExceeded, cut_stats, family_size,
                   greedy_private_pairs, sauer_upper_bound, vc_exact)
from .decomposition import (Bounds, build_greedy_tree, build_random_tree, cutbool_function,
                            most_balanced_cut)
from .graph import Graph, gen_gnp, gen_random_regular, trial_seed

SCHEMA = 1


class ConfigError(ValueError):
    pass


@dataclass
class Table:
    experiment: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    violations: int = 0
    notes: list[str] = field(default_factory=list)

    def add(self, **values):
        self.rows.append([values[c] for c in self.columns])

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema={SCHEMA}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(x) for x in row])
        return buf.getvalue()


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def substream(seed: int, tag: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), tag])))


def expansion_k(n: int, p: float) -> int:
    if p <= 0:
        raise ConfigError("p must be positive")
    return math.ceil(2 * math.log(n) / p)


def counting_ceiling(n: int, k: int) -> float:
    """log2(2 * sum_{i<=k} C(n, i)), summed exactly."""
    return math.log2(2 * sum(math.comb(n, i) for i in range(min(k, n) + 1)))


# --- expansion of k-sets -----------------------------------------------------------

def cmd_expansion_check(n: int, p: float, samples: int, seed: int, chunk: int = 20_000) -> Table:
    """Sample uniform k-sets S of G(n, p) and test |N(S)| >= |complement(S)| - k."""
    if samples < 1:
        raise ConfigError("samples must be at least 1")
    k = expansion_k(n, p)
    if k >= n:
        raise ConfigError(f"k = {k} >= n = {n}: the expansion statement is vacuous")
    g = gen_gnp(n, p, seed)
    adj = g.adjacency_matrix().astype(np.int32)
    rng = substream(seed, 1)
    table = Table("expansion", ["experiment", "n", "p", "seed", "k", "samples", "violations",
                                "min_neighbors", "min_slack", "mean_slack", "witness"])
    need = n - k - k
    violations, witness = 0, None
    min_nb, slack_sum, done = n, 0, 0
    while done < samples:
        m = min(chunk, samples - done)
        keys = rng.random((m, n))
        chosen = np.argpartition(keys, k - 1, axis=1)[:, :k]
        member = np.zeros((m, n), dtype=bool)
        np.put_along_axis(member, chosen, True, axis=1)
        hit = (member.astype(np.int32) @ adj) > 0
        nbrs = (hit & ~member).sum(axis=1)
        bad = np.nonzero(nbrs < need)[0]
        violations += int(bad.size)
        if bad.size and witness is None:
            witness = " ".join(str(v) for v in np.nonzero(member[bad[0]])[0])
        min_nb = min(min_nb, int(nbrs.min()))
        slack_sum += int(nbrs.sum()) - need * m
        done += m
    table.violations = violations
    table.add(experiment="expansion", n=n, p=float(p), seed=seed, k=k, samples=samples,
              violations=violations, min_neighbors=min_nb, min_slack=min_nb - need,
              mean_slack=slack_sum / samples, witness=witness)
    return table


# --- boolean-width growth on G(n, p) ------------------------------------------------

def sandwich_violation(n: int, size_complement: int, size_a: int, vc: int, cutbool: float) -> bool:
    eps = 1e-9
    if vc > cutbool + eps:
        return True
    if vc >= 1 and cutbool > vc * math.log2(n) + eps:
        return True
    if cutbool > sauer_upper_bound(vc, size_complement) + eps:
        return True
    return cutbool > sauer_upper_bound(vc, size_a) + eps


def _tree_summary(g: Graph, tree, f, ceiling: float, limit: int) -> dict:
    exact_cuts = inexact = over = chain = 0
    lo = hi = 0.0
    top_exact = 0.0
    for c in tree.all_cuts():
        value = f(c.side)
        if isinstance(value, Bounds):
            inexact += 1
            lo, hi = max(lo, value.lower), max(hi, value.upper)
            continue
        exact_cuts += 1
        lo, hi = max(lo, value), max(hi, value)
        top_exact = max(top_exact, value)
        if value > ceiling + 1e-9:
            over += 1
        vc = vc_exact(g, c.side, limit)
        comp = g.complement(c.side)
        if vc.exact and sandwich_violation(g.n, comp.bit_count(), c.side.bit_count(), vc.value, value):
            chain += 1
        s, _ = greedy_private_pairs(g, c.side)
        if s.bit_count() > value + 1e-9:
            chain += 1
    return dict(lower=lo, upper=hi, exact_cuts=exact_cuts, inexact_cuts=inexact,
                over=over, chain=chain, top=top_exact)


def cmd_gnp_growth(ns: list[int], p: float, trials: int, seed: int, cap: int = DEFAULT_CAP,
                   limit: int = DEFAULT_LIMIT, greedy: bool = True) -> Table:
    """Width of random and greedy trees of G(n, p) against the counting ceiling."""
    if trials < 1 or not ns:
        raise ConfigError("need at least one trial and one n")
    table = Table("growth", ["experiment", "n", "p", "seed", "trial", "tree", "k", "ceiling",
                             "width_lower", "width_upper", "exact_cuts", "inexact_cuts",
                             "max_exact_cutbool", "ceiling_violations", "chain_violations"])
    for n in ns:
        k = expansion_k(n, p)
        ceiling = counting_ceiling(n, k)
        for t in range(trials):
            s = trial_seed(seed, t)
            g = gen_gnp(n, p, s)
            f = cutbool_function(g, cap, limit)
            trees = [("random", build_random_tree(g, s))]
            if greedy and n >= 2:
                trees.append(("greedy", build_greedy_tree(g, s)))
            for name, tree in trees:
                r = _tree_summary(g, tree, f, ceiling, limit)
                table.violations += r["over"] + r["chain"]
                table.add(experiment="growth", n=n, p=float(p), seed=seed, trial=t, tree=name,
                          k=k, ceiling=ceiling, width_lower=r["lower"], width_upper=r["upper"],
                          exact_cuts=r["exact_cuts"], inexact_cuts=r["inexact_cuts"],
                          max_exact_cutbool=r["top"], ceiling_violations=r["over"],
                          chain_violations=r["chain"])
    if greedy:
        up = table.column("width_upper")
        pairs = list(zip(up[0::2], up[1::2]))
        wins = sum(1 for rnd, grd in pairs if grd <= rnd + 1e-9)
        table.notes.append(f"greedy <= random width in {wins}/{len(pairs)} trials")
    return table


# --- bounded degree lower bounds -----------------------------------------------------

def cmd_regular_lower(ns: list[int], d: int, trials: int, seed: int, cap: int = DEFAULT_CAP,
                      limit: int = DEFAULT_LIMIT) -> Table:
    """Certificates cut-car/(2d^2) on the most balanced cut of heuristic trees."""
    if trials < 1 or not ns:
        raise ConfigError("need at least one trial and one n")
    for n in ns:
        if n * d % 2:
            raise ConfigError(f"n*d odd for n={n}, d={d}")
    table = Table("regular", ["experiment", "n", "d", "seed", "trial", "tree", "size_a",
                              "cut_car", "certificate", "greedy_pairs", "cutbool_lower",
                              "cutbool_exact", "violation"])
    scale = 2 * d * d
    for n in ns:
        for t in range(trials):
            s = trial_seed(seed, t)
            g = gen_random_regular(n, d, s)
            for name, tree in (("random", build_random_tree(g, s)), ("greedy", build_greedy_tree(g, s))):
                c = most_balanced_cut(tree)
                st = cut_stats(g, c.side, cap, limit)
                pairs = greedy_private_pairs(g, c.side)[0].bit_count()
                cert = st.cut_car / scale
                bad = st.cutbool_lower + 1e-9 < cert or pairs + 1e-9 < cert
                if st.cutbool_exact is not None:
                    bad = bad or scale * st.cutbool_exact + 1e-9 < st.cut_car
                    bad = bad or st.cutbool_exact + 1e-9 < pairs
                table.violations += bad
                table.add(experiment="regular", n=n, d=d, seed=seed, trial=t, tree=name,
                          size_a=min(st.size_a, st.size_complement), cut_car=st.cut_car,
                          certificate=cert, greedy_pairs=pairs, cutbool_lower=st.cutbool_lower,
                          cutbool_exact=st.cutbool_exact, violation=bad)
    for n in ns:
        certs = [c for c, m in zip(table.column("certificate"), table.column("n")) if m == n]
        table.notes.append(f"n={n}: median certificate {statistics.median(certs):.4f}")
    return table


def median_certificate(table: Table, n: int) -> float:
    return statistics.median(c for c, m in zip(table.column("certificate"), table.column("n")) if m == n)


# --- VC sandwich ---------------------------------------------------------------------

def random_cut(rng: np.random.Generator, n: int) -> int:
    while True:
        bits = rng.integers(0, 2, size=n)
        mask = int(sum(1 << i for i in np.nonzero(bits)[0].tolist()))
        if 0 < mask < (1 << n) - 1:
            return mask


def cmd_sandwich(n: int, p: float, cuts: int, seed: int, graphs: int = 10,
                 cap: int = DEFAULT_CAP, limit: int = DEFAULT_LIMIT, graph: Graph | None = None) -> Table:
    """VC(A) <= cut-bool(A) <= VC(A) log2 n and the Sauer bound, on random cuts."""
    if n < 2 or cuts < 1 or graphs < 1:
        raise ConfigError("need n >= 2, cuts >= 1, graphs >= 1")
    table = Table("sandwich", ["experiment", "n", "p", "seed", "graph", "cut", "size_a",
                               "family_size", "family_size_complement", "cutbool", "vc",
                               "sauer", "left_slack", "right_slack", "symmetric", "violation"])
    per_graph = [cuts // graphs + (1 if i < cuts % graphs else 0) for i in range(graphs)]
    idx = 0
    for gi, count in enumerate(per_graph):
        if count == 0:
            continue
        g = graph if graph is not None else gen_gnp(n, p, trial_seed(seed, gi))
        rng = substream(seed, 100 + gi)
        for _ in range(count):
            a = random_cut(rng, g.n)
            comp = g.complement(a)
            try:
                fa, fb = family_size(g, a, cap), family_size(g, comp, cap)
            except CapExceeded:
                idx += 1
                continue
            vc = vc_exact(g, a, limit)
            cb = math.log2(fa)
            sauer = sauer_upper_bound(vc.value, comp.bit_count())
            sym = fa == fb
            bad = (not sym) or (vc.exact and sandwich_violation(
                g.n, comp.bit_count(), a.bit_count(), vc.value, cb))
            table.violations += bad
            table.add(experiment="sandwich", n=g.n, p=float(p), seed=seed, graph=gi, cut=idx,
                      size_a=a.bit_count(), family_size=fa, family_size_complement=fb,
                      cutbool=cb, vc=vc.value if vc.exact else None, sauer=sauer,
                      left_slack=cb - vc.value,
                      right_slack=vc.value * math.log2(g.n) - cb,
                      symmetric=sym, violation=bad)
            idx += 1
    return table
