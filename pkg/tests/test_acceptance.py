"""Exit criteria; each test records one PASS/FAIL line shown in the summary."""

import itertools
import math
import time

import pytest

from boolwidth import cli
from boolwidth import experiments as ex
from boolwidth.cuts import cut_car, family_size, greedy_private_pairs
from boolwidth.decomposition import build_random_tree, exact_boolw
from boolwidth.graph import complete_graph, gen_gnp, gen_random_regular, make_rng, star_graph
from boolwidth.sigmarho import (FIXTURE_PROBLEMS, CofiniteSet, brute_force_sigma_rho, d_of_set,
                                membership_truncated, solve_sigma_rho)

from conftest import brute_family, record

INSTANCES = 200


@pytest.fixture(scope="module")
def oracle_runs():
    start = time.perf_counter()
    runs = []
    for name, prob in FIXTURE_PROBLEMS.items():
        for i in range(INSTANCES):
            seed = 10_000 * (list(FIXTURE_PROBLEMS).index(name) + 1) + i
            rng = make_rng(seed)
            n = int(rng.integers(1, 13))
            p = (0.2, 0.5)[i % 2]
            g = gen_gnp(n, p, seed)
            tree = build_random_tree(g, seed ^ 0x5EED)
            runs.append((name, prob, g, solve_sigma_rho(g, tree, prob), brute_force_sigma_rho(g, prob)))
    return runs, time.perf_counter() - start


def test_criterion_1_oracle_equivalence(oracle_runs):
    runs, elapsed = oracle_runs
    mismatches = [(name, g.n) for name, _, g, sol, ref in runs
                  if sol.size != ref.size or sol.feasible != ref.feasible]
    ok = not mismatches and elapsed < 120
    record(1, ok, f"{len(runs)} instances, {len(mismatches)} mismatches, {elapsed:.1f}s (< 120s)")
    assert not mismatches
    assert elapsed < 120


def test_criterion_2_witness_soundness(oracle_runs):
    runs, _ = oracle_runs
    witnesses = [(prob, g, sol) for _, prob, g, sol, _ in runs if sol.feasible]
    bad = sum(1 for prob, g, sol in witnesses
              if not prob.is_solution(g, sol.witness) or sol.witness.bit_count() != sol.size)
    record(2, bad == 0, f"{len(witnesses)} witnesses checked directly, {bad} unsound")
    assert bad == 0


@pytest.fixture(scope="module")
def sandwich_table():
    return ex.cmd_sandwich(18, 0.5, 1000, 2024, graphs=10)


def test_criterion_3_vc_sandwich(sandwich_table):
    t = sandwich_table
    n = 18
    violations = 0
    for vc, cb, sauer in zip(t.column("vc"), t.column("cutbool"), t.column("sauer")):
        assert vc is not None, "VC search hit its node limit"
        if vc > cb + 1e-9 or cb > sauer + 1e-9 or (vc >= 1 and cb > vc * math.log2(n) + 1e-9):
            violations += 1
    ok = len(t.rows) >= 1000 and violations == 0
    record(3, ok, f"{len(t.rows)} exact cuts of G(18, 0.5), {violations} violations")
    assert ok


def test_criterion_4_symmetry(sandwich_table):
    t = sandwich_table
    bad = sum(1 for a, b in zip(t.column("family_size"), t.column("family_size_complement")) if a != b)
    record(4, bad == 0, f"{len(t.rows)} cuts, {bad} asymmetric family sizes")
    assert bad == 0


def test_criterion_5_degree_chain():
    checked = bad = 0
    for gi in range(25):
        g = gen_random_regular(24, 3, 77 + gi)
        rng = ex.substream(gi, 5)
        for _ in range(20):
            a = ex.random_cut(rng, g.n)
            size = family_size(g, a)
            cb = math.log2(size)
            s, _ = greedy_private_pairs(g, a)
            if 18 * cb + 1e-9 < cut_car(g, a) or cb + 1e-9 < s.bit_count():
                bad += 1
            checked += 1
    record(5, checked >= 500 and bad == 0, f"{checked} cuts of random 3-regular n=24, {bad} violations")
    assert checked >= 500 and bad == 0


def test_criterion_6_counting_ceiling():
    t = ex.cmd_gnp_growth([16, 20, 24, 28], 0.5, 20, 31)
    over = sum(t.column("ceiling_violations"))
    exact = sum(t.column("exact_cuts"))
    record(6, over == 0 and exact > 0,
           f"{exact} exact cuts over n in 16..28 x 20 trials, {over} above ceiling; {t.notes[0]}")
    assert exact > 0
    assert over == 0


def test_criterion_7_expansion():
    t = ex.cmd_expansion_check(40, 0.5, 100_000, 1)
    row = dict(zip(t.columns, t.rows[0]))
    record(7, t.violations == 0,
           f"k={row['k']}, {row['samples']} samples, {t.violations} violations, min slack {row['min_slack']}"
           + (f", witness {row['witness']}" if row["witness"] else ""))
    assert t.violations == 0


def _rooted_bipartitions(vs):
    if len(vs) == 1:
        yield vs[0]
        return
    first, rest = vs[0], vs[1:]
    for r in range(len(rest)):
        for left in itertools.combinations(rest, r):
            right = [v for v in rest if v not in left]
            for a in _rooted_bipartitions([first, *left]):
                for b in _rooted_bipartitions(right):
                    yield (a, b)


def _sides(t):
    if isinstance(t, int):
        return 1 << t, [1 << t]
    ma, la = _sides(t[0])
    mb, lb = _sides(t[1])
    return ma | mb, la + lb + [ma | mb]


def independent_boolw(g) -> float:
    best = math.inf
    for t in _rooted_bipartitions(list(range(g.n))):
        _, sides = _sides(t)
        width = max(math.log2(len(brute_family(g, s))) for s in sides if s != g.full)
        best = min(best, width)
    return best


def test_criterion_8_exact_boolw():
    cliques = all(exact_boolw(complete_graph(n))[0] == 1 for n in range(2, 8))
    stars = all(exact_boolw(star_graph(m))[0] == 1 for m in range(1, 7))
    mismatches = 0
    for seed in range(20):
        rng = make_rng(seed + 400)
        n = int(rng.integers(2, 7))
        g = gen_gnp(n, float(rng.choice([0.3, 0.5, 0.7])), seed)
        if not math.isclose(exact_boolw(g)[0], independent_boolw(g)):
            mismatches += 1
    ok = cliques and stars and mismatches == 0
    record(8, ok, f"K_2..K_7 ok={cliques}, K_1,1..K_1,6 ok={stars}, {mismatches}/20 oracle mismatches")
    assert ok


def test_criterion_9_d_of_set():
    fixtures = [CofiniteSet.naturals(), CofiniteSet.finite(0), CofiniteSet.at_least(1),
                CofiniteSet.at_least(2), CofiniteSet.finite(1, 2), CofiniteSet(True, frozenset({1}))]
    fixtures += [CofiniteSet.finite(*range(p + 1)) for p in range(6)]
    ok = d_of_set(CofiniteSet.naturals()) == 0 and d_of_set(CofiniteSet.finite(0)) == 1
    ok = ok and all(d_of_set(CofiniteSet.finite(*range(p + 1))) == p + 1 for p in range(6))
    wrong = sum(1 for mu in fixtures for c in range(11)
                if membership_truncated(min(c, d_of_set(mu)), d_of_set(mu), mu) != (c in mu))
    record(9, ok and wrong == 0, f"d values ok={ok}, {wrong} truncated-membership errors over {len(fixtures)} sets")
    assert ok and wrong == 0


def test_criterion_10_determinism(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    assert cli.main(["gen", "gnp", "-n", "14", "-p", "0.4", "--seed", "3", "--out", str(graph)]) == 0
    tree = tmp_path / "t.txt"
    assert cli.main(["decompose", str(graph), "--seed", "3", "--out", str(tree)]) == 0
    commands = [
        ["gen", "gnp", "-n", "20", "-p", "0.3"],
        ["gen", "regular", "-n", "20", "-d", "3"],
        ["cutstats", str(graph), "--trials", "5"],
        ["decompose", str(graph), "--method", "greedy", "--improve", "50"],
        ["decompose", str(graph), "--method", "random"],
        ["width", str(graph), str(tree)],
        ["solve", str(graph), "pdom:2", "--tree", str(tree)],
        ["exp-expansion", "-n", "40", "--samples", "20000"],
        ["exp-growth", "--ns", "16,20", "--trials", "3"],
        ["exp-regular", "--ns", "20,30", "--trials", "3"],
        ["exp-sandwich", "-n", "16", "--cuts", "100"],
    ]
    differing = []
    for argv in commands:
        blobs = []
        for i in range(2):
            out = tmp_path / f"{argv[0]}_{i}.out"
            code = cli.main(argv + ["--seed", "11", "--out", str(out)])
            printed = capsys.readouterr().out
            blobs.append((code, out.read_bytes() if out.exists() else b"", printed))
        if blobs[0] != blobs[1]:
            differing.append(argv[0])
    record(10, not differing, f"{len(commands)} commands run twice, differing: {differing or 'none'}")
    assert not differing
