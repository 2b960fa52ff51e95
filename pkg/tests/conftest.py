import itertools

import pytest

from boolwidth.graph import Graph, members


def brute_family(g: Graph, a: int) -> set[int]:
    """All N(X) & ~A over every subset X of A, computed directly."""
    comp = g.full & ~a
    vs = list(members(a))
    out = set()
    for r in range(len(vs) + 1):
        for xs in itertools.combinations(vs, r):
            s = 0
            for v in xs:
                s |= g.adj[v]
            out.add(s & comp)
    return out


@pytest.fixture
def p4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str):
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
