import re

import numpy as np
import pytest

from simplicial_filters import build_complex, infer_triangles, toy_complex

ACCEPTANCE_DETAILS = {}
_ACCEPTANCE_OUTCOMES = {}


def record_acceptance(num, detail):
    ACCEPTANCE_DETAILS[num] = detail


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if m and report.when == "call":
        _ACCEPTANCE_OUTCOMES[int(m.group(1))] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE_OUTCOMES):
        outcome = _ACCEPTANCE_OUTCOMES[num].upper().replace("PASSED", "PASS") \
            .replace("FAILED", "FAIL")
        detail = ACCEPTANCE_DETAILS.get(num, "")
        terminalreporter.write_line(f"criterion {num:2d}: {outcome}  {detail}")


def random_complex(rng, max_nodes=20, edge_prob=0.35, clique_fill=True):
    """Random order-2 complex; triangles are the 3-cliques when clique_fill."""
    nvert = int(rng.integers(5, max_nodes + 1))
    pairs = [(u, v) for u in range(nvert) for v in range(u + 1, nvert)]
    keep = rng.random(len(pairs)) < edge_prob
    edges = [p for p, k in zip(pairs, keep) if k]
    if not edges:
        edges = [(0, 1)]
    tris = infer_triangles(nvert, edges) if clique_fill else ()
    return build_complex(nvert, edges, tris)


@pytest.fixture
def toy():
    return toy_complex()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
