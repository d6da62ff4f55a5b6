import random
import sys

import pytest
from hypothesis import strategies as st

from rainbow_preorder.coloring import EdgeColoring
from rainbow_preorder.graphs import Graph


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("RAINBOW_PREORDER_CACHE", str(tmp_path / "verdicts.json"))


def random_coloring(n: int, rng: random.Random) -> EdgeColoring:
    """Palette size uniform in 1..|E|, each edge colored uniformly from it."""
    m = n * (n - 1) // 2
    p = rng.randint(1, max(m, 1))
    return EdgeColoring(n, tuple(rng.randint(1, p) for _ in range(m)))


@st.composite
def colorings(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    m = n * (n - 1) // 2
    p = draw(st.integers(1, max(m, 1)))
    return EdgeColoring(n, tuple(draw(st.lists(st.integers(1, p), min_size=m, max_size=m))))


@st.composite
def graphs(draw, min_n=1, max_n=7, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        # a random spanning tree keeps it connected
        for v in range(2, n + 1):
            u = draw(st.integers(1, v - 1))
            if (u, v) not in chosen:
                chosen.append((u, v))
    return Graph.from_edges(chosen, range(1, n + 1))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}")
