"""The compiled kernels must agree with the pure-Python reference bit for bit."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowsub import _kernels
from rainbowsub.constructions import complete_graph_1f, random_graph
from rainbowsub.expander import _tables
from rainbowsub.search import _color_bits, _forbidden
from strategies import proper_graphs

pytestmark = pytest.mark.skipif(_kernels.compiled is None, reason="compiled kernels not built")
py, cy = _kernels.python, _kernels.compiled


def _search_args(g, source, target, colors=None, phi0=(), max_len=-1, max_nodes=10**6):
    allowed, _ = _color_bits(g, colors)
    ip, nb, col = g.csr
    return (ip, nb, col, g.n, source, target, allowed, _forbidden(g, phi0), max_len, max_nodes)


def _same(a, b):
    assert a[0] == b[0] and a[2] == b[2]
    assert np.array_equal(np.asarray(a[1], dtype=np.uint8), np.asarray(b[1], dtype=np.uint8))
    assert list(a[3]) == list(b[3])


def test_backend_names():
    assert _kernels.BACKEND == "cython"
    assert set(_kernels.backends()) == {"python", "cython"}


@settings(max_examples=60)
@given(proper_graphs(min_n=2, max_n=10), st.data())
def test_rainbow_search_parity(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    t = data.draw(st.integers(-1, g.n - 1))
    max_len = data.draw(st.integers(-1, 4))
    phi0 = data.draw(st.sets(st.integers(0, g.n - 1), max_size=2))
    max_nodes = data.draw(st.sampled_from([3, 50, 10**6]))
    args = _search_args(g, s, t, None, phi0, max_len, max_nodes)
    _same(py.rainbow_search(*args), cy.rainbow_search(*args))


@pytest.mark.parametrize("n", [1, 5, 12])
def test_induced_edge_counts_parity(n):
    g = random_graph(n, 0.5, n)
    adj = np.array(g.adjmask, dtype=np.uint64)
    assert np.array_equal(py.induced_edge_counts(adj, n), cy.induced_edge_counts(adj, n))


@pytest.mark.parametrize("seed", range(6))
def test_expander_scan_parity(seed):
    g = random_graph(10, 0.3 + 0.1 * (seed % 3), seed)
    eps, max_u, max_nbr, budget = _tables(g, "critical")
    adj = np.array(g.adjmask, dtype=np.uint64)
    total = 1 << g.n
    for lo in range(1, total, 97):
        hi = min(lo + 97, total)
        a = py.expander_scan(adj, g.n, lo, hi, max_u, max_nbr, budget)
        b = cy.expander_scan(adj, g.n, lo, hi, max_u, max_nbr, budget)
        assert tuple(map(int, a)) == tuple(map(int, b))


def test_parity_on_dense_colors():
    g = complete_graph_1f(14)
    for t in (-1, 5):
        args = _search_args(g, 0, t, colors=set(g.colors[:6]))
        _same(py.rainbow_search(*args), cy.rainbow_search(*args))
