"""Time the compiled kernels against the pure-Python reference.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--quick]
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from rainbowsub import _kernels
from rainbowsub.constructions import complete_graph_1f, random_graph
from rainbowsub.expander import _tables
from rainbowsub.graph import build_graph
from rainbowsub.search import _color_bits, _forbidden


def _search_case(g, source, colors=None):
    allowed, _ = _color_bits(g, colors)
    ip, nb, col = g.csr
    forb = _forbidden(g, ())
    return lambda k: k.rainbow_search(ip, nb, col, g.n, source, -1, allowed, forb, -1, 10 ** 9)


def _blocked_tail(k: int):
    # the last vertex sits behind a repeated color, so the search cannot stop
    # early and must exhaust every (vertex, colors) state
    base = complete_graph_1f(k)
    c = k - 1
    return build_graph(k + 3, list(base.edges) + [(0, k, c), (k, k + 1, c + 1), (k + 1, k + 2, c)])


def _edge_count_case(g):
    adj = np.array(g.adjmask, dtype=np.uint64)
    return lambda k: k.induced_edge_counts(adj, g.n)


def _scan_case(g):
    _, max_u, max_nbr, budget = _tables(g, "critical")
    adj = np.array(g.adjmask, dtype=np.uint64)
    return lambda k: k.expander_scan(adj, g.n, 1, 1 << g.n, max_u, max_nbr, budget)


def cases(quick: bool):
    n_rp = 9 if quick else 11
    n_bt = 10 if quick else 14
    n_ec = 14 if quick else 18
    n_sc = 10 if quick else 13
    k = complete_graph_1f(10)
    return [
        (f"rainbow_search random G({n_rp}, 0.6)", _search_case(random_graph(n_rp, 0.6, 1), 0)),
        ("rainbow_search K_10, 6 colors", _search_case(k, 0, set(k.colors[:6]))),
        (f"rainbow_search K_{n_bt} + blocked tail", _search_case(_blocked_tail(n_bt), 1)),
        (f"induced_edge_counts n={n_ec}", _edge_count_case(random_graph(n_ec, 0.5, 2))),
        (f"expander_scan K_{n_sc - n_sc % 2} (no violation)", _scan_case(complete_graph_1f(n_sc - n_sc % 2))),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    args = ap.parse_args(argv)
    if _kernels.compiled is None:
        print("compiled kernels are not available; build with pip install -e .", file=sys.stderr)
        return 1
    print(f"{'case':44s} {'python (s)':>11s} {'cython (s)':>11s} {'speedup':>8s}")
    for name, fn in cases(args.quick):
        py = min(timeit.repeat(lambda: fn(_kernels.python), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: fn(_kernels.compiled), number=1, repeat=args.repeat))
        print(f"{name:44s} {py:11.4f} {cy:11.4f} {py / cy:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
