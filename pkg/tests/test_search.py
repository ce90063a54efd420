import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import rainbow_cycles, rainbow_paths_between, rp_oracle
from rainbowsub.constructions import complete_graph_1f, hypercube, random_graph, sidon_graph
from rainbowsub.graph import build_graph
from rainbowsub.groups import CyclicGroup
from rainbowsub.search import (BudgetExhausted, NotFound, RainbowPath, SearchBudget, SubdivisionCertificate,
                               WitnessTree, default_length_bound, find_rainbow_cycle, find_subdivision,
                               join_witnesses, path_problem, rainbow_path, rp_set, shortcut,
                               validate_certificate)
from strategies import proper_graphs

EXACT = SearchBudget(mode="exact")
WITNESS = SearchBudget(mode="witness")


def test_rainbow_path_examples(triangle, cube):
    p = rainbow_path(triangle, 0, 1, max_len=2)
    assert p.vertices == (0, 1) and p.length == 1
    p = rainbow_path(cube, 0, 7)
    assert p.length == 3 and sorted(p.colors) == [1, 2, 4]
    assert len(rainbow_paths_between(cube, 0, 7, max_len=3)) == 6
    assert rainbow_path(cube, 0, 3, A=[1]) is None


def test_rainbow_path_respects_forbidden(cube):
    p = rainbow_path(cube, 0, 3, phi0=[1])
    assert p is not None and 1 not in p.vertices
    assert rainbow_path(cube, 0, 3, phi0=[1, 2], max_len=2) is None


def test_rp_set_examples(triangle, cube):
    assert rp_set(cube, 0, A=[]) == {0}
    assert rp_set(triangle, 0) == {0, 1, 2}
    # dense colors 0 and 1 of the cube are the basis vectors 1 and 2
    assert rp_set(cube, 0, A=[1, 2]) == {0, 1, 2, 3}
    assert rp_set(cube, 0, A=[1, 2], budget=WITNESS) == {0, 1, 2, 3}
    assert rp_oracle(cube, 0, colors={1, 2}) == {0, 1, 2, 3}


def test_rp_phi1_removes_colors(cube):
    assert rp_set(cube, 0, phi1=[4]) == rp_set(cube, 0, A=[1, 2])


def test_budget_exhaustion_is_explicit():
    # vertex 14 sits behind a repeated color, so the search cannot stop early
    k = complete_graph_1f(12)
    g = build_graph(15, list(k.edges) + [(0, 12, 11), (12, 13, 12), (13, 14, 11)])
    with pytest.raises(BudgetExhausted):
        rp_set(g, 0, budget=SearchBudget(max_nodes=5, mode="exact"))
    assert 0 in rp_set(g, 0, budget=SearchBudget(max_nodes=5, mode="hybrid"))
    with pytest.raises(ValueError):
        SearchBudget(max_nodes=0)


def test_cycle_examples(triangle, cube):
    c = find_rainbow_cycle(triangle)
    assert c.is_cycle and c.length == 3 and path_problem(triangle, c) is None
    assert find_rainbow_cycle(cube) is None
    assert rainbow_cycles(cube) == []


def test_sidon_graph_cycles():
    g = sidon_graph(CyclicGroup(15), [0, 1, 3, 7])
    assert find_rainbow_cycle(g, 4) is None
    g2 = sidon_graph(CyclicGroup(15), [0, 1, 2, 3])
    c = find_rainbow_cycle(g2, 4)
    assert c is not None and c.length == 4 and path_problem(g2, c) is None


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_hypercubes_have_no_rainbow_cycle(k):
    assert find_rainbow_cycle(hypercube(k), k) is None


def test_path_problem_reasons(triangle):
    assert path_problem(triangle, RainbowPath((0, 1), (0,))) is None
    assert path_problem(triangle, RainbowPath((0, 1), (1,))) == "WrongColor"
    assert path_problem(triangle, RainbowPath((0, 1, 2), (0,))) == "ShapeMismatch"
    assert path_problem(triangle, RainbowPath((0, 5), (0,))) == "VertexOutOfRange"
    assert path_problem(triangle, RainbowPath((0, 1, 0), (0, 0))) in ("ColorReuse", "RepeatedVertex")
    sq = build_graph(4, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 0, 3)])
    assert path_problem(sq, RainbowPath((0, 1, 2, 3), (0, 1, 2), True)) == "NotACycle"
    with pytest.raises(ValueError):
        RainbowPath((0, 1, 0), (0, 0), True)
    assert path_problem(sq, RainbowPath((0, 1, 2, 3, 0, 1), (0, 1, 2, 3, 0))) in ("ColorReuse", "RepeatedVertex")


def test_shortcut_removes_loops():
    g = build_graph(5, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 1, 3), (1, 4, 4)])
    p = shortcut(g, [0, 1, 2, 3, 1, 4])
    assert p.vertices == (0, 1, 4) and path_problem(g, p) is None


def test_join_witnesses_cuts_at_first_shared_vertex():
    p1 = RainbowPath((0, 1, 2, 3), (10, 11, 12))
    p2 = RainbowPath((5, 2, 3), (20, 21))
    j = join_witnesses(p1, p2)
    assert j.vertices == (0, 1, 2, 5) and j.colors == (10, 11, 20)


def test_subdivision_k4_t3(k4):
    cert = find_subdivision(k4, 3, hubs=[0, 1, 2], hub_rule="given")
    assert validate_certificate(cert, k4)
    assert all(p.length in (1, 2) for p in cert.paths)


def test_subdivision_t2_is_a_path(cube):
    cert = find_subdivision(cube, 2, hub_rule="given", hubs=[0, 7])
    assert validate_certificate(cert, cube) and len(cert.paths) == 1


@pytest.mark.parametrize("seed", range(3))
def test_subdivision_k16(seed):
    g = complete_graph_1f(16)
    cert = find_subdivision(g, 4, budget=SearchBudget(seed=seed, mode="hybrid"))
    assert validate_certificate(cert, g)
    assert max(p.length for p in cert.paths) <= cert.length_bound == default_length_bound(16)


def test_subdivision_not_found_reports_progress(cube):
    with pytest.raises(NotFound) as exc:
        find_subdivision(cube, 5, budget=SearchBudget(max_retries=2, mode="witness"), len_bound=1)
    assert isinstance(exc.value.completed, dict)


def test_validator_reasons(k4):
    cert = find_subdivision(k4, 3, hubs=[0, 1, 2], hub_rule="given")
    d = cert.to_json()
    assert SubdivisionCertificate.from_json(d) == cert
    p01 = RainbowPath((0, 1), (k4.color(0, 1),))
    p02 = RainbowPath((0, 2), (k4.color(0, 2),))
    p12 = RainbowPath((1, 2), (k4.color(1, 2),))
    ok = SubdivisionCertificate(3, (0, 1, 2), (p01, p02, p12), 3)
    assert validate_certificate(ok, k4).ok
    # K_4's coloring pairs 0-1 with 2-3, so reuse that color on a second path
    c = k4.color(0, 1)
    partner = next((u, v) for u, v, col in k4.edges if col == c and {u, v} != {0, 1})
    reuse = SubdivisionCertificate(2, (partner[0], partner[1]), (RainbowPath(partner, (c,)),), 3)
    assert validate_certificate(reuse, k4).ok
    via_hub = RainbowPath((0, 2, 1), (k4.color(0, 2), k4.color(2, 1)))
    bad = SubdivisionCertificate(3, (0, 1, 2), (via_hub, p02, p12), 3)
    assert validate_certificate(bad, k4).reason == "HubViolation"
    assert validate_certificate(SubdivisionCertificate(3, (0, 1, 2), (p01, p02), 3), k4).reason == "MissingPair"
    assert validate_certificate(SubdivisionCertificate(3, (0, 1, 2), (p01, p02, p12), 0), k4).reason == "TooLong"


def test_validator_detects_color_reuse():
    g = build_graph(5, [(0, 3, 7), (3, 1, 8), (1, 4, 7), (4, 2, 9), (0, 2, 5)])
    p01 = RainbowPath((0, 3, 1), (7, 8))
    p12 = RainbowPath((1, 4, 2), (7, 9))
    p02 = RainbowPath((0, 2), (5,))
    cert = SubdivisionCertificate(3, (0, 1, 2), (p01, p02, p12), 4)
    assert validate_certificate(cert, g).reason == "ColorReuse"


def test_default_length_bound():
    n = 1000
    assert default_length_bound(n) == math.ceil(4 * math.log(n) * math.log(math.log(n)))
    assert default_length_bound(5, c=1) == math.ceil(math.log(5))


@settings(max_examples=60)
@given(proper_graphs(min_n=2, max_n=8), st.data())
def test_rp_matches_oracle(g, data):
    x = data.draw(st.integers(0, g.n - 1))
    A = data.draw(st.sets(st.sampled_from(g.colors))) if g.colors else set()
    phi0 = data.draw(st.sets(st.integers(0, g.n - 1), max_size=2)) - {x}
    exact = rp_set(g, x, A, phi0)
    assert exact == rp_oracle(g, x, A, phi0)
    assert rp_set(g, x, A, phi0, budget=WITNESS) <= exact


@settings(max_examples=60)
@given(proper_graphs(min_n=2, max_n=8), st.data())
def test_rainbow_path_matches_oracle(g, data):
    s, t = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    p = rainbow_path(g, s, t)
    ref = rainbow_paths_between(g, s, t)
    if not ref:
        assert p is None
    else:
        assert p is not None and path_problem(g, p) is None and p.ends == (s, t)
        assert p.length == min(len(c) for _, c in ref)


@settings(max_examples=60)
@given(proper_graphs(min_n=3, max_n=8, min_edges=3))
def test_cycle_matches_oracle(g):
    c = find_rainbow_cycle(g)
    ref = rainbow_cycles(g)
    assert (c is None) == (not ref)
    if c is not None:
        assert path_problem(g, c) is None and c.length <= g.palette_size


@pytest.mark.parametrize("seed", range(5))
def test_witness_tree_paths_are_rainbow(seed):
    g = random_graph(12, 0.4, seed)
    tree = WitnessTree(g, 0, None)
    for v in tree.reached():
        p = tree.path_to(v)
        assert path_problem(g, p) is None and p.ends == (0, v)


def test_rp_monotone_in_phi0():
    g = random_graph(9, 0.5, 7)
    for phi in itertools.combinations(range(1, 9), 2):
        assert rp_set(g, 0, phi0=phi) <= rp_set(g, 0, phi0=phi[:1])
