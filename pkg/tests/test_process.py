import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import rp_oracle
from rainbowsub.constructions import complete_graph_1f, random_graph
from rainbowsub.expander import ExpanderViolation, TooLargeForExact, verify_violation
from rainbowsub.graph import build_graph
from rainbowsub.process import (EdgeSetContext, HypothesisViolated, InvalidOverride, Stalled,
                                check_red_blue, check_witnesses, classify_edge_set,
                                make_schedule, nested_color_stats, nested_size_check,
                                red_blue_split, restricted_neighborhood, run_sprinkling,
                                run_thinning, sample_nested_colors, thinning_experiment,
                                wilson_interval)
from strategies import proper_graphs

E = math.e


# --- schedule ---------------------------------------------------------------

def test_schedule_at_e_to_the_e():
    s = make_schedule(E ** E)
    assert s.K == 10
    assert s.L == 10 ** 5 * 3 and s.T == s.K * s.L
    assert s.p == pytest.approx(1 - 1 / s.T)


def test_f0_is_n_over_root_e():
    s = make_schedule(1000)
    assert s.f(0) == pytest.approx(1000 / math.sqrt(E))


def test_schedule_custom_overrides():
    s = make_schedule(100, kappa=1, lam=1)
    assert (s.K, s.L, s.T) == (2, 5, 10)
    assert s.p == pytest.approx(0.9)
    assert s.steps == 5


def test_f_and_eps_relation():
    s = make_schedule(10 ** 6, preset="desk", beta=10)
    for k in range(1, 4):
        eps = s.eps(k)
        if eps < 1:
            assert s.f(k - 1) == pytest.approx(s.n ** (1 - eps), rel=1e-9)


@pytest.mark.parametrize("kw", [{"kappa": 0}, {"lam": -1}, {"beta": 0}, {"retention": 1.5},
                                {"preset": "huge"}])
def test_invalid_overrides(kw):
    with pytest.raises(InvalidOverride):
        make_schedule(100, **kw)


# --- nested colors ----------------------------------------------------------

@given(st.integers(0, 2 ** 32 - 1))
def test_nested_sets_are_nested(seed):
    s = make_schedule(100, kappa=1, lam=1)
    seq = sample_nested_colors(range(40), s, s.steps, seed)
    assert len(seq) == s.steps + 1
    assert all(b <= a for a, b in zip(seq, seq[1:]))


def test_nested_steps_bounded():
    s = make_schedule(100, kappa=1, lam=1)
    with pytest.raises(ValueError):
        sample_nested_colors(range(5), s, s.steps + 1, 0)


def test_a0_mean_within_three_sigma():
    s = make_schedule(100, kappa=1, lam=1)
    assert nested_size_check(60, s, 0, 400, seed=1).within_3_sigma
    assert nested_size_check(60, s, s.steps, 400, seed=2).within_3_sigma


def test_two_step_schedule_halves_survivors():
    s = make_schedule(100, kappa=1, lam=1, retention=0.5)
    chk = nested_size_check(50, s, 1, 600, seed=3)
    assert chk.expected == pytest.approx(50 * 0.25)
    assert chk.within_3_sigma


# --- thinning ---------------------------------------------------------------

def test_full_palette_gives_constant_rp(cube):
    s = make_schedule(100, kappa=1, lam=1, retention=1.0)
    tr = run_thinning(cube, 0, s, seed=4, a0_prob=1.0)
    sizes = set(tr.rp_by_step().values())
    assert sizes == {8}


def test_empty_palette_leaves_only_x(cube):
    s = make_schedule(100, kappa=1, lam=1, retention=0.0)
    tr = run_thinning(cube, 0, s, seed=5)
    assert tr.rp_by_step()[s.steps] == 1


@pytest.mark.parametrize("seed", range(8))
def test_exact_rp_monotone_and_contains_x(seed):
    g = random_graph(10, 0.5, seed)
    s = make_schedule(100, kappa=1, lam=1)
    tr = run_thinning(g, 0, s, seed=seed)
    assert tr.mode == "exact"
    sizes = [r.rp_size for r in sorted(tr.records, key=lambda r: r.step)]
    assert all(v >= 1 for v in sizes)
    assert all(b <= a for a, b in zip(sizes, sizes[1:]))


def test_checkpoints_include_multiples_of_L():
    s = make_schedule(100, kappa=1, lam=1)
    tr = run_thinning(complete_graph_1f(6), 0, s, checkpoints=[1], seed=0)
    assert sorted(tr.rp_by_step()) == [0, 1, 5]
    with pytest.raises(ValueError):
        run_thinning(complete_graph_1f(6), 0, s, checkpoints=[99])


def test_k8_desk_median_rp0():
    g = complete_graph_1f(8)
    s = make_schedule(8, preset="desk")
    rep = thinning_experiment(g, 0, s, 200, seed=11, checkpoints=[0])
    assert rep.median_rp0 >= g.n / 2


def test_thinning_is_deterministic_across_threads():
    g = random_graph(11, 0.5, 2)
    s = make_schedule(100, kappa=1, lam=1)
    a = thinning_experiment(g, 0, s, 12, seed=9, threads=1)
    b = thinning_experiment(g, 0, s, 12, seed=9, threads=4)
    assert a.traces == b.traces and a.mean_rp == b.mean_rp
    assert run_thinning(g, 0, s, seed=3) == run_thinning(g, 0, s, seed=3)


def test_ratio_rows_are_reported():
    g = complete_graph_1f(10)
    s = make_schedule(100, kappa=1, lam=1)
    rep = thinning_experiment(g, 0, s, 20, seed=1)
    assert rep.ratios and all(r.reference_rate == pytest.approx(1 + s.eps(r.k) / 528) for r in rep.ratios)


# --- restricted neighborhood and sprinkling --------------------------------

def test_restricted_neighborhood_examples(triangle):
    c01 = triangle.color(0, 1)
    assert restricted_neighborhood(triangle, {0}, triangle.colors) == {1, 2}
    assert restricted_neighborhood(triangle, {0}, {c01}) == {1}
    assert restricted_neighborhood(triangle, {0}, triangle.colors, phi_v={1}) == {2}
    assert restricted_neighborhood(triangle, {0}, triangle.colors, phi_c={c01}) == {2}


def test_sprinkling_full_probability(triangle):
    tr = run_sprinkling(triangle, 0, [1.0, 1.0])
    assert tr.reached == {0, 1, 2} and tr.rounds[0].b_size == 2
    assert tr.saturated and check_witnesses(triangle, tr)


def test_sprinkling_zero_probability_stalls(triangle):
    with pytest.raises(Stalled) as exc:
        run_sprinkling(triangle, 0, [0.0])
    assert exc.value.trace.B == frozenset()


def test_k16_first_round_sizes():
    g = complete_graph_1f(16)
    sizes = []
    for seed in range(100):
        try:
            tr = run_sprinkling(g, 0, [0.5], seed=seed)
            sizes.append(len(tr.B))
        except Stalled:
            sizes.append(0)
    mean = sum(sizes) / len(sizes)
    assert abs(mean - 7.5) <= 3 * math.sqrt(15 * 0.25 / 100)
    assert sum(s > 4 for s in sizes) >= 85


@settings(max_examples=60)
@given(proper_graphs(min_n=2, max_n=12), st.integers(0, 10 ** 6), st.data())
def test_sprinkling_witnesses_are_sound(g, seed, data):
    x = data.draw(st.integers(0, g.n - 1))
    phi_v = data.draw(st.sets(st.integers(0, g.n - 1), max_size=2)) - {x}
    phi_c = data.draw(st.sets(st.sampled_from(g.colors), max_size=2)) if g.colors else set()
    try:
        tr = run_sprinkling(g, x, [0.7] * 6, seed, phi_v, phi_c)
    except Stalled as exc:
        tr = exc.trace
    assert check_witnesses(g, tr, phi_v, phi_c)
    assert tr.reached <= rp_oracle(g, x, set(g.colors) - phi_c, phi_v)


# --- red/blue ----------------------------------------------------------------

def _two_cliques(k):
    a = complete_graph_1f(k)
    edges = list(a.edges) + [(u + k, v + k, c) for u, v, c in a.edges]
    edges.append((k - 1, k, k - 1 + 1000))
    return build_graph(2 * k, edges)


def test_red_blue_all_red_and_all_blue():
    g = complete_graph_1f(8)
    U = [0, 1]
    boundary = [(u, v) for u, v, _ in g.edges if (u in U) != (v in U)]
    red = red_blue_split(g, U, [], 0.5, boundary)
    assert red.color == "red" and check_red_blue(g, U, [], 0.5, boundary, red)
    blue = red_blue_split(g, U, [], 0.5, [])
    assert blue.color == "blue" and check_red_blue(g, U, [], 0.5, [], blue)


def test_red_blue_bridge_gives_violation():
    g = _two_cliques(8)
    U = range(8)
    v = red_blue_split(g, U, [], Fraction(1, 4), [])
    assert isinstance(v, ExpanderViolation)
    assert v.F == ((7, 8),) and verify_violation(g, v)


def test_red_blue_hypotheses():
    g = complete_graph_1f(8)
    with pytest.raises(HypothesisViolated):
        red_blue_split(g, [], [], 0.5, [])
    with pytest.raises(HypothesisViolated):
        red_blue_split(g, range(7), [], 0.5, [])
    with pytest.raises(HypothesisViolated):
        red_blue_split(g, [0], [1], 0.5, [])
    with pytest.raises(HypothesisViolated):
        red_blue_split(g, [0], [0], 0.5, [])


@settings(max_examples=80)
@given(proper_graphs(min_n=4, max_n=12, min_edges=3), st.sampled_from([Fraction(1, 10), Fraction(1, 5), Fraction(1, 4), Fraction(1, 2)]),
       st.data())
def test_red_blue_totality(g, eps, data):
    top = math.floor(g.n ** (1 - float(eps)) + 1e-9)
    U = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=max(1, top)))
    boundary = [(u, v) for u, v, _ in g.edges if (u in U) != (v in U)]
    red = data.draw(st.sets(st.sampled_from(boundary))) if boundary else set()
    out = red_blue_split(g, U, [], eps, red)
    if isinstance(out, ExpanderViolation):
        assert verify_violation(g, out)
    else:
        assert check_red_blue(g, U, [], eps, red, out)


# --- edge-set classes -------------------------------------------------------

def _ctx(g, U, eps, L=2, A=None, anchor=None):
    A = frozenset(g.colors if A is None else A)
    return EdgeSetContext(0, frozenset(U), A, frozenset(g.colors if anchor is None else anchor), eps, L)


def test_classify_empty_is_neither():
    g = complete_graph_1f(10)
    assert classify_edge_set(g, [], _ctx(g, {0}, 0.5)).cls == "neither"


def test_classify_type_i_instance():
    g = complete_graph_1f(10)
    U = {0, 1, 2}
    A = set(g.colors[:5])
    F = []
    for u, v, c in g.edges:
        if (u in U) != (v in U):
            inside = u if u in U else v
            if inside in rp_oracle(g, 0, A - {c}):
                F.append((u, v))
    ctx = _ctx(g, U, 0.5, A=A)
    res = classify_edge_set(g, F, ctx)
    # size demand (eps/10) d |U| = 1.35, degree cap ceil(d) = 9
    assert len(F) >= 2 and res.cls == "type-I" and res.type_i


def test_classify_type_ii_only():
    g = complete_graph_1f(10)
    ctx = _ctx(g, {0, 1, 2}, 1.0)
    res = classify_edge_set(g, [(0, 5)], ctx)
    assert (res.type_i, res.type_ii, res.cls) == (False, True, "type-II")


def test_color_outside_anchor_is_never_type_ii():
    g = complete_graph_1f(10)
    c = g.color(0, 5)
    ctx = _ctx(g, {0, 1, 2}, 1.0, anchor=set(g.colors) - {c})
    assert not classify_edge_set(g, [(0, 5)], ctx).type_ii


def test_classify_rejects_unreachable_and_non_crossing():
    g = complete_graph_1f(10)
    ctx = _ctx(g, {3}, 0.5, A=[])
    assert classify_edge_set(g, [(3, 4)], ctx).cls == "neither"
    assert "cross" in classify_edge_set(g, [(5, 6)], _ctx(g, {3}, 0.5)).reason
    with pytest.raises(TooLargeForExact):
        classify_edge_set(complete_graph_1f(18), [(0, 1)], _ctx(complete_graph_1f(18), {0}, 0.5))


# --- conditional retention --------------------------------------------------

def test_nested_stats_clear_bound():
    st_ = nested_color_stats((10, 0.9), 0, 5, trials=100_000, seed=0)
    e = st_.by_label()["i|not j"]
    assert e.bound == pytest.approx(5 * 0.1 / 6)
    assert e.estimate >= e.bound and e.clears_bound
    lo, hi = e.ci
    assert lo <= e.closed_form <= hi
    # j - i + 1 = 6 > T/2, so the second bound does not apply
    assert st_.by_label()["j-1|i,not j"].bound is None


def test_nested_stats_i_equals_j():
    st_ = nested_color_stats((10, 0.9), 3, 3, trials=5000, seed=1)
    assert st_.by_label()["i|j"].estimate == 1.0


def test_nested_stats_p_one():
    st_ = nested_color_stats((10, 1.0), 0, 4, trials=5000, seed=2)
    assert st_.by_label()["i|not j"].bound == 0


def test_nested_stats_second_bound_applies():
    st_ = nested_color_stats((20, 0.9), 2, 6, trials=50_000, seed=3)
    e = st_.by_label()["j-1|i,not j"]
    assert e.bound == pytest.approx(20 / 4 * 0.1 / 2)
    lo, hi = e.ci
    assert lo <= e.closed_form <= hi


def test_nested_stats_guards():
    with pytest.raises(ValueError):
        nested_color_stats((10, 0.9), 0, 5, trials=10)
    with pytest.raises(ValueError):
        nested_color_stats((10, 0.9), 6, 5, trials=1000)


def test_wilson_interval():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 0) == (0.0, 1.0)
