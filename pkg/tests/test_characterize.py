from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutseq.algebra import QuadNum
from cutseq.characterize import (
    Walk,
    check_consistent,
    combinatorial_lift,
    contract,
    decide_parametric,
    decide_window,
    detect_bad_symmetry,
    expand,
    labels_determine_edges,
    reconstruct_edges,
    recurrence_check,
    trim_to_walk,
)
from cutseq.errors import ModulusMismatchError, SequenceFormatError, UnbalancedError
from cutseq.oracle import GeoState, bidirectional_window, trace_backward, trace_from
from cutseq.surface import LabeledSeq
from cutseq.torusword import EWord, check_balanced, classify_symmetry, slope_params
from tests.helpers import (
    GOLDEN,
    QUADRATIC_SLOPES,
    plane_tokens,
    random_surface,
    random_unit_point,
    squares_from_edges,
)

SLOPE_42 = Fraction(211, 500)


def sigma_as_hv(walk: Walk) -> str:
    return walk.sigma.replace("L", "H").replace("R", "V")


def corner_eps(m, n_back=29, n_fwd=31) -> str:
    from cutseq.surface import torus

    w, _ = bidirectional_window(torus(), GeoState(1, 0, 0, m), n_back, n_fwd)
    return w.eps


def test_consistency_examples(lsurf):
    assert check_consistent("1H 2V 3H 2H", lsurf).kind == "CONSISTENT_WINDOW"
    v = check_consistent("1H 2V 1H 1H", lsurf)
    assert v.kind == "REJECT" and v.position == 2
    assert check_consistent("3V", lsurf).kind == "CONSISTENT_WINDOW"
    assert check_consistent("7V", lsurf).kind == "REJECT"


def test_lift_examples(lsurf, torus1):
    assert str(combinatorial_lift("VHHVH", 2, lsurf)) == "2V 3H 2H 1V 1H"
    assert str(combinatorial_lift("VHHHV", 2, lsurf)) == "2V 3H 2H 3H 3V"
    assert combinatorial_lift("HVVHV", 1, torus1).squares == [1] * 5


def test_lift_anchor_must_be_in_window(six):
    lifted = combinatorial_lift(EWord("VHHVH", -3), 5, six)
    assert lifted.squares[3] == 5
    assert check_consistent(lifted, six).kind == "CONSISTENT_WINDOW"
    with pytest.raises(SequenceFormatError):
        combinatorial_lift(EWord("VH", -5), 1, six)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9), st.text(alphabet="HV", min_size=1, max_size=40))
def test_lifts_are_consistent(seed, eps):
    rng = random.Random(seed)
    s = random_surface(rng, rng.randint(1, 7))
    lifted = combinatorial_lift(eps, rng.randint(1, s.d), s)
    assert lifted.eps == eps
    assert check_consistent(lifted, s).kind == "CONSISTENT_WINDOW"


def test_contract_torus_window(six):
    walk = contract(combinatorial_lift("HVHHVHHHVH", 1, six), six)
    assert walk.sigma == "LR" and walk.M == 2 and not walk.ambiguous
    g_step = six.vh_power(2)
    assert walk.symbols[1][0] == g_step(walk.symbols[0][0])


def test_contract_constant_gaps_is_ambiguous(torus1):
    walk = contract("1V 1H 1V 1H 1V 1H", torus1)
    assert walk.sigma == "LL" and walk.M == 1 and walk.ambiguous


def test_contract_rejects_uneven_gaps(torus1):
    with pytest.raises(UnbalancedError):
        contract("1V 1H 1V 1H 1H 1H 1V", torus1)
    with pytest.raises(SequenceFormatError):
        contract("1V 1H", torus1)


def test_expand_examples(torus1, six):
    assert str(expand([(1, "L")], 0, 0, torus1)) == "1V"
    assert str(expand([(1, "R")], 2, 1, torus1)) == "1V 1H 1H 1H 1H"
    assert len(expand(Walk(((1, "L"),), 2), 8, 0, six)) == 9
    with pytest.raises(ModulusMismatchError):
        expand(Walk(((1, "L"),), 2), 3, 0, six)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(QUADRATIC_SLOPES))
def test_round_trip_and_sturmian_walks(seed, m):
    rng = random.Random(seed)
    s = random_surface(rng, rng.randint(1, 8))
    res = trace_from(s, rng.randint(1, s.d), random_unit_point(rng, m.radicand), 0, m, 250)
    if res.terminal != "ran_to_length":
        return
    seq = res.as_seq()
    walk = contract(seq, s)
    p = slope_params(m, s.D)
    if walk.ambiguous:
        return
    assert walk.M == p.M_raw
    assert expand(walk, p.M_raw, 0, s).symbols == trim_to_walk(seq).symbols
    assert check_balanced(sigma_as_hv(walk))
    for (mu, sig), (nxt, _) in zip(walk.symbols, walk.symbols[1:]):
        assert nxt == s.vh_power(p.M_mod + (sig == "R"))(mu)


def test_almost_symmetry_passes_to_the_walk(six):
    eps = corner_eps(GOLDEN, 59, 61)
    assert classify_symmetry(eps).kind == "almost"
    walk = contract(combinatorial_lift(eps, 3, six), six)
    assert classify_symmetry(sigma_as_hv(walk)).kind == "almost"


def test_bad_symmetry_on_l_surface(lsurf):
    eps = corner_eps(SLOPE_42)
    N = classify_symmetry(eps).center
    seq = combinatorial_lift(EWord(eps, -(N - 2)), 2, lsurf)
    v = detect_bad_symmetry(seq, lsurf)
    assert v.kind == "SINGULAR" and v.witness["square"] == 2
    assert decide_window(seq, lsurf).kind == "SINGULAR"


def test_symmetry_around_a_good_square(six):
    eps = corner_eps(SLOPE_42)
    N = classify_symmetry(eps).center
    seq = combinatorial_lift(EWord(eps, -(N - 2)), 3, six)
    assert detect_bad_symmetry(seq, six).kind == "CONSISTENT_WINDOW"
    assert decide_window(seq, six).kind == "CONSISTENT_WINDOW"
    seq = combinatorial_lift(EWord(eps, -(N - 2)), 1, six)
    assert detect_bad_symmetry(seq, six).kind == "SINGULAR"


def test_struck_square_agrees_with_the_tracer(six):
    # a window through the good corner of square 5, in both directions
    start = GeoState(six.vh(5), 0, 0, GOLDEN)
    w, idx = bidirectional_window(six, start, 29, 31)
    assert w.symbols[idx].square == six.h(5)
    v = classify_symmetry(w.eps)
    # the seam is the corner pair at idx, idx + 1
    assert v.kind == "almost" and v.center == idx + 1
    assert detect_bad_symmetry(w, six).kind == "CONSISTENT_WINDOW"
    # through the bad corner of square 1 the line stops on both sides
    start = GeoState(six.vh(1), 0, 0, GOLDEN)
    assert trace_backward(six, start, 10).terminal == "singularity_hit"
    assert trace_from(six, six.vh(1), 0, 0, GOLDEN, 10).terminal == "singularity_hit"


def test_recurrence_examples(torus1):
    res = trace_from(torus1, 1, Fraction(1, 3), 0, GOLDEN, 10**4)
    assert recurrence_check(res.symbols, gap_bound=200, cap=6)
    window = ["1V"] + ["1H"] * 300
    assert not recurrence_check(window, gap_bound=50)
    short = recurrence_check(["1V"] * 5, gap_bound=50)
    assert short and short.vacuous


def test_decide_window_examples(six, lsurf):
    periodic = trace_from(six, 1, Fraction(1, 3), 0, Fraction(1, 2), 200).as_seq()
    assert decide_window(periodic, six).kind == "ACCEPT_PERIODIC"
    assert decide_window("1H 2V 1H 1H", lsurf).kind == "REJECT"
    unbalanced = combinatorial_lift("VHVHHHVHV", 1, six)
    assert decide_window(unbalanced, six).kind == "REJECT"


def test_decide_window_catches_a_swapped_gap(six):
    res = trace_from(six, 1, Fraction(1, 3), 0, GOLDEN, 3000)
    pos = [i for i, c in enumerate(res.eps) if c == "V"]
    gaps = [b - a for a, b in zip(pos, pos[1:])]
    # move one short gap far away: each letter count stays the same
    i = gaps.index(min(gaps), 400)
    j = gaps.index(max(gaps), 1000)
    gaps[i], gaps[j] = gaps[j], gaps[i]
    eps = "".join("V" + "H" * (g - 1) for g in gaps) + "V"
    verdict = decide_window(combinatorial_lift(eps, 1, six), six)
    assert verdict.kind == "REJECT"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(QUADRATIC_SLOPES))
def test_oracle_windows_are_never_refuted(seed, m):
    rng = random.Random(seed)
    s = random_surface(rng, rng.randint(2, 7))
    res = trace_from(s, rng.randint(1, s.d), random_unit_point(rng, m.radicand), 0, m, 400)
    if res.terminal != "ran_to_length":
        return
    assert decide_window(res.as_seq(), s).kind not in ("REJECT", "SINGULAR")


def test_parametric_examples(lsurf, torus1, six):
    v = decide_parametric(lsurf, SLOPE_42, (Fraction(133, 211), 0), 2)
    assert v.kind == "SINGULAR" and v.corner["square"] == 2
    v = decide_parametric(torus1, GOLDEN, (0, 0), 1)
    assert v.kind == "ACCEPT" and v.corner["k"] == 0
    assert decide_parametric(six, GOLDEN, (Fraction(1, 3), 0), 1).kind == "ACCEPT"
    assert decide_parametric(six, GOLDEN, (Fraction(1, 3), 0), 1).corner is None
    assert decide_parametric(six, Fraction(1, 2), (Fraction(1, 3), 0), 1).kind == "ACCEPT_PERIODIC"
    assert decide_parametric(torus1, Fraction(1, 2), (0, 0), 1).kind == "ACCEPT_PERIODIC"


def test_parametric_backward_corner(lsurf, torus1):
    # the line through (x0, 0) passed a corner one row below the start
    m = GOLDEN
    x0 = m.reciprocal().frac()
    v = decide_parametric(lsurf, m, (x0, 0), 1)
    assert v.kind == "SINGULAR" and v.corner["direction"] == "backward"
    v = decide_parametric(torus1, m, (x0, 0), 1)
    assert v.kind == "ACCEPT" and v.corner["direction"] == "backward"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(QUADRATIC_SLOPES), st.integers(1, 6))
def test_parametric_forward_corner_against_plane_oracle(seed, m, j):
    rng = random.Random(seed)
    s = random_surface(rng, rng.randint(1, 7))
    lam0 = rng.randint(1, s.d)
    x0 = (-QuadNum(j) / m).frac()
    verdict = decide_parametric(s, m, (x0, 0), lam0)
    # the corner is the top right of the cell reached after j - 1 top crossings
    tokens = plane_tokens(x0, 0, m, 200)
    before = "".join(tokens[:tokens.index("HV")])
    assert before.count("V") == j - 1
    struck = ([lam0] + squares_from_edges(s, lam0, before))[-1]
    assert verdict.corner["square"] == struck
    assert (verdict.kind == "SINGULAR") == (struck in s.bad)


def test_label_determinacy(six, torus1, cyclic4):
    assert labels_determine_edges(six)
    assert not labels_determine_edges(cyclic4)
    assert not labels_determine_edges(torus1)


def test_edges_reconstruct_from_labels(six):
    res = trace_from(six, 2, Fraction(2, 7), 0, GOLDEN, 300)
    assert reconstruct_edges(res.as_seq().squares, six) == res.eps[1:]


def test_equal_gluings_lose_the_edges(cyclic4):
    a = trace_from(cyclic4, 1, Fraction(1, 3), 0, GOLDEN, 40)
    b = trace_from(cyclic4, 1, Fraction(1, 3), 0, QUADRATIC_SLOPES[1], 40)
    assert a.eps != b.eps
    assert a.as_seq().squares == b.as_seq().squares
    with pytest.raises(SequenceFormatError):
        reconstruct_edges([1, 2], cyclic4)


def test_short_symmetric_window_is_not_a_corner_hit(lsurf):
    # HVHH mirrors around its middle, but four symbols pin down nothing
    assert detect_bad_symmetry("1H 2V 3H 2H", lsurf).kind == "CONSISTENT_WINDOW"
    assert detect_bad_symmetry("1H 2V 3H 2H", lsurf, min_side=0).kind == "SINGULAR"
