from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutseq.errors import EmptyOccurrenceError, GraphError
from cutseq.gamma import (
    build_gamma,
    derive_graph,
    format_edges,
    fz_check,
    gamma_json,
    is_strongly_connected,
    is_two_oriented,
    prefix_suffix_sets,
    recurrence_failure,
)
from cutseq.characterize import gamma_combinatorics
from tests.helpers import GOLDEN, SQRT2, oracle_walk, random_surface

GAMMA2_EDGES = {(1, "L", 2), (1, "R", 2), (2, "L", 6), (2, "R", 1), (3, "L", 1), (3, "R", 5),
        (4, "L", 5), (4, "R", 6), (5, "L", 3), (5, "R", 4), (6, "L", 4), (6, "R", 3)}


def reachable_from(g, start):
    # plain depth-first search over the edge list
    adj = {}
    for a, _, b in g.edges():
        adj.setdefault(a, []).append(b)
    seen, stack = {start}, [start]
    while stack:
        for b in adj.get(stack.pop(), []):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def test_gamma2_edges(six):
    g = build_gamma(six, 2)
    assert g.edge_set() == GAMMA2_EDGES
    assert is_strongly_connected(g)
    # h^2 sends 1, 2, 3, 6 to bad squares 1, 4, 2, 6
    assert {lam for lam, _ in g.bad_edges} == {1, 2, 3, 6}


def test_format_marks_bad_edges(six):
    text = format_edges(build_gamma(six, 2))
    assert "1 L→ 2!" in text and "4 L→ 5\n" in text
    rec = json.loads(gamma_json(build_gamma(six, 2)))
    assert len(rec["edges"]) == 12 and rec["strongly_connected"]


def test_torus_graph_is_two_loops(torus1):
    g = build_gamma(torus1, 0)
    assert g.edge_set() == {(1, "L", 1), (1, "R", 1)}
    with pytest.raises(GraphError):
        build_gamma(torus1, 1)


def test_l_surface_m0(lsurf):
    g = build_gamma(lsurf, 0)
    assert g.L_map == lsurf.v
    assert g.R_map == lsurf.v * lsurf.h


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_gamma_graphs_are_strongly_connected(seed, d):
    s = random_surface(random.Random(seed), d)
    for M in range(s.D):
        g = build_gamma(s, M)
        assert is_two_oriented(g)
        assert is_strongly_connected(g)
        assert reachable_from(g, 1) == set(s.labels)


def test_derive_on_torus(torus1):
    g = build_gamma(torus1, 0)
    dg = derive_graph(g, (1, "L"), "tau_isolated")
    assert dg.edge_set() == {(1, "L", 1), (1, "R", 1)}


def test_derive_l_surface(lsurf):
    g = build_gamma(lsurf, 0)
    dg = derive_graph(g, (1, "R"), "tau_isolated")
    # reading the block "L R" as a walk: first L, then R
    assert dg.L_map == g.R_map
    assert dg.R_map == g.R_map * g.L_map
    assert is_two_oriented(dg)
    with pytest.raises(GraphError):
        derive_graph(g, (9, "R"), "tau_isolated")
    with pytest.raises(GraphError):
        derive_graph(g, (1, "R"), "sigma_isolated")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 3), st.sampled_from(["L", "R"]))
def test_derived_graphs_stay_strongly_connected(seed, block_m, sigma):
    s = random_surface(random.Random(seed), random.Random(seed).randint(1, 6))
    g = build_gamma(s, 0)
    for kind in ("tau_isolated", "sigma_isolated"):
        dg = derive_graph(g, (1, sigma), kind, block_m)
        assert dg.d == g.d
        assert is_two_oriented(dg)
        assert is_strongly_connected(dg)


def test_prefix_suffix_worked_example():
    window = [(2, "L"), (1, "L"), (2, "R"), (1, "L"), (2, "R"), (1, "L"), (2, "R"), (1, "L"),
              (2, "R"), (1, "R")]
    A, D = prefix_suffix_sets(window, [(1, "L"), (2, "R"), (1, "L"), (2, "R")])
    assert {(2, "L"), (2, "R")} <= A
    assert {(1, "L"), (1, "R")} <= D
    assert prefix_suffix_sets([(1, "L")], [(1, "L")]) == (set(), set())
    with pytest.raises(EmptyOccurrenceError):
        prefix_suffix_sets(window, [(3, "L")])


def test_extension_sets_of_oracle_walk_are_small(six):
    walk, _ = oracle_walk(six, GOLDEN, 2000)
    syms = list(walk.symbols)
    for n in range(1, 5):
        for i in range(0, 1500, 97):
            A, D = prefix_suffix_sets(syms, syms[i:i + n])
            assert len(A) <= 2 and len(D) <= 2


@pytest.mark.parametrize("m", [GOLDEN, SQRT2 - 1])
def test_oracle_walks_pass(six, m):
    walk, _ = oracle_walk(six, m, 2000)
    pi0, pi1 = gamma_combinatorics(six, walk.M % six.D)
    report = fz_check(list(walk.symbols[:2000]), pi0, pi1)
    assert report, report.witness
    assert not report.recurrence_vacuous


def test_corruption_is_caught(six):
    walk, _ = oracle_walk(six, GOLDEN, 600)
    syms = list(walk.symbols[:600])
    pi0, pi1 = gamma_combinatorics(six, walk.M % six.D)
    syms[300] = (syms[300][0], "R" if syms[300][1] == "L" else "L")
    assert not fz_check(syms, pi0, pi1)


def test_empty_window_passes_vacuously():
    report = fz_check([], {"a": 1}, {"a": 1})
    assert report and report.recurrence_vacuous


def test_unknown_letters_fail_condition_two():
    report = fz_check(["a", "z"], {"a": 1}, {"a": 1})
    assert report.failed_condition == 2


def test_recurrence_failure_includes_the_tail():
    seq = list("ab" * 20) + ["c"]
    bad = recurrence_failure(seq, 1, 10)
    assert bad is not None and bad[0] == ("c",)
    assert recurrence_failure(list("ab" * 20), 2, 3) is None
