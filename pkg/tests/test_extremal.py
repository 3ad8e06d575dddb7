from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import random_spaces, small_spaces, tree_spaces, ultrametric_spaces
from freelip.extremal import (
    NormingPolytope,
    classify,
    d_pq,
    de_leeuw,
    exposing_functional,
    exposing_margin,
    exposure_ratio,
    molecule_face,
    oracle_certificate,
    oracle_extreme,
    strongly_exposed_constant,
    verify_dpq_on_segment,
    verify_face_on_segment,
)
from freelip.freespace import FreeElement, LipFunction, lip_norm, molecule_element
from freelip.metric import gap, gen_random, segment, validate
from oracles import brute_quotient_range, norming_vertices

ALL_C3 = {(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)}


def two_point():
    return validate(["0", "a"], "0", [[0, 3], [3, 0]])


def test_de_leeuw_examples(C3):
    f = LipFunction(C3, (0, 1, 2))
    assert de_leeuw(f, 0, 2) == -1
    for x, y in C3.ordered_pairs():
        assert de_leeuw(f, y, x) == -de_leeuw(f, x, y)
        g = NormingPolytope(C3, x, y).canonical_member()
        assert de_leeuw(g, x, y) == 1
    assert max(de_leeuw(f, x, y) for x, y in C3.ordered_pairs()) == lip_norm(f)
    with pytest.raises(ValueError):
        de_leeuw(f, 1, 1)


def test_classify_examples(C3, E3):
    c = classify(C3, 0, 2, run_oracle=True)
    assert not c.is_extreme and c.segment == {0, 1, 2}
    assert c.oracle_extreme is False and c.strongly_exposed_constant is None
    c = classify(C3, 0, 1, run_oracle=True)
    assert c.is_extreme and c.oracle_extreme and c.strongly_exposed_constant == F(1, 2)
    for p, q in E3.ordered_pairs():
        c = classify(E3, p, q, run_oracle=True)
        assert c.is_extreme and c.is_preserved_extreme and c.is_denting and c.is_exposed
        assert c.strongly_exposed_constant == 1
    with pytest.raises(ValueError):
        classify(C3, 1, 1)


def test_strongly_exposed_constant_examples(C3):
    assert strongly_exposed_constant(C3, 0, 1) == F(1, 2)
    assert exposure_ratio(C3, 2, 0, 1) == F(1, 2)
    assert strongly_exposed_constant(C3, 0, 2) is None
    assert strongly_exposed_constant(two_point(), 0, 1) == 0


def test_oracle_examples(C3):
    assert not oracle_extreme(C3, 0, 2)
    assert oracle_extreme(C3, 0, 1)
    M = two_point()
    assert oracle_extreme(M, 0, 1) and oracle_extreme(M, 1, 0)
    # u_0b = (u_0a + u_ab) / 2
    half = F(1, 2)
    combo = half * molecule_element(C3, 0, 1) + half * molecule_element(C3, 1, 2)
    assert combo == molecule_element(C3, 0, 2)
    cert = oracle_certificate(C3, 0, 2)
    assert sum(cert.values()) == 1
    rebuilt = FreeElement.zero(C3)
    for (x, y), w in cert.items():
        rebuilt = rebuilt + w * molecule_element(C3, x, y)
    assert rebuilt == molecule_element(C3, 0, 2)


def test_exposing_examples(C3, E3):
    f = LipFunction(C3, (0, -1, F(-3, 2)))
    assert de_leeuw(f, 0, 1) == 1 and de_leeuw(f, 0, 2) == F(3, 4) and de_leeuw(f, 1, 2) == F(1, 2)
    assert exposing_margin(f, 0, 1) > 0 and lip_norm(f) == 1
    for method in ("lp", "shortest_path"):
        g = exposing_functional(C3, 0, 1, method)
        assert g is not None and exposing_margin(g, 0, 1) > 0 and lip_norm(g) <= 1
        assert exposing_functional(C3, 0, 2, method) is None
        for p, q in E3.ordered_pairs():
            assert exposing_functional(E3, p, q, method) is not None
    with pytest.raises(ValueError):
        exposing_functional(C3, 0, 1, "bogus")


def test_d_pq_examples(C3, E3):
    for method in ("shortest_path", "lp"):
        assert d_pq(C3, 0, 2, method) == ALL_C3
        for p, q in E3.ordered_pairs():
            assert d_pq(E3, p, q, method) == {(p, q), (q, p)}
        for p, q in C3.ordered_pairs():
            assert (p, q) in d_pq(C3, p, q, method)


def test_norming_polytope_c3_is_a_point(C3):
    assert norming_vertices(C3, 0, 2) == {(0, -1, -2)}
    poly = NormingPolytope(C3, 0, 2)
    for method in ("shortest_path", "lp"):
        assert poly.quotient_range(0, 1, method) == (1, 1)
    equi = NormingPolytope(validate(["0", "a", "b"], "0", [[0, 1, 1], [1, 0, 1], [1, 1, 0]]), 0, 1)
    assert equi.quotient_range(1, 2, "lp") == (-1, 0) == equi.quotient_range(1, 2)
    with pytest.raises(ValueError):
        poly.quotient_range(0, 1, "bogus")


def test_molecule_face_examples(C3, E3):
    for method in ("shortest_path", "lp"):
        assert molecule_face(C3, 0, 2, method) == {(0, 1), (1, 2), (0, 2)}
        assert molecule_face(C3, 0, 1, method) == {(0, 1)}
        for p, q in E3.ordered_pairs():
            assert molecule_face(E3, p, q, method) == {(p, q)}


def test_verifiers_examples(C3, E3):
    for M in (C3, E3):
        for p, q in M.ordered_pairs():
            assert verify_dpq_on_segment(M, p, q)
            assert verify_face_on_segment(M, p, q)


@given(small_spaces)
@settings(max_examples=25, deadline=None)
def test_quotient_ranges_agree_with_vertex_enumeration(M):
    for p, q in list(M.ordered_pairs())[:4]:
        poly = NormingPolytope(M, p, q)
        verts = norming_vertices(M, p, q)
        assert verts
        for f in verts:
            assert poly.contains(LipFunction(M, f))
        for x, y in M.ordered_pairs():
            expected = brute_quotient_range(M, p, q, x, y, verts)
            assert poly.quotient_range(x, y) == expected
            assert poly.quotient_range(x, y, "lp") == expected


@given(small_spaces)
@settings(max_examples=25, deadline=None)
def test_potentials_attain_the_range(M):
    for p, q in M.ordered_pairs():
        poly = NormingPolytope(M, p, q)
        for u in M.points():
            f = poly.potential(u)
            assert poly.contains(f)
            for v in M.points():
                assert f.values[v] - f.values[u] == poly.longest(u, v)


@given(small_spaces)
@settings(max_examples=20, deadline=None)
def test_lp_and_shortest_path_routes_agree(M):
    for p, q in M.ordered_pairs():
        assert d_pq(M, p, q, "lp") == d_pq(M, p, q)
        assert molecule_face(M, p, q, "lp") == molecule_face(M, p, q)
        a, b = exposing_functional(M, p, q, "lp"), exposing_functional(M, p, q, "shortest_path")
        assert (a is None) == (b is None)


@given(random_spaces)
@settings(max_examples=40, deadline=None)
def test_extreme_iff_trivial_segment(M):
    for p, q in M.ordered_pairs():
        assert oracle_extreme(M, p, q) == (segment(M, p, q) == {p, q})


@given(random_spaces)
@settings(max_examples=40, deadline=None)
def test_classification_chain_and_symmetry(M):
    for p, q in M.ordered_pairs():
        c, r = classify(M, p, q), classify(M, q, p)
        for attr in ("is_extreme", "is_preserved_extreme", "is_denting", "is_strongly_exposed", "is_exposed"):
            assert getattr(c, attr) == getattr(r, attr)
        assert c.segment == r.segment
        # strongly exposed => denting => preserved extreme => extreme; strongly exposed => exposed => extreme
        assert not c.is_strongly_exposed or c.is_denting
        assert not c.is_denting or c.is_preserved_extreme
        assert not c.is_preserved_extreme or c.is_extreme
        assert not c.is_strongly_exposed or c.is_exposed
        assert not c.is_exposed or c.is_extreme
        assert c.is_extreme == c.is_strongly_exposed == c.is_denting == c.is_preserved_extreme
        dp = d_pq(M, p, q)
        assert dp == {(y, x) for x, y in dp}
        assert {(p, q), (q, p)} <= dp


@given(random_spaces)
@settings(max_examples=40, deadline=None)
def test_constant_is_optimal(M):
    for p, q in M.ordered_pairs():
        c = strongly_exposed_constant(M, p, q)
        if c is None:
            continue
        others = [x for x in M.points() if x not in (p, q)]
        for x in others:
            assert min(M.dist[x][p], M.dist[x][q]) <= c * gap(M, x, p, q)
        if others:
            x = max(others, key=lambda z: exposure_ratio(M, z, p, q))
            lower = c - F(1, 1000)
            assert min(M.dist[x][p], M.dist[x][q]) > lower * gap(M, x, p, q)


@given(random_spaces)
@settings(max_examples=30, deadline=None)
def test_exposing_iff_oracle(M):
    for p, q in M.ordered_pairs():
        f = exposing_functional(M, p, q)
        assert (f is not None) == oracle_extreme(M, p, q)
        if f is not None:
            assert lip_norm(f) <= 1 and de_leeuw(f, p, q) == 1
            assert all(de_leeuw(f, x, y) < 1 for x, y in M.ordered_pairs() if (x, y) != (p, q))


@given(random_spaces)
@settings(max_examples=40, deadline=None)
def test_face_and_dpq_on_segment(M):
    for p, q in M.ordered_pairs():
        seg = segment(M, p, q)
        assert verify_dpq_on_segment(M, p, q)
        assert verify_face_on_segment(M, p, q)
        if seg == {p, q}:
            assert molecule_face(M, p, q) == {(p, q)}
            assert d_pq(M, p, q) <= {(p, q), (q, p)}


@given(random_spaces)
@settings(max_examples=40, deadline=None)
def test_some_molecule_is_extreme(M):
    dmin = min(M.dist[x][y] for x, y in M.ordered_pairs())
    p, q = next((x, y) for x, y in M.ordered_pairs() if M.dist[x][y] == dmin)
    assert segment(M, p, q) == {p, q}
    assert classify(M, p, q).is_extreme


@given(ultrametric_spaces)
@settings(max_examples=30, deadline=None)
def test_ultrametric_constant_at_most_one(M):
    for p, q in M.ordered_pairs():
        c = strongly_exposed_constant(M, p, q)
        assert c is not None and c <= 1


@given(tree_spaces)
@settings(max_examples=30, deadline=None)
def test_tree_constant_at_most_half(M):
    for p, q in M.ordered_pairs():
        if segment(M, p, q) == {p, q}:
            assert strongly_exposed_constant(M, p, q) <= F(1, 2)


def test_rebasing_preserves_classification():
    M = gen_random(5, 11, 4)
    for b in M.points():
        R = M.rebase(b)
        for p, q in M.ordered_pairs():
            assert oracle_extreme(R, p, q) == oracle_extreme(M, p, q)
            assert molecule_face(R, p, q) == molecule_face(M, p, q)
