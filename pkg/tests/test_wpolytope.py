"""Polytope construction, minors, case identities, decompositions."""
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpoly import (
    Quadruple,
    build,
    decompose,
    distinguished_triangle,
    enumerate_g_good,
    find_unimodular_triple,
    interior_count,
    minor_det,
    verify_case_identities,
)
from wpoly.errors import InvariantViolation, PreconditionError

# one hand-checked instance per case tag
CASE_INSTANCES = {
    "a.i": (3, 4, 5, 13),
    "a.ii": (2, 3, 5, 17),
    "b.i": (4, 7, 13, 39),
    "b.ii": (1, 2, 3, 11),
    "b.iii": (1, 3, 2, 7),
    "c": (1, 2, 1, 5),
    "d": (1, 1, 1, 3),
}


def test_build_point_list_frozen():
    p = build(Quadruple(1, 3, 2, 7))
    assert p.points == (
        (0, 1, 2),
        (1, 0, 3),
        (1, 2, 0),
        (2, 1, 1),
        (3, 0, 2),
        (4, 1, 0),
        (5, 0, 1),
        (7, 0, 0),
    )
    assert p.n == 8
    assert p.interior == ((2, 1, 1),)
    assert not p.exceptional_bound


def test_build_rejects_non_good():
    with pytest.raises(PreconditionError):
        build(Quadruple(1, 1, 3, 5))


def test_interior_matches_genus_and_shifted_count():
    for tup in [(1, 1, 1, 3), (1, 2, 3, 7), (1, 2, 1, 5), (1, 1, 1, 4)]:
        p = build(Quadruple(*tup))
        assert len(p.interior) == p.genus == interior_count(p)


def test_exceptional_bound_only_for_cubic():
    p = build(Quadruple(1, 1, 1, 3))
    assert p.n == 10 and p.exceptional_bound
    for tup in [(1, 1, 2, 4), (1, 2, 3, 6), (1, 2, 3, 7)]:
        q = build(Quadruple(*tup))
        assert q.n <= 9 and not q.exceptional_bound


def test_minor_det_example():
    assert minor_det((4, 1, 0), (2, 1, 1), (1, 2, 0)) == -7
    assert minor_det((1, 0, 0), (0, 1, 0), (0, 0, 1)) == 1


def test_all_minors_divisible_by_d():
    for tup in CASE_INSTANCES.values():
        q = Quadruple(*tup)
        p = build(q)
        for a, b, c in combinations(p.points, 3):
            assert minor_det(a, b, c) % q.d == 0


def test_find_unimodular_triple_frozen():
    p = build(Quadruple(1, 1, 1, 3))
    t = find_unimodular_triple(p)
    assert t == ((0, 0, 3), (0, 1, 2), (1, 0, 2))
    assert abs(minor_det(*t)) == 3


def test_find_unimodular_triple_always_exists_in_small_corpus():
    for g in (1, 2):
        for q in enumerate_g_good(g, 25):
            p = build(q)
            t = find_unimodular_triple(p)
            assert abs(minor_det(*t)) == q.d


def test_case_tags_and_determinants():
    expected = {
        "a.i": (13, None, None),
        "a.ii": (102, 2, 1),
        "b.i": (117, 1, None),
        "b.ii": (165, 5, None),
        "b.iii": (42, 1, None),
        "c": (50, 5, 2),
        "d": (27, 3, None),
    }
    for tag, tup in CASE_INSTANCES.items():
        p = build(Quadruple(*tup))
        rep = verify_case_identities(p)
        assert rep.triangle.case_tag == tag, tup
        det, k, l = expected[tag]
        assert rep.actual_det == rep.predicted_det == det, tup
        assert rep.triangle.k == k and rep.triangle.l == l, tup


def test_case_rows_frozen_for_biii():
    tri = distinguished_triangle(build(Quadruple(1, 3, 2, 7)))
    assert tri.rows == ((7, 0, 0), (1, 2, 0), (1, 0, 3))
    assert tri.permutation == (0, 1, 2)


def test_case_report_dict_shape():
    d = verify_case_identities(build(Quadruple(1, 1, 1, 3))).to_dict()
    assert d["case"] == "d"
    assert d["actual_det"] == d["predicted_det"] == 27
    assert len(d["rows"]) == 3


def test_case_identities_whole_small_corpus():
    for g in (1, 2, 3):
        for q in enumerate_g_good(g, 30):
            rep = verify_case_identities(build(q))
            assert rep.actual_det == rep.predicted_det, q


def test_decompose_frozen_values():
    p = build(Quadruple(1, 3, 2, 7))
    t = find_unimodular_triple(p)
    assert t == ((0, 1, 2), (1, 0, 3), (1, 2, 0))
    assert decompose(p, t, (7, 0, 0)).alphas == (-6, 4, 3)
    p3 = build(Quadruple(1, 1, 1, 3))
    t3 = find_unimodular_triple(p3)
    assert decompose(p3, t3, (2, 2, 2)).alphas == (-2, 2, 2)


def test_decompose_over_alternative_triple():
    # any row triple with |det| = d works, not just the lex-first one
    p = build(Quadruple(1, 3, 2, 7))
    t = ((4, 1, 0), (2, 1, 1), (1, 2, 0))
    assert decompose(p, t, (7, 0, 0)).alphas == (2, 0, -1)


def test_decompose_alpha_sum_equals_degree_multiple():
    q = Quadruple(1, 2, 3, 11)
    p = build(q)
    t = find_unimodular_triple(p)
    for mult in (1, 2, 3):
        target = (mult * q.d, 0, 0)
        assert sum(decompose(p, t, target).alphas) == mult


def test_decompose_rejects_bad_inputs():
    p = build(Quadruple(1, 3, 2, 7))
    t = find_unimodular_triple(p)
    with pytest.raises(PreconditionError):
        decompose(p, ((1, 2, 0), (3, 0, 2), (5, 0, 1)), (7, 0, 0))  # |det| = 14
    with pytest.raises(PreconditionError):
        decompose(p, t, (1, 0, 0))  # degree not a multiple of d
    with pytest.raises(PreconditionError):
        decompose(p, t, (-7, 0, 0))


def test_every_point_decomposes_over_lex_triple():
    for g in (1, 2):
        for q in enumerate_g_good(g, 20):
            p = build(q)
            t = find_unimodular_triple(p)
            for pt in p.points:
                dec = decompose(p, t, pt)
                assert sum(dec.alphas) == 1, (q, pt)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 8), st.integers(2, 30))
def test_point_count_bound_holds_everywhere(w0, w1, w2, d):
    # n <= 3g + 7 is enforced inside build(); reaching this line means the
    # invariant held (a violation raises)
    from wpoly import validate

    q = Quadruple(w0, w1, w2, d)
    if not validate(q).is_good:
        return
    p = build(q)
    assert p.n <= 3 * p.genus + 7
