"""Class atlases, dual-method enumeration, basis change, curve transport."""
import itertools
from fractions import Fraction

import pytest

from wpoly import (
    Quadruple,
    basis_change,
    build,
    canonical_form,
    enumerate_classes,
    equivalent,
    find_unimodular_triple,
    group_by_class,
    make_curve,
    map_curve,
    project,
    stabilization_report,
)
from wpoly.errors import PreconditionError

G1_CLASS_COUNT = 16
G2_CLASS_COUNT = 45


def _projected(q):
    p = build(q)
    return project(p, find_unimodular_triple(p))


def test_atlas_g1_d7_structure():
    atlas = group_by_class(1, 7)
    assert atlas.g == 1 and atlas.d_max == 7
    rows = [([*q.weights, q.d], e.n) for e in atlas.classes for q in e.members]
    assert rows == [
        ([1, 2, 3, 6], 7),
        ([1, 2, 3, 7], 8),
        ([1, 1, 2, 4], 9),
        ([1, 1, 1, 3], 10),
    ]


def test_atlas_classes_sorted_by_point_count():
    atlas = group_by_class(1, 30)
    ns = [e.n for e in atlas.classes]
    assert ns == sorted(ns)
    assert len(atlas.classes) == 8


def test_atlas_json_dict_shape():
    d = group_by_class(1, 7).to_json_dict()
    assert d["version"] == 1
    assert d["g"] == 1 and d["d_max"] == 7
    assert [c["n"] for c in d["classes"]] == [7, 8, 9, 10]
    assert d["classes"][0]["canonical"] == [[0, 0], [1, 0], [3, 6]]
    assert d["classes"][0]["members"] == [[1, 2, 3, 6]]


def test_atlas_bytes_deterministic_and_parallel_stable():
    serial = group_by_class(1, 20)
    again = group_by_class(1, 20)
    parallel = group_by_class(1, 20, jobs=4)
    assert serial.to_json_bytes() == again.to_json_bytes() == parallel.to_json_bytes()
    assert serial.to_json_bytes().endswith(b"\n")


def test_atlas_csv_golden():
    atlas = group_by_class(1, 7)
    assert atlas.to_csv_text() == (
        "w0,w1,w2,d,n,class_index\n"
        "1,2,3,6,7,0\n"
        "1,2,3,7,8,1\n"
        "1,1,2,4,9,2\n"
        "1,1,1,3,10,3\n"
    )


def test_atlas_members_all_share_class_polygon():
    atlas = group_by_class(1, 30)
    for entry in atlas.classes:
        for q in entry.members:
            poly = _projected(q)
            same, _ = equivalent(poly, entry.canonical)
            assert same, (q, entry.canonical.vertices)


def test_class_key_independent_of_triple_choice():
    # the canonical form must not depend on which |det| = d row triple
    # anchored the projection
    q = Quadruple(1, 3, 2, 7)
    p = build(q)
    base = canonical_form(project(p, find_unimodular_triple(p))).vertices
    found = 0
    for triple in itertools.combinations(p.points, 3):
        (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = triple
        det = (
            a0 * (b1 * c2 - b2 * c1)
            - a1 * (b0 * c2 - b2 * c0)
            + a2 * (b0 * c1 - b1 * c0)
        )
        if abs(det) != q.d:
            continue
        found += 1
        assert canonical_form(project(p, triple)).vertices == base
    assert found >= 10


def test_enum_inductive_g1_is_complete():
    classes = enumerate_classes(1, "inductive")
    assert len(classes) == G1_CLASS_COUNT
    assert all(p.i == 1 for p in classes)
    ns = sorted(p.n for p in classes)
    assert ns[0] == 4 and ns[-1] == 10


def test_enum_box_g1_default_bound_matches_inductive():
    box = {p.vertices for p in enumerate_classes(1, "box")}
    ind = {p.vertices for p in enumerate_classes(1, "inductive")}
    assert box == ind


def test_enum_box_bound3_misses_exactly_the_wide_triangle():
    # the triangle hull of (0,0),(2,0),(0,4) has width 4 in every
    # direction independent of x, so no 3x3 grid contains it
    box3 = {p.vertices for p in enumerate_classes(1, "box", box_bound=3)}
    ind = {p.vertices for p in enumerate_classes(1, "inductive")}
    assert len(box3) == 15
    assert ind - box3 == {((0, 0), (2, 0), (0, 4))}


def test_enum_g0_counts():
    classes = enumerate_classes(0, "inductive", n_max=4)
    by_n = {}
    for p in classes:
        by_n.setdefault(p.n, []).append(p.vertices)
    assert len(by_n[3]) == 1
    assert len(by_n[4]) == 2


def test_enum_g2_inductive_count():
    assert len(enumerate_classes(2, "inductive")) == G2_CLASS_COUNT


def test_enum_rejects_bad_args():
    with pytest.raises(ValueError):
        enumerate_classes(1, "exhaustive")
    with pytest.raises(PreconditionError):
        enumerate_classes(-1, "inductive")
    with pytest.raises(PreconditionError):
        enumerate_classes(1, "inductive", n_max=2)
    with pytest.raises(PreconditionError):
        enumerate_classes(1, "box", box_bound=0)


def test_basis_change_permutation_pair():
    qa, qb = Quadruple(1, 3, 2, 7), Quadruple(1, 2, 3, 7)
    same, witness = equivalent(_projected(qa), _projected(qb))
    assert same
    bc = basis_change(qa, qb, witness)
    assert bc.matrix == (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(1), Fraction(0)),
    )
    assert sorted(bc.row_map) == list(range(8))


def test_basis_change_identity_pair():
    q = Quadruple(1, 2, 3, 6)
    same, witness = equivalent(_projected(q), _projected(q))
    assert same
    bc = basis_change(q, q, witness)
    assert bc.matrix == (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    )
    assert bc.row_map == tuple(range(7))


def test_basis_change_denominators_divide_d():
    qa, qb = Quadruple(1, 1, 2, 4), Quadruple(1, 1, 2, 4)
    same, witness = equivalent(_projected(qa), _projected(qb))
    bc = basis_change(qa, qb, witness)
    for row in bc.matrix:
        for entry in row:
            assert (entry * qa.d).denominator == 1


def test_basis_change_rejects_wrong_witness():
    qa, qb = Quadruple(1, 3, 2, 7), Quadruple(1, 2, 3, 7)
    _, witness = equivalent(_projected(qa), _projected(qb))
    with pytest.raises(PreconditionError):
        basis_change(Quadruple(1, 1, 1, 3), Quadruple(1, 2, 3, 7), witness)


def test_make_curve_validates_terms():
    q = Quadruple(1, 3, 2, 7)
    curve = make_curve(q, [(1, (7, 0, 0)), (Fraction(1, 2), (0, 1, 2))])
    assert curve.terms == (
        (Fraction(1, 2), (0, 1, 2)),
        (Fraction(1), (7, 0, 0)),
    )
    with pytest.raises(ValueError):
        make_curve(q, [(1, (1, 1, 1))])  # degree 6 != 7
    with pytest.raises(ValueError):
        make_curve(q, [(0, (7, 0, 0))])
    with pytest.raises(ValueError):
        make_curve(q, [(1, (7, 0, 0)), (2, (7, 0, 0))])
    with pytest.raises(ValueError):
        make_curve(q, [])


def test_map_curve_permutation_pair():
    qa, qb = Quadruple(1, 3, 2, 7), Quadruple(1, 2, 3, 7)
    _, witness = equivalent(_projected(qa), _projected(qb))
    bc = basis_change(qa, qb, witness)
    curve = make_curve(qa, [(1, (7, 0, 0)), (3, (0, 1, 2)), (-2, (2, 1, 1))])
    mapped, warnings = map_curve(curve, bc, qb)
    assert mapped.quadruple == qb
    for coef, v in mapped.terms:
        assert sum(x * w for x, w in zip(v, qb.weights)) == qb.d
    assert {v for _, v in mapped.terms} == {(7, 0, 0), (0, 2, 1), (2, 1, 1)}
    # x2^2*x1 witnessed condition (i) for axis 2; its image (0,2,1) no
    # longer does, and the transport reports exactly that regression
    assert warnings == ("support condition (i) for axis 2 lost under mapping",)


def test_map_curve_full_support_has_no_warnings():
    qa, qb = Quadruple(1, 3, 2, 7), Quadruple(1, 2, 3, 7)
    _, witness = equivalent(_projected(qa), _projected(qb))
    bc = basis_change(qa, qb, witness)
    full = make_curve(qa, [(1, pt) for pt in build(qa).points])
    mapped, warnings = map_curve(full, bc, qb)
    assert len(mapped.terms) == 8
    assert warnings == ()


def test_map_curve_rejects_mismatched_basis_change():
    qa, qb = Quadruple(1, 3, 2, 7), Quadruple(1, 2, 3, 7)
    _, witness = equivalent(_projected(qa), _projected(qb))
    bc = basis_change(qa, qb, witness)
    curve = make_curve(qb, [(1, (7, 0, 0))])
    with pytest.raises(PreconditionError):
        map_curve(curve, bc, qb)


def test_stabilization_report():
    report = stabilization_report(1, [3, 7])
    assert report.steps == ((3, 1), (7, 4))
    assert report.growing
    stable = stabilization_report(1, [20, 30])
    assert not stable.growing
    assert stable.to_dict()["growing"] is False
    with pytest.raises(PreconditionError):
        stabilization_report(1, [10, 10])
    with pytest.raises(PreconditionError):
        stabilization_report(1, [])


def test_stabilization_counts_monotone_and_bounded():
    report = stabilization_report(1, [3, 7, 15, 30])
    counts = [c for _, c in report.steps]
    assert counts == sorted(counts)
    assert counts[-1] <= G1_CLASS_COUNT
