"""Split disjunctions: application, classification, rounds, enumeration, sweep."""

from fractions import Fraction

import pytest

from splitlab.geometry import GeometryError, Polyhedron, convex_hull, lattice_points
from splitlab.linalg import dot
from splitlab.splits import (
    Split,
    SplitSequence,
    SqrtRational,
    apply_split,
    classify_split,
    enumerate_splits,
    facet_split,
    facet_split_width_sq,
    round_of_splits,
    split_confines,
    sweep_sequence_2d,
)

from conftest import make_rng

F = Fraction

TYPE1_T = convex_hull([(0, 0), (2, 0), (0, 2)])
UNIT_SQ = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])


def hull_of_union(q: Polyhedron, s: Split) -> Polyhedron:
    """Brute-force oracle: hull of the vertex sets of the two slices."""
    a = s.pi
    lo = q.intersect_halfspace(a, F(s.pi0))
    hi = q.intersect_halfspace(tuple(-x for x in a), F(-(s.pi0 + 1)))
    verts = list(lo.vertices) + list(hi.vertices)
    if not verts:
        return Polyhedron.empty(q.dim)
    return convex_hull(verts, list(lo.rays) + list(hi.rays))


def test_split_validation():
    with pytest.raises(GeometryError):
        Split.make((0, 0), 1)
    with pytest.raises(GeometryError):
        Split.make((2, 4), 1)
    s = Split.make((1, 1), 2)
    assert s.partner() == Split.make((-1, -1), -3)
    assert s.same_disjunction(s.partner())
    assert s.partner().canonical() == s


def test_apply_split_regenerates_square():
    sq = convex_hull([(F(-1, 2), F(-1, 2)), (F(3, 2), F(-1, 2)),
                      (F(-1, 2), F(3, 2)), (F(3, 2), F(3, 2))])
    s = Split.make((1, 0), 0)
    assert apply_split(sq, s) == sq
    assert apply_split(sq, s) == hull_of_union(sq, s)


def test_apply_split_triangle():
    # hull of {x1+x2 <= 1 part} and {segment x1+x2 = 2} regenerates the triangle
    s = Split.make((1, 1), 1)
    assert apply_split(TYPE1_T, s) == hull_of_union(TYPE1_T, s) == TYPE1_T


def test_apply_split_cuts_corner():
    sq = convex_hull([(0, 0), (F(3, 2), 0), (0, F(3, 2)), (F(3, 2), F(3, 2))])
    s = Split.make((1, 1), 1)
    out = apply_split(sq, s)
    assert out == hull_of_union(sq, s)
    assert out != sq
    assert not out.contains((F(3, 2), 0))  # corner in the open slab is cut away
    assert set(lattice_points(out)) == set(lattice_points(sq))


def test_apply_split_empty_side():
    s = Split.make((1, 0), 5)
    out = apply_split(UNIT_SQ, s)
    assert out == UNIT_SQ  # all of the square is on the low side


def test_classify_flags():
    # both boundary planes meet the triangle
    c = classify_split(TYPE1_T, Split.make((1, 0), 0))
    assert c.intersecting and not c.chvatal
    # upper plane misses the triangle but the disjunction holds everywhere
    c = classify_split(TYPE1_T, Split.make((1, 1), 2))
    assert c.chvatal and c.englobing and not c.intersecting
    # unit square between consecutive planes: intersecting and englobing
    c = classify_split(UNIT_SQ, Split.make((1, 0), 0))
    assert c.intersecting and c.englobing


def test_englobing_idempotence_randomized():
    rng = make_rng()
    done = 0
    while done < 110:
        pts = [(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(4)]
        q = convex_hull(pts)
        pi = (rng.randint(-2, 2), rng.randint(-2, 2))
        if not any(pi):
            continue
        from splitlab.linalg import vec_gcd

        if vec_gcd(pi) != 1:
            continue
        s = Split.make(pi, rng.randint(-4, 4))
        flags = classify_split(q, s)
        out = apply_split(q, s)
        if flags.englobing:
            assert out == q
        if flags.chvatal:
            # one-sided: the result is the surviving slice
            a = s.pi
            low = q.intersect_halfspace(a, F(s.pi0))
            high = q.intersect_halfspace(
                tuple(-x for x in a), F(-(s.pi0 + 1))
            )
            assert out == (low if high.is_empty else out)
        assert out == hull_of_union(q, s)
        done += 1


def test_split_monotonicity_randomized():
    rng = make_rng()
    done = 0
    while done < 110:
        outer_pts = [(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(5)]
        outer = convex_hull(outer_pts)
        # inner hull from midpoints of outer vertices
        vs = outer.vertices
        if len(vs) < 3:
            continue
        inner = convex_hull(
            [
                tuple((vs[i][k] + vs[(i + 1) % len(vs)][k]) / 2 for k in range(2))
                for i in range(len(vs))
            ]
        )
        s = Split.make((1, rng.randint(-2, 2) * 2 + 1), rng.randint(-3, 3))
        assert apply_split(outer, s).contains_polyhedron(apply_split(inner, s))
        done += 1


def test_split_confines():
    assert split_confines(UNIT_SQ, Split.make((1, 0), 0))
    assert not split_confines(TYPE1_T, Split.make((1, 0), 0))
    assert not split_confines(TYPE1_T, Split.make((1, 1), 0))


def test_facet_split():
    s = facet_split(TYPE1_T, 0)
    a, b = TYPE1_T.facet_inequalities()[0]
    assert s.pi == a
    # the facet plane holds integer points, so it is a boundary plane
    assert s.pi0 == b or s.pi0 + 1 == b
    assert facet_split_width_sq(TYPE1_T, 0) <= 1


def test_facet_split_width_fractional():
    tri = convex_hull([(0, 0), (1, F(1, 2)), (0, 1)])
    widths = [
        facet_split_width_sq(tri, i) for i in range(len(tri.facet_inequalities()))
    ]
    assert any(w < 1 for w in widths)
    assert all(0 < w <= 1 for w in widths)


def test_round_of_splits_unit_square():
    out, width = round_of_splits(UNIT_SQ, UNIT_SQ)
    assert out == UNIT_SQ
    assert width.square == 1


def test_enumerate_splits_counts():
    box1 = ((F(0), F(2)), (F(0), F(2)))
    assert len(enumerate_splits(2, 1, box1)) == 20
    box2 = ((F(-1), F(3)), (F(-1), F(3)))
    assert len(enumerate_splits(2, 2, box2)) == 88
    # canonical: all leading nonzeros positive, no duplicates
    seen = set()
    for s in enumerate_splits(2, 2, box2):
        assert next(x for x in s.pi if x) > 0
        key = (s.pi, s.pi0)
        assert key not in seen
        seen.add(key)


def test_sqrt_rational():
    r = SqrtRational(F(2))
    lo, hi = r.decimal_lower(12), r.decimal_upper(12)
    assert lo == "1.414213562373"
    assert hi == "1.414213562374"
    assert SqrtRational(F(1, 4)).decimal_lower(3) == "0.500"
    assert SqrtRational(F(1, 4)).decimal_upper(3) == "0.500"
    assert SqrtRational(F(1, 5)) < SqrtRational(F(1, 4))


def test_sweep_sequence():
    q = convex_hull(
        [(0, -1), (3, -1), (0, 0), (3, 0), (1, F(3, 4)), (2, F(3, 4))]
    )
    chv = Split.make((0, 1), 0)
    apex = (F(3, 2), F(7, 8))
    seq = sweep_sequence_2d(q, chv, apex)
    assert [(s.pi, s.pi0) for s in seq.splits] == [((1, -1), 0), ((1, 1), 2)]
    cur = q
    for s in seq.splits:
        cur = apply_split(cur, s)
    pyramid = Polyhedron.from_generators([apex, (0, 0), (3, 0)])
    upper = cur.intersect_halfspace((0, -1), F(0))
    assert pyramid.contains_polyhedron(upper)
    # the part below the near plane is untouched
    low = (0, 1)
    assert cur.intersect_halfspace(low, F(0)) == q.intersect_halfspace(low, F(0))


def test_sweep_trivial_and_errors():
    chv = Split.make((0, 1), 0)
    below = convex_hull([(0, -2), (3, -2), (0, -1), (3, -1)])
    assert sweep_sequence_2d(below, chv, (F(3, 2), F(1, 2))).splits == ()
    q = convex_hull([(0, -1), (3, -1), (1, F(3, 4)), (2, F(3, 4)), (0, 0), (3, 0)])
    with pytest.raises(GeometryError):
        sweep_sequence_2d(q, chv, (F(3, 2), F(3, 2)))  # apex above the far plane
    straddling = convex_hull([(0, 0), (2, 0), (1, 2)])
    with pytest.raises(GeometryError):
        sweep_sequence_2d(straddling, chv, (F(1, 2), F(1, 2)))  # not Chvatal


def test_sequence_provenance():
    with pytest.raises(GeometryError):
        SplitSequence((Split.make((1, 0), 0),), ())
    seq = SplitSequence.make([Split.make((1, 0), 0)])
    assert seq.provenance == ("user",)
