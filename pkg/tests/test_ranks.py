"""Lifted cones, height probing, the finite-rank executor, facet repair."""

from fractions import Fraction

import pytest

from splitlab.cuts import CornerModel
from splitlab.geometry import (
    GeometryError,
    Hyperplane,
    Polyhedron,
    convex_hull,
    lattice_points,
)
from splitlab.linalg import dot
from splitlab.ranks import (
    EnumerateStrategy,
    ExplicitStrategy,
    FacetRoundsStrategy,
    execute_finite_rank,
    height_at,
    lift,
    max_height,
    necessity_witness,
    probe_rounds,
    reduction_coefficient,
    region_bound_check,
    rotate_facet,
)
from splitlab.splits import Split, SplitSequence

from conftest import make_rng

F = Fraction

TYPE1_T = convex_hull([(0, 0), (2, 0), (0, 2)])
TYPE1_MODEL = CornerModel.make(
    (F(1, 2), F(1, 2)),
    [(F(-1, 2), F(-1, 2)), (F(3, 2), F(-1, 2)), (F(-1, 2), F(3, 2))],
)
PROBE_BOX = ((F(-1), F(3)), (F(-1), F(3)))

UNIT_SQ = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
SQ_MODEL = CornerModel.make((F(1, 2), F(1, 2)), [(1, 0), (-1, 0), (0, 1), (0, -1)])

T2 = convex_hull([(0, F(-1, 2)), (0, F(3, 2)), (2, F(1, 2))])
T2_MODEL = CornerModel.make(
    (F(1, 2), F(1, 2)),
    [(F(-1, 2), -1), (F(-1, 2), 1), (F(3, 2), 0)],
)


def test_lift_heights():
    cone = lift(TYPE1_MODEL, TYPE1_T, floor=4)
    assert height_at(cone.poly, TYPE1_MODEL.f) == 1  # apex
    assert height_at(cone.poly, (0, 0)) == 0  # boundary anchor
    assert height_at(cone.poly, (F(1, 4), F(1, 4))) == F(1, 2)
    assert height_at(cone.poly, (10, 10)) is None
    assert max_height(cone.poly) == 1
    # both lift kinds agree when rays go into the corners
    other = lift(TYPE1_MODEL, TYPE1_T, kind="P^L(x,z)", floor=4)
    assert other.poly == cone.poly


def test_height_concavity_randomized():
    rng = make_rng()
    cone = lift(TYPE1_MODEL, TYPE1_T, floor=4)
    done = 0
    while done < 110:
        x = (F(rng.randint(-8, 12), 4), F(rng.randint(-8, 12), 4))
        y = (F(rng.randint(-8, 12), 4), F(rng.randint(-8, 12), 4))
        hx, hy = height_at(cone.poly, x), height_at(cone.poly, y)
        if hx is None or hy is None:
            continue
        t = F(rng.randint(0, 4), 4)
        mid = tuple(t * a + (1 - t) * b for a, b in zip(x, y))
        hm = height_at(cone.poly, mid)
        assert hm is not None and hm >= t * hx + (1 - t) * hy
        done += 1


def test_probe_persistence_type1():
    cone = lift(TYPE1_MODEL, TYPE1_T, floor=4)
    report = probe_rounds(
        cone, EnumerateStrategy(2, PROBE_BOX), 3, [TYPE1_MODEL.f]
    )
    assert report.verdict == "persists_positive_through_budget"
    heights = [p.samples[0][1] for p in report.profiles]
    assert heights == [1, F(1, 3), F(1, 5), F(1, 11)]
    tops = [p.global_max for p in report.profiles]
    assert tops == [1, F(1, 2), F(1, 4), F(1, 8)]


def test_probe_monotone_heights():
    cone = lift(TYPE1_MODEL, TYPE1_T, floor=4)
    report = probe_rounds(
        cone, EnumerateStrategy(1, PROBE_BOX), 3, [TYPE1_MODEL.f, (1, 1)]
    )
    prev = None
    for profile in report.profiles:
        top = profile.global_max
        if prev is not None:
            assert top <= prev
        prev = top


def test_probe_floor_insensitive():
    for floor in (2, 8, 32):
        cone = lift(TYPE1_MODEL, TYPE1_T, floor=floor)
        report = probe_rounds(
            cone, EnumerateStrategy(1, PROBE_BOX), 2, [TYPE1_MODEL.f]
        )
        assert [p.samples[0][1] for p in report.profiles] == [1, F(1, 3), F(1, 5)]


def test_probe_facet_rounds_strategy():
    cone = lift(TYPE1_MODEL, TYPE1_T, floor=4)
    report = probe_rounds(
        cone, FacetRoundsStrategy((TYPE1_T, TYPE1_T)), 2, [TYPE1_MODEL.f]
    )
    heights = [p.samples[0][1] for p in report.profiles]
    assert heights[0] == 1
    assert all(h > 0 for h in heights)
    assert heights[1] < heights[0]


def test_executor_slab():
    cone = lift(SQ_MODEL, UNIT_SQ, floor=8)
    report = execute_finite_rank(
        cone, (SplitSequence.make([]), Split.make((1, 0), 0))
    )
    assert report.verdict == "height_nonpositive_at_round_q"
    assert report.q == 1
    assert report.profiles[-1].samples[0][1] == 0  # exact zero at the apex shadow


def test_executor_type2_regression():
    cone = lift(T2_MODEL, T2, floor=8)
    program = (SplitSequence.make([Split.make((0, 1), 0)]), Split.make((1, 0), 0))
    report = execute_finite_rank(cone, program)
    assert report.verdict == "height_nonpositive_at_round_q"
    assert report.q == 5  # frozen regression value
    assert report.rounds_applied == 1
    assert report.profiles[-1].global_max == 0
    # the recorded sequence replays to the same bound
    replay = probe_rounds(
        cone, ExplicitStrategy(report.sequence), report.q, [T2_MODEL.f]
    )
    assert replay.verdict == "height_nonpositive_at_round_q"
    assert replay.q == report.q


def test_executor_rejects_type1_programs():
    cone = lift(TYPE1_MODEL, TYPE1_T, floor=8)
    # no split confines the triangle (lattice width 2), so no program validates
    for pi, pi0 in (((1, 0), 0), ((0, 1), 0), ((1, 1), 0), ((1, 1), 1)):
        with pytest.raises(GeometryError):
            execute_finite_rank(
                cone, (SplitSequence.make([]), Split.make(pi, pi0))
            )
    # a non-intersecting program split is rejected as well
    with pytest.raises(GeometryError):
        execute_finite_rank(
            cone,
            (SplitSequence.make([Split.make((1, 0), 10)]), Split.make((1, 0), 0)),
        )


def test_necessity_witness():
    face, point = necessity_witness(TYPE1_T)
    assert set(face.vertices) == set(TYPE1_T.vertices)
    assert face.relint_contains(point)
    lp = convex_hull(
        [
            (F(1, 4), F(1, 4), F(3, 2)),
            (F(-1, 2), F(-1, 2), 0),
            (F(5, 2), F(-1, 2), 0),
            (F(-1, 2), F(5, 2), 0),
        ]
    )
    assert necessity_witness(lp) is None


def test_reduction_coefficient_type2():
    report = reduction_coefficient(T2, Split.make((0, 1), 0))
    assert not report.degenerate
    assert report.width.square == F(1, 5)
    assert report.diam.square == 5
    assert [s.square for s in report.sines] == [F(1, 5), F(1, 5)]
    assert report.delta.square == F(1, 125)


def test_reduction_coefficient_degenerate():
    # englobing split leaves the square unchanged: delta = 1
    report = reduction_coefficient(UNIT_SQ, Split.make((1, 0), 0))
    assert report.degenerate and report.delta.square == 1
    # split kills the dimension: delta = 1
    report = reduction_coefficient(TYPE1_T, Split.make((1, 1), 3))
    assert report.degenerate and report.delta.square == 1


def test_region_bound_check():
    cone = lift(TYPE1_MODEL, TYPE1_T, floor=4)
    assert region_bound_check(cone.poly, TYPE1_T, 1, 0)
    assert region_bound_check(cone.poly, TYPE1_T, 1, F(1, 2))
    assert not region_bound_check(cone.poly, TYPE1_T, F(1, 2), 0)
    with pytest.raises(GeometryError):
        region_bound_check(cone.poly, TYPE1_T, 0, 0)


def test_rotate_facet_example():
    body = Polyhedron.from_inequalities(
        [((-2, 0), F(1)), ((0, -2), F(1)), ((2, 2), F(1))], 2
    )
    repaired = rotate_facet(body, 2)
    assert repaired.contains_polyhedron(body)
    assert lattice_points(repaired) == lattice_points(body)
    new = set(repaired.facet_inequalities()) - set(body.facet_inequalities())
    assert {(a, b) for a, b in new} == {((7, 8), F(5))}
    with pytest.raises(GeometryError):
        rotate_facet(TYPE1_T, 0)  # every facet plane of the triangle is integer
