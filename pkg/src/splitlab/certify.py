"""Decision procedures around integer hulls and the two-hyperplane property.

A finite integer point set is 2-partitionable when it splits into two
nonempty classes lying on the two boundary planes of a single split
disjunction.  A lattice-free polytope has the 2-hyperplane property when
every face of its integer hull not contained in one of its facets is
2-partitionable; the laboratory uses this as the finite-split-rank
criterion and, in dimension 2, pairs it with the classification of
maximal lattice-free sets.
"""

from __future__ import annotations

from itertools import combinations
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cuts import CornerModel, boundary_hull, rays_into_corners
from .geometry import (
    GeometryError,
    Point,
    Polyhedron,
    as_point,
    cone_rays,
    convex_hull,
    integer_solve,
    lattice_points,
    require_lattice_free,
)
from .linalg import dot, scale_primitive
from .splits import Split

PARTITION_CAP = 20


@dataclass(frozen=True)
class PartitionCertificate:
    """Outcome of a 2-partitionability search with full evidence."""

    outcome: str  # partitionable | not_partitionable | trivially_partitionable
    split: Optional[Split]
    s1: tuple[Point, ...]
    s2: tuple[Point, ...]


@dataclass(frozen=True)
class FaceEntry:
    face: Polyhedron
    contained_in_facet: bool
    certificate: Optional[PartitionCertificate]


@dataclass(frozen=True)
class TwoHPReport:
    entries: tuple[FaceEntry, ...]
    overall: bool


@dataclass(frozen=True)
class Classification2D:
    kind: str
    integer_points_on_boundary: tuple[Point, ...]


def integer_hull(l: Polyhedron) -> Polyhedron:
    """Convex hull of the integer points of a bounded polyhedron."""
    pts = lattice_points(l)  # raises on unbounded input
    if not pts:
        return Polyhedron.empty(l.dim)
    return convex_hull(pts)


def faces(p: Polyhedron) -> list[Polyhedron]:
    """All nonempty faces of a polytope, including p itself.

    Faces are intersections of facet-defining hyperplanes, so the face
    lattice is the closure of the facet vertex sets under intersection.
    """
    if p.is_empty:
        return []
    if not p.is_bounded:
        raise GeometryError("face enumeration needs a bounded polyhedron")
    verts = p.vertices
    tight = [
        frozenset(i for i, v in enumerate(verts) if dot(a, v) == b)
        for a, b in p.facet_inequalities()
    ]
    sets = {frozenset(range(len(verts)))}
    frontier = list(sets)
    while frontier:
        current = frontier.pop()
        for t in tight:
            s = current & t
            if s and s not in sets:
                sets.add(s)
                frontier.append(s)
    out = [convex_hull([verts[i] for i in s]) for s in sets]
    out.sort(key=lambda f: (f.affine_dim(), f.vertices))
    return out


def face_in_facet(face: Polyhedron, l: Polyhedron) -> bool:
    """True iff some facet inequality of l is tight on all of the face."""
    if face.is_empty or not l.contains_polyhedron(face):
        raise GeometryError("face must be a nonempty subset of the polyhedron")
    for a, b in l.facet_inequalities():
        if all(dot(a, v) == b for v in face.vertices) and all(
            dot(a, r) == 0 for r in face.rays
        ):
            return True
    return False


def is_2partitionable(points: Sequence[Sequence]) -> PartitionCertificate:
    """Search for a split whose boundary planes carry a bipartition of S.

    Bipartitions are scanned by size of the first class, then
    lexicographically, and the first witness is returned.  The witness
    split is automatically coprime: its values on the two classes are
    consecutive integers.
    """
    pts = sorted(as_point(q) for q in points)
    for q in pts:
        if any(c.denominator != 1 for c in q):
            raise GeometryError("2-partitionability is defined for integer points")
    if len(pts) > PARTITION_CAP:
        raise GeometryError(
            f"point set exceeds the combinatorial cap of {PARTITION_CAP}"
        )
    if len(pts) <= 1:
        return PartitionCertificate("trivially_partitionable", None, tuple(pts), ())
    n = len(pts)
    m = len(pts[0])
    ints = [tuple(int(c) for c in q) for q in pts]
    for size in range(1, n):
        for combo in combinations(range(n), size):
            chosen = set(combo)
            rows = []
            for i, q in enumerate(ints):
                # unknowns (pi, c): pi.q - c = 0 on S1 and = 1 on S2
                rows.append((q + (-1,), 0 if i in chosen else 1))
            sol = integer_solve(rows)
            if sol is None:
                continue
            pi, c = sol[:m], sol[m]
            s1 = tuple(pts[i] for i in combo)
            s2 = tuple(pts[i] for i in range(n) if i not in chosen)
            split = Split.make(pi, c)
            assert all(dot(split.pi, q) == split.pi0 for q in s1)
            assert all(dot(split.pi, q) == split.pi0 + 1 for q in s2)
            return PartitionCertificate("partitionable", split, s1, s2)
    return PartitionCertificate("not_partitionable", None, (), ())


def has_2hyperplane_property(l: Polyhedron) -> TwoHPReport:
    """Certify every face of the integer hull not lying in a facet of l."""
    if not l.is_bounded:
        raise GeometryError("the 2-hyperplane check needs a bounded polyhedron")
    require_lattice_free(l)
    hull = integer_hull(l)
    if hull.is_empty:
        return TwoHPReport((), True)
    entries = []
    overall = True
    for face in faces(hull):
        contained = face_in_facet(face, l)
        cert = None
        if not contained:
            cert = is_2partitionable(lattice_points(face))
            if cert.outcome == "not_partitionable":
                overall = False
        entries.append(FaceEntry(face, contained, cert))
    return TwoHPReport(tuple(entries), overall)


def classify_2d(l: Polyhedron) -> Classification2D:
    """Classify a 2D lattice-free polytope with nonempty interior.

    Slab pattern first (two parallel facets on consecutive integer
    levels of a common normal), then the maximality criterion: every
    facet must carry an integer point in its relative interior.
    Maximal sets are a triangle of type 1, 2 or 3 or a quadrilateral.
    """
    if l.dim != 2:
        raise GeometryError("classification is only defined in dimension 2")
    if not l.is_bounded:
        raise GeometryError("classification needs a bounded polyhedron")
    if l.is_empty or l.affine_dim() != 2:
        raise GeometryError("classification needs a full-dimensional polytope")
    require_lattice_free(l)
    pts = tuple(lattice_points(l))
    facets = l.facet_inequalities()
    facet_set = set(facets)
    for a, b in facets:
        partner = (tuple(-x for x in a), -(b - 1))
        if b.denominator == 1 and partner in facet_set:
            return Classification2D("split", pts)
    relint_counts = []
    for a, b in facets:
        endpoints = [v for v in l.vertices if dot(a, v) == b]
        count = sum(
            1 for q in pts if dot(a, q) == b and q not in endpoints
        )
        relint_counts.append(count)
    if any(c == 0 for c in relint_counts):
        return Classification2D("non_maximal", pts)
    if len(facets) == 3:
        if all(c.denominator == 1 for v in l.vertices for c in v):
            return Classification2D("triangle_type1", pts)
        if any(c >= 2 for c in relint_counts):
            return Classification2D("triangle_type2", pts)
        return Classification2D("triangle_type3", pts)
    if len(facets) == 4:
        return Classification2D("quadrilateral", pts)
    return Classification2D("other", pts)


def infinite_rank_2d(model: CornerModel, l: Polyhedron) -> bool:
    """Infinite-rank predicate for the cut generated by a 2D model.

    True iff the hull of the ray boundary points is a type-1 triangle
    with every corner hit by a ray; cross-checked against the negation
    of the 2-hyperplane property of that hull.
    """
    if model.dim != 2 or l.dim != 2:
        raise GeometryError("the predicate is only defined in dimension 2")
    # the rays positively span the plane iff their dual cone is {0}
    dual_lines, dual_rays = cone_rays(
        [scale_primitive(r) for r in model.rays], 2
    )
    if dual_lines or dual_rays:
        raise GeometryError("model rays must positively span the plane")
    hull = boundary_hull(model, l)
    cls = classify_2d(hull)
    verdict = cls.kind == "triangle_type1" and rays_into_corners(model, hull)
    report = has_2hyperplane_property(hull)
    if verdict != (not report.overall):
        raise GeometryError(
            "internal cross-check failed: classification and the "
            "2-hyperplane property disagree"
        )
    return verdict
