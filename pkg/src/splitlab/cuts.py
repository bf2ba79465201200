"""Intersection cuts from lattice-free polytopes.

Given a fractional point f, rays r^1..r^k and a bounded lattice-free
polytope L with f in its interior, the cut coefficient for a ray is the
gauge of L - f evaluated at the ray: the reciprocal of the step at which
the half-line from f exits L.  The cut reads sum(psi_j * s_j) >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (
    GeometryError,
    Point,
    Polyhedron,
    as_point,
    convex_hull,
    require_lattice_free,
)
from .linalg import dot


@dataclass(frozen=True)
class CornerModel:
    """A fractional point together with the rays of its corner relaxation."""

    f: Point
    rays: tuple[Point, ...]

    @staticmethod
    def make(f: Sequence, rays: Sequence[Sequence]) -> "CornerModel":
        fp = as_point(f)
        if all(c.denominator == 1 for c in fp):
            raise GeometryError("corner point must be fractional")
        rs = tuple(as_point(r) for r in rays)
        for r in rs:
            if len(r) != len(fp):
                raise GeometryError("ray dimension mismatch")
            if not any(r):
                raise GeometryError("rays must be nonzero")
        return CornerModel(fp, rs)

    @property
    def dim(self) -> int:
        return len(self.f)


@dataclass(frozen=True)
class CutCoefficients:
    """Coefficients psi, one per model ray; the cut is sum(psi_j s_j) >= 1."""

    psi: tuple[Fraction, ...]


def _check_gauge_input(l: Polyhedron, f: Point, r: Point) -> None:
    if not l.is_bounded:
        raise GeometryError("gauge requires a bounded set")
    if not any(r):
        raise GeometryError("gauge of the zero ray is undefined")
    if not l.interior_contains(f):
        raise GeometryError("reference point must lie in the interior")


def gauge(l: Polyhedron, f: Sequence, r: Sequence) -> Fraction:
    """psi(r) = 1/max{lambda >= 0 : f + lambda r in L}.

    Computed by exact ray-facet intersection: the exit step is the least
    positive crossing parameter over facets the ray moves toward.
    """
    fp, rp = as_point(f), as_point(r)
    _check_gauge_input(l, fp, rp)
    lam: Optional[Fraction] = None
    for a, b in l.inequalities:
        slope = dot(a, rp)
        if slope > 0:
            cand = (b - dot(a, fp)) / slope
            if lam is None or cand < lam:
                lam = cand
    if lam is None:
        raise GeometryError("ray never exits the set; input is unbounded")
    return 1 / lam


def boundary_point(l: Polyhedron, f: Sequence, r: Sequence) -> Point:
    """Where the half-line from f along r crosses the boundary of L."""
    fp, rp = as_point(f), as_point(r)
    lam = 1 / gauge(l, fp, rp)
    return tuple(x + lam * y for x, y in zip(fp, rp))


def intersection_cut(model: CornerModel, l: Polyhedron) -> CutCoefficients:
    """Cut coefficients of the L-cut for every ray of the model."""
    require_lattice_free(l)
    return CutCoefficients(tuple(gauge(l, model.f, r) for r in model.rays))


def rays_into_corners(model: CornerModel, l: Polyhedron) -> bool:
    """True iff every vertex of L is hit by the boundary point of some ray."""
    if not l.interior_contains(model.f):
        raise GeometryError("reference point must lie in the interior")
    hit = {boundary_point(l, model.f, r) for r in model.rays}
    return all(v in hit for v in l.vertices)


def boundary_hull(model: CornerModel, l: Polyhedron) -> Polyhedron:
    """Convex hull of the ray boundary points of L."""
    if not l.interior_contains(model.f):
        raise GeometryError("reference point must lie in the interior")
    return convex_hull([boundary_point(l, model.f, r) for r in model.rays])
