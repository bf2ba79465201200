"""Split disjunctions and their action on rational polyhedra.

A split (pi, pi0) is the disjunction pi.x <= pi0 or pi.x >= pi0 + 1 with
integer data and coprime pi.  Applying it to a polyhedron takes the
convex hull of the two clipped pieces, computed exactly from generator
representations.  Widths of facet-split rounds are irrational in
general and are carried as exact squared rationals with certified
decimal bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Optional, Sequence

from .geometry import (
    GeometryError,
    IntVec,
    Point,
    Polyhedron,
    as_point,
    _h_to_v,
)
from .linalg import dot, integer_solve_rows, scale_primitive, vec_gcd


@dataclass(frozen=True)
class SqrtRational:
    """The nonnegative square root of a nonnegative rational, kept exact.

    Comparisons go through the squares; decimal bounds are produced by
    integer square roots, so they are certified outward roundings.
    """

    square: Fraction

    def __post_init__(self):
        if self.square < 0:
            raise ValueError("negative square")

    def __lt__(self, other: "SqrtRational") -> bool:
        return self.square < other.square

    def __le__(self, other: "SqrtRational") -> bool:
        return self.square <= other.square

    def __mul__(self, other: "SqrtRational") -> "SqrtRational":
        return SqrtRational(self.square * other.square)

    def __truediv__(self, other: "SqrtRational") -> "SqrtRational":
        return SqrtRational(self.square / other.square)

    def _scaled_floor_root(self, digits: int) -> int:
        p, q = self.square.numerator, self.square.denominator
        return isqrt(p * 10 ** (2 * digits) // q)

    def is_exact_at(self, digits: int) -> bool:
        r = self._scaled_floor_root(digits)
        return Fraction(r, 10**digits) ** 2 == self.square

    def decimal_lower(self, digits: int = 12) -> str:
        return _format_scaled(self._scaled_floor_root(digits), digits)

    def decimal_upper(self, digits: int = 12) -> str:
        r = self._scaled_floor_root(digits)
        if not self.is_exact_at(digits):
            r += 1
        return _format_scaled(r, digits)


def _format_scaled(scaled: int, digits: int) -> str:
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class Split:
    """The disjunction pi.x <= pi0 or pi.x >= pi0 + 1."""

    pi: IntVec
    pi0: int

    def __post_init__(self):
        if not any(self.pi):
            raise GeometryError("split direction must be nonzero")
        if vec_gcd(self.pi) != 1:
            raise GeometryError("split direction must be a coprime integer vector")

    @staticmethod
    def make(pi: Sequence[int], pi0: int) -> "Split":
        return Split(tuple(int(x) for x in pi), int(pi0))

    def partner(self) -> "Split":
        """The same disjunction written from the other side."""
        return Split(tuple(-x for x in self.pi), -self.pi0 - 1)

    def canonical(self) -> "Split":
        lead = next(x for x in self.pi if x != 0)
        return self if lead > 0 else self.partner()

    def same_disjunction(self, other: "Split") -> bool:
        return self.canonical() == other.canonical()


@dataclass(frozen=True)
class SplitSequence:
    """An ordered list of splits with a provenance tag per entry."""

    splits: tuple[Split, ...]
    provenance: tuple[str, ...]

    def __post_init__(self):
        if len(self.splits) != len(self.provenance):
            raise GeometryError("one provenance tag per split required")

    @staticmethod
    def make(splits: Sequence[Split], provenance: Optional[Sequence[str]] = None) -> "SplitSequence":
        tags = tuple(provenance) if provenance is not None else ("user",) * len(splits)
        return SplitSequence(tuple(splits), tags)


@dataclass(frozen=True)
class SplitClass:
    """Classification flags of a split relative to a polyhedron."""

    intersecting: bool
    englobing: bool
    chvatal: bool


def embed_normal(pi: IntVec, dim: int, split_coords: Optional[Sequence[int]]) -> IntVec:
    coords = tuple(split_coords) if split_coords is not None else tuple(range(len(pi)))
    if len(coords) != len(pi) or any(c < 0 or c >= dim for c in coords):
        raise GeometryError("split coordinates do not fit the ambient dimension")
    full = [0] * dim
    for c, v in zip(coords, pi):
        full[c] = v
    return tuple(full)


def _halfspace_generators(
    q: Polyhedron, a: IntVec, b: Fraction
) -> tuple[list[Point], list[IntVec]]:
    """Generators of q intersected with {x : a.x <= b}."""
    verts = [v for v in q.vertices if dot(a, v) <= b]
    rays = [r for r in q.rays if dot(a, r) <= 0]
    if len(verts) == len(q.vertices) and len(rays) == len(q.rays):
        return verts, rays
    rows = list(q.inequalities) + [(a, b), (tuple(-x for x in a), -b)]
    slice_verts, slice_rays = _h_to_v(rows, q.dim)
    return verts + slice_verts, rays + slice_rays


def apply_split(
    q: Polyhedron, s: Split, split_coords: Optional[Sequence[int]] = None
) -> Polyhedron:
    """Convex hull of the two pieces of q cut out by the disjunction."""
    if q.is_empty:
        return q
    a = embed_normal(s.pi, q.dim, split_coords)
    lo = Fraction(s.pi0)
    hi = Fraction(s.pi0 + 1)
    vals = [dot(a, v) for v in q.vertices]
    ray_vals = [dot(a, r) for r in q.rays]
    if all(v <= lo or v >= hi for v in vals):
        # every generator already satisfies the disjunction
        if all(v <= lo for v in vals) and all(rv <= 0 for rv in ray_vals):
            return q
        if all(v >= hi for v in vals) and all(rv >= 0 for rv in ray_vals):
            return q
        if q.is_bounded:
            return q
    neg_a = tuple(-x for x in a)
    verts_lo, rays_lo = _halfspace_generators(q, a, lo)
    verts_hi, rays_hi = _halfspace_generators(q, neg_a, -hi)
    verts = list(dict.fromkeys(verts_lo + verts_hi))
    rays = list(dict.fromkeys(rays_lo + rays_hi))
    if not verts:
        return Polyhedron.empty(q.dim)
    return Polyhedron.from_generators(verts, rays)


def classify_split(
    q: Polyhedron, s: Split, split_coords: Optional[Sequence[int]] = None
) -> SplitClass:
    """Intersecting / englobing / Chvatal flags of s relative to q."""
    if q.is_empty:
        raise GeometryError("classification needs a nonempty polyhedron")
    a = embed_normal(s.pi, q.dim, split_coords)
    lo, hi = Fraction(s.pi0), Fraction(s.pi0 + 1)
    vals = [dot(a, v) for v in q.vertices]
    minv, maxv = min(vals), max(vals)
    unbounded_up = any(dot(a, r) > 0 for r in q.rays)
    unbounded_down = any(dot(a, r) < 0 for r in q.rays)

    def reaches(c: Fraction) -> bool:
        above = maxv >= c or unbounded_up
        below = minv <= c or unbounded_down
        return above and below

    intersecting = reaches(lo) and reaches(hi)
    upper_empty = maxv < hi and not unbounded_up
    lower_empty = minv > lo and not unbounded_down
    chvatal = upper_empty or lower_empty
    if q.is_bounded:
        englobing = all(v <= lo or v >= hi for v in vals)
    else:
        englobing = apply_split(q, s, split_coords) == q
    return SplitClass(intersecting, englobing, chvatal)


def split_confines(
    q: Polyhedron, s: Split, split_coords: Optional[Sequence[int]] = None
) -> bool:
    """True iff q lies between the two boundary planes of s.

    A confining split leaves q unchanged and certifies that its two
    planes carry all further progress; this is the admission test for
    the terminal split of a height-reduction program.
    """
    if q.is_empty:
        raise GeometryError("confinement needs a nonempty polyhedron")
    a = embed_normal(s.pi, q.dim, split_coords)
    lo, hi = Fraction(s.pi0), Fraction(s.pi0 + 1)
    if any(dot(a, r) != 0 for r in q.rays):
        return False
    return all(lo <= dot(a, v) <= hi for v in q.vertices)


def facet_split(qx: Polyhedron, facet_index: int) -> Split:
    """The split whose boundary planes sandwich the given facet of qx.

    The facet normal is already a coprime integer vector; the far plane
    sits at the next integer level inward, so when the facet plane holds
    integer points one boundary plane supports the facet itself.
    """
    if qx.is_empty or qx.affine_dim() != qx.dim:
        raise GeometryError("facet splits need a full-dimensional polyhedron")
    facets = qx.facet_inequalities()
    if not 0 <= facet_index < len(facets):
        raise GeometryError("facet index out of range")
    a, b = facets[facet_index]
    pi0 = ceil(b) - 1
    return Split(a, pi0)


def facet_split_width_sq(qx: Polyhedron, facet_index: int) -> Fraction:
    """Squared distance between the facet plane and the far split plane."""
    a, b = qx.facet_inequalities()[facet_index]
    pi0 = ceil(b) - 1
    return (b - pi0) ** 2 / Fraction(dot(a, a))


def round_of_splits(
    q: Polyhedron, qx: Polyhedron, split_coords: Optional[Sequence[int]] = None
) -> tuple[Polyhedron, SqrtRational]:
    """Apply the facet splits of qx to q simultaneously.

    Returns the intersection of q(pi(F), pi0(F)) over all facets F and
    the round's width, the least facet-to-far-plane distance.
    """
    if not qx.is_bounded:
        raise GeometryError("rounds need a bounded reference polytope")
    if qx.is_empty or qx.affine_dim() != qx.dim:
        raise GeometryError("rounds need a full-dimensional reference polytope")
    facets = qx.facet_inequalities()
    result = q
    width_sq: Optional[Fraction] = None
    for idx in range(len(facets)):
        s = facet_split(qx, idx)
        w = facet_split_width_sq(qx, idx)
        width_sq = w if width_sq is None else min(width_sq, w)
        piece = apply_split(q, s, split_coords)
        if not piece.contains_polyhedron(result):
            result = result.intersect(piece)
        if result.is_empty:
            break
    assert width_sq is not None
    return result, SqrtRational(width_sq)


def enumerate_splits(
    dim: int, bound: int, box: Sequence[tuple[Fraction, Fraction]]
) -> list[Split]:
    """All canonical splits with max-norm at most ``bound`` touching ``box``.

    The identification (pi, pi0) ~ (-pi, -pi0-1) is resolved by keeping
    the representative whose leading nonzero entry is positive.
    """
    if bound < 1:
        return []
    if len(box) != dim:
        raise GeometryError("box must give one interval per coordinate")
    directions: list[IntVec] = []

    def gen(prefix: list[int]) -> None:
        if len(prefix) == dim:
            v = tuple(prefix)
            if any(v) and vec_gcd(v) == 1:
                lead = next(x for x in v if x != 0)
                if lead > 0:
                    directions.append(v)
            return
        for x in range(-bound, bound + 1):
            prefix.append(x)
            gen(prefix)
            prefix.pop()

    gen([])
    out: list[Split] = []
    for pi in sorted(directions):
        minv = sum(
            min(pi[i] * Fraction(box[i][0]), pi[i] * Fraction(box[i][1]))
            for i in range(dim)
        )
        maxv = sum(
            max(pi[i] * Fraction(box[i][0]), pi[i] * Fraction(box[i][1]))
            for i in range(dim)
        )
        for pi0 in range(ceil(minv) - 1, floor(maxv) + 1):
            out.append(Split(pi, pi0))
    return out


# ---------------------------------------------------------------------------
# the 2D Chvatal sweep


def _line_meets_interior(p: Polyhedron, base: Point, direction: IntVec) -> bool:
    """Does the line base + t*direction meet the interior of full-dim p?"""
    tlo: Optional[Fraction] = None
    thi: Optional[Fraction] = None
    for a, b in p.inequalities:
        slope = dot(a, direction)
        offset = b - dot(a, base)
        if slope == 0:
            if offset <= 0:
                return False  # whole line on or outside this facet plane
        elif slope > 0:
            t = Fraction(offset, slope)
            thi = t if thi is None else min(thi, t)
        else:
            t = Fraction(offset, slope)
            tlo = t if tlo is None else max(tlo, t)
    if tlo is None or thi is None:
        return True
    return tlo < thi


def _point_in_closed_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    def cross(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])

    d1, d2, d3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
    has_neg = d1 < 0 or d2 < 0 or d3 < 0
    has_pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (has_neg and has_pos)


def _point_on_segment(p: Point, a: Point, b: Point) -> bool:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if cross != 0:
        return False
    t_num = [(p[i] - a[i]) for i in range(2)]
    seg = [(b[i] - a[i]) for i in range(2)]
    d = dot(seg, seg)
    t = dot(t_num, seg)
    return 0 <= t <= d


def _choose_translation(pi: IntVec, u: IntVec) -> IntVec:
    """Integer d with pi.d = 1, minimal in (max-norm, lex) over d + Z*u."""
    d0 = integer_solve_rows([(pi, 1)])
    assert d0 is not None
    # all solutions differ by integer multiples of u; the max-norm is
    # coercive in that multiplier, so a window around the least-squares
    # minimizer contains the optimum
    uu = dot(u, u)
    k0 = round(Fraction(-dot(d0, u), uu))
    anchor = tuple(d0[i] + k0 * u[i] for i in range(2))
    span = 2 * max(abs(x) for x in anchor) + 2
    best = None
    for k in range(k0 - span, k0 + span + 1):
        cand = tuple(d0[i] + k * u[i] for i in range(2))
        key = (max(abs(x) for x in cand), cand)
        if best is None or key < best:
            best = key
    assert best is not None
    return best[1]


def sweep_sequence_2d(q: Polyhedron, chv: Split, p: Sequence) -> SplitSequence:
    """Sequence of splits confining the upper slab part of q to a pyramid.

    ``chv`` must be a Chvatal split for q whose far plane misses q; the
    near plane cuts a segment L out of q.  The returned splits rotate
    lines through lattice points of the two boundary lines until the
    part of the swept polyhedron with pi.x >= pi0 lies inside
    conv(p, L).
    """
    if q.dim != 2:
        raise GeometryError("sweep is only implemented in dimension 2")
    if q.is_empty:
        raise GeometryError("sweep hypothesis failed: empty polyhedron")
    pp = as_point(p)
    pi, pi0 = chv.pi, chv.pi0
    a = embed_normal(pi, 2, None)
    vals = [dot(a, v) for v in q.vertices]
    if any(dot(a, r) > 0 for r in q.rays) or max(vals) >= pi0 + 1:
        raise GeometryError(
            "sweep hypothesis failed: split is not Chvatal for q (far plane meets q)"
        )
    if max(vals) <= pi0 and all(dot(a, r) <= 0 for r in q.rays):
        return SplitSequence.make([], [])  # nothing above the near plane
    seg = q.intersect_halfspace(a, Fraction(pi0)).intersect_halfspace(
        tuple(-x for x in a), Fraction(-pi0)
    )
    if seg.is_empty or seg.affine_dim() != 1:
        raise GeometryError(
            "sweep hypothesis failed: near plane section of q is not a segment"
        )
    if not seg.is_bounded:
        raise GeometryError("sweep hypothesis failed: near plane section unbounded")
    if not (Fraction(pi0) < dot(a, pp) < Fraction(pi0 + 1)):
        raise GeometryError(
            "sweep hypothesis failed: apex point not strictly between the planes"
        )
    end0, end1 = seg.vertices
    for e in (end0, end1):
        if any(c.denominator != 1 for c in e):
            raise GeometryError(
                "sweep hypothesis failed: segment endpoint is not an integer point"
            )
    qbar = q.intersect_halfspace(tuple(-x for x in a), Fraction(-pi0))

    splits: list[Split] = []
    current = q
    for a0, a1 in ((end0, end1), (end1, end0)):
        u = tuple(int(x) for x in scale_dir(a1, a0))
        if not seg.contains(tuple(a0[i] + u[i] for i in range(2))):
            raise GeometryError(
                "sweep hypothesis failed: endpoint facet split does not intersect the segment"
            )
        d = _choose_translation(pi, u)
        kmax = _sweep_scan_bound(qbar, pp, a0, u, d)
        ell = None
        for k in range(kmax, -kmax - 1, -1):
            direction = (d[0] + k * u[0], d[1] + k * u[1])
            if not _line_meets_interior(qbar, a0, direction):
                ell = k
                break
        if ell is None:
            raise GeometryError("sweep failed to find an empty starting line")
        t = None
        for k in range(-kmax, kmax + 1):
            b_k = tuple(a0[i] + d[i] + k * u[i] for i in range(2))
            b_k1 = tuple(a0[i] + d[i] + (k + 1) * u[i] for i in range(2))
            if _point_on_segment(pp, a0, b_k) or (
                _point_in_closed_triangle(pp, a0, b_k, b_k1)
                and not _point_on_segment(pp, a0, b_k1)
            ):
                t = k
                break
        if t is None:
            raise GeometryError("sweep failed to locate the apex sector")
        for k in range(ell, t + 1):
            direction = (d[0] + k * u[0], d[1] + k * u[1])
            n = (-direction[1], direction[0])
            if dot(n, u) < 0:
                n = (-n[0], -n[1])
            c0 = dot(n, a0)
            s = Split.make(n, int(c0)).canonical()
            splits.append(s)
            current = apply_split(current, s)

    pyramid = Polyhedron.from_generators([pp, end0, end1])
    upper = current.intersect_halfspace(tuple(-x for x in a), Fraction(-pi0))
    if not pyramid.contains_polyhedron(upper):
        raise GeometryError("sweep postcondition failed: result escapes the pyramid")
    return SplitSequence.make(splits, ["sweep"] * len(splits))


def scale_dir(to_point: Point, from_point: Point) -> IntVec:
    return scale_primitive(
        tuple(to_point[i] - from_point[i] for i in range(len(to_point)))
    )


def _sweep_scan_bound(qbar: Polyhedron, p: Point, a0: Point, u: IntVec, d: IntVec) -> int:
    coords = [abs(c) for v in list(qbar.vertices) + [p, a0] for c in v]
    extent = max(coords) if coords else Fraction(1)
    scale = max(max(abs(x) for x in u), max(abs(x) for x in d), 1)
    return 8 * (ceil(extent) + 2) * scale + 8
