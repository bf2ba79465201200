"""Lifted cones, height functions and split-rank probing.

The corner relaxation is lifted to (x, z)-space as a cone with apex
(f, 1) whose slice at z = 0 is the lattice-free body; the cut under
study has split rank at most t exactly when t rounds of splits push the
lifted cone's height down to zero.  This module applies split programs
to truncated lifts, records height profiles, certifies persistence
witnesses, computes reduction coefficients and repairs facets whose
hyperplanes miss the integer lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor as math_floor
from typing import Optional, Sequence, Union

from .certify import faces, has_2hyperplane_property
from .cuts import CornerModel, boundary_point, intersection_cut
from .geometry import (
    GeometryError,
    Hyperplane,
    IntVec,
    Point,
    Polyhedron,
    as_point,
    convex_hull,
    integer_solve,
    lattice_points,
    require_lattice_free,
)
from .linalg import (
    dot,
    integer_kernel,
    rank as mat_rank,
    scale_primitive,
    solve,
    vec_gcd,
)
from .splits import (
    Split,
    SplitClass,
    SplitSequence,
    SqrtRational,
    apply_split,
    classify_split,
    enumerate_splits,
    facet_split,
    facet_split_width_sq,
    round_of_splits,
    split_confines,
)

DEFAULT_FLOOR = 64


@dataclass(frozen=True)
class LiftedCone:
    """A floor-truncated cone over a lattice-free body in (x, z)-space."""

    poly: Polyhedron
    apex: Point
    floor: int
    kind: str  # "P^L" or "P^L(x,z)"
    base: Polyhedron  # the z = 0 slice before truncation artifacts

    @property
    def x_dim(self) -> int:
        return self.poly.dim - 1


@dataclass(frozen=True)
class HeightProfile:
    """Heights at declared witness points plus the global maximum."""

    samples: tuple[tuple[Point, Optional[Fraction]], ...]
    global_max: Optional[Fraction]


@dataclass(frozen=True)
class ProbeReport:
    rounds_applied: int
    profiles: tuple[HeightProfile, ...]  # index r = state after r rounds
    verdict: str  # height_nonpositive_at_round_q | persists_positive_through_budget
    q: Optional[int]
    sequence: Optional[SplitSequence] = None


@dataclass(frozen=True)
class ReductionReport:
    width: SqrtRational
    diam: SqrtRational
    sines: tuple[SqrtRational, ...]
    delta: SqrtRational
    degenerate: bool

    def __post_init__(self):
        if not 0 < self.delta.square <= 1:
            raise GeometryError("reduction coefficient escaped (0, 1]")


@dataclass(frozen=True)
class EnumerateStrategy:
    bound: int
    box: tuple[tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class ExplicitStrategy:
    sequence: SplitSequence


@dataclass(frozen=True)
class FacetRoundsStrategy:
    references: tuple[Polyhedron, ...]  # one reference polytope per round


Strategy = Union[EnumerateStrategy, ExplicitStrategy, FacetRoundsStrategy]


def lift(
    model: CornerModel,
    l: Polyhedron,
    kind: str = "P^L",
    floor: int = DEFAULT_FLOOR,
) -> LiftedCone:
    """Build the truncated lifted cone of the model over l.

    The cone has vertex (f, 1) and rays dropping to the z = 0 slice:
    through the vertices of l for kind "P^L", through the ray boundary
    points for kind "P^L(x,z)".  Truncation at z = -floor turns it into
    a polytope so split application by hulls stays exact.
    """
    if kind not in ("P^L", "P^L(x,z)"):
        raise GeometryError(f"unknown lift kind {kind!r}")
    if floor < 1:
        raise GeometryError("floor must be a positive integer")
    require_lattice_free(l)
    if not l.interior_contains(model.f):
        raise GeometryError("reference point must lie in the interior")
    if kind == "P^L":
        anchors = list(l.vertices)
    else:
        anchors = [boundary_point(l, model.f, r) for r in model.rays]
    apex = tuple(model.f) + (Fraction(1),)
    rays = [
        tuple(v[i] - model.f[i] for i in range(model.dim)) + (Fraction(-1),)
        for v in anchors
    ]
    cone = Polyhedron.from_generators([apex], rays)
    zfloor = (0,) * model.dim + (-1,)
    truncated = cone.intersect_halfspace(zfloor, Fraction(floor))
    base = convex_hull(anchors)
    return LiftedCone(truncated, apex, floor, kind, base)


def height_at(q: Polyhedron, x: Sequence) -> Optional[Fraction]:
    """max{z : (x, z) in q}, or None when the fiber is empty.

    One-variable exact maximization over the inequality representation;
    the result is finite for truncated lifts since the floor bounds z
    below and the apex bounds it above.
    """
    xp = as_point(x)
    if len(xp) != q.dim - 1:
        raise GeometryError("witness point must live in the x-space of q")
    if q.is_empty:
        return None
    best: Optional[Fraction] = None
    for a, b in q.inequalities:
        c = a[-1]
        partial = dot(a[:-1], xp)
        if c == 0:
            if partial > b:
                return None
        elif c > 0:
            cand = (b - partial) / c
            if best is None or cand < best:
                best = cand
    if best is None:
        raise GeometryError("height is unbounded above at this point")
    # the fiber may still be empty if the floor-side constraints conflict
    for a, b in q.inequalities:
        if a[-1] < 0 and dot(a[:-1], xp) + a[-1] * best > b:
            return None
    return best


def max_height(q: Polyhedron) -> Optional[Fraction]:
    """Maximum z over q; None encodes the empty polyhedron."""
    if q.is_empty:
        return None
    if any(r[-1] > 0 for r in q.rays):
        raise GeometryError("polyhedron is unbounded in the z direction")
    return max(v[-1] for v in q.vertices)


def _profile(q: Polyhedron, witnesses: Sequence[Point]) -> HeightProfile:
    samples = tuple((w, height_at(q, w)) for w in witnesses)
    return HeightProfile(samples, max_height(q))


def _x_coords(q: Polyhedron) -> tuple[int, ...]:
    return tuple(range(q.dim - 1))


def probe_rounds(
    cone: LiftedCone,
    strategy: Strategy,
    budget: int,
    witnesses: Sequence[Sequence],
) -> ProbeReport:
    """Apply a split strategy round by round and record heights.

    Each round intersects the results of applying every split of the
    round's set (one split per round for an explicit sequence).  A round
    at which the maximum height becomes nonpositive certifies that many
    rounds as an upper bound on the split rank of the cut.
    """
    if budget < 1:
        raise GeometryError("budget must be a positive number of rounds")
    wit = [as_point(w) for w in witnesses]
    coords = _x_coords(cone.poly)

    def round_splits(r: int) -> list[Split]:
        if isinstance(strategy, EnumerateStrategy):
            splits = enumerate_splits(cone.x_dim, strategy.bound, strategy.box)
            if not splits:
                raise GeometryError("strategy produced an empty split set")
            return splits
        if isinstance(strategy, ExplicitStrategy):
            seq = strategy.sequence.splits
            if not seq:
                raise GeometryError("strategy produced an empty split set")
            return [seq[r - 1]] if r <= len(seq) else []
        refs = strategy.references
        if not refs:
            raise GeometryError("strategy produced an empty split set")
        if r > len(refs):
            return []
        qx = refs[r - 1]
        return [facet_split(qx, i) for i in range(len(qx.facet_inequalities()))]

    q = cone.poly
    profiles = [_profile(q, wit)]
    applied: list[Split] = []
    verdict = "persists_positive_through_budget"
    q_round: Optional[int] = None
    rounds_done = 0
    for r in range(1, budget + 1):
        splits = round_splits(r)
        if not splits:
            break
        result = q
        for s in splits:
            piece = apply_split(q, s, coords)
            if not piece.contains_polyhedron(result):
                result = result.intersect(piece)
            if result.is_empty:
                break
        q = result
        applied.extend(splits)
        rounds_done = r
        profiles.append(_profile(q, wit))
        top = max_height(q)
        if top is None or top <= 0:
            verdict = "height_nonpositive_at_round_q"
            q_round = r
            break
    seq = SplitSequence.make(applied, ["user"] * len(applied))
    return ProbeReport(rounds_done, tuple(profiles), verdict, q_round, seq)


def necessity_witness(l: Polyhedron) -> Optional[tuple[Polyhedron, Point]]:
    """A face blocking every finite split program, with a relint point.

    Returns the first face of the integer hull that lies in no facet of
    l and is not 2-partitionable, together with the centroid of its
    integer points, or None when l has the 2-hyperplane property.
    """
    report = has_2hyperplane_property(l)
    for entry in report.entries:
        cert = entry.certificate
        if cert is not None and cert.outcome == "not_partitionable":
            pts = lattice_points(entry.face)
            n = len(pts)
            centroid = tuple(
                sum(p[i] for p in pts) / n for i in range(l.dim)
            )
            return entry.face, centroid
    return None


# ---------------------------------------------------------------------------
# reduction coefficients


def _diameter_sq(qx: Polyhedron) -> Fraction:
    best = Fraction(0)
    vs = qx.vertices
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            d = [vs[i][k] - vs[j][k] for k in range(qx.dim)]
            best = max(best, Fraction(dot(d, d)))
    return best


def _min_round_width_sq(qx: Polyhedron) -> Fraction:
    widths = [
        facet_split_width_sq(qx, i) for i in range(len(qx.facet_inequalities()))
    ]
    return min(widths)


def _rotation_sin_sq(
    qx: Polyhedron, a: IntVec, b: Fraction, pi: IntVec, c: Fraction
) -> Fraction:
    """sin^2 of the largest angle between {pi.x = c} and a hyperplane
    through {a.x = b} cut {pi.x = c} having qx on its nonpositive side.

    The pencil n(mu) = a + mu*pi passes through the intersection; vertex
    constraints bound mu to an interval and the angle is unimodal in mu,
    so the optimum is the clamped perpendicular position.
    """
    mu_lo: Optional[Fraction] = None
    mu_hi: Optional[Fraction] = None
    for v in qx.vertices:
        phi = dot(a, v) - b
        psi = dot(pi, v) - c
        if psi == 0:
            if phi > 0:
                raise GeometryError("no valid rotation: a vertex pins the pencil")
        elif psi > 0:
            bound = -phi / psi
            mu_hi = bound if mu_hi is None else min(mu_hi, bound)
        else:
            bound = -phi / psi
            mu_lo = bound if mu_lo is None else max(mu_lo, bound)
    if mu_lo is not None and mu_hi is not None and mu_lo > mu_hi:
        raise GeometryError("no valid rotation: empty pencil interval")
    pi_sq = Fraction(dot(pi, pi))
    alpha = Fraction(dot(a, pi)) / pi_sq
    a_perp_sq = Fraction(dot(a, a)) - alpha**2 * pi_sq
    if a_perp_sq == 0:
        raise GeometryError("facet plane is parallel to the split planes")
    mu = -alpha
    if mu_lo is not None and mu < mu_lo:
        mu = mu_lo
    if mu_hi is not None and mu > mu_hi:
        mu = mu_hi
    along_sq = (alpha + mu) ** 2 * pi_sq
    return a_perp_sq / (along_sq + a_perp_sq)


def reduction_coefficient(qx: Polyhedron, s: Split) -> ReductionReport:
    """The per-iteration height-decrease factor of a split against qx.

    Degenerate branches (split leaves qx unchanged, kills its dimension,
    or the round width reaches the diameter) report the value 1; else
    the factor is (width/diam) times the least sine of the rotation
    angles at the facets the split introduces.
    """
    if not qx.is_bounded:
        raise GeometryError("reduction coefficients need a bounded polytope")
    if qx.is_empty or qx.affine_dim() != qx.dim:
        raise GeometryError("reduction coefficients need a full-dimensional polytope")
    one = SqrtRational(Fraction(1))
    diam_sq = _diameter_sq(qx)
    width_sq = _min_round_width_sq(qx)
    qxs = apply_split(qx, s)
    if qxs == qx or qxs.is_empty or qxs.affine_dim() < qx.dim:
        return ReductionReport(
            SqrtRational(width_sq), SqrtRational(diam_sq), (), one, True
        )
    if width_sq >= diam_sq:
        return ReductionReport(
            SqrtRational(width_sq), SqrtRational(diam_sq), (), one, True
        )
    old = set(qx.facet_inequalities())
    pi = s.pi
    if len(pi) != qx.dim:
        raise GeometryError("split dimension mismatch")
    sines: list[SqrtRational] = []
    for a, b in qxs.facet_inequalities():
        if (a, b) in old:
            continue
        for level in (Fraction(s.pi0), Fraction(s.pi0 + 1)):
            sines.append(
                SqrtRational(_rotation_sin_sq(qx, a, b, pi, level))
            )
    if not sines:
        # the split only trimmed along existing facets
        return ReductionReport(
            SqrtRational(width_sq), SqrtRational(diam_sq), (), one, True
        )
    min_sin = min(sines)
    delta = SqrtRational(width_sq / diam_sq) * min_sin
    return ReductionReport(
        SqrtRational(width_sq), SqrtRational(diam_sq), tuple(sines), delta, False
    )


# ---------------------------------------------------------------------------
# the finite-rank executor


def execute_finite_rank(
    cone: LiftedCone,
    program: tuple[SplitSequence, Split],
    cap: int = 64,
) -> ProbeReport:
    """Drive the lifted cone's height to zero with a validated program.

    One iteration performs, for each program split, a round of facet
    splits around the current shadow polytope followed by the split
    itself, and finishes with the englobing split.  Every application is
    counted toward q, the reported split-rank upper bound.
    """
    sequence, englobing = program
    coords = _x_coords(cone.poly)
    # validate against the shadow sequence in x-space
    shadows = [cone.base]
    for s in sequence.splits:
        cls = classify_split(shadows[-1], s)
        if not cls.intersecting:
            raise GeometryError(
                f"program split {s} is not intersecting for its shadow polytope"
            )
        shadows.append(apply_split(shadows[-1], s))
    if not split_confines(shadows[-1], englobing):
        raise GeometryError(
            f"program split {englobing} does not confine the final shadow to its slab"
        )

    witnesses = [cone.apex[:-1]]
    q = cone.poly
    profiles = [_profile(q, witnesses)]
    applied: list[Split] = []
    tags: list[str] = []
    verdict = "persists_positive_through_budget"
    total = 0
    q_final: Optional[int] = None
    rounds_done = 0
    for _ in range(cap):
        for j, s in enumerate(sequence.splits):
            shadow = shadows[j]
            q, _w = round_of_splits(q, shadow, coords)
            n_facets = len(shadow.facet_inequalities())
            total += n_facets
            applied.extend(facet_split(shadow, i) for i in range(n_facets))
            tags.extend(["facet-round"] * n_facets)
            q = apply_split(q, s, coords)
            total += 1
            applied.append(s)
            tags.append("user")
        q = apply_split(q, englobing, coords)
        total += 1
        applied.append(englobing)
        tags.append("user")
        rounds_done += 1
        profiles.append(_profile(q, witnesses))
        top = max_height(q)
        if top is None or top <= 0:
            verdict = "height_nonpositive_at_round_q"
            q_final = total
            break
    return ProbeReport(
        rounds_done,
        tuple(profiles),
        verdict,
        q_final,
        SplitSequence.make(applied, tags),
    )


# ---------------------------------------------------------------------------
# region containment


def _point_polytope_distance_sq(p: Point, qx: Polyhedron) -> Fraction:
    """Exact squared Euclidean distance from a point to a polytope."""
    best: Optional[Fraction] = None
    for face in faces(qx):
        vs = face.vertices
        v0 = vs[0]
        dirs = [tuple(v[i] - v0[i] for i in range(len(p))) for v in vs[1:]]
        indep: list[tuple] = []
        for d in dirs:
            if mat_rank(indep + [d]) > len(indep):
                indep.append(d)
        if indep:
            gram = [[dot(di, dj) for dj in indep] for di in indep]
            rhs = [dot(di, [p[i] - v0[i] for i in range(len(p))]) for di in indep]
            t = solve(gram, rhs)
            assert t is not None
            proj = tuple(
                v0[i] + sum(t[j] * indep[j][i] for j in range(len(indep)))
                for i in range(len(p))
            )
        else:
            proj = v0
        if not face.contains(proj):
            continue
        diff = [p[i] - proj[i] for i in range(len(p))]
        d_sq = Fraction(dot(diff, diff))
        if best is None or d_sq < best:
            best = d_sq
    assert best is not None
    return best


def region_bound_check(
    q: Polyhedron, qx: Polyhedron, m_bound, m0_bound
) -> bool:
    """Vertex-wise containment of q in the sloped region over qx.

    A vertex (v_x, v_z) passes when v_x lies in the relative interior of
    qx and v_z <= M, or otherwise when v_z stays below M0 lowered by the
    distance-scaled slope.  All comparisons go through exact squares, so
    a True answer is certified for the vertex set.
    """
    m_val, m0_val = Fraction(m_bound), Fraction(m0_bound)
    if m0_val >= m_val:
        raise GeometryError("the region needs M0 < M")
    if not qx.is_bounded or qx.is_empty:
        raise GeometryError("the region needs a nonempty bounded reference polytope")
    if q.is_empty:
        return True
    diam_sq = _diameter_sq(qx)
    if diam_sq == 0:
        raise GeometryError("the region needs a full-dimensional reference polytope")
    slope = m_val - m0_val
    for v in q.vertices:
        vx, vz = v[:-1], v[-1]
        if qx.relint_contains(vx):
            if vz > m_val:
                return False
            continue
        margin = m0_val - vz
        if margin < 0:
            return False
        d_sq = _point_polytope_distance_sq(vx, qx)
        # vz <= M0 - sqrt(d^2/diam^2) * (M - M0), compared via squares
        if margin**2 * diam_sq < d_sq * slope**2:
            return False
    for r in q.rays:
        rx, rz = r[:-1], Fraction(r[-1])
        if rz > 0:
            return False
        if rz**2 * diam_sq < Fraction(dot(rx, rx)) * slope**2:
            return False
    return True


# ---------------------------------------------------------------------------
# facet repair


def rotate_facet(l: Polyhedron, facet_index: int) -> Polyhedron:
    """Replace a facet whose hyperplane misses the lattice.

    The new facet hyperplane passes through a lattice point on the next
    integer level of the facet normal, placed far from the polytope, and
    is tilted until the polytope fits under it; the result strictly
    contains l, has the same integer points, and its repaired facet
    plane holds integer points.
    """
    if not l.is_bounded or l.is_empty or l.affine_dim() != l.dim:
        raise GeometryError("facet repair needs a full-dimensional polytope")
    facets = l.facet_inequalities()
    if not 0 <= facet_index < len(facets):
        raise GeometryError("facet index out of range")
    a1, b1 = facets[facet_index]
    if Hyperplane.make(a1, b1).has_integer_point():
        raise GeometryError("facet hyperplane already contains integer points")
    m = l.dim
    beta = ceil(b1)  # next lattice level; b1 is fractional here
    x0 = integer_solve([(a1, beta)])
    assert x0 is not None
    kernel = integer_kernel([a1], m)  # m-1 lattice directions inside the level set
    d_comp = integer_solve([(a1, 1)])
    assert d_comp is not None
    # dual vector c with c.kernel[0] = 1, c.kernel[j>0] = 0, c.d = 0;
    # the kernel basis plus d is unimodular, so c comes out integer
    basis = [list(k) for k in kernel] + [list(d_comp)]
    rhs = [Fraction(1)] + [Fraction(0)] * (m - 1)
    c_sol = solve(basis, rhs)
    assert c_sol is not None
    c = tuple(int(x) for x in c_sol)

    others = [facets[i] for i in range(len(facets)) if i != facet_index]
    # anchor the new hyperplane strictly outside the slice at the next level
    slice_rows = others + [
        (a1, Fraction(beta)),
        (tuple(-x for x in a1), Fraction(-beta)),
    ]
    level_slice = Polyhedron.from_inequalities(slice_rows, m)
    if level_slice.is_empty:
        k = -1
    else:
        k = math_floor(min(dot(c, v) for v in level_slice.vertices)) - 1
    anchor_val = dot(c, x0) + k
    lam = 1
    for v in l.vertices:
        gap = Fraction(beta) - dot(a1, v)
        need = (dot(c, v) - anchor_val) / gap
        lam = max(lam, ceil(need) + 1)
    for _ in range(60):
        n = tuple(c[i] + lam * a1[i] for i in range(m))
        offset = anchor_val + lam * beta
        candidate = Polyhedron.from_inequalities(others + [(n, Fraction(offset))], m)
        if (
            candidate.is_bounded
            and not candidate.is_empty
            and candidate.contains_polyhedron(l)
            and lattice_points(candidate) == lattice_points(l)
        ):
            new_facets = set(candidate.facet_inequalities()) - set(others)
            if new_facets and all(
                Hyperplane.make(aa, bb).has_integer_point() for aa, bb in new_facets
            ):
                return candidate
        lam *= 2
    raise GeometryError("facet repair did not converge")
