"""Exact-rational laboratory for intersection cuts and split rank.

Builds intersection cuts from lattice-free polytopes, decides the
two-hyperplane property, applies split disjunctions to lifted corner
cones and probes split rank empirically, all in exact arithmetic.
"""

from .geometry import (
    GeometryError,
    Hyperplane,
    IntegerLattice,
    LinealityError,
    NotLatticeFreeError,
    Polyhedron,
    affine_hull,
    apply_unimodular,
    convex_hull,
    enumerate_vertices,
    integer_solve,
    interior_integer_point,
    lattice_points,
    require_lattice_free,
)
from .cuts import (
    CornerModel,
    CutCoefficients,
    boundary_hull,
    boundary_point,
    gauge,
    intersection_cut,
    rays_into_corners,
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
    sweep_sequence_2d,
)
from .certify import (
    Classification2D,
    FaceEntry,
    PartitionCertificate,
    TwoHPReport,
    classify_2d,
    faces,
    has_2hyperplane_property,
    infinite_rank_2d,
    integer_hull,
    is_2partitionable,
)
from .ranks import (
    DEFAULT_FLOOR,
    EnumerateStrategy,
    ExplicitStrategy,
    FacetRoundsStrategy,
    HeightProfile,
    LiftedCone,
    ProbeReport,
    ReductionReport,
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

__version__ = "0.1.0"

__all__ = [
    "GeometryError",
    "Hyperplane",
    "IntegerLattice",
    "LinealityError",
    "NotLatticeFreeError",
    "Polyhedron",
    "affine_hull",
    "apply_unimodular",
    "convex_hull",
    "enumerate_vertices",
    "integer_solve",
    "interior_integer_point",
    "lattice_points",
    "require_lattice_free",
    "CornerModel",
    "CutCoefficients",
    "boundary_hull",
    "boundary_point",
    "gauge",
    "intersection_cut",
    "rays_into_corners",
    "Split",
    "SplitClass",
    "SplitSequence",
    "SqrtRational",
    "apply_split",
    "classify_split",
    "enumerate_splits",
    "facet_split",
    "facet_split_width_sq",
    "round_of_splits",
    "split_confines",
    "sweep_sequence_2d",
    "Classification2D",
    "FaceEntry",
    "PartitionCertificate",
    "TwoHPReport",
    "classify_2d",
    "faces",
    "has_2hyperplane_property",
    "infinite_rank_2d",
    "integer_hull",
    "is_2partitionable",
    "DEFAULT_FLOOR",
    "EnumerateStrategy",
    "ExplicitStrategy",
    "FacetRoundsStrategy",
    "HeightProfile",
    "LiftedCone",
    "ProbeReport",
    "ReductionReport",
    "execute_finite_rank",
    "height_at",
    "lift",
    "max_height",
    "necessity_witness",
    "probe_rounds",
    "reduction_coefficient",
    "region_bound_check",
    "rotate_facet",
    "__version__",
]
