"""Discrete metric disks and projective line-measure geometry."""

from .disks import (
    Center,
    CylinderPoint,
    HalfInteger,
    IntervalFamily,
    ValidationReport,
    canonical_code,
    discrete_area,
    discrete_distance,
    extremal_disk,
    validate,
)
from .strands import StrandDecomposition, strand_decomposition, strip_crossings, width_one_arc
from .moves import (
    ReductionConfig,
    apply_reduction,
    enumerate_disks,
    enumerate_summary,
    find_reduction,
    minimize,
)
from .measures import (
    GridDensity,
    LineCoord,
    Mixture,
    ParallelFamily,
    PlanePoint,
    Uniform,
    convolve,
    crofton_length,
    line_offset,
    make_mu_ext,
    mix,
    mu_ball,
    mu_distance,
    normalize,
    santalo_area,
    truncate,
)
from .chords import (
    ChordSet,
    cell_graph_distance,
    convergence_experiment,
    crossing_area,
    sample_chords,
    separation_distance,
    wlln_bound_check,
)

__all__ = [
    "Center",
    "ChordSet",
    "CylinderPoint",
    "GridDensity",
    "HalfInteger",
    "IntervalFamily",
    "LineCoord",
    "Mixture",
    "ParallelFamily",
    "PlanePoint",
    "ReductionConfig",
    "StrandDecomposition",
    "Uniform",
    "ValidationReport",
    "apply_reduction",
    "canonical_code",
    "cell_graph_distance",
    "convergence_experiment",
    "convolve",
    "crofton_length",
    "crossing_area",
    "discrete_area",
    "discrete_distance",
    "enumerate_disks",
    "enumerate_summary",
    "extremal_disk",
    "find_reduction",
    "line_offset",
    "make_mu_ext",
    "minimize",
    "mix",
    "mu_ball",
    "mu_distance",
    "normalize",
    "sample_chords",
    "santalo_area",
    "separation_distance",
    "strand_decomposition",
    "strip_crossings",
    "truncate",
    "validate",
    "wlln_bound_check",
    "width_one_arc",
]
