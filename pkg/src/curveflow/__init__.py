"""Shortening flow for closed curves in R^n with verification monitors:
shadow convexity, sphericity, chord bounds and self-avoidance."""

from ._kernels import backend_name
from .convexity import (
    ConvexityDefectSample,
    Projection,
    convexity_defect,
    hull_2d,
    hull_3d,
    is_convex_space_curve,
    minkowski_functional,
    phi_star,
    projected_frame,
)
from .curves import CurveSpec, GENERATORS, make_curve
from .flow import FlowParams, FlowState, MonitorReport, evolve, evolve_family, step
from .geometry import (
    DiscreteCurve,
    FrenetData,
    arclength_derivative,
    diameter,
    frenet,
    load_snapshot,
    resample_uniform,
    save_snapshot,
    total_length,
)
from .spherical import (
    AvoidanceSample,
    ChordField,
    SphereFit,
    avoidance_sample,
    chord_field,
    chord_minima,
    fit_sphere,
    heat_residual,
    schur_bound,
    tangent_collinearity,
)

__version__ = "0.1.0"

__all__ = [
    "AvoidanceSample", "ChordField", "ConvexityDefectSample", "CurveSpec",
    "DiscreteCurve", "FlowParams", "FlowState", "FrenetData", "GENERATORS",
    "MonitorReport", "Projection", "SphereFit", "arclength_derivative",
    "avoidance_sample", "backend_name", "chord_field", "chord_minima",
    "convexity_defect", "diameter", "evolve", "evolve_family", "fit_sphere",
    "frenet", "heat_residual", "hull_2d", "hull_3d", "is_convex_space_curve",
    "load_snapshot", "make_curve", "minkowski_functional", "phi_star",
    "projected_frame", "resample_uniform", "save_snapshot", "schur_bound",
    "step", "tangent_collinearity", "total_length",
]
