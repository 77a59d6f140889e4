"""Monitor hooks attachable to flow runs, keyed by the names used in run
configs. Each monitor contributes fixed CSV columns; a monitor that cannot
produce a sample (e.g. sphere fit on a planar curve) leaves its cells empty
for that row rather than failing the run."""

import numpy as np

from .convexity import Projection, convexity_defect, is_convex_space_curve
from .geometry import diameter
from .spherical import avoidance_sample, family_min_distance, sphericity_sample


class ProjectionMonitor:
    """Shadow-convexity defect and projected-parametrization regularity."""

    columns = ("phi_max", "proj_regular_min")

    def __init__(self, projection, regularity_threshold=1e-3, kappa_floor=1e-8):
        self.projection = projection
        self.regularity_threshold = regularity_threshold
        self.kappa_floor = kappa_floor

    def sample(self, state):
        s = convexity_defect(state.curve, self.projection, t=state.t,
                             kappa_floor=self.kappa_floor,
                             regularity_threshold=self.regularity_threshold)
        return {"phi_max": s.phi_max, "proj_regular_min": s.min_pt_norm}


class Convexity3DMonitor:
    columns = ("convex_defect_3d",)

    def sample(self, state):
        _, defect = is_convex_space_curve(state.curve)
        return {"convex_defect_3d": defect}


class AvoidanceMonitor:
    """Topology check: chord floor over far pairs plus the chord bound margin.

    This is the O(N^2) per-sample cost the --no-topology-checks flag removes.
    """

    columns = ("min_f_D", "C_emp", "schur_margin", "self_intersect")

    def __init__(self, headroom=1.1, flag_scale=1e-4):
        self.headroom = headroom
        self.flag_scale = flag_scale

    def sample(self, state):
        s = avoidance_sample(state.curve, t=state.t, headroom=self.headroom,
                             frenet_data=state.frenet, flag_scale=self.flag_scale,
                             curve_diameter=diameter(state.curve))
        return {
            "min_f_D": s.min_f_on_D,
            "C_emp": s.C_emp,
            "schur_margin": s.schur_margin,
            "self_intersect": bool(s.self_intersect),
        }


class SphericityMonitor:
    columns = ("sphere_rms", "sphere_radius")

    def sample(self, state):
        out = sphericity_sample(state.curve)
        if out is None:
            return {"sphere_rms": np.nan, "sphere_radius": np.nan}
        rms, radius = out
        return {"sphere_rms": rms, "sphere_radius": radius}


class PairDistanceMonitor:
    """Family monitor: least inter-curve vertex distance."""

    columns = ("pair_min_dist",)

    def sample(self, states):
        curves = [st.curve for st in states]
        if len(curves) < 2:
            return {"pair_min_dist": np.nan}
        return {"pair_min_dist": family_min_distance(curves)}


MONITOR_NAMES = ("projection", "convexity3d", "avoidance", "sphericity")
FAMILY_MONITOR_NAMES = ("pair_distance",)


def build_monitors(names, projection_basis=None, regularity_threshold=1e-3,
                   kappa_floor=1e-8):
    """Instantiate per-curve monitors from config names."""
    out = []
    for name in names:
        if name == "projection":
            if projection_basis is None:
                raise ValueError("projection monitor requires a projection basis")
            out.append(ProjectionMonitor(Projection(projection_basis),
                                         regularity_threshold=regularity_threshold,
                                         kappa_floor=kappa_floor))
        elif name == "convexity3d":
            out.append(Convexity3DMonitor())
        elif name == "avoidance":
            out.append(AvoidanceMonitor())
        elif name == "sphericity":
            out.append(SphericityMonitor())
        else:
            raise ValueError(f"unknown monitor {name!r}; known: {MONITOR_NAMES}")
    return out
