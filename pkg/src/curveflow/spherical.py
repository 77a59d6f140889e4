"""Sphere fits, the squared-chord function on the parameter torus, and the
self-avoidance machinery built on it."""

from dataclasses import dataclass

import numpy as np

from ._kernels import (
    avoidance_scan,
    chord_field_matrix,
    cyclic_arc_matrix,
    edge_lengths,
    min_pair_distance_sq,
    torus_local_minima,
)
from .geometry import diameter, frenet


class PlanarCurveError(ValueError):
    """Coplanar vertices: the containing sphere is not unique."""


@dataclass(frozen=True)
class SphereFit:
    center: np.ndarray
    radius: float
    rms_deviation: float


def fit_sphere(curve):
    """Algebraic least-squares sphere through the curve's vertices.

    Expanding |p - c|^2 = r^2 gives a linear system in (c, r^2 - c.c);
    the fit minimizes sum (|p|^2 - 2 c.p - d)^2. Raises PlanarCurveError
    when the vertices are coplanar (infinitely many spheres).
    """
    pts = curve.points
    if curve.dim != 3:
        raise ValueError("sphere fit expects curves in R^3")
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[-1] <= 1e-8 * max(sv[0], 1e-300):
        raise PlanarCurveError("vertices are coplanar; sphere fit is not unique")
    a = np.column_stack([2.0 * pts, np.ones(len(pts))])
    rhs = (pts * pts).sum(axis=1)
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    center = sol[:3]
    r2 = sol[3] + center @ center
    if r2 <= 0:
        raise PlanarCurveError("degenerate sphere fit")
    radius = float(np.sqrt(r2))
    rms = float(np.sqrt(np.mean((np.linalg.norm(pts - center, axis=1) - radius) ** 2)))
    return SphereFit(center=center, radius=radius, rms_deviation=rms)


@dataclass(frozen=True)
class ChordField:
    """Squared chords f(i, j) = |X_j - X_i|^2 over all vertex pairs, with the
    cyclic arclength separation of each pair (shorter side). O(N^2) memory."""

    values: np.ndarray
    arc_distances: np.ndarray
    vertex_count: int
    total_length: float

    def edge_spacings(self):
        """Forward edge lengths recovered from adjacent arc distances."""
        n = self.vertex_count
        return self.arc_distances[np.arange(n), (np.arange(n) + 1) % n]


def chord_field(curve):
    pts = curve.points
    edges = edge_lengths(pts)
    cum = np.concatenate([[0.0], np.cumsum(edges)])[:-1]
    total = float(edges.sum())
    return ChordField(
        values=chord_field_matrix(pts),
        arc_distances=cyclic_arc_matrix(cum, total),
        vertex_count=curve.n,
        total_length=total,
    )


def chord_minima(field, exclude_arc, strict=True):
    """Local minima of the chord function on the index torus (8-neighborhood),
    among pairs separated by at least exclude_arc along the curve.

    Strict by default; strict=False admits plateau candidates. Returns a list
    of (i, j, f_ij) with i < j.
    """
    if exclude_arc <= 0:
        raise ValueError("exclude_arc must be > 0 (mask the diagonal band)")
    idx = torus_local_minima(field.values, field.arc_distances,
                             float(exclude_arc), bool(strict))
    return [(int(i), int(j), float(field.values[i, j])) for i, j in idx]


def tangent_collinearity(curve, i, j):
    """|<T_i, T_j>| for unit tangents, clipped to [0, 1]; 1 means collinear."""
    if i == j:
        return 1.0
    fr = frenet(curve)
    d = abs(float(fr.tangent[i] @ fr.tangent[j]))
    return min(d, 1.0)


def heat_residual(fields, dt_record, pairs=None, n_pairs=256, seed=0):
    """Defect of the chord-function evolution law at sampled pairs.

    Takes three chord fields recorded at uniform time spacing dt_record with
    no redistribution in between (so index = material point). The time
    derivative is the centered difference across the outer fields; the
    spatial operator is the sum of the two one-index arclength second
    differences on the middle field, with spacings taken from that field.
    Returns the max over sampled off-diagonal pairs of
    |d_t f - (d^2_{s1} + d^2_{s2}) f + 4|.
    """
    if len(fields) != 3:
        raise ValueError("need exactly three consecutive chord fields")
    f0, f1, f2 = fields
    n = f1.vertex_count
    if f0.vertex_count != n or f2.vertex_count != n:
        raise ValueError("chord fields have mismatched vertex counts")
    if dt_record <= 0:
        raise ValueError("dt_record must be positive")
    if pairs is None:
        rng = np.random.default_rng(seed)
        raw = rng.integers(0, n, size=(4 * n_pairs, 2))
        gap = np.minimum(np.abs(raw[:, 0] - raw[:, 1]),
                         n - np.abs(raw[:, 0] - raw[:, 1]))
        pairs = raw[gap >= 2][:n_pairs]
    pairs = np.asarray(pairs, dtype=np.int64)

    spacing = f1.edge_spacings()
    worst = 0.0
    for i, j in pairs:
        dt_f = (f2.values[i, j] - f0.values[i, j]) / (2.0 * dt_record)
        a, b = spacing[(i - 1) % n], spacing[i]
        d2_i = 2.0 * (a * f1.values[(i + 1) % n, j]
                      - (a + b) * f1.values[i, j]
                      + b * f1.values[(i - 1) % n, j]) / (a * b * (a + b))
        a, b = spacing[(j - 1) % n], spacing[j]
        d2_j = 2.0 * (a * f1.values[i, (j + 1) % n]
                      - (a + b) * f1.values[i, j]
                      + b * f1.values[i, (j - 1) % n]) / (a * b * (a + b))
        worst = max(worst, abs(dt_f - (d2_i + d2_j) + 4.0))
    return worst


def schur_bound(field, curv_bound):
    """Margin of the chord lower bound for curvature-bounded curves.

    For every pair with arc separation l <= pi/C the squared chord must obey
    f >= (4/C^2) sin^2(C l / 2) (tight on circles of radius 1/C; equal to
    4/C^2 at l = pi/C). Returns min(f - bound); +inf when no pair qualifies.
    """
    if curv_bound <= 0:
        raise ValueError("curvature bound must be positive")
    arc = field.arc_distances
    sel = (arc > 0) & (arc <= np.pi / curv_bound)
    if not sel.any():
        return np.inf
    bound = (4.0 / curv_bound**2) * np.sin(0.5 * curv_bound * arc[sel]) ** 2
    return float((field.values[sel] - bound).min())


@dataclass(frozen=True)
class AvoidanceSample:
    """One self-avoidance reading: the far-pair chord floor and friends."""

    t: float
    min_f_on_D: float
    C_emp: float
    schur_margin: float
    self_intersect: bool
    inter_min_dist: float | None = None


def avoidance_sample(curve, t=0.0, headroom=1.1, frenet_data=None,
                     flag_scale=1e-4, curve_diameter=None):
    """Scan all vertex pairs with the empirical curvature bound of the moment.

    C_emp = headroom * max curvature; pairs closer than pi/C_emp along the
    curve form the near set where the chord bound applies, the rest is the
    far set whose chord floor certifies embeddedness. The self-intersection
    flag trips when the far floor drops below (flag_scale * diameter)^2.
    Fused streaming pass: no N^2 matrix is built.
    """
    fr = frenet_data if frenet_data is not None else frenet(curve)
    c_emp = headroom * fr.max_curvature
    if not np.isfinite(c_emp) or c_emp <= 0:
        raise ValueError("empirical curvature bound must be positive and finite")
    pts = curve.points
    edges = edge_lengths(pts)
    cum = np.concatenate([[0.0], np.cumsum(edges)])[:-1]
    total = float(edges.sum())
    min_f, margin = avoidance_scan(pts, cum, total, np.pi / c_emp, c_emp)
    if curve_diameter is None:
        curve_diameter = diameter(curve)
    return AvoidanceSample(
        t=t,
        min_f_on_D=float(min_f),
        C_emp=float(c_emp),
        schur_margin=float(margin),
        self_intersect=bool(min_f < (flag_scale * curve_diameter) ** 2),
    )


def family_min_distance(curves):
    """Least vertex-to-vertex distance between any two family members."""
    best = np.inf
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            best = min(best, min_pair_distance_sq(curves[i].points, curves[j].points))
    return float(np.sqrt(best))


def sphericity_sample(curve):
    """(rms deviation, fitted radius), or None for planar curves."""
    try:
        fit = fit_sphere(curve)
    except PlanarCurveError:
        return None
    return fit.rms_deviation, fit.radius
