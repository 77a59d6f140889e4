"""Discrete differential geometry of closed polyline curves.

A curve is a cyclic polyline in R^n (n >= 2): vertex i+N is vertex i. All
functions are pure; ``DiscreteCurve`` is immutable after construction.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ._kernels import (
    arc_second_derivative,
    curve_stats,
    edge_lengths,
    max_pair_distance_sq,
)


class CurveError(ValueError):
    """Input polyline violates the closed-curve invariants."""


class DegenerateEdgeError(CurveError):
    """An edge is too short relative to the curve extent."""


MIN_POINTS = 8

# Degenerate-edge threshold, relative to the bounding-box diagonal.
DEGENERATE_EDGE_REL = 1e-12


@dataclass(frozen=True)
class DiscreteCurve:
    """Closed polyline: points[i] samples X(u_i), cyclically indexed."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2:
            raise CurveError("points must be an (N, dim) array")
        n, dim = pts.shape
        if n < MIN_POINTS:
            raise CurveError(f"need at least {MIN_POINTS} points, got {n}")
        if dim < 2:
            raise CurveError(f"ambient dimension must be >= 2, got {dim}")
        if not np.isfinite(pts).all():
            raise CurveError("points contain non-finite values")
        edges = edge_lengths(pts)
        if not (edges > 0).all():
            raise CurveError("consecutive points must be distinct (zero-length edge)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def _trusted(cls, points):
        """Construction bypass for points produced by our own kernels (the
        flow loop); skips the invariant re-checks. A collapsing edge is still
        caught by the next step's dt-underflow guard."""
        obj = object.__new__(cls)
        points.setflags(write=False)
        object.__setattr__(obj, "points", points)
        return obj

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def with_points(self, points):
        return DiscreteCurve(points)

    def edge_lengths(self):
        return edge_lengths(self.points)

    def bbox_diagonal(self):
        span = self.points.max(axis=0) - self.points.min(axis=0)
        return float(np.sqrt((span * span).sum()))


@dataclass(frozen=True)
class FrenetData:
    """Per-vertex frame data. ``normal``/``binormal`` rows are NaN where the
    curvature is below the floor; ``binormal``/``torsion`` are None unless
    the ambient dimension is 3."""

    tangent: np.ndarray
    curvature_vector: np.ndarray
    curvature: np.ndarray
    normal: np.ndarray | None
    has_normal: np.ndarray | None
    arclength_weights: np.ndarray
    total_length: float
    binormal: np.ndarray | None = None
    torsion: np.ndarray | None = None
    has_torsion: np.ndarray | None = field(default=None)
    _max_curvature: float | None = field(default=None, repr=False)

    @property
    def max_curvature(self):
        if self._max_curvature is not None:
            return self._max_curvature
        return float(self.curvature.max())


def _check_edges(curve):
    edges = curve.edge_lengths()
    floor = DEGENERATE_EDGE_REL * curve.bbox_diagonal()
    if edges.min() < floor:
        raise DegenerateEdgeError(
            f"shortest edge {edges.min():.3e} below {floor:.3e}; curve is degenerate"
        )
    return edges


def arclength_derivative(curve, order=1):
    """Discrete d/ds (order 1) or d^2/ds^2 (order 2) of the position.

    Order 1 is the centered difference over the two adjacent edges; its
    magnitude is 1 + O(h^2) on smoothly sampled curves. Order 2 is the
    nonuniform three-point stencil

        2 (a X_{i+1} - (a+b) X_i + b X_{i-1}) / (a b (a+b)),

    with a, b the backward/forward edge lengths; it is exact on quadratics
    and equals the curvature vector of the polyline.
    """
    edges = _check_edges(curve)
    pts = curve.points
    if order == 1:
        a = np.roll(edges, 1)[:, None]
        b = edges[:, None]
        return (np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)) / (a + b)
    if order == 2:
        return arc_second_derivative(pts, edges)
    raise ValueError(f"order must be 1 or 2, got {order}")


def frenet(curve, kappa_floor=None, frame=True):
    """Tangent, curvature vector and (where defined) the oriented frame.

    The curvature vector is primary and defined everywhere; the normal is
    derived from it only where curvature >= kappa_floor, so no division by a
    vanishing curvature ever happens. Default floor: 1e-8 / bbox diagonal.

    frame=False skips normal/binormal/torsion and the degeneracy re-checks
    (the flow loop only needs tangent, curvature and length every step).
    """
    pts = curve.points
    n, dim = pts.shape
    if frame:
        _check_edges(curve)
        if kappa_floor is None:
            kappa_floor = 1e-8 / curve.bbox_diagonal()
        if kappa_floor < 0:
            raise ValueError("kappa_floor must be >= 0")
    tangent, kvec, kappa, edges, total, h_min, kappa_max = curve_stats(pts)
    weights = (edges + np.roll(edges, 1)) / 2.0
    if not frame:
        return FrenetData(
            tangent=tangent,
            curvature_vector=kvec,
            curvature=kappa,
            normal=None,
            has_normal=None,
            arclength_weights=weights,
            total_length=float(total),
            _max_curvature=float(kappa_max),
        )
    has_normal = kappa >= kappa_floor
    normal = np.full_like(pts, np.nan)
    normal[has_normal] = kvec[has_normal] / kappa[has_normal, None]

    binormal = None
    torsion = None
    has_torsion = None
    if dim == 3:
        binormal = np.full_like(pts, np.nan)
        bn = np.cross(tangent[has_normal], normal[has_normal])
        bn /= np.linalg.norm(bn, axis=1, keepdims=True)
        binormal[has_normal] = bn
        # torsion from the centered binormal difference, only where the
        # vertex and both neighbors carry a frame
        has_torsion = has_normal & np.roll(has_normal, 1) & np.roll(has_normal, -1)
        torsion = np.full(n, np.nan)
        if has_torsion.any():
            dual = (edges + np.roll(edges, 1))[:, None]
            db = (np.roll(binormal, -1, axis=0) - np.roll(binormal, 1, axis=0)) / dual
            tau = -np.einsum("ij,ij->i", db, normal)
            torsion[has_torsion] = tau[has_torsion]

    return FrenetData(
        tangent=tangent,
        curvature_vector=kvec,
        curvature=kappa,
        normal=normal,
        has_normal=has_normal,
        arclength_weights=weights,
        total_length=float(total),
        binormal=binormal,
        torsion=torsion,
        has_torsion=has_torsion,
    )


def total_length(curve):
    return float(curve.edge_lengths().sum())


def diameter(curve):
    """Largest pairwise vertex distance."""
    return float(np.sqrt(max_pair_distance_sq(curve.points)))


def resample_uniform(curve, n):
    """Redistribute n vertices at equal arclength along the polyline.

    New vertices lie on the old polyline; the first one is anchored at the
    old first vertex, which keeps the operation deterministic and idempotent
    on its own output. Tangential-only motion: the curve's image is traced
    unchanged (up to corner cuts at skipped old vertices).
    """
    if n < MIN_POINTS:
        raise ValueError(f"n must be >= {MIN_POINTS}")
    pts = curve.points
    closed = np.vstack([pts, pts[:1]])
    seg = np.sqrt(((closed[1:] - closed[:-1]) ** 2).sum(axis=1))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    length = cum[-1]
    targets = np.arange(n) * (length / n)
    out = np.empty((n, curve.dim))
    for d in range(curve.dim):
        out[:, d] = np.interp(targets, cum, closed[:, d])
    out[0] = pts[0]
    return DiscreteCurve(out)


# ---------------------------------------------------------------------------
# snapshot files
# ---------------------------------------------------------------------------

def _fmt(x):
    return format(float(x), ".17g")


def save_snapshot(curve, t, path):
    """Write the structured-text snapshot: fields dim, t, points.

    Numbers carry 17 significant digits, which round-trips float64 exactly.
    """
    rows = ",\n    ".join(
        "[" + ", ".join(_fmt(v) for v in row) + "]" for row in curve.points
    )
    text = (
        "{\n"
        f'  "dim": {curve.dim},\n'
        f'  "t": {_fmt(t)},\n'
        '  "points": [\n'
        f"    {rows}\n"
        "  ]\n"
        "}\n"
    )
    with open(path, "w") as fh:
        fh.write(text)


def load_snapshot(path):
    with open(path) as fh:
        doc = json.load(fh)
    pts = np.asarray(doc["points"], dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != int(doc["dim"]):
        raise CurveError(f"snapshot {path}: points do not match dim={doc['dim']}")
    return DiscreteCurve(pts), float(doc["t"])
