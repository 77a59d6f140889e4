"""Convex hulls, the Minkowski gauge, and convexity monitors for curves.

A space curve counts as convex when the Minkowski functional of its own
convex hull equals 1 on every vertex (all vertices extreme). For projections
we track the largest distance from a projected vertex to the boundary of the
projected hull; that maximum is zero exactly when the shadow is convex.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .geometry import frenet


class DegenerateHullError(ValueError):
    """All points collinear: no 2D hull exists."""


class CoplanarPointsError(ValueError):
    """3D input is coplanar; callers should fall back to the planar hull."""


class OriginNotInteriorError(ValueError):
    """Minkowski gauge needs the origin strictly inside the body."""


@dataclass(frozen=True)
class Projection:
    """Rank-2 orthogonal projector, stored as a (2, n) orthonormal basis."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.ascontiguousarray(np.asarray(self.basis, dtype=np.float64))
        if b.ndim != 2 or b.shape[0] != 2:
            raise ValueError("basis must be a (2, n) array")
        g = b @ b.T
        if not np.allclose(g, np.eye(2), atol=1e-12):
            raise ValueError("basis vectors must be orthonormal within 1e-12")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.basis.shape[1]

    def apply(self, vectors):
        """Coordinates of the projected vectors in the plane basis."""
        return np.asarray(vectors) @ self.basis.T


@dataclass(frozen=True)
class Hull2D:
    """Counterclockwise convex polygon (no three consecutive collinear)."""

    vertices: np.ndarray        # (H, 2) polygon corners, CCW
    indices: np.ndarray         # indices into the input point set

    @property
    def edges(self):
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    def centroid(self):
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        area = cross.sum() / 2.0
        return (v + w).T @ cross / (6.0 * area)

    def halfplanes(self):
        """Outward normals and offsets: inside iff n.x <= off for every edge."""
        e = self.edges
        normals = np.column_stack([e[:, 1], -e[:, 0]])
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        offsets = np.einsum("ij,ij->i", normals, self.vertices)
        return normals, offsets


@dataclass(frozen=True)
class Hull3D:
    """Triangulated convex surface with outward-oriented triangles."""

    points: np.ndarray          # the input point set
    triangles: np.ndarray       # (M, 3) indices, outward orientation
    normals: np.ndarray         # (M, 3) unit outward normals
    offsets: np.ndarray         # inside iff n.x <= off for every facet
    vertex_indices: np.ndarray  # indices of extreme input points

    def centroid(self):
        m = self.points[self.vertex_indices].mean(axis=0)
        vol = 0.0
        cen = np.zeros(3)
        for tri in self.triangles:
            a, b, c = self.points[tri]
            v = abs(np.dot(a - m, np.cross(b - m, c - m))) / 6.0
            vol += v
            cen += v * (a + b + c + m) / 4.0
        return cen / vol

    def halfplanes(self):
        return self.normals, self.offsets


def hull_2d(points):
    """Monotone-chain convex hull, CCW, collinear points dropped.

    Collinearity tolerance: a point within 1e-12 * diameter of the hull edge
    line does not count as a corner. Raises DegenerateHullError when all
    points are collinear.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("need at least 3 planar points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    span = pts.max(axis=0) - pts.min(axis=0)
    diam = float(np.hypot(*span))
    if diam == 0.0:
        raise DegenerateHullError("all points coincide")
    tol = 1e-12 * diam

    def build(idx_iter):
        chain = []
        for idx in idx_iter:
            p = pts[idx]
            while len(chain) >= 2:
                a = pts[chain[-2]]
                b = pts[chain[-1]]
                ab = b - a
                cross = ab[0] * (p[1] - a[1]) - ab[1] * (p[0] - a[0])
                base = np.hypot(*ab)
                # pop unless b is a strict left turn off line a->p
                if cross > tol * max(base, np.hypot(*(p - a))):
                    break
                chain.pop()
            chain.append(idx)
        return chain

    lower = build(order)
    upper = build(order[::-1])
    idx = np.array(lower[:-1] + upper[:-1], dtype=np.int64)
    if len(idx) < 3:
        raise DegenerateHullError("points are collinear within tolerance")
    return Hull2D(vertices=pts[idx].copy(), indices=idx)


def hull_3d(points):
    """Convex hull of 3D points via qhull, triangles reoriented outward.

    Raises CoplanarPointsError for (near-)coplanar input as the signal to
    fall back to hull_2d in the fitted plane.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
        raise ValueError("need at least 4 spatial points")
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise CoplanarPointsError("points are coplanar; use hull_2d in the plane")
    try:
        qh = ConvexHull(pts)
    except QhullError as exc:
        raise CoplanarPointsError(f"qhull failed (degenerate input): {exc}") from exc
    tris = qh.simplices.copy()
    normals = qh.equations[:, :3]
    offsets = -qh.equations[:, 3]
    # orient each triangle so its own normal agrees with the facet normal
    for k, tri in enumerate(tris):
        a, b, c = pts[tri]
        if np.dot(np.cross(b - a, c - a), normals[k]) < 0:
            tris[k, 1], tris[k, 2] = tris[k, 2], tris[k, 1]
    return Hull3D(points=pts, triangles=tris, normals=normals,
                  offsets=offsets, vertex_indices=qh.vertices.copy())


def minkowski_functional(hull, x):
    """Gauge of the convex body: the least lam > 0 with x/lam inside.

    Exact ray formula from the half-plane representation; requires the
    origin strictly interior. Equals 1 exactly on the boundary, < 1 inside.
    """
    normals, offsets = hull.halfplanes()
    if (offsets <= 0).any():
        raise OriginNotInteriorError("origin is not strictly inside the hull")
    x = np.asarray(x, dtype=np.float64)
    ratios = (normals @ x) / offsets
    m = float(ratios.max())
    if m <= 0:
        raise ValueError("gauge undefined for x = 0")
    return m


def is_convex_space_curve(curve, tol=None):
    """(flag, defect): whether every vertex is extreme on its own hull.

    The defect is reported in length units: the largest radial gap between a
    vertex and the hull boundary, measured from the hull centroid. Default
    tolerance 1e-6 * bbox diagonal. Coplanar curves fall back to the planar
    hull in their fitted plane.
    """
    pts = curve.points
    if curve.dim != 3:
        raise ValueError("convexity test expects curves in R^3")
    if tol is None:
        tol = 1e-6 * curve.bbox_diagonal()
    try:
        hull = hull_3d(pts)
        work = pts
    except CoplanarPointsError:
        center = pts.mean(axis=0)
        _, _, vt = np.linalg.svd(pts - center)
        work = (pts - center) @ vt[:2].T
        hull = hull_2d(work)
    cen = hull.centroid()
    shifted = work - cen
    normals, offsets = hull.halfplanes()
    offsets = offsets - normals @ cen
    if (offsets <= 0).any():
        raise OriginNotInteriorError("hull centroid not interior (degenerate hull)")
    gauges = (normals @ shifted.T / offsets[:, None]).max(axis=0)
    radial = np.linalg.norm(shifted, axis=1)
    defect = float((radial * (1.0 - gauges) / gauges).max())
    return defect < tol, max(defect, 0.0)


def phi_star(curve, x):
    """Star-shape certificate: min over vertices of |X - x| - |<X - x, T>|.

    The curve must be planar (2D, or 3D within a plane containing x); a
    strictly positive minimum certifies that the curve is star-shaped with
    respect to x.
    """
    pts = curve.points
    x = np.asarray(x, dtype=np.float64)
    if curve.dim == 3:
        center = pts.mean(axis=0)
        rel = np.vstack([pts - center, (x - center)[None, :]])
        sv = np.linalg.svd(rel, compute_uv=False)
        if sv[-1] > 1e-9 * sv[0]:
            raise ValueError("phi_star needs a planar curve and an in-plane point")
    fr = frenet(curve)
    rel = pts - x
    proj = np.abs(np.einsum("ij,ij->i", rel, fr.tangent))
    return float((np.linalg.norm(rel, axis=1) - proj).min())


@dataclass(frozen=True)
class ProjectedFrame:
    """Frame data of the projected curve plus the alignment inner product."""

    tangent2d: np.ndarray
    normal2d: np.ndarray
    curvature2d: np.ndarray
    pn_dot_np: np.ndarray      # <P N, N_P>, NaN where either normal is absent
    pt_norm: np.ndarray        # |P T| per vertex
    regular: np.ndarray        # pt_norm > threshold
    min_pt_norm: float


def projected_frame(curve, projection, kappa_floor=1e-8, regularity_threshold=1e-3):
    """Frenet data of the planar shadow and its alignment with the space frame.

    At every vertex where both the space curvature and the shadow curvature
    sit above the floor, pn_dot_np holds <P N, N_P>; irregular vertices
    (|P T| below threshold) are flagged rather than raised.
    """
    from .geometry import DiscreteCurve

    fr3 = frenet(curve, kappa_floor)
    pts2 = projection.apply(curve.points)
    flat = DiscreteCurve(pts2)
    fr2 = frenet(flat, kappa_floor)

    pt = projection.apply(fr3.tangent)
    pt_norm = np.linalg.norm(pt, axis=1)
    regular = pt_norm > regularity_threshold

    both = fr3.has_normal & fr2.has_normal
    pn_dot_np = np.full(curve.n, np.nan)
    if both.any():
        pn = projection.apply(fr3.normal[both])
        pn_dot_np[both] = np.einsum("ij,ij->i", pn, fr2.normal[both])
    return ProjectedFrame(
        tangent2d=fr2.tangent,
        normal2d=fr2.normal,
        curvature2d=fr2.curvature,
        pn_dot_np=pn_dot_np,
        pt_norm=pt_norm,
        regular=regular,
        min_pt_norm=float(pt_norm.min()),
    )


@dataclass(frozen=True)
class ConvexityDefectSample:
    """One reading of the shadow-convexity defect."""

    t: float
    phi_max: float
    argmax_vertex: int
    regular: bool
    min_pt_norm: float


def distance_to_polygon(points2, polygon):
    """Distance from each point to the closed polygon boundary."""
    pts = np.asarray(points2, dtype=np.float64)
    best = np.full(len(pts), np.inf)
    m = len(polygon)
    for i in range(m):
        a = polygon[i]
        ab = polygon[(i + 1) % m] - a
        denom = float(ab @ ab)
        tpar = np.clip(((pts - a) @ ab) / denom, 0.0, 1.0)
        foot = a + tpar[:, None] * ab
        best = np.minimum(best, np.linalg.norm(pts - foot, axis=1))
    return best


def convexity_defect(curve, projection, t=0.0, kappa_floor=1e-8,
                     regularity_threshold=1e-3):
    """Largest distance from a projected vertex to the projected hull boundary.

    Zero (up to round-off) exactly when the shadow is convex. The regular
    flag records whether |P T| stayed above the threshold at all vertices.
    """
    pts2 = projection.apply(curve.points)
    hull = hull_2d(pts2)
    dist = distance_to_polygon(pts2, hull.vertices)
    dist[hull.indices] = 0.0
    fr = frenet(curve, kappa_floor)
    pt_norm = np.linalg.norm(projection.apply(fr.tangent), axis=1)
    arg = int(np.argmax(dist))
    return ConvexityDefectSample(
        t=t,
        phi_max=float(dist[arg]),
        argmax_vertex=arg,
        regular=bool(pt_norm.min() > regularity_threshold),
        min_pt_norm=float(pt_norm.min()),
    )
