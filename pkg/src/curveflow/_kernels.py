"""Hot numeric kernels with two interchangeable backends.

Every kernel exists twice: a loop version compiled with numba's @njit and a
vectorized pure-numpy twin. The module-level names (``edge_lengths``,
``flow_step``, ...) are bound to one backend at import time:

* default: numba, when importable;
* ``CURVEFLOW_NUMBA=0`` (also ``off``/``no``/``false``): force the numpy path.

``benchmarks/bench_kernels.py`` times the two backends against each other and
``tests/test_kernels.py`` checks they agree numerically.
"""

import os

import numpy as np

_ENV = os.environ.get("CURVEFLOW_NUMBA", "auto").strip().lower()
_WANT_NUMBA = _ENV not in ("0", "off", "no", "false")

if _WANT_NUMBA:
    try:
        from numba import njit as _njit

        NUMBA_AVAILABLE = True
    except ImportError:  # pragma: no cover
        NUMBA_AVAILABLE = False
else:
    NUMBA_AVAILABLE = False

USE_NUMBA = _WANT_NUMBA and NUMBA_AVAILABLE


# ---------------------------------------------------------------------------
# loop implementations (numba-compiled when available)
# ---------------------------------------------------------------------------

def _edge_lengths_loop(points):
    n, dim = points.shape
    out = np.empty(n)
    for i in range(n):
        j = (i + 1) % n
        s = 0.0
        for d in range(dim):
            df = points[j, d] - points[i, d]
            s += df * df
        out[i] = np.sqrt(s)
    return out


def _arc_second_derivative_loop(points, edges):
    n, dim = points.shape
    out = np.empty_like(points)
    for i in range(n):
        im = (i - 1) % n
        ip = (i + 1) % n
        a = edges[im]
        b = edges[i]
        w = 2.0 / (a * b * (a + b))
        for d in range(dim):
            out[i, d] = w * (a * points[ip, d] - (a + b) * points[i, d] + b * points[im, d])
    return out


def _flow_step_loop(points, dt_safety, dt_cap):
    """One explicit Euler step fused into a single pass.

    dt = dt_safety * h_min^2, capped at dt_cap when dt_cap > 0.
    Returns (new_points, dt, h_min).
    """
    n, dim = points.shape
    edges = np.empty(n)
    h_min = np.inf
    for i in range(n):
        j = (i + 1) % n
        s = 0.0
        for d in range(dim):
            df = points[j, d] - points[i, d]
            s += df * df
        edges[i] = np.sqrt(s)
        if edges[i] < h_min:
            h_min = edges[i]
    dt = dt_safety * h_min * h_min
    if dt_cap > 0.0 and dt > dt_cap:
        dt = dt_cap
    out = np.empty_like(points)
    for i in range(n):
        im = (i - 1) % n
        ip = (i + 1) % n
        a = edges[im]
        b = edges[i]
        w = 2.0 / (a * b * (a + b))
        for d in range(dim):
            lap = w * (a * points[ip, d] - (a + b) * points[i, d] + b * points[im, d])
            out[i, d] = points[i, d] + dt * lap
    return out, dt, h_min


def _curve_stats_loop(points):
    """Per-vertex tangent (unit), curvature vector, curvature, edges, plus
    (total_length, h_min, kappa_max). One fused pass for the flow loop."""
    n, dim = points.shape
    edges = np.empty(n)
    total = 0.0
    h_min = np.inf
    for i in range(n):
        j = (i + 1) % n
        s = 0.0
        for d in range(dim):
            df = points[j, d] - points[i, d]
            s += df * df
        e = np.sqrt(s)
        edges[i] = e
        total += e
        if e < h_min:
            h_min = e
    tangent = np.empty_like(points)
    kvec = np.empty_like(points)
    kappa = np.empty(n)
    kappa_max = 0.0
    for i in range(n):
        im = (i - 1) % n
        ip = (i + 1) % n
        a = edges[im]
        b = edges[i]
        w = 2.0 / (a * b * (a + b))
        tnorm = 0.0
        ksq = 0.0
        for d in range(dim):
            tv = (points[ip, d] - points[im, d]) / (a + b)
            kv = w * (a * points[ip, d] - (a + b) * points[i, d] + b * points[im, d])
            tangent[i, d] = tv
            kvec[i, d] = kv
            tnorm += tv * tv
            ksq += kv * kv
        tnorm = np.sqrt(tnorm)
        for d in range(dim):
            tangent[i, d] /= tnorm
        kappa[i] = np.sqrt(ksq)
        if kappa[i] > kappa_max:
            kappa_max = kappa[i]
    return tangent, kvec, kappa, edges, total, h_min, kappa_max


def _chord_field_loop(points):
    n, dim = points.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for d in range(dim):
                df = points[j, d] - points[i, d]
                s += df * df
            out[i, j] = s
            out[j, i] = s
    return out


def _cyclic_arc_matrix_loop(cum_s, total_len):
    n = cum_s.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            d = cum_s[j] - cum_s[i]
            if d < 0.0:
                d = -d
            if d > total_len - d:
                d = total_len - d
            out[i, j] = d
    return out


def _avoidance_scan_loop(points, cum_s, total_len, arc_threshold, curv_bound):
    """Streaming O(N^2) pass over vertex pairs; no matrix is materialized.

    Returns (min_f_far, schur_margin) where min_f_far is the least squared
    chord over pairs with cyclic arc distance >= arc_threshold, and
    schur_margin is min(f - (4/C^2) sin^2(C l / 2)) over pairs with
    0 < l <= pi/C.
    """
    n, dim = points.shape
    pi_over_c = np.pi / curv_bound
    amp = 4.0 / (curv_bound * curv_bound)
    min_f_far = np.inf
    margin = np.inf
    for i in range(n):
        si = cum_s[i]
        for j in range(i + 1, n):
            arc = cum_s[j] - si
            if arc > total_len - arc:
                arc = total_len - arc
            f = 0.0
            for d in range(dim):
                df = points[j, d] - points[i, d]
                f += df * df
            if arc >= arc_threshold and f < min_f_far:
                min_f_far = f
            if arc <= pi_over_c:
                s = np.sin(0.5 * curv_bound * arc)
                m = f - amp * s * s
                if m < margin:
                    margin = m
    return min_f_far, margin


def _torus_local_minima_loop(field, arc, exclude_arc, strict):
    """Strict (or non-strict) local minima of the chord field on the index
    torus, 8-neighborhood, restricted to pairs with arc >= exclude_arc.
    Returns an (M, 2) index array with i < j."""
    n = field.shape[0]
    out = np.empty((n * n, 2), dtype=np.int64)
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            if arc[i, j] < exclude_arc:
                continue
            v = field[i, j]
            ok = True
            for di in range(-1, 2):
                for dj in range(-1, 2):
                    if di == 0 and dj == 0:
                        continue
                    w = field[(i + di) % n, (j + dj) % n]
                    if (strict and w <= v) or (not strict and w < v):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out[count, 0] = i
                out[count, 1] = j
                count += 1
    return out[:count]


def _max_pair_distance_sq_loop(points):
    n, dim = points.shape
    best = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for d in range(dim):
                df = points[j, d] - points[i, d]
                s += df * df
            if s > best:
                best = s
    return best


def _min_pair_distance_sq_loop(pa, pb):
    na, dim = pa.shape
    nb = pb.shape[0]
    best = np.inf
    for i in range(na):
        for j in range(nb):
            s = 0.0
            for d in range(dim):
                df = pb[j, d] - pa[i, d]
                s += df * df
            if s < best:
                best = s
    return best


# ---------------------------------------------------------------------------
# numpy twins
# ---------------------------------------------------------------------------

def edge_lengths_numpy(points):
    d = np.roll(points, -1, axis=0) - points
    return np.sqrt((d * d).sum(axis=1))


def arc_second_derivative_numpy(points, edges):
    a = np.roll(edges, 1)[:, None]
    b = edges[:, None]
    num = a * np.roll(points, -1, axis=0) - (a + b) * points + b * np.roll(points, 1, axis=0)
    return 2.0 * num / (a * b * (a + b))


def flow_step_numpy(points, dt_safety, dt_cap):
    edges = edge_lengths_numpy(points)
    h_min = edges.min()
    dt = dt_safety * h_min * h_min
    if dt_cap > 0.0 and dt > dt_cap:
        dt = dt_cap
    lap = arc_second_derivative_numpy(points, edges)
    return points + dt * lap, dt, h_min


def curve_stats_numpy(points):
    edges = edge_lengths_numpy(points)
    a = np.roll(edges, 1)[:, None]
    b = edges[:, None]
    tangent = (np.roll(points, -1, axis=0) - np.roll(points, 1, axis=0)) / (a + b)
    tangent /= np.linalg.norm(tangent, axis=1, keepdims=True)
    kvec = arc_second_derivative_numpy(points, edges)
    kappa = np.linalg.norm(kvec, axis=1)
    return (tangent, kvec, kappa, edges, float(edges.sum()),
            float(edges.min()), float(kappa.max()))


def chord_field_numpy(points):
    n = points.shape[0]
    out = np.zeros((n, n))
    for d in range(points.shape[1]):
        col = points[:, d]
        diff = col[:, None] - col[None, :]
        out += diff * diff
    return out


def cyclic_arc_matrix_numpy(cum_s, total_len):
    d = np.abs(cum_s[:, None] - cum_s[None, :])
    return np.minimum(d, total_len - d)


def avoidance_scan_numpy(points, cum_s, total_len, arc_threshold, curv_bound,
                         block=256):
    n = points.shape[0]
    pi_over_c = np.pi / curv_bound
    amp = 4.0 / (curv_bound * curv_bound)
    min_f_far = np.inf
    margin = np.inf
    # row blocks keep the temporaries small
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        diff = points[lo:hi, None, :] - points[None, :, :]
        f = (diff * diff).sum(axis=2)
        arc = np.abs(cum_s[lo:hi, None] - cum_s[None, :])
        arc = np.minimum(arc, total_len - arc)
        offdiag = np.ones_like(f, dtype=bool)
        offdiag[np.arange(hi - lo), np.arange(lo, hi)] = False
        far = offdiag & (arc >= arc_threshold)
        if far.any():
            min_f_far = min(min_f_far, f[far].min())
        near = offdiag & (arc <= pi_over_c)
        if near.any():
            s = np.sin(0.5 * curv_bound * arc[near])
            margin = min(margin, (f[near] - amp * s * s).min())
    return min_f_far, margin


def torus_local_minima_numpy(field, arc, exclude_arc, strict):
    n = field.shape[0]
    ok = np.ones((n, n), dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            nb = np.roll(np.roll(field, -di, axis=0), -dj, axis=1)
            ok &= (nb > field) if strict else (nb >= field)
    ok &= arc >= exclude_arc
    iu = np.triu_indices(n, k=1)
    mask = ok[iu]
    return np.column_stack([iu[0][mask], iu[1][mask]]).astype(np.int64)


def max_pair_distance_sq_numpy(points):
    best = 0.0
    for lo in range(0, len(points), 256):
        chunk = points[lo:lo + 256]
        diff = chunk[:, None, :] - points[None, :, :]
        best = max(best, float((diff * diff).sum(axis=2).max()))
    return best


def min_pair_distance_sq_numpy(pa, pb):
    best = np.inf
    for lo in range(0, len(pa), 256):
        chunk = pa[lo:lo + 256]
        diff = chunk[:, None, :] - pb[None, :, :]
        best = min(best, (diff * diff).sum(axis=2).min())
    return best


# ---------------------------------------------------------------------------
# backend binding
# ---------------------------------------------------------------------------

if USE_NUMBA:
    _jit = _njit(cache=True)
    edge_lengths_numba = _jit(_edge_lengths_loop)
    arc_second_derivative_numba = _jit(_arc_second_derivative_loop)
    flow_step_numba = _jit(_flow_step_loop)
    curve_stats_numba = _jit(_curve_stats_loop)
    chord_field_numba = _jit(_chord_field_loop)
    cyclic_arc_matrix_numba = _jit(_cyclic_arc_matrix_loop)
    avoidance_scan_numba = _jit(_avoidance_scan_loop)
    torus_local_minima_numba = _jit(_torus_local_minima_loop)
    max_pair_distance_sq_numba = _jit(_max_pair_distance_sq_loop)
    min_pair_distance_sq_numba = _jit(_min_pair_distance_sq_loop)

    edge_lengths = edge_lengths_numba
    arc_second_derivative = arc_second_derivative_numba
    flow_step = flow_step_numba
    curve_stats = curve_stats_numba
    chord_field_matrix = chord_field_numba
    cyclic_arc_matrix = cyclic_arc_matrix_numba
    avoidance_scan = avoidance_scan_numba
    torus_local_minima = torus_local_minima_numba
    max_pair_distance_sq = max_pair_distance_sq_numba
    min_pair_distance_sq = min_pair_distance_sq_numba
else:
    edge_lengths = edge_lengths_numpy
    arc_second_derivative = arc_second_derivative_numpy
    flow_step = flow_step_numpy
    curve_stats = curve_stats_numpy
    chord_field_matrix = chord_field_numpy
    cyclic_arc_matrix = cyclic_arc_matrix_numpy
    avoidance_scan = avoidance_scan_numpy
    torus_local_minima = torus_local_minima_numpy
    max_pair_distance_sq = max_pair_distance_sq_numpy
    min_pair_distance_sq = min_pair_distance_sq_numpy


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def warmup():
    """Trigger JIT compilation on tiny inputs so later calls are timed fairly."""
    pts = np.array([[np.cos(a), np.sin(a), 0.0] for a in np.linspace(0, 2 * np.pi, 9)[:-1]])
    e = edge_lengths(pts)
    arc_second_derivative(pts, e)
    flow_step(pts, 0.4, -1.0)
    curve_stats(pts)
    f = chord_field_matrix(pts)
    cum = np.concatenate([[0.0], np.cumsum(e)])[:-1]
    arc = cyclic_arc_matrix(cum, e.sum())
    avoidance_scan(pts, cum, e.sum(), 0.1, 2.0)
    torus_local_minima(f, arc, 0.1, True)
    max_pair_distance_sq(pts)
    min_pair_distance_sq(pts, pts + 3.0)
