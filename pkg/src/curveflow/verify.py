"""Named verification suites: each check compares a measured quantity against
its stated tolerance and reports pass/fail. The CLI ``verify`` subcommand
prints them; the acceptance test suite asserts them.

Heavy shared simulations are cached per process.
"""

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from ._kernels import arc_second_derivative, edge_lengths
from .convexity import Projection, convexity_defect, is_convex_space_curve, projected_frame
from .curves import (
    baseball,
    circle,
    convex_shadow_fixture,
    figure_eight,
    helix_arc,
    hypersphere_loop,
    lobed_fixture,
    random_sphere_curve,
    sphere_band_pair,
    stadium,
    twisted_circle,
)
from .flow import FlowParams, evolve, evolve_family
from .geometry import DiscreteCurve, diameter, frenet, total_length
from .monitors import (
    AvoidanceMonitor,
    Convexity3DMonitor,
    PairDistanceMonitor,
    ProjectionMonitor,
    SphericityMonitor,
)
from .spherical import (
    avoidance_sample,
    chord_field,
    chord_minima,
    heat_residual,
    schur_bound,
    tangent_collinearity,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    requirement: str

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.measured} (require {self.requirement})"


def _check(name, passed, measured, requirement):
    return CheckResult(name, bool(passed), measured, requirement)


# ---------------------------------------------------------------------------
# shared cached runs
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def circle_law_run(n=256, t_end=0.4):
    params = FlowParams(stop_max_time=t_end, stop_min_length=1e-3,
                        stop_max_curvature=1e6, record_every=10)
    return evolve(circle(n=n), params)


@lru_cache(maxsize=None)
def sphere_law_run():
    params = FlowParams(stop_max_time=0.15, stop_min_length=1e-3,
                        stop_max_curvature=1e3, record_every=25)
    return evolve(baseball(n=512, amplitude=0.4),
                  params, monitors=(SphericityMonitor(), AvoidanceMonitor()))


@lru_cache(maxsize=None)
def seeded_sphere_run(seed, n=384, t_end=0.2, max_kappa=8.0):
    curve = random_sphere_curve(n=n, seed=seed)
    params = FlowParams(stop_max_time=t_end, stop_min_length=1e-3,
                        stop_max_curvature=max_kappa, record_every=25)
    return evolve(curve, params, monitors=(SphericityMonitor(), AvoidanceMonitor()))


@lru_cache(maxsize=None)
def adversarial_sphere_run(index, n=512):
    curve = lobed_fixture(index, n=n)
    params = FlowParams(stop_max_time=0.12, stop_min_length=1e-3,
                        stop_max_curvature=14.0, record_every=25)
    return evolve(curve, params, monitors=(SphericityMonitor(), AvoidanceMonitor()))


@lru_cache(maxsize=None)
def twisted_circle_run(n=512, t_end=0.01):
    curve = twisted_circle(n=n)
    basis = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    params = FlowParams(stop_max_time=t_end, stop_min_length=1e-3,
                        stop_max_curvature=1e3, record_every=5)
    monitors = (ProjectionMonitor(Projection(basis)), Convexity3DMonitor())
    state, report = evolve(curve, params, monitors=monitors)
    return state, report, diameter(curve)


@lru_cache(maxsize=None)
def shadow_fixture_run(seed, n=512, t_end=0.05):
    curve, basis = convex_shadow_fixture(seed, n=n)
    params = FlowParams(stop_max_time=t_end, stop_min_length=1e-3,
                        stop_max_curvature=1e3, record_every=20)
    state, report = evolve(curve, params,
                           monitors=(ProjectionMonitor(Projection(basis)),))
    return state, report, diameter(curve)


@lru_cache(maxsize=None)
def family_band_run():
    curves = tuple(sphere_band_pair(n=384))
    params = FlowParams(stop_max_time=0.15, stop_min_length=1e-3,
                        stop_max_curvature=50.0, record_every=25)
    return evolve_family(curves, params, family_monitors=(PairDistanceMonitor(),))


# ---------------------------------------------------------------------------
# frenet suite
# ---------------------------------------------------------------------------

def suite_frenet():
    checks = []
    c = circle(n=256)
    fr = frenet(c)
    d2 = arc_second_derivative(c.points, edge_lengths(c.points))
    mag_err = float(np.abs(np.linalg.norm(d2, axis=1) - 1.0).max())
    checks.append(_check("circle-256 second-derivative magnitude", mag_err < 1e-3,
                         f"max |k-1| = {mag_err:.2e}", "< 1e-3"))
    inward = float(np.einsum("ij,ij->i", fr.normal, -c.points).min())
    checks.append(_check("circle normal points inward", inward > 0.999,
                         f"min <N, -X> = {inward:.6f}", "> 0.999"))
    tau_max = float(np.nanmax(np.abs(fr.torsion)))
    checks.append(_check("circle torsion", tau_max < 1e-3,
                         f"max |tau| = {tau_max:.2e}", "< 1e-3"))
    bz = float(np.abs(fr.binormal[:, 2] - 1.0).max())
    checks.append(_check("circle binormal is +z", bz < 1e-9,
                         f"max |Bz-1| = {bz:.2e}", "< 1e-9"))

    # helix: open arc, so the two seam vertices are excluded
    h = helix_arc(n=512, radius=1.0, pitch=0.5)
    fh = frenet(h)
    kerr = float(np.abs(fh.curvature[2:-2] - 0.8).max())
    terr = float(np.nanmax(np.abs(fh.torsion[3:-3] - 0.4)))
    checks.append(_check("helix curvature 1/(1+1/4)", kerr < 1e-3,
                         f"max |k-0.8| = {kerr:.2e} (interior)", "< 1e-3"))
    checks.append(_check("helix torsion (1/2)/(1+1/4)", terr < 1e-3,
                         f"max |tau-0.4| = {terr:.2e} (interior)", "< 1e-3"))

    # large-circle arc standing in for a straight segment
    big = circle(n=4096, radius=1e3)
    kbig = frenet(big).curvature
    checks.append(_check("radius-1e3 arc curvature", abs(kbig.mean() - 1e-3) < 1e-6,
                         f"mean k = {kbig.mean():.3e}", "~= 1e-3"))

    st = stadium(n=256, straight=2.0, radius=1.0)
    fs = frenet(st, kappa_floor=1e-6)
    flat = ~fs.has_normal
    checks.append(_check("stadium flats carry no normal", flat.sum() >= 20,
                         f"{int(flat.sum())} floored vertices", ">= 20"))
    kflat = float(fs.curvature[flat].max()) if flat.any() else math.inf
    checks.append(_check("stadium flats have zero curvature", kflat < 1e-12,
                         f"max k on flats = {kflat:.2e}", "< 1e-12"))
    return checks


# ---------------------------------------------------------------------------
# convexity suite
# ---------------------------------------------------------------------------

def suite_convexity():
    from .convexity import hull_2d, hull_3d, minkowski_functional

    checks = []
    sq = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    h = hull_2d(sq)
    checks.append(_check("square hull", len(h.vertices) == 4,
                         f"{len(h.vertices)} corners", "4 corners CCW"))

    cube = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)],
                    dtype=float)
    h3 = hull_3d(cube)
    checks.append(_check("cube hull triangulation", len(h3.triangles) == 12,
                         f"{len(h3.triangles)} triangles", "12"))
    m2 = minkowski_functional(h3, np.array([2.0, 0.0, 0.0]))
    m05 = minkowski_functional(h3, np.array([0.5, 0.0, 0.0]))
    checks.append(_check("cube gauge at (2,0,0)", abs(m2 - 2) < 1e-12,
                         f"{m2:.15f}", "= 2"))
    checks.append(_check("cube gauge at (0.5,0,0)", abs(m05 - 0.5) < 1e-12,
                         f"{m05:.15f}", "= 0.5"))

    tc = twisted_circle(n=512)
    convex0, defect0 = is_convex_space_curve(tc)
    checks.append(_check("twisted circle convex at t=0", convex0,
                         f"defect = {defect0:.2e}", "< 1e-6 * diameter"))

    state, report, diam = twisted_circle_run()
    tol = 1e-6 * diam
    peak = float(np.nanmax(report.series("convex_defect_3d")))
    checks.append(_check("twisted circle loses spatial convexity", peak > 10 * tol,
                         f"peak defect = {peak:.2e}", f"> 10 x tol = {10 * tol:.2e}"))
    t_loss = report.first_violation("convex_defect_3d", lambda v: v > 10 * tol)
    checks.append(_check("convexity loss is immediate", t_loss is not None and t_loss < 0.01,
                         f"first crossing at t = {t_loss}", "within t < 0.01"))
    return checks


# ---------------------------------------------------------------------------
# projection suite (shadow convexity under the flow)
# ---------------------------------------------------------------------------

def projection_phi_results():
    """(label, ok, phi_peak, tol) per fixture: phi stays under 5e-3 * diameter
    at every recorded step while the regularity flag holds."""
    out = []
    state, report, diam = twisted_circle_run()
    out.append(_phi_ok("twisted_circle", report, diam))
    for seed in range(1, 6):
        state, report, diam = shadow_fixture_run(seed)
        out.append(_phi_ok(f"shadow_fixture_{seed}", report, diam))
    return out


def _phi_ok(label, report, diam, regularity_threshold=1e-3):
    tol = 5e-3 * diam
    phi = report.series("phi_max")
    reg = report.series("proj_regular_min")
    gated = phi[reg > regularity_threshold]
    peak = float(np.nanmax(gated)) if gated.size else 0.0
    return label, bool((gated < tol).all()), peak, tol


def suite_projection():
    checks = []
    for label, ok, peak, tol in projection_phi_results():
        checks.append(_check(f"shadow stays convex [{label}]", ok,
                             f"peak phi (regular steps) = {peak:.2e}",
                             f"< {tol:.2e}"))
    # static sanity: a dented polygon has a defect close to the dent depth
    pts = circle(n=256).points.copy()
    pts[0] *= 0.5
    dent = convexity_defect(DiscreteCurve(pts),
                            Projection(np.array([[1., 0., 0.], [0., 1., 0.]])))
    checks.append(_check("dented circle defect", abs(dent.phi_max - 0.5) < 2e-2,
                         f"phi = {dent.phi_max:.4f}", "0.5 +- 2e-2"))
    return checks


# ---------------------------------------------------------------------------
# lemma2 suite: projected normals align with shadow normals
# ---------------------------------------------------------------------------

def _random_tilted_loop(seed, n=256):
    rng = np.random.default_rng(np.random.SeedSequence([911, seed]))
    u = 2 * np.pi * np.arange(n) / n
    r = 1.0 + 0.25 * np.cos(int(rng.integers(2, 5)) * u + rng.random())
    z = 0.35 * np.sin(int(rng.integers(1, 4)) * u + rng.random())
    pts = np.column_stack([r * np.cos(u), r * np.sin(u), z])
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return DiscreteCurve(pts @ q.T), Projection(np.ascontiguousarray(q[:, :2].T))


def normal_alignment_samples(target=1000, kappa_floor=1e-8):
    """Gather vertex samples meeting the regularity gates; returns the array
    of <P N, N_P> values across random tilted loops."""
    vals = []
    seed = 0
    while len(vals) < target and seed < 64:
        curve, proj = _random_tilted_loop(seed)
        pf = projected_frame(curve, proj, kappa_floor=kappa_floor)
        fr = frenet(curve, kappa_floor)
        gate = (
            (fr.curvature > 10 * kappa_floor)
            & (pf.curvature2d > 10 * kappa_floor)
            & (pf.pt_norm > 0.1)
            & ~np.isnan(pf.pn_dot_np)
        )
        vals.extend(pf.pn_dot_np[gate].tolist())
        seed += 1
    return np.asarray(vals[:target] if len(vals) >= target else vals)


def suite_lemma2():
    vals = normal_alignment_samples()
    n_bad = int((vals <= 1e-10).sum())
    checks = [
        _check("sample count", len(vals) >= 1000, f"{len(vals)} samples", ">= 1000"),
        _check("projected-normal alignment strictly positive", n_bad == 0,
               f"{n_bad} violations, min = {vals.min():.3e}", "0 violations, > 1e-10"),
    ]
    # helix shadow: the projection is the unit circle and normals align fully
    h = helix_arc(n=512, radius=1.0, pitch=0.5)
    pf = projected_frame(h, Projection(np.array([[1., 0., 0.], [0., 1., 0.]])))
    core = pf.pn_dot_np[4:-4]
    err = float(np.nanmax(np.abs(core - 1.0)))
    checks.append(_check("helix shadow alignment = 1", err < 1e-3,
                         f"max |<PN,N_P>-1| = {err:.2e} (interior)", "< 1e-3"))
    return checks


# ---------------------------------------------------------------------------
# lemma3 suite: chord minima have collinear tangents (R^3), not in R^4
# ---------------------------------------------------------------------------

def chord_minima_collinearity(curve, exclude_frac=0.3):
    field = chord_field(curve)
    mins = chord_minima(field, exclude_frac * field.total_length)
    return [(i, j, f, tangent_collinearity(curve, i, j)) for i, j, f in mins]


def suite_lemma3():
    checks = []
    worst = 1.0
    n_minima = 0
    for seed in range(1, 21):
        curve = random_sphere_curve(n=512, seed=seed)
        for _, _, _, col in chord_minima_collinearity(curve):
            n_minima += 1
            worst = min(worst, col)
    for idx in range(3):
        found = chord_minima_collinearity(lobed_fixture(idx, n=512))
        checks.append(_check(f"waisted fixture {idx} has chord minima",
                             len(found) > 0, f"{len(found)} minima", ">= 1"))
        for _, _, _, col in found:
            n_minima += 1
            worst = min(worst, col)
    checks.insert(0, _check(
        "sphere-bound chord minima are tangent-collinear",
        worst > 1 - 1e-3 and n_minima > 0,
        f"{n_minima} minima, worst |<T,T>| = {worst:.6f}", "> 1 - 1e-3"))

    loop4 = hypersphere_loop(n=512)
    field = chord_field(loop4)
    mins = chord_minima(field, 0.3 * field.total_length)
    if not mins:
        mins = chord_minima(field, 0.3 * field.total_length, strict=False)
    cols = [tangent_collinearity(loop4, i, j) for i, j, _ in mins]
    has_orth = any(c < 1e-3 for c in cols)
    checks.append(_check("4D loop breaks collinearity at a minimum", has_orth,
                         f"minima collinearities: {[f'{c:.2e}' for c in cols]}",
                         "some |<T,T>| < 1e-3"))
    k4 = loop4.n // 4
    pair_present = any({i, j} == {k4, 3 * k4} for i, j, _ in mins)
    checks.append(_check("4D minimum sits at the quarter/three-quarter pair",
                         pair_present, f"minima at {[(i, j) for i, j, _ in mins]}",
                         f"contains ({k4}, {3 * k4})"))
    return checks


# ---------------------------------------------------------------------------
# lemma4 suite: chord-function heat defect
# ---------------------------------------------------------------------------

def _heat_snapshots(curve, substeps):
    """Three chord fields spaced by a uniform dt (no redistribution)."""
    pts = curve.points.copy()
    h = float(edge_lengths(pts).min())
    dt = 0.4 * h * h
    fields = [chord_field(DiscreteCurve(pts))]
    for _ in range(2):
        for _ in range(substeps):
            pts = pts + dt * arc_second_derivative(pts, edge_lengths(pts))
        fields.append(chord_field(DiscreteCurve(pts)))
    return fields, dt * substeps


@lru_cache(maxsize=None)
def heat_residual_circle(n):
    """Residual on the shrinking circle at t ~ 0.1, with the recording
    interval scaled like 1/n^2 so refinement shrinks both error sources."""
    params = FlowParams(stop_max_time=0.1, stop_min_length=1e-3,
                        stop_max_curvature=1e3, record_every=1000000)
    state, _ = evolve(circle(n=n), params)
    substeps = max(1, round(16 * (256 / n) ** 2))
    fields, dt_rec = _heat_snapshots(state.curve, substeps)
    return heat_residual(fields, dt_rec, n_pairs=256, seed=0)


def suite_lemma4():
    checks = []
    r512 = heat_residual_circle(512)
    checks.append(_check("circle heat defect at n=512", r512 < 0.05,
                         f"residual = {r512:.2e}", "< 0.05"))
    r256 = heat_residual_circle(256)
    r1024 = heat_residual_circle(1024)
    ratios = (r512 / r256, r1024 / r512)
    ok = all(r <= 0.65 for r in ratios)
    checks.append(_check("heat defect shrinks under refinement", ok,
                         f"ratios per doubling = {ratios[0]:.2f}, {ratios[1]:.2f}",
                         "<= 0.65 each (at least first order)"))

    # static curve: the time term drops out and the residual reduces to the
    # pure spatial defect max |lap f - 4|, which on a static unit circle is
    # max |4 cos(theta) - 4| over the sampled pairs
    n = 512
    c = circle(n=n)
    f = chord_field(c)
    rng = np.random.default_rng(1)
    raw = rng.integers(0, n, size=(512, 2))
    gap = np.minimum(np.abs(raw[:, 0] - raw[:, 1]), n - np.abs(raw[:, 0] - raw[:, 1]))
    pairs = raw[gap >= 2][:128]
    res_static = heat_residual([f, f, f], dt_record=1.0, pairs=pairs)
    theta = 2 * np.pi * np.minimum(np.abs(pairs[:, 0] - pairs[:, 1]),
                                   n - np.abs(pairs[:, 0] - pairs[:, 1])) / n
    expect = float(np.abs(4 * np.cos(theta) - 4).max())
    checks.append(_check("static field decouples to the spatial defect",
                         abs(res_static - expect) < 1e-3,
                         f"residual = {res_static:.6f}, analytic |lap f - 4| = {expect:.6f}",
                         "equal within 1e-3"))

    sph = baseball(n=512, amplitude=0.4)
    params = FlowParams(stop_max_time=0.05, stop_min_length=1e-3,
                        stop_max_curvature=1e3, record_every=1000000)
    state, _ = evolve(sph, params)
    fields, dt_rec = _heat_snapshots(state.curve, 16)
    r_sph = heat_residual(fields, dt_rec, n_pairs=256, seed=0)
    checks.append(_check("spherical-curve heat defect", r_sph < 0.1,
                         f"residual = {r_sph:.2e}", "< 0.1"))
    return checks


# ---------------------------------------------------------------------------
# schur suite: chord lower bound for curvature-bounded curves
# ---------------------------------------------------------------------------

def suite_schur():
    checks = []
    for curv_bound in (1.0, 2.0):
        c = circle(n=3072, radius=1.0 / curv_bound)
        field = chord_field(c)
        margin = schur_bound(field, curv_bound)
        arc = field.arc_distances
        sel = (arc > 0) & (arc <= np.pi / curv_bound)
        bound = (4 / curv_bound**2) * np.sin(0.5 * curv_bound * arc[sel]) ** 2
        worst = float(np.abs(field.values[sel] - bound).max())
        checks.append(_check(f"bound tight on circle of radius 1/{curv_bound:g}",
                             worst < 1e-6, f"max |f - bound| = {worst:.2e}", "< 1e-6"))
        checks.append(_check(f"bound never violated (C={curv_bound:g})",
                             margin >= -1e-12, f"margin = {margin:.2e}", ">= 0"))
    val = (4.0 / 2.0**2) * np.sin(0.5 * 2.0 * (np.pi / 2.0)) ** 2
    checks.append(_check("bound equals 4/C^2 at arc pi/C", abs(val - 1.0) < 1e-15,
                         f"value = {val!r} for C=2", "= 1.0"))

    curve = random_sphere_curve(n=512, seed=3)
    kmax = frenet(curve).max_curvature
    field = chord_field(curve)
    margin = schur_bound(field, 1.1 * kmax)
    diam = diameter(curve)
    checks.append(_check("margin nonneg with 10% headroom (random spherical)",
                         margin >= -1e-6 * diam**2,
                         f"margin = {margin:.2e}", f">= {-1e-6 * diam**2:.1e}"))

    margins, diams = spherical_run_margins()
    worst = min(m - (-1e-6 * d * d) for m, d in zip(margins, diams))
    checks.append(_check("margins nonneg across spherical runs",
                         worst >= 0, f"min margin slack = {worst:.2e}",
                         ">= -1e-6 * diameter^2 on every recorded step"))
    return checks


@lru_cache(maxsize=None)
def spherical_run_margins():
    """Schur margins recorded across every cached spherical acceptance run,
    paired with the run's initial diameter."""
    margins = []
    diams = []

    def collect(report, d0):
        for val in report.series("schur_margin"):
            if not math.isnan(val):
                margins.append(float(val))
                diams.append(d0)

    _, rep = sphere_law_run()
    collect(rep, diameter(baseball(n=512, amplitude=0.4)))
    for seed in range(1, 18):
        _, rep = seeded_sphere_run(seed)
        collect(rep, diameter(random_sphere_curve(n=384, seed=seed)))
    for idx in range(3):
        _, rep = adversarial_sphere_run(idx)
        collect(rep, diameter(lobed_fixture(idx, n=512)))
    return margins, diams


# ---------------------------------------------------------------------------
# avoidance suite
# ---------------------------------------------------------------------------

def avoidance_barrier_results():
    """(label, ok, detail): the far-pair chord floor must stay positive and
    above min(initial floor, 4/C_emp^2) * 0.95 at every recorded step, and
    the self-intersection flag must never trip."""
    out = []

    def analyze(label, report):
        min_f = report.series("min_f_D")
        c_emp = report.series("C_emp")
        flags = report.series("self_intersect")
        if np.isnan(min_f).any():
            out.append((label, False, "missing min_f_D samples"))
            return
        initial = min_f[0]
        barrier = np.minimum(initial, 4.0 / c_emp**2) * 0.95
        ok = bool((min_f > 0).all() and (min_f >= barrier).all()
                  and not flags.astype(bool).any())
        slack = float((min_f - barrier).min())
        out.append((label, ok, f"min slack = {slack:.3e}, floor > 0: {bool((min_f > 0).all())}"))

    for seed in range(1, 18):
        _, rep = seeded_sphere_run(seed)
        analyze(f"random_{seed}", rep)
    for idx in range(3):
        _, rep = adversarial_sphere_run(idx)
        analyze(f"adversarial_{idx}", rep)
    return out


def suite_avoidance():
    checks = []
    results = avoidance_barrier_results()
    bad = [label for label, ok, _ in results if not ok]
    checks.append(_check("chord floor barrier on 20 spherical runs",
                         not bad, f"{len(results)} runs, failures: {bad or 'none'}",
                         "floor > 0 and >= min(initial, 4/C^2) * 0.95"))
    for label, ok, detail in results:
        if not ok:
            checks.append(_check(f"barrier [{label}]", ok, detail, "see above"))

    eight = figure_eight(n=256)
    sample = avoidance_sample(eight, headroom=1.1)
    checks.append(_check("immersed eight trips the self-intersection flag",
                         sample.self_intersect,
                         f"min_f_D = {sample.min_f_on_D:.2e}", "flag set at t=0"))
    return checks


# ---------------------------------------------------------------------------
# sphericity suite
# ---------------------------------------------------------------------------

def sphere_law_results():
    """Radius tracking and rms deviation for the baseball run."""
    _, report = sphere_law_run()
    t = report.series("t")
    radius = report.series("sphere_radius")
    rms = report.series("sphere_rms")
    law = np.sqrt(1.0 - 2.0 * t)
    rad_err = float(np.nanmax(np.abs(radius - law) / law))
    rms_peak = float(np.nanmax(rms))
    return rad_err, rms_peak, float(t[-1])


def suite_sphericity():
    checks = []
    rad_err, rms_peak, t_end = sphere_law_results()
    checks.append(_check("shrinking-sphere radius law sqrt(1-2t)", rad_err < 1e-2,
                         f"max rel err = {rad_err:.2e} up to t={t_end:.3f}", "< 1%"))
    checks.append(_check("baseball stays on its sphere", rms_peak < 5e-3,
                         f"peak rms = {rms_peak:.2e}", "< 5e-3"))
    worst = 0.0
    for seed in range(1, 11):
        _, rep = seeded_sphere_run(seed)
        rel = np.nan_to_num(rep.series("sphere_rms") / rep.series("sphere_radius"))
        worst = max(worst, float(rel.max()))
    checks.append(_check("10 random spherical fixtures stay spherical",
                         worst < 5e-3, f"worst rms/radius = {worst:.2e}", "< 5e-3"))
    c = circle(n=256)
    params = FlowParams(stop_max_time=0.05, record_every=10)
    _, rep = evolve(c, params, monitors=(SphericityMonitor(),))
    rms = rep.series("sphere_rms")
    checks.append(_check("planar circle yields absent sphere samples",
                         np.isnan(rms).all() and rep.stop_reason == "max_time",
                         f"{int(np.isnan(rms).sum())}/{len(rms)} absent", "all absent, run completes"))
    return checks


# ---------------------------------------------------------------------------
# family suite
# ---------------------------------------------------------------------------

def family_results():
    runs = family_band_run()
    _, rep = runs[0]
    dist = rep.series("pair_min_dist")
    return dist, rep


def suite_family():
    checks = []
    dist, rep = family_results()
    checks.append(_check("disjoint same-sphere pair never meets",
                         bool((dist > 0).all()),
                         f"min distance = {dist.min():.4f} over {len(dist)} samples",
                         "> 0 at every recorded step"))

    pair = (circle(n=256, radius=1.0), circle(n=256, radius=2.0))
    params = FlowParams(stop_max_time=0.4, stop_min_length=1e-3,
                        stop_max_curvature=1e3, record_every=20)
    runs = evolve_family(pair, params, family_monitors=(PairDistanceMonitor(),))
    _, rep2 = runs[0]
    t = rep2.series("t")
    dist = rep2.series("pair_min_dist")
    law = np.sqrt(4 - 2 * t) - np.sqrt(1 - 2 * t)
    err = float(np.abs(dist - law).max())
    checks.append(_check("concentric circles gap follows the exact law",
                         err < 5e-3, f"max |gap - law| = {err:.2e}", "< 5e-3"))
    checks.append(_check("gap grows while both circles shrink",
                         bool((np.diff(dist) > -1e-12).all()),
                         f"min increment = {np.diff(dist).min():.2e}", "non-decreasing"))
    return checks


# ---------------------------------------------------------------------------
# convergence and step-cost measurements (used by sweep/acceptance)
# ---------------------------------------------------------------------------

def circle_radius_error(n, dt_safety, t_end=0.25):
    params = FlowParams(dt_safety=dt_safety, stop_max_time=t_end,
                        stop_min_length=1e-3, stop_max_curvature=1e6,
                        record_every=10**9)
    state, _ = evolve(circle(n=n), params)
    pts = state.curve.points
    center = pts.mean(axis=0)
    radius = float(np.linalg.norm(pts - center, axis=1).mean())
    return abs(radius - math.sqrt(1.0 - 2.0 * t_end))


@lru_cache(maxsize=None)
def convergence_orders():
    """Measured accuracy orders of the circle radius: in vertex count at
    fixed dt_safety, and in dt_safety at fixed vertex count."""
    ns = (128, 256, 512)
    errs_n = [circle_radius_error(n, 0.4) for n in ns]
    orders_n = [math.log2(errs_n[i] / errs_n[i + 1]) for i in range(len(ns) - 1)]
    dts = (0.4, 0.2, 0.1)
    errs_dt = [circle_radius_error(256, ds) for ds in dts]
    orders_dt = [math.log2(errs_dt[i] / errs_dt[i + 1]) for i in range(len(dts) - 1)]
    return {
        "ns": ns, "errs_n": errs_n, "order_n": sum(orders_n) / len(orders_n),
        "dts": dts, "errs_dt": errs_dt, "order_dt": sum(orders_dt) / len(orders_dt),
    }


def median_step_time(n, with_checks, steps=None, repeats=5):
    """Median wall-clock seconds per flow step at resolution n."""
    _kernels.warmup()
    curve = baseball(n=n, amplitude=0.4)
    monitors = (AvoidanceMonitor(),) if with_checks else ()
    params = FlowParams(stop_max_time=1e9, stop_min_length=1e-9,
                        stop_max_curvature=1e9, record_every=1)
    if steps is None:
        budget = 0.25 if with_checks else 0.02  # seconds per repeat
        probe = _timed_steps(curve, params, monitors, 3)
        steps = max(6, min(400, int(budget / probe)))
    else:
        _timed_steps(curve, params, monitors, 2)
    times = [_timed_steps(curve, params, monitors, steps) for _ in range(repeats)]
    return float(np.median(times))


def _timed_steps(curve, params, monitors, steps):
    from .flow import FlowState, step

    state = FlowState.initial(curve, params)
    t0 = time.perf_counter()
    for _ in range(steps):
        state = step(state, params)
        for mon in monitors:
            mon.sample(state)
    return (time.perf_counter() - t0) / steps


@lru_cache(maxsize=None)
def step_cost_scaling():
    """Per-step time ratios n=2048 vs n=512, with and without the O(N^2)
    topology checks."""
    with_512 = median_step_time(512, True)
    with_2048 = median_step_time(2048, True)
    without_512 = median_step_time(512, False)
    without_2048 = median_step_time(2048, False)
    return {
        "with_checks_ratio": with_2048 / with_512,
        "without_checks_ratio": without_2048 / without_512,
        "with_512": with_512, "with_2048": with_2048,
        "without_512": without_512, "without_2048": without_2048,
    }


# ---------------------------------------------------------------------------
# suite registry
# ---------------------------------------------------------------------------

SUITES = {
    "frenet": suite_frenet,
    "convexity": suite_convexity,
    "projection": suite_projection,
    "lemma2": suite_lemma2,
    "lemma3": suite_lemma3,
    "lemma4": suite_lemma4,
    "schur": suite_schur,
    "avoidance": suite_avoidance,
    "sphericity": suite_sphericity,
    "family": suite_family,
}


def run_suite(name):
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key))
        return out
    return SUITES[name]()
