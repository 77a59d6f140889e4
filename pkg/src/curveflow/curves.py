"""Deterministic curve generators and randomized fixture families.

Generator kinds registered in ``GENERATORS`` are part of the CLI contract
(``curveflow list-generators``). All generators are pure functions of their
parameters; randomized kinds are keyed by an integer seed and reproduce
bit-identically.
"""

from dataclasses import dataclass, field

import numpy as np

from ._kernels import chord_field_matrix, cyclic_arc_matrix, edge_lengths
from .geometry import DiscreteCurve

# Constants of the twisted-circle phase au^3 + bu. They satisfy
# a*pi^3 + b*pi = -pi, so the phase closes with winding -1, and the two
# curvature shoulders sit at u = +-w where the phase second derivative
# balances the vertical wobble.
TWIST_PHASE_A = (np.pi + 2.0) / (2.0 * (1.0 - np.pi**2))
TWIST_PHASE_B = (np.pi**3 + 2.0) / (2.0 * (np.pi**2 - 1.0))
TWIST_SHOULDER = float(np.sqrt((np.pi**3 + 2.0) / (np.pi + 2.0)))


class GeneratorError(ValueError):
    """Bad generator parameters or no admissible random draw."""


def _param_angles(n):
    return 2.0 * np.pi * np.arange(n) / n


def circle(n=256, radius=1.0, dim=3):
    """Planar circle of the given radius in the xy-plane."""
    u = _param_angles(n)
    pts = np.zeros((n, dim))
    pts[:, 0] = radius * np.cos(u)
    pts[:, 1] = radius * np.sin(u)
    return DiscreteCurve(pts)


def latitude(n=256, polar_angle=np.pi / 3, radius=1.0):
    """Latitude circle on the sphere of the given radius, centered at 0."""
    u = _param_angles(n)
    s, c = np.sin(polar_angle), np.cos(polar_angle)
    return DiscreteCurve(radius * np.column_stack([s * np.cos(u), s * np.sin(u), np.full(n, c)]))


def baseball(n=512, amplitude=0.4, lobes=2, radius=1.0, phase=0.0):
    """Seam-like curve on a sphere: the polar angle oscillates about the
    equator with the given amplitude and lobe count. Non-planar for any
    amplitude > 0; larger amplitudes pull the lobes toward the poles and
    create genuine chord-distance waists."""
    u = _param_angles(n)
    pol = np.pi / 2 + amplitude * np.sin(lobes * u + phase)
    return DiscreteCurve(radius * np.column_stack(
        [np.cos(u) * np.sin(pol), np.sin(u) * np.sin(pol), np.cos(pol)]
    ))


def twisted_circle(n=512):
    """Convex space curve whose xy-shadow is exactly the unit circle.

    The circular phase runs nonuniformly (au^3 + bu, winding -1) and the
    height wobbles as sin u - sin(2u)/2. Under the shortening flow the
    spatial convexity of this curve dies immediately while the shadow stays
    circular.
    """
    if n < 64:
        raise GeneratorError("twisted_circle needs n >= 64 to resolve the cubic phase")
    u = -np.pi + 2.0 * np.pi * np.arange(n) / n
    th = TWIST_PHASE_A * u**3 + TWIST_PHASE_B * u
    return DiscreteCurve(np.column_stack(
        [np.cos(th), np.sin(th), np.sin(u) - 0.5 * np.sin(2.0 * u)]
    ))


def hypersphere_loop(n=512):
    """Closed loop on the unit 3-sphere in R^4.

    Its squared-chord function has a strict local minimum at the parameter
    pair (pi/2, 3pi/2) where the two tangents are orthogonal, so chord
    minima of sphere-bound curves in R^4 need not have collinear tangents.
    """
    if n < 128:
        raise GeneratorError("hypersphere_loop needs n >= 128")
    u = _param_angles(n)
    a = np.cos(u)
    b = 0.5 * np.sin(2.0 * u)
    c = 0.5 * np.sin(u)
    return DiscreteCurve(np.column_stack([
        np.sin(a),
        np.cos(a) * np.sin(b),
        np.cos(a) * np.cos(b) * np.cos(c),
        np.cos(a) * np.cos(b) * np.sin(c),
    ]))


def stadium(n=256, straight=2.0, radius=1.0):
    """Closed stadium: two semicircles joined by straight segments.

    The flat segments carry exactly zero discrete curvature vector, which
    exercises the curvature-floor handling (no normal there).
    """
    half = straight / 2.0
    arc_len = np.pi * radius
    total = 2 * straight + 2 * arc_len
    s = np.arange(n) * (total / n)
    pts = np.empty((n, 3))
    for i, si in enumerate(s):
        if si < straight:                      # bottom, going +x
            pts[i] = (-half + si, -radius, 0.0)
        elif si < straight + arc_len:          # right cap
            a = (si - straight) / radius
            pts[i] = (half + radius * np.sin(a), -radius * np.cos(a), 0.0)
        elif si < 2 * straight + arc_len:      # top, going -x
            pts[i] = (half - (si - straight - arc_len), radius, 0.0)
        else:                                  # left cap
            a = (si - 2 * straight - arc_len) / radius
            pts[i] = (-half - radius * np.sin(a), radius * np.cos(a), 0.0)
    return DiscreteCurve(pts)


def figure_eight(n=256, scale=1.0):
    """Planar immersed eight: passes through the origin twice (not simple)."""
    u = _param_angles(n)
    return DiscreteCurve(scale * np.column_stack(
        [np.sin(u), np.sin(u) * np.cos(u), np.zeros(n)]
    ))


def helix_arc(n=512, radius=1.0, pitch=0.5):
    """One turn of a circular helix, sampled over [0, 2pi).

    Not closed: the cyclic wraparound edge is a long chord, so discrete
    frame quantities are only meaningful away from the seam (vertices
    1..n-2). Test fixture; not in the generator registry.
    """
    u = _param_angles(n)
    return DiscreteCurve(np.column_stack([radius * np.cos(u), radius * np.sin(u), pitch * u]))


# ---------------------------------------------------------------------------
# randomized spherical curves
# ---------------------------------------------------------------------------

def _simple_enough(curve, clearance_factor=0.5):
    """Chord-field embeddedness check: strands separated by at least 3 mean
    edges along the curve must keep a squared distance above
    (clearance_factor * 3 * mean_edge)^2."""
    pts = curve.points
    edges = edge_lengths(pts)
    mean_edge = edges.mean()
    cum = np.concatenate([[0.0], np.cumsum(edges)])[:-1]
    arc = cyclic_arc_matrix(cum, edges.sum())
    f = chord_field_matrix(pts)
    band = 3.0 * mean_edge
    sel = arc >= band
    if not sel.any():
        return False
    return float(f[sel].min()) > (clearance_factor * band) ** 2


def random_sphere_curve(n=384, seed=0, amplitude=0.25, harmonics=6, radius=1.0,
                        max_curvature=6.0, attempts=100):
    """Random smooth spherical curve: a great circle perturbed by low-order
    Fourier modes in R^3 and projected radially back to the sphere.

    Draws that self-intersect at the sampling resolution (chord-field check)
    or exceed the curvature budget are rejected and redrawn, up to
    ``attempts`` times.
    """
    harmonics = int(harmonics)
    u = _param_angles(n)
    base = np.column_stack([np.cos(u), np.sin(u), np.zeros(n)])
    for attempt in range(attempts):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), attempt]))
        pert = np.zeros((n, 3))
        for k in range(1, harmonics + 1):
            ck = rng.normal(size=3) * (amplitude / k**2)
            sk = rng.normal(size=3) * (amplitude / k**2)
            pert += np.outer(np.cos(k * u), ck) + np.outer(np.sin(k * u), sk)
        v = base + pert
        pts = radius * v / np.linalg.norm(v, axis=1, keepdims=True)
        curve = DiscreteCurve(pts)
        from ._kernels import arc_second_derivative
        kmax = np.linalg.norm(
            arc_second_derivative(pts, edge_lengths(pts)), axis=1).max()
        if kmax * radius > max_curvature:
            continue
        if _simple_enough(curve):
            return curve
    raise GeneratorError(
        f"no simple spherical draw for seed={seed} within {attempts} attempts"
    )


def sphere_band_pair(n=384, gap=0.55, wobble=0.15):
    """Two disjoint non-planar curves sharing the unit sphere: wobbly
    latitude bands in opposite hemispheres."""
    u = _param_angles(n)
    out = []
    for sign, phase in ((1.0, 0.0), (-1.0, 1.0)):
        pol = np.pi / 2 - sign * gap + wobble * np.sin(2 * u + phase)
        out.append(DiscreteCurve(np.column_stack(
            [np.cos(u) * np.sin(pol), np.sin(u) * np.sin(pol), np.cos(pol)]
        )))
    return out


def convex_shadow_fixture(seed, n=512):
    """Space curve with a strictly convex, regular planar shadow.

    Returns (curve, basis) where basis is a (2, 3) orthonormal pair spanning
    the shadow plane. Built from an ellipse base with a vertical Fourier
    wobble, then rigidly rotated by a seeded random rotation; the basis is
    rotated along with it.
    """
    rng = np.random.default_rng(np.random.SeedSequence([77, int(seed)]))
    u = _param_angles(n)
    rx = 1.0 + 0.3 * rng.random()
    ry = 0.6 + 0.3 * rng.random()
    amp = 0.2 + 0.2 * rng.random()
    wob = amp * np.sin(3 * u + rng.random() * np.pi) + 0.6 * amp * np.cos(2 * u)
    base = np.column_stack([rx * np.cos(u), ry * np.sin(u), wob])
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return DiscreteCurve(base @ q.T), np.ascontiguousarray(q[:, :2].T)


# ---------------------------------------------------------------------------
# registry / CurveSpec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveSpec:
    """Serializable description of a generator invocation."""

    kind: str
    samples: int = 256
    dim: int = 3
    params: dict = field(default_factory=dict)


# kind -> (factory taking (n, **params), {param: default}, one-line help)
GENERATORS = {
    "circle": (circle, {"radius": 1.0}, "planar circle in the xy-plane"),
    "latitude": (latitude, {"polar_angle": np.pi / 3, "radius": 1.0},
                 "latitude circle on a sphere"),
    "baseball": (baseball, {"amplitude": 0.4, "lobes": 2, "radius": 1.0, "phase": 0.0},
                 "seam-like spherical curve with polar oscillation"),
    "twisted_circle": (twisted_circle, {},
                       "convex space curve with a unit-circle shadow"),
    "hypersphere_loop": (hypersphere_loop, {},
                         "loop on the unit 3-sphere in R^4"),
    "stadium": (stadium, {"straight": 2.0, "radius": 1.0},
                "two semicircles joined by straight segments"),
    "figure_eight": (figure_eight, {"scale": 1.0},
                     "planar immersed eight (self-intersecting)"),
    "random_sphere": (random_sphere_curve,
                      {"seed": 0, "amplitude": 0.25, "harmonics": 6, "radius": 1.0},
                      "seeded random smooth curve on a sphere"),
}


def make_curve(spec):
    """Instantiate a CurveSpec through the registry."""
    if spec.kind not in GENERATORS:
        raise GeneratorError(f"unknown generator kind {spec.kind!r}")
    factory, defaults, _ = GENERATORS[spec.kind]
    params = dict(defaults)
    for key, val in spec.params.items():
        if key not in defaults:
            raise GeneratorError(f"generator {spec.kind!r} has no parameter {key!r}")
        params[key] = val
    if spec.kind in ("circle",):
        return factory(n=spec.samples, dim=spec.dim, **params)
    return factory(n=spec.samples, **params)


def lobed_fixture(index, n=512):
    """Deterministic waisted spherical fixtures used by the chord-minima and
    avoidance suites; index 0..2 gives increasingly adventurous shapes."""
    combos = [
        {"amplitude": 0.8, "lobes": 2},
        {"amplitude": 0.9, "lobes": 2},
        {"amplitude": 0.75, "lobes": 3},
    ]
    return baseball(n=n, **combos[index % len(combos)])
