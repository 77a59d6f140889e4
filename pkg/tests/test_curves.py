import numpy as np
import pytest

from curveflow.curves import (
    GENERATORS,
    CurveSpec,
    GeneratorError,
    TWIST_PHASE_A,
    TWIST_PHASE_B,
    TWIST_SHOULDER,
    baseball,
    circle,
    convex_shadow_fixture,
    figure_eight,
    hypersphere_loop,
    latitude,
    lobed_fixture,
    make_curve,
    random_sphere_curve,
    sphere_band_pair,
    twisted_circle,
)
from curveflow.geometry import frenet
from curveflow.spherical import fit_sphere


def twisted_speed_and_curvature(u):
    """Analytic oracle for the twisted circle: speed and curvature from the
    closed-form first and second derivatives."""
    a, b = TWIST_PHASE_A, TWIST_PHASE_B
    th = a * u**3 + b * u
    thp = 3 * a * u**2 + b
    thpp = 6 * a * u
    d1 = np.column_stack([-thp * np.sin(th), thp * np.cos(th),
                          np.cos(u) - np.cos(2 * u)])
    d2 = np.column_stack([-thpp * np.sin(th) - thp**2 * np.cos(th),
                          thpp * np.cos(th) - thp**2 * np.sin(th),
                          -np.sin(u) + 2 * np.sin(2 * u)])
    speed = np.linalg.norm(d1, axis=1)
    kappa = np.linalg.norm(np.cross(d1, d2), axis=1) / speed**3
    return speed, kappa


class TestTwistedCircle:
    def test_constants_match_their_formulas(self):
        assert TWIST_PHASE_A == pytest.approx((np.pi + 2) / (2 * (1 - np.pi**2)))
        assert TWIST_PHASE_B == pytest.approx((np.pi**3 + 2) / (2 * (np.pi**2 - 1)))
        assert TWIST_SHOULDER == pytest.approx(
            np.sqrt((np.pi**3 + 2) / (np.pi + 2)))
        # decimal spot checks (the defining formulas above are authoritative;
        # the closure identity below pins them exactly)
        assert TWIST_PHASE_A == pytest.approx(-0.2898, abs=2e-4)
        assert TWIST_PHASE_B == pytest.approx(1.8607, abs=2e-4)
        assert TWIST_SHOULDER == pytest.approx(2.5337, abs=2e-4)

    def test_phase_closes_with_winding_minus_one(self):
        # a*pi^3 + b*pi = -pi algebraically, so theta(pi)-theta(-pi) = -2pi
        val = TWIST_PHASE_A * np.pi**3 + TWIST_PHASE_B * np.pi
        assert val == pytest.approx(-np.pi, abs=1e-12)

    def test_height_vanishes_at_ends(self):
        assert np.sin(np.pi) - 0.5 * np.sin(2 * np.pi) == pytest.approx(0.0, abs=1e-12)
        c = twisted_circle(n=512)  # first sample sits at u = -pi
        assert abs(c.points[0, 2]) < 1e-12

    def test_shadow_is_unit_circle(self):
        c = twisted_circle(n=512)
        radii = np.linalg.norm(c.points[:, :2], axis=1)
        np.testing.assert_allclose(radii, 1.0, atol=1e-12)

    def test_apex_sharper_than_shoulders(self):
        # oracle first: analytic curvature at u = 0 and u = +-w
        _, k = twisted_speed_and_curvature(np.array([0.0, TWIST_SHOULDER, -TWIST_SHOULDER]))
        assert k[0] > k[1] + 0.05 and k[0] > k[2] + 0.05
        assert k[0] == pytest.approx(1.0, abs=1e-12)  # closed form collapses to b^3/b^3

        c = twisted_circle(n=512)
        u = -np.pi + 2 * np.pi * np.arange(512) / 512
        kd = frenet(c).curvature
        i0 = np.abs(u).argmin()
        iw = np.abs(u - TWIST_SHOULDER).argmin()
        assert kd[i0] > kd[iw] + 0.05
        assert kd[i0] == pytest.approx(1.0, abs=1e-3)

    def test_minimum_resolution_enforced(self):
        with pytest.raises(GeneratorError):
            twisted_circle(n=32)


class TestHypersphereLoop:
    def test_lies_on_unit_three_sphere(self):
        c = hypersphere_loop(n=512)
        np.testing.assert_allclose(np.linalg.norm(c.points, axis=1), 1.0, atol=1e-12)

    def test_closes_periodically(self):
        c = hypersphere_loop(n=256)
        # wraparound edge comparable to its neighbors: the sampling is periodic
        edges = c.edge_lengths()
        assert edges[-1] < 3 * edges[:-1].max()

    def test_orthogonal_tangents_at_quarter_pair(self):
        c = hypersphere_loop(n=512)
        fr = frenet(c)
        dot = abs(float(fr.tangent[128] @ fr.tangent[384]))
        assert dot < 1e-3


class TestSphereCurves:
    def test_baseball_on_sphere(self):
        c = baseball(n=256, amplitude=0.7)
        fit = fit_sphere(c)
        assert fit.rms_deviation < 1e-12
        assert fit.radius == pytest.approx(1.0, abs=1e-12)

    def test_latitude_is_planar_circle(self):
        beta = 0.7
        c = latitude(n=128, polar_angle=beta)
        r = np.linalg.norm(c.points[:, :2], axis=1)
        np.testing.assert_allclose(r, np.sin(beta), atol=1e-12)
        np.testing.assert_allclose(c.points[:, 2], np.cos(beta), atol=1e-12)

    @pytest.mark.parametrize("seed", [1, 7, 42])
    def test_random_sphere_deterministic(self, seed):
        a = random_sphere_curve(n=128, seed=seed)
        b = random_sphere_curve(n=128, seed=seed)
        assert a.points.tobytes() == b.points.tobytes()

    def test_random_sphere_on_sphere_and_simple(self):
        from curveflow.spherical import avoidance_sample
        c = random_sphere_curve(n=256, seed=3)
        assert fit_sphere(c).rms_deviation < 1e-10
        assert not avoidance_sample(c).self_intersect

    def test_band_pair_disjoint(self):
        a, b = sphere_band_pair(n=128)
        gap = min(np.linalg.norm(p - q) for p in a.points[::8] for q in b.points[::8])
        assert gap > 0.5
        assert fit_sphere(a).rms_deviation < 1e-12
        assert fit_sphere(b).rms_deviation < 1e-12

    def test_lobed_fixtures_exist(self):
        for idx in range(3):
            c = lobed_fixture(idx, n=128)
            assert fit_sphere(c).rms_deviation < 1e-12


class TestFixtures:
    def test_figure_eight_revisits_origin(self):
        c = figure_eight(n=256)
        r = np.linalg.norm(c.points, axis=1)
        near = np.sort(r)[:2]
        assert near.max() < 0.05

    def test_convex_shadow_fixture_regular(self):
        curve, basis = convex_shadow_fixture(seed=1, n=256)
        assert np.allclose(basis @ basis.T, np.eye(2), atol=1e-12)
        fr = frenet(curve)
        pt = np.linalg.norm(fr.tangent @ basis.T, axis=1)
        assert pt.min() > 0.1


class TestRegistry:
    def test_make_curve_dispatch(self):
        spec = CurveSpec(kind="circle", samples=64, params={"radius": 2.0})
        c = make_curve(spec)
        assert np.linalg.norm(c.points[0]) == pytest.approx(2.0)

    def test_unknown_kind(self):
        with pytest.raises(GeneratorError):
            make_curve(CurveSpec(kind="nope"))

    def test_unknown_param(self):
        with pytest.raises(GeneratorError):
            make_curve(CurveSpec(kind="circle", params={"bogus": 1.0}))

    def test_all_kinds_build(self):
        for kind in GENERATORS:
            samples = 512 if kind in ("twisted_circle", "hypersphere_loop") else 64
            curve = make_curve(CurveSpec(kind=kind, samples=samples))
            assert curve.n == samples
