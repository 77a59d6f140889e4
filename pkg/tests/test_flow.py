import numpy as np
import pytest

from curveflow.curves import circle, sphere_band_pair, stadium, twisted_circle
from curveflow.flow import (
    STOP_CURVATURE,
    STOP_DT_UNDERFLOW,
    STOP_TIME,
    FlowParams,
    FlowState,
    evolve,
    evolve_family,
    step,
)
from curveflow.geometry import arclength_derivative, diameter
from curveflow.monitors import PairDistanceMonitor, SphericityMonitor


class TestParams:
    def test_dt_safety_range(self):
        with pytest.raises(ValueError):
            FlowParams(dt_safety=0.0)
        with pytest.raises(ValueError):
            FlowParams(dt_safety=0.6)

    def test_positive_thresholds(self):
        with pytest.raises(ValueError):
            FlowParams(stop_min_length=0.0)
        with pytest.raises(ValueError):
            FlowParams(stop_max_time=-1.0)
        with pytest.raises(ValueError):
            FlowParams(record_every=0)


class TestStep:
    def test_displacement_is_dt_times_curvature_vector(self):
        params = FlowParams(redistribution_every=10**9, stop_max_time=1e9)
        c = twisted_circle(n=256)
        st0 = FlowState.initial(c, params)
        st1 = step(st0, params)
        dt = st1.t - st0.t
        expect = dt * arclength_derivative(c, order=2)
        np.testing.assert_allclose(st1.curve.points - c.points, expect,
                                   rtol=1e-12, atol=1e-15)

    def test_dt_formula(self):
        params = FlowParams(dt_safety=0.3, redistribution_every=10**9,
                            stop_max_time=1e9)
        c = circle(n=128)
        st1 = step(FlowState.initial(c, params), params)
        h = c.edge_lengths().min()
        assert st1.t == pytest.approx(0.3 * h * h, rel=1e-14)

    def test_flat_segments_do_not_move(self):
        params = FlowParams(redistribution_every=10**9, stop_max_time=1e9)
        st = stadium(n=256, straight=2.0, radius=1.0)
        moved = step(FlowState.initial(st, params), params).curve.points
        flat = np.abs(st.points[:, 1].__abs__() - 1.0) < 1e-12  # on the straight lines
        # interior flat vertices (both neighbors collinear) stay put exactly
        inner_flat = flat & np.roll(flat, 1) & np.roll(flat, -1)
        assert inner_flat.sum() > 10
        assert np.abs(moved[inner_flat] - st.points[inner_flat]).max() < 1e-14

    def test_final_step_lands_on_horizon(self):
        params = FlowParams(stop_max_time=1e-4, redistribution_every=10**9)
        state, report = evolve(circle(n=64), params)
        assert state.t == pytest.approx(1e-4, abs=1e-18)
        assert report.stop_reason == STOP_TIME


class TestCircleLaw:
    def test_radius_at_quarter(self):
        params = FlowParams(stop_max_time=0.25, record_every=100)
        state, _ = evolve(circle(n=256), params)
        pts = state.curve.points
        r = np.linalg.norm(pts - pts.mean(axis=0), axis=1).mean()
        assert r == pytest.approx(np.sqrt(0.5), abs=2e-3)

    def test_length_series(self):
        params = FlowParams(stop_max_time=0.4, record_every=10)
        _, report = evolve(circle(n=256), params)
        t = report.series("t")
        length = report.series("length")
        law = 2 * np.pi * np.sqrt(1 - 2 * t)
        assert np.abs(length / law - 1).max() < 5e-3

    def test_length_monotone(self):
        params = FlowParams(stop_max_time=0.3, record_every=1)
        _, report = evolve(twisted_circle(n=256),
                           FlowParams(stop_max_time=0.05, record_every=1))
        length = report.series("length")
        assert (np.diff(length) < 1e-10 * length[:-1]).all()
        del params

    def test_determinism(self):
        params = FlowParams(stop_max_time=0.1, record_every=25)
        s1, r1 = evolve(twisted_circle(n=128), params)
        s2, r2 = evolve(twisted_circle(n=128), params)
        assert s1.curve.points.tobytes() == s2.curve.points.tobytes()
        assert r1.series("length").tobytes() == r2.series("length").tobytes()

    def test_redistribution_cadence_invariance(self):
        finals = []
        for every in (1, 5):
            params = FlowParams(stop_max_time=0.2, redistribution_every=every,
                                record_every=10**6)
            state, _ = evolve(circle(n=128), params)
            finals.append(state.curve.points)
        a, b = finals
        hausdorff = max(
            np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)).min(1).max(),
            np.sqrt(((b[:, None, :] - a[None, :, :]) ** 2).sum(-1)).min(1).max(),
        )
        assert hausdorff < 5e-3 * diameter(circle(n=128))


class TestStops:
    def test_curvature_stop(self):
        params = FlowParams(stop_max_time=10.0, stop_max_curvature=1.5,
                            stop_min_length=1e-6)
        # circle of radius 1 shrinks until kappa = 1/r crosses 1.5
        state, report = evolve(circle(n=128), params)
        assert report.stop_reason == STOP_CURVATURE
        assert state.frenet.max_curvature > 1.5

    def test_curvature_capped_run_serializable(self, tmp_path):
        from curveflow.geometry import load_snapshot, save_snapshot
        params = FlowParams(stop_max_time=0.05, stop_max_curvature=50.0,
                            record_every=20)
        state, report = evolve(twisted_circle(n=256), params)
        assert report.stop_reason in (STOP_TIME, STOP_CURVATURE)
        path = tmp_path / "final.curve"
        save_snapshot(state.curve, state.t, path)
        loaded, t = load_snapshot(path)
        assert t == state.t
        assert loaded.points.tobytes() == state.curve.points.tobytes()

    def test_dt_underflow_reported_not_raised(self):
        tiny = circle(n=8, radius=1e-13)
        params = FlowParams(stop_max_time=10.0, stop_min_length=1e-30,
                            stop_max_curvature=1e30)
        state, report = evolve(tiny, params)
        assert report.stop_reason == STOP_DT_UNDERFLOW
        assert report.error is not None
        assert state.t == 0.0


class TestReports:
    def test_base_columns_and_rows(self):
        params = FlowParams(stop_max_time=0.02, record_every=7)
        _, report = evolve(circle(n=64), params, monitors=(SphericityMonitor(),))
        assert report.columns[:5] == ["step", "t", "length", "max_kappa", "min_edge"]
        assert "sphere_rms" in report.columns
        steps = report.series("step")
        assert steps[0] == 0
        # every interior record on the cadence; final state always recorded
        assert all(int(s) % 7 == 0 for s in steps[:-1])

    def test_csv_round_trip(self, tmp_path):
        params = FlowParams(stop_max_time=0.02, record_every=5)
        _, report = evolve(circle(n=64), params)
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        report.write_csv(p1)
        _, report2 = evolve(circle(n=64), params)
        report2.write_csv(p2)
        assert p1.read_bytes() == p2.read_bytes()
        header = p1.read_text().splitlines()[0]
        assert header == "step,t,length,max_kappa,min_edge"

    def test_first_violation(self):
        params = FlowParams(stop_max_time=0.1, record_every=10)
        _, report = evolve(circle(n=64), params)
        t = report.first_violation("length", lambda v: v < 6.0)
        assert t is not None and 0 < t <= 0.1


class TestFamily:
    def test_concentric_circles(self):
        pair = (circle(n=128, radius=1.0), circle(n=128, radius=2.0))
        params = FlowParams(stop_max_time=0.4, record_every=20)
        runs = evolve_family(pair, params,
                             family_monitors=(PairDistanceMonitor(),))
        (s1, r1), (s2, r2) = runs
        assert s1.t == s2.t  # synchronized grid
        t = r1.series("t")
        law = np.sqrt(4 - 2 * t) - np.sqrt(1 - 2 * t)
        np.testing.assert_allclose(r1.series("pair_min_dist"), law, atol=5e-3)
        # each member still follows its own circle law
        np.testing.assert_allclose(
            r2.series("length"), 2 * np.pi * np.sqrt(4 - 2 * t), rtol=5e-3)

    def test_singleton_family_matches_evolve(self):
        params = FlowParams(stop_max_time=0.1, record_every=10)
        (state_f, rep_f), = evolve_family((circle(n=64),), params)
        state_s, rep_s = evolve(circle(n=64), params)
        assert state_f.curve.points.tobytes() == state_s.curve.points.tobytes()
        assert rep_f.series("length").tobytes() == rep_s.series("length").tobytes()

    def test_band_pair_stays_disjoint(self):
        curves = sphere_band_pair(n=96)
        params = FlowParams(stop_max_time=0.05, record_every=10,
                            stop_max_curvature=50.0)
        runs = evolve_family(curves, params,
                             family_monitors=(PairDistanceMonitor(),))
        dist = runs[0][1].series("pair_min_dist")
        assert (dist > 0).all()
