"""Explicit time integration of the shortening flow dX/dt = d^2X/ds^2.

The scheme is forward Euler with dt = dt_safety * h_min^2 (h_min the
shortest edge), capped so a finite horizon is hit exactly. Tangential
redistribution resamples to uniform arclength on a fixed cadence; it changes
the parametrization only, never the traced shape.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import flow_step
from .geometry import DiscreteCurve, frenet, resample_uniform

DT_UNDERFLOW_HMIN_SQ = 1e-24

STOP_TIME = "max_time"
STOP_LENGTH = "min_length"
STOP_CURVATURE = "max_curvature"
STOP_DT_UNDERFLOW = "dt_underflow"


class SingularityStop(RuntimeError):
    """Time step underflow; carries the last valid state."""

    def __init__(self, state):
        super().__init__("dt underflow: smallest edge collapsed")
        self.state = state


@dataclass(frozen=True)
class FlowParams:
    dt_safety: float = 0.4
    redistribution_every: int = 5
    stop_min_length: float = 1e-2
    stop_max_curvature: float = 1e3
    stop_max_time: float = 1.0
    kappa_floor: float = 1e-8
    record_every: int = 10

    def __post_init__(self):
        if not 0.0 < self.dt_safety <= 0.5:
            raise ValueError(f"dt_safety must be in (0, 0.5], got {self.dt_safety}")
        for name in ("stop_min_length", "stop_max_curvature", "stop_max_time"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("redistribution_every", "record_every"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.kappa_floor < 0:
            raise ValueError("kappa_floor must be >= 0")


@dataclass(frozen=True)
class FlowState:
    curve: DiscreteCurve
    t: float
    step_index: int
    frenet: object

    @classmethod
    def initial(cls, curve, params):
        return cls(curve=curve, t=0.0, step_index=0,
                   frenet=frenet(curve, params.kappa_floor, frame=False))


def check_stop(state, params):
    """Name of the stop criterion the state has hit, or None."""
    if state.t >= params.stop_max_time - 1e-15:
        return STOP_TIME
    if state.frenet.total_length < params.stop_min_length:
        return STOP_LENGTH
    if state.frenet.max_curvature > params.stop_max_curvature:
        return STOP_CURVATURE
    return None


def step(state, params, dt_cap=None):
    """Advance one Euler step (plus cadence redistribution).

    dt = dt_safety * h_min^2, additionally capped at dt_cap and at the
    remaining time to the horizon so stop_max_time is landed exactly.
    """
    remaining = params.stop_max_time - state.t
    cap = remaining if math.isfinite(remaining) else -1.0
    if dt_cap is not None:
        cap = min(cap, dt_cap) if cap > 0 else dt_cap
    new_pts, dt, h_min = flow_step(state.curve.points, params.dt_safety, cap)
    if h_min * h_min < DT_UNDERFLOW_HMIN_SQ:
        raise SingularityStop(state)
    curve = DiscreteCurve._trusted(new_pts)
    index = state.step_index + 1
    if index % params.redistribution_every == 0:
        curve = resample_uniform(curve, curve.n)
    return FlowState(curve=curve, t=state.t + dt, step_index=index,
                     frenet=frenet(curve, params.kappa_floor, frame=False))


@dataclass
class MonitorReport:
    """Time series of the base metrics plus any attached monitor columns."""

    base_columns: tuple = ("step", "t", "length", "max_kappa", "min_edge")
    rows: list = field(default_factory=list)
    monitor_columns: list = field(default_factory=list)
    stop_reason: str | None = None
    stop_time: float | None = None
    stop_step: int | None = None
    error: str | None = None

    def record(self, state, monitor_values):
        row = {
            "step": state.step_index,
            "t": state.t,
            "length": state.frenet.total_length,
            "max_kappa": state.frenet.max_curvature,
            "min_edge": float(state.curve.edge_lengths().min()),
        }
        row.update(monitor_values)
        for key in monitor_values:
            if key not in self.monitor_columns:
                self.monitor_columns.append(key)
        self.rows.append(row)

    @property
    def columns(self):
        return list(self.base_columns) + self.monitor_columns

    def series(self, column):
        return np.array([row.get(column, np.nan) for row in self.rows], dtype=np.float64)

    def first_violation(self, column, predicate):
        """Time of the first recorded sample whose value satisfies predicate."""
        for row in self.rows:
            val = row.get(column)
            if val is not None and not (isinstance(val, float) and math.isnan(val)) \
                    and predicate(val):
                return row["t"]
        return None

    def write_csv(self, path):
        cols = self.columns
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for row in self.rows:
                cells = []
                for col in cols:
                    val = row.get(col)
                    if val is None or (isinstance(val, float) and math.isnan(val)):
                        cells.append("")
                    elif col == "step":
                        cells.append(str(int(val)))
                    elif isinstance(val, bool) or isinstance(val, np.bool_):
                        cells.append("1" if val else "0")
                    else:
                        cells.append(format(float(val), ".17g"))
                fh.write(",".join(cells) + "\n")


def _sample_monitors(monitors, state):
    values = {}
    for mon in monitors:
        values.update(mon.sample(state))
    return values


def evolve(curve0, params, monitors=(), snapshot_hook=None):
    """Run the flow until a stop criterion fires.

    Monitors are sampled at step 0, every record_every steps, and at the
    final state. A dt underflow ends the run as a terminal report entry, not
    an exception. Returns (final FlowState, MonitorReport).
    """
    state = FlowState.initial(curve0, params)
    report = MonitorReport()

    def record(st):
        report.record(st, _sample_monitors(monitors, st))
        if snapshot_hook is not None:
            snapshot_hook(st)

    record(state)
    while True:
        reason = check_stop(state, params)
        if reason is not None:
            report.stop_reason = reason
            break
        try:
            state = step(state, params)
        except SingularityStop as exc:
            state = exc.state
            report.stop_reason = STOP_DT_UNDERFLOW
            report.error = str(exc)
            break
        if state.step_index % params.record_every == 0:
            record(state)
    if not report.rows or report.rows[-1]["step"] != state.step_index:
        record(state)
    report.stop_time = state.t
    report.stop_step = state.step_index
    return state, report


def evolve_family(curves0, params, monitors=(), family_monitors=()):
    """Evolve several curves on one synchronized time grid.

    The motion law is local, so members evolve independently, but every
    member advances with the same dt (the family minimum) so cross-curve
    monitors see one consistent time. Any member hitting a stop criterion
    (or a dt underflow) halts the whole family at that time.
    Returns a list of (FlowState, MonitorReport), one per member.
    """
    states = [FlowState.initial(c, params) for c in curves0]
    reports = [MonitorReport() for _ in states]

    def record():
        fam_values = {}
        for mon in family_monitors:
            fam_values.update(mon.sample(states))
        for st, rep in zip(states, reports):
            values = _sample_monitors(monitors, st)
            values.update(fam_values)
            rep.record(st, values)

    record()
    stop = None
    error = None
    while stop is None:
        for st in states:
            stop = check_stop(st, params)
            if stop is not None:
                break
        if stop is not None:
            break
        # same multiplication order as the step kernel, so the member that
        # attains the minimum is stepped with its own uncapped dt bit-exactly
        dts = []
        for st in states:
            h = float(st.curve.edge_lengths().min())
            dts.append(params.dt_safety * h * h)
        family_dt = min(dts)
        try:
            states = [step(st, params, dt_cap=family_dt) for st in states]
        except SingularityStop as exc:
            stop = STOP_DT_UNDERFLOW
            error = str(exc)
            break
        if states[0].step_index % params.record_every == 0:
            record()
    if not reports[0].rows or reports[0].rows[-1]["step"] != states[0].step_index:
        record()
    for st, rep in zip(states, reports):
        rep.stop_reason = stop
        rep.stop_time = st.t
        rep.stop_step = st.step_index
        rep.error = error
    return list(zip(states, reports))
