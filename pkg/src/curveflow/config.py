"""Run configuration: a single TOML file with nested sections.

Schema (all flow/run keys optional, defaults shown):

    [curve]
    kind = "circle"            # generator kind, or instead:
    # snapshot = "state.curve" # load a snapshot file
    samples = 256
    dim = 3
    [curve.params]             # generator parameters (see list-generators)
    radius = 1.0

    [flow]
    dt_safety = 0.4
    redistribution_every = 5
    stop_min_length = 0.01
    stop_max_curvature = 1000.0
    stop_max_time = 1.0
    kappa_floor = 1e-8
    record_every = 10

    [projection]               # required by the "projection" monitor
    basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]

    [run]
    monitors = ["avoidance", "sphericity"]
    output_dir = "out"
    seed = 0
    svg = false
    dump_chordfield = false
"""

import sys
from dataclasses import dataclass, field

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .curves import GENERATORS, CurveSpec
from .flow import FlowParams
from .monitors import MONITOR_NAMES


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    curve_spec: CurveSpec | None
    snapshot_path: str | None
    flow: FlowParams
    monitors: list
    projection_basis: np.ndarray | None
    output_dir: str
    seed: int
    svg: bool = False
    dump_chordfield: bool = False


def _section(doc, name):
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return sec


def load_config(path):
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}")

    curve = _section(doc, "curve")
    snapshot = curve.get("snapshot")
    spec = None
    if snapshot is None:
        kind = curve.get("kind")
        if kind is None:
            raise ConfigError("curve.kind (or curve.snapshot) is required")
        if kind not in GENERATORS:
            raise ConfigError(
                f"curve.kind {kind!r} unknown; see `curveflow list-generators`")
        params = curve.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("curve.params must be a table")
        defaults = GENERATORS[kind][1]
        for key in params:
            if key not in defaults:
                raise ConfigError(f"curve.params.{key} not accepted by {kind!r}")
        spec = CurveSpec(kind=kind,
                         samples=int(curve.get("samples", 256)),
                         dim=int(curve.get("dim", 3)),
                         params=dict(params))
        if spec.samples < 8:
            raise ConfigError("curve.samples must be >= 8")

    flow_sec = _section(doc, "flow")
    known = {f for f in FlowParams.__dataclass_fields__}
    for key in flow_sec:
        if key not in known:
            raise ConfigError(f"flow.{key} is not a flow parameter")
    try:
        flow = FlowParams(**flow_sec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"flow: {exc}")

    proj = _section(doc, "projection")
    basis = None
    if proj:
        raw = proj.get("basis")
        if raw is None:
            raise ConfigError("projection.basis is required in [projection]")
        basis = np.asarray(raw, dtype=np.float64)
        if basis.shape[0] != 2:
            raise ConfigError("projection.basis must hold two vectors")
        if not np.allclose(basis @ basis.T, np.eye(2), atol=1e-12):
            raise ConfigError("projection.basis vectors must be orthonormal")

    run = _section(doc, "run")
    monitors = list(run.get("monitors", []))
    for name in monitors:
        if name not in MONITOR_NAMES:
            raise ConfigError(f"run.monitors entry {name!r} unknown; known: {MONITOR_NAMES}")
    if "projection" in monitors and basis is None:
        raise ConfigError("run.monitors includes 'projection' but [projection] is missing")

    return RunConfig(
        curve_spec=spec,
        snapshot_path=snapshot,
        flow=flow,
        monitors=monitors,
        projection_basis=basis,
        output_dir=str(run.get("output_dir", "out")),
        seed=int(run.get("seed", 0)),
        svg=bool(run.get("svg", False)),
        dump_chordfield=bool(run.get("dump_chordfield", False)),
    )
