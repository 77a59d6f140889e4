"""Command line interface.

Subcommands:
  evolve           run one configured simulation, write metrics/snapshots
  verify SUITE     run a named verification suite, print pass/fail lines
  sweep            run a parameter grid, write the aggregated table
  list-generators  show curve generator kinds and their parameters

Exit codes: 0 success, 1 check/simulation failure, 2 usage or config error.
"""

import argparse
import csv
import itertools
import os
import sys

import numpy as np

from .config import ConfigError, load_config
from .convexity import Projection
from .curves import GENERATORS, CurveSpec, make_curve
from .flow import FlowParams, evolve
from .geometry import load_snapshot, save_snapshot
from .monitors import build_monitors
from .render import projection_svg
from .spherical import chord_field
from .verify import SUITES, run_suite

USAGE_ERROR = 2
CHECK_FAILURE = 1


def _build_curve(cfg):
    if cfg.snapshot_path is not None:
        curve, _ = load_snapshot(cfg.snapshot_path)
        return curve
    return make_curve(cfg.curve_spec)


def _apply_overrides(cfg, args):
    if args.out is not None:
        cfg.output_dir = args.out
    if args.seed is not None:
        cfg.seed = args.seed
        if cfg.curve_spec is not None and "seed" in GENERATORS[cfg.curve_spec.kind][1]:
            params = dict(cfg.curve_spec.params)
            params["seed"] = args.seed
            cfg.curve_spec = CurveSpec(kind=cfg.curve_spec.kind,
                                       samples=cfg.curve_spec.samples,
                                       dim=cfg.curve_spec.dim, params=params)
    if args.no_topology_checks and "avoidance" in cfg.monitors:
        cfg.monitors = [m for m in cfg.monitors if m != "avoidance"]
    if args.svg:
        cfg.svg = True
    if args.dump_chordfield:
        cfg.dump_chordfield = True
    return cfg


def cmd_evolve(args):
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        curve = _build_curve(cfg)
        monitors = build_monitors(cfg.monitors, projection_basis=cfg.projection_basis,
                                  kappa_floor=cfg.flow.kappa_floor)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    os.makedirs(cfg.output_dir, exist_ok=True)
    proj = Projection(cfg.projection_basis) if cfg.projection_basis is not None else None

    def snapshot_hook(state):
        save_snapshot(state.curve, state.t,
                      os.path.join(cfg.output_dir, f"snap_{state.step_index}.curve"))
        if cfg.svg:
            pts2 = (proj.apply(state.curve.points) if proj is not None
                    else state.curve.points[:, :2])
            path = os.path.join(cfg.output_dir, f"snap_{state.step_index}.svg")
            with open(path, "w") as fh:
                fh.write(projection_svg(pts2))
        if cfg.dump_chordfield:
            field = chord_field(state.curve)
            np.savetxt(os.path.join(cfg.output_dir, f"chordfield_{state.step_index}.csv"),
                       field.values, delimiter=",", fmt="%.17g")

    state, report = evolve(curve, cfg.flow, monitors=monitors,
                           snapshot_hook=snapshot_hook)
    report.write_csv(os.path.join(cfg.output_dir, "metrics.csv"))

    lines = [
        f"stop_reason: {report.stop_reason}",
        f"final_time: {state.t:.9g}",
        f"final_step: {state.step_index}",
        f"final_length: {state.frenet.total_length:.9g}",
    ]
    for col in report.monitor_columns:
        series = report.series(col)
        if np.isnan(series).all():
            lines.append(f"{col}: absent")
        else:
            lines.append(f"{col}: min={np.nanmin(series):.9g} max={np.nanmax(series):.9g}")
    with open(os.path.join(cfg.output_dir, "report.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    if report.error:
        print(f"run ended early: {report.error}", file=sys.stderr)
    return 0


def cmd_verify(args):
    if args.suite not in SUITES and args.suite != "all":
        print(f"unknown suite {args.suite!r}; choose from: "
              f"{', '.join(list(SUITES) + ['all'])}", file=sys.stderr)
        return USAGE_ERROR
    checks = run_suite(args.suite)
    for chk in checks:
        print(chk.line())
    n_fail = sum(not c.passed for c in checks)
    print(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return 0 if n_fail == 0 else CHECK_FAILURE


def _parse_vary(entries):
    grid = {}
    for entry in entries or []:
        if "=" not in entry:
            raise ConfigError(f"--vary expects key=v1,v2,..., got {entry!r}")
        key, _, raw = entry.partition("=")
        vals = [v for v in raw.split(",") if v]
        if not vals:
            raise ConfigError(f"--vary {key}: empty value list")
        grid[key.strip()] = [float(v) for v in vals]
    return grid


def _cell_config(cfg, assignment):
    flow_kwargs = {f: getattr(cfg.flow, f) for f in FlowParams.__dataclass_fields__}
    spec = cfg.curve_spec
    for key, val in assignment.items():
        if key in flow_kwargs:
            flow_kwargs[key] = val
        elif key == "n":
            spec = CurveSpec(kind=spec.kind, samples=int(val), dim=spec.dim,
                             params=spec.params)
        elif spec is not None and key in GENERATORS[spec.kind][1]:
            params = dict(spec.params)
            params[key] = val
            spec = CurveSpec(kind=spec.kind, samples=spec.samples, dim=spec.dim,
                             params=params)
        else:
            raise ConfigError(f"sweep parameter {key!r} is neither a flow "
                              "parameter, 'n', nor a generator parameter")
    return spec, FlowParams(**flow_kwargs)


def cmd_sweep(args):
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        grid = _parse_vary(args.vary)
        if not grid:
            raise ConfigError("empty sweep grid: pass at least one --vary")
        if cfg.curve_spec is None:
            raise ConfigError("sweep requires a generator curve, not a snapshot")
        allowed = (set(FlowParams.__dataclass_fields__) | {"n"}
                   | set(GENERATORS[cfg.curve_spec.kind][1]))
        for key in grid:
            if key not in allowed:
                raise ConfigError(f"sweep parameter {key!r} is neither a flow "
                                  "parameter, 'n', nor a generator parameter")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    os.makedirs(cfg.output_dir, exist_ok=True)
    keys = sorted(grid)
    cells = list(itertools.product(*(grid[k] for k in keys)))
    is_circle = cfg.curve_spec.kind == "circle"

    def run_cell(index, values):
        assignment = dict(zip(keys, values))
        row = dict(assignment)
        cell_dir = os.path.join(cfg.output_dir, f"cell_{index:03d}")
        try:
            spec, flow_params = _cell_config(cfg, assignment)
            curve = make_curve(spec)
            state, report = evolve(curve, flow_params)
            os.makedirs(cell_dir, exist_ok=True)
            report.write_csv(os.path.join(cell_dir, "metrics.csv"))
            row["status"] = "ok"
            row["final_time"] = state.t
            row["final_length"] = state.frenet.total_length
            row["stop_reason"] = report.stop_reason
            if is_circle:
                pts = state.curve.points
                center = pts.mean(axis=0)
                radius = float(np.linalg.norm(pts - center, axis=1).mean())
                r0 = spec.params.get("radius", 1.0)
                exact = float(np.sqrt(max(r0 * r0 - 2 * state.t, 0.0)))
                row["radius"] = radius
                row["radius_error"] = abs(radius - exact)
        except Exception as exc:  # per-cell isolation
            row["status"] = f"error: {exc}"
        return row

    if args.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run_cell, range(len(cells)), cells))
    else:
        rows = [run_cell(i, values) for i, values in enumerate(cells)]
    failures = sum(row["status"] != "ok" for row in rows)

    cols = keys + ["status", "final_time", "final_length", "stop_reason"]
    if is_circle:
        cols += ["radius", "radius_error"]
    out_path = os.path.join(cfg.output_dir, "sweep.csv")
    with open(out_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    for row in rows:
        print(" ".join(f"{k}={row.get(k)}" for k in cols if k in row))
    print(f"sweep table written to {out_path}")
    return CHECK_FAILURE if failures else 0


def cmd_list_generators(_args):
    for kind, (_, defaults, help_text) in GENERATORS.items():
        params = ", ".join(f"{k}={v}" for k, v in defaults.items()) or "(no parameters)"
        print(f"{kind:18s} {help_text}")
        print(f"{'':18s} params: {params}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="curveflow",
        description="Shortening-flow simulator and verification harness for closed space curves",
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(p):
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="seed override")
        p.add_argument("--no-topology-checks", action="store_true",
                       help="drop the O(N^2) self-intersection monitor")
        p.add_argument("--dump-chordfield", action="store_true",
                       help="write the chord matrix at every recorded step")
        p.add_argument("--svg", action="store_true",
                       help="render the projected curve at every recorded step")

    p_evolve = sub.add_parser("evolve", help="run one simulation")
    add_common(p_evolve)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", help=f"one of: {', '.join(list(SUITES) + ['all'])}")

    p_sweep = sub.add_parser("sweep", help="run a parameter grid")
    add_common(p_sweep)
    p_sweep.add_argument("--vary", action="append",
                         help="grid axis, e.g. --vary n=128,256,512")
    p_sweep.add_argument("--jobs", type=int, default=1,
                         help="concurrent sweep cells (cells are isolated)")

    sub.add_parser("list-generators", help="show generator kinds")

    args = parser.parse_args(argv)
    if args.command == "evolve":
        return cmd_evolve(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    if args.command == "list-generators":
        return cmd_list_generators(args)
    parser.print_help()
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
