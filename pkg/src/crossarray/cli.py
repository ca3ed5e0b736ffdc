"""Command-line surface tying generation, analysis and detection together.

Subcommands: ``generate``, ``analyze``, ``detect``, ``slope``, ``demo``.
Runs are reproducible: the same config produces byte-identical outputs.
Exit codes: 0 success, 1 usage or config error, 2 runtime/numeric error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .analysis import TIMELINE_COLUMNS, accuracy, exploration_summary, timeline_table
from .demo import run_demo
from .detector import detect, report_to_json_dict
from .errors import ConfigError, CrossArrayError
from .fileio import RunConfig, load_run_config
from .generators import generate, make_playback
from .invariants import project_and_estimate, slope_invariant
from .kinematics import KinematicTrack, ScenePoint, TimeGrid
from .observables import (constant_support, project_inertial, project_optics,
                          replay_optics, tilted_support)

ENV_OUT_DIR = "CROSSARRAY_OUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract here is exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _out_dir(args, run: RunConfig | None = None) -> Path:
    if getattr(args, "out_dir", None):
        return Path(args.out_dir)
    if run is not None and run.out_dir:
        return Path(run.out_dir)
    env = os.environ.get(ENV_OUT_DIR, "").strip()
    if env:
        return Path(env)
    return Path("crossarray_out")


def _parse_vec3(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"expected 'x,y,z', got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ConfigError(f"bad vector {text!r}: {exc}") from None


def _require_scenario(run: RunConfig):
    if run.scenario is None:
        raise ConfigError("config is missing required key 'kind'")
    return run.scenario


def cmd_generate(args) -> int:
    run = load_run_config(args.config)
    track = generate(_require_scenario(run))
    out = Path(args.out) if args.out else _out_dir(args, run) / "track.csv"
    fileio.write_track_csv(out, track)
    print(out)
    return 0


def _load_track_and_object(args, run: RunConfig | None):
    if args.track:
        if args.object is None and (run is None or run.scenario is None):
            raise ConfigError("--track also needs --object x,y,z (or a config)")
        track = fileio.read_track_csv(args.track)
        position = (_parse_vec3(args.object) if args.object is not None
                    else run.scenario.object_position)
        return track, ScenePoint(position=position)
    if run is None:
        raise ConfigError("either --config or --track is required")
    scenario = _require_scenario(run)
    return generate(scenario), scenario.scene_object


def cmd_analyze(args) -> int:
    run = load_run_config(args.config) if args.config else None
    track, scene_object = _load_track_and_object(args, run)
    tolerance = (args.tolerance if args.tolerance is not None
                 else (run.tolerance if run else 0.05))
    optics, inertial, est = project_and_estimate(track, scene_object)
    out_dir = _out_dir(args, run)
    fileio.write_csv(out_dir / "timeline.csv", list(TIMELINE_COLUMNS),
                     timeline_table(est, optics, inertial, track))
    report = accuracy(est, tolerance, scenario_id=args.scenario_id)
    payload = report.to_json_dict()
    summary = exploration_summary(track)
    payload["exploration"] = {
        "amplitude_m": list(summary.amplitude),
        "mean_speed_mps": summary.mean_speed,
        "max_speed_mps": summary.max_speed,
        "mean_accel_mps2": summary.mean_accel,
        "max_accel_mps2": summary.max_accel,
    }
    fileio.write_json(out_dir / "accuracy.json", payload)
    print(out_dir / "timeline.csv")
    print(out_dir / "accuracy.json")
    return 0


def cmd_detect(args) -> int:
    run = load_run_config(args.config) if args.config else None
    if args.optics_from or args.inertial_from:
        if not (args.optics_from and args.inertial_from and args.object):
            raise ConfigError("mismatched-source detection needs --optics-from, "
                              "--inertial-from and --object")
        track_a = fileio.read_track_csv(args.optics_from)
        track_b = fileio.read_track_csv(args.inertial_from)
        optics = project_optics(track_a, ScenePoint(position=_parse_vec3(args.object)))
        inertial = project_inertial(track_b)
        detector_cfg = run.detector if run else None
    else:
        if run is None:
            raise ConfigError("detect needs --config or --optics-from/--inertial-from")
        scenario = _require_scenario(run)
        track = generate(scenario)
        scene_object = scenario.scene_object
        if args.playback:
            pair = make_playback(track, track.position[0])
            optics, inertial = replay_optics(pair, scene_object, gravity=run.gravity)
        else:
            optics = project_optics(track, scene_object)
            inertial = project_inertial(track, gravity=run.gravity)
        detector_cfg = run.detector
    report = (detect(optics, inertial, detector_cfg) if detector_cfg
              else detect(optics, inertial))
    out = Path(args.out) if args.out else _out_dir(args, run) / "detect.json"
    fileio.write_json(out, report_to_json_dict(report))
    print(f"{report.verdict} {out}")
    return 0


def cmd_slope(args) -> int:
    run = load_run_config(args.config)
    if run.scenario is not None:
        track = generate(run.scenario)
    else:
        values = fileio.load_config(args.config)
        rate = float(values.get("sample_rate_hz", 100.0))
        duration = float(values.get("duration_s", 2.0))
        grid = TimeGrid(sample_rate=rate,
                        n_samples=int(round(duration * rate)) + 1)
        accel = run.accel if run.accel is not None else np.zeros(3)
        t = grid.times()
        track = KinematicTrack(
            grid=grid, position=0.5 * np.outer(t * t, accel),
            velocity=np.outer(t, accel),
            acceleration=np.tile(accel, (grid.n_samples, 1)))
    inertial = project_inertial(track, gravity=run.gravity)
    if run.support_tilt_rad != 0.0:
        support = tilted_support(track.grid, run.support_tilt_rad)
    else:
        support = constant_support(track.grid, run.support_normal)
    slope = slope_invariant(inertial, support)
    out = Path(args.out) if args.out else _out_dir(args, run) / "slope.csv"
    fileio.write_csv(out, ["t", "slope_rad", "dob_x", "dob_y", "dob_z", "degenerate"],
                     {"t": track.grid.times(), "slope_rad": slope.slope_angle,
                      "dob_x": slope.direction_of_balance[:, 0],
                      "dob_y": slope.direction_of_balance[:, 1],
                      "dob_z": slope.direction_of_balance[:, 2],
                      "degenerate": slope.degenerate})
    print(out)
    return 0


def cmd_demo(args) -> int:
    out_dir = _out_dir(args)
    results = run_demo(out_dir)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        timing = f" ({r.timing_s:.2f}s)" if r.timing_s is not None else ""
        print(f"[{status}] {r.name:<{width}}  {r.detail}{timing}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed; "
          f"artifacts in {out_dir}")
    return 0 if not failed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crossarray",
                     description="Simulate and analyze cross-sense distance, "
                                 "slope, and replay-detection invariants.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="synthesize a track CSV from a config")
    p_gen.add_argument("--config", required=True)
    p_gen.add_argument("--out", help="track CSV path (default <out-dir>/track.csv)")
    p_gen.add_argument("--out-dir")
    p_gen.set_defaults(func=cmd_generate)

    p_an = sub.add_parser("analyze",
                          help="write the per-sample timeline CSV and accuracy JSON")
    p_an.add_argument("--config")
    p_an.add_argument("--track", help="analyze an existing track CSV")
    p_an.add_argument("--object", help="object position x,y,z (with --track)")
    p_an.add_argument("--tolerance", type=float,
                      help="relative accuracy tolerance (default 0.05)")
    p_an.add_argument("--scenario-id", default="")
    p_an.add_argument("--out-dir")
    p_an.set_defaults(func=cmd_analyze)

    p_det = sub.add_parser("detect", help="classify streams as live or simulated")
    p_det.add_argument("--config")
    p_det.add_argument("--playback", action="store_true",
                       help="replay the config's motion to a stationary body")
    p_det.add_argument("--optics-from", help="track CSV supplying the optics")
    p_det.add_argument("--inertial-from", help="track CSV supplying the inertial stream")
    p_det.add_argument("--object", help="object position x,y,z (with --optics-from)")
    p_det.add_argument("--out", help="report JSON path")
    p_det.add_argument("--out-dir")
    p_det.set_defaults(func=cmd_detect)

    p_sl = sub.add_parser("slope", help="slope/orientation invariant CSV")
    p_sl.add_argument("--config", required=True)
    p_sl.add_argument("--out", help="slope CSV path")
    p_sl.add_argument("--out-dir")
    p_sl.set_defaults(func=cmd_slope)

    p_demo = sub.add_parser("demo",
                            help="run the built-in verification suite and "
                                 "write all artifacts")
    p_demo.add_argument("--out-dir")
    p_demo.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CrossArrayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
