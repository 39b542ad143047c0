"""Batch command-line interface: simulate, image, metrics.

Exit codes: 0 success, 2 config error, 3 I/O error, 4 dims mismatch,
5 solver failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as rio
from .errors import (ConfigError, DimensionError, FormatError, GeometryError,
                     SceneError, SolverError)
from .metrics import (MetricReport, max_intensity_projection,
                      relative_energy_error, ssim, target_mask_from_truth, tbr)
from .operators import build_operator_pair
from .prox import CognitionSpec
from .simulate import Scene, make_phantom, measured_echo
from .solver import SolverParams, run_task
from .tasks import SPARSE_BASELINE_RULE, get_preset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DIMS = 4
EXIT_SOLVER = 5


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(code)


def _load_config(path, task_flag=None):
    cfg = rio.load_config(path)
    if task_flag is not None and cfg["task"] != task_flag:
        raise ConfigError(
            f"--task {task_flag} conflicts with config task {cfg['task']}")
    return cfg


def cmd_simulate(args):
    if args.task not in (1, 2, 3):
        raise ConfigError(f"unknown task {args.task}")
    cfg = _load_config(args.config, args.task)
    geometry = rio.geometry_from_config(cfg)
    seed = cfg.get("seed", 0)
    scene, truth = make_phantom(args.task, geometry, seed)
    if "snr_db" in cfg:
        scene.noise_snr_db = float("inf") if cfg["snr_db"] is None else cfg["snr_db"]
    echo = measured_echo(scene, geometry)
    rio.write_tensor(args.out_echo, echo)
    rio.write_tensor(args.out_truth, truth)
    scene_path = args.out_scene or str(Path(args.out_echo).with_suffix("")) + ".scene.json"
    rio.write_json(scene_path, rio.validate_scene(scene.to_json_dict()))
    print(f"simulated task {args.task}: dims {geometry.dims}, "
          f"snr {scene.noise_snr_db} dB, seed {seed}")
    return EXIT_OK


def _solver_params(cfg, preset, component_count):
    sv = cfg.get("solver", {})
    return SolverParams(
        gamma=sv.get("gamma", preset.gamma),
        max_iters=sv.get("max_iters", preset.max_iters),
        rel_tol=sv.get("rel_tol", 1e-4),
        component_count=sv.get("component_count", component_count),
    )


def _resolved_cognitions(entries, m_max):
    specs = []
    for e in entries:
        beta = e.get("beta")
        if beta is None:
            rel = e.get("beta_rel")
            if rel is None:
                raise ConfigError("cognition needs beta or beta_rel")
            beta = rel * m_max if m_max > 0 else rel
        specs.append(CognitionSpec(kind=e["kind"], beta=beta, p=e.get("p"),
                                   transform=e.get("transform"),
                                   component=e.get("component", 0)))
    return specs


def cmd_image(args):
    cfg = _load_config(args.config, args.task)
    geometry = rio.geometry_from_config(cfg)
    echo = rio.read_tensor(args.echo)
    if echo.shape != geometry.dims:
        raise DimensionError(
            f"echo dims {echo.shape} do not match geometry {geometry.dims}")
    op = build_operator_pair(geometry)
    preset = get_preset(args.task)

    if args.method == "mf":
        from .operators import imaging
        out = imaging(op, echo)
    else:
        from .operators import imaging
        m_max = float(np.max(np.abs(imaging(op, echo))))
        if args.method == "sparse":
            entries = [{"kind": SPARSE_BASELINE_RULE.kind,
                        "beta_rel": SPARSE_BASELINE_RULE.value,
                        "component": 0}]
            params = _solver_params(cfg, preset, 1)
        elif args.method == "task":
            entries = cfg.get("cognitions")
            if entries is None:
                params = _solver_params(cfg, preset, preset.component_count)
                out = run_task(args.task, op, echo, overrides=params)
                entries = None
            else:
                ncomp = max(e.get("component", 0) for e in entries) + 1
                params = _solver_params(cfg, preset, ncomp)
        else:
            raise ConfigError(f"unknown method {args.method}")
        if args.method == "sparse" or entries is not None:
            cognitions = _resolved_cognitions(entries, m_max)
            out = run_task(args.task, op, echo, overrides=params,
                           cognitions=cognitions)
    rio.write_tensor(args.out, out)
    if args.export_png:
        rio.export_projections(Path(args.out).with_suffix(""), out)
    print(f"imaged with method {args.method}: dims {out.shape}")
    return EXIT_OK


def cmd_metrics(args):
    truth = rio.read_tensor(args.truth)
    est = rio.read_tensor(args.est)
    if truth.shape != est.shape:
        raise DimensionError(
            f"truth dims {truth.shape} do not match estimate {est.shape}")
    wanted = ["ree", "ssim", "tbr"] if args.metric == "all" else [args.metric]
    report = MetricReport(params={"metrics": wanted, "ssim_window": 8,
                                  "projection": "max-intensity, z axis",
                                  "ree_radius": 3, "mask_dilation": 1,
                                  "ree_convention": "peak magnitude"})
    if "ree" in wanted:
        if not args.scene or not args.config:
            raise ConfigError("--metric ree requires --scene and --config")
        cfg = rio.load_config(args.config)
        geometry = rio.geometry_from_config(cfg)
        with open(args.scene) as fh:
            scene = Scene.from_json_dict(rio.validate_scene(json.load(fh)))
        errors = relative_energy_error(est, scene, geometry)
        report.ree_per_scatterer = errors
        report.ree_mean = sum(errors) / len(errors)
    if "ssim" in wanted:
        report.ssim = ssim(max_intensity_projection(est, "z"),
                           max_intensity_projection(truth, "z"))
    if "tbr" in wanted:
        report.tbr_db = tbr(est, target_mask_from_truth(truth))
    doc = rio.validate_report(report.to_json_dict())
    rio.write_json(args.out, doc)
    headline = {k: v for k, v in doc.items() if k != "params" and v is not None}
    print(json.dumps(headline))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rit3", description="Task-oriented 3D radar imaging toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="synthesize a phantom echo")
    sim.add_argument("--task", type=int, required=True)
    sim.add_argument("--config", required=True)
    sim.add_argument("--out-echo", required=True)
    sim.add_argument("--out-truth", required=True)
    sim.add_argument("--out-scene")
    sim.set_defaults(func=cmd_simulate)

    img = sub.add_parser("image", help="reconstruct an image from an echo")
    img.add_argument("--method", choices=["mf", "sparse", "task"], required=True)
    img.add_argument("--task", type=int, required=True)
    img.add_argument("--config", required=True)
    img.add_argument("--echo", required=True)
    img.add_argument("--out", required=True)
    img.add_argument("--export-png", action="store_true")
    img.set_defaults(func=cmd_image)

    met = sub.add_parser("metrics", help="score an estimate against truth")
    met.add_argument("--truth", required=True)
    met.add_argument("--est", required=True)
    met.add_argument("--scene")
    met.add_argument("--config")
    met.add_argument("--metric", choices=["ree", "ssim", "tbr", "all"],
                     required=True)
    met.add_argument("--out", required=True)
    met.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DimensionError as exc:
        _fail(EXIT_DIMS, exc)
    except (FormatError, OSError) as exc:
        _fail(EXIT_IO, exc)
    except (ConfigError, GeometryError, SceneError, ValueError) as exc:
        _fail(EXIT_CONFIG, exc)
    except SolverError as exc:
        _fail(EXIT_SOLVER, exc)


if __name__ == "__main__":
    sys.exit(main())
