"""Command-line front end: reproducible experiments from one JSON config.

Subcommands cover the whole pipeline:

    simulate   write fleet.csv and events.csv for the configured fleet
    features   window the event logs into dataset.csv (training + test rows)
    tune       grid-search the forest, write model.json and tune_trace.csv
    evaluate   score the test window, write report + itemized costs.csv
    roc        write roc.csv and iso-savings bounds.csv for the test window
    surface    write the TP x FP cost surface as surface.csv
    sweep      re-run tune/evaluate over gap/prediction geometries
    project    scale weekly savings to a horizon and fleet size

Every command is a pure function of the config file and its input files;
re-running a command overwrites its outputs with identical bytes. Exit
codes: 0 success, 1 runtime failure, 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, econ, metrics, tuner, windowing
from .config import ConfigError, RunConfig, load_config, write_manifest
from .forest import load_model, save_model
from .metrics import confusion
from .simfleet import (
    calibrate_hazard,
    generate_fleet,
    read_events_csv,
    read_fleet_csv,
    write_events_csv,
    write_fleet_csv,
)
from .tuner import expand_grid, fit_cell
from .windowing import read_dataset_csv, write_dataset_csv

__all__ = ["main"]


def _out_dir(config: RunConfig) -> Path:
    path = Path(config.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _resolve(arg_value, out: Path, default_name: str) -> Path:
    return Path(arg_value) if arg_value else out / default_name


def cmd_simulate(config: RunConfig, raw: dict, args) -> int:
    sim = config.sim
    if sim.target_positive_rate is not None and sim.n_devices > 0:
        sim = calibrate_hazard(sim)
    profiles, logs = generate_fleet(sim)
    out = _out_dir(config)
    write_fleet_csv(profiles, out / "fleet.csv")
    write_events_csv(logs, out / "events.csv")
    write_manifest(out, raw, "simulate")
    print(
        f"simulated {len(profiles)} devices over {sim.n_weeks} weeks "
        f"(hazard {sim.hazard_range[0]:.4f}..{sim.hazard_range[1]:.4f}) "
        f"-> {out / 'fleet.csv'}, {out / 'events.csv'}"
    )
    return 0


def cmd_features(config: RunConfig, raw: dict, args) -> int:
    out = _out_dir(config)
    profiles = read_fleet_csv(_resolve(args.fleet, out, "fleet.csv"))
    logs = read_events_csv(_resolve(args.events, out, "events.csv"))
    spec = config.window.spec()
    horizon = config.window.horizon_h
    train_logs, test_logs = windowing.split_horizon(logs, horizon)
    train = windowing.build_dataset(
        train_logs, profiles, spec, windowing.training_starts(spec, horizon)
    )
    test = windowing.extract_window(
        test_logs, profiles, windowing.evaluation_start(spec, horizon), spec
    )
    ds = windowing.WindowedDataset(
        device_ids=np.concatenate([train.device_ids, test.device_ids]),
        window_starts=np.concatenate([train.window_starts, test.window_starts]),
        X=np.vstack([train.X, test.X]),
        y=np.concatenate([train.y, test.y]),
        schema=train.schema,
    )
    write_dataset_csv(ds, out / "dataset.csv")
    write_manifest(out, raw, "features")
    print(
        f"extracted {train.n_rows} training rows (P={train.n_pos}, N={train.n_neg}, "
        f"positive rate {train.n_pos / max(1, train.n_rows):.3f}) and "
        f"{test.n_rows} test rows -> {out / 'dataset.csv'}"
    )
    return 0


def _split_rows(ds, config: RunConfig):
    """Training rows have the whole window before the horizon; the test
    window is the one whose prediction interval starts at the horizon."""
    spec = config.window.spec()
    horizon = config.window.horizon_h
    train_mask = ds.window_starts + spec.total_h <= horizon
    test_mask = ds.window_starts == windowing.evaluation_start(spec, horizon)
    return ds.subset(train_mask), ds.subset(test_mask)


def cmd_tune(config: RunConfig, raw: dict, args) -> int:
    out = _out_dir(config)
    ds = read_dataset_csv(_resolve(args.dataset, out, "dataset.csv"))
    train, _ = _split_rows(ds, config)
    grid = expand_grid(
        train.schema.n_features,
        train.n_pos,
        train.n_neg,
        ntree=config.grid.ntree,
        mtry_exponents=config.grid.mtry_exponents,
        samp_multiplier_step=config.grid.samp_multiplier_step,
        cutoff_range=config.grid.cutoff,
        objective=config.objective,
    )
    spec = config.window.spec()
    result = tuner.tune(
        train, grid, config.cost, spec.gap_h, spec.pred_h, config.seed,
        n_jobs=config.threads, holdout_fraction=args.holdout,
    )
    best = result.best
    est = fit_cell(train, best, config.seed, n_jobs=config.threads)
    save_model(est, out / "model.json", feature_names=train.schema.names)
    tuner.write_trace_csv(result.trace, out / "tune_trace.csv")
    write_manifest(out, raw, "tune")
    print(
        f"tuned {grid.n_cells} grid cells on {train.n_rows} rows; best by "
        f"{result.objective}: ntree={best.ntree} mtry={best.mtry} samp={best.samp} "
        f"cutoff={best.cutoff:.2f} (f1={best.f1:.4f}, s=${best.s:,.2f}) "
        f"-> {out / 'model.json'}"
    )
    return 0


def _evaluation(config: RunConfig, args):
    out = _out_dir(config)
    ds = read_dataset_csv(_resolve(args.dataset, out, "dataset.csv"))
    _, test = _split_rows(ds, config)
    if test.n_rows == 0:
        raise ValueError("no test rows found for the configured horizon")
    est, _ = load_model(_resolve(args.model, out, "model.json"))
    scores = est.vote_scores(test.X)
    predicted = (scores >= est.cutoff).astype(int)
    counts = confusion(predicted, test.y)
    return out, test, est, scores, counts


def cmd_evaluate(config: RunConfig, raw: dict, args) -> int:
    out, test, est, scores, counts = _evaluation(config, args)
    spec = config.window.spec()
    cm = config.cost
    ac = econ.affine_coefficients(cm, spec.gap_h, spec.pred_h)
    s = econ.savings(counts, ac)
    reactive = econ.reactive_cost(counts.p, cm)
    pdm = econ.pdm_cost(counts, cm, spec.gap_h, spec.pred_h)
    lines = econ.itemize_costs(counts, cm, spec.gap_h, spec.pred_h)

    report = {
        "rows": counts.total,
        "tp": counts.tp,
        "fp": counts.fp,
        "tn": counts.tn,
        "fn": counts.fn,
        "precision": float(metrics.precision(counts)),
        "recall": float(metrics.recall(counts)),
        "f1": float(metrics.f1(counts)),
        "cutoff": est.cutoff,
        "savings_per_tp": ac.a,
        "penalty_per_fp": ac.b,
        "savings": s,
        "reactive_cost": reactive,
        "pdm_cost": pdm,
        "pdm_pct_of_reactive": pdm / reactive * 100.0 if reactive else None,
        "cost_components": [
            {"component": ln.component, "current": ln.current, "future": ln.future,
             "delta": ln.delta}
            for ln in lines
        ],
    }

    with open(out / "costs.csv", "w") as fh:
        fh.write("component,current,future,delta\n")
        for ln in lines:
            fh.write(f"{ln.component},{ln.current},{ln.future},{ln.delta}\n")
        fh.write(f"total,{reactive},{pdm},{s}\n")

    if args.format == "json":
        text = json.dumps(report, indent=2)
        (out / "report.json").write_text(text + "\n")
    elif args.format == "csv":
        keys = [k for k in report if k != "cost_components"]
        text = ",".join(keys) + "\n" + ",".join(str(report[k]) for k in keys)
        (out / "report.csv").write_text(text + "\n")
    else:
        pct = f"{report['pdm_pct_of_reactive']:.2f}%" if reactive else "n/a"
        rows = [
            "test-window evaluation",
            f"  rows {counts.total}  TP {counts.tp}  FP {counts.fp}  "
            f"TN {counts.tn}  FN {counts.fn}",
            f"  precision {report['precision']:.4f}  recall {report['recall']:.4f}  "
            f"f1 {report['f1']:.4f}  (cutoff {est.cutoff:.2f})",
            f"  savings ${s:,.2f} (a=${ac.a:.2f}/TP, b=${ac.b:.2f}/FP)",
            f"  reactive ${reactive:,.2f}  predictive ${pdm:,.2f}  ({pct} of reactive)",
            "",
            f"  {'component':<16}{'current':>14}{'future':>14}{'delta':>14}",
        ]
        for ln in lines:
            rows.append(
                f"  {ln.component:<16}{ln.current:>14,.2f}{ln.future:>14,.2f}"
                f"{ln.delta:>14,.2f}"
            )
        rows.append(f"  {'total':<16}{reactive:>14,.2f}{pdm:>14,.2f}{s:>14,.2f}")
        text = "\n".join(rows)
        (out / "report.txt").write_text(text + "\n")
    print(text)
    write_manifest(out, raw, "evaluate")
    return 0


def cmd_roc(config: RunConfig, raw: dict, args) -> int:
    out, test, est, scores, counts = _evaluation(config, args)
    spec = config.window.spec()
    ac = econ.affine_coefficients(config.cost, spec.gap_h, spec.pred_h)
    curve = metrics.roc(scores, test.y)
    metrics.write_roc_csv(curve, out / "roc.csv")
    achieved = econ.savings(counts, ac)
    bounds = {
        "zero": tuner.bound_line_points(0.0, ac, test.n_pos, test.n_neg),
        "achieved": tuner.bound_line_points(achieved, ac, test.n_pos, test.n_neg),
    }
    tuner.write_bounds_csv(bounds, out / "bounds.csv")
    write_manifest(out, raw, "roc")
    print(
        f"ROC with {len(curve.points)} points, AUC {curve.auc:.4f}; iso-savings "
        f"bounds at $0 and ${achieved:,.2f} -> {out / 'roc.csv'}, {out / 'bounds.csv'}"
    )
    return 0


def cmd_surface(config: RunConfig, raw: dict, args) -> int:
    out = _out_dir(config)
    if args.p is not None and args.n is not None:
        p, n = args.p, args.n
    else:
        ds = read_dataset_csv(_resolve(args.dataset, out, "dataset.csv"))
        _, test = _split_rows(ds, config)
        p, n = test.n_pos, test.n_neg
    spec = config.window.spec()
    ac = econ.affine_coefficients(config.cost, spec.gap_h, spec.pred_h)
    grid = analysis.surface(p, n, (args.stride_tp, args.stride_fp), ac)
    analysis.write_surface_csv(grid, out / "surface.csv")
    write_manifest(out, raw, "surface")
    print(
        f"surface over {grid.tp_levels.size} x {grid.fp_levels.size} lattice "
        f"(P={p}, N={n}, strides {args.stride_tp}/{args.stride_fp}) "
        f"-> {out / 'surface.csv'}"
    )
    return 0


def cmd_sweep(config: RunConfig, raw: dict, args) -> int:
    out = _out_dir(config)
    profiles = read_fleet_csv(_resolve(args.fleet, out, "fleet.csv"))
    logs = read_events_csv(_resolve(args.events, out, "events.csv"))
    geometries = [
        (g, p) for g in config.sweep_gap_days for p in config.sweep_prediction_days
    ]
    spec = config.window.spec()
    # grid expansion needs the class counts of the base geometry's training set
    horizon = config.window.horizon_h
    train_logs, _ = windowing.split_horizon(logs, horizon)
    base_starts = windowing.training_starts(spec, horizon)
    if base_starts.size == 0:
        raise ValueError(
            "no training window fits before the horizon; reduce "
            "observation_days or enlarge horizon_days"
        )
    base_train = windowing.build_dataset(train_logs, profiles, spec, base_starts)
    grid = expand_grid(
        base_train.schema.n_features,
        max(1, base_train.n_pos),
        max(1, base_train.n_neg),
        ntree=config.grid.ntree,
        mtry_exponents=config.grid.mtry_exponents,
        samp_multiplier_step=config.grid.samp_multiplier_step,
        cutoff_range=config.grid.cutoff,
        objective=config.objective,
    )
    rows, failures = analysis.sweep(
        profiles,
        logs,
        geometries,
        obs_h=spec.obs_h,
        step_h=spec.step_h,
        bins=spec.bins,
        horizon_h=horizon,
        grid=grid,
        cm=config.cost,
        seed=config.seed,
        n_jobs=config.threads,
    )
    analysis.write_sweep_csv(rows, out / "sweep.csv")
    write_manifest(out, raw, "sweep")
    for gap, pred, err in failures:
        print(f"sweep row ({gap},{pred}) failed: {err}", file=sys.stderr)
    print(f"swept {len(rows)} geometries ({len(failures)} failed) -> {out / 'sweep.csv'}")
    return 0 if not failures else 1


def cmd_project(args) -> int:
    value = analysis.project_savings(args.weekly, args.weeks, args.scale)
    if args.format == "json":
        print(json.dumps({"weekly": args.weekly, "weeks": args.weeks,
                          "scale": args.scale, "projected": value}))
    else:
        print(f"{value:.0f}" if value == int(value) else f"{value}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdmcost",
        description="Cost-aware tuning of device-failure prediction models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, **extra):
        cmd = sub.add_parser(name, help=help_text)
        if extra.get("config", True):
            cmd.add_argument("--config", required=True, help="path to the JSON run config")
            cmd.add_argument("--threads", type=int, default=None,
                             help="override the configured worker count")
        return cmd

    add("simulate", "generate fleet.csv and events.csv")

    feat = add("features", "extract dataset.csv from event logs")
    feat.add_argument("--fleet", help="fleet.csv path (default: output_dir/fleet.csv)")
    feat.add_argument("--events", help="events.csv path (default: output_dir/events.csv)")

    tune_cmd = add("tune", "grid-search the forest and write model.json")
    tune_cmd.add_argument("--dataset", help="dataset.csv path")
    tune_cmd.add_argument(
        "--holdout", type=float, default=0.0,
        help="fraction of training rows scored instead of the training set "
             "itself (default 0: score on the training rows)",
    )

    ev = add("evaluate", "evaluate model.json on the test window")
    ev.add_argument("--dataset", help="dataset.csv path")
    ev.add_argument("--model", help="model.json path")
    ev.add_argument("--format", choices=["text", "json", "csv"], default="text")

    roc_cmd = add("roc", "write ROC points and iso-savings bound lines")
    roc_cmd.add_argument("--dataset", help="dataset.csv path")
    roc_cmd.add_argument("--model", help="model.json path")

    surf = add("surface", "write the TP x FP cost surface")
    surf.add_argument("--dataset", help="dataset.csv path")
    surf.add_argument("--stride-tp", type=int, default=100)
    surf.add_argument("--stride-fp", type=int, default=100)
    surf.add_argument("--p", type=int, help="positive count (default: test window)")
    surf.add_argument("--n", type=int, help="negative count (default: test window)")

    sw = add("sweep", "tune/evaluate across gap and prediction durations")
    sw.add_argument("--fleet", help="fleet.csv path")
    sw.add_argument("--events", help="events.csv path")

    proj = sub.add_parser("project", help="scale weekly savings to a horizon")
    proj.add_argument("--weekly", type=float, required=True, help="savings per week")
    proj.add_argument("--weeks", type=float, default=1.0)
    proj.add_argument("--scale", type=float, default=1.0, help="fleet size multiplier")
    proj.add_argument("--format", choices=["text", "json"], default="text")

    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "features": cmd_features,
    "tune": cmd_tune,
    "evaluate": cmd_evaluate,
    "roc": cmd_roc,
    "surface": cmd_surface,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "project":
            return cmd_project(args)
        config, raw = load_config(args.config)
        if args.threads is not None:
            config = dataclasses.replace(config, threads=args.threads)
        return _COMMANDS[args.command](config, raw, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
