"""Strict JSON run configuration shared by all CLI commands.

A run config bundles the simulation, window, cost, and grid settings plus a
seed and an output directory. Parsing is strict: unknown keys anywhere in
the document are rejected, so typos fail fast instead of silently running
with defaults. Durations are given in days at this interface and converted
to hours internally.
"""

from __future__ import annotations

import hashlib
import json
import platform
from dataclasses import dataclass
from pathlib import Path

from .econ import CostModel
from .simfleet import SimConfig
from .windowing import HOURS_PER_DAY, WindowSpec

__all__ = ["ConfigError", "WindowConfig", "GridConfig", "RunConfig", "load_config",
           "write_manifest"]


class ConfigError(ValueError):
    """Invalid or malformed run configuration."""


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(sorted(unknown))}")


def _get(section: dict, key: str, default, where: str, types) -> object:
    value = section.get(key, default)
    if value is None:
        return None
    if not isinstance(value, types):
        raise ConfigError(f"{where}.{key} has wrong type: {value!r}")
    return value


@dataclass(frozen=True)
class WindowConfig:
    observation_days: int = 70
    gap_days: int = 7
    prediction_days: int = 7
    step_days: int = 7
    bins: int = 10
    horizon_days: int = 84

    def spec(self, gap_days: int | None = None, prediction_days: int | None = None) -> WindowSpec:
        return WindowSpec.from_days(
            self.observation_days,
            self.gap_days if gap_days is None else gap_days,
            self.prediction_days if prediction_days is None else prediction_days,
            self.step_days,
            self.bins,
        )

    @property
    def horizon_h(self) -> int:
        return self.horizon_days * HOURS_PER_DAY


@dataclass(frozen=True)
class GridConfig:
    ntree: tuple[int, ...] = (200, 400, 600, 800)
    mtry_exponents: tuple[float, ...] = (0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
    samp_multiplier_step: float = 0.5
    cutoff: tuple[float, float, float] = (0.05, 0.95, 0.01)


@dataclass(frozen=True)
class RunConfig:
    sim: SimConfig
    window: WindowConfig
    cost: CostModel
    grid: GridConfig
    objective: str = "savings"
    output_dir: str = "runs/default"
    seed: int = 7
    threads: int = 1
    sweep_gap_days: tuple[int, ...] = (4, 7, 10)
    sweep_prediction_days: tuple[int, ...] = (4, 7, 10)


def _parse_sim(section: dict, seed: int) -> SimConfig:
    _check_keys(
        section,
        {"n_devices", "n_weeks", "hazard_range", "precursor_strength",
         "target_positive_rate"},
        "sim",
    )
    hazard = _get(section, "hazard_range", [0.15, 0.5], "sim", list)
    if len(hazard) != 2:
        raise ConfigError("sim.hazard_range must be [min, max]")
    try:
        return SimConfig(
            n_devices=_get(section, "n_devices", 2000, "sim", int),
            n_weeks=_get(section, "n_weeks", 24, "sim", int),
            seed=seed,
            hazard_range=(float(hazard[0]), float(hazard[1])),
            precursor_strength=float(
                _get(section, "precursor_strength", 2.0, "sim", (int, float))
            ),
            target_positive_rate=(
                None
                if section.get("target_positive_rate") is None
                else float(section["target_positive_rate"])
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"sim: {exc}") from exc


def _parse_window(section: dict) -> WindowConfig:
    allowed = {"observation_days", "gap_days", "prediction_days", "step_days",
               "bins", "horizon_days"}
    _check_keys(section, allowed, "window")
    kwargs = {
        key: _get(section, key, getattr(WindowConfig, key), "window", int)
        for key in allowed
    }
    cfg = WindowConfig(**kwargs)
    try:
        cfg.spec()
    except ValueError as exc:
        raise ConfigError(f"window: {exc}") from exc
    return cfg


def _parse_cost(section: dict) -> CostModel:
    allowed = {"ticket_cost", "service_cost", "downtime_rate", "travel_time_h",
               "repair_time_h", "component_cost", "expected_life_h"}
    _check_keys(section, allowed, "cost")
    defaults = CostModel()
    try:
        return CostModel(
            **{
                key: float(_get(section, key, getattr(defaults, key), "cost",
                                (int, float)))
                for key in allowed
            }
        )
    except ValueError as exc:
        raise ConfigError(f"cost: {exc}") from exc


def _parse_grid(section: dict) -> GridConfig:
    allowed = {"ntree", "mtry_exponents", "samp_multiplier_step", "cutoff"}
    _check_keys(section, allowed, "grid")
    defaults = GridConfig()
    ntree = _get(section, "ntree", list(defaults.ntree), "grid", list)
    exps = _get(section, "mtry_exponents", list(defaults.mtry_exponents), "grid", list)
    cutoff = _get(section, "cutoff", list(defaults.cutoff), "grid", list)
    if len(cutoff) != 3:
        raise ConfigError("grid.cutoff must be [start, stop, step]")
    return GridConfig(
        ntree=tuple(int(v) for v in ntree),
        mtry_exponents=tuple(float(v) for v in exps),
        samp_multiplier_step=float(
            _get(section, "samp_multiplier_step", defaults.samp_multiplier_step,
                 "grid", (int, float))
        ),
        cutoff=(float(cutoff[0]), float(cutoff[1]), float(cutoff[2])),
    )


def _parse_sweep(section: dict) -> tuple[tuple[int, ...], tuple[int, ...]]:
    _check_keys(section, {"gap_days", "prediction_days"}, "sweep")
    gaps = _get(section, "gap_days", [4, 7, 10], "sweep", list)
    preds = _get(section, "prediction_days", [4, 7, 10], "sweep", list)
    return tuple(int(g) for g in gaps), tuple(int(p) for p in preds)


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(
        doc,
        {"seed", "output_dir", "threads", "objective", "sim", "window", "cost",
         "grid", "sweep"},
        "config",
    )
    seed = _get(doc, "seed", 7, "config", int)
    if seed < 0:
        raise ConfigError("seed must be >= 0")
    objective = _get(doc, "objective", "savings", "config", str)
    if objective not in ("f1", "savings"):
        raise ConfigError(f"objective must be 'f1' or 'savings', got {objective!r}")
    threads = _get(doc, "threads", 1, "config", int)
    if threads < 1 and threads != -1:
        raise ConfigError("threads must be >= 1 or -1 for all cores")
    gaps, preds = _parse_sweep(doc.get("sweep", {}))
    return RunConfig(
        sim=_parse_sim(doc.get("sim", {}), seed),
        window=_parse_window(doc.get("window", {})),
        cost=_parse_cost(doc.get("cost", {})),
        grid=_parse_grid(doc.get("grid", {})),
        objective=objective,
        output_dir=_get(doc, "output_dir", "runs/default", "config", str),
        seed=seed,
        threads=threads,
        sweep_gap_days=gaps,
        sweep_prediction_days=preds,
    )


def load_config(path) -> tuple[RunConfig, dict]:
    """Parse a config file; returns the config and the raw document."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"invalid JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_config(doc), doc


def write_manifest(output_dir, raw_config: dict, command: str) -> None:
    """Record what produced the artifacts in this directory.

    Contains the config hash, seed, command, and library versions; no
    timestamps, so re-running writes identical bytes.
    """
    import numpy
    import pandas

    from . import __version__

    canonical = json.dumps(raw_config, sort_keys=True, separators=(",", ":"))
    manifest = {
        "command": command,
        "config_sha256": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": raw_config.get("seed", 7),
        "versions": {
            "pdmcost": __version__,
            "numpy": numpy.__version__,
            "pandas": pandas.__version__,
            "python": platform.python_version(),
        },
    }
    path = Path(output_dir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
