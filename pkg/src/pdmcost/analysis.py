"""Cost-surface grids, gap/prediction sweeps, and savings projections.

The surface enumerates a strided TP x FP lattice and evaluates F1 and the
dollar savings at every point, which makes the mismatch between the two
objectives visible: F1 iso-lines cross savings levels of opposite sign.

The sweep re-runs the full window/tune/evaluate pipeline for a list of
(gap, prediction) durations in days on one fixed fleet, tuning by F1 and by
savings from a single shared trace, and reports both policies' costs as
dollars and as percentages of the reactive baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .econ import AffineCost, CostModel, pdm_cost, reactive_cost
from .metrics import confusion
from .simfleet import DeviceProfile, EventLog
from .tuner import TunerGrid, fit_cell, select_best, tune
from .windowing import (
    HOURS_PER_DAY,
    WindowSpec,
    build_dataset,
    extract_window,
    split_horizon,
    evaluation_start,
    training_starts,
)

__all__ = [
    "SurfaceGrid",
    "SweepRow",
    "surface",
    "sweep",
    "project_savings",
    "write_surface_csv",
    "write_sweep_csv",
]


@dataclass(frozen=True)
class SurfaceGrid:
    """F1 and savings over a strided (TP, FP) lattice with exact corners."""

    tp_levels: np.ndarray
    fp_levels: np.ndarray
    f1: np.ndarray
    s: np.ndarray
    s_normalized: np.ndarray
    p: int
    n: int
    affine: AffineCost


def surface(
    p: int, n: int, strides: tuple[int, int], ac: AffineCost
) -> SurfaceGrid:
    """Evaluate F1 and savings on the lattice {0, sp, ..} x {0, sn, ..}.

    The exact corners TP = p and FP = n are always included even when the
    strides do not divide evenly, since the extreme values of both measures
    live there.
    """
    stride_p, stride_n = strides
    if stride_p < 1 or stride_n < 1:
        raise ValueError("strides must be >= 1")
    if p < 1 or n < 1:
        raise ValueError("p and n must be >= 1")
    tp_levels = np.unique(np.append(np.arange(0, p + 1, stride_p), p))
    fp_levels = np.unique(np.append(np.arange(0, n + 1, stride_n), n))

    tp = tp_levels[:, None].astype(np.float64)
    fp = fp_levels[None, :].astype(np.float64)
    f1 = 2.0 * tp / (tp + fp + p)
    s = ac.value(tp, fp)
    lo, hi = s.min(), s.max()
    s_normalized = (s - lo) / (hi - lo) if hi > lo else np.zeros_like(s)
    return SurfaceGrid(
        tp_levels=tp_levels,
        fp_levels=fp_levels,
        f1=f1,
        s=s,
        s_normalized=s_normalized,
        p=p,
        n=n,
        affine=ac,
    )


@dataclass(frozen=True)
class SweepRow:
    """Costs of both tuned policies for one (gap, prediction) geometry.

    Percentages are relative to the reactive baseline; ``delta_pct`` is the
    F1-tuned percentage minus the savings-tuned percentage.
    """

    gap_days: int
    pred_days: int
    reactive: float
    pdm_f1: float
    pdm_s: float
    f1_pct: float
    s_pct: float
    delta_pct: float

    @classmethod
    def from_dollars(
        cls, gap_days: int, pred_days: int, reactive: float, pdm_f1: float, pdm_s: float
    ) -> "SweepRow":
        if reactive <= 0:
            raise ValueError("reactive baseline must be > 0")
        f1_pct = pdm_f1 / reactive * 100.0
        s_pct = pdm_s / reactive * 100.0
        return cls(
            gap_days=gap_days,
            pred_days=pred_days,
            reactive=reactive,
            pdm_f1=pdm_f1,
            pdm_s=pdm_s,
            f1_pct=f1_pct,
            s_pct=s_pct,
            delta_pct=f1_pct - s_pct,
        )


def sweep(
    profiles: list[DeviceProfile],
    logs: list[EventLog],
    geometries_days: list[tuple[int, int]],
    obs_h: int,
    step_h: int,
    bins: int,
    horizon_h: int,
    grid: TunerGrid,
    cm: CostModel,
    seed: int = 0,
    n_jobs: int = 1,
) -> tuple[list[SweepRow], list[tuple[int, int, str]]]:
    """Tune and evaluate both objectives for each (gap, pred) geometry.

    All rows share the same fleet and observation settings so differences
    are attributable to the window geometry alone. Failing rows are skipped
    and reported in the second return value as (gap, pred, error) tuples.
    """
    train_logs, test_logs = split_horizon(logs, horizon_h)
    rows: list[SweepRow] = []
    failures: list[tuple[int, int, str]] = []
    for gap_days, pred_days in geometries_days:
        try:
            spec = WindowSpec(
                obs_h=obs_h,
                gap_h=gap_days * HOURS_PER_DAY,
                pred_h=pred_days * HOURS_PER_DAY,
                step_h=step_h,
                bins=bins,
            )
            train = build_dataset(
                train_logs, profiles, spec, training_starts(spec, horizon_h)
            )
            test = extract_window(test_logs, profiles, evaluation_start(spec, horizon_h), spec)
            result = tune(train, grid, cm, spec.gap_h, spec.pred_h, seed, n_jobs)
            best_f1 = select_best(result.trace, "f1")
            best_s = select_best(result.trace, "savings")

            reactive = reactive_cost(test.n_pos, cm)
            dollars = {}
            for name, cell in (("f1", best_f1), ("s", best_s)):
                est = fit_cell(train, cell, seed, n_jobs)
                predicted = est.vote_scores(test.X) >= cell.cutoff
                counts = confusion(predicted.astype(int), test.y)
                dollars[name] = pdm_cost(counts, cm, spec.gap_h, spec.pred_h)
            rows.append(
                SweepRow.from_dollars(
                    gap_days, pred_days, reactive, dollars["f1"], dollars["s"]
                )
            )
        except Exception as exc:
            failures.append((gap_days, pred_days, f"{type(exc).__name__}: {exc}"))
    return rows, failures


def project_savings(
    weekly_savings: float, n_weeks: float, device_scale: float = 1.0
) -> float:
    """Scale one week's savings to a horizon and fleet size.

    Savings grow linearly with the number of prediction windows and
    proportionally with the number of devices.
    """
    if n_weeks < 0 or device_scale < 0:
        raise ValueError("n_weeks and device_scale must be >= 0")
    return weekly_savings * n_weeks * device_scale


def write_surface_csv(grid: SurfaceGrid, path) -> None:
    tp = np.repeat(grid.tp_levels, grid.fp_levels.size)
    fp = np.tile(grid.fp_levels, grid.tp_levels.size)
    pd.DataFrame(
        {
            "tp": tp,
            "fp": fp,
            "f1": grid.f1.ravel(),
            "s": grid.s.ravel(),
            "s_normalized": grid.s_normalized.ravel(),
        }
    ).to_csv(path, index=False)


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    pd.DataFrame(
        [
            {
                "gap_days": r.gap_days,
                "pred_days": r.pred_days,
                "reactive": r.reactive,
                "pdm_f1": r.pdm_f1,
                "pdm_s": r.pdm_s,
                "f1_pct": r.f1_pct,
                "s_pct": r.s_pct,
                "delta_pct": r.delta_pct,
            }
            for r in rows
        ],
        columns=[
            "gap_days",
            "pred_days",
            "reactive",
            "pdm_f1",
            "pdm_s",
            "f1_pct",
            "s_pct",
            "delta_pct",
        ],
    ).to_csv(path, index=False)
