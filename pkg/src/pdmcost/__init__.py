"""pdmcost: economic model selection for device-failure prediction.

The package simulates a device fleet with learnable failure precursors,
extracts sliding-window features, trains a from-scratch balanced random
forest, and tunes its hyperparameters and decision cutoff against either
the F1 score or a dollar-valued savings function derived from the
maintenance business case.
"""

from .econ import (
    AffineCost,
    CostModel,
    affine_coefficients,
    expected_downtime,
    itemize_costs,
    pdm_cost,
    reactive_cost,
    savings,
)
from .forest import BalancedForestClassifier, classify, load_model, save_model
from .metrics import ConfusionCounts, RocCurve, confusion, f1, precision, recall, roc
from .simfleet import DeviceProfile, EventLog, SimConfig, calibrate_hazard, generate_fleet
from .tuner import TunerGrid, TuneResult, expand_grid, iso_savings_line, select_best, tune
from .windowing import WindowedDataset, WindowSpec, build_dataset, split_horizon
from .analysis import SweepRow, project_savings, surface, sweep

__version__ = "0.1.0"

__all__ = [
    "AffineCost",
    "BalancedForestClassifier",
    "ConfusionCounts",
    "CostModel",
    "DeviceProfile",
    "EventLog",
    "RocCurve",
    "SimConfig",
    "SweepRow",
    "TuneResult",
    "TunerGrid",
    "WindowSpec",
    "WindowedDataset",
    "affine_coefficients",
    "build_dataset",
    "calibrate_hazard",
    "classify",
    "confusion",
    "expand_grid",
    "expected_downtime",
    "f1",
    "generate_fleet",
    "iso_savings_line",
    "itemize_costs",
    "load_model",
    "pdm_cost",
    "precision",
    "project_savings",
    "reactive_cost",
    "recall",
    "roc",
    "save_model",
    "savings",
    "select_best",
    "split_horizon",
    "surface",
    "sweep",
    "tune",
    "__version__",
]
