"""2D parameter sweeps over the natural engine axes.

The working regime of the engine is controlled by the two dimensionless
products ``x = beta_hot * lambda_b`` and ``y = beta_cold * lambda_d``;
a cycle exists only for ``x < y``.  A sweep fixes the temperatures,
maps each grid cell back to ``(lambda_b, lambda_d)``, and records both
the closed-form second-order efficiency and the exact optimized cycle,
cell by cell, into a deterministic CSV.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cycle import EngineConfig, NotAnEngineError
from .optimizer import SearchSettings, maximize_efficiency
from .perturbation import optimized_efficiency
from .spectrum import SpectrumModel

__all__ = ["SweepAxis", "SweepSpec", "SweepCell", "run_sweep", "sweep_csv", "CSV_COLUMNS"]

CSV_COLUMNS = (
    "beta2_lambda_b",
    "beta1_lambda_d",
    "eta_carnot",
    "eta_correction_f21",
    "eta_exact_opt",
    "ds_cold",
    "ds_hot",
    "valid_flag",
)


@dataclass(frozen=True)
class SweepAxis:
    """Strictly increasing positive grid values for one sweep axis."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("axis needs at least one value")
        arr = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(arr)) or not np.all(arr > 0):
            raise ValueError("axis values must be finite and positive")
        if not np.all(np.diff(arr) > 0):
            raise ValueError("axis values must be strictly increasing")

    @classmethod
    def linear(cls, start: float, stop: float, points: int) -> "SweepAxis":
        return cls(tuple(np.linspace(start, stop, points).tolist()))

    @classmethod
    def log(cls, start: float, stop: float, points: int) -> "SweepAxis":
        return cls(tuple(np.geomspace(start, stop, points).tolist()))

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "SweepAxis":
        return cls(tuple(float(v) for v in values))


@dataclass(frozen=True)
class SweepSpec:
    axis_b: SweepAxis  # beta_hot * lambda_b grid
    axis_d: SweepAxis  # beta_cold * lambda_d grid


@dataclass(frozen=True)
class SweepCell:
    """One grid cell; exact fields are None when the exact cycle failed
    (correction columns stay filled) and all result fields are None when
    the cell violates the working-regime inequality x < y."""

    beta2_lambda_b: float
    beta1_lambda_d: float
    valid: bool
    eta_carnot: float | None
    eta_correction_f21: float | None
    eta_exact_opt: float | None
    ds_cold: float | None
    ds_hot: float | None


def _evaluate_cell(
    model: SpectrumModel,
    t_cold: float,
    t_hot: float,
    x: float,
    y: float,
    settings: SearchSettings,
) -> SweepCell:
    if not x < y:
        return SweepCell(x, y, False, None, None, None, None, None)
    config = EngineConfig(
        t_cold=t_cold, t_hot=t_hot, lambda_b=x * t_hot, lambda_d=y * t_cold
    )
    pert = optimized_efficiency(model, config, model.alpha)
    try:
        opt = maximize_efficiency(model, config, settings)
        eta_exact = opt.efficiency_star
        ds_cold = opt.cycle.ds_total_cold
        ds_hot = opt.cycle.ds_total_hot
    except NotAnEngineError:
        eta_exact = ds_cold = ds_hot = None
    return SweepCell(
        beta2_lambda_b=x,
        beta1_lambda_d=y,
        valid=True,
        eta_carnot=pert.eta_carnot,
        eta_correction_f21=pert.eta_correction,
        eta_exact_opt=eta_exact,
        ds_cold=ds_cold,
        ds_hot=ds_hot,
    )


def run_sweep(
    model: SpectrumModel,
    t_cold: float,
    t_hot: float,
    spec: SweepSpec,
    settings: SearchSettings | None = None,
    max_workers: int | None = None,
) -> list[SweepCell]:
    """Evaluate every grid cell, row-major with the cold-side axis outermost.

    Cells are independent and run on a bounded worker pool; the returned
    order is the deterministic grid order regardless of completion order.
    """
    settings = settings or SearchSettings()
    pairs = [(x, y) for y in spec.axis_d.values for x in spec.axis_b.values]
    workers = max_workers or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        cells = list(
            pool.map(lambda xy: _evaluate_cell(model, t_cold, t_hot, *xy, settings), pairs)
        )
    return cells


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return format(value, ".17g")


def sweep_csv(cells: Sequence[SweepCell]) -> str:
    """Render cells as CSV: fixed column order, 17 significant digits, LF endings."""
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for cell in cells:
        row = (
            _fmt(cell.beta2_lambda_b),
            _fmt(cell.beta1_lambda_d),
            _fmt(cell.eta_carnot),
            _fmt(cell.eta_correction_f21),
            _fmt(cell.eta_exact_opt),
            _fmt(cell.ds_cold),
            _fmt(cell.ds_hot),
            "true" if cell.valid else "false",
        )
        out.write(",".join(row) + "\n")
    return out.getvalue()
