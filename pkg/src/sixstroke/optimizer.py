"""Exact optimization of the cycle efficiency over the adiabatic targets.

The two heats separate: the cold release depends only on ``lambda_c``
and the hot intake only on ``lambda_a``, so maximizing the efficiency
1 - q_cold/q_hot reduces to two independent 1D problems, minimizing the
former and maximizing the latter.  Both are solved by deterministic
golden-section search on a bracket around the scale-matched zeroth-order
targets; no derivatives, no randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .cycle import CycleReport, EngineConfig, heat_cold, heat_hot, run_cycle
from .perturbation import zeroth_order_lambdas
from .spectrum import SpectrumModel

__all__ = [
    "SearchSettings",
    "OptimumReport",
    "minimize_q1",
    "maximize_q2",
    "maximize_efficiency",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class SearchSettings:
    """Bracket and stopping control for the 1D searches.

    ``bracket_halfwidth`` and ``tolerance`` are relative to the
    zeroth-order target the bracket is centered on.  The default bracket
    is far wider than the O(alpha) shift being hunted; widen it further
    for large deformations.
    """

    bracket_halfwidth: float = 0.5
    tolerance: float = 1e-12
    max_iterations: int = 200

    def __post_init__(self):
        if not 0.0 < self.bracket_halfwidth < 1.0:
            raise ValueError(
                "bracket_halfwidth must lie in (0, 1) so the bracket "
                f"keeps lambda positive, got {self.bracket_halfwidth}"
            )
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True)
class OptimumReport:
    lambda_c_star: float
    lambda_a_star: float
    efficiency_star: float
    iterations: tuple[int, int]
    bracket_hit: tuple[bool, bool]
    cycle: CycleReport


@dataclass(frozen=True)
class _SearchResult:
    x: float
    value: float
    iterations: int
    bracket_hit: bool


def _golden_section(
    fn: Callable[[float], float], lo: float, hi: float, tol_abs: float, max_iterations: int
) -> _SearchResult:
    """Minimize a unimodal function over [lo, hi] by interval reduction."""
    width = hi - lo
    if width <= tol_abs:
        x = 0.5 * (lo + hi)
        return _SearchResult(x=x, value=fn(x), iterations=0, bracket_hit=True)
    steps = math.ceil(math.log(tol_abs / width) / math.log(_INV_PHI))
    if steps > max_iterations:
        raise RuntimeError(
            f"golden-section search needs {steps} iterations to reach "
            f"tolerance {tol_abs} but max_iterations={max_iterations}"
        )
    a, b = lo, hi
    c = a + _INV_PHI_SQ * width
    d = a + _INV_PHI * width
    yc = fn(c)
    yd = fn(d)
    for _ in range(steps - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            width *= _INV_PHI
            c = a + _INV_PHI_SQ * width
            yc = fn(c)
        else:
            a, c, yc = c, d, yd
            width *= _INV_PHI
            d = a + _INV_PHI * width
            yd = fn(d)
    x = 0.5 * (a + b)
    hit = (x - lo) <= 2.0 * tol_abs or (hi - x) <= 2.0 * tol_abs
    return _SearchResult(x=x, value=fn(x), iterations=steps, bracket_hit=hit)


def _bracket(center: float, settings: SearchSettings) -> tuple[float, float, float]:
    lo = center * (1.0 - settings.bracket_halfwidth)
    hi = center * (1.0 + settings.bracket_halfwidth)
    if not lo > 0.0:
        raise ValueError(f"bracket [{lo}, {hi}] leaves the positive reals")
    return lo, hi, settings.tolerance * center


def _search_cold(
    model: SpectrumModel, config: EngineConfig, settings: SearchSettings
) -> _SearchResult:
    lambda_c0, _ = zeroth_order_lambdas(config)
    lo, hi, tol = _bracket(lambda_c0, settings)
    return _golden_section(
        lambda lc: heat_cold(model, config, lc), lo, hi, tol, settings.max_iterations
    )


def _search_hot(
    model: SpectrumModel, config: EngineConfig, settings: SearchSettings
) -> _SearchResult:
    _, lambda_a0 = zeroth_order_lambdas(config)
    lo, hi, tol = _bracket(lambda_a0, settings)
    res = _golden_section(
        lambda la: -heat_hot(model, config, la), lo, hi, tol, settings.max_iterations
    )
    return _SearchResult(
        x=res.x, value=-res.value, iterations=res.iterations, bracket_hit=res.bracket_hit
    )


def minimize_q1(
    model: SpectrumModel, config: EngineConfig, settings: SearchSettings | None = None
) -> tuple[float, float]:
    """Adiabatic target minimizing the cold heat release; returns (lambda_c_star, q1_star)."""
    res = _search_cold(model, config, settings or SearchSettings())
    return res.x, res.value


def maximize_q2(
    model: SpectrumModel, config: EngineConfig, settings: SearchSettings | None = None
) -> tuple[float, float]:
    """Adiabatic target maximizing the hot heat intake; returns (lambda_a_star, q2_star)."""
    res = _search_hot(model, config, settings or SearchSettings())
    return res.x, res.value


def maximize_efficiency(
    model: SpectrumModel, config: EngineConfig, settings: SearchSettings | None = None
) -> OptimumReport:
    """Compose the two separable searches and verify with a full cycle run.

    Efficiency rises whenever the cold release falls or the hot intake
    rises, so the pair of 1D optima is the joint optimum.
    """
    settings = settings or SearchSettings()
    cold = _search_cold(model, config, settings)
    hot = _search_hot(model, config, settings)
    cycle = run_cycle(model, config, cold.x, hot.x)
    return OptimumReport(
        lambda_c_star=cold.x,
        lambda_a_star=hot.x,
        efficiency_star=cycle.efficiency,
        iterations=(cold.iterations, hot.iterations),
        bracket_hit=(cold.bracket_hit, hot.bracket_hit),
        cycle=cycle,
    )
