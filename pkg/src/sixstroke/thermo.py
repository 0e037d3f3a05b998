"""Statistical mechanics primitives for finite level sets.

Boltzmann's constant is 1 throughout, so temperatures carry energy units
and entropy is dimensionless.  Populations are plain probability vectors
over the levels; every routine validates normalization rather than
trusting the caller.
"""

from __future__ import annotations

import numpy as np
from scipy.special import rel_entr, xlogy

__all__ = [
    "log_partition",
    "boltzmann_populations",
    "mean_energy",
    "gibbs_entropy",
    "weighted_mean",
    "inner_product",
    "total_entropy_production",
    "entropy_production_to_boltzmann",
    "entropy_production_quadratic",
]

_NORM_TOL = 1e-12


def _as_levels(levels) -> np.ndarray:
    arr = np.asarray(levels, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("levels must be a non-empty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("levels must be finite")
    return arr


def _as_populations(populations, name: str = "populations") -> np.ndarray:
    arr = np.asarray(populations, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be non-negative")
    total = float(arr.sum())
    if abs(total - 1.0) > _NORM_TOL:
        raise ValueError(f"{name} must sum to 1, got {total!r}")
    return arr


def _check_same_length(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")


def log_partition(levels, beta: float) -> float:
    """log Z = log sum_n exp(-beta E_n), via a max-shifted exponential sum.

    The shift keeps the sum finite for arbitrarily large ``beta * E_n``;
    the result is exact up to rounding for any finite level set.
    """
    arr = _as_levels(levels)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    logw = -beta * arr
    shift = float(logw.max())
    return shift + float(np.log(np.exp(logw - shift).sum()))


def boltzmann_populations(levels, beta: float) -> np.ndarray:
    """Equilibrium populations p_n = exp(-beta E_n) / Z.

    Computed from max-shifted log weights, then renormalized, so entries
    are exactly non-negative and sum to 1 up to a few ulp even when the
    spread ``beta * (E_max - E_min)`` is in the hundreds.
    """
    arr = _as_levels(levels)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    logw = -beta * arr
    p = np.exp(logw - logw.max())
    p /= p.sum()
    return p


def mean_energy(levels, populations) -> float:
    """Population-weighted mean of the level energies."""
    arr = _as_levels(levels)
    p = _as_populations(populations)
    _check_same_length(arr, p)
    return float(p @ arr)


def gibbs_entropy(populations) -> float:
    """S = -sum_n p_n log p_n, with the p log p -> 0 limit at p = 0."""
    p = _as_populations(populations)
    return float(-np.sum(xlogy(p, p)))


def weighted_mean(populations, observable) -> float:
    """Expectation of an arbitrary level observable."""
    p = _as_populations(populations)
    obs = np.asarray(observable, dtype=float)
    _check_same_length(p, obs)
    return float(p @ obs)


def inner_product(populations, obs1, obs2) -> float:
    """Covariance form <O1|O2> = sum_n p_n (O1_n - <O1>)(O2_n - <O2>).

    Positive semi-definite in either argument, so it obeys the
    Cauchy-Schwarz inequality <O1|O2>^2 <= <O1|O1><O2|O2>.  The centered
    evaluation avoids the cancellation the raw-moment form suffers.
    """
    p = _as_populations(populations)
    o1 = np.asarray(obs1, dtype=float)
    o2 = np.asarray(obs2, dtype=float)
    _check_same_length(p, o1)
    _check_same_length(p, o2)
    m1 = float(p @ o1)
    m2 = float(p @ o2)
    return float(np.sum(p * (o1 - m1) * (o2 - m2)))


def total_entropy_production(pre, eq) -> float:
    """Entropy produced when ``pre`` relaxes to equilibrium ``eq``.

    Equals the relative entropy sum_n pre_n log(pre_n / eq_n), which is
    the reservoir-plus-system entropy change of the relaxation and is
    non-negative, vanishing only at pre = eq.
    """
    p = _as_populations(pre, "pre")
    q = _as_populations(eq, "eq")
    _check_same_length(p, q)
    return float(np.sum(rel_entr(p, q)))


def entropy_production_to_boltzmann(pre, levels, beta: float, log_z=None) -> float:
    """Entropy produced when ``pre`` relaxes to the Boltzmann state at ``beta``.

    Matches ``total_entropy_production(pre, boltzmann_populations(levels,
    beta))`` wherever the equilibrium weights are representable, but stays
    finite when a weight underflows to an exact zero under a huge
    ``beta * E_n``: those terms use log q_n = -beta E_n - log Z directly,
    which remains in range long after q_n itself has left it.
    """
    p = _as_populations(pre, "pre")
    arr = _as_levels(levels)
    _check_same_length(p, arr)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    q = boltzmann_populations(arr, beta)
    terms = rel_entr(p, q)
    underflowed = (q == 0.0) & (p > 0.0)
    if underflowed.any():
        if log_z is None:
            log_z = log_partition(arr, beta)
        idx = np.nonzero(underflowed)[0]
        terms[idx] = p[idx] * (np.log(p[idx]) + beta * arr[idx] + log_z)
    return float(terms.sum())


def entropy_production_quadratic(delta_p, eq) -> float:
    """Leading small-deviation approximation (1/2) sum_n delta_p_n^2 / eq_n."""
    q = _as_populations(eq, "eq")
    d = np.asarray(delta_p, dtype=float)
    _check_same_length(d, q)
    if not np.all(np.isfinite(d)):
        raise ValueError("delta_p must be finite")
    if abs(float(d.sum())) > _NORM_TOL:
        raise ValueError(f"delta_p must sum to 0, got {float(d.sum())!r}")
    if np.any(q <= 0):
        raise ValueError("equilibrium populations must be strictly positive")
    return float(0.5 * np.sum(d * d / q))
