"""Partition function, populations, entropy and inner-product tests.

Expected values are frozen from a 50-digit arbitrary-precision run of the
routines in oracles.py.
"""

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from sixstroke.thermo import (
    boltzmann_populations,
    entropy_production_quadratic,
    entropy_production_to_boltzmann,
    gibbs_entropy,
    inner_product,
    log_partition,
    mean_energy,
    total_entropy_production,
    weighted_mean,
)

# frozen two-level references: levels [1, 2] at beta = 1
LOG_Z_12 = -0.68673831248177717
POPS_12 = (0.73105857863000488, 0.26894142136999512)
MEAN_E_12 = 1.2689414213699951
# relative entropy of (0.6, 0.4) against (0.5, 0.5)
REL_ENT_64_55 = 0.020135513550688873

_levels = st.lists(
    st.floats(min_value=-50.0, max_value=50.0, allow_nan=False), min_size=2, max_size=8
)
_betas = st.floats(min_value=0.01, max_value=10.0)
_weights = st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=2, max_size=8)


def _normalized(weights):
    arr = np.asarray(weights, dtype=float)
    return arr / arr.sum()


# ---------------------------------------------------------------------------
# partition function and populations


def test_log_partition_two_level_value():
    assert log_partition([1.0, 2.0], 1.0) == pytest.approx(LOG_Z_12, rel=1e-15)


def test_log_partition_survives_large_offsets():
    # identical gaps, offset by 999: log Z shifts by exactly -beta * 999
    assert log_partition([1000.0, 1001.0], 1.0) == pytest.approx(
        LOG_Z_12 - 999.0, rel=1e-15
    )
    # spread of hundreds in beta*E must not overflow
    assert np.isfinite(log_partition([0.0, 700.0], 1.0))


def test_boltzmann_two_level_values():
    np.testing.assert_allclose(boltzmann_populations([1.0, 2.0], 1.0), POPS_12, rtol=1e-15)
    assert mean_energy([1.0, 2.0], POPS_12) == pytest.approx(MEAN_E_12, rel=1e-15)


@given(_levels, _betas, st.floats(min_value=-100.0, max_value=100.0))
def test_log_partition_shift_rule(levels, beta, shift):
    # log Z(E + c) = log Z(E) - beta c
    base = log_partition(levels, beta)
    shifted = log_partition(np.asarray(levels) + shift, beta)
    assert shifted == pytest.approx(base - beta * shift, rel=1e-12, abs=1e-12)


@given(_levels, _betas)
def test_log_partition_matches_high_precision_route(levels, beta):
    expected = float(oracles.log_partition(levels, beta))
    assert log_partition(levels, beta) == pytest.approx(expected, rel=1e-13, abs=1e-13)


@given(_levels, _betas)
def test_populations_normalized_and_ordered(levels, beta):
    arr = np.asarray(levels, dtype=float)
    p = boltzmann_populations(arr, beta)
    assert np.all(p >= 0)
    assert p.sum() == pytest.approx(1.0, abs=1e-13)
    # lower level never less populated
    i, j = int(np.argmin(arr)), int(np.argmax(arr))
    assert p[i] >= p[j]


@given(_levels, _betas)
def test_gibbs_identity_at_equilibrium(levels, beta):
    # S(p_eq) = beta <E> + log Z
    p = boltzmann_populations(levels, beta)
    lhs = gibbs_entropy(p)
    rhs = beta * mean_energy(levels, p) + log_partition(levels, beta)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_entropy_bounds():
    assert gibbs_entropy([1.0, 0.0]) == 0.0
    assert gibbs_entropy([0.25] * 4) == pytest.approx(np.log(4.0), rel=1e-15)


# ---------------------------------------------------------------------------
# inner product


@given(_weights, _levels, _levels)
def test_inner_product_symmetric_and_shift_invariant(weights, obs1, obs2):
    size = min(len(weights), len(obs1), len(obs2))
    assume(size >= 2)
    p = _normalized(weights[:size])
    o1 = np.asarray(obs1[:size])
    o2 = np.asarray(obs2[:size])
    scale = max(1.0, float(np.max(np.abs(o1))), float(np.max(np.abs(o2)))) ** 2
    fwd = inner_product(p, o1, o2)
    assert fwd == pytest.approx(inner_product(p, o2, o1), abs=1e-12 * scale)
    assert inner_product(p, o1 + 7.5, o2) == pytest.approx(fwd, abs=1e-10 * scale)


@given(_weights, _levels, _levels)
def test_inner_product_cauchy_schwarz(weights, obs1, obs2):
    size = min(len(weights), len(obs1), len(obs2))
    assume(size >= 2)
    p = _normalized(weights[:size])
    o1 = np.asarray(obs1[:size])
    o2 = np.asarray(obs2[:size])
    lhs = inner_product(p, o1, o2) ** 2
    rhs = inner_product(p, o1, o1) * inner_product(p, o2, o2)
    scale = max(1.0, float(np.max(np.abs(o1))), float(np.max(np.abs(o2)))) ** 4
    assert lhs <= rhs + 1e-12 * scale


def test_inner_product_is_a_covariance():
    p = np.array([0.2, 0.3, 0.5])
    obs = np.array([1.0, 4.0, -2.0])
    assert inner_product(p, obs, obs) == pytest.approx(
        np.sum(p * obs**2) - np.sum(p * obs) ** 2, rel=1e-13
    )
    assert weighted_mean(p, obs) == pytest.approx(0.4, rel=1e-14)


# ---------------------------------------------------------------------------
# relaxation entropy production


def test_relative_entropy_frozen_value():
    assert total_entropy_production([0.6, 0.4], [0.5, 0.5]) == pytest.approx(
        REL_ENT_64_55, rel=1e-15
    )


@given(_weights, _weights)
def test_relative_entropy_non_negative_and_faithful(pre_w, eq_w):
    size = min(len(pre_w), len(eq_w))
    assume(size >= 2)
    pre = _normalized(pre_w[:size])
    eq = _normalized(eq_w[:size])
    ds = total_entropy_production(pre, eq)
    assert ds >= 0.0
    assert total_entropy_production(pre, pre) == pytest.approx(0.0, abs=1e-15)


@given(_levels, _betas, _weights)
def test_relaxation_splits_into_system_and_bath_terms(levels, beta, pre_w):
    # D(pre || eq) = (S_eq - S_pre) + beta (<E>_pre - <E>_eq) for Boltzmann eq
    size = min(len(levels), len(pre_w))
    assume(size >= 2)
    arr = np.asarray(levels[:size])
    pre = _normalized(pre_w[:size])
    eq = boltzmann_populations(arr, beta)
    lhs = total_entropy_production(pre, eq)
    rhs = (gibbs_entropy(eq) - gibbs_entropy(pre)) + beta * (
        mean_energy(arr, pre) - mean_energy(arr, eq)
    )
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@given(levels=_levels, beta=_betas, pre_w=_weights)
def test_boltzmann_route_matches_generic_route(levels, beta, pre_w):
    size = min(len(levels), len(pre_w))
    assume(size >= 2)
    arr = np.asarray(levels[:size])
    pre = _normalized(pre_w[:size])
    eq = boltzmann_populations(arr, beta)
    assume(np.all(eq > 0))
    via_eq = total_entropy_production(pre, eq)
    via_log = entropy_production_to_boltzmann(pre, arr, beta)
    assert via_log == via_eq  # identical path while no weight underflows


def test_boltzmann_route_survives_underflowed_weights():
    # beta * gap = 2000: the upper equilibrium weight is an exact float zero,
    # yet the relative entropy against it is finite and modest
    levels = np.array([0.0, 2000.0])
    pre = np.array([0.9, 0.1])
    assert boltzmann_populations(levels, 1.0)[1] == 0.0
    with np.errstate(divide="ignore"):
        assert np.isinf(
            total_entropy_production(pre, boltzmann_populations(levels, 1.0))
        )
    got = entropy_production_to_boltzmann(pre, levels, 1.0)
    expected = float(
        oracles.relative_entropy([0.9, 0.1], oracles.populations([0, 2000], 1))
    )
    assert got == pytest.approx(expected, rel=1e-13)


def test_quadratic_form_matches_exact_for_small_deviations():
    rng = np.random.default_rng(7)
    eq = boltzmann_populations(np.arange(5.0), 0.3)
    delta = rng.uniform(-1.0, 1.0, 5) * 1e-5
    delta -= delta.mean()
    exact = total_entropy_production(eq + delta, eq)
    quad = entropy_production_quadratic(delta, eq)
    assert exact == pytest.approx(quad, rel=1e-4)


def test_quadratic_form_validates_inputs():
    eq = np.array([0.5, 0.5])
    with pytest.raises(ValueError):
        entropy_production_quadratic([1e-3, 1e-3], eq)  # does not sum to zero
    with pytest.raises(ValueError):
        entropy_production_quadratic([1e-3, -1e-3], [1.0, 0.0])  # zero entry


def test_population_validation():
    with pytest.raises(ValueError):
        mean_energy([1.0, 2.0], [0.7, 0.7])  # not normalized
    with pytest.raises(ValueError):
        gibbs_entropy([1.2, -0.2])  # negative entry
    with pytest.raises(ValueError):
        log_partition([1.0, 2.0], 0.0)  # beta must be positive
    with pytest.raises(ValueError):
        log_partition([np.inf, 0.0], 1.0)
