"""Golden-section search tests.

A value-comparison search can only pin the argmin of a smooth function to
the quadratic noise basin sqrt(2 eps |Q| / Q''), about 2e-8 for the cold
target and 2e-7 for the (much flatter) hot target here.  Argmin assertions
therefore use 5x-basin absolute tolerances, while function-value assertions
stay at full precision: the heats are flat to O(eps) across the basin.
"""

import numpy as np
import pytest

from sixstroke import (
    EngineConfig,
    SearchSettings,
    SpectrumModel,
    heat_cold,
    heat_hot,
    maximize_efficiency,
    maximize_q2,
    minimize_q1,
    run_cycle,
    zeroth_order_lambdas,
)

# frozen optimizer output on the reference engine (argmins carry basin noise)
LAMBDA_C_STAR_REF = 0.47377134370898270
LAMBDA_A_STAR_REF = 6.0319876382797989
ETA_STAR_REF = 0.49998910836870966
ETA_AT_ZEROTH_REF = 0.49977999593130688


def test_settings_validation():
    with pytest.raises(ValueError):
        SearchSettings(bracket_halfwidth=1.0)
    with pytest.raises(ValueError):
        SearchSettings(bracket_halfwidth=0.0)
    with pytest.raises(ValueError):
        SearchSettings(tolerance=0.0)
    with pytest.raises(ValueError):
        SearchSettings(max_iterations=0)


def test_iteration_budget_is_enforced(ref_model, ref_engine):
    with pytest.raises(RuntimeError, match="iterations"):
        minimize_q1(
            ref_model, ref_engine, SearchSettings(tolerance=1e-12, max_iterations=5)
        )


def test_undeformed_search_recovers_the_matched_targets(ref_engine):
    model0 = SpectrumModel.from_text("n + 1", "(n + 1)^2", alpha=0.0, levels=5)
    lc, _ = minimize_q1(model0, ref_engine)
    la, _ = maximize_q2(model0, ref_engine)
    lc0, la0 = zeroth_order_lambdas(ref_engine)
    assert lc == pytest.approx(lc0, abs=1e-7)
    assert la == pytest.approx(la0, abs=1e-6)


def test_two_level_search_finds_the_gap_matched_closed_form(ref_engine):
    # one gap: lambda_c* = (b2/b1)(lam_b df + a dg)/df - a dg/df, exactly
    model2 = SpectrumModel.from_text("n + 1", "(n + 1)^2", alpha=0.01, levels=2)
    d_f, d_g = 1.0, 3.0
    a = model2.alpha
    lc_exact = 0.5 * (ref_engine.lambda_b * d_f + a * d_g) / d_f - a * d_g / d_f
    la_exact = 2.0 * (ref_engine.lambda_d * d_f + a * d_g) / d_f - a * d_g / d_f

    report = maximize_efficiency(model2, ref_engine)
    assert report.lambda_c_star == pytest.approx(lc_exact, abs=3e-7)
    assert report.lambda_a_star == pytest.approx(la_exact, abs=7e-7)
    # the heats are quadratically flat at the optimum, so the cycle values
    # carry full precision even though the argmins cannot
    assert report.efficiency_star == pytest.approx(0.5, abs=1e-12)
    assert report.cycle.ds_total_cold == pytest.approx(0.0, abs=1e-13)
    assert report.cycle.ds_total_hot == pytest.approx(0.0, abs=1e-13)


def test_search_beats_a_dense_grid(ref_model, ref_engine):
    lc, q1_star = minimize_q1(ref_model, ref_engine)
    grid = np.linspace(0.25, 0.75, 2001)
    values = [heat_cold(ref_model, ref_engine, x) for x in grid]
    best = int(np.argmin(values))
    step = grid[1] - grid[0]
    assert abs(lc - grid[best]) <= 2 * step
    assert q1_star <= values[best] + 1e-14

    la, q2_star = maximize_q2(ref_model, ref_engine)
    grid = np.linspace(3.0, 9.0, 2001)
    values = [heat_hot(ref_model, ref_engine, x) for x in grid]
    best = int(np.argmax(values))
    step = grid[1] - grid[0]
    assert abs(la - grid[best]) <= 2 * step
    assert q2_star >= values[best] - 1e-14


def test_reported_values_are_reevaluations(ref_model, ref_engine):
    lc, q1_star = minimize_q1(ref_model, ref_engine)
    assert q1_star == heat_cold(ref_model, ref_engine, lc)
    la, q2_star = maximize_q2(ref_model, ref_engine)
    assert q2_star == heat_hot(ref_model, ref_engine, la)


def test_composed_report_frozen_values(ref_model, ref_engine):
    report = maximize_efficiency(ref_model, ref_engine)
    assert report.lambda_c_star == pytest.approx(LAMBDA_C_STAR_REF, abs=1e-7)
    assert report.lambda_a_star == pytest.approx(LAMBDA_A_STAR_REF, abs=1e-6)
    assert report.efficiency_star == pytest.approx(ETA_STAR_REF, rel=1e-13)
    assert report.iterations[0] > 20 and report.iterations[1] > 20
    assert report.bracket_hit == (False, False)
    # the two 1-d searches are separable; composing them is the joint optimum
    lc, _ = minimize_q1(ref_model, ref_engine)
    la, _ = maximize_q2(ref_model, ref_engine)
    assert report.lambda_c_star == lc and report.lambda_a_star == la
    # consistency of the verification cycle
    assert report.efficiency_star == report.cycle.efficiency


def test_optimization_improves_on_the_unshifted_targets(ref_model, ref_engine):
    lc0, la0 = zeroth_order_lambdas(ref_engine)
    base = run_cycle(ref_model, ref_engine, lc0, la0)
    report = maximize_efficiency(ref_model, ref_engine)
    assert base.efficiency == pytest.approx(ETA_AT_ZEROTH_REF, rel=1e-13)
    assert report.efficiency_star > base.efficiency
    # and any hand-picked nearby operating point does no better
    for dc, da in [(0.01, 0.0), (-0.01, 0.0), (0.0, 0.05), (0.01, -0.05)]:
        other = run_cycle(
            ref_model, ref_engine, report.lambda_c_star + dc, report.lambda_a_star + da
        )
        assert other.efficiency <= report.efficiency_star + 1e-14


def test_wide_offset_bracket_flags_an_edge_hit(ref_model):
    # pushing the true optimum onto the bracket edge must be reported
    config = EngineConfig(t_cold=1.0, t_hot=2.0, lambda_b=1.0, lambda_d=3.0)
    settings = SearchSettings(bracket_halfwidth=0.005)
    report = maximize_efficiency(ref_model, config, settings)
    # the optimal shift (~ -0.026) lies outside a 0.005-halfwidth bracket
    assert report.bracket_hit[0] is True
