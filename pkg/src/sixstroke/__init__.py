"""Numerical laboratory for six-stroke quantum Carnot engines.

Simulates the cycle exactly over finite discrete spectra, implements the
second-order perturbative efficiency theory around the scale-invariant
engine, and cross-validates the two.
"""

from .cycle import (
    CycleReport,
    EngineConfig,
    NonequilibriumState,
    NotAnEngineError,
    ThermalState,
    TruncationWarning,
    UnphysicalConfigError,
    adiabatic_stroke,
    check_scale_invariance,
    heat_cold,
    heat_cold_by_strokes,
    heat_hot,
    heat_hot_by_strokes,
    relaxation_stroke,
    run_cycle,
    thermal_state,
)
from .optimizer import OptimumReport, SearchSettings, maximize_efficiency, maximize_q2, minimize_q1
from .perturbation import (
    ExpansionContext,
    MomentSet,
    PerturbativeReport,
    build_context,
    carnot_efficiency,
    first_order_efficiency_check,
    optimal_first_order_shifts,
    optimized_efficiency,
    q1_expansion,
    q2_expansion,
    zeroth_order_lambdas,
)
from .spectrum import (
    DegenerateSpectrumError,
    EvaluationError,
    ExpressionError,
    LevelExpr,
    SpectrumModel,
    energy_levels,
    eval_levels,
    expr_to_text,
    parse_level_expr,
    perturbation_ratio,
)
from .sweep import CSV_COLUMNS, SweepAxis, SweepCell, SweepSpec, run_sweep, sweep_csv
from .thermo import (
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

__version__ = "0.1.0"
