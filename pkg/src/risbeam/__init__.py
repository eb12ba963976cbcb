"""Discrete RIS beamforming with phase-dependent amplitude and a limited phase range."""

__version__ = "0.1.0"

from .core import (
    BeamformingSolution,
    ChannelInstance,
    CoefficientSet,
    PdaProfile,
    PhaseShiftSet,
    Regime,
    build_coefficient_set,
    build_phase_set,
    check_local_convexity,
    pda_gain,
    received_power,
    snr_boost,
    uniform_threshold,
    wrap_angle,
)
from .search import (
    BoundarySet,
    BudgetExceeded,
    algorithm1_optimize,
    boundary_offsets,
    build_boundary_schedule,
    exhaustive_search,
    lemma1_assign,
    sweep_trace,
)
from .quantize import IdealSolution, apq_assign, apq_solve, eapq_assign, eapq_solve, ideal_phases
from .analysis import (
    RatioReport,
    approx_ratio_continuous,
    approx_ratio_limited,
    approx_ratio_uniform,
    limited_pmf,
    loss_db_decomposition,
)
from .experiments import (
    ChannelModelConfig,
    ExperimentResult,
    cdf,
    generate_channel,
    percentile,
    run_monte_carlo,
)
