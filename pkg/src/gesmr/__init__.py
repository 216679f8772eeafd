"""Black-box optimization with group-elite co-evolution of mutation rates.

A (1+N) genetic algorithm whose per-individual Gaussian mutation rates are
supplied by pluggable controllers: the group co-evolution scheme, per-pair
self-adaptation, the one-fifth rule, a UCB bandit, and fixed baselines, plus
grid-search and look-ahead oracles for reference schedules."""

from .analysis import (DeltaHistogram, MrObjectiveCurves, ScalingCheck,
                       group_size_ablation, log_mr_mse, min_normal_expectation,
                       mr_objective_curves, sample_delta, theorem_scaling_check)
from .controllers import (CONTROLLER_NAMES, GesmrController, GesmrParams,
                          MrController, SamrController, make_controller)
from .engine import (ConfigurationError, EvolutionParams, EvolutionResult,
                     GenerationRecord, Population, TRACE_COLUMNS, evolve)
from .harness import (ComparisonReport, RunConfig, RunOutput, compare,
                      read_trace, run, write_report, write_trace)
from .objectives import (OBJECTIVE_NAMES, Objective, make_mlp_task,
                         make_objective)
from .oracles import (LookaheadPlan, LookaheadResult, MrGrid, default_grid,
                      lamr_run, ofmr_search)
from .rng import RngStreams

__version__ = "0.1.0"

__all__ = [
    "CONTROLLER_NAMES", "ComparisonReport", "ConfigurationError",
    "DeltaHistogram", "EvolutionParams", "EvolutionResult", "GenerationRecord",
    "GesmrController", "GesmrParams", "LookaheadPlan", "LookaheadResult",
    "MrController", "MrGrid", "MrObjectiveCurves", "OBJECTIVE_NAMES",
    "Objective", "Population", "RngStreams", "RunConfig", "RunOutput",
    "ScalingCheck", "TRACE_COLUMNS", "compare", "default_grid",
    "evolve", "group_size_ablation", "lamr_run", "log_mr_mse",
    "make_controller", "make_mlp_task", "make_objective",
    "min_normal_expectation", "mr_objective_curves", "ofmr_search",
    "read_trace", "run", "sample_delta", "theorem_scaling_check",
    "write_report", "write_trace",
]
