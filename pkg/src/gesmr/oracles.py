"""Oracle baselines that spend extra evaluations to locate good mutation
rates: a grid search over full fixed-rate runs (ofmr) and a periodic
look-ahead that races short fixed-rate futures from the live population
(lamr). Both are upper-bound references, not usable online strategies."""

import math
from dataclasses import dataclass, field

import numpy as np

from .controllers import FixedRateController
from .engine import (ConfigurationError, EvolutionParams, EvolutionResult,
                     GenerationRecord, Population, _summary, evolve, ga_step,
                     init_population)
from .objectives import Objective
from .rng import RngStreams


@dataclass
class MrGrid:
    """Ascending positive candidate rates."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.shape[0] < 1:
            raise ConfigurationError("rate grid must be a non-empty 1-d array")
        if np.any(self.values <= 0):
            raise ConfigurationError("rate grid must be strictly positive")
        if np.any(np.diff(self.values) <= 0):
            raise ConfigurationError("rate grid must be strictly ascending")

    def __len__(self):
        return self.values.shape[0]


def default_grid(points: int = 9, low: float = 1e-4, high: float = 1e2) -> MrGrid:
    return MrGrid(np.geomspace(low, high, points))


@dataclass
class LookaheadPlan:
    period: int              # re-select every this many generations
    repeats: int = 3         # racing futures per grid point
    grid: MrGrid = field(default_factory=default_grid)

    def __post_init__(self):
        if self.period < 1:
            raise ConfigurationError(f"look-ahead period must be >= 1, got {self.period}")
        if self.repeats < 1:
            raise ConfigurationError(f"look-ahead repeats must be >= 1, got {self.repeats}")


# ---------------------------------------------------------------------------
# full-run grid search

def ofmr_search(grid: MrGrid, obj: Objective, params: EvolutionParams,
                seeds: tuple[int, ...], init_std: float = 1.0):
    """Run the fixed-rate GA once per (grid point, seed) and pick the rate
    with the best median final elite value. Ties break toward the smaller
    rate (first grid index).

    Returns (best sigma, {sigma: [EvolutionResult per seed]}, median array).
    """
    if not seeds:
        raise ConfigurationError("ofmr needs at least one seed")
    traces: dict[float, list[EvolutionResult]] = {}
    medians = np.empty(len(grid))
    for gi, sigma in enumerate(grid.values):
        runs = []
        for seed in seeds:
            p = EvolutionParams(n=params.n, eta_x=params.eta_x,
                                generations=params.generations, seed=seed)
            runs.append(evolve(obj, p, FixedRateController(p.n, float(sigma)),
                               init_std=init_std))
        traces[float(sigma)] = runs
        medians[gi] = float(np.median([r.final_elite for r in runs]))
    best = float(grid.values[int(np.argmin(medians))])
    return best, traces, medians


# ---------------------------------------------------------------------------
# periodic look-ahead from the live population

def lamr_choose(pop: Population, obj: Objective, params: EvolutionParams,
                plan: LookaheadPlan, streams: RngStreams, round_index: int):
    """Race plan.repeats fixed-rate futures of plan.period generations per
    grid point, all cloned from `pop`, and pick the rate with the best mean
    final elite. Ties break toward the smaller rate.

    Returns (chosen sigma, evaluations spent looking ahead).
    """
    means = np.empty(len(plan.grid))
    cost = 0
    for gi, sigma in enumerate(plan.grid.values):
        finals = np.empty(plan.repeats)
        for r in range(plan.repeats):
            seed = streams.spawn_seed(round_index, gi * plan.repeats + r)
            p = EvolutionParams(n=params.n, eta_x=params.eta_x,
                                generations=plan.period, seed=seed)
            res = evolve(obj, p, FixedRateController(p.n, float(sigma)), start=pop)
            finals[r] = res.final_elite
            cost += res.evaluations
        means[gi] = float(finals.mean())
    return float(plan.grid.values[int(np.argmin(means))]), cost


@dataclass
class LookaheadResult:
    records: list[GenerationRecord]
    sigmas: np.ndarray          # sigma applied at each generation 1..G_total
    population: Population
    evaluations: int            # evaluations spent advancing the real run
    lookahead_evals: int        # evaluations spent inside look-ahead futures

    @property
    def final_elite(self) -> float:
        return float(np.min(self.population.values))


def lamr_run(obj: Objective, params: EvolutionParams, plan: LookaheadPlan,
             init_std: float = 1.0) -> LookaheadResult:
    """Fixed-rate GA whose rate is re-chosen by look-ahead every plan.period
    generations. The rate chosen at generation t applies to generations
    t .. t+period-1; the t=0 record reports the first chosen rate."""
    streams = RngStreams(params.seed)
    pop = init_population(obj, params.n, init_std, streams)
    evals = pop.n + 1
    lookahead = 0

    sigma, cost = lamr_choose(pop, obj, params, plan, streams, 0)
    lookahead += cost
    controller = FixedRateController(params.n, sigma)

    records = [_summary(0, pop, controller.initial_rates(), evals)]
    sigmas = np.empty(params.generations)
    for t in range(1, params.generations + 1):
        if t > 1 and (t - 1) % plan.period == 0:
            sigma, cost = lamr_choose(pop, obj, params, plan, streams,
                                      (t - 1) // plan.period)
            lookahead += cost
            controller = FixedRateController(params.n, sigma)
        sigmas[t - 1] = sigma
        pop, record = ga_step(pop, params, controller, obj, streams, evals)
        evals = record.cum_evals
        records.append(record)
    return LookaheadResult(records, sigmas, pop, evals, lookahead)
