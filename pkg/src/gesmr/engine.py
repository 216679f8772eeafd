"""Core GA loop: fitness sorting, truncation selection with one elite, and
Gaussian mutation with a per-individual rate supplied by a pluggable
controller. No crossover. Exactly N objective evaluations per generation;
the elite's cached value is reused."""

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import INIT, MUTATE, SELECT, RngStreams


class ConfigurationError(ValueError):
    """Invalid run setup (bad pool sizes, unknown names, empty parent pool)."""


@dataclass
class EvolutionParams:
    n: int                  # population is n + 1 vectors, one of them the elite
    eta_x: float = 0.5      # top fraction eligible as parents
    generations: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"population size n must be >= 1, got {self.n}")
        if not 0.0 < self.eta_x <= 1.0:
            raise ConfigurationError(f"eta_x must be in (0, 1], got {self.eta_x}")
        if math.floor(self.eta_x * self.n) < 1:
            raise ConfigurationError(
                f"eta_x * n = {self.eta_x * self.n:.3f} floors to an empty parent pool")
        if self.generations < 0:
            raise ConfigurationError(f"generations must be >= 0, got {self.generations}")


@dataclass
class Population:
    """N+1 candidate vectors with cached objective values (values=None means stale)."""

    members: np.ndarray          # (n + 1, d)
    values: np.ndarray | None    # (n + 1,), aligned with members
    generation: int = 0

    @property
    def n(self) -> int:
        return self.members.shape[0] - 1

    def copy(self) -> "Population":
        values = None if self.values is None else self.values.copy()
        return Population(self.members.copy(), values, self.generation)


@dataclass
class GenerationRecord:
    generation: int
    elite_f: float
    mean_f: float
    mean_log10_mr: float
    min_mr: float
    max_mr: float
    cum_evals: int
    group_deltas: tuple | None = None  # per-group best improvements, when applicable

    def row(self) -> tuple:
        return (self.generation, self.elite_f, self.mean_f, self.mean_log10_mr,
                self.min_mr, self.max_mr, self.cum_evals)


TRACE_COLUMNS = ("generation", "elite_f", "mean_f", "mean_log10_mr",
                 "min_mr", "max_mr", "cum_evals")


def init_population(obj, n: int, init_std: float, streams: RngStreams) -> Population:
    members = init_std * streams.stream(INIT).standard_normal((n + 1, obj.dim))
    values = obj.evaluate_batch(members)
    return Population(members, values, 0)


def sort_by_fitness(pop: Population) -> tuple[Population, np.ndarray]:
    """Reorder ascending by cached value, stable for ties.

    Returns the sorted population and the permutation applied (new slot i held
    position order[i] before), which rate controllers with per-individual
    state need to stay aligned.
    """
    if pop.values is None:
        raise RuntimeError("population values are stale; evaluate before sorting")
    order = np.argsort(pop.values, kind="stable")
    return Population(pop.members[order], pop.values[order], pop.generation), order


def truncation_select(sorted_pop: Population, eta_x: float, rng: np.random.Generator
                      ) -> tuple[Population, np.ndarray]:
    """Elite copied unaltered into slot 0; slots 1..N drawn uniformly with
    replacement from the top m = floor(eta_x * N) of the sorted input.

    Returns the parent population and the chosen indices for slots 1..N.
    """
    n = sorted_pop.n
    m = math.floor(eta_x * n)
    if m < 1:
        raise ConfigurationError(f"parent pool is empty: floor({eta_x} * {n}) == 0")
    selected = rng.integers(0, m, size=n)
    idx = np.concatenate(([0], selected))
    return Population(sorted_pop.members[idx].copy(), sorted_pop.values[idx].copy(),
                      sorted_pop.generation), selected


def gaussian_mutate(x: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """x + sigma * eps with eps ~ N(0, I)."""
    if sigma < 0:
        raise ValueError(f"mutation rate must be >= 0, got {sigma}")
    x = np.asarray(x, dtype=float)
    return x + sigma * rng.standard_normal(x.shape[0])


def _summary(record_gen: int, pop: Population, sigmas: np.ndarray, cum_evals: int,
             group_deltas=None) -> GenerationRecord:
    return GenerationRecord(
        generation=record_gen,
        elite_f=float(np.min(pop.values)),
        mean_f=float(np.mean(pop.values)),
        mean_log10_mr=float(np.mean(np.log10(sigmas))),
        min_mr=float(np.min(sigmas)),
        max_mr=float(np.max(sigmas)),
        cum_evals=cum_evals,
        group_deltas=group_deltas,
    )


def ga_step(pop: Population, params: EvolutionParams, controller, obj,
            streams: RngStreams, cum_evals: int) -> tuple[Population, GenerationRecord]:
    """Advance one generation: sort, select, mutate non-elites with the
    controller's rates, evaluate the N children, report per-individual
    improvements back to the controller."""
    gen = pop.generation + 1
    sorted_pop, order = sort_by_fitness(pop)
    parents, selected = truncation_select(sorted_pop, params.eta_x,
                                          streams.stream(SELECT, gen))
    sigmas = np.asarray(controller.propose(gen, order, selected, streams), dtype=float)
    if sigmas.shape != (params.n,):
        raise RuntimeError(f"controller proposed {sigmas.shape} rates, expected ({params.n},)")

    children = parents.members  # elite row already a copy; non-elite rows overwritten
    d = children.shape[1]
    for i in range(1, params.n + 1):
        eps = streams.stream(MUTATE, gen, i).standard_normal(d)
        children[i] = children[i] + sigmas[i - 1] * eps

    child_values = obj.evaluate_batch(children[1:])
    values = np.concatenate(([parents.values[0]], child_values))
    deltas = child_values - parents.values[1:]
    group_deltas = controller.observe(gen, deltas, streams)

    new_pop = Population(children, values, gen)
    record = _summary(gen, new_pop, sigmas, cum_evals + params.n,
                      None if group_deltas is None else tuple(group_deltas))
    return new_pop, record


@dataclass
class EvolutionResult:
    records: list
    population: Population
    evaluations: int

    @property
    def final_elite(self) -> float:
        return self.records[-1].elite_f


def evolve(obj, params: EvolutionParams, controller, init_std: float = 1.0,
           start: Population | None = None) -> EvolutionResult:
    """Run a full seeded evolution and return the per-generation trace.

    `start` clones an existing population (values reused, no re-evaluation),
    which look-ahead oracles use to simulate futures.
    """
    streams = RngStreams(params.seed)
    if start is None:
        pop = init_population(obj, params.n, init_std, streams)
        evals = params.n + 1
    else:
        if start.values is None:
            raise RuntimeError("start population has stale values")
        pop = Population(start.members.copy(), start.values.copy(), 0)
        evals = 0

    records = [_summary(0, pop, controller.initial_rates(), evals)]
    for _ in range(params.generations):
        pop, record = ga_step(pop, params, controller, obj, streams, evals)
        evals = record.cum_evals
        records.append(record)
    return EvolutionResult(records, pop, evals)
