"""Measurement utilities around the mutation operator: the distribution of
the objective change delta = f(x + sigma * eps) - f(x) across a rate grid,
Monte-Carlo estimates of the expected minimum of q Gaussian draws and its
linear-in-sigma scaling, distance between rate schedules in log space, and a
group-count ablation for the co-evolution controller."""

import math
from dataclasses import dataclass

import numpy as np

from .controllers import GesmrController, GesmrParams
from .engine import ConfigurationError, EvolutionParams, evolve
from .objectives import Objective
from .rng import SAMPLE, RngStreams

# E[min of two independent standard normals]
EXPECTED_MIN_OF_TWO = -1.0 / math.sqrt(math.pi)


@dataclass
class DeltaHistogram:
    """Per-rate histogram of objective changes plus summary curves.

    counts[i] histograms the deltas observed at sigma_grid[i] over shared
    bin edges; every row sums to `samples`. The min/max curves average the
    extreme of disjoint blocks of q deltas, estimating the change kept by
    the best (worst) of q children sharing one rate.
    """

    sigma_grid: np.ndarray   # (s,)
    bin_edges: np.ndarray    # (bins + 1,)
    counts: np.ndarray       # (s, bins) ints
    mean_delta: np.ndarray   # (s,)
    min_q_delta: np.ndarray  # (s,)
    max_q_delta: np.ndarray  # (s,)
    q: int
    samples: int


def sample_delta(obj: Objective, x_source, sigma_grid: np.ndarray, samples: int,
                 q: int, seed: int, bins: int = 64) -> DeltaHistogram:
    """Sample delta = f(x + sigma * eps) - f(x), eps ~ N(0, I), for every
    rate on the grid.

    x_source is either a fixed point (1-d array) or a scalar std, in which
    case x ~ N(0, std^2 I) is redrawn per sample. Each rate uses its own
    stream keyed by grid index, so adding grid points never changes the
    deltas of existing ones.
    """
    sigma_grid = np.asarray(sigma_grid, dtype=float)
    if sigma_grid.ndim != 1 or sigma_grid.shape[0] < 1:
        raise ValueError("sigma grid must be a non-empty 1-d array")
    if np.any(sigma_grid < 0):
        raise ValueError("sigma grid must be non-negative")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if samples < 1 or samples % q != 0:
        raise ValueError(f"samples must be a positive multiple of q, got {samples}")

    streams = RngStreams(seed)
    fixed_x = isinstance(x_source, np.ndarray)
    if fixed_x:
        x0 = np.asarray(x_source, dtype=float)
        if x0.shape != (obj.dim,):
            raise ValueError(f"fixed point has shape {x0.shape}, objective wants ({obj.dim},)")
        f0 = obj.evaluate(x0)

    s = sigma_grid.shape[0]
    deltas = np.empty((s, samples))
    for i, sigma in enumerate(sigma_grid):
        g = streams.stream(SAMPLE, i)
        if fixed_x:
            x = np.broadcast_to(x0, (samples, obj.dim))
            fx = np.full(samples, f0)
        else:
            x = float(x_source) * g.standard_normal((samples, obj.dim))
            fx = obj.evaluate_batch(x)
        eps = g.standard_normal((samples, obj.dim))
        deltas[i] = obj.evaluate_batch(x + sigma * eps) - fx

    lo, hi = float(deltas.min()), float(deltas.max())
    if lo == hi:  # degenerate spread still needs valid edges
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    counts = np.empty((s, bins), dtype=int)
    for i in range(s):
        counts[i], _ = np.histogram(deltas[i], bins=edges)

    blocks = deltas.reshape(s, samples // q, q)
    return DeltaHistogram(
        sigma_grid=sigma_grid,
        bin_edges=edges,
        counts=counts,
        mean_delta=deltas.mean(axis=1),
        min_q_delta=blocks.min(axis=2).mean(axis=1),
        max_q_delta=blocks.max(axis=2).mean(axis=1),
        q=q,
        samples=samples,
    )


@dataclass
class MrObjectiveCurves:
    """Delta-vs-rate curves with the rate minimizing each one (first grid
    point wins ties)."""

    sigma_grid: np.ndarray
    mean_delta: np.ndarray
    min_q_delta: np.ndarray
    max_q_delta: np.ndarray
    best_mean_sigma: float
    best_min_q_sigma: float


def mr_objective_curves(hist: DeltaHistogram) -> MrObjectiveCurves:
    return MrObjectiveCurves(
        sigma_grid=hist.sigma_grid,
        mean_delta=hist.mean_delta,
        min_q_delta=hist.min_q_delta,
        max_q_delta=hist.max_q_delta,
        best_mean_sigma=float(hist.sigma_grid[int(np.argmin(hist.mean_delta))]),
        best_min_q_sigma=float(hist.sigma_grid[int(np.argmin(hist.min_q_delta))]),
    )


def min_normal_expectation(q: int, sigma: float, samples: int,
                           rng: np.random.Generator) -> float:
    """Monte-Carlo E[min of q iid N(0, sigma^2) draws], chunked to bound
    memory at large sample counts."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    chunk = 1 << 17
    total = 0.0
    done = 0
    while done < samples:
        rows = min(chunk, samples - done)
        draws = sigma * rng.standard_normal((rows, q))
        total += float(draws.min(axis=1).sum())
        done += rows
    return total / samples


@dataclass
class ScalingCheck:
    sigmas: np.ndarray
    estimates: np.ndarray     # E[min of q] per sigma
    normalized: np.ndarray    # estimates / sigmas
    spread: float             # (max - min) / |mean| of the normalized values
    all_negative: bool
    passed: bool


def theorem_scaling_check(q: int, sigmas, samples: int, seed: int,
                          tolerance: float = 0.02) -> ScalingCheck:
    """Verify the expected best-of-q change under pure Gaussian noise is
    negative and scales linearly with sigma: estimates of E[min_q]/sigma
    should agree across sigmas to within `tolerance` relative spread."""
    sigmas = np.asarray(sigmas, dtype=float)
    if sigmas.ndim != 1 or sigmas.shape[0] < 2:
        raise ValueError("need at least 2 sigmas to check scaling")
    if np.any(sigmas <= 0):
        raise ValueError("sigmas must be strictly positive")
    streams = RngStreams(seed)
    estimates = np.array([
        min_normal_expectation(q, float(s), samples, streams.stream(SAMPLE, i))
        for i, s in enumerate(sigmas)])
    normalized = estimates / sigmas
    spread = float((normalized.max() - normalized.min()) / abs(normalized.mean()))
    all_negative = bool(np.all(estimates < 0))
    return ScalingCheck(sigmas, estimates, normalized, spread, all_negative,
                        all_negative and spread <= tolerance)


def log_mr_mse(a, b) -> float:
    """Mean squared difference of two rate schedules in log10 space."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.shape[0] < 1:
        raise ValueError(f"schedules must be equal-length 1-d arrays, got {a.shape} and {b.shape}")
    if np.any(a <= 0) or np.any(b <= 0):
        raise ValueError("rate schedules must be strictly positive")
    return float(np.mean((np.log10(a) - np.log10(b)) ** 2))


@dataclass
class AblationRow:
    k: int
    finals: tuple          # final elite per seed
    median_final: float


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def group_size_ablation(obj: Objective, n: int, generations: int,
                        seeds: tuple[int, ...], ks: tuple[int, ...] | None = None,
                        eta_x: float = 0.5, init_std: float = 1.0) -> list[AblationRow]:
    """Final elite value of the group co-evolution controller across group
    counts, default every divisor of n, median over seeds."""
    if not seeds:
        raise ConfigurationError("ablation needs at least one seed")
    if ks is None:
        ks = tuple(divisors(n))
    else:
        ks = tuple(int(k) for k in ks)
        for k in ks:
            if n % k != 0:
                raise ConfigurationError(f"k={k} must divide n={n}")
    rows = []
    for k in ks:
        finals = []
        for seed in seeds:
            params = EvolutionParams(n=n, eta_x=eta_x, generations=generations, seed=seed)
            controller = GesmrController(n, GesmrParams(k=k))
            finals.append(evolve(obj, params, controller, init_std=init_std).final_elite)
        rows.append(AblationRow(k=k, finals=tuple(finals),
                                median_final=float(np.median(finals))))
    return rows
