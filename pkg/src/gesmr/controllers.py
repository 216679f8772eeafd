"""Online mutation-rate strategies behind one contract: propose a rate per
non-elite individual, then observe the per-individual change in objective
value. Includes the group-elite co-evolution scheme (gesmr and its -avg/-fix
ablations), per-individual self-adaptation (samr), the one-fifth success rule
(15mr), a UCB bandit over a fixed arm set (ucb), and the fixed baselines
(fmr, 1cmr)."""

import math
from dataclasses import dataclass

import numpy as np

from .engine import ConfigurationError
from .rng import MR, RngStreams

CONTROLLER_NAMES = ("gesmr", "gesmr-avg", "gesmr-fix", "samr", "fmr", "1cmr", "15mr", "ucb")


class MrController:
    """Base contract. propose() is read-only; observe() is the only mutator
    and is called once per generation by the single run driver."""

    def initial_rates(self) -> np.ndarray:
        raise NotImplementedError

    def propose(self, gen: int, order: np.ndarray, selected: np.ndarray,
                streams: RngStreams) -> np.ndarray:
        """Rates for non-elite slots 1..N, as an array of length N.

        `order` is the sort permutation applied to the previous population,
        `selected` the parent index (into the sorted population) copied into
        each non-elite slot.
        """
        raise NotImplementedError

    def observe(self, gen: int, deltas: np.ndarray, streams: RngStreams):
        """Receive f(child) - f(parent) per non-elite slot. Returns the
        per-group aggregated deltas when the controller forms groups."""
        return None


# ---------------------------------------------------------------------------
# group-elite co-evolution

@dataclass
class GesmrParams:
    k: int
    eta_sigma: float = 0.5
    tau: float = 2.0
    init_low: float = 1e-2
    init_high: float = 1e2
    aggregation: str = "min"   # "mean" selects rates by average group change
    frozen: bool = False       # keep the initial rate pool for the whole run

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.eta_sigma <= 1.0:
            raise ConfigurationError(f"eta_sigma must be in (0, 1], got {self.eta_sigma}")
        if self.tau <= 1.0:
            raise ConfigurationError(f"meta mutation rate tau must be > 1, got {self.tau}")
        if self.init_low <= 0 or self.init_low > self.init_high:
            raise ConfigurationError(
                f"rate init range must satisfy 0 < low <= high, got ({self.init_low}, {self.init_high})")
        if self.aggregation not in ("min", "mean"):
            raise ConfigurationError(f"aggregation must be 'min' or 'mean', got {self.aggregation!r}")


def gesmr_init(k: int, low: float, high: float) -> np.ndarray:
    """K rates log-uniformly spaced from low to high inclusive; the geometric
    mean of the range when k == 1."""
    if low <= 0:
        raise ValueError(f"rate range must be positive, got low={low}")
    if low > high:
        raise ValueError(f"rate range inverted: ({low}, {high})")
    if k == 1:
        return np.array([math.sqrt(low * high)])
    return np.geomspace(low, high, k)


def group_index(i: int, n: int, k: int) -> int:
    """Group (1-based) of individual i in 1..N: ceil(i * K / N), so group g
    covers indices (g-1)*N/K + 1 .. g*N/K."""
    return -((-i * k) // n)


def gesmr_assign(rates: np.ndarray, i: int, n: int) -> float:
    """Rate for non-elite individual i (1-based)."""
    return float(rates[group_index(i, n, len(rates)) - 1])


def assign_rates(rates: np.ndarray, n: int) -> np.ndarray:
    """Vectorized gesmr_assign over all N non-elite slots."""
    return np.repeat(rates, n // len(rates))


def gesmr_group_deltas(deltas: np.ndarray, k: int, aggregation: str = "min") -> np.ndarray:
    """Aggregate per-individual changes into one score per rate group: the
    best (minimum) change, or the mean under the -avg ablation."""
    deltas = np.asarray(deltas, dtype=float)
    if deltas.shape[0] % k != 0:
        raise RuntimeError(f"{deltas.shape[0]} deltas do not split into {k} groups")
    blocks = deltas.reshape(k, -1)
    if aggregation == "mean":
        return blocks.mean(axis=1)
    return blocks.min(axis=1)


def gesmr_evolve_rates(rates: np.ndarray, group_deltas: np.ndarray, eta_sigma: float,
                       tau: float, rng: np.random.Generator) -> np.ndarray:
    """One rate-population step: keep the rate with the best group change as
    elite, refill the rest from the top l = floor(eta_sigma * K) performers,
    and perturb every non-elite multiplicatively by tau**eps, eps ~ U(-1, 1)."""
    rates = np.asarray(rates, dtype=float)
    k = rates.shape[0]
    if group_deltas.shape != (k,):
        raise RuntimeError(f"need {k} group deltas, got {group_deltas.shape}")
    ranked = rates[np.argsort(group_deltas, kind="stable")]
    top = max(1, math.floor(eta_sigma * k))
    out = np.empty(k)
    out[0] = ranked[0]
    if k > 1:
        picks = rng.integers(0, top, size=k - 1)
        eps = rng.uniform(-1.0, 1.0, size=k - 1)
        out[1:] = ranked[picks] * tau ** eps
    return out


class GesmrController(MrController):
    """Co-evolves K rates with the solutions, scoring each rate by the best
    change its group produced. Groups are contiguous blocks of N/K slots."""

    def __init__(self, n: int, params: GesmrParams):
        if n % params.k != 0:
            raise ConfigurationError(
                f"k={params.k} must divide n={n}; nearest valid k is {nearest_divisor(n, params.k)}")
        self.n = n
        self.params = params
        self.rates = gesmr_init(params.k, params.init_low, params.init_high)

    def initial_rates(self) -> np.ndarray:
        return self.rates.copy()

    def propose(self, gen, order, selected, streams):
        return assign_rates(self.rates, self.n)

    def observe(self, gen, deltas, streams):
        p = self.params
        group_deltas = gesmr_group_deltas(deltas, p.k, p.aggregation)
        if not p.frozen:
            self.rates = gesmr_evolve_rates(self.rates, group_deltas, p.eta_sigma,
                                            p.tau, streams.stream(MR, gen))
        return group_deltas


# ---------------------------------------------------------------------------
# per-individual self-adaptation

@dataclass
class SamrParams:
    tau: float = 2.0
    init_low: float = 1e-2
    init_high: float = 1e2

    def __post_init__(self):
        if self.tau <= 0:
            raise ConfigurationError(f"meta mutation rate tau must be > 0, got {self.tau}")
        if self.init_low <= 0 or self.init_low > self.init_high:
            raise ConfigurationError(
                f"rate init range must satisfy 0 < low <= high, got ({self.init_low}, {self.init_high})")


def samr_step(rates: np.ndarray, order: np.ndarray, selected: np.ndarray, tau: float,
              rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Carry (solution, rate) pairs through sorting and selection, then mutate
    each non-elite rate by tau**eps before it is used on its solution. The
    elite pair keeps its rate.

    Returns (rates aligned with the new population, rates to apply to slots 1..N).
    """
    ranked = np.asarray(rates, dtype=float)[order]
    eps = rng.uniform(-1.0, 1.0, size=selected.shape[0])
    children = ranked[selected] * tau ** eps
    return np.concatenate(([ranked[0]], children)), children


class SamrController(MrController):
    """Each solution owns a rate; pairs evolve jointly under selection."""

    def __init__(self, n: int, params: SamrParams, streams: RngStreams):
        self.n = n
        self.params = params
        g = streams.stream(MR, 0)
        self.rates = np.exp(g.uniform(math.log(params.init_low),
                                      math.log(params.init_high), size=n + 1))

    def initial_rates(self) -> np.ndarray:
        return self.rates.copy()

    def propose(self, gen, order, selected, streams):
        self.rates, applied = samr_step(self.rates, order, selected, self.params.tau,
                                        streams.stream(MR, gen))
        return applied


# ---------------------------------------------------------------------------
# one-fifth success rule

def fifteen_mr_update(sigma: float, beneficial_fraction: float) -> float:
    """Double the rate when more than one fifth of mutations improved the
    objective, halve it otherwise (ties halve)."""
    if not 0.0 <= beneficial_fraction <= 1.0:
        raise ValueError(f"fraction must be in [0, 1], got {beneficial_fraction}")
    return 2.0 * sigma if beneficial_fraction > 0.2 else sigma / 2.0


class FifteenMrController(MrController):
    def __init__(self, n: int, sigma0: float = 1.0):
        if sigma0 <= 0:
            raise ConfigurationError(f"sigma0 must be > 0, got {sigma0}")
        self.n = n
        self.sigma = sigma0

    def initial_rates(self) -> np.ndarray:
        return np.array([self.sigma])

    def propose(self, gen, order, selected, streams):
        return np.full(self.n, self.sigma)

    def observe(self, gen, deltas, streams):
        self.sigma = fifteen_mr_update(self.sigma, float(np.mean(deltas < 0)))
        return None


# ---------------------------------------------------------------------------
# UCB bandit over a fixed arm set

@dataclass
class BanditState:
    arms: np.ndarray        # candidate rates
    pulls: np.ndarray       # times each arm was played
    rewards: np.ndarray     # cumulative normalized reward per arm
    c: float                # exploration coefficient
    total: int = 0
    running_max: float = 0.0


def make_bandit(arms: np.ndarray, c: float) -> BanditState:
    arms = np.asarray(arms, dtype=float)
    if arms.shape[0] < 2:
        raise ConfigurationError(f"bandit needs at least 2 arms, got {arms.shape[0]}")
    return BanditState(arms, np.zeros(arms.shape[0], dtype=int),
                       np.zeros(arms.shape[0]), c)


def ucb_step(state: BanditState) -> int:
    """Arm to play: unplayed arms first in order, then the upper-confidence
    argmax mean + c * sqrt(2 ln T / n_arm)."""
    unplayed = np.nonzero(state.pulls == 0)[0]
    if unplayed.size:
        return int(unplayed[0])
    scores = state.rewards / state.pulls + state.c * np.sqrt(
        2.0 * math.log(state.total) / state.pulls)
    return int(np.argmax(scores))


def ucb_observe(state: BanditState, arm: int, deltas: np.ndarray) -> BanditState:
    """Credit the arm with its best improvement, max(0, -min delta),
    normalized by the best improvement seen so far in the run."""
    raw = max(0.0, -float(np.min(deltas)))
    state.running_max = max(state.running_max, raw)
    reward = raw / state.running_max if state.running_max > 0 else 0.0
    state.pulls[arm] += 1
    state.rewards[arm] += reward
    state.total += 1
    return state


@dataclass
class UcbParams:
    arms: int = 9
    arm_low: float = 1e-4
    arm_high: float = 1e2
    c: float = math.sqrt(2.0)

    def __post_init__(self):
        if self.arms < 2:
            raise ConfigurationError(f"ucb needs at least 2 arms, got {self.arms}")
        if self.arm_low <= 0 or self.arm_low > self.arm_high:
            raise ConfigurationError(
                f"arm range must satisfy 0 < low <= high, got ({self.arm_low}, {self.arm_high})")


class UcbController(MrController):
    def __init__(self, n: int, params: UcbParams):
        self.n = n
        self.state = make_bandit(np.geomspace(params.arm_low, params.arm_high, params.arms),
                                 params.c)
        self._arm: int | None = None

    def initial_rates(self) -> np.ndarray:
        return self.state.arms.copy()

    def propose(self, gen, order, selected, streams):
        self._arm = ucb_step(self.state)
        return np.full(self.n, self.state.arms[self._arm])

    def observe(self, gen, deltas, streams):
        ucb_observe(self.state, self._arm, deltas)
        return None


# ---------------------------------------------------------------------------
# fixed baselines

class FixedRateController(MrController):
    def __init__(self, n: int, sigma: float):
        if sigma <= 0:
            raise ConfigurationError(f"fixed rate must be > 0, got {sigma}")
        self.n = n
        self.sigma = sigma

    def initial_rates(self) -> np.ndarray:
        return np.array([self.sigma])

    def propose(self, gen, order, selected, streams):
        return np.full(self.n, self.sigma)


def fmr(n: int) -> FixedRateController:
    """The conventional fixed rate 0.01."""
    return FixedRateController(n, 0.01)


def one_over_d(n: int, d: int) -> FixedRateController:
    """Fixed rate 1/d, the genotype-length heuristic."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return FixedRateController(n, 1.0 / d)


# ---------------------------------------------------------------------------
# registry

def nearest_divisor(n: int, target: int) -> int:
    divisors = [k for k in range(1, n + 1) if n % k == 0]
    return min(divisors, key=lambda k: (abs(k - target), k))


def default_k(n: int) -> int:
    """round(sqrt(N)) snapped to the nearest divisor of N."""
    return nearest_divisor(n, round(math.sqrt(n)))


def default_params(name: str, n: int, d: int) -> dict:
    """Fully resolved parameter table for the manifest."""
    if name in ("gesmr", "gesmr-avg", "gesmr-fix"):
        p = GesmrParams(k=default_k(n),
                        aggregation="mean" if name == "gesmr-avg" else "min",
                        frozen=name == "gesmr-fix")
        return {"k": p.k, "eta_sigma": p.eta_sigma, "tau": p.tau,
                "init_low": p.init_low, "init_high": p.init_high}
    if name == "samr":
        p = SamrParams()
        return {"tau": p.tau, "init_low": p.init_low, "init_high": p.init_high}
    if name == "fmr":
        return {"sigma": 0.01}
    if name == "1cmr":
        return {"sigma": 1.0 / d}
    if name == "15mr":
        return {"sigma0": 1.0}
    if name == "ucb":
        p = UcbParams()
        return {"arms": p.arms, "arm_low": p.arm_low, "arm_high": p.arm_high, "c": p.c}
    raise ConfigurationError(f"unknown algorithm {name!r}; known: {', '.join(CONTROLLER_NAMES)}")


def make_controller(name: str, n: int, d: int, params: dict | None,
                    streams: RngStreams) -> MrController:
    """Build a controller from its config name and parameter table."""
    table = default_params(name, n, d)
    table.update(params or {})
    if name in ("gesmr", "gesmr-avg", "gesmr-fix"):
        return GesmrController(n, GesmrParams(
            k=int(table["k"]), eta_sigma=table["eta_sigma"], tau=table["tau"],
            init_low=table["init_low"], init_high=table["init_high"],
            aggregation="mean" if name == "gesmr-avg" else "min",
            frozen=name == "gesmr-fix"))
    if name == "samr":
        return SamrController(n, SamrParams(tau=table["tau"], init_low=table["init_low"],
                                            init_high=table["init_high"]), streams)
    if name == "fmr":
        return FixedRateController(n, table["sigma"])
    if name == "1cmr":
        return FixedRateController(n, table["sigma"])
    if name == "15mr":
        return FifteenMrController(n, table["sigma0"])
    if name == "ucb":
        return UcbController(n, UcbParams(arms=int(table["arms"]), arm_low=table["arm_low"],
                                          arm_high=table["arm_high"], c=table["c"]))
    raise ConfigurationError(f"unknown algorithm {name!r}; known: {', '.join(CONTROLLER_NAMES)}")
