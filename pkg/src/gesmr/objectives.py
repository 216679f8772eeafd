"""Objective functions: classic continuous test functions plus a small MLP
regression task. All are deterministic minimization targets over R^d."""

from dataclasses import dataclass

import numpy as np

from .rng import DATA, RngStreams

TEST_FUNCTION_NAMES = ("sphere", "ackley", "griewank", "rastrigin", "rosenbrock", "linear")
OBJECTIVE_NAMES = TEST_FUNCTION_NAMES + ("mlp",)


def _sphere(xs: np.ndarray) -> np.ndarray:
    return np.sum(xs * xs, axis=1)


def _ackley(xs: np.ndarray) -> np.ndarray:
    a, b, c = 20.0, 0.2, 2.0 * np.pi
    d = xs.shape[1]
    s1 = np.sum(xs * xs, axis=1)
    s2 = np.sum(np.cos(c * xs), axis=1)
    return -a * np.exp(-b * np.sqrt(s1 / d)) - np.exp(s2 / d) + a + np.e


def _griewank(xs: np.ndarray) -> np.ndarray:
    i = np.arange(1, xs.shape[1] + 1, dtype=float)
    return 1.0 + np.sum(xs * xs, axis=1) / 4000.0 - np.prod(np.cos(xs / np.sqrt(i)), axis=1)


def _rastrigin(xs: np.ndarray) -> np.ndarray:
    d = xs.shape[1]
    return 10.0 * d + np.sum(xs * xs - 10.0 * np.cos(2.0 * np.pi * xs), axis=1)


def _rosenbrock(xs: np.ndarray) -> np.ndarray:
    head, tail = xs[:, :-1], xs[:, 1:]
    return np.sum(100.0 * (tail - head**2) ** 2 + (1.0 - head) ** 2, axis=1)


def _linear(xs: np.ndarray) -> np.ndarray:
    return np.sum(xs, axis=1)


_BATCH_FNS = {
    "sphere": _sphere,
    "ackley": _ackley,
    "griewank": _griewank,
    "rastrigin": _rastrigin,
    "rosenbrock": _rosenbrock,
    "linear": _linear,
}


class Objective:
    """A named function f: R^d -> R, lower is better.

    Immutable after construction; safe to evaluate concurrently.
    """

    def __init__(self, name: str, dim: int, kind: str, batch_fn):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.name = name
        self.dim = dim
        self.kind = kind
        self._batch_fn = batch_fn

    def evaluate(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"{self.name} expects a vector of length {self.dim}, got shape {x.shape}")
        return float(self._batch_fn(x[None, :])[0])

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != self.dim:
            raise ValueError(f"{self.name} expects rows of length {self.dim}, got shape {xs.shape}")
        return np.asarray(self._batch_fn(xs), dtype=float)

    def __repr__(self):
        return f"Objective({self.name!r}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class MlpTaskSpec:
    """Fixed-topology tanh network plus the dataset it is scored on.

    Weights are stored row-major per layer as (fan_out, fan_in), followed by
    that layer's biases; layers in input-to-output order. Hidden activations
    are tanh, the output is linear, and the score is mean squared error.
    """

    layer_sizes: tuple
    inputs: np.ndarray   # (n_points, layer_sizes[0])
    targets: np.ndarray  # (n_points, layer_sizes[-1])

    @property
    def param_count(self) -> int:
        sizes = self.layer_sizes
        return sum(sizes[i + 1] * sizes[i] + sizes[i + 1] for i in range(len(sizes) - 1))


def mlp_forward(spec: MlpTaskSpec, params: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    if params.shape != (spec.param_count,):
        raise ValueError(f"expected {spec.param_count} parameters, got shape {params.shape}")
    h = np.asarray(inputs, dtype=float)
    offset = 0
    sizes = spec.layer_sizes
    last = len(sizes) - 2
    for layer in range(len(sizes) - 1):
        fan_in, fan_out = sizes[layer], sizes[layer + 1]
        w = params[offset:offset + fan_out * fan_in].reshape(fan_out, fan_in)
        offset += fan_out * fan_in
        b = params[offset:offset + fan_out]
        offset += fan_out
        h = h @ w.T + b
        if layer != last:
            h = np.tanh(h)
    return h


def mlp_evaluate(spec: MlpTaskSpec, params: np.ndarray) -> float:
    """Mean squared error of the network described by `params` on the dataset."""
    out = mlp_forward(spec, params, spec.inputs)
    return float(np.mean((out - spec.targets) ** 2))


def make_mlp_task(seed: int, layer_sizes=(2, 8, 1), points_per_cluster: int = 32) -> MlpTaskSpec:
    """Noisy two-cluster regression set, deterministic in the seed."""
    g = RngStreams(seed).stream(DATA)
    centers = np.array([[-1.0, -1.0], [1.0, 1.0]])
    labels = np.array([-1.0, 1.0])
    inputs, targets = [], []
    for center, label in zip(centers, labels):
        inputs.append(center + 0.4 * g.standard_normal((points_per_cluster, 2)))
        targets.append(label + 0.1 * g.standard_normal((points_per_cluster, 1)))
    return MlpTaskSpec(tuple(layer_sizes), np.vstack(inputs), np.vstack(targets))


class MlpObjective(Objective):
    def __init__(self, spec: MlpTaskSpec):
        self.spec = spec
        super().__init__("mlp", spec.param_count, "mlp_task", self._batch)

    def _batch(self, xs: np.ndarray) -> np.ndarray:
        return np.array([mlp_evaluate(self.spec, row) for row in xs])


def make_objective(name: str, dim: int | None = None, seed: int = 0) -> Objective:
    """Build an objective by config name. `seed` only matters for the MLP task."""
    key = name.lower()
    if key in _BATCH_FNS:
        if dim is None:
            raise ValueError(f"objective {name!r} requires a dimension")
        return Objective(key, int(dim), key, _BATCH_FNS[key])
    if key in ("mlp", "mlp_task"):
        spec = make_mlp_task(seed)
        obj = MlpObjective(spec)
        if dim is not None and dim != obj.dim:
            raise ValueError(f"mlp task has {obj.dim} parameters, config says dim={dim}")
        return obj
    raise ValueError(f"unknown objective {name!r}; known: {', '.join(OBJECTIVE_NAMES)}")
