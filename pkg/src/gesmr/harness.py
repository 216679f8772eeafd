"""Config-driven experiment runner. A run is (objective, algorithm, sizes,
seeds) resolved into explicit parameters, executed once per seed, and written
as one delimited trace per seed plus a manifest echoing the full resolved
config. Identical configs produce byte-identical outputs regardless of how
many workers execute the seeds."""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .analysis import log_mr_mse
from .controllers import CONTROLLER_NAMES, default_params, make_controller
from .engine import (ConfigurationError, EvolutionParams, GenerationRecord,
                     TRACE_COLUMNS, evolve)
from .objectives import make_objective
from .rng import RngStreams

ORACLE_ALGORITHMS = ("ofmr", "lamr")


@dataclass
class RunConfig:
    objective: str
    dim: int | None
    algorithm: str
    n: int
    generations: int
    seeds: tuple[int, ...]
    init_std: float = 1.0
    eta_x: float = 0.5
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "dim": self.dim,
            "algorithm": self.algorithm,
            "n": self.n,
            "generations": self.generations,
            "seeds": list(self.seeds),
            "init_std": self.init_std,
            "eta_x": self.eta_x,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {"objective", "dim", "algorithm", "n", "generations", "seeds",
                 "init_std", "eta_x", "params"}
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"unknown config keys: {sorted(extra)}")
        missing = {"objective", "algorithm", "n", "generations", "seeds"} - set(d)
        if missing:
            raise ConfigurationError(f"config missing keys: {sorted(missing)}")
        return cls(
            objective=d["objective"],
            dim=d.get("dim"),
            algorithm=d["algorithm"],
            n=int(d["n"]),
            generations=int(d["generations"]),
            seeds=tuple(int(s) for s in d["seeds"]),
            init_std=float(d.get("init_std", 1.0)),
            eta_x=float(d.get("eta_x", 0.5)),
            params=dict(d.get("params", {})),
        )

    def resolved(self) -> "RunConfig":
        """Fill every defaulted parameter and validate names and sizes.

        The returned config is what the manifest echoes: rerunning from the
        manifest reproduces the run exactly.
        """
        if not self.seeds:
            raise ConfigurationError("config needs at least one seed")
        if self.algorithm not in CONTROLLER_NAMES:
            raise ConfigurationError(
                f"unknown algorithm {self.algorithm!r}; known: {', '.join(CONTROLLER_NAMES)}")
        try:
            obj = make_objective(self.objective, self.dim, seed=self.seeds[0])
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
        table = default_params(self.algorithm, self.n, obj.dim)
        table.update(self.params)
        probe = replace(self, dim=obj.dim, params=table)
        # construction performs the remaining validation (divisibility, ranges)
        make_controller(probe.algorithm, probe.n, obj.dim, table, RngStreams(0))
        EvolutionParams(n=probe.n, eta_x=probe.eta_x,
                        generations=probe.generations, seed=self.seeds[0])
        return probe


def _seed_job(config_dict: dict, seed: int):
    config = RunConfig.from_dict(config_dict)
    obj = make_objective(config.objective, config.dim, seed=seed)
    params = EvolutionParams(n=config.n, eta_x=config.eta_x,
                             generations=config.generations, seed=seed)
    controller = make_controller(config.algorithm, config.n, obj.dim,
                                 config.params, RngStreams(seed))
    result = evolve(obj, params, controller, init_std=config.init_std)
    return seed, result.records


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("GESMR_WORKERS", "1"))
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    return workers


@dataclass
class RunOutput:
    out_dir: Path
    manifest: dict
    records: dict[int, list[GenerationRecord]]


def run(config: RunConfig, out_dir, workers: int | None = None) -> RunOutput:
    """Execute the config once per seed and write manifest.json plus
    trace_seed<seed>.csv files. The worker count (GESMR_WORKERS when not
    given) only affects wall time, never the bytes written."""
    config = config.resolved()
    workers = resolve_workers(workers)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    cd = config.to_dict()
    if workers > 1 and len(config.seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(_seed_job, [cd] * len(config.seeds), config.seeds))
    else:
        results = dict(_seed_job(cd, s) for s in config.seeds)

    manifest = dict(cd)
    write_manifest(out_dir / "manifest.json", manifest)
    for seed in config.seeds:
        write_trace(out_dir / f"trace_seed{seed}.csv", results[seed])
    return RunOutput(out_dir, manifest, results)


# ---------------------------------------------------------------------------
# file formats

def write_manifest(path, manifest: dict):
    Path(path).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())


def _cell(value) -> str:
    # repr round-trips doubles exactly, keeping reruns byte-identical
    return repr(float(value))


def write_trace(path, records: list[GenerationRecord]):
    lines = [",".join(TRACE_COLUMNS)]
    for r in records:
        lines.append(",".join([
            str(r.generation), _cell(r.elite_f), _cell(r.mean_f),
            _cell(r.mean_log10_mr), _cell(r.min_mr), _cell(r.max_mr),
            str(r.cum_evals)]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path) -> list[GenerationRecord]:
    lines = Path(path).read_text().splitlines()
    if not lines or tuple(lines[0].split(",")) != TRACE_COLUMNS:
        raise ValueError(f"{path} is not a trace file")
    records = []
    for line in lines[1:]:
        g, ef, mf, mlm, mn, mx, ce = line.split(",")
        records.append(GenerationRecord(int(g), float(ef), float(mf), float(mlm),
                                        float(mn), float(mx), int(ce)))
    return records


# ---------------------------------------------------------------------------
# cross-run comparison

@dataclass
class ReportRow:
    algorithm: str
    seed: str               # seed number, or "median" for the aggregate row
    final_elite: float
    mean_elite: float       # mean of the elite column over every generation
    rate_mse: float | None  # log-space MSE against the reference schedule
    oracle: bool


@dataclass
class ComparisonReport:
    rows: list[ReportRow]
    reference: str | None


def _trace_paths(run_dir: Path) -> dict[int, Path]:
    paths = {}
    for p in sorted(run_dir.glob("trace_seed*.csv")):
        paths[int(p.stem.removeprefix("trace_seed"))] = p
    if not paths:
        raise ValueError(f"no trace files in {run_dir}")
    return paths


def compare(run_dirs, reference_dir=None) -> ComparisonReport:
    """Summarize runs side by side: final and mean elite value per seed plus
    a median row per run. With a reference directory (a look-ahead or grid
    oracle run), adds the seed-paired MSE between each run's mean log rate
    schedule and the reference's."""
    ref_traces = None
    ref_name = None
    if reference_dir is not None:
        reference_dir = Path(reference_dir)
        ref_manifest = read_manifest(reference_dir / "manifest.json")
        ref_name = ref_manifest["algorithm"]
        ref_traces = {s: read_trace(p) for s, p in _trace_paths(reference_dir).items()}

    rows = []
    for run_dir in run_dirs:
        run_dir = Path(run_dir)
        manifest = read_manifest(run_dir / "manifest.json")
        name = manifest["algorithm"]
        oracle = name in ORACLE_ALGORITHMS
        finals, means, mses = [], [], []
        for seed, path in sorted(_trace_paths(run_dir).items()):
            records = read_trace(path)
            elite = np.array([r.elite_f for r in records])
            final, mean = float(elite[-1]), float(elite.mean())
            mse = None
            if ref_traces is not None:
                if seed not in ref_traces:
                    raise ValueError(f"reference has no trace for seed {seed}")
                ref = ref_traces[seed]
                if len(ref) != len(records):
                    raise ValueError(
                        f"seed {seed}: run has {len(records)} records, reference {len(ref)}")
                a = 10.0 ** np.array([r.mean_log10_mr for r in records])
                b = 10.0 ** np.array([r.mean_log10_mr for r in ref])
                mse = log_mr_mse(a, b)
                mses.append(mse)
            finals.append(final)
            means.append(mean)
            rows.append(ReportRow(name, str(seed), final, mean, mse, oracle))
        rows.append(ReportRow(
            name, "median", float(np.median(finals)), float(np.median(means)),
            float(np.median(mses)) if mses else None, oracle))
    return ComparisonReport(rows, ref_name)


REPORT_COLUMNS = ("algorithm", "seed", "final_elite", "mean_elite", "rate_mse", "oracle")


def write_report(path, report: ComparisonReport):
    lines = [",".join(REPORT_COLUMNS)]
    for r in report.rows:
        mse = "" if r.rate_mse is None else _cell(r.rate_mse)
        lines.append(",".join([r.algorithm, r.seed, _cell(r.final_elite),
                               _cell(r.mean_elite), mse, str(int(r.oracle))]))
    Path(path).write_text("\n".join(lines) + "\n")
