"""Figure rendering for the command-line report paths. Every function writes
one PNG next to the delimited output it illustrates; nothing here feeds back
into the algorithms."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _log_elite_axis(ax):
    ax.set_xlabel("generation")
    ax.set_ylabel("elite f")
    ax.grid(True, alpha=0.3)


def plot_run(records_by_seed: dict, path, title: str = ""):
    """Elite value per generation (one line per seed) and the mean log rate."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4))
    for seed, records in sorted(records_by_seed.items()):
        gens = [r.generation for r in records]
        ax0.plot(gens, [r.elite_f for r in records], label=f"seed {seed}", alpha=0.8)
        ax1.plot(gens, [r.mean_log10_mr for r in records], alpha=0.8)
    _log_elite_axis(ax0)
    if all(r.elite_f > 0 for recs in records_by_seed.values() for r in recs):
        ax0.set_yscale("log")
    ax0.legend(fontsize=8)
    ax1.set_xlabel("generation")
    ax1.set_ylabel("mean log10 rate")
    ax1.grid(True, alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_compare(traces_by_label: dict, path, title: str = ""):
    """Median elite curve per algorithm on one axis."""
    fig, ax = plt.subplots(figsize=(6, 4))
    positive = True
    for label, by_seed in traces_by_label.items():
        curves = np.array([[r.elite_f for r in records]
                           for records in by_seed.values()])
        median = np.median(curves, axis=0)
        gens = np.arange(median.shape[0])
        ax.plot(gens, median, label=label)
        positive = positive and bool(np.all(median > 0))
    if positive:
        ax.set_yscale("log")
    _log_elite_axis(ax)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_ofmr(grid: np.ndarray, medians: np.ndarray, best: float, path, title: str = ""):
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(grid, medians, marker="o")
    ax.axvline(best, color="tab:red", ls="--", label=f"best = {best:g}")
    ax.set_xscale("log")
    ax.set_xlabel("fixed mutation rate")
    ax.set_ylabel("median final elite f")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_lamr(results_by_seed: dict, path, title: str = ""):
    """Chosen rate schedule (steps) and the elite curve it produced."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4))
    for seed, res in sorted(results_by_seed.items()):
        gens = np.arange(1, res.sigmas.shape[0] + 1)
        ax0.step(gens, res.sigmas, where="post", label=f"seed {seed}", alpha=0.8)
        ax1.plot([r.generation for r in res.records],
                 [r.elite_f for r in res.records], alpha=0.8)
    ax0.set_yscale("log")
    ax0.set_xlabel("generation")
    ax0.set_ylabel("chosen rate")
    ax0.grid(True, alpha=0.3)
    ax0.legend(fontsize=8)
    _log_elite_axis(ax1)
    if all(r.elite_f > 0 for res in results_by_seed.values() for r in res.records):
        ax1.set_yscale("log")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_delta_curves(hist, curves, path, title: str = ""):
    """Histogram heatmap of the objective change per rate, next to the
    mean / best-of-q / worst-of-q curves with their minimizers marked."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4))
    log_sigma = np.log10(hist.sigma_grid)
    extent = (log_sigma[0], log_sigma[-1], hist.bin_edges[0], hist.bin_edges[-1])
    with np.errstate(divide="ignore"):
        shaded = np.log10(hist.counts.T + 1)
    ax0.imshow(shaded, origin="lower", aspect="auto", extent=extent, cmap="viridis")
    ax0.set_xlabel("log10 rate")
    ax0.set_ylabel("delta")
    ax0.set_title("log count")

    ax1.plot(hist.sigma_grid, curves.mean_delta, label="mean")
    ax1.plot(hist.sigma_grid, curves.min_q_delta, label=f"best of {hist.q}")
    ax1.plot(hist.sigma_grid, curves.max_q_delta, label=f"worst of {hist.q}")
    ax1.axvline(curves.best_mean_sigma, color="tab:blue", ls=":", alpha=0.7)
    ax1.axvline(curves.best_min_q_sigma, color="tab:orange", ls=":", alpha=0.7)
    ax1.axhline(0.0, color="gray", lw=0.8)
    ax1.set_xscale("log")
    ax1.set_xlabel("rate")
    ax1.set_ylabel("delta")
    ax1.grid(True, alpha=0.3)
    ax1.legend(fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_theorem(check, path, title: str = ""):
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(check.sigmas, check.normalized, marker="o", label="estimate / rate")
    ax.axhline(float(np.mean(check.normalized)), color="tab:red", ls="--",
               label="mean")
    ax.set_xscale("log")
    ax.set_xlabel("rate")
    ax.set_ylabel("E[min of q] / rate")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_ablation(rows, path, title: str = ""):
    fig, ax = plt.subplots(figsize=(5, 4))
    ks = [row.k for row in rows]
    medians = [row.median_final for row in rows]
    ax.plot(ks, medians, marker="o")
    ax.set_xscale("log", base=2)
    if all(m > 0 for m in medians):
        ax.set_yscale("log")
    ax.set_xlabel("rate groups")
    ax.set_ylabel("median final elite f")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
