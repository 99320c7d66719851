"""Render experiment tables to figure files.

Figures are a convenience layer over the CSV tables (which remain the
stable interface); every plotting function takes the row dicts a runner
produced and writes one PNG.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_convergence",
    "plot_sinr_sweep",
    "plot_complexity",
    "plot_oracle_compare",
]

_METHOD_LABELS = {
    "ce": "cross-entropy",
    "exhaustive": "exhaustive search",
    "successive_refinement": "successive refinement",
    "random": "best of random",
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_convergence(rows, path):
    """Best-so-far transmit power versus iteration, one curve per S."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for s in sorted({r["num_candidates"] for r in rows}):
        sub = [r for r in rows if r["num_candidates"] == s]
        iterations = [r["iteration"] for r in sub]
        mean = np.array([r["mean_power_dbm"] for r in sub])
        std = np.array([r["std_power_dbm"] for r in sub])
        ax.plot(iterations, mean, label=f"S = {s}")
        ax.fill_between(iterations, mean - std, mean + std, alpha=0.15)
    ax.set_xlabel("iteration")
    ax.set_ylabel("transmit power (dBm)")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_sinr_sweep(rows, path):
    """Mean transmit power versus SINR target, one curve per method."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for method in dict.fromkeys(r["method"] for r in rows):
        sub = [r for r in rows if r["method"] == method]
        gammas = [r["gamma_db"] for r in sub]
        mean = [r["mean_power_dbm"] for r in sub]
        ax.plot(gammas, mean, marker="o", label=_METHOD_LABELS.get(method, method))
    ax.set_xlabel("SINR target (dB)")
    ax.set_ylabel("transmit power (dBm)")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_complexity(rows, path):
    """Model operation counts versus element count, log-scaled."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for bits in sorted({r["phase_bits"] for r in rows}):
        sub = sorted(
            (r for r in rows if r["phase_bits"] == bits), key=lambda r: r["num_irs_elements"]
        )
        n = [r["num_irs_elements"] for r in sub]
        ax.plot(n, [r["ce_model_ops"] for r in sub], marker="o", label=f"cross-entropy (Q={bits})")
        ax.plot(
            n,
            [r["sr_model_ops"] for r in sub],
            marker="s",
            linestyle="--",
            label=f"successive refinement (Q={bits})",
        )
    ax.set_xlabel("IRS elements")
    ax.set_ylabel("operations (model)")
    ax.set_yscale("log")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    return _save(fig, path)


def plot_oracle_compare(rows, path):
    """Per-trial power gap of the search against the exhaustive optimum."""
    gaps = sorted(r["gap_db"] for r in rows)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(np.arange(1, len(gaps) + 1) / len(gaps), gaps, where="post")
    ax.set_xlabel("fraction of trials")
    ax.set_ylabel("gap to exhaustive optimum (dB)")
    ax.grid(alpha=0.3)
    return _save(fig, path)
