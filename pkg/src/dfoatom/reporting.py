"""Run outputs: CSV evaluation traces, JSON reports, and rendered figures.

Trace CSVs are the reproducibility artifact: given the same config and seed
they are bit-identical. Figures are rendered next to them (convergence of the
running best value, and the running-best parameter components).
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .core import OptResult

SCHEMA_VERSION = 1
CSV_FORMAT = "%.17g"


def write_trace_csv(path: Path, result: OptResult) -> None:
    dim = result.best_x.size
    header = "eval_index,f,best_f," + ",".join(f"x_{i + 1}" for i in range(dim))
    lines = [header]
    for i, rec in enumerate(result.trace, start=1):
        nums = [rec.f, rec.best_f, *rec.x]
        lines.append(f"{i}," + ",".join(CSV_FORMAT % v for v in nums))
    path.write_text("\n".join(lines) + "\n")


def write_report_json(path: Path, result: OptResult, config: dict, wall_seconds: float) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "best_x": [float(v) for v in result.best_x],
        "best_f": result.best_f,
        "n_evals": result.n_evals,
        "n_iterations": result.n_iterations,
        "termination": result.termination,
        "wall_seconds": wall_seconds,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _running_best_x(result: OptResult) -> np.ndarray:
    out = np.empty((len(result.trace), result.best_x.size))
    best_f = np.inf
    best_x = result.trace[0].x
    for i, rec in enumerate(result.trace):
        if rec.f < best_f:
            best_f, best_x = rec.f, rec.x
        out[i] = best_x
    return out


def render_convergence(path: Path, result: OptResult, title: str) -> None:
    best = np.array([rec.best_f for rec in result.trace])
    idx = np.arange(1, best.size + 1)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if np.all(best > 0.0):
        ax.semilogy(idx, best, lw=1.2)
    else:
        ax.plot(idx, best, lw=1.2)
    ax.set_xlabel("evaluation")
    ax.set_ylabel("best objective value")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_parameters(path: Path, result: OptResult, title: str) -> None:
    xs = _running_best_x(result)
    idx = np.arange(1, xs.shape[0] + 1)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for j in range(xs.shape[1]):
        ax.plot(idx, xs[:, j], lw=1.0, label=f"x{j + 1}")
    ax.set_xlabel("evaluation")
    ax.set_ylabel("running-best parameter value")
    ax.set_title(title)
    if xs.shape[1] <= 10:
        ax.legend(fontsize=7, ncol=2)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def write_run_outputs(
    out_dir: Path,
    label: str,
    result: OptResult,
    config: dict,
    wall_seconds: float,
    plot: bool = True,
) -> dict[str, Path]:
    """Write report, trace, and figures for one run; returns the paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": out_dir / f"{label}.json",
        "trace": out_dir / f"{label}_trace.csv",
    }
    write_report_json(paths["report"], result, config, wall_seconds)
    write_trace_csv(paths["trace"], result)
    if plot:
        paths["convergence"] = out_dir / f"{label}_convergence.png"
        paths["parameters"] = out_dir / f"{label}_parameters.png"
        render_convergence(paths["convergence"], result, label)
        render_parameters(paths["parameters"], result, label)
    return paths


class RunTimer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start
        return False
