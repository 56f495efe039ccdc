"""Quick-look matplotlib figures rendered alongside the delimited output.

These read the CSV artifacts of a finished run directory, never the in-memory
solver state, so they share the file contract with any external plotting tool.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def _load_snapshot_stack(snap_dir: Path, column: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    files = sorted(snap_dir.glob("t_*.csv"))
    if not files:
        raise FileNotFoundError(f"no snapshot files in {snap_dir}")
    times, rows = [], []
    x = None
    for f in files:
        times.append(float(f.stem[2:]))
        with open(f) as fh:
            reader = csv.DictReader(fh)
            data = [(float(r["x"]), float(r[column])) for r in reader]
        if x is None:
            x = np.array([d[0] for d in data])
        rows.append([d[1] for d in data])
    return x, np.array(times), np.array(rows)


def plot_density_contour(run_dir: str | Path, out_path: str | Path,
                         x_range: tuple[float, float] = (-300.0, 300.0)) -> Path:
    """(x, t) filled contour of the density from a run's snapshot CSVs."""
    run_dir, out_path = Path(run_dir), Path(out_path)
    x, t, dens = _load_snapshot_stack(run_dir / "snapshots", "density")
    sel = (x >= x_range[0]) & (x <= x_range[1])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    pcm = ax.pcolormesh(x[sel], t, dens[:, sel], cmap="viridis", shading="auto")
    fig.colorbar(pcm, ax=ax, label=r"$|\psi|^2$")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_difference_contour(run_dir: str | Path, out_path: str | Path,
                            x_range: tuple[float, float] = (-300.0, 300.0)) -> Path:
    """(x, t) contour of |analytic - numeric| density from difference CSVs."""
    run_dir, out_path = Path(run_dir), Path(out_path)
    diff_dir = run_dir / "difference"
    if not diff_dir.is_dir():
        raise FileNotFoundError(f"run {run_dir} has no reference comparison")
    x, t, diff = _load_snapshot_stack(diff_dir, "density_diff")
    sel = (x >= x_range[0]) & (x <= x_range[1])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    pcm = ax.pcolormesh(x[sel], t, np.abs(diff[:, sel]), cmap="magma", shading="auto")
    fig.colorbar(pcm, ax=ax, label="|density error|")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_error_scan(run_dir: str | Path, out_path: str | Path) -> Path:
    """Log-log error-vs-epsilon plot with a fitted slope when >= 3 points."""
    run_dir, out_path = Path(run_dir), Path(out_path)
    scan = run_dir / "errorscan.csv"
    if not scan.is_file():
        raise FileNotFoundError(f"{scan} not found")
    eps, err = [], []
    with open(scan) as fh:
        for row in csv.DictReader(fh):
            eps.append(float(row["epsilon"]))
            err.append(float(row["l2_error"]))
    if not eps:
        raise ValueError(f"{scan} holds no rows")
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.loglog(eps, err, "o", color="tab:blue")
    if len(eps) >= 3:
        slope, intercept = np.polyfit(np.log(eps), np.log(err), 1)
        fit = np.exp(intercept) * np.asarray(eps) ** slope
        ax.loglog(eps, fit, "--", color="tab:gray", label=f"slope {slope:.2f}")
        ax.legend()
    ax.set_xlabel(r"$\epsilon$")
    ax.set_ylabel(r"$L^2$ error")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_run_figures(run_dir: str | Path) -> list[Path]:
    """Render every figure the run's artifacts support, next to the CSVs."""
    run_dir = Path(run_dir)
    made = []
    if (run_dir / "snapshots").is_dir():
        made.append(plot_density_contour(run_dir, run_dir / "density.png"))
    if (run_dir / "difference").is_dir():
        made.append(plot_difference_contour(run_dir, run_dir / "difference.png"))
    if (run_dir / "errorscan.csv").is_file():
        made.append(plot_error_scan(run_dir, run_dir / "errorscan.png"))
    return made
