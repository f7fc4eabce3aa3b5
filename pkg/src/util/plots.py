"""
Figures rendered from experiment CSV artifacts
"""
import logging
from pathlib import Path
from typing import List, Optional, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns

from src.util.artifacts import experiment_dirs

logger = logging.getLogger(__name__)

sns.set_style("whitegrid")
plt.rcParams['figure.figsize'] = [12, 8]
plt.rcParams['font.size'] = 12

Chart = Tuple[str, str]


def _slug(*parts: str) -> str:
    return "__".join(("root" if p == "." else p.replace("/", "_")) for p in parts if p)


def _save(fig, plots_dir: Path, filename: str) -> str:
    fig.tight_layout()
    fig.savefig(plots_dir / f"{filename}.png", dpi=100)
    plt.close(fig)
    return f"{plots_dir.name}/{filename}.png"


def _first_ok_run(directory: Path) -> Optional[Path]:
    for run_dir in sorted(directory.glob("run_*")):
        status = run_dir / "status.json"
        if status.exists() and '"ok"' in status.read_text():
            return run_dir
    return None


def _preferred_mode(frame: pd.DataFrame) -> str:
    return "shots" if "shots" in set(frame["mode"]) else "exact"


def _make_swpe_plot(group: str, directories: List[Path], plots_dir: Path) -> Optional[Chart]:
    """Median SWPE against phase with an IQR band and sparse mean markers"""
    fig, ax = plt.subplots()
    drawn = False
    for directory in directories:
        path = directory / "summary" / "swpe_aggregate.csv"
        if not path.exists():
            continue
        agg = pd.read_csv(path)
        mode = _preferred_mode(agg)
        agg = agg[agg["mode"] == mode]
        line, = ax.plot(agg["phase"], agg["median"], linewidth=2, label=f"{directory.name} ({mode})")
        ax.fill_between(agg["phase"], agg["q25"], agg["q75"], color=line.get_color(), alpha=0.2)
        step = max(1, len(agg) // 32)
        ax.plot(agg["phase"].iloc[::step], agg["mean"].iloc[::step], linestyle="none", marker="o",
                markersize=4, color=line.get_color())
        drawn = True
    if not drawn:
        plt.close(fig)
        return None
    ax.set_title(f'SWPE across the phase range ({group})', fontsize=14, fontweight='bold')
    ax.set_xlabel('True phase (rad)')
    ax.set_ylabel('SWPE (dB)')
    ax.legend()
    return f"SWPE vs phase: {group}", _save(fig, plots_dir, _slug(group, "swpe_vs_phase"))


def _make_swpe_box_plot(group: str, directories: List[Path], plots_dir: Path) -> Optional[Chart]:
    """Run-level median SWPE per model; whiskers at the 5th and 95th percentiles"""
    data, labels = [], []
    for directory in directories:
        path = directory / "summary" / "runs.csv"
        if not path.exists():
            continue
        runs = pd.read_csv(path)
        runs = runs[runs["status"] == "ok"]
        if runs.empty:
            continue
        column = "swpe_median_shots" if runs["swpe_median_shots"].notna().any() else "swpe_median_exact"
        data.append(runs[column].to_numpy())
        labels.append(f"{directory.name}\nQFI={runs['qfi'].median():.2f}")
    if not data:
        return None
    fig, ax = plt.subplots()
    ax.boxplot(data, whis=(5, 95), showmeans=True)
    ax.set_xticks(range(1, len(labels) + 1))
    ax.set_xticklabels(labels, rotation=30, fontsize=10)
    ax.set_title(f'Median SWPE per run ({group})', fontsize=14, fontweight='bold')
    ax.set_ylabel('SWPE (dB)')
    return f"SWPE distribution: {group}", _save(fig, plots_dir, _slug(group, "swpe_box"))


def _make_prediction_plot(name: str, run_dir: Path, plots_dir: Path) -> Optional[Chart]:
    sweep = pd.read_csv(run_dir / "swpe.csv")
    sweep = sweep[sweep["mode"] == "exact"]
    fig, ax = plt.subplots(figsize=(8, 8))
    ax.plot(sweep["phase"], sweep["phi_est"], '.', markersize=3, label='Estimate')
    ax.plot([-np.pi, np.pi], [-np.pi, np.pi], 'r--', linewidth=1, label='Ideal')
    ax.set_title(f'Predicted vs true phase ({name})', fontsize=14, fontweight='bold')
    ax.set_xlabel('True phase (rad)')
    ax.set_ylabel('Estimated phase (rad)')
    ax.legend()
    return f"Predicted vs true phase: {name}", _save(fig, plots_dir, f"{name}_prediction")


def _make_heatmap_plot(name: str, run_dir: Path, plots_dir: Path) -> Optional[Chart]:
    path = run_dir / "heatmap.csv"
    if not path.exists():
        return None
    heatmap = pd.read_csv(path).pivot_table(index="m", columns="phase", values="probability")
    heatmap = heatmap.sort_index(ascending=False)
    fig, ax = plt.subplots(figsize=(14, 5))
    sns.heatmap(heatmap, cmap='viridis', ax=ax, xticklabels=False, cbar_kws={'label': 'p(m|phi)'})
    ax.set_title(f'Quantum feature heatmap ({name})', fontsize=14, fontweight='bold')
    ax.set_xlabel('Phase from -pi to pi')
    ax.set_ylabel('m')
    return f"Quantum feature heatmap: {name}", _save(fig, plots_dir, f"{name}_heatmap")


def _make_manifold_plot(name: str, run_dir: Path, plots_dir: Path) -> Optional[Chart]:
    path = run_dir / "latent_projection.csv"
    kind = "latent"
    if not path.exists():
        path, kind = run_dir / "quantum_projection.csv", "quantum feature"
    if not path.exists():
        return None
    projection = pd.read_csv(path)
    fig, ax = plt.subplots(figsize=(8, 8))
    points = ax.scatter(projection["pc1"], projection["pc2"], c=projection["phase"], cmap='twilight', s=10)
    fig.colorbar(points, ax=ax, label='Phase (rad)')
    ev1, ev2 = projection["ev1"].iloc[0], projection["ev2"].iloc[0]
    ax.set_title(f'{kind.capitalize()} manifold ({name})', fontsize=14, fontweight='bold')
    ax.set_xlabel(f'PC1 ({ev1:.1%})')
    ax.set_ylabel(f'PC2 ({ev2:.1%})')
    return f"{kind.capitalize()} manifold: {name}", _save(fig, plots_dir, f"{name}_manifold")


def _make_trajectory_plot(name: str, run_dir: Path, plots_dir: Path) -> Optional[Chart]:
    path = run_dir / "trajectory.csv"
    if not path.exists():
        return None
    trajectory = pd.read_csv(path)
    if trajectory.empty:
        return None
    fig, ax1 = plt.subplots(figsize=(12, 6))
    ax1.plot(trajectory["epoch"], trajectory["qfi"], 'r--', linewidth=2, label='QFI')
    ax1.set_xlabel('Epoch')
    ax1.set_ylabel('QFI', color='red')
    ax2 = ax1.twinx()
    ax2.plot(trajectory["epoch"], trajectory["swpe_median"], 'b-', linewidth=2, label='Median SWPE')
    ax2.set_ylabel('Median SWPE (dB)', color='blue')
    peak = trajectory["qfi"].idxmax()
    ax1.axvline(x=trajectory["epoch"].iloc[peak], color='gray', linestyle=':', label='QFI peak')
    ax1.set_title(f'Training dynamics ({name})', fontsize=14, fontweight='bold')
    ax1.legend(loc='upper left')
    ax2.legend(loc='upper right')
    return f"Training dynamics: {name}", _save(fig, plots_dir, f"{name}_trajectory")


def make_plots(root, plots_dir: Path) -> List[Chart]:
    """Render every figure the artifacts below `root` support; returns (title, relative path) pairs"""
    root = Path(root)
    plots_dir = Path(plots_dir)
    plots_dir.mkdir(parents=True, exist_ok=True)
    directories = experiment_dirs(root)
    groups = {}
    for directory in directories:
        group = str(directory.parent.relative_to(root)) if directory != root else "."
        groups.setdefault(group, []).append(directory)

    charts: List[Chart] = []
    for group, members in sorted(groups.items()):
        for make in (_make_swpe_plot, _make_swpe_box_plot):
            chart = make(group, members, plots_dir)
            if chart:
                charts.append(chart)
        for directory in members:
            run_dir = _first_ok_run(directory)
            if run_dir is None:
                continue
            name = _slug(group, directory.name)
            for make in (_make_prediction_plot, _make_heatmap_plot, _make_manifold_plot, _make_trajectory_plot):
                chart = make(name, run_dir, plots_dir)
                if chart:
                    charts.append(chart)
    logger.info("rendered %d figures into %s", len(charts), plots_dir)
    return charts
