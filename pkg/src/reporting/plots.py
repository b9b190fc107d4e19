"""
Plots - Self-contained SVG figures for gradient and projection data

Output is byte-reproducible: no date metadata and a fixed SVG hash salt.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ..analytics.hull_geometry import Projection
from ..analytics.trajectory import TrajectoryAnalysis

plt.rcParams["svg.hashsalt"] = "lipkin"
plt.rcParams["svg.fonttype"] = "path"

SVG_METADATA = {"Date": None}


def _save(fig, output_path: str):
    fig.savefig(output_path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)


def plot_gradient(analysis: TrajectoryAnalysis, output_path: str, epsilon: float = None) -> str:
    """d<Jz>/dlambda along the path with a shaded one-standard-error band"""
    fig, ax = plt.subplots(figsize=(8, 5))
    x = analysis.lambdas
    y = analysis.djz_dlambda
    ax.fill_between(x, y - analysis.std_error, y + analysis.std_error, color="0.8", linewidth=0)
    ax.plot(x, y, "-", color="black", linewidth=1.5)
    ax.axvline(analysis.peak_lambda, color="0.5", linestyle=":", linewidth=1)
    for i in analysis.discontinuities:
        ax.axvline(x[i], color="tab:red", linestyle="--", linewidth=1)
    ax.set_xlabel("λ")
    ax.set_ylabel("d⟨Jz⟩/dλ")
    title = "Gradient of ⟨Jz⟩"
    if epsilon is not None:
        title += f" (ε = {epsilon:g})"
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, output_path)
    return output_path


def plot_projection(projection: Projection, output_path: str) -> str:
    """Projected points and their convex outline"""
    fig, ax = plt.subplots(figsize=(6, 6))
    pts = projection.points
    ax.scatter(pts[:, 0], pts[:, 1], s=8, color="tab:blue")
    if len(projection.outline) > 1:
        ring = np.array(projection.outline + projection.outline[:1])
        ax.plot(pts[ring, 0], pts[ring, 1], "-", color="black", linewidth=1)
    ax.set_xlabel(f"⟨{projection.kept_axes[0]}⟩")
    ax.set_ylabel(f"⟨{projection.kept_axes[1]}⟩")
    ax.set_title(f"Projection along {projection.drop_axis}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, output_path)
    return output_path
