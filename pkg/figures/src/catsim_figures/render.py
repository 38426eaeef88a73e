"""Figure renderers for the catsim CSV artifacts."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_IDS = ("fig1", "fig2", "fig4", "fig5", "fig6")

# documented headers of the producing CLI commands
EXPECTED_COLUMNS = {
    "fig1": ["tau", "mean_ns", "two_mean_np", "sum_energy"],
    "fig2": ["n", "probability"],
    "fig4": ["tau", "p0"],
    "fig5": ["x", "p", "w"],
    "fig6": [
        "beta",
        "tau_opt",
        "p0",
        "xi_star",
        "alpha_star",
        "fidelity",
        "alpha_prep_formula",
        "seconds",
    ],
}


class ColumnMismatchError(ValueError):
    """Input CSV does not carry the producing command's documented header."""


@dataclass
class FigureRecipe:
    figure: str
    input_csv: str
    output_path: str
    dpi: int = 150
    title: str | None = None
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise ValueError(f"unknown figure {self.figure!r}; choose from {FIGURE_IDS}")


def read_columns(path: str, expected: list[str]) -> dict[str, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ColumnMismatchError(f"{path}: empty file") from None
        if header != expected:
            raise ColumnMismatchError(
                f"{path}: expected columns {expected}, found {header}"
            )
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise ColumnMismatchError(f"{path}: no data rows")
    data = np.asarray(rows)
    return {name: data[:, i] for i, name in enumerate(expected)}


def _render_fig1(cols, ax):
    ax.plot(cols["tau"], cols["mean_ns"], "b-", label=r"signal $\langle n_s\rangle$")
    ax.plot(cols["tau"], cols["two_mean_np"], "g--", label=r"pump $2\langle n_p\rangle$")
    ax.plot(cols["tau"], cols["sum_energy"], "r-.", label="sum")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel("normalized mean energy")
    ax.legend()
    return {
        "tau": cols["tau"],
        "mean_ns": cols["mean_ns"],
        "two_mean_np": cols["two_mean_np"],
        "sum_energy": cols["sum_energy"],
    }


def _render_fig2(cols, ax):
    ax.bar(cols["n"], cols["probability"], width=0.8, color="tab:blue")
    ax.set_xlabel(r"$n_s$")
    ax.set_ylabel("probability")
    return {"n": cols["n"], "probability": cols["probability"]}


def _render_fig4(cols, ax):
    ax.plot(cols["tau"], cols["p0"], "b-")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel(r"$p_0$")
    return {"tau": cols["tau"], "p0": cols["p0"]}


def _render_fig5(cols, ax):
    x, p, w = cols["x"], cols["p"], cols["w"]
    xs = np.unique(x)
    ps = np.unique(p)
    if xs.size * ps.size != w.size:
        raise ColumnMismatchError(
            f"Wigner rows do not form a full {xs.size} x {ps.size} grid"
        )
    # rows are written row-major over x then p
    W = w.reshape(xs.size, ps.size)
    vmax = float(np.abs(W).max()) or 1.0
    im = ax.contourf(xs, ps, W.T, levels=61, cmap="RdBu_r", vmin=-vmax, vmax=vmax)
    ax.figure.colorbar(im, ax=ax, label=r"$W(x, p)$")
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.set_aspect("equal")
    return {"x": x, "p": p, "w": w}


def _render_fig6(cols, ax):
    ax.semilogy(cols["beta"], 1.0 - cols["fidelity"], "bo-")
    ax.set_xlabel(r"$\beta$")
    ax.set_ylabel(r"$1 - F$")
    return {"beta": cols["beta"], "fidelity": cols["fidelity"]}


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2": _render_fig2,
    "fig4": _render_fig4,
    "fig5": _render_fig5,
    "fig6": _render_fig6,
}


def render(recipe: FigureRecipe) -> dict[str, np.ndarray]:
    """Render one figure; returns the plotted arrays for provenance checks.

    The returned arrays are exactly the CSV columns handed to matplotlib
    (fig6's ordinate is the affine transform 1 - fidelity of the stored
    column), so callers can checksum them against the input file.
    """
    cols = read_columns(recipe.input_csv, EXPECTED_COLUMNS[recipe.figure])
    fig, ax = plt.subplots(figsize=recipe.style.get("figsize", (6.0, 4.5)))
    try:
        plotted = _RENDERERS[recipe.figure](cols, ax)
        if recipe.title:
            ax.set_title(recipe.title)
        fig.tight_layout()
        fig.savefig(recipe.output_path, dpi=recipe.dpi)
    finally:
        plt.close(fig)
    return plotted
