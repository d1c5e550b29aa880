"""Matplotlib rendering for the report figures.

Each renderer takes the same rows the CSV writers receive and saves a PNG
next to the data file.  Uses the Agg backend so the CLI works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _new_axes(xlabel, ylabel, title):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_exponent_bounds(rows, p, path):
    """rows: (R, lower, upper)."""
    r = [row[0] for row in rows]
    fig, ax = _new_axes(
        "rate R (bits)", "exponent (bits)",
        f"Identification exponent bounds, p = {p:g}",
    )
    ax.plot(r, [row[1] for row in rows], label="lower bound")
    ax.plot(r, [row[2] for row in rows], label="upper bound", linestyle="--")
    ax.legend()
    _save(fig, path)


def render_capacity_bounds(rows, path):
    """rows: (p, cap_lower, cap_upper)."""
    ps = [row[0] for row in rows]
    fig, ax = _new_axes(
        "crossover probability p", "rate (bits)",
        "Identification capacity bounds",
    )
    ax.plot(ps, [row[1] for row in rows], label="lower bound")
    ax.plot(ps, [row[2] for row in rows], label="upper bound", linestyle="--")
    ax.legend()
    _save(fig, path)


def render_fig5(rows, path):
    """rows: (p, lhs, rhs, holds) for the half-expurgated-rate inequality."""
    ps = [row[0] for row in rows]
    fig, ax = _new_axes(
        "crossover probability p", "bits",
        "Exponent at half the expurgated rate vs. the rate itself",
    )
    ax.plot(ps, [row[1] for row in rows], label="delta_GV(R_ex/2) * B_p")
    ax.plot(ps, [row[2] for row in rows], label="R_ex/2", linestyle="--")
    ax.legend()
    _save(fig, path)


def render_fig6(rows, path):
    """rows: (R, lhs, rhs, holds) for the low-rate distance comparison."""
    rs = [row[0] for row in rows]
    fig, ax = _new_axes(
        "rate R (bits)", "relative distance",
        "LP distance bound vs. doubled GV distance",
    )
    ax.plot(rs, [row[1] for row in rows], label="delta_LP(R)")
    ax.plot(rs, [row[2] for row in rows], label="2 * delta_GV(2R)", linestyle="--")
    ax.legend()
    _save(fig, path)
