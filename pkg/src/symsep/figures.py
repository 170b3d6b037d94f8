"""Tabular data behind the standard figures."""
from __future__ import annotations

import numpy as np

from .distinguishability import report
from .states import build_fiducial
from .teleport import qubit_conclusive

# fiducial of the five-state distinguishability example, 4-digit rounding
FIG3_AMPLITUDES = (0.6386, 0.5841, 0.3817, 0.1321, 0.2964)
FIG4_ALPHA_DEG = 20.0
FIG4_BETA_DEG = 50.0

FIGURES = ("fig1", "fig3", "fig4b")
HEADERS = {
    "fig1": ("xi", "d_amin2", "p_success"),
    "fig3": ("xi", "d1", "d2"),
    "fig4b": ("beta_deg", "p_beta", "f_beta"),
    "fig4b_markers": ("protocol", "beta_deg", "p_success", "fidelity"),
}


def fig3_spec():
    return build_fiducial(len(FIG3_AMPLITUDES), FIG3_AMPLITUDES)


def fig1_rows(steps: int = 50) -> list[tuple]:
    """Success probability over xi in [0, 1] and ``D a_min^2`` in (0, 1]."""
    rows = []
    for xi in np.linspace(0.0, 1.0, steps + 1):
        for k in range(1, steps + 1):
            dam = k / steps
            rows.append((xi, dam, 1.0 / ((1.0 - xi) + xi / dam)))
    return rows


def fig3_rows(steps: int = 100) -> list[tuple]:
    rep = report(fig3_spec(), steps + 1)
    return list(zip(rep.xi_grid, rep.d1, rep.d2))


def fig4b_rows(alpha_deg: float = FIG4_ALPHA_DEG, steps: int = 70) -> list[tuple]:
    """Curves over beta from alpha to 90 degrees (1 degree spacing by default)."""
    betas = np.linspace(alpha_deg, 90.0, steps + 1)
    rows = []
    for beta in betas:
        q = qubit_conclusive(alpha_deg, float(beta))
        rows.append((float(beta), q.p_beta, q.f_beta))
    return rows


def fig4b_markers(alpha_deg: float = FIG4_ALPHA_DEG,
                  beta_deg: float = FIG4_BETA_DEG) -> list[tuple]:
    """Deterministic, perfect-conclusive and separation-assisted operating points."""
    q = qubit_conclusive(alpha_deg, beta_deg)
    return [
        ("deterministic", alpha_deg, 1.0, q.f_alpha),
        ("perfect_conclusive", 90.0, q.p_alpha, 1.0),
        ("imperfect_conclusive", beta_deg, q.p_beta, q.f_beta),
    ]


def figure_rows(figure: str, steps: int | None = None) -> list[tuple]:
    if figure == "fig1":
        return fig1_rows(50 if steps is None else steps)
    if figure == "fig3":
        return fig3_rows(100 if steps is None else steps)
    if figure == "fig4b":
        return fig4b_rows(steps=70 if steps is None else steps)
    raise ValueError(f"unknown figure {figure!r}; expected one of {FIGURES}")
