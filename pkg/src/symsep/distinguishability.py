"""Distinguishability of the separated family under two measures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import FiducialSpec, _check_xi, b_min_squared, beta_coefficients

MONOTONE_TOL = 1e-12


def d1_measure(spec: FiducialSpec, xi: float) -> float:
    """Optimal unambiguous / maximum-confidence success probability, ``D * b_min^2``."""
    return spec.d * b_min_squared(spec, xi)


def d2_measure(spec: FiducialSpec, xi: float) -> float:
    """Optimal minimum-error success probability, ``(sum_k b_k)^2 / N``."""
    return float(np.sum(beta_coefficients(spec, xi))) ** 2 / spec.n


def e_value(spec: FiducialSpec, xi: float) -> float:
    return float(np.sum(beta_coefficients(spec, xi)))


def e_derivatives(spec: FiducialSpec, xi: float) -> tuple[float, float]:
    """First and second xi-derivatives of ``E(xi) = sum_k b_k(xi)``."""
    xi = _check_xi(xi)
    on = spec.support == 1
    a2 = spec.amplitudes[on] ** 2
    slope = 1.0 / spec.d - a2
    b2 = (1.0 - xi) * a2 + xi / spec.d
    first = float(np.sum(slope / (2.0 * np.sqrt(b2))))
    second = float(-np.sum(slope ** 2 / (4.0 * b2 ** 1.5)))
    return first, second


@dataclass(frozen=True)
class DistinguishabilityReport:
    xi_grid: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    e_values: np.ndarray


def report(spec: FiducialSpec, grid_points: int = 101,
           xi_min: float = 0.0, xi_max: float = 1.0) -> DistinguishabilityReport:
    """Evaluate both measures on a uniform grid and check they never decrease."""
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    _check_xi(xi_min), _check_xi(xi_max)
    if xi_min > xi_max:
        raise ValueError("xi_min must not exceed xi_max")
    grid = np.linspace(xi_min, xi_max, grid_points)
    d1 = np.array([d1_measure(spec, x) for x in grid])
    e = np.array([e_value(spec, x) for x in grid])
    d2 = e ** 2 / spec.n
    for name, values in (("d1", d1), ("d2", d2)):
        drop = np.diff(values).min()
        if drop < -MONOTONE_TOL:
            raise ArithmeticError(f"{name} decreases by {-drop:.3g} along the grid")
    return DistinguishabilityReport(grid, d1, d2, e)
