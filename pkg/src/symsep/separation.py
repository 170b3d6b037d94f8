"""Optimal parametric separation map: success probability, Kraus pair, dilation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import (FiducialSpec, SymmetricFamily, _check_xi, beta_coefficients,
                     target_phases)

# ancilla labels of the two-level dilation
ANCILLA_SUCCESS = 0
ANCILLA_FAILURE = 1
ANCILLA_START = 1

DEGENERATE_TOL = 1e-12


def _denominator(spec: FiducialSpec, xi: float) -> float:
    return (1.0 - xi) + xi / (spec.d * spec.a_min ** 2)


def success_probability(spec: FiducialSpec, xi: float) -> float:
    """Largest uniform probability of mapping the alpha family onto beta(xi)."""
    xi = _check_xi(xi)
    p = 1.0 / _denominator(spec, xi)
    # the same optimum written as the tightest per-mode ratio a_k^2 / b_k^2
    on = spec.support == 1
    ratio = float(np.min(spec.amplitudes[on] ** 2 / beta_coefficients(spec, xi)[on] ** 2))
    if abs(ratio - p) > 1e-10 * max(1.0, p):
        raise ArithmeticError(f"closed form {p!r} disagrees with min ratio {ratio!r}")
    return p


def failure_probability(spec: FiducialSpec, xi: float) -> float:
    """``1 - p_S`` evaluated without cancellation."""
    xi = _check_xi(xi)
    gap = 1.0 / (spec.d * spec.a_min ** 2) - 1.0
    return max(xi * gap, 0.0) / _denominator(spec, xi)


@dataclass(frozen=True, eq=False)
class SeparationMap:
    spec: FiducialSpec
    xi: float
    p_success: float
    kraus_success: np.ndarray
    kraus_failure: np.ndarray
    phase_rule: str = "linear"

    @property
    def p_failure(self) -> float:
        return failure_probability(self.spec, self.xi)

    @property
    def success_diag(self) -> np.ndarray:
        return np.diag(self.kraus_success).copy()

    @property
    def failure_diag(self) -> np.ndarray:
        return np.diag(self.kraus_failure).copy()

    def completeness_residual(self) -> float:
        s, f = self.kraus_success, self.kraus_failure
        total = s.conj().T @ s + f.conj().T @ f
        return float(np.max(np.abs(total - np.eye(self.spec.n))))


def build_map(spec: FiducialSpec, xi: float, phase_rule: str = "linear") -> SeparationMap:
    """Diagonal success/failure Kraus operators for the optimal xi-separation."""
    xi = _check_xi(xi)
    p = success_probability(spec, xi)
    y = spec.support.astype(float)
    on = spec.support == 1
    den = _denominator(spec, xi)
    a2 = np.where(on, spec.amplitudes ** 2, 1.0)
    s_mag = np.sqrt(((1.0 - xi) + xi / (spec.d * a2)) / den)
    f_mag = np.sqrt(np.clip((xi / spec.d) * (1.0 / spec.a_min ** 2 - 1.0 / a2) / den, 0.0, None))
    # phase that carries phi_k onto the target phase
    shift = np.exp(1j * (target_phases(spec, xi, phase_rule) - spec.phases))
    s_diag = y * shift * s_mag
    f_diag = y * shift * f_mag + (1.0 - y)
    return SeparationMap(spec, xi, p, np.diag(s_diag), np.diag(f_diag), phase_rule)


class MapOutcome(NamedTuple):
    success_states: np.ndarray
    failure_states: np.ndarray | None
    """None when the failure branch has zero weight for every input (flat fiducial)."""


def failure_coefficients(spec: FiducialSpec) -> np.ndarray | None:
    """Magnitudes of the normalized failure fiducial; None in the flat case."""
    norm = 1.0 - spec.d * spec.a_min ** 2
    if norm <= DEGENERATE_TOL:
        return None
    num = spec.amplitudes ** 2 - spec.a_min ** 2 * spec.support
    return np.sqrt(np.clip(num, 0.0, None) / norm)


def _normalize_rows(m: np.ndarray) -> np.ndarray:
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def apply_map(smap: SeparationMap, family: SymmetricFamily) -> MapOutcome:
    """Act with both Kraus operators on every state; return normalized outputs."""
    if family.spec is not smap.spec and not np.allclose(
            family.spec.amplitudes, smap.spec.amplitudes):
        raise ValueError("family and map were built from different fiducials")
    states = np.asarray(family.states)
    success = _normalize_rows(states @ smap.kraus_success.T)

    if failure_coefficients(smap.spec) is None:
        return MapOutcome(success, None)
    pf = smap.p_failure
    if pf > 0.0:
        failure = states @ smap.kraus_failure.T / np.sqrt(pf)
        failure = _normalize_rows(failure)
    else:
        # xi = 0: no failure weight, report the xi -> 0 limit of the failure branch
        spec = smap.spec
        phase = np.exp(1j * target_phases(spec, smap.xi, smap.phase_rule))
        fid = failure_coefficients(spec) * phase
        k = np.arange(spec.n)
        failure = np.exp(2j * np.pi * np.outer(k, k) / spec.n) * fid[None, :]
    return MapOutcome(success, failure)


@dataclass(frozen=True, eq=False)
class DilationUnitary:
    """System-ancilla unitary; basis index is ``2 * k + ancilla``."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_residual(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(self.dim))))

    def apply(self, system_state: np.ndarray) -> np.ndarray:
        """Evolve ``|psi>|A>`` and return the joint state as an (N, 2) array."""
        n = system_state.shape[0]
        joint = np.zeros((n, 2), dtype=complex)
        joint[:, ANCILLA_START] = system_state
        return (self.matrix @ joint.reshape(-1)).reshape(n, 2)


def dilation(smap: SeparationMap) -> DilationUnitary:
    """Unitary whose restriction to the start ancilla state realizes the map.

    Columns fed by ``|k>|start>`` are fixed by the Kraus pair. The remaining
    column of each 2x2 mode block is completed as ``(-conj(f), conj(s))``.
    """
    n = smap.spec.n
    s = smap.success_diag
    f = smap.failure_diag
    u = np.zeros((2 * n, 2 * n), dtype=complex)
    other = 1 - ANCILLA_START
    for k in range(n):
        col = 2 * k + ANCILLA_START
        u[2 * k + ANCILLA_SUCCESS, col] = s[k]
        u[2 * k + ANCILLA_FAILURE, col] = f[k]
        col = 2 * k + other
        u[2 * k + ANCILLA_SUCCESS, col] = -np.conj(f[k])
        u[2 * k + ANCILLA_FAILURE, col] = np.conj(s[k])
    return DilationUnitary(u)
