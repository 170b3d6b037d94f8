"""Fiducial coefficients and the symmetric state families built from them.

All families live in the computational basis: state ``j`` of a family with
fiducial coefficients ``c_k`` has components ``c_k * omega**(j*k)`` where
``omega = exp(2*pi*i/N)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SUPPORT_THRESHOLD = 1e-12
NORM_INPUT_TOL = 1e-3

PHASE_RULES = ("linear", "conjugate")


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiducialSpec:
    """Renormalized fiducial amplitudes ``a_k`` and phases ``phi_k``.

    ``norm_factor`` is the factor the raw amplitudes were divided by.
    """

    n: int
    amplitudes: np.ndarray
    phases: np.ndarray
    norm_factor: float = 1.0
    support: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))
        object.__setattr__(self, "phases", _frozen(self.phases))
        mask = (self.amplitudes > SUPPORT_THRESHOLD).astype(int)
        object.__setattr__(self, "support", _frozen(mask, dtype=int))

    @property
    def d(self) -> int:
        """Number of non-vanishing coefficients."""
        return int(self.support.sum())

    @property
    def a_min(self) -> float:
        return float(self.amplitudes[self.support == 1].min())

    @property
    def has_phases(self) -> bool:
        return bool(np.any(self.phases != 0.0))

    @property
    def omega(self) -> complex:
        return np.exp(2j * np.pi / self.n)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "amplitudes": [float(a) for a in self.amplitudes],
            "phases": [float(p) for p in self.phases],
        }

    def __repr__(self):
        return (f"FiducialSpec(n={self.n}, amplitudes={self.amplitudes.tolist()}, "
                f"phases={self.phases.tolist()})")


def build_fiducial(n: int, amplitudes: Sequence[float],
                   phases: Sequence[float] | None = None) -> FiducialSpec:
    """Validate raw coefficients and return a unit-norm :class:`FiducialSpec`.

    Rounded tables are accepted as long as the squared norm is
    within ``NORM_INPUT_TOL`` of one; the amplitudes are then rescaled.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    a = np.asarray(amplitudes, dtype=float)
    phi = np.zeros(n) if phases is None else np.asarray(phases, dtype=float)
    if a.shape != (n,):
        raise ValueError(f"expected {n} amplitudes, got {a.size}")
    if phi.shape != (n,):
        raise ValueError(f"expected {n} phases, got {phi.size}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(phi))):
        raise ValueError("amplitudes and phases must be finite")
    if np.any(a < 0):
        raise ValueError("amplitudes must be non-negative")
    norm2 = float(np.sum(a * a))
    if norm2 == 0.0:
        raise ValueError("amplitude vector is identically zero")
    if abs(norm2 - 1.0) > NORM_INPUT_TOL:
        raise ValueError(f"sum of squared amplitudes is {norm2:.6g}, not 1")
    factor = float(np.sqrt(norm2))
    return FiducialSpec(n=n, amplitudes=a / factor, phases=phi, norm_factor=factor)


def uniform_spec(n: int, d: int | None = None) -> FiducialSpec:
    """Flat fiducial over the first ``d`` modes (``d = n`` by default)."""
    d = n if d is None else d
    a = np.zeros(n)
    a[:d] = 1.0 / np.sqrt(d)
    return build_fiducial(n, a)


def qubit_spec(alpha_deg: float) -> FiducialSpec:
    """Two-state fiducial ``cos(alpha/2)|0> + sin(alpha/2)|1>``."""
    half = np.deg2rad(alpha_deg) / 2
    return build_fiducial(2, [np.cos(half), np.sin(half)])


@dataclass(frozen=True, eq=False)
class SymmetricFamily:
    """N states stored as rows of ``states``; row ``j`` is state ``j``."""

    spec: FiducialSpec
    states: np.ndarray

    @property
    def omega(self) -> complex:
        return self.spec.omega

    def __len__(self):
        return self.states.shape[0]

    def __getitem__(self, j) -> np.ndarray:
        return self.states[j]

    def gram(self) -> np.ndarray:
        """Matrix of overlaps ``<s_i|s_j>``."""
        return self.states.conj() @ self.states.T


def generator(n: int) -> np.ndarray:
    """Diagonal phase gate ``Z|k> = omega**k |k>`` that steps through a family."""
    return np.diag(np.exp(2j * np.pi * np.arange(n) / n))


def _family(spec: FiducialSpec, fiducial: np.ndarray) -> SymmetricFamily:
    k = np.arange(spec.n)
    rot = np.exp(2j * np.pi * np.outer(k, k) / spec.n)
    states = rot * fiducial[None, :]
    states.setflags(write=False)
    return SymmetricFamily(spec, states)


def _check_xi(xi: float) -> float:
    xi = float(xi)
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"xi must lie in [0, 1], got {xi}")
    return xi


def alpha_family(spec: FiducialSpec) -> SymmetricFamily:
    return _family(spec, spec.amplitudes * np.exp(1j * spec.phases))


def u_family(spec: FiducialSpec) -> SymmetricFamily:
    """Maximally separated family: flat weight over the fiducial support."""
    return _family(spec, spec.support / np.sqrt(spec.d) + 0j)


def beta_coefficients(spec: FiducialSpec, xi: float) -> np.ndarray:
    """Target magnitudes ``b_k(xi)`` interpolating ``a_k**2`` towards ``y_k/D``."""
    xi = _check_xi(xi)
    a2 = spec.amplitudes ** 2
    b2 = (1.0 - xi) * a2 + spec.support * xi / spec.d
    return np.sqrt(np.clip(b2, 0.0, None))


def b_min_squared(spec: FiducialSpec, xi: float) -> float:
    xi = _check_xi(xi)
    return (1.0 - xi) * spec.a_min ** 2 + xi / spec.d


def target_phases(spec: FiducialSpec, xi: float, rule: str = "linear") -> np.ndarray:
    """Phases of the target fiducial.

    ``linear`` moves ``phi_k`` to zero as ``(1 - xi) * phi_k``; ``conjugate``
    uses ``-phi_k`` for every ``xi``.
    """
    xi = _check_xi(xi)
    if rule == "linear":
        return (1.0 - xi) * spec.phases
    if rule == "conjugate":
        return -spec.phases
    raise ValueError(f"unknown phase rule {rule!r}; expected one of {PHASE_RULES}")


def beta_family(spec: FiducialSpec, xi: float, rule: str = "linear") -> SymmetricFamily:
    b = beta_coefficients(spec, xi)
    return _family(spec, b * np.exp(1j * target_phases(spec, xi, rule)))
