"""Path-encoded optical network: one half-wave plate per occupied path.

Polarization acts as the ancilla, in the ``{|h>, |v>}`` basis with ``|v>`` as
the start state, ``|h>`` flagging success and ``|v>`` flagging failure.
PBSs reflect ``|v>`` and transmit ``|h>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .separation import ANCILLA_FAILURE, ANCILLA_START, ANCILLA_SUCCESS, build_map
from .states import FiducialSpec, _check_xi

H, V = 0, 1
PBS_CONVENTION = "reflect-v"

assert (ANCILLA_SUCCESS, ANCILLA_FAILURE, ANCILLA_START) == (H, V, V)


def jones_hwp(zeta: float) -> np.ndarray:
    """Half-wave plate with fast axis at ``zeta`` from horizontal."""
    c, s = np.cos(2 * zeta), np.sin(2 * zeta)
    return np.array([[c, s], [s, -c]])


def hwp_sin_cos(spec: FiducialSpec, xi: float) -> tuple[np.ndarray, np.ndarray]:
    """``sin(2 zeta_k)`` and ``cos(2 zeta_k)`` for the occupied paths, in mode order."""
    xi = _check_xi(xi)
    a2 = spec.amplitudes[spec.support == 1] ** 2
    amin2 = spec.a_min ** 2
    den = 1.0 - xi + xi / (spec.d * amin2)
    sin2 = np.sqrt((1.0 - xi + xi / (spec.d * a2)) / den)
    cos2 = -np.sqrt(np.clip((xi / spec.d) * (1.0 / amin2 - 1.0 / a2) / den, 0.0, None))
    return sin2, cos2


@dataclass(frozen=True, eq=False)
class OpticalLayout:
    spec: FiducialSpec
    xi: float
    modes: tuple  # occupied path indices, one HWP each
    zeta_angles: np.ndarray  # radians, in [pi/4, pi/2]
    stage1_phases: np.ndarray

    @property
    def zeta_deg(self) -> np.ndarray:
        return np.rad2deg(self.zeta_angles)

    def components(self) -> list[str]:
        return [f"path {k}: HWP at {z:.6f} deg" for k, z in zip(self.modes, self.zeta_deg)]


def stage1_phases(spec: FiducialSpec, j: int = 0) -> np.ndarray:
    """Phase-shifter settings, mod 2 pi, that prepare state ``j`` on each path."""
    k = np.arange(spec.n)
    return np.mod(spec.phases + 2 * np.pi * j * k / spec.n, 2 * np.pi)


def synthesize(spec: FiducialSpec, xi: float, j: int = 0) -> OpticalLayout:
    if spec.has_phases:
        raise ValueError("optical synthesis covers real fiducials only (all phases zero)")
    sin2, cos2 = hwp_sin_cos(spec, xi)
    zeta = 0.5 * np.arctan2(sin2, cos2)
    modes = tuple(int(k) for k in np.flatnonzero(spec.support))
    return OpticalLayout(spec, float(xi), modes, zeta, stage1_phases(spec, j))


def assemble_stage2(layout: OpticalLayout) -> np.ndarray:
    """Path-polarization unitary ``sum_k |k><k| (x) H(zeta_k)``; index ``2*k + pol``.

    Unoccupied paths carry no plate and pass unchanged. On occupied paths the
    operator must equal ``A_S (x) (|h><v| + |v><h|) + A_F (x) (|v><v| - |h><h|)``.
    """
    n = layout.spec.n
    u = np.eye(2 * n, dtype=complex)
    for k, z in zip(layout.modes, layout.zeta_angles):
        u[2 * k:2 * k + 2, 2 * k:2 * k + 2] = jones_hwp(z)

    smap = build_map(layout.spec, layout.xi)
    flip = np.array([[0, 1], [1, 0]])
    sign = np.array([[-1, 0], [0, 1]])
    expected = np.kron(smap.kraus_success, flip) + np.kron(smap.kraus_failure, sign)
    idx = np.array([2 * k + p for k in layout.modes for p in (H, V)])
    gap = np.max(np.abs(u[np.ix_(idx, idx)] - expected[np.ix_(idx, idx)]))
    if gap > 1e-12:
        raise ArithmeticError(f"stage II network deviates from the Kraus pair by {gap:.3g}")
    return u
