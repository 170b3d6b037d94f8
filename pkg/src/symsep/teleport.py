"""Separation-assisted qudit teleportation through a partially entangled channel.

Registers are ordered (Bob's particle 1, Alice's particle 2, input particle 3,
ancilla). Alice applies GXOR on (2, 3), separates particle 2 with the
two-level dilation, keeps the success branch, measures particle 2 in the
Fourier basis and particle 3 in the computational basis, and Bob undoes
``Z^(N-l) X^k``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .separation import ANCILLA_START, ANCILLA_SUCCESS, build_map, dilation, success_probability
from .states import FiducialSpec, _check_xi, beta_coefficients, qubit_spec


def gxor(dim: int) -> np.ndarray:
    """Permutation ``|i>|j> -> |i>|i - j mod dim>`` on the product basis ``i*dim + j``."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    g = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            g[i * dim + (i - j) % dim, i * dim + j] = 1.0
    return g


def shift_op(n: int) -> np.ndarray:
    return np.roll(np.eye(n), 1, axis=0)


def clock_op(n: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(n) / n))


def fourier_basis(n: int) -> np.ndarray:
    """Row ``l`` is ``sum_m omega**(l m) |m> / sqrt(n)``."""
    m = np.arange(n)
    return np.exp(2j * np.pi * np.outer(m, m) / n) / np.sqrt(n)


def corrections(n: int) -> np.ndarray:
    """Bob's unitary for outcome ``(l, k)``: the inverse of ``Z^(N-l) X^k``."""
    Z, X = clock_op(n), shift_op(n)
    out = np.empty((n, n, n, n), dtype=complex)
    for l in range(n):
        for k in range(n):
            op = np.linalg.matrix_power(Z, (n - l) % n) @ np.linalg.matrix_power(X, k)
            out[l, k] = op.conj().T
    return out


def f_ave_formula(spec: FiducialSpec, xi: float) -> float:
    """Average fidelity of the success branch, ``[1 + (sum_k b_k)^2] / (1 + N)``."""
    b = beta_coefficients(spec, xi)
    return (1.0 + float(np.sum(b)) ** 2) / (1.0 + spec.n)


def _check_channel(spec: FiducialSpec):
    if spec.has_phases:
        raise ValueError("teleportation channel takes real Schmidt coefficients; phases must be zero")


def bob_states(spec: FiducialSpec, xi: float, inputs: np.ndarray) -> np.ndarray:
    """Corrected, unnormalized states Bob holds for each outcome.

    ``inputs`` has shape (S, N); the result has shape (S, l, k, N). Squared
    norms are joint probabilities of success together with outcome (l, k).
    """
    _check_channel(spec)
    n = spec.n
    phi = np.atleast_2d(np.asarray(inputs, dtype=complex))
    if phi.shape[1] != n:
        raise ValueError(f"input dimension {phi.shape[1]} does not match channel dimension {n}")
    s = phi.shape[0]

    # psi[s, particle1, particle2, particle3, ancilla]
    psi = np.zeros((s, n, n, n, 2), dtype=complex)
    for m, am in enumerate(spec.amplitudes):
        psi[:, m, m, :, ANCILLA_START] = am * phi
    g = gxor(n).reshape(n, n, n, n)
    psi = np.einsum("bcij,sAija->sAbca", g, psi)
    u = dilation(build_map(spec, xi)).matrix.reshape(n, 2, n, 2)
    psi = np.einsum("bBia,sAiqa->sAbqB", u, psi)
    psi = psi[..., ANCILLA_SUCCESS]
    f = fourier_basis(n)
    bob = np.einsum("li,sAik->slkA", f.conj(), psi)
    return np.einsum("lkAB,slkB->slkA", corrections(n), bob)


def outcome_operators(spec: FiducialSpec, xi: float) -> np.ndarray:
    """Linear maps ``K[l, k]`` from the input state to Bob's corrected state."""
    basis = np.eye(spec.n, dtype=complex)
    return np.transpose(bob_states(spec, xi, basis), (1, 2, 3, 0))


@dataclass(frozen=True, eq=False)
class TeleportScenario:
    spec: FiducialSpec
    xi: float
    input_state: np.ndarray | None = None
    samples: int = 0
    seed: int = 0
    shards: int = 1


@dataclass(frozen=True)
class OutcomeRow:
    l: int
    k: int
    probability: float
    fidelity: float


@dataclass(frozen=True)
class TeleportReport:
    p_success: float
    f_ave_formula: float
    f_exact: float | None = None
    f_ave_monte_carlo: float | None = None
    f_ave_stderr: float | None = None
    samples: int = 0
    per_outcome_fidelities: tuple = ()


def _fidelities(bob: np.ndarray, phi: np.ndarray):
    """Outcome probabilities (joint with success), fidelities and weighted mean per input."""
    q = np.sum(np.abs(bob) ** 2, axis=-1)
    overlap = np.abs(np.einsum("si,slki->slk", phi.conj(), bob)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        fid = np.where(q > 0, overlap / q, 0.0)
    p_succ = q.sum(axis=(1, 2))
    mean = overlap.sum(axis=(1, 2)) / p_succ
    return q, fid, p_succ, mean


def run_exact(scenario: TeleportScenario) -> TeleportReport:
    """Full statevector run for one fixed input state."""
    spec, xi = scenario.spec, _check_xi(scenario.xi)
    if scenario.input_state is None:
        raise ValueError("run_exact needs an input state")
    phi = np.asarray(scenario.input_state, dtype=complex).reshape(1, -1)
    norm = np.linalg.norm(phi)
    if norm == 0:
        raise ValueError("input state is the zero vector")
    phi = phi / norm
    bob = bob_states(spec, xi, phi)
    q, fid, p_succ, mean = _fidelities(bob, phi)
    n = spec.n
    rows = tuple(OutcomeRow(l, k, float(q[0, l, k] / p_succ[0]), float(fid[0, l, k]))
                 for l in range(n) for k in range(n))
    return TeleportReport(
        p_success=float(p_succ[0]),
        f_ave_formula=f_ave_formula(spec, xi),
        f_exact=float(mean[0]),
        per_outcome_fidelities=rows,
    )


def haar_states(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def shard_generators(seed: int, shards: int) -> list:
    """Independent counter-based streams, one per shard."""
    children = np.random.SeedSequence(seed).spawn(shards)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _shard_fidelities(ops: np.ndarray, rng: np.random.Generator, count: int) -> np.ndarray:
    n = ops.shape[-1]
    out = []
    for start in range(0, count, 20000):
        phi = haar_states(rng, min(20000, count - start), n)
        bob = np.einsum("lkij,sj->slki", ops, phi)
        out.append(_fidelities(bob, phi)[3])
    return np.concatenate(out) if out else np.zeros(0)


def monte_carlo_fidelities(scenario: TeleportScenario, workers: int = 1) -> np.ndarray:
    """Success-branch average fidelity for each Haar-random input."""
    if scenario.samples < 1:
        raise ValueError("samples must be >= 1")
    if scenario.shards < 1:
        raise ValueError("shards must be >= 1")
    ops = outcome_operators(scenario.spec, _check_xi(scenario.xi))
    gens = shard_generators(scenario.seed, scenario.shards)
    counts = [len(c) for c in np.array_split(np.arange(scenario.samples), scenario.shards)]
    jobs = list(zip(gens, counts))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _shard_fidelities(ops, *job), jobs))
    else:
        parts = [_shard_fidelities(ops, *job) for job in jobs]
    return np.concatenate(parts)


def run_monte_carlo(scenario: TeleportScenario, workers: int = 1) -> TeleportReport:
    fids = monte_carlo_fidelities(scenario, workers)
    stderr = float(fids.std(ddof=1) / np.sqrt(fids.size)) if fids.size > 1 else 0.0
    return TeleportReport(
        p_success=success_probability(scenario.spec, scenario.xi),
        f_ave_formula=f_ave_formula(scenario.spec, scenario.xi),
        f_ave_monte_carlo=float(fids.mean()),
        f_ave_stderr=stderr,
        samples=int(fids.size),
    )


class QubitConclusive(NamedTuple):
    p_alpha: float
    p_beta: float
    f_alpha: float
    f_beta: float
    xi: float


def qubit_conclusive(alpha_deg: float, beta_deg: float) -> QubitConclusive:
    """Perfect-conclusive, deterministic and separation-assisted qubit figures of merit.

    ``alpha`` is the angle between the two channel-induced states and ``beta``
    the angle after separation.
    """
    if not 0.0 < alpha_deg <= 90.0 or not 0.0 < beta_deg <= 90.0:
        raise ValueError("angles must lie in (0, 90] degrees")
    if beta_deg < alpha_deg:
        raise ValueError("separation cannot decrease the angle: need beta >= alpha")
    a, b = np.deg2rad(alpha_deg), np.deg2rad(beta_deg)
    p_alpha = 2.0 * np.sin(a / 2) ** 2
    p_beta = p_alpha / (2.0 * np.sin(b / 2) ** 2)
    xi = 1.0 - np.cos(b) / np.cos(a)
    return QubitConclusive(float(p_alpha), float(p_beta), float((2 + np.sin(a)) / 3),
                           float((2 + np.sin(b)) / 3), float(min(max(xi, 0.0), 1.0)))


def qubit_scenario(alpha_deg: float, beta_deg: float) -> tuple[FiducialSpec, float]:
    """Channel fiducial and separation parameter realizing ``alpha -> beta``."""
    return qubit_spec(alpha_deg), qubit_conclusive(alpha_deg, beta_deg).xi
