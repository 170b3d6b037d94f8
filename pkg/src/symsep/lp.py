"""Linear program for optimal maps between symmetric families.

The unknown ``x_k = p * Psi_k**2`` weighs the cyclic shifts of the target
coefficients; the constraint ``M x <= n`` with ``M = sum_r b_r^2 X^r`` keeps
every Kraus deficit positive. A leakless optimum has a single nonzero entry.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import simplex
from .separation import success_probability
from .states import FiducialSpec, alpha_family, beta_coefficients

FEASIBILITY_TOL = 1e-9
SUPPORT_TOL = 1e-9
BRUTE_FORCE_MAX_N = 6


@dataclass(frozen=True, eq=False)
class LpInstance:
    a: np.ndarray
    b: np.ndarray
    n_vec: np.ndarray
    c_vec: np.ndarray
    m_matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.n_vec.size

    @property
    def upper(self) -> np.ndarray:
        return np.ones(self.size)

    def constraint_residual(self, x) -> float:
        """Largest violation of ``M x <= n`` and ``0 <= x <= 1`` (0 when feasible)."""
        x = np.asarray(x, dtype=float)
        return float(max(0.0, np.max(self.m_matrix @ x - self.n_vec), np.max(-x), np.max(x - 1.0)))


def shift_matrix(n: int) -> np.ndarray:
    """Cyclic shift ``X e_k = e_{k+1 mod n}``."""
    return np.roll(np.eye(n), 1, axis=0)


def lp_from_coefficients(a: Sequence[float], b: Sequence[float]) -> LpInstance:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"coefficient lengths differ: {a.size} vs {b.size}")
    if np.any(b < 0) or np.any(a < 0):
        raise ValueError("coefficients must be non-negative")
    for name, v in (("fiducial", a), ("target", b)):
        if abs(float(v @ v) - 1.0) > FEASIBILITY_TOL:
            raise ValueError(f"{name} coefficients are not normalized")
    n = a.size
    X = shift_matrix(n)
    M = np.zeros((n, n))
    P = np.eye(n)
    for r in range(n):
        M += b[r] ** 2 * P
        P = X @ P
    return LpInstance(a, b, a ** 2, np.ones(n), M)


def build_lp(spec: FiducialSpec, target_b: Sequence[float]) -> LpInstance:
    target_b = np.asarray(target_b, dtype=float)
    if target_b.size != spec.n:
        raise ValueError(f"target has {target_b.size} coefficients, fiducial has {spec.n}")
    return lp_from_coefficients(spec.amplitudes, target_b)


@dataclass(frozen=True, eq=False)
class LpSolution:
    x_vec: np.ndarray
    p_opt: float
    psi_sq: np.ndarray
    leakless: bool
    raw_x_vec: np.ndarray | None = None
    certificate: dict = field(default_factory=dict)
    iterations: int = 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(k) for k in np.flatnonzero(_nonzero(self.x_vec)))


def _nonzero(x: np.ndarray) -> np.ndarray:
    # relative cut: optima as small as 1e-10 occur for nearly vanishing a_min
    top = float(np.max(np.abs(x), initial=0.0))
    return x > SUPPORT_TOL * top if top > 0 else np.zeros(x.shape, dtype=bool)


def _solution(x: np.ndarray, **extra) -> LpSolution:
    x = np.where(np.abs(x) < 1e-15, 0.0, x)
    p = float(np.sum(x))
    psi = x / p if p > 0 else np.zeros_like(x)
    leakless = int(np.count_nonzero(_nonzero(x))) == 1
    return LpSolution(x, p, psi, leakless, **extra)


def canonicalize(instance: LpInstance, x) -> np.ndarray:
    """Replace a degenerate optimum by the first feasible single-entry vertex.

    Returns ``p * e_k`` for the smallest ``k`` that is feasible at the same
    objective, or ``x`` unchanged when no such vertex exists.
    """
    x = np.asarray(x, dtype=float)
    p = float(np.sum(x))
    for k in range(instance.size):
        cand = np.zeros(instance.size)
        cand[k] = p
        if instance.constraint_residual(cand) <= FEASIBILITY_TOL:
            return cand
    return x


def solve_lp(instance: LpInstance, canonical: bool = True) -> LpSolution:
    """Maximize ``sum(x)`` with the in-house simplex and certify the optimum.

    The certificate holds primal/dual feasibility, complementary slackness and
    duality-gap residuals; all must be below ``FEASIBILITY_TOL``.
    """
    res = simplex.solve(instance.c_vec, instance.m_matrix, instance.n_vec, instance.upper)
    cert = res.residuals(instance.c_vec, instance.m_matrix, instance.n_vec, instance.upper)
    worst = max(cert.values())
    if worst > FEASIBILITY_TOL:
        raise simplex.SimplexError(f"optimality certificate failed: {cert}")
    x = canonicalize(instance, res.x) if canonical else res.x
    return _solution(x, raw_x_vec=res.x, certificate=cert, iterations=res.iterations)


def brute_force_lp(instance: LpInstance) -> LpSolution:
    """Best vertex over every choice of ``N`` active constraints (``N <= 6``)."""
    n = instance.size
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"vertex enumeration limited to N <= {BRUTE_FORCE_MAX_N}, got {n}")
    G = np.vstack([instance.m_matrix, -np.eye(n), np.eye(n)])
    h = np.concatenate([instance.n_vec, np.zeros(n), np.ones(n)])
    idx = np.array(list(combinations(range(3 * n), n)))
    Gs, hs = G[idx], h[idx]
    sv = np.linalg.svd(Gs, compute_uv=False)
    ok = sv[:, -1] > 1e-10 * sv[:, 0]
    pts = np.linalg.solve(Gs[ok], hs[ok][..., None])[..., 0]
    feasible = np.all(pts @ G.T <= h + FEASIBILITY_TOL, axis=1)
    pts = pts[feasible]
    values = pts.sum(axis=1)
    best = pts[int(np.argmax(values))]
    return _solution(canonicalize(instance, best), raw_x_vec=best)


def perturbation_test(spec: FiducialSpec, xi: float, trials: int,
                      rng: np.random.Generator | None = None) -> bool:
    """Search random feasible moves away from ``x = p_S e_0`` for a better objective.

    Each sample shrinks ``x_0`` by ``kappa`` in ``[0, p_S]`` and spreads weight
    over a random subset of the other entries, scaled to stay inside the
    feasible polytope. Returns True when no feasible sample beats ``p_S``.
    """
    rng = np.random.default_rng() if rng is None else rng
    p_s = success_probability(spec, xi)
    inst = build_lp(spec, beta_coefficients(spec, xi))
    n = inst.size
    M, nv = inst.m_matrix, inst.n_vec

    kappa = rng.uniform(0.0, p_s, size=trials)
    eps = rng.exponential(size=(trials, n))
    eps[:, 0] = 0.0
    eps *= rng.random((trials, n)) < rng.uniform(0.2, 1.0, size=(trials, 1))
    base = np.zeros((trials, n))
    base[:, 0] = p_s - kappa
    room = nv[None, :] - base @ M.T
    load = eps @ M.T
    with np.errstate(divide="ignore", invalid="ignore"):
        lim = np.where(load > 0, room / load, np.inf).min(axis=1)
        lim = np.minimum(lim, np.where(eps > 0, 1.0 / eps, np.inf).min(axis=1))
    lim = np.where(np.isfinite(lim), np.maximum(lim, 0.0), 0.0)
    # half the samples sit on the polytope boundary, where a violation would show
    scale = np.where(rng.random(trials) < 0.5, lim, lim * rng.random(trials))
    x = base + scale[:, None] * eps

    feasible = (np.all(x @ M.T <= nv + 1e-12, axis=1)
                & np.all(x >= -1e-15, axis=1) & np.all(x <= 1 + 1e-12, axis=1))
    if not np.all(feasible):
        raise ArithmeticError("perturbation sampler produced infeasible points")
    return bool(np.all(x.sum(axis=1) <= p_s + 1e-9))


@dataclass(frozen=True, eq=False)
class KrausSet:
    success_ops: list
    failure_op: np.ndarray
    shifts: tuple

    def completeness_residual(self) -> float:
        n = self.failure_op.shape[0]
        total = sum(t.conj().T @ t for t in self.success_ops) + self.failure_op.conj().T @ self.failure_op
        return float(np.max(np.abs(total - np.eye(n))))

    def channel(self, state: np.ndarray) -> np.ndarray:
        """Unnormalized success-branch density matrix for a pure input."""
        out = np.zeros((state.size, state.size), dtype=complex)
        for t in self.success_ops:
            v = t @ state
            out += np.outer(v, v.conj())
        return out


def synthesize_kraus(spec: FiducialSpec, target_b: Sequence[float], solution: LpSolution,
                     target_phases: Sequence[float] | None = None) -> KrausSet:
    """Success operators ``sqrt(x_k) sum_y c_y / a_{y+k} |y><y+k|`` and one failure operator.

    ``c_y`` is the complex target coefficient, ``a_z`` the complex fiducial
    coefficient. Terms with ``a_{y+k} = 0`` are dropped since no input state
    has weight there.
    """
    n = spec.n
    b = np.asarray(target_b, dtype=float)
    theta = np.zeros(n) if target_phases is None else np.asarray(target_phases, dtype=float)
    c = b * np.exp(1j * theta)
    fid = spec.amplitudes * np.exp(1j * spec.phases)
    on = spec.support == 1

    ops, shifts = [], []
    for k, xk in enumerate(solution.x_vec):
        if xk <= 0.0:
            continue
        t = np.zeros((n, n), dtype=complex)
        for y in range(n):
            z = (y + k) % n
            if on[z]:
                t[y, z] = np.sqrt(xk) * c[y] / fid[z]
        ops.append(t)
        shifts.append(k)

    deficit = np.eye(n) - sum((t.conj().T @ t for t in ops), np.zeros((n, n), dtype=complex))
    lowest = float(np.min(np.linalg.eigvalsh((deficit + deficit.conj().T) / 2)))
    if lowest < -1e-10:
        raise ValueError(f"solution is infeasible: Kraus deficit has eigenvalue {lowest:.3g}")
    failure = np.diag(np.sqrt(np.clip(np.real(np.diag(deficit)), 0.0, None))).astype(complex)
    return KrausSet(ops, failure, tuple(shifts))


def channel_action_residual(kraus: KrausSet, spec: FiducialSpec, target: np.ndarray,
                            p: float) -> float:
    """Max entrywise gap between the success channel and ``p |beta_j><beta_j|`` over j."""
    fam = alpha_family(spec)
    k = np.arange(spec.n)
    worst = 0.0
    for j in range(spec.n):
        beta = target * np.exp(2j * np.pi * j * k / spec.n)
        diff = kraus.channel(fam[j]) - p * np.outer(beta, beta.conj())
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst
