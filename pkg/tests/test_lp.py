import numpy as np
import pytest

from symsep.lp import (brute_force_lp, build_lp, canonicalize, channel_action_residual,
                       lp_from_coefficients, perturbation_test, shift_matrix, solve_lp,
                       synthesize_kraus)
from symsep.separation import build_map, success_probability
from symsep.states import beta_coefficients, build_fiducial, uniform_spec

from conftest import QUBIT_XI, random_spec, random_specs


def test_qubit_matrix(qubit):
    b = beta_coefficients(qubit, QUBIT_XI)
    inst = build_lp(qubit, b)
    np.testing.assert_allclose(inst.m_matrix, [[b[0] ** 2, b[1] ** 2], [b[1] ** 2, b[0] ** 2]],
                               atol=1e-15)
    np.testing.assert_allclose(inst.c_vec, [1, 1])


def test_shift_matrix():
    X = shift_matrix(4)
    for k in range(4):
        np.testing.assert_array_equal(X @ np.eye(4)[k], np.eye(4)[(k + 1) % 4])


@pytest.mark.parametrize("spec", random_specs(20, 20))
def test_circulant_structure(spec):
    inst = build_lp(spec, beta_coefficients(spec, 0.4))
    M = inst.m_matrix
    for i in range(spec.n):
        np.testing.assert_allclose(M[i], np.roll(M[0], i), atol=1e-15)
    np.testing.assert_allclose(M.sum(axis=1), 1.0, atol=1e-12)
    assert inst.n_vec.sum() == pytest.approx(1.0, abs=1e-12)


def test_build_lp_rejects(fig3):
    with pytest.raises(ValueError):
        build_lp(fig3, [0.5, 0.5])
    with pytest.raises(ValueError):
        build_lp(fig3, [0.5] * 5)
    with pytest.raises(ValueError):
        build_lp(fig3, [-0.5, 0.5, 0.5, 0.5, 0.0])


def test_qubit_solution(qubit):
    inst = build_lp(qubit, beta_coefficients(qubit, QUBIT_XI))
    sol = solve_lp(inst)
    assert sol.p_opt == pytest.approx(0.16882, abs=1e-5)
    assert sol.p_opt == pytest.approx(success_probability(qubit, QUBIT_XI), abs=1e-12)
    assert sol.leakless and sol.support == (0,)
    np.testing.assert_allclose(sol.psi_sq, [1, 0])
    assert brute_force_lp(inst).p_opt == pytest.approx(sol.p_opt, abs=1e-9)
    assert max(sol.certificate.values()) < 1e-9


def test_fig3_solution(fig3):
    inst = build_lp(fig3, beta_coefficients(fig3, 0.5))
    sol = solve_lp(inst)
    assert abs(sol.p_opt - success_probability(fig3, 0.5)) < 1e-7
    assert abs(brute_force_lp(inst).p_opt - sol.p_opt) < 1e-7
    assert sol.leakless


@pytest.mark.parametrize("xi", [0.0, 0.5, 1.0])
def test_uniform_reaches_one(xi):
    spec = uniform_spec(4)
    sol = solve_lp(build_lp(spec, beta_coefficients(spec, xi)))
    assert sol.p_opt == pytest.approx(1.0, abs=1e-12)
    # every shift is optimal here; canonical form picks e_0
    assert sol.support == (0,)


def test_brute_force_trivial():
    sol = brute_force_lp(lp_from_coefficients([1.0], [1.0]))
    assert sol.p_opt == pytest.approx(1.0)


def test_brute_force_size_limit():
    spec = uniform_spec(7)
    with pytest.raises(ValueError):
        brute_force_lp(build_lp(spec, beta_coefficients(spec, 0.5)))


def test_random_simplex_vs_enumeration():
    rng = np.random.default_rng(21)
    for _ in range(50):
        spec = random_spec(rng, n=int(rng.integers(2, 6)))
        inst = build_lp(spec, beta_coefficients(spec, float(rng.random())))
        assert abs(solve_lp(inst).p_opt - brute_force_lp(inst).p_opt) < 1e-7


def test_general_targets_vs_enumeration():
    # targets outside the one-parameter family, where leaky optima can occur
    rng = np.random.default_rng(22)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.05, 1, n)
        b = rng.uniform(0.05, 1, n)
        inst = lp_from_coefficients(a / np.linalg.norm(a), b / np.linalg.norm(b))
        sol, ref = solve_lp(inst), brute_force_lp(inst)
        assert abs(sol.p_opt - ref.p_opt) < 1e-7
        assert inst.constraint_residual(sol.x_vec) < 1e-9


def test_canonicalize_keeps_leaky_optimum():
    # no single shift of b fits under a here, the optimum mixes all three
    inst = lp_from_coefficients([0.6, 0.48, 0.64], [0.8, 0.36, 0.48])
    sol = solve_lp(inst)
    assert not sol.leakless
    np.testing.assert_allclose(canonicalize(inst, sol.raw_x_vec), sol.raw_x_vec)
    assert sol.p_opt == pytest.approx(brute_force_lp(inst).p_opt, abs=1e-12)


@pytest.mark.parametrize("xi", [0.25, 0.5, 0.75])
def test_perturbation_fig3(fig3, xi):
    assert perturbation_test(fig3, xi, 10_000, np.random.default_rng(1))


def test_perturbation_qubit_and_uniform(qubit):
    assert perturbation_test(qubit, QUBIT_XI, 10_000, np.random.default_rng(2))
    assert perturbation_test(uniform_spec(3), 0.5, 2_000, np.random.default_rng(3))


def test_kraus_leakless_is_diagonal(fig3):
    b = beta_coefficients(fig3, 0.5)
    sol = solve_lp(build_lp(fig3, b))
    ks = synthesize_kraus(fig3, b, sol)
    assert len(ks.success_ops) == 1
    t = ks.success_ops[0]
    np.testing.assert_allclose(t, np.diag(np.sqrt(sol.p_opt) * b / fig3.amplitudes), atol=1e-12)
    np.testing.assert_allclose(np.abs(t), np.abs(build_map(fig3, 0.5).kraus_success), atol=1e-12)
    assert ks.completeness_residual() < 1e-10


def test_kraus_channel_qubit(qubit):
    b = beta_coefficients(qubit, QUBIT_XI)
    sol = solve_lp(build_lp(qubit, b))
    ks = synthesize_kraus(qubit, b, sol)
    assert channel_action_residual(ks, qubit, b + 0j, sol.p_opt) < 1e-10


def test_kraus_uniform_full_success():
    spec = uniform_spec(3)
    b = beta_coefficients(spec, 1.0)
    ks = synthesize_kraus(spec, b, solve_lp(build_lp(spec, b)))
    np.testing.assert_allclose(ks.failure_op, 0, atol=1e-7)


def test_kraus_rejects_infeasible(fig3):
    b = beta_coefficients(fig3, 0.5)
    sol = solve_lp(build_lp(fig3, b))
    bad = type(sol)(sol.x_vec * 3, sol.p_opt * 3, sol.psi_sq, True)
    with pytest.raises(ValueError):
        synthesize_kraus(fig3, b, bad)


def test_kraus_leaky_solutions():
    # general targets: multi-band operators, each band y -> y + k
    rng = np.random.default_rng(23)
    for _ in range(40):
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.05, 1, n)
        a /= np.linalg.norm(a)
        b = rng.uniform(0.05, 1, n)
        b /= np.linalg.norm(b)
        spec = build_fiducial(n, a)
        sol = solve_lp(build_lp(spec, b), canonical=False)
        ks = synthesize_kraus(spec, b, sol)
        assert ks.completeness_residual() < 1e-10
        assert channel_action_residual(ks, spec, b + 0j, sol.p_opt) < 1e-9
        for k, t in zip(ks.shifts, ks.success_ops):
            band = np.zeros((n, n), dtype=bool)
            band[np.arange(n), (np.arange(n) + k) % n] = True
            assert np.all(t[~band] == 0)
            tt = t.conj().T @ t
            assert np.all(tt[~np.eye(n, dtype=bool)] == 0)


def test_kraus_with_phases():
    rng = np.random.default_rng(24)
    spec = random_spec(rng, n=4, punctured=True, phases=True)
    xi = 0.6
    b = beta_coefficients(spec, xi)
    sol = solve_lp(build_lp(spec, b))
    theta = (1 - xi) * spec.phases
    ks = synthesize_kraus(spec, b, sol, target_phases=theta)
    assert channel_action_residual(ks, spec, b * np.exp(1j * theta), sol.p_opt) < 1e-9
