import numpy as np
import pytest

from symsep.optics import H, V, assemble_stage2, hwp_sin_cos, jones_hwp, stage1_phases, synthesize
from symsep.separation import dilation, build_map, success_probability
from symsep.states import alpha_family, build_fiducial, uniform_spec

from conftest import QUBIT_XI, random_specs


def test_jones_examples():
    np.testing.assert_allclose(jones_hwp(0.0), [[1, 0], [0, -1]], atol=1e-15)
    np.testing.assert_allclose(jones_hwp(np.pi / 4), [[0, 1], [1, 0]], atol=1e-15)
    r = np.sqrt(0.5)
    np.testing.assert_allclose(jones_hwp(np.pi / 8), [[r, r], [r, -r]], atol=1e-15)
    for z in np.linspace(0, np.pi, 7):
        np.testing.assert_allclose(jones_hwp(z) @ jones_hwp(z), np.eye(2), atol=1e-15)


def test_min_mode_plate_at_45(fig3):
    lay = synthesize(fig3, 0.5)
    k_min = int(np.argmin(fig3.amplitudes))
    assert lay.zeta_angles[lay.modes.index(k_min)] == pytest.approx(np.pi / 4, abs=1e-12)
    assert np.all(lay.zeta_angles >= np.pi / 4 - 1e-12)
    assert np.all(lay.zeta_angles <= np.pi / 2 + 1e-12)
    np.testing.assert_allclose(synthesize(fig3, 0.0).zeta_angles, np.pi / 4, atol=1e-7)


@pytest.mark.parametrize("spec", random_specs(30, 20))
def test_pythagorean(spec):
    for xi in (0.0, 0.3, 1.0):
        s, c = hwp_sin_cos(spec, xi)
        np.testing.assert_allclose(s ** 2 + c ** 2, 1.0, atol=1e-14)


def test_layout_text(fig3):
    lines = synthesize(fig3, 0.5).components()
    assert len(lines) == 5 and lines[0].startswith("path 0: HWP at ")


def test_punctured_modes():
    spec = build_fiducial(4, [0.6, 0, 0.8, 0])
    lay = synthesize(spec, 0.5)
    assert lay.modes == (0, 2)
    u = assemble_stage2(lay)
    np.testing.assert_array_equal(u[2:4, 2:4], np.eye(2))


def test_stage1_phases():
    spec = uniform_spec(4)
    np.testing.assert_allclose(stage1_phases(spec, 1), [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    np.testing.assert_allclose(stage1_phases(spec, 0), 0)


def test_rejects_phases():
    with pytest.raises(ValueError):
        synthesize(build_fiducial(2, [0.6, 0.8], [0.0, 1.0]), 0.5)


@pytest.mark.parametrize("spec", random_specs(31, 50))
def test_network_equals_dilation(spec):
    xi = 0.65
    u = assemble_stage2(synthesize(spec, xi))
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2 * spec.n), atol=1e-12)
    dil = dilation(build_map(spec, xi))
    for j, state in enumerate(alpha_family(spec).states):
        inp = np.zeros(2 * spec.n, dtype=complex)
        inp[V::2] = state
        np.testing.assert_allclose(u @ inp, dil.apply(state).reshape(-1), atol=1e-10)


def test_uniform_network_is_flip():
    spec = uniform_spec(3)
    u = assemble_stage2(synthesize(spec, 0.7))
    np.testing.assert_allclose(u, np.kron(np.eye(3), [[0, 1], [1, 0]]), atol=1e-12)


def test_qubit_success_projection(qubit):
    u = assemble_stage2(synthesize(qubit, QUBIT_XI))
    for state in alpha_family(qubit).states:
        inp = np.zeros(4, dtype=complex)
        inp[V::2] = state
        out = u @ inp
        p = np.sum(np.abs(out[H::2]) ** 2)
        assert p == pytest.approx(0.16882, abs=1e-5)
        assert p == pytest.approx(success_probability(qubit, QUBIT_XI), abs=1e-12)
