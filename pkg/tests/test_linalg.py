import numpy as np
import pytest

from entgen import linalg

from conftest import bell_phi, random_density


def test_tensor_identity():
    assert np.allclose(linalg.tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_diagonal():
    out = linalg.tensor_product(np.diag([1.0, 2.0]), np.diag([1.0, 3.0]))
    assert np.allclose(out, np.diag([1.0, 3.0, 2.0, 6.0]))


def test_tensor_shapes_and_leading_entry(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    out = linalg.tensor_product(a, b)
    assert out.shape == (6, 6)
    assert out[0, 0] == pytest.approx(a[0, 0] * b[0, 0])


def test_tensor_associative(rng):
    for _ in range(10):
        mats = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3)]
        left = linalg.tensor_product(linalg.tensor_product(mats[0], mats[1]), mats[2])
        right = linalg.tensor_product(mats[0], linalg.tensor_product(mats[1], mats[2]))
        assert np.abs(left - right).max() < 1e-12


def test_partial_trace_bell():
    assert np.allclose(linalg.partial_trace(bell_phi(), [2, 2], keep=[0]), np.eye(2) / 2)


def test_partial_trace_product(rng):
    rho_a = random_density(rng, 2)
    rho_b = random_density(rng, 3)
    combined = linalg.tensor_product(rho_a, 0.7 * rho_b)
    reduced = linalg.partial_trace(combined, [2, 3], keep=[0])
    assert np.abs(reduced - 0.7 * rho_a).max() < 1e-12


def test_partial_trace_matches_direct_summation(rng):
    # Independent oracle: explicit loop over the traced index.
    v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    reduced = linalg.partial_trace(rho, [2, 3], keep=[0])
    direct = np.zeros((2, 2), dtype=complex)
    t = rho.reshape(2, 3, 2, 3)
    for i in range(2):
        for j in range(2):
            for k in range(3):
                direct[i, j] += t[i, k, j, k]
    assert np.abs(reduced - direct).max() < 1e-12
    assert reduced.trace() == pytest.approx(1.0, abs=1e-12)


def test_partial_trace_keeps_second_subsystem(rng):
    rho_a = random_density(rng, 2)
    rho_b = random_density(rng, 3)
    combined = linalg.tensor_product(rho_a, rho_b)
    assert np.abs(linalg.partial_trace(combined, [2, 3], keep=[1]) - rho_b).max() < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError, match="does not match"):
        linalg.partial_trace(np.eye(5), [2, 2], keep=[0])


def test_hermitian_eig_diagonal():
    w, _ = linalg.hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [3.0, 2.0, 1.0])


def test_hermitian_eig_pauli_x():
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    w, v = linalg.hermitian_eig(x)
    assert np.allclose(w, [1.0, -1.0])
    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert abs(abs(np.vdot(v[:, 0], plus)) - 1.0) < 1e-12


def test_hermitian_eig_reconstruction(rng):
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = h + h.conj().T
    w, v = linalg.hermitian_eig(h)
    assert np.linalg.norm((v * w) @ v.conj().T - h) < 1e-9
    assert np.abs(v.conj().T @ v - np.eye(4)).max() < 1e-10
    assert sum(w) == pytest.approx(h.trace().real, abs=1e-10)
    for i in range(4):
        assert np.linalg.norm(h @ v[:, i] - w[i] * v[:, i]) < 1e-9 * np.linalg.norm(h)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValueError, match="not Hermitian"):
        linalg.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_sqrt_identity():
    assert np.allclose(linalg.psd_sqrt(np.eye(4)), np.eye(4))


def test_psd_sqrt_diagonal():
    assert np.allclose(linalg.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_psd_sqrt_squares_back(rng):
    m = random_density(rng, 5)
    s = linalg.psd_sqrt(m)
    assert np.linalg.norm(s @ s - m) < 1e-9
    assert linalg.hermiticity_defect(s) < 1e-12


def test_psd_sqrt_rejects_negative():
    with pytest.raises(ValueError, match="not PSD"):
        linalg.psd_sqrt(np.diag([1.0, -1e-6]))


def test_partial_trace_of_tensor_product(rng):
    a = random_density(rng, 2)
    b = random_density(rng, 2)
    combined = linalg.tensor_product(a, b)
    assert np.abs(linalg.partial_trace(combined, [2, 2], keep=[0]) - a).max() < 1e-12
