import math

import numpy as np
import pytest

import holosep


def test_expm_skew_pauli_x():
    x = -1j * math.pi * np.array([[0, 1], [1, 0]], dtype=complex)
    np.testing.assert_allclose(holosep.expm_skew(x), -np.eye(2), atol=1e-12)


def test_expm_skew_rejects_hermitian_input():
    with pytest.raises(holosep.PreconditionError):
        holosep.expm_skew(np.eye(2, dtype=complex))


def test_polar_recovers_factors():
    rng = np.random.default_rng(3)
    u = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    p, q = holosep.polar_decompose(u)
    np.testing.assert_allclose(p @ q, u, atol=1e-12)
    np.testing.assert_allclose(q.conj().T @ q, np.eye(3), atol=1e-12)
    assert np.linalg.eigvalsh(p).min() > -1e-12


def test_commutator_norm_pauli():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.diag([1, -1]).astype(complex)
    assert holosep.commutator_norm(x, z) == pytest.approx(2 * math.sqrt(2))


def test_lambda_case_ii_cyclic_holonomy():
    r = holosep.lambda_case("ii", omega0=math.sqrt(3), delta=1.0, tau=math.pi / 2)
    assert r["classification"] == "case_ii"
    np.testing.assert_allclose(r["w_direct"], np.diag([1, 1j]), atol=1e-6)
    np.testing.assert_allclose(r["overlap"], np.eye(2), atol=1e-7)


def test_lambda_case_iii_matches_closed_form():
    eta = math.pi / 3
    r = holosep.lambda_case("iii", omega0=math.sqrt(3), delta=1.0, tau=math.pi / 2, eta=eta)
    ref = holosep.case_iii_analytic(math.sqrt(3), 1.0, eta, math.pi / 2)
    assert r["classification"] == "case_iii"
    np.testing.assert_allclose(r["holonomic_factor"], ref["holonomic"], atol=1e-6)
    np.testing.assert_allclose(r["dynamical_factor"], ref["dynamical"], atol=1e-6)


def test_case_i_analytic_resonant():
    np.testing.assert_allclose(holosep.case_i_analytic(1.0, 0.0, math.pi), -np.eye(2), atol=1e-12)


def test_generic_driven_instance_is_not_separable():
    rng = np.random.default_rng(11)

    def herm(n):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return (a + a.conj().T) / 2

    psi0, _ = np.linalg.qr(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)))
    r = holosep.decompose_driven(herm(4), herm(4), 1.0, psi0, tau=1.0, steps=2048)
    assert r["product_residual"] <= 1e-6
    assert r["separation_residual"] > 1e-2
    assert r["classification"] == "non_separable"
