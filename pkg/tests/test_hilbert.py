"""Torus Hilbert space: clock/shift algebra, DFT duality, bipartite plumbing."""

import numpy as np
import pytest

from catotoc import hilbert
from catotoc.errors import DimensionMismatchError, InvalidDimensionError, NumericalHealthError

from conftest import random_density, random_state


def test_weyl_commutation_relation():
    # U V = exp(2 pi i / n) V U for the clock and shift pair
    for n in (2, 3, 5, 8, 16):
        u = hilbert.clock_operator(n)
        v = hilbert.shift_operator(n)
        lhs = u @ v
        rhs = np.exp(2j * np.pi / n) * (v @ u)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_shift_operator_matrix_elements():
    v = hilbert.shift_operator(3)
    # |q> -> |q+1 mod 3>
    e0 = np.zeros(3, complex)
    e0[0] = 1.0
    out = v @ e0
    assert np.abs(out[1] - 1.0) < 1e-15
    assert np.abs(out[[0, 2]]).max() < 1e-15


def test_dft_is_unitary():
    for n in (4, 8, 32):
        f = hilbert.dft_matrix(n)
        assert np.abs(f.conj().T @ f - np.eye(n)).max() < 1e-12


def test_dft_exchanges_position_and_momentum():
    """F^dag X F = P and F^dag P F = -X under the +1 sign convention."""
    for n in (4, 8, 16):
        f = hilbert.dft_matrix(n)
        x = hilbert.position_operator(n)
        p = hilbert.momentum_operator(n)
        assert np.abs(f.conj().T @ x @ f - p).max() < 1e-10
        assert np.abs(f.conj().T @ p @ f + x).max() < 1e-10


def test_effective_hbar():
    assert hilbert.effective_hbar(64) == pytest.approx(1.0 / (2.0 * np.pi * 64), rel=1e-15)


def test_position_operator_is_sine_diagonal():
    x = hilbert.position_operator(8)
    expected = np.sin(2.0 * np.pi * np.arange(8) / 8)
    assert np.abs(np.diag(x).real - expected).max() < 1e-15
    assert np.abs(x - np.diag(np.diag(x))).max() == 0.0


def test_momentum_operator_hermitian():
    p = hilbert.momentum_operator(16)
    assert np.abs(p - p.conj().T).max() < 1e-14


def test_two_dof_position_is_product_diagonal():
    n = 4
    x2 = hilbert.two_dof_position(n)
    s = np.sin(2.0 * np.pi * np.arange(n) / n)
    assert np.abs(np.diag(x2).real - np.outer(s, s).ravel()).max() < 1e-14


def test_tensor_product_index_order():
    # [a (x) b]_{(j1 n2 + j2),(k1 n2 + k2)} = a[j1,k1] b[j2,k2]
    rng = np.random.default_rng(11)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    t = hilbert.tensor_product(a, b)
    assert t.shape == (12, 12)
    assert t[1 * 4 + 2, 2 * 4 + 3] == pytest.approx(a[1, 2] * b[2, 3])


def test_partial_trace_basics():
    rng = np.random.default_rng(5)
    rho = random_density(rng, 12)
    r1 = hilbert.partial_trace(rho, (3, 4), keep=1)
    r2 = hilbert.partial_trace(rho, (3, 4), keep=2)
    assert r1.shape == (3, 3)
    assert r2.shape == (4, 4)
    assert np.trace(r1).real == pytest.approx(1.0, abs=1e-12)
    assert np.trace(r2).real == pytest.approx(1.0, abs=1e-12)
    assert np.abs(r1 - r1.conj().T).max() < 1e-12


def test_partial_trace_of_product_observable():
    # Tr_2[(a (x) 1) (rho1 (x) rho2)] = a rho1
    rng = np.random.default_rng(17)
    rho1 = random_density(rng, 3)
    rho2 = random_density(rng, 4)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    big = hilbert.tensor_product(a, np.eye(4)) @ hilbert.tensor_product(rho1, rho2)
    got = hilbert.partial_trace(big, (3, 4), keep=1)
    assert np.abs(got - a @ rho1).max() < 1e-12


def test_partial_trace_pure_matches_dense():
    rng = np.random.default_rng(23)
    psi = random_state(rng, 20)
    dense = hilbert.partial_trace(np.outer(psi, psi.conj()), (4, 5), keep=1)
    fast = hilbert.partial_trace_pure(psi, (4, 5), keep=1)
    assert np.abs(dense - fast).max() < 1e-13
    # and the complementary marginal
    dense2 = hilbert.partial_trace(np.outer(psi, psi.conj()), (4, 5), keep=2)
    fast2 = hilbert.partial_trace_pure(psi, (4, 5), keep=2)
    assert np.abs(dense2 - fast2).max() < 1e-13


def test_invalid_dimension_rejected():
    with pytest.raises(InvalidDimensionError):
        hilbert.clock_operator(1)
    with pytest.raises(InvalidDimensionError):
        hilbert.check_dim(2.5)


def test_dimension_mismatch_rejected():
    rho = np.eye(6) / 6.0
    with pytest.raises(DimensionMismatchError):
        hilbert.partial_trace(rho, (4, 2), keep=1)  # 4*2 == 8 != 6


def test_assert_unitary_catches_non_unitary():
    with pytest.raises(NumericalHealthError):
        hilbert.assert_unitary(np.diag([1.0, 2.0]).astype(complex), name="bad")


def test_normalize():
    v = np.array([3.0, 4.0], complex)
    out = hilbert.normalize(v)
    assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-15)
