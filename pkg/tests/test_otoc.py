"""Correlators: Heisenberg evolution, OTOC paths, split identity, basis sum."""

import numpy as np
import pytest

from catotoc import catmap, entropy, hilbert, otoc, states
from catotoc.errors import InvalidSpecError, NumericalHealthError

from conftest import random_hermitian, random_state


def _propagator(dynamics, n, k=0.25, kc=0.5):
    return catmap.propagator_2d(catmap.CoupledSpec.for_dynamics(dynamics, n=n, k=k, kc=kc))


def _product(n, c1=(0.3, 0.7), c2=(0.6, 0.2)):
    return states.product_state(states.coherent_state(n, c1), states.coherent_state(n, c2))


def test_heisenberg_t0_and_identity():
    rng = np.random.default_rng(2)
    u = catmap.propagator_1d(catmap.hyperbolic_spec(), 8)
    a = random_hermitian(rng, 8)
    assert np.abs(otoc.heisenberg_evolve(a, u, 0) - a).max() == 0.0
    ident = np.eye(8, dtype=complex)
    assert np.abs(otoc.heisenberg_evolve(ident, u, 7) - ident).max() < 1e-12


def test_heisenberg_preserves_spectrum():
    rng = np.random.default_rng(8)
    u = catmap.propagator_1d(catmap.hyperbolic_spec(), 8)
    a = random_hermitian(rng, 8)
    at = otoc.heisenberg_evolve(a, u, 5)
    assert np.abs(at - at.conj().T).max() < 1e-9
    before = np.sort(np.linalg.eigvalsh(a))
    after = np.sort(np.linalg.eigvalsh(at))
    assert np.abs(before - after).max() < 1e-9


def test_otoc_of_commuting_pair_vanishes():
    u = _propagator("hh", 4)
    ident = np.eye(16, dtype=complex)
    for t in (0, 1, 3):
        assert abs(otoc.otoc_full(ident, ident, u, t)) < 1e-14


def test_otoc_nonnegative_random_pairs():
    rng = np.random.default_rng(12)
    u = catmap.propagator_1d(catmap.hyperbolic_spec(), 8)
    for _ in range(100):
        a = random_hermitian(rng, 8)
        b = random_hermitian(rng, 8)
        assert otoc.otoc_full(a, b, u, 2) >= -1e-10


def test_state_average_matches_scaled_trace_average():
    """For pure rho0 and B = rho0 the state OTOC is (dim/2) x the
    normalized-trace OTOC."""
    n = 8
    u = _propagator("hh", n)
    psi0 = _product(n)
    rho0 = states.density_of(psi0)
    x2 = hilbert.two_dof_position(n)
    for t in (0, 1, 3):
        c_state = otoc.otoc_full(x2, "rho0", u, t, average="state", psi0=psi0)
        c_trace = otoc.otoc_full(x2, rho0, u, t, average="trace")
        assert c_state == pytest.approx(0.5 * (n * n) * c_trace, abs=1e-9)


def test_split_identity_random_pairs():
    # C(t) = -2 [C4 - C2] / dim with plain-trace correlators
    rng = np.random.default_rng(21)
    u = catmap.propagator_1d(catmap.hyperbolic_spec(), 4)
    for _ in range(50):
        a = random_hermitian(rng, 4)
        b = random_hermitian(rng, 4)
        for t in range(6):
            c = otoc.otoc_full(a, b, u, t)
            c2, c4 = otoc.correlators_2_4(a, b, u, t)
            assert abs(c + 2.0 * (c4.real - c2) / 4.0) < 1e-10


def test_split_identity_for_canonical_pair():
    n = 8
    u = _propagator("hh", n)
    x2 = hilbert.two_dof_position(n)
    p2 = hilbert.two_dof_momentum(n)
    for t in range(11):
        c = otoc.otoc_full(x2, p2, u, t)
        c2, c4 = otoc.correlators_2_4(x2, p2, u, t)
        assert abs(c + 2.0 * (c4.real - c2) / (n * n)) < 1e-8
        assert abs(c4.imag) < 1e-8


def test_two_point_correlator_direct_trace():
    n = 4
    u = _propagator("hh", n)
    x2 = hilbert.two_dof_position(n)
    p2 = hilbert.two_dof_momentum(n)
    c2, _ = otoc.correlators_2_4(x2, p2, u, 0)
    direct = np.trace(x2 @ x2 @ p2 @ p2).real
    assert c2 == pytest.approx(direct, abs=1e-12)


def test_diagonal_pair_has_no_commutator_at_t0():
    rng = np.random.default_rng(4)
    u = catmap.propagator_1d(catmap.elliptic_spec(), 6)
    a = np.diag(rng.normal(size=6)).astype(complex)
    b = np.diag(rng.normal(size=6)).astype(complex)
    c2, c4 = otoc.correlators_2_4(a, b, u, 0)
    assert c4.real == pytest.approx(c2, abs=1e-12)
    assert abs(otoc.otoc_full(a, b, u, 0)) < 1e-12


def test_correlator_sample_enforces_health():
    rng = np.random.default_rng(14)
    u = catmap.propagator_1d(catmap.hyperbolic_spec(), 8)
    a = random_hermitian(rng, 8)
    b = random_hermitian(rng, 8)
    sample = otoc.correlator_sample(a, b, u, 3)
    assert sample.split_residual(8) < 1e-10
    # a non-hermitian operator breaks the split identity and must be caught
    bad = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    with pytest.raises(NumericalHealthError):
        otoc.correlator_sample(bad, b, u, 3)


def test_vector_path_matches_dense_path():
    """Structured vector evaluation vs dense Heisenberg matrices, t <= 10."""
    n = 8
    for dynamics in ("ee", "he", "hh"):
        spec = catmap.CoupledSpec.for_dynamics(dynamics, n=n)
        prop = catmap.CoupledPropagator(spec)
        dense = prop.dense(check=False)
        psi0 = _product(n)
        x2 = hilbert.two_dof_position(n)
        for t in (0, 2, 5, 10):
            fast = otoc.otoc_full(x2, "rho0", prop, t, average="state", psi0=psi0)
            at = otoc.heisenberg_evolve(x2, dense, t)
            mean = np.vdot(psi0, at @ psi0)
            slow = np.vdot(psi0, at @ (at @ psi0)).real - abs(mean) ** 2
            assert fast == pytest.approx(slow, abs=1e-9)


def test_clock_shift_expectations_brute_force():
    rng = np.random.default_rng(33)
    n1, n2 = 3, 3
    psi = random_state(rng, n1 * n2)
    vals = otoc.clock_shift_expectations(psi, (n1, n2))
    uc = hilbert.clock_operator(n2)
    vs = hilbert.shift_operator(n2)
    for a in range(n2):
        for b in range(n2):
            m = np.linalg.matrix_power(uc, a) @ np.linalg.matrix_power(vs, b) / np.sqrt(n2)
            expect = np.vdot(psi, hilbert.tensor_product(np.eye(n1), m) @ psi)
            assert vals[a, b] == pytest.approx(expect, abs=1e-12)


def test_re_sum_is_one_for_product_state():
    psi0 = _product(8)
    u = _propagator("hh", 8)
    assert otoc.otoc_re_sum(psi0, u, 0, (8, 8)) == pytest.approx(1.0, abs=1e-12)


def test_re_sum_matches_subsystem_purity():
    n = 8
    u = _propagator("hh", n)
    psi0 = _product(n)
    psi4 = psi0.copy()
    for _ in range(4):
        psi4 = u @ psi4
    rho1 = hilbert.partial_trace_pure(psi4, (n, n), keep=1)
    target = np.trace(rho1 @ rho1).real
    got = otoc.otoc_re_sum(psi0, u, 4, (n, n))
    assert abs(got - target) < 1e-8
    assert abs(got - np.exp(-entropy.renyi2(rho1))) < 1e-8


def test_re_sum_stays_one_without_coupling():
    # K = 0, Kc = 0: uncoupled cat maps never entangle a product state
    u = _propagator("hh", 8, k=0.0, kc=0.0)
    psi0 = _product(8)
    for t in (1, 3, 10):
        assert otoc.otoc_re_sum(psi0, u, t, (8, 8)) == pytest.approx(1.0, abs=1e-9)


def test_re_sum_rejects_entangled_initial_state():
    rng = np.random.default_rng(44)
    psi = random_state(rng, 16)  # generic state: not a product
    u = _propagator("hh", 4)
    with pytest.raises(InvalidSpecError):
        otoc.otoc_re_sum(psi, u, 1, (4, 4))


def test_rescale_factor_closed_form():
    rng = np.random.default_rng(55)
    ref = rng.normal(size=20)
    assert otoc.rescale_factor(ref, ref) == pytest.approx(1.0, abs=1e-14)
    assert otoc.rescale_factor(2.0 * ref, ref) == pytest.approx(0.5, abs=1e-14)
    series = rng.normal(size=20)
    expected = max(0.0, float(np.dot(series, ref) / np.dot(series, series)))
    assert otoc.rescale_factor(series, ref) == pytest.approx(expected, abs=1e-14)


def test_rescale_factor_clamps_and_rejects():
    ref = np.ones(5)
    assert otoc.rescale_factor(-ref, ref) == 0.0
    with pytest.raises(ValueError):
        otoc.rescale_factor(np.zeros(5), ref)
    with pytest.raises(Exception):
        otoc.rescale_factor(np.ones(4), ref)


def test_rescale_for_comparison_applies_factor():
    series = np.array([1.0, 2.0, 3.0])
    out = otoc.rescale_for_comparison(series, 2.0 * series)
    assert np.abs(out - 2.0 * series).max() < 1e-14
