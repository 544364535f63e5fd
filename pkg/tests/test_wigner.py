"""Operator-Schmidt spectra, separability entropy, and phase-space grids."""

import numpy as np
import pytest

from catotoc import catmap, entropy, hilbert, states, wigner
from catotoc.errors import BudgetExceededError, NumericalHealthError

from conftest import random_density, random_state


def bell_state():
    psi = np.zeros(4, complex)
    psi[0] = psi[3] = 1.0 / np.sqrt(2.0)
    return psi


def test_reshuffle_layout():
    rng = np.random.default_rng(3)
    rho = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    r = wigner.reshuffle(rho, (2, 3))
    # R[(j1, k1), (j2, k2)] = rho[(j1, j2), (k1, k2)]
    assert r.shape == (4, 9)
    assert r[1 * 2 + 0, 2 * 3 + 1] == rho[1 * 3 + 2, 0 * 3 + 1]


def test_product_density_is_schmidt_rank_one():
    rng = np.random.default_rng(7)
    rho = np.kron(random_density(rng, 3), random_density(rng, 4))
    spec = wigner.operator_schmidt(rho, (3, 4))
    assert spec.values[0] > 1e-3
    assert np.abs(spec.values[1:]).max() < 1e-12


def test_bell_schmidt_values():
    # reshuffled Bell projector has four singular values 1/2; Parseval
    # demands sum(sigma^2) = Tr rho^2 = 1 for a pure state
    rho = states.density_of(bell_state())
    spec = wigner.operator_schmidt(rho, (2, 2))
    assert np.abs(spec.values - 0.5).max() < 1e-12
    assert spec.weight == pytest.approx(1.0, abs=1e-12)


def test_schmidt_parseval():
    rng = np.random.default_rng(15)
    for _ in range(10):
        rho = random_density(rng, 9)
        spec = wigner.operator_schmidt(rho, (3, 3))
        assert spec.weight == pytest.approx(np.trace(rho @ rho).real, abs=1e-10)


def test_schmidt_probabilities_and_entropy():
    spec = wigner.SchmidtSpectrum(values=np.array([0.3, 0.3, 0.3]), dims=(2, 2))
    assert np.sum(spec.probabilities()) == pytest.approx(1.0, abs=1e-14)
    assert spec.entropy() == pytest.approx(np.log(3.0), abs=1e-12)
    with pytest.raises(NumericalHealthError):
        wigner.SchmidtSpectrum(values=np.zeros(2), dims=(2, 2)).probabilities()


def test_wse_product_is_zero_and_bell_is_2ln2():
    rng = np.random.default_rng(22)
    rho = np.kron(random_density(rng, 2), random_density(rng, 2))
    assert wigner.wse(rho, (2, 2)) == pytest.approx(0.0, abs=1e-10)
    assert wigner.wse(states.density_of(bell_state()), (2, 2)) == pytest.approx(
        2.0 * np.log(2.0), abs=1e-12
    )


def test_wse_pure_relation():
    """For pure global states the separability entropy is twice the
    entanglement entropy of a marginal."""
    rng = np.random.default_rng(29)
    psi = random_state(rng, 64)
    full = wigner.wse(np.outer(psi, psi.conj()), (8, 8))
    s_vn = entropy.von_neumann(hilbert.partial_trace_pure(psi, (8, 8), keep=1))
    assert abs(full - 2.0 * s_vn) < 1e-9


def test_wse_pure_fast_matches_full_path():
    rng = np.random.default_rng(31)
    assert wigner.wse_pure_fast(bell_state(), (2, 2)) == pytest.approx(
        2.0 * np.log(2.0), abs=1e-12
    )
    prod = states.product_state(
        states.coherent_state(8, (0.1, 0.9)), states.coherent_state(8, (0.4, 0.2))
    )
    assert wigner.wse_pure_fast(prod, (8, 8)) == pytest.approx(0.0, abs=1e-10)
    for _ in range(20):
        psi = random_state(rng, 64)
        fast = wigner.wse_pure_fast(psi, (8, 8))
        full = wigner.wse(np.outer(psi, psi.conj()), (8, 8))
        assert abs(fast - full) < 1e-9


def test_grid_of_position_eigenstate():
    e0 = np.zeros(4, complex)
    e0[0] = 1.0
    grid = wigner.wigner_grid(states.density_of(e0))
    marg = grid.position_marginal()
    assert marg[0] == pytest.approx(1.0, abs=1e-12)
    assert np.abs(marg[1:]).max() < 1e-12


def test_grid_of_maximally_mixed_state():
    # uniform up to the convention's lattice weights: all weight sits on
    # the even-even sublattice, equally
    n = 8
    grid = wigner.wigner_grid(np.eye(n) / n).values
    assert np.abs(grid[::2, ::2] - 1.0 / n**2).max() < 1e-12
    assert np.abs(grid[1::2, :]).max() < 1e-12
    assert np.abs(grid[:, 1::2]).max() < 1e-12


def test_grid_peak_of_centered_coherent_state():
    """The doubled grid carries exact ghost images displaced by n, so the
    maximum is attained on a set of cells; the physical cell (2 n q0, 2 n p0)
    must be one of them."""
    n = 8
    grid = wigner.wigner_grid(states.density_of(states.coherent_state(n, (0.5, 0.5)))).values
    top = grid.max()
    peak_cells = np.argwhere(grid > top - 1e-12)
    assert [n, n] in peak_cells.tolist()
    # ghost symmetry of the representation
    assert np.abs(np.abs(grid) - np.abs(np.roll(grid, n, axis=0))).max() < 1e-12
    assert np.abs(np.abs(grid) - np.abs(np.roll(grid, n, axis=1))).max() < 1e-12


def test_grid_marginals_random_density():
    rng = np.random.default_rng(41)
    n = 8
    rho = random_density(rng, n)
    grid = wigner.wigner_grid(rho)
    assert np.abs(grid.position_marginal() - np.diag(rho).real).max() < 1e-8
    f = hilbert.dft_matrix(n)
    p_pop = np.diag(f.conj().T @ rho @ f).real
    assert np.abs(grid.momentum_marginal() - p_pop).max() < 1e-8
    assert grid.values.sum() == pytest.approx(1.0, abs=1e-10)


def test_grid_overlap_formula():
    rng = np.random.default_rng(47)
    n = 8
    for _ in range(20):
        a = random_state(rng, n)
        b = random_state(rng, n)
        ga = wigner.wigner_grid(states.density_of(a))
        gb = wigner.wigner_grid(states.density_of(b))
        assert n * ga.overlap(gb) == pytest.approx(abs(np.vdot(a, b)) ** 2, abs=1e-8)


def test_grid_rejects_non_hermitian_input():
    rng = np.random.default_rng(53)
    junk = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    with pytest.raises(NumericalHealthError):
        wigner.wigner_grid(junk)


def test_kernel_tensor_matches_direct_grid():
    rng = np.random.default_rng(59)
    n = 4
    rho = random_density(rng, n)
    t = wigner.wigner_kernel(n)
    via_kernel = np.einsum("abjk,jk->ab", t, rho)
    assert np.abs(via_kernel.imag).max() < 1e-12
    assert np.abs(via_kernel.real - wigner.wigner_grid(rho).values).max() < 1e-12


def test_crosscheck_product_state_rank_one():
    prod = states.product_state(
        states.coherent_state(4, (0.2, 0.6)), states.coherent_state(4, (0.8, 0.3))
    )
    rho = states.density_of(prod)
    svals = wigner.wigner_spectrum(rho, (4, 4))
    assert svals[1] / svals[0] < 1e-10
    spec = wigner.operator_schmidt(rho, (4, 4))
    assert spec.values[1] / spec.values[0] < 1e-10


def test_crosscheck_random_pure_state():
    rng = np.random.default_rng(61)
    rho = states.density_of(random_state(rng, 16))
    report = wigner.wigner_schmidt_crosscheck(rho, (4, 4))
    assert report["max_rel_diff"] < 1e-6
    assert report["entropy_schmidt"] == pytest.approx(report["entropy_wigner"], abs=1e-9)


def test_crosscheck_evolved_state():
    n = 8
    u = catmap.propagator_2d(catmap.CoupledSpec.for_dynamics("hh", n=n))
    psi = states.product_state(
        states.coherent_state(n, (0.5, 0.5)), states.coherent_state(n, (0.5, 0.5))
    )
    for _ in range(3):
        psi = u @ psi
    report = wigner.wigner_schmidt_crosscheck(states.density_of(psi), (n, n))
    assert report["max_rel_diff"] < 1e-6


def test_two_system_grid_budget():
    with pytest.raises(BudgetExceededError):
        wigner.wigner_tensor_2dof(np.eye(256) / 256.0, (16, 16))
