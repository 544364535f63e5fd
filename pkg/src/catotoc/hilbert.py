"""Finite torus Hilbert space: clock/shift operators, X/P, DFT, partial traces.

Conventions (fixed here, asserted in the test suite):

* Position basis |q_j>, j = 0..n-1, at q = j/n.  Effective Planck
  constant hbar = 1/(2 pi n).
* Clock operator U = diag(exp(2 pi i q / n)); shift operator V maps
  |q> -> |q+1 mod n>.  Weyl relation: U V = exp(2 pi i / n) V U.
* DFT sign: <q_j|p_k> = exp(+2 pi i j k / n) / sqrt(n).  With this sign
  the momentum operator P = (V - V^dag)/2i has eigenvalue -sin(2 pi k/n)
  on momentum index k, and F^dag X F = P while F^dag P F = -X.
* Bipartite index ordering: subsystem 1 is the slow (outer) index,
  flat index = j1 * n2 + j2.
"""

import numpy as np

from . import config
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidDimensionError,
    NumericalHealthError,
)

__all__ = [
    "effective_hbar",
    "check_dim",
    "shift_operator",
    "clock_operator",
    "position_operator",
    "momentum_operator",
    "dft_matrix",
    "tensor_product",
    "two_dof_position",
    "two_dof_momentum",
    "partial_trace",
    "partial_trace_pure",
    "normalize",
    "assert_unitary",
    "assert_hermitian",
    "assert_density_matrix",
]


def check_dim(n):
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidDimensionError(f"Hilbert dimension must be an integer >= 2, got {n!r}")
    return int(n)


def effective_hbar(n):
    """hbar fixed by the torus quantization condition n = 1/(2 pi hbar)."""
    n = check_dim(n)
    return 1.0 / (2.0 * np.pi * n)


def assert_unitary(u, tol=None, name="operator"):
    tol = config.CONSTRUCTION_TOL if tol is None else tol
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise NumericalHealthError(f"{name} not unitary: max|U^dag U - I| = {dev:.3e} > {tol:.1e}")
    return dev


def assert_hermitian(a, tol=None, name="operator"):
    tol = config.CONSTRUCTION_TOL if tol is None else tol
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NumericalHealthError(f"{name} not hermitian: max|A - A^dag| = {dev:.3e} > {tol:.1e}")
    return dev


def assert_density_matrix(rho, tol=1e-12, eig_tol=1e-10):
    """Hermiticity, unit trace, and near-positivity of a density matrix."""
    assert_hermitian(rho, tol=tol, name="density matrix")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise NumericalHealthError(f"density matrix trace {tr!r} != 1 beyond {tol:.1e}")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -eig_tol:
        raise NumericalHealthError(f"density matrix has eigenvalue {lam_min:.3e} < -{eig_tol:.1e}")


def shift_operator(n):
    """V with <q'|V|q> = 1 iff q' = q+1 mod n (cyclic one-site shift)."""
    n = check_dim(n)
    v = np.zeros((n, n), dtype=complex)
    q = np.arange(n)
    v[(q + 1) % n, q] = 1.0
    return v


def clock_operator(n):
    """Diagonal U = diag(exp(2 pi i q / n)), q = 0..n-1."""
    n = check_dim(n)
    return np.diag(np.exp(2j * np.pi * np.arange(n) / n))


def position_operator(n):
    """X = (U - U^dag)/2i = diag(sin(2 pi q / n)): torus position observable."""
    n = check_dim(n)
    return np.diag(np.sin(2.0 * np.pi * np.arange(n) / n)).astype(complex)


def momentum_operator(n):
    """P = (V - V^dag)/2i; diagonalized by the DFT with eigenvalues -sin(2 pi k/n)."""
    n = check_dim(n)
    v = shift_operator(n)
    p = (v - v.conj().T) / 2j
    if config.construction_checks:
        assert_hermitian(p, name="momentum operator")
    return p


def dft_matrix(n):
    """F[j,k] = exp(+2 pi i j k / n)/sqrt(n), columns are momentum states."""
    n = check_dim(n)
    j = np.arange(n)
    f = np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    if config.construction_checks:
        assert_unitary(f, name="DFT matrix")
    return f


def tensor_product(a, b):
    """Kronecker product with subsystem 1 on the slow (outer) index."""
    dim = a.shape[0] * b.shape[0]
    if dim > config.MAX_DENSE_DIM:
        raise BudgetExceededError(
            f"tensor product dimension {dim} exceeds budget {config.MAX_DENSE_DIM}"
        )
    return np.kron(a, b)


def two_dof_position(n):
    """X1 (x) X2 on the bipartite space (diagonal)."""
    x = position_operator(n)
    return tensor_product(x, x)


def two_dof_momentum(n):
    """P1 (x) P2 on the bipartite space."""
    p = momentum_operator(n)
    return tensor_product(p, p)


def _split_dims(dim, dims):
    n1, n2 = dims
    if n1 * n2 != dim:
        raise DimensionMismatchError(f"dims {dims} do not factor dimension {dim}")
    return n1, n2


def partial_trace(rho, dims, keep):
    """Reduced density matrix of subsystem ``keep`` (1 or 2)."""
    n1, n2 = _split_dims(rho.shape[0], dims)
    r4 = rho.reshape(n1, n2, n1, n2)
    if keep == 1:
        return np.einsum("abcb->ac", r4)
    if keep == 2:
        return np.einsum("abad->bd", r4)
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")


def partial_trace_pure(psi, dims, keep):
    """Fast reduced density matrix for a pure bipartite state.

    Reshapes the amplitudes into an n1 x n2 matrix M; the marginals are
    M M^dag and M^T conj(M).  Agrees with partial_trace on |psi><psi|.
    """
    n1, n2 = _split_dims(psi.shape[0], dims)
    m = psi.reshape(n1, n2)
    if keep == 1:
        return m @ m.conj().T
    if keep == 2:
        return m.T @ m.conj()
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")


def normalize(psi):
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return psi / nrm
