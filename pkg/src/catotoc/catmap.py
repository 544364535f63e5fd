"""Perturbed cat maps on the torus and their quantized propagators.

One degree of freedom is a unimodular integer matrix M acting on (q, p)
mod 1 with a sinusoidal momentum kick of strength K.  The quantum map in
the position basis is

    U[j,k] = A exp[(i pi/(n M12)) (M11 j^2 - 2 j k + M22 k^2)]
               * exp[(i K n / 2 pi) cos(2 pi j / n)],
    A = [1/(i n M12)]^(1/2)  (principal branch),

with the kick phase attached to the output (row) index j.  Two degrees
of freedom couple through a diagonal phase
C[j1,j2] = exp[(i n Kc / 2 pi) cos(2 pi (j1+j2)/n)] multiplying the rows
of U1 (x) U2.

The full n^2 x n^2 propagator is rarely needed: apply_coupled_propagator
applies it (or its inverse) to states and operators through n x n
reshapes, without materializing the big matrix.
"""

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import BudgetExceededError, DimensionMismatchError, InvalidSpecError, UnsupportedMapError
from .hilbert import assert_unitary, check_dim

__all__ = [
    "MapSpec",
    "CoupledSpec",
    "hyperbolic_spec",
    "elliptic_spec",
    "propagator_1d",
    "kick_phases",
    "coupling_phases",
    "coupling_matrix",
    "propagator_2d",
    "apply_coupled_propagator",
]

HYPERBOLIC_MATRIX = ((2, 1), (3, 2))
ELLIPTIC_MATRIX = ((0, 1), (-1, 0))


@dataclass(frozen=True)
class MapSpec:
    """One torus degree of freedom: integer matrix entries and kick strength."""

    m11: int
    m12: int
    m21: int
    m22: int
    k: float = 0.25

    def __post_init__(self):
        det = self.m11 * self.m22 - self.m12 * self.m21
        if det != 1:
            raise InvalidSpecError(f"map matrix must have determinant 1, got {det}")
        if abs(self.trace) == 2:
            raise UnsupportedMapError("parabolic maps (|trace| = 2) are not supported")

    @classmethod
    def from_matrix(cls, m, k=0.25):
        (a, b), (c, d) = m
        return cls(int(a), int(b), int(c), int(d), float(k))

    @property
    def matrix(self):
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=float)

    @property
    def trace(self):
        return self.m11 + self.m22

    @property
    def is_hyperbolic(self):
        return abs(self.trace) > 2

    @property
    def classification(self):
        return "hyperbolic" if self.is_hyperbolic else "elliptic"


def hyperbolic_spec(k=0.25):
    return MapSpec.from_matrix(HYPERBOLIC_MATRIX, k)


def elliptic_spec(k=0.25):
    return MapSpec.from_matrix(ELLIPTIC_MATRIX, k)


@dataclass(frozen=True)
class CoupledSpec:
    """Two map specs, coupling strength, and the per-DOF Hilbert dimension."""

    spec1: MapSpec
    spec2: MapSpec
    kc: float = 0.5
    n: int = 64

    def __post_init__(self):
        check_dim(self.n)
        if not np.isfinite(self.kc):
            raise InvalidSpecError(f"coupling strength must be finite, got {self.kc!r}")

    @classmethod
    def for_dynamics(cls, dynamics, n=64, k=0.25, kc=0.5):
        """'hh', 'he', or 'ee' with the first letter naming subsystem 1."""
        key = dynamics.lower()
        makers = {"h": hyperbolic_spec, "e": elliptic_spec}
        if len(key) != 2 or key[0] not in makers or key[1] not in makers:
            raise InvalidSpecError(f"dynamics must be one of hh/he/ee, got {dynamics!r}")
        return cls(makers[key[0]](k), makers[key[1]](k), kc=kc, n=n)

    @property
    def dynamics(self):
        return self.spec1.classification[0] + self.spec2.classification[0]


def kick_phases(n, k):
    """Diagonal kick factor exp[(i K n / 2 pi) cos(2 pi j / n)], j = 0..n-1."""
    j = np.arange(n)
    return np.exp(1j * k * n / (2.0 * np.pi) * np.cos(2.0 * np.pi * j / n))


def propagator_1d(spec, n, check=None):
    """One-step quantum propagator of one perturbed cat map (n x n unitary)."""
    n = check_dim(n)
    if spec.m12 == 0:
        raise UnsupportedMapError("propagator formula requires M12 != 0")
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    quad = np.pi / (n * spec.m12) * (spec.m11 * j * j - 2.0 * j * k + spec.m22 * k * k)
    amp = (1.0 / (1j * n * spec.m12)) ** 0.5
    u = amp * np.exp(1j * quad) * kick_phases(n, spec.k)[:, None]
    do_check = config.construction_checks if check is None else check
    if do_check:
        assert_unitary(u, tol=1e-8, name=f"1-DOF propagator (n={n})")
    return u


def coupling_phases(n, kc):
    """Coupling factor on the (j1, j2) grid, returned as an n x n array."""
    n = check_dim(n)
    j1, j2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return np.exp(1j * n * kc / (2.0 * np.pi) * np.cos(2.0 * np.pi * (j1 + j2) / n))


def coupling_matrix(n, kc):
    """Dense diagonal coupling operator on the n^2-dimensional space."""
    if n * n > config.MAX_DENSE_DIM:
        raise BudgetExceededError(f"dense coupling matrix at n={n} exceeds budget")
    return np.diag(coupling_phases(n, kc).ravel())


def propagator_2d(spec, check=None):
    """Dense two-DOF propagator diag(C) (U1 (x) U2); prefer the structured apply."""
    n = spec.n
    if n * n > config.MAX_DENSE_DIM:
        raise BudgetExceededError(f"dense 2-DOF propagator at n={n} exceeds budget")
    u1 = propagator_1d(spec.spec1, n, check=check)
    u2 = propagator_1d(spec.spec2, n, check=check)
    u = np.kron(u1, u2)
    u *= coupling_phases(n, spec.kc).ravel()[:, None]
    do_check = config.construction_checks if check is None else check
    if do_check:
        assert_unitary(u, tol=1e-8, name=f"2-DOF propagator (n={n})")
    return u


class CoupledPropagator:
    """Cached factors (U1, U2, coupling phases) of one coupled-map step.

    The map is time independent, so the factors are built once and reused
    for every step; ``apply`` never materializes the n^2 x n^2 matrix.
    """

    def __init__(self, spec, check=None):
        self.spec = spec
        self.n = spec.n
        self.u1 = propagator_1d(spec.spec1, spec.n, check=check)
        self.u2 = propagator_1d(spec.spec2, spec.n, check=check)
        self.cphases = coupling_phases(spec.n, spec.kc)

    def apply(self, target, inverse=False):
        return apply_coupled_propagator(self.u1, self.u2, self.cphases, target, inverse=inverse)

    def dense(self, check=None):
        u = np.kron(self.u1, self.u2)
        u *= self.cphases.ravel()[:, None]
        do_check = config.construction_checks if check is None else check
        if do_check:
            assert_unitary(u, tol=1e-8, name=f"2-DOF propagator (n={self.n})")
        return u


def apply_coupled_propagator(u1, u2, cphases, target, inverse=False):
    """Apply U = diag(C)(U1 (x) U2) without building it.

    States (length n^2): returns U psi, or U^dag psi when ``inverse``.
    Operators (n^2 x n^2): returns U A U^dag, or U^dag A U when
    ``inverse`` (one Heisenberg step).
    """
    n1, n2 = u1.shape[0], u2.shape[0]
    dim = n1 * n2
    if target.shape[0] != dim:
        raise DimensionMismatchError(f"target dimension {target.shape[0]} != {n1}*{n2}")
    if target.ndim == 1:
        psi = target.reshape(n1, n2)
        if inverse:
            out = u1.conj().T @ (cphases.conj() * psi) @ u2.conj()
        else:
            out = cphases * (u1 @ psi @ u2.T)
        return out.reshape(dim)
    if target.ndim == 2 and target.shape[1] == dim:
        a4 = target.reshape(n1, n2, n1, n2)
        if inverse:
            # U^dag A U = (U1 x U2)^dag [cbar-rows A c-cols] (U1 x U2)
            b4 = a4 * cphases.conj()[:, :, None, None]
            b4 = b4 * cphases[None, None, :, :]
            out = np.einsum("aj,bk,abcd,cl,dm->jklm", u1.conj(), u2.conj(), b4, u1, u2, optimize=True)
        else:
            # U A U^dag = c-rows [(U1 x U2) A (U1 x U2)^dag] cbar-cols
            out = np.einsum("ja,kb,abcd,lc,md->jklm", u1, u2, a4, u1.conj(), u2.conj(), optimize=True)
            out *= cphases[:, :, None, None]
            out *= cphases.conj()[None, None, :, :]
        return out.reshape(dim, dim)
    raise DimensionMismatchError(f"target must be a vector or square matrix, got shape {target.shape}")
