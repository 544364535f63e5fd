"""Coherent states on the torus and bipartite product states."""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalHealthError
from .hilbert import check_dim, normalize, tensor_product

__all__ = ["PhasePoint", "coherent_state", "product_state", "density_of"]


@dataclass(frozen=True)
class PhasePoint:
    """A point (q, p) on the unit torus; coordinates reduced mod 1."""

    q: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "q", float(self.q) % 1.0)
        object.__setattr__(self, "p", float(self.p) % 1.0)


def _as_point(center):
    if isinstance(center, PhasePoint):
        return center
    q, p = center
    return PhasePoint(q, p)


def coherent_state(n, center):
    """Periodized minimal-uncertainty Gaussian centered at (q0, p0).

    psi_j is a sum over torus images m of
    exp[-pi n (j/n - q0 - m)^2 + 2 pi i n p0 (j/n - m)], normalized to
    unit norm.  Three images per side suffice for n >= 8 (tails below
    1e-12); the window widens automatically for smaller n.
    """
    n = check_dim(n)
    c = _as_point(center)
    window = 3 if n >= 8 else 6
    x = np.arange(n) / n
    psi = np.zeros(n, dtype=complex)
    for m in range(-window, window + 1):
        psi += np.exp(-np.pi * n * (x - c.q - m) ** 2 + 2j * np.pi * n * c.p * (x - m))
    return normalize(psi)


def product_state(psi1, psi2):
    """psi1 (x) psi2 with subsystem 1 on the outer index."""
    return tensor_product(psi1, psi2)


def density_of(psi, tol=1e-10):
    """|psi><psi| for a normalized pure state."""
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > tol:
        raise NumericalHealthError(f"state norm {nrm!r} deviates from 1 beyond {tol:.1e}")
    return np.outer(psi, psi.conj())
