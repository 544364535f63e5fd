"""Entanglement scalars of reduced density matrices and RMT references.

All entropies are in nats.  Eigenvalues in [-1e-10, 0) are clipped to 0
before logs; anything more negative raises NumericalHealthError rather
than being silently accepted.
"""

from collections import namedtuple

import numpy as np

from .errors import NumericalHealthError

__all__ = [
    "purity",
    "linear_entropy",
    "von_neumann",
    "renyi2",
    "entropy_of_probabilities",
    "rmt_saturation",
    "RMT_PROVENANCE",
]

EIG_CLIP = 1e-10


def purity(rho):
    """Tr(rho^2)."""
    return float(np.einsum("ij,ji->", rho, rho).real)


def linear_entropy(rho):
    """S_L = 1 - Tr(rho^2), the linearized von Neumann entropy."""
    return 1.0 - purity(rho)


def _clipped_eigenvalues(rho):
    lam = np.linalg.eigvalsh(rho)
    if lam[0] < -EIG_CLIP:
        raise NumericalHealthError(f"density matrix eigenvalue {lam[0]:.3e} below -{EIG_CLIP:.1e}")
    return np.clip(lam, 0.0, None)


def entropy_of_probabilities(p):
    """Shannon entropy -sum p ln p with 0 ln 0 := 0."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def von_neumann(rho):
    """-sum lam ln lam over the eigenvalues of rho."""
    return entropy_of_probabilities(_clipped_eigenvalues(rho))


def renyi2(rho):
    """Second Renyi entropy -ln Tr(rho^2)."""
    return -np.log(purity(rho))


RmtSaturation = namedtuple("RmtSaturation", ["purity", "s_linear", "s_vn"])

RMT_PROVENANCE = {
    "purity": "exact Haar mean 2n/(n^2+1) for an n x n bipartite random pure state",
    "s_linear": "1 - Haar mean purity",
    "s_vn": "asymptotic Haar mean ln(n) - 1/2 for equal subsystem dimensions",
}


def rmt_saturation(n):
    """Long-time saturation references from random-matrix (Haar) averages."""
    from .hilbert import check_dim

    n = check_dim(n)
    p_sat = 2.0 * n / (n * n + 1.0)
    return RmtSaturation(purity=p_sat, s_linear=1.0 - p_sat, s_vn=np.log(n) - 0.5)
