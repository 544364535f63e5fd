"""Operator-Schmidt decompositions and the doubled-grid phase-space picture.

The separability entropy of a bipartite density matrix is the Shannon
entropy of its normalized squared operator-Schmidt values.  Those values
come from the singular value decomposition of the reshuffled matrix

    R[(j1, k1), (j2, k2)] = rho[(j1, j2), (k1, k2)]

Convention "doubled-grid-chord-dft-v1" for the phase-space transform on
an n-state system: a real (2n) x (2n) grid

    W[a, b] = (1/2n) * sum_{m = a mod 2} rho[(a+m)/2 mod n, (a-m)/2 mod n]
                                         * exp(-2 pi i m b / 2n)

with m running over the n residues mod 2n of parity a.  Properties used
here (and locked in by tests): W is real for hermitian rho, even rows
sum to the position populations, even columns to the momentum
populations, the grid overlap of two transforms is (1/n) Tr(rho1 rho2),
and the map is (1/sqrt(n)) times an isometry in the Hilbert-Schmidt
sense.  That last fact is why flattening the two-system grid and taking
singular values reproduces the operator-Schmidt spectrum up to a global
1/sqrt(n1 n2) factor, so the phase-space route and the purely algebraic
route agree on the separability entropy.
"""

from dataclasses import dataclass

import numpy as np

from . import config
from .entropy import entropy_of_probabilities
from .errors import BudgetExceededError, DimensionMismatchError, NumericalHealthError

__all__ = [
    "reshuffle",
    "SchmidtSpectrum",
    "operator_schmidt",
    "wse",
    "wse_pure_fast",
    "WignerGrid",
    "wigner_grid",
    "wigner_kernel",
    "wigner_tensor_2dof",
    "wigner_spectrum",
    "wigner_schmidt_crosscheck",
]

WIGNER_CONVENTION = "doubled-grid-chord-dft-v1"


def _split_dims(mat, dims):
    n1, n2 = dims
    if mat.shape != (n1 * n2, n1 * n2):
        raise DimensionMismatchError(f"matrix shape {mat.shape} incompatible with dims {dims}")
    return n1, n2


def reshuffle(rho, dims):
    """Row-major reshuffle pairing subsystem-1 indices against subsystem-2."""
    n1, n2 = _split_dims(rho, dims)
    return (
        rho.reshape(n1, n2, n1, n2)
        .transpose(0, 2, 1, 3)
        .reshape(n1 * n1, n2 * n2)
    )


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Descending operator-Schmidt values of a bipartite matrix."""

    values: np.ndarray
    dims: tuple

    @property
    def weight(self):
        """Sum of squared values; equals Tr(rho^dag rho) by Parseval."""
        return float(np.sum(self.values**2))

    def probabilities(self):
        w = self.weight
        if w <= 0.0:
            raise NumericalHealthError("zero-weight Schmidt spectrum")
        return self.values**2 / w

    def entropy(self):
        return entropy_of_probabilities(self.probabilities())


def operator_schmidt(rho, dims):
    vals = np.linalg.svd(reshuffle(rho, dims), compute_uv=False)
    return SchmidtSpectrum(values=vals, dims=tuple(dims))


def wse(rho, dims):
    """Separability entropy: Shannon entropy of the Schmidt weight distribution."""
    return operator_schmidt(rho, dims).entropy()


def wse_pure_fast(psi, dims):
    """Separability entropy of |psi><psi| without forming the density matrix.

    The operator-Schmidt values of a pure-state projector factorize into
    products of the state's Schmidt coefficients, so the entropy is
    twice the entanglement entropy of either marginal.
    """
    n1, n2 = dims
    if psi.shape[0] != n1 * n2:
        raise DimensionMismatchError(f"state dimension {psi.shape[0]} != {n1}*{n2}")
    lam = np.linalg.svd(psi.reshape(n1, n2), compute_uv=False)
    p = lam**2
    p = p / np.sum(p)
    return 2.0 * entropy_of_probabilities(p)


def wigner_kernel(n):
    """Dense (2n, 2n, n, n) tensor T with W[a, b] = sum_jk T[a, b, j, k] rho[j, k]."""
    two_n = 2 * n
    t = np.zeros((two_n, two_n, n, n), dtype=complex)
    b = np.arange(two_n)
    for a in range(two_n):
        for s in range(n):
            m = (a % 2) + 2 * s
            j = ((a + m) // 2) % n
            k = ((a - m) // 2) % n
            t[a, :, j, k] += np.exp(-2j * np.pi * m * b / two_n) / two_n
    return t


@dataclass(frozen=True)
class WignerGrid:
    """Real phase-space grid of a single n-state system on 2n x 2n points."""

    values: np.ndarray
    n: int
    convention: str = WIGNER_CONVENTION

    def position_marginal(self):
        """Populations on the n physical position sites (even rows)."""
        return self.values[::2, :].sum(axis=1)

    def momentum_marginal(self):
        """Populations on the n physical momentum sites (even columns)."""
        return self.values[:, ::2].sum(axis=0)

    def overlap(self, other):
        """Plain grid overlap; equals Tr(rho1 rho2)/n for same-n grids."""
        if self.n != other.n:
            raise DimensionMismatchError(f"grid sizes differ: {self.n} vs {other.n}")
        return float(np.sum(self.values * other.values))


def wigner_grid(rho, reality_tol=1e-10):
    """Doubled-grid transform of one hermitian n x n matrix.

    Implemented as n cyclic chord extractions and one length-n FFT per
    row, then the half-step phase carrying the odd frequencies.
    """
    n = rho.shape[0]
    if rho.shape != (n, n):
        raise DimensionMismatchError(f"expected a square matrix, got {rho.shape}")
    two_n = 2 * n
    s = np.arange(n)
    b = np.arange(two_n)
    w = np.empty((two_n, two_n), dtype=complex)
    for a in range(two_n):
        m = (a % 2) + 2 * s
        chord = rho[((a + m) // 2) % n, ((a - m) // 2) % n]
        base = np.fft.fft(chord)
        w[a, :] = np.exp(-1j * np.pi * (a % 2) * b / n) * base[b % n] / two_n
    worst = float(np.max(np.abs(w.imag)))
    if worst > reality_tol:
        raise NumericalHealthError(f"grid imaginary part {worst:.3e} exceeds {reality_tol:.1e}")
    return WignerGrid(values=w.real, n=n)


def wigner_tensor_2dof(rho, dims):
    """Joint grid W[a1, b1, a2, b2] of a two-system matrix, small n only."""
    n1, n2 = _split_dims(rho, dims)
    cap = config.WIGNER_2DOF_MAX_N
    if max(n1, n2) > cap:
        raise BudgetExceededError(
            f"two-system grid limited to n <= {cap}, got dims {dims}"
        )
    t1 = wigner_kernel(n1)
    t2 = wigner_kernel(n2)
    rho4 = rho.reshape(n1, n2, n1, n2)
    # rho4[j, l, k, m]: subsystem-1 row/col (j, k), subsystem-2 row/col (l, m)
    half = np.einsum("ABjk,jlkm->ABlm", t1, rho4, optimize=True)
    w = np.einsum("CDlm,ABlm->ABCD", t2, half, optimize=True)
    worst = float(np.max(np.abs(w.imag)))
    if worst > 1e-10:
        raise NumericalHealthError(f"joint grid imaginary part {worst:.3e}")
    return w.real


def wigner_spectrum(rho, dims):
    """Singular values of the flattened two-system grid, descending."""
    n1, n2 = dims
    w = wigner_tensor_2dof(rho, dims)
    flat = w.reshape(4 * n1 * n1, 4 * n2 * n2)
    return np.linalg.svd(flat, compute_uv=False)


def wigner_schmidt_crosscheck(rho, dims):
    """Compare the phase-space spectrum against the reshuffle spectrum.

    Returns a dict with the worst relative deviation (scaled by the
    leading Schmidt value) after undoing the global 1/sqrt(n1 n2)
    factor, plus the entropy computed both ways.
    """
    n1, n2 = dims
    schmidt = operator_schmidt(rho, dims)
    wvals = wigner_spectrum(rho, dims) * np.sqrt(n1 * n2)
    r = schmidt.values.shape[0]
    lead = schmidt.values[0]
    if lead <= 0.0:
        raise NumericalHealthError("zero leading Schmidt value")
    diff = float(np.max(np.abs(wvals[:r] - schmidt.values)) / lead)
    tail = float(np.max(np.abs(wvals[r:])) / lead) if wvals.shape[0] > r else 0.0
    pw = wvals[:r] ** 2
    pw = pw / np.sum(pw)
    return {
        "max_rel_diff": max(diff, tail),
        "entropy_schmidt": schmidt.entropy(),
        "entropy_wigner": entropy_of_probabilities(pw),
        "convention": WIGNER_CONVENTION,
    }
