"""Heisenberg evolution and correlators: C(t), C2, C4, the basis-summed purity.

Averaging conventions
---------------------
* "trace": <O> = Tr(O)/dim.  In this convention the split identity
  C(t) = -2 [C4(t) - C2(t)] / dim is exact for hermitian A, B, with
  C2 = Tr[A(t)^2 B^2] and C4 = Tr[A(t) B A(t) B] as plain traces.
* "state": <O> = <psi0|O|psi0> for a pure reference state.  Computed on
  vectors (forward-evolve, apply, back-evolve) so A(t) is never
  materialized.

When B is the initial-state projector |psi0><psi0| the state average
equals half the plain trace, so both conventions carry the same signal.

The basis-summed correlator ``otoc_re_sum`` runs over the clock-shift
operator basis {U^a V^b / sqrt(n)} of subsystem 2, orthonormal under the
Hilbert-Schmidt inner product.  Each term is <M(t) rho0 M(t)^dag rho0>;
the adjoint on the second insertion is what makes the sum equal the
subsystem purity for a non-hermitian operator basis.  The overall scale
is calibrated once at t = 0 on the product initial state (where the
purity is exactly 1) and later times are genuine predictions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidSpecError, NumericalHealthError

__all__ = [
    "heisenberg_evolve",
    "commutator",
    "otoc_full",
    "correlators_2_4",
    "CorrelatorSample",
    "correlator_sample",
    "clock_shift_expectations",
    "otoc_re_sum",
    "rescale_factor",
    "rescale_for_comparison",
]


def commutator(a, b):
    return a @ b - b @ a


def heisenberg_evolve(a, u, t):
    """A(t) = (U^dag)^t A U^t, one conjugation per step."""
    if t < 0:
        raise ValueError(f"step count must be >= 0, got {t}")
    udag = u.conj().T
    at = a.copy()
    for _ in range(t):
        at = udag @ at @ u
    return at


def _evolve_state(u, psi, t, inverse=False):
    """Apply u (dense matrix or CoupledPropagator) t times to a vector."""
    out = psi
    if hasattr(u, "apply"):
        for _ in range(t):
            out = u.apply(out, inverse=inverse)
        return out
    mat = u.conj().T if inverse else u
    for _ in range(t):
        out = mat @ out
    return out


def _resolve_b(b, psi0):
    if isinstance(b, str):
        if b != "rho0":
            raise InvalidSpecError(f"unknown operator choice {b!r}")
        if psi0 is None:
            raise InvalidSpecError("operator choice 'rho0' requires psi0")
        return np.outer(psi0, psi0.conj())
    return b


def otoc_full(a, b, u, t, average="trace", psi0=None):
    """C(t) = <[A(t), B][A(t), B]^dag> under the chosen average.

    ``b`` may be a matrix or the string "rho0" for |psi0><psi0|.  The
    state average runs on vectors and requires ``psi0``; the trace
    average materializes A(t) (meant for cross-checks at small n).
    """
    if average == "trace":
        bmat = _resolve_b(b, psi0)
        at = heisenberg_evolve(a, u, t)
        k = commutator(at, bmat)
        return float(np.sum(np.abs(k) ** 2) / a.shape[0])
    if average == "state":
        if psi0 is None:
            raise InvalidSpecError("state average requires psi0")
        if isinstance(b, str) and b == "rho0":
            w = _apply_heisenberg_to_vector(a, u, t, psi0)
            amp = np.vdot(psi0, w)
            cvec = psi0 * amp - w
        else:
            # [A(t), B]^dag |psi0> = B A(t)|psi0> - A(t) B|psi0>
            w = _apply_heisenberg_to_vector(a, u, t, psi0)
            v = _apply_heisenberg_to_vector(a, u, t, b @ psi0)
            cvec = b @ w - v
        return float(np.linalg.norm(cvec) ** 2)
    raise InvalidSpecError(f"unknown average {average!r}")


def _apply_heisenberg_to_vector(a, u, t, vec):
    """A(t) vec = (U^dag)^t A U^t vec without forming A(t)."""
    out = _evolve_state(u, vec, t)
    out = a @ out
    return _evolve_state(u, out, t, inverse=True)


def correlators_2_4(a, b, u, t, average="trace", psi0=None):
    """(C2, C4) = (<A(t)^2 B^2>, <A(t) B A(t) B>); C4 is complex.

    Trace averaging returns plain (unnormalized) traces, the convention
    in which the split identity against ``otoc_full`` is exact.
    """
    bmat = _resolve_b(b, psi0)
    at = heisenberg_evolve(a, u, t)
    if average == "trace":
        m = at @ bmat
        c2 = float(np.sum(np.abs(m) ** 2))  # Tr[(AB)(AB)^dag] = Tr[A^2 B^2], hermitian A, B
        c4 = complex(np.sum(m * m.T))
        return c2, c4
    if average == "state":
        if psi0 is None:
            raise InvalidSpecError("state average requires psi0")
        w2 = at @ (at @ (bmat @ (bmat @ psi0)))
        w4 = at @ (bmat @ (at @ (bmat @ psi0)))
        return complex(np.vdot(psi0, w2)), complex(np.vdot(psi0, w4))
    raise InvalidSpecError(f"unknown average {average!r}")


@dataclass(frozen=True)
class CorrelatorSample:
    """One time point of the trace-convention correlator set."""

    t: int
    c: float
    c2: float
    c4_real: float
    c4_imag: float

    def split_residual(self, dim):
        """|C + 2 (C4 - C2)/dim|, zero when the split identity holds."""
        return abs(self.c + 2.0 * (self.c4_real - self.c2) / dim)


def correlator_sample(a, b, u, t, split_tol=1e-8, psd_tol=1e-10):
    """Trace-convention sample with the split identity enforced."""
    dim = a.shape[0]
    c = otoc_full(a, b, u, t, average="trace")
    c2, c4 = correlators_2_4(a, b, u, t, average="trace")
    sample = CorrelatorSample(t=t, c=c, c2=c2, c4_real=c4.real, c4_imag=c4.imag)
    if sample.c < -psd_tol:
        raise NumericalHealthError(f"OTOC {sample.c:.3e} negative beyond {psd_tol:.1e}")
    res = sample.split_residual(dim)
    if res > split_tol:
        raise NumericalHealthError(f"correlator split identity residual {res:.3e} > {split_tol:.1e}")
    return sample


def clock_shift_expectations(psi, dims):
    """<psi|(1 (x) U^a V^b / sqrt(n2))|psi> for all a, b as an (n2, n2) array.

    Row index a (clock power), column index b (shift power).  Organized
    as n2 cyclic-diagonal reductions followed by one FFT per diagonal.
    """
    n1, n2 = dims
    if psi.shape[0] != n1 * n2:
        raise DimensionMismatchError(f"state dimension {psi.shape[0]} != {n1}*{n2}")
    m = psi.reshape(n1, n2)
    vals = np.empty((n2, n2), dtype=complex)
    for b in range(n2):
        g = np.einsum("jq,jq->q", m.conj(), np.roll(m, b, axis=1))
        vals[:, b] = np.sqrt(n2) * np.fft.ifft(g)
    return vals


def otoc_re_sum(psi0, u, t, dims, product_tol=1e-8):
    """Complete-basis sum of 4-point correlators over subsystem 2.

    Requires a pure product initial state; the calibration constant is
    fixed by the t = 0 sum (analytically 1 for a product state), then
    the evolved-time sums are genuine predictions of the subsystem
    purity exp(-S2).
    """
    n1, n2 = dims
    top_sv = np.linalg.svd(psi0.reshape(n1, n2), compute_uv=False)[0]
    if abs(top_sv - 1.0) > product_tol:
        raise InvalidSpecError(
            f"initial state is not a product state (top Schmidt value {top_sv!r})"
        )
    raw0 = float(np.sum(np.abs(clock_shift_expectations(psi0, dims)) ** 2))
    calibration = 1.0 / raw0
    psi_t = _evolve_state(u, psi0, t)
    raw_t = float(np.sum(np.abs(clock_shift_expectations(psi_t, dims)) ** 2))
    return calibration * raw_t


def rescale_factor(series, reference):
    """Nonnegative least-squares scalar alpha minimizing |alpha s - r|_2."""
    s = np.asarray(series, dtype=float)
    r = np.asarray(reference, dtype=float)
    if s.shape != r.shape:
        raise DimensionMismatchError(f"series length {s.shape} != reference length {r.shape}")
    ss = float(np.dot(s, s))
    if ss == 0.0:
        raise ValueError("cannot rescale an identically zero series")
    return max(0.0, float(np.dot(s, r)) / ss)


def rescale_for_comparison(series, reference):
    """Series multiplied by the nonnegative least-squares factor."""
    return np.asarray(series, dtype=float) * rescale_factor(series, reference)
