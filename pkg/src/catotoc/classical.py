"""Classical companion dynamics on the unit torus.

One step of the perturbed map sends (q, p) to M (q, p + eps(q)) mod 1
with eps(q) = -(K / 2 pi) sin(2 pi q); the kick acts first, then the
linear map.  Two coupled degrees of freedom add the shared kick
-(Kc / 2 pi) sin(2 pi (q1 + q2)) to both momenta.

Lyapunov exponents come from tangent-map products with periodic
re-orthonormalization (every 10 steps by default).  For the unperturbed
hyperbolic map the largest exponent is ln of the big eigenvalue,
ln((|tr M| + sqrt(tr^2 - 4)) / 2).

The phase-space analogue of the quantum separability diagnostics is a
coarse joint distribution over (q1, p1) x (q2, p2) cells: its singular
values play the role of an operator-Schmidt spectrum and their entropy
is computed the same way.
"""

import math

import numpy as np

from . import _kernels
from .entropy import entropy_of_probabilities
from .errors import InvalidSpecError
from .states import PhasePoint, _as_point

__all__ = [
    "step_1d",
    "step_2d",
    "evolve_ensemble_1d",
    "evolve_ensemble_2d",
    "gaussian_cloud",
    "lyapunov_estimate",
    "lyapunov_spectrum_2d",
    "unperturbed_exponent",
    "coarse_distribution",
    "distribution_spectrum",
    "cse",
    "kernel_path",
]

TWO_PI = 2.0 * math.pi


def kernel_path():
    """Which kernel implementation is active, "numba" or "numpy"."""
    return _kernels.ACTIVE_PATH


def step_1d(point, spec):
    point = _as_point(point)
    pp = point.p - (spec.k / TWO_PI) * math.sin(TWO_PI * point.q)
    return PhasePoint(
        spec.m11 * point.q + spec.m12 * pp,
        spec.m21 * point.q + spec.m22 * pp,
    )


def step_2d(point1, point2, coupled):
    point1 = _as_point(point1)
    point2 = _as_point(point2)
    s1, s2 = coupled.spec1, coupled.spec2
    shared = -(coupled.kc / TWO_PI) * math.sin(TWO_PI * (point1.q + point2.q))
    pp1 = point1.p - (s1.k / TWO_PI) * math.sin(TWO_PI * point1.q) + shared
    pp2 = point2.p - (s2.k / TWO_PI) * math.sin(TWO_PI * point2.q) + shared
    out1 = PhasePoint(s1.m11 * point1.q + s1.m12 * pp1, s1.m21 * point1.q + s1.m22 * pp1)
    out2 = PhasePoint(s2.m11 * point2.q + s2.m12 * pp2, s2.m21 * point2.q + s2.m22 * pp2)
    return out1, out2


def _coords(arr):
    out = np.array(arr, dtype=float) % 1.0
    if out.ndim != 1:
        raise InvalidSpecError("coordinate arrays must be one-dimensional")
    return out


def evolve_ensemble_1d(q, p, spec, steps):
    """Evolve arrays of points `steps` map iterations; returns new arrays."""
    q = _coords(q)
    p = _coords(p)
    _kernels.evolve_ensemble_1d(
        q, p, float(spec.m11), float(spec.m12), float(spec.m21), float(spec.m22),
        float(spec.k), int(steps),
    )
    return q, p


def evolve_ensemble_2d(q1, p1, q2, p2, coupled, steps):
    q1, p1, q2, p2 = (_coords(a) for a in (q1, p1, q2, p2))
    s1, s2 = coupled.spec1, coupled.spec2
    _kernels.evolve_ensemble_2d(
        q1, p1, q2, p2,
        float(s1.m11), float(s1.m12), float(s1.m21), float(s1.m22), float(s1.k),
        float(s2.m11), float(s2.m12), float(s2.m21), float(s2.m22), float(s2.k),
        float(coupled.kc), int(steps),
    )
    return q1, p1, q2, p2


def gaussian_cloud(center, n_quantum, size, rng):
    """Points normally distributed around `center` with the minimal-packet width.

    The standard deviation 1/sqrt(4 pi n) matches the position spread of
    the quantum wavepacket on an n-state system, so ensembles built here
    shadow the quantum initial condition.
    """
    center = _as_point(center)
    sigma = 1.0 / math.sqrt(4.0 * math.pi * n_quantum)
    q = (center.q + sigma * rng.standard_normal(size)) % 1.0
    p = (center.p + sigma * rng.standard_normal(size)) % 1.0
    return q, p


def unperturbed_exponent(spec):
    tr = abs(spec.trace)
    if tr <= 2:
        raise InvalidSpecError(f"map with |trace| = {tr} has no positive exponent")
    return math.log((tr + math.sqrt(tr * tr - 4.0)) / 2.0)


def lyapunov_estimate(point, spec, steps=10000, burn_in=100, renorm_every=10):
    """Largest exponent of the one-freedom map from a single trajectory."""
    point = _as_point(point)
    return float(
        _kernels.lyapunov_1d(
            point.q, point.p,
            float(spec.m11), float(spec.m12), float(spec.m21), float(spec.m22),
            float(spec.k), int(steps), int(burn_in), int(renorm_every),
        )
    )


def lyapunov_spectrum_2d(point1, point2, coupled, steps=10000, burn_in=100, renorm_every=10):
    """All four exponents of the coupled map, sorted descending.

    The map is symplectic, so the spectrum pairs into (x, -x) and the
    sum vanishes up to sampling error; tests lean on both facts.
    """
    point1 = _as_point(point1)
    point2 = _as_point(point2)
    s1, s2 = coupled.spec1, coupled.spec2
    sums = _kernels.lyapunov_2d(
        point1.q, point1.p, point2.q, point2.p,
        float(s1.m11), float(s1.m12), float(s1.m21), float(s1.m22), float(s1.k),
        float(s2.m11), float(s2.m12), float(s2.m21), float(s2.m22), float(s2.k),
        float(coupled.kc), int(steps), int(burn_in), int(renorm_every),
    )
    return np.sort(np.asarray(sums))[::-1]


def coarse_distribution(q1, p1, q2, p2, grid):
    """Joint probability matrix over (q1, p1)-cells x (q2, p2)-cells.

    Shape (grid^2, grid^2), entries summing to 1.
    """
    if grid < 1:
        raise InvalidSpecError(f"grid must be >= 1, got {grid}")
    arrs = [np.asarray(a, dtype=float) for a in (q1, p1, q2, p2)]
    if len({a.shape for a in arrs}) != 1 or arrs[0].size == 0:
        raise InvalidSpecError("coordinate arrays must be equal-length and nonempty")
    counts = _kernels.joint_histogram(*arrs, int(grid))
    return counts / arrs[0].size


def distribution_spectrum(dist):
    return np.linalg.svd(np.asarray(dist, dtype=float), compute_uv=False)


def cse(dist):
    """Separability entropy of a coarse distribution matrix."""
    vals = distribution_spectrum(dist) ** 2
    total = float(np.sum(vals))
    if total <= 0.0:
        raise InvalidSpecError("distribution has no weight")
    return entropy_of_probabilities(vals / total)
