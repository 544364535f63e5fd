"""Loop-heavy classical kernels with an optional compiled path.

Two implementations live side by side: vectorized numpy versions and
explicit per-particle loops that numba compiles when it is importable
and the CATOTOC_NO_NUMBA environment flag is unset.  The public names

    evolve_ensemble_1d, evolve_ensemble_2d, joint_histogram,
    lyapunov_1d, lyapunov_2d

are bound to one path at import time and ACTIVE_PATH records which.
The tangent-map accumulators are single-trajectory scalar loops either
way, so compiling them changes speed only; the ensemble and histogram
kernels have genuinely different fallback code.  Loop and vectorized
paths agree to roundoff but not necessarily to the last bit, because
numba links its own libm for sin and cos.

All kernels mutate the coordinate arrays they are handed; wrappers in
``classical`` pass copies.
"""

import numpy as np

from . import config

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------- loop path

def _evolve_1d_loop(q, p, m11, m12, m21, m22, k, steps):
    c = -k / TWO_PI
    for _ in range(steps):
        for i in range(q.shape[0]):
            pp = p[i] + c * np.sin(TWO_PI * q[i])
            qn = (m11 * q[i] + m12 * pp) % 1.0
            p[i] = (m21 * q[i] + m22 * pp) % 1.0
            q[i] = qn
    return q, p


def _evolve_2d_loop(
    q1, p1, q2, p2,
    a11, a12, a21, a22, k1,
    b11, b12, b21, b22, k2,
    kc, steps,
):
    c1 = -k1 / TWO_PI
    c2 = -k2 / TWO_PI
    cc = -kc / TWO_PI
    for _ in range(steps):
        for i in range(q1.shape[0]):
            g = cc * np.sin(TWO_PI * (q1[i] + q2[i]))
            pp1 = p1[i] + c1 * np.sin(TWO_PI * q1[i]) + g
            pp2 = p2[i] + c2 * np.sin(TWO_PI * q2[i]) + g
            qn1 = (a11 * q1[i] + a12 * pp1) % 1.0
            p1[i] = (a21 * q1[i] + a22 * pp1) % 1.0
            q1[i] = qn1
            qn2 = (b11 * q2[i] + b12 * pp2) % 1.0
            p2[i] = (b21 * q2[i] + b22 * pp2) % 1.0
            q2[i] = qn2
    return q1, p1, q2, p2


def _histogram_loop(q1, p1, q2, p2, g):
    out = np.zeros((g * g, g * g))
    for i in range(q1.shape[0]):
        a = int(q1[i] * g)
        if a >= g:
            a = g - 1
        b = int(p1[i] * g)
        if b >= g:
            b = g - 1
        c = int(q2[i] * g)
        if c >= g:
            c = g - 1
        d = int(p2[i] * g)
        if d >= g:
            d = g - 1
        out[a * g + b, c * g + d] += 1.0
    return out


def _lyapunov_1d_loop(q, p, m11, m12, m21, m22, k, steps, burn_in, renorm_every):
    v_q = 0.6
    v_p = 0.8
    acc = 0.0
    since = 0
    last = burn_in + steps - 1
    for step in range(burn_in + steps):
        fp = -k * np.cos(TWO_PI * q)
        tq = v_q
        tp = v_p + fp * v_q
        v_q = m11 * tq + m12 * tp
        v_p = m21 * tq + m22 * tp
        pp = p - (k / TWO_PI) * np.sin(TWO_PI * q)
        qn = (m11 * q + m12 * pp) % 1.0
        p = (m21 * q + m22 * pp) % 1.0
        q = qn
        since += 1
        # renormalize on schedule, at the burn-in boundary, and at the end,
        # so every accumulated interval covers post-burn-in growth only
        if since == renorm_every or step == last or step == burn_in - 1:
            nrm = np.sqrt(v_q * v_q + v_p * v_p)
            if step >= burn_in:
                acc += np.log(nrm)
            v_q /= nrm
            v_p /= nrm
            since = 0
    return acc / steps


def _lyapunov_2d_loop(
    q1, p1, q2, p2,
    a11, a12, a21, a22, k1,
    b11, b12, b21, b22, k2,
    kc, steps, burn_in, renorm_every,
):
    basis = np.eye(4)
    sums = np.zeros(4)
    acc_since = 0
    last = burn_in + steps - 1
    for step in range(burn_in + steps):
        f1p = -k1 * np.cos(TWO_PI * q1)
        f2p = -k2 * np.cos(TWO_PI * q2)
        gp = -kc * np.cos(TWO_PI * (q1 + q2))
        for col in range(4):
            vq1 = basis[0, col]
            vp1 = basis[1, col]
            vq2 = basis[2, col]
            vp2 = basis[3, col]
            wp1 = vp1 + (f1p + gp) * vq1 + gp * vq2
            wp2 = vp2 + gp * vq1 + (f2p + gp) * vq2
            basis[0, col] = a11 * vq1 + a12 * wp1
            basis[1, col] = a21 * vq1 + a22 * wp1
            basis[2, col] = b11 * vq2 + b12 * wp2
            basis[3, col] = b21 * vq2 + b22 * wp2
        g = -(kc / TWO_PI) * np.sin(TWO_PI * (q1 + q2))
        pp1 = p1 - (k1 / TWO_PI) * np.sin(TWO_PI * q1) + g
        pp2 = p2 - (k2 / TWO_PI) * np.sin(TWO_PI * q2) + g
        qn1 = (a11 * q1 + a12 * pp1) % 1.0
        p1 = (a21 * q1 + a22 * pp1) % 1.0
        q1 = qn1
        qn2 = (b11 * q2 + b12 * pp2) % 1.0
        p2 = (b21 * q2 + b22 * pp2) % 1.0
        q2 = qn2
        acc_since += 1
        if acc_since == renorm_every or step == last or step == burn_in - 1:
            # modified Gram-Schmidt, accumulating the log of each pivot
            for col in range(4):
                for prev in range(col):
                    proj = 0.0
                    for row in range(4):
                        proj += basis[row, prev] * basis[row, col]
                    for row in range(4):
                        basis[row, col] -= proj * basis[row, prev]
                nrm = 0.0
                for row in range(4):
                    nrm += basis[row, col] * basis[row, col]
                nrm = np.sqrt(nrm)
                if step >= burn_in:
                    sums[col] += np.log(nrm)
                for row in range(4):
                    basis[row, col] /= nrm
            acc_since = 0
    return sums / steps


# ------------------------------------------------------------ numpy path

def _evolve_1d_vec(q, p, m11, m12, m21, m22, k, steps):
    c = -k / TWO_PI
    for _ in range(steps):
        pp = p + c * np.sin(TWO_PI * q)
        qn = (m11 * q + m12 * pp) % 1.0
        p[:] = (m21 * q + m22 * pp) % 1.0
        q[:] = qn
    return q, p


def _evolve_2d_vec(
    q1, p1, q2, p2,
    a11, a12, a21, a22, k1,
    b11, b12, b21, b22, k2,
    kc, steps,
):
    c1 = -k1 / TWO_PI
    c2 = -k2 / TWO_PI
    cc = -kc / TWO_PI
    for _ in range(steps):
        g = cc * np.sin(TWO_PI * (q1 + q2))
        pp1 = p1 + c1 * np.sin(TWO_PI * q1) + g
        pp2 = p2 + c2 * np.sin(TWO_PI * q2) + g
        qn1 = (a11 * q1 + a12 * pp1) % 1.0
        p1[:] = (a21 * q1 + a22 * pp1) % 1.0
        q1[:] = qn1
        qn2 = (b11 * q2 + b12 * pp2) % 1.0
        p2[:] = (b21 * q2 + b22 * pp2) % 1.0
        q2[:] = qn2
    return q1, p1, q2, p2


def _histogram_vec(q1, p1, q2, p2, g):
    def cells(x):
        return np.minimum((x * g).astype(np.int64), g - 1)

    flat = ((cells(q1) * g + cells(p1)) * g + cells(q2)) * g + cells(p2)
    counts = np.bincount(flat, minlength=g**4).astype(float)
    return counts.reshape(g * g, g * g)


# ------------------------------------------------------------- selection

ACTIVE_PATH = "numpy"
if config.USE_NUMBA:
    try:
        from numba import njit
    except ImportError:
        njit = None
    if njit is not None:
        evolve_ensemble_1d = njit(cache=True)(_evolve_1d_loop)
        evolve_ensemble_2d = njit(cache=True)(_evolve_2d_loop)
        joint_histogram = njit(cache=True)(_histogram_loop)
        lyapunov_1d = njit(cache=True)(_lyapunov_1d_loop)
        lyapunov_2d = njit(cache=True)(_lyapunov_2d_loop)
        ACTIVE_PATH = "numba"

if ACTIVE_PATH == "numpy":
    evolve_ensemble_1d = _evolve_1d_vec
    evolve_ensemble_2d = _evolve_2d_vec
    joint_histogram = _histogram_vec
    lyapunov_1d = _lyapunov_1d_loop
    lyapunov_2d = _lyapunov_2d_loop
