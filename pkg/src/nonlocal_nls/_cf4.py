"""Fourth-order commutator-free Magnus propagator for the Lax ODE.

The linear system  phi_x = (-i z sigma3 + Q(x)) phi  is advanced with the
two-exponential CF4 scheme

    phi <- exp(h (a1 A1 + a2 A2)) exp(h (a2 A1 + a1 A2)) phi,

A1,2 sampled at the Gauss points x + (1/2 -+ sqrt(3)/6) h and
a1,2 = 1/4 -+ sqrt(3)/6.  The z-oscillation sits in the matrix exponentials,
which are evaluated in closed form (2x2, trace handled by scalar shift), so
the step size is governed by the smoothness of q alone and the work is
vectorized across the whole z grid.  Fourth order was verified by a ratio
test; see tests.
"""

from __future__ import annotations

import numpy as np

from .errors import IntegratorDivergence
from .potentials import Potential

_C1 = 0.5 - np.sqrt(3.0) / 6.0
_C2 = 0.5 + np.sqrt(3.0) / 6.0
_A1 = 0.25 - np.sqrt(3.0) / 6.0
_A2 = 0.25 + np.sqrt(3.0) / 6.0


def _sinhc(m):
    """sinh(m)/m with a series patch near m = 0."""
    m = np.asarray(m, dtype=complex)
    small = np.abs(m) < 1e-6
    msafe = np.where(small, 1.0, m)
    out = np.sinh(msafe) / msafe
    m2 = m * m
    return np.where(small, 1.0 + m2 / 6.0 + m2 * m2 / 120.0, out)


def _expm_shifted(d, b, c, shift):
    """exp([[shift + d, b], [c, shift - d]]) entrywise for batched scalars."""
    m = np.sqrt(d * d + b * c + 0.0j)
    ch = np.cosh(m)
    sh = _sinhc(m)
    scale = np.exp(shift)
    return (
        scale * (ch + sh * d),
        scale * (sh * b),
        scale * (sh * c),
        scale * (ch - sh * d),
    )


def _mul(a, b):
    """Entrywise product of batched 2x2 matrices given as 4-tuples."""
    a11, a12, a21, a22 = a
    b11, b12, b21, b22 = b
    return (
        a11 * b11 + a12 * b21,
        a11 * b12 + a12 * b22,
        a21 * b11 + a22 * b21,
        a21 * b12 + a22 * b22,
    )


def _segments(potential: Potential, x_from: float, x_to: float) -> list[tuple[float, float]]:
    """Split [x_from, x_to] at potential discontinuities (ordered along travel)."""
    pts = [x_from, x_to]
    brk = potential.breakpoints()
    lo, hi = min(x_from, x_to), max(x_from, x_to)
    if brk:
        pts.extend(p for p in brk if lo < p < hi)
    pts = sorted(set(pts), reverse=bool(x_from > x_to))
    return list(zip(pts[:-1], pts[1:]))


def _cf4_transfer(potential, z, x_from, x_to, n_steps):
    """Transfer matrix of the phi-frame system over [x_from, x_to].

    z is a complex/real array; returns the 4-tuple of (nz,) entry arrays T with
    phi(x_to) = T phi(x_from).
    """
    z = np.asarray(z, dtype=complex)
    sig = potential.sigma
    T = (
        np.ones_like(z),
        np.zeros_like(z),
        np.zeros_like(z),
        np.ones_like(z),
    )
    total = abs(x_to - x_from)
    segs = _segments(potential, x_from, x_to)
    for seg_from, seg_to in segs:
        seg_len = abs(seg_to - seg_from)
        n = max(2, int(np.ceil(n_steps * seg_len / total)))
        h = (seg_to - seg_from) / n
        xs = seg_from + h * np.arange(n)
        # Gauss samples of q and conj(q(-x)) for the whole segment at once
        xg1, xg2 = xs + _C1 * h, xs + _C2 * h
        q1, q2 = potential(xg1), potential(xg2)
        m1, m2 = potential.mirror_conj(xg1), potential.mirror_conj(xg2)
        dz = -1j * z * (h / 2.0)  # diagonal of each combo: h*(a1+a2)*(-i z)
        for i in range(n):
            b_first = h * (_A1 * q1[i] + _A2 * q2[i])
            c_first = -sig * h * (_A1 * m1[i] + _A2 * m2[i])
            b_second = h * (_A2 * q1[i] + _A1 * q2[i])
            c_second = -sig * h * (_A2 * m1[i] + _A1 * m2[i])
            E2 = _expm_shifted(dz, b_second, c_second, 0.0)
            E1 = _expm_shifted(dz, b_first, c_first, 0.0)
            T = _mul(_mul(E1, E2), T)
    return T


def _phase_diag(z, x):
    """Diagonal entries of exp(i x z sigma3)."""
    return np.exp(1j * x * z), np.exp(-1j * x * z)


def y_matrix_batch(potential, z, side="minus", n_steps=None, rtol=1e-10,
                   x_nodes=None, max_refine=4):
    """Normalized Jost matrix Y(z, x) = exp(i x z sigma3) phi(z, x).

    side "minus" integrates from -X with Y(-X) = I; side "plus" from +X.
    Returns (Y_end, err_estimate) where Y_end is a 4-tuple of (nz,) arrays at
    the opposite end, or (trajectory, err) with shape (len(x_nodes), nz, 2, 2)
    when x_nodes is given.  Step control doubles the step count until two
    consecutive resolutions agree to rtol.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    X = potential.scatter_halfwidth()
    x_from, x_to = (-X, X) if side == "minus" else (X, -X)
    if n_steps is None:
        n_steps = max(192, int(16 * 2 * X))

    def endpoint(n):
        T = _cf4_transfer(potential, z, x_from, x_to, n)
        ep, em = _phase_diag(z, x_to)
        sp, sm = _phase_diag(z, -x_from)
        # Y(x_to) = e^{i x_to z s3} T e^{-i x_from z s3}
        return (
            ep * T[0] * sp,
            ep * T[1] * sm,
            em * T[2] * sp,
            em * T[3] * sm,
        )

    prev = endpoint(n_steps)
    err = np.inf
    for _ in range(max_refine):
        n_steps *= 2
        cur = endpoint(n_steps)
        err = max(float(np.abs(c - p).max()) for c, p in zip(cur, prev))
        scale = 1.0 + max(float(np.abs(c).max()) for c in cur)
        if err <= rtol * scale:
            prev = cur
            break
        prev = cur
    else:
        raise IntegratorDivergence(
            f"CF4 step control stalled at {n_steps} steps (err {err:.3e})"
        )

    if x_nodes is None:
        return prev, err

    # trajectory on requested nodes: reuse the accepted resolution per leg
    nodes = np.asarray(x_nodes, dtype=float)
    order = np.argsort(nodes) if side == "minus" else np.argsort(nodes)[::-1]
    traj = np.empty((len(nodes), z.size, 2, 2), dtype=complex)
    T = (np.ones_like(z), np.zeros_like(z), np.zeros_like(z), np.ones_like(z))
    x_cur = x_from
    for idx in order:
        x_tgt = float(nodes[idx])
        if abs(x_tgt - x_cur) > 0:
            n = max(2, int(np.ceil(n_steps * abs(x_tgt - x_cur) / (2 * X))))
            T = _mul(_cf4_transfer(potential, z, x_cur, x_tgt, n), T)
            x_cur = x_tgt
        ep, em = _phase_diag(z, x_cur)
        sp, sm = _phase_diag(z, -x_from)
        traj[idx, :, 0, 0] = ep * T[0] * sp
        traj[idx, :, 0, 1] = ep * T[1] * sm
        traj[idx, :, 1, 0] = em * T[2] * sp
        traj[idx, :, 1, 1] = em * T[3] * sm
    return traj, err


def analytic_column_batch(potential, z, n_steps=None, rtol=1e-10, max_refine=4):
    """First modified-Jost column (Phi-minus, first column) at the right end.

    Propagates m' = [[0, q], [-sigma conj(q(-x)), 2 i z]] m with m(-X) = (1,0),
    which stays bounded for Im z >= 0; its first component at +X is a(z) by
    the determinant formula.  Vectorized over complex z.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    X = potential.scatter_halfwidth()
    sig = potential.sigma
    if n_steps is None:
        n_steps = max(192, int(16 * 2 * X))

    def run_ordered(n_total):
        m0 = np.ones_like(z)
        m1 = np.zeros_like(z)
        for seg_from, seg_to in _segments(potential, -X, X):
            n = max(2, int(np.ceil(n_total * (seg_to - seg_from) / (2 * X))))
            h = (seg_to - seg_from) / n
            xs = seg_from + h * np.arange(n)
            xg1, xg2 = xs + _C1 * h, xs + _C2 * h
            q1, q2 = potential(xg1), potential(xg2)
            mc1, mc2 = potential.mirror_conj(xg1), potential.mirror_conj(xg2)
            shift = 1j * z * (h / 2.0)
            d = -shift
            for i in range(n):
                b = h * (_A2 * q1[i] + _A1 * q2[i])
                c = -sig * h * (_A2 * mc1[i] + _A1 * mc2[i])
                e11, e12, e21, e22 = _expm_shifted(d, b, c, shift)
                m0, m1 = e11 * m0 + e12 * m1, e21 * m0 + e22 * m1
                b = h * (_A1 * q1[i] + _A2 * q2[i])
                c = -sig * h * (_A1 * mc1[i] + _A2 * mc2[i])
                e11, e12, e21, e22 = _expm_shifted(d, b, c, shift)
                m0, m1 = e11 * m0 + e12 * m1, e21 * m0 + e22 * m1
        return m0, m1

    prev = run_ordered(n_steps)
    for _ in range(max_refine):
        n_steps *= 2
        cur = run_ordered(n_steps)
        err = max(float(np.abs(c - p).max()) for c, p in zip(cur, prev))
        scale = 1.0 + max(float(np.abs(c).max()) for c in cur)
        prev = cur
        if err <= rtol * scale:
            return cur
    raise IntegratorDivergence("column propagation step control stalled")
