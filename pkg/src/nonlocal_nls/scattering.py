"""Direct scattering transform for the nonlocal Zakharov-Shabat system.

For real spectral z the full normalized Jost matrix of the "minus" solution is
propagated across the truncated support; its value at the right end *is* the
scattering matrix,

    S(z) = Y^-(z, +X) = [[a(z), bbreve(z)], [b(z), abreve(z)]],

because Y^-( -X) = I and the potential vanishes beyond +-X.  Reflection
coefficients are r = b/a and rbreve = bbreve/abreve; for the nonlocal
equation the two are independent functions.

An exact matrix-exponential route for piecewise-constant (box) potentials
serves as the oracle, and a winding-number count of a(z) over a half-disc in
the upper half-plane backs the no-discrete-spectrum (genericity) assumption.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._cf4 import analytic_column_batch, y_matrix_batch
from .errors import (
    GenericityViolation,
    NotPiecewiseConstant,
    TruncationTooSmall,
)
from .potentials import Potential

EPS_GENERIC = 1e-6   # floor for |1 - r rbreve|
EPS_A = 1e-8         # floor for |a| on the real grid


@dataclass
class JostSolution:
    """Normalized Jost matrix Y(z, x) on an x grid, one spectral point."""

    side: str
    z: float
    x_nodes: np.ndarray
    Y: np.ndarray              # shape (len(x_nodes), 2, 2)
    err_estimate: float

    def det_deviation(self) -> float:
        det = self.Y[:, 0, 0] * self.Y[:, 1, 1] - self.Y[:, 0, 1] * self.Y[:, 1, 0]
        return float(np.abs(det - 1.0).max())


@dataclass(eq=False)
class ScatteringData:
    z_grid: np.ndarray
    a: np.ndarray
    a_breve: np.ndarray
    b: np.ndarray
    b_breve: np.ndarray
    r: np.ndarray
    r_breve: np.ndarray
    truncation_L: float
    truncation_error: float
    potential: Potential | None = field(default=None, repr=False)

    def __post_init__(self):
        if np.any(np.diff(self.z_grid) <= 0):
            raise ValueError("z_grid must be strictly increasing")

    def unimodularity_deviation(self) -> float:
        det = self.a * self.a_breve - self.b * self.b_breve
        return float(np.abs(det - 1.0).max())


def compute_jost(potential: Potential, z: float, side: str = "minus",
                 n_nodes: int = 129, rtol: float = 1e-10) -> JostSolution:
    """Integrate the Volterra/ODE system for one Jost solution.

    Y satisfies Y'(x) = e^{i x z ad(sigma3)}[Q(x)] Y(x) with Y = I at the
    side's own infinity; det Y = 1 up to integrator tolerance.
    """
    if side not in ("minus", "plus"):
        raise ValueError("side must be 'minus' or 'plus'")
    if potential.tail_bound() > 1e-10 * (1.0 + abs(potential.amplitude)):
        raise TruncationTooSmall("potential tail outside [-L, L] too heavy")
    X = potential.scatter_halfwidth()
    x_nodes = np.linspace(-X, X, n_nodes)
    traj, err = y_matrix_batch(
        potential, np.array([z], dtype=complex), side=side,
        rtol=rtol, x_nodes=x_nodes,
    )
    return JostSolution(side=side, z=float(z), x_nodes=x_nodes,
                        Y=traj[:, 0, :, :], err_estimate=err)


def compute_scattering(potential: Potential, z_grid: np.ndarray,
                       rtol: float = 1e-10, check: bool = True) -> ScatteringData:
    """Fill a(z), abreve, b, bbreve, r, rbreve over a symmetric real grid.

    The determinant-formula value (read off S) is cross-checked against the
    product formula built from first Jost columns at x = 0; disagreement
    beyond tolerance indicates an integration fault, not a data property.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    if z_grid.ndim != 1 or z_grid.size < 8:
        raise ValueError("z_grid must be a 1-d array with at least 8 points")
    if not np.allclose(z_grid + z_grid[::-1], 0.0, atol=1e-12):
        raise ValueError("z_grid must be symmetric about 0")
    if potential.tail_bound() > 1e-10 * (1.0 + abs(potential.amplitude)):
        raise TruncationTooSmall("potential tail outside [-L, L] too heavy")
    X = potential.scatter_halfwidth()
    traj, err = y_matrix_batch(potential, z_grid.astype(complex),
                               rtol=rtol, x_nodes=np.array([0.0, X]))
    S = traj[1]                     # Y^-(z, +X) = S(z)
    a, b_breve = S[:, 0, 0], S[:, 0, 1]
    b, a_breve = S[:, 1, 0], S[:, 1, 1]

    if check:
        # product formula at x = 0: a(z) = Y11(z,0) conj(Y11(-z,0))
        #                                 - sigma Y21(z,0) conj(Y21(-z,0))
        Y0 = traj[0]
        flip = slice(None, None, -1)
        a_prod = (Y0[:, 0, 0] * np.conj(Y0[flip, 0, 0])
                  - potential.sigma * Y0[:, 1, 0] * np.conj(Y0[flip, 1, 0]))
        mismatch = float(np.abs(a_prod - a).max())
        if mismatch > 200.0 * max(err, rtol):
            raise GenericityViolation(
                f"determinant/product formulas disagree by {mismatch:.3e}"
            )

    w = 1.0 - (b / a) * (b_breve / a_breve)
    min_a = float(np.abs(a).min())
    min_w = float(np.abs(w).min())
    if min_a < EPS_A:
        raise GenericityViolation(f"|a| reaches {min_a:.3e} on the real grid")
    if min_w < EPS_GENERIC:
        raise GenericityViolation(f"|1 - r rbreve| reaches {min_w:.3e}")

    return ScatteringData(
        z_grid=z_grid, a=a, a_breve=a_breve, b=b, b_breve=b_breve,
        r=b / a, r_breve=b_breve / a_breve,
        truncation_L=X, truncation_error=err, potential=potential,
    )


def _expm2_tracefree(d, b, c):
    m = np.sqrt(d * d + b * c + 0.0j)
    small = np.abs(m) < 1e-8
    msafe = np.where(small, 1.0, m)
    sh = np.where(small, 1.0 + m * m / 6.0, np.sinh(msafe) / msafe)
    ch = np.cosh(m)
    return ch + sh * d, sh * b, sh * c, ch - sh * d


def exact_box_scattering(box: Potential, z):
    """Scattering coefficients of a box potential from interval exponentials.

    The box support and its mirror cut the line into constant-coefficient
    intervals; the transfer matrix is the ordered product of
    exp(dx (-i z sigma3 + Q_j)) with free phases outside, exact up to
    matrix-exponential roundoff.  Returns (a, b, abreve, bbreve).
    """
    if box.kind != "box":
        raise NotPiecewiseConstant(f"kind {box.kind!r} is not piecewise constant")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    left = float(box.params.get("left", -1.0))
    right = float(box.params.get("right", 1.0))
    pts = sorted({left, right, -left, -right})
    x_start, x_end = pts[0], pts[-1]

    t11 = np.ones_like(z)
    t12 = np.zeros_like(z)
    t21 = np.zeros_like(z)
    t22 = np.ones_like(z)
    A = box.amplitude
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (lo + hi)
        q = A if left <= mid <= right else 0.0
        mc = np.conj(A) if left <= -mid <= right else 0.0
        h = hi - lo
        e11, e12, e21, e22 = _expm2_tracefree(
            -1j * z * h, np.full_like(z, h * q), np.full_like(z, -box.sigma * h * mc)
        )
        t11, t12, t21, t22 = (
            e11 * t11 + e12 * t21,
            e11 * t12 + e12 * t22,
            e21 * t11 + e22 * t21,
            e21 * t12 + e22 * t22,
        )
    # S = e^{i x_end z s3} T e^{-i x_start z s3}
    ep, em = np.exp(1j * x_end * z), np.exp(-1j * x_end * z)
    sp, sm = np.exp(-1j * x_start * z), np.exp(1j * x_start * z)
    a = ep * t11 * sp
    b_breve = ep * t12 * sm
    b = em * t21 * sp
    a_breve = em * t22 * sm
    if scalar:
        return complex(a[0]), complex(b[0]), complex(a_breve[0]), complex(b_breve[0])
    return a, b, a_breve, b_breve


@dataclass
class GenericityReport:
    min_abs_a: float
    min_abs_one_minus_rr: float
    winding: int | None
    contour_radius: float | None
    a_pass: bool
    rr_pass: bool
    winding_pass: bool | None

    @property
    def passed(self) -> bool:
        ok = self.a_pass and self.rr_pass
        if self.winding_pass is not None:
            ok = ok and self.winding_pass
        return ok


def check_genericity(data: ScatteringData, n_arc: int = 256,
                     radius: float | None = None) -> GenericityReport:
    """Report min |a|, min |1 - r rbreve| and the winding number of a(z).

    The winding is counted along the boundary of the half-disc of the given
    radius in the closed upper half-plane; a(z) on the arc is obtained by
    integrating the analytic first column at complex z.  Zero winding means
    no zeros of a(z) are claimed inside.  Requires the data to remember its
    potential; otherwise the winding entry is None.
    """
    min_a = float(np.abs(data.a).min())
    w = 1.0 - data.r * data.r_breve
    min_w = float(np.abs(w).min())
    winding = None
    winding_pass = None
    R = None
    if data.potential is not None:
        R = radius if radius is not None else float(data.z_grid[-1])
        on_axis = np.abs(data.z_grid) <= R
        a_real = data.a[on_axis]
        theta = np.linspace(0.0, np.pi, n_arc)
        z_arc = R * np.exp(1j * theta)
        a_arc, _ = analytic_column_batch(data.potential, z_arc)
        path = np.concatenate([a_real, a_arc[1:]])
        if np.abs(path).min() < EPS_A:
            raise GenericityViolation("a(z) vanishes on the winding contour")
        total = np.unwrap(np.angle(path))
        winding = int(np.round((total[-1] - total[0]) / (2.0 * np.pi)))
        winding_pass = winding == 0
    return GenericityReport(
        min_abs_a=min_a,
        min_abs_one_minus_rr=min_w,
        winding=winding,
        contour_radius=R,
        a_pass=min_a >= EPS_A,
        rr_pass=min_w >= EPS_GENERIC,
        winding_pass=winding_pass,
    )


def evolve_reflection(data: ScatteringData, t0: float) -> ScatteringData:
    """Push reflection data forward in time by the unimodular phase.

    r -> r e^{4 i z^2 t0}, rbreve -> rbreve e^{-4 i z^2 t0}; a, abreve are
    untouched and b, bbreve move with their ratios, so unimodularity and
    1 - r rbreve are preserved exactly.
    """
    if t0 < 0:
        raise ValueError("t0 must be nonnegative")
    phase = np.exp(4j * data.z_grid ** 2 * t0)
    return ScatteringData(
        z_grid=data.z_grid,
        a=data.a.copy(),
        a_breve=data.a_breve.copy(),
        b=data.b * phase,
        b_breve=data.b_breve / phase,
        r=data.r * phase,
        r_breve=data.r_breve / phase,
        truncation_L=data.truncation_L,
        truncation_error=data.truncation_error,
        potential=data.potential,
    )
