"""Local model problem at the stationary point: explicit parabolic-cylinder
solution, connection coefficients and jump verification.

With nu = nu(xi), kappa = r(xi) rbreve(xi) (so 1 - kappa = e^{-2 pi nu}) and
the scaled jump data

    rho     = r(xi)      delta0^{-2} (8t)^{+i nu} e^{-i x^2/(4t)}
    rho_hat = rbreve(xi) delta0^{+2} (8t)^{-i nu} e^{+i x^2/(4t)}

the matrix Psi(zeta) built below is analytic off the real axis, satisfies
Psi_+ = Psi_- V on R (limits from above/below) with the constant jump

    V = [[1 - kappa, -rho_hat], [rho, 1]],

and is normalized by Psi ~ zeta^{i nu sigma3} e^{-i zeta^2/4 sigma3} in the
sectors around the imaginary axis.  Its large-zeta (1,2) coefficient gives

    beta1 = sqrt(2 pi) e^{i pi/4} e^{-pi nu/2} / (rho Gamma(-i nu)),

the quantity the leading long-time term is made of, and beta2 = nu/beta1.
Both betas are evaluated through pole-free rearrangements, so the
reflectionless limit r -> 0 or rbreve -> 0 is exact rather than a 0/0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .gammafn import complex_gamma
from .weber import weber_D

_SQRT2PI = math.sqrt(2.0 * math.pi)
_PIQ = 0.25j * math.pi          # i pi/4


def nu_over_w(nu: complex, w: complex) -> complex:
    """nu / (r rbreve) continued through w = 0.

    nu = -log(1 - w)/(2 pi) makes this -log(1-w)/(2 pi w), analytic at w = 0
    with value 1/(2 pi); the series is used below |w| = 1e-4.
    """
    if abs(w) > 1e-4:
        return nu / w
    s = 1.0 + w * (0.5 + w * (1.0 / 3.0 + w * (0.25 + w / 5.0)))
    return s / (2.0 * math.pi)


@dataclass
class ModelCoefficients:
    nu: complex
    r_xi: complex
    r_breve_xi: complex
    delta0: complex
    xi: float
    t: float
    rho: complex
    rho_hat: complex
    beta1: complex
    beta2: complex


@dataclass
class ModelMatrix:
    zeta: complex
    Psi: np.ndarray            # 2x2 complex
    half_plane: str            # "upper" | "lower"


def connection_coefficients(r_xi, r_breve_xi, nu, delta0, xi, t) -> ModelCoefficients:
    """Scaled jump data and the explicit-solution coefficients beta1, beta2.

    t > 0 is required; the reflectionless degeneracies are handled by the
    stabilized products (see module docstring), never by dividing by r(xi).
    """
    if not t > 0:
        raise ValueError("t must be positive")
    r_xi = complex(r_xi)
    r_breve_xi = complex(r_breve_xi)
    nu = complex(nu)
    delta0 = complex(delta0)
    w = r_xi * r_breve_xi
    log8t = cmath.log(8.0 * t)
    phase_t = cmath.exp(1j * nu * log8t)            # (8t)^{i nu}
    osc = cmath.exp(-4j * t * xi * xi)              # e^{-i x^2/(4t)}, x = -4 t xi
    rho = r_xi * delta0 ** -2 * phase_t * osc
    rho_hat = r_breve_xi * delta0 ** 2 / phase_t / osc
    # beta1 = sqrt(2pi) e^{i pi/4 - pi nu/2} / (rho Gamma(-i nu)), stabilized
    # through 1/Gamma(-i nu) = -i nu / Gamma(1 - i nu) and nu/r = rbreve*(nu/w):
    core = _SQRT2PI * cmath.exp(_PIQ - math.pi * nu / 2.0) / complex_gamma(1.0 - 1j * nu)
    beta1 = core * (-1j) * r_breve_xi * nu_over_w(nu, w) * delta0 ** 2 / phase_t / osc
    # beta2 = nu/beta1 in the same pole-free style:
    beta2 = (1j * rho * complex_gamma(1.0 - 1j * nu)
             * cmath.exp(math.pi * nu / 2.0 - _PIQ) / _SQRT2PI)
    return ModelCoefficients(
        nu=nu, r_xi=r_xi, r_breve_xi=r_breve_xi, delta0=delta0, xi=float(xi),
        t=float(t), rho=rho, rho_hat=rho_hat, beta1=beta1, beta2=beta2,
    )


def jump_matrix(coeffs: ModelCoefficients) -> np.ndarray:
    """Constant jump V of the model problem across the real zeta axis."""
    kappa = coeffs.r_xi * coeffs.r_breve_xi
    return np.array(
        [[1.0 - kappa, -coeffs.rho_hat], [coeffs.rho, 1.0]], dtype=complex
    )


def psi(zeta, coeffs: ModelCoefficients) -> ModelMatrix:
    """Evaluate the explicit model solution off the real axis.

    Diagonal entries are single parabolic-cylinder values; the off-diagonal
    ones use the first-order system, reduced by the ladder identity to
    neighboring orders so that no division by beta can occur.
    """
    zeta = complex(zeta)
    if zeta.imag == 0.0:
        raise ValueError("psi is defined off the real axis; pass Im zeta != 0")
    nu = coeffs.nu
    upper = zeta.imag > 0
    if upper:
        c1, p1 = cmath.exp(-0.75j * math.pi), cmath.exp(-0.75 * math.pi * nu)
        c2, p2 = cmath.exp(-0.25j * math.pi), cmath.exp(0.25 * math.pi * nu)
    else:
        c1, p1 = cmath.exp(0.25j * math.pi), cmath.exp(0.25 * math.pi * nu)
        c2, p2 = cmath.exp(0.75j * math.pi), cmath.exp(-0.75 * math.pi * nu)
    a1 = 1j * nu
    P11 = p1 * weber_D(a1, c1 * zeta)
    P22 = p2 * weber_D(-a1, c2 * zeta)
    P21 = 1j * coeffs.beta2 * p1 * c1 * weber_D(a1 - 1.0, c1 * zeta)
    P12 = -1j * coeffs.beta1 * p2 * c2 * weber_D(-a1 - 1.0, c2 * zeta)
    return ModelMatrix(
        zeta=zeta,
        Psi=np.array([[P11, P12], [P21, P22]], dtype=complex),
        half_plane="upper" if upper else "lower",
    )


def psi_normalizer(zeta, nu) -> np.ndarray:
    """diag(zeta^{i nu} e^{-i zeta^2/4}, zeta^{-i nu} e^{+i zeta^2/4})."""
    zeta = complex(zeta)
    lg = cmath.log(zeta)
    e = cmath.exp(-0.25j * zeta * zeta)
    d1 = cmath.exp(1j * nu * lg) * e
    return np.array([[d1, 0.0], [0.0, 1.0 / d1]], dtype=complex)


def row_ode_residual(coeffs: ModelCoefficients, zeta, h=1e-3) -> float:
    """Weber-type second-order residual of both rows of Psi at zeta.

    Row 1 entries solve w'' = (-i/2 + nu - z^2/4) w, row 2 entries the
    conjugate-sign variant; returns the worst normalized residual.
    """
    zeta = complex(zeta)
    stack = [psi(zeta + k * h, coeffs).Psi for k in (-2, -1, 0, 1, 2)]
    worst = 0.0
    for (i, j) in ((0, 0), (0, 1), (1, 0), (1, 1)):
        w = [m[i, j] for m in stack]
        d2 = (-w[0] + 16 * w[1] - 30 * w[2] + 16 * w[3] - w[4]) / (12.0 * h * h)
        sign = -0.5j if i == 0 else 0.5j
        res = d2 - (sign + coeffs.nu - zeta * zeta / 4.0) * w[2]
        scale = (1.0 + abs(coeffs.nu) + abs(zeta) ** 2 / 4.0) * max(abs(v) for v in w)
        worst = max(worst, abs(res) / scale if scale > 0 else abs(res))
    return worst
