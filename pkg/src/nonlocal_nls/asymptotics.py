"""Leading long-time behavior along rays xi = -x/(4t).

Two algebraically identical routes are computed and cross-checked:

    q_leading = 2 beta1 / sqrt(8 t)           (model coefficients)
    q_leading = alpha(xi) t^{Im nu - 1/2}     (closed form)

with

    alpha(xi) = sqrt(pi) e^{-pi nu/2 + i pi/4 + 4 i t xi^2} t^{-i Re nu}
                * delta0(xi)^2 8^{-i nu} / (r(xi) Gamma(-i nu)),

evaluated through the same pole-free rearrangement as beta1, so the
reflectionless limit gives exactly zero.  |alpha| is t-independent; the
whole t-dependence of alpha is the unimodular phase e^{4 i t xi^2} t^{-i Re nu}.

The formula is trusted only while |Im nu(xi)| < 1/4: at +1/4 the leading
term would be overtaken by the O(t^{-3/4}) remainder (and the mirrored
threshold is refused symmetrically); inside a 0.02-wide band below the
threshold the evaluation is flagged "marginal".
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from weakref import WeakKeyDictionary

from .errors import ValidityViolation, WindowExceeded
from .gammafn import complex_gamma
from .model import connection_coefficients, nu_over_w
from .phase import PhaseData, phase_data, stationary_point
from .scattering import ScatteringData

IM_NU_LIMIT = 0.25
MARGIN = 0.02
T_MIN_DEFAULT = 10.0

_phase_cache: "WeakKeyDictionary[ScatteringData, dict]" = WeakKeyDictionary()


@dataclass
class AsymptoticEvaluation:
    x: float
    t: float
    xi: float
    alpha: complex
    q_leading: complex
    validity: str            # "valid" | "marginal"
    im_nu: float


def _phase_at(data: ScatteringData, xi: float) -> PhaseData:
    per_data = _phase_cache.setdefault(data, {})
    key = round(float(xi), 12)
    if key not in per_data:
        per_data[key] = phase_data(data, xi)
    return per_data[key]


def alpha(data: ScatteringData, phase: PhaseData, t: float) -> complex:
    """Ray amplitude alpha(xi); pure phase in t, refused outside validity."""
    if not t > 0:
        raise ValueError("t must be positive")
    nu = phase.nu_at_xi
    _gate(nu)
    w = phase.r_xi * phase.r_breve_xi
    # sqrt(pi) e^{-pi nu/2 + i pi/4 + 4 i t xi^2} t^{-i Re nu} delta0^2 8^{-i nu}
    #   * (-i) rbreve(xi) (nu/w) / Gamma(1 - i nu)
    phase_factor = cmath.exp(
        1j * (0.25 * math.pi + 4.0 * t * phase.xi ** 2 - nu.real * math.log(t))
    )
    return (
        math.sqrt(math.pi)
        * cmath.exp(-math.pi * nu / 2.0)
        * phase_factor
        * phase.delta0 ** 2
        * cmath.exp(-1j * nu * math.log(8.0))
        * (-1j)
        * phase.r_breve_xi
        * nu_over_w(nu, w)
        / complex_gamma(1.0 - 1j * nu)
    )


def _gate(nu: complex) -> str:
    im = nu.imag
    if abs(im) >= IM_NU_LIMIT:
        raise ValidityViolation(
            f"Im nu = {im:.4f}; leading term not separated from the "
            f"O(t^-3/4) remainder at |Im nu| >= {IM_NU_LIMIT}"
        )
    return "valid" if abs(im) < IM_NU_LIMIT - MARGIN else "marginal"


def q_asymptotic(x: float, t: float, data: ScatteringData,
                 t_min: float = T_MIN_DEFAULT) -> AsymptoticEvaluation:
    """Leading-order q(x, t) with validity diagnostics.

    Both the alpha route and the 2 beta1/sqrt(8t) route are computed; they
    are the same algebra regrouped, and their agreement (1e-10) guards the
    assembly, not the mathematics.
    """
    if t < t_min:
        raise ValueError(f"t = {t} below configured t_min = {t_min}")
    xi = stationary_point(x, t)
    z = data.z_grid
    span = z[-1] - z[0]
    if not (z[0] + 0.01 * span <= xi <= z[-1] - 0.01 * span):
        raise WindowExceeded(f"xi = {xi} outside the spectral window interior")
    ph = _phase_at(data, xi)
    nu = ph.nu_at_xi
    validity = _gate(nu)

    coeffs = connection_coefficients(ph.r_xi, ph.r_breve_xi, nu, ph.delta0, xi, t)
    q_model = 2.0 * coeffs.beta1 / math.sqrt(8.0 * t)

    a = alpha(data, ph, t)
    # t-power e^{(Im nu - 1/2) log t} in a single exponential
    q_closed = a * math.exp((nu.imag - 0.5) * math.log(t))

    scale = max(abs(q_model), abs(q_closed), 1e-300)
    if abs(q_model - q_closed) > 1e-10 * scale:
        raise ArithmeticError(
            "alpha-route and beta1-route disagree: "
            f"{q_model} vs {q_closed}"
        )
    return AsymptoticEvaluation(
        x=float(x), t=float(t), xi=float(xi), alpha=a,
        q_leading=q_model, validity=validity, im_nu=float(nu.imag),
    )
