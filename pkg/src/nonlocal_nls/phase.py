"""Deformation phase objects: stationary point, nu(s), delta(z), beta(z, xi).

Definitions used throughout (normative properties in parentheses):

    nu(s)    = -log(1 - r(s) rbreve(s)) / (2 pi),  branch unwrapped along the
               grid from the left tail where r rbreve -> 0
    delta(z) = exp( int_{-inf}^{xi} i nu(s)/(s - z) ds )
               (Plemelj: delta_+ = (1 - r rbreve) delta_- on (-inf, xi))
    beta(z)  = int_{-inf}^{xi} (nu(s) - chi(s) nu(xi))/(s - z) ds
               - nu(xi) Log(z - xi + 1),   chi = indicator of [xi-1, xi]
               (factorization: delta = e^{i beta} (z - xi)^{i nu(xi)})
    delta0   = e^{i beta(xi, xi)}

The delta exponent carries a single factor of i so that the stated jump
holds; the beta integrand carries 1/(s - z) for the same reason.  The
removable sqrt-type endpoint behavior at s = xi is integrated with the
substitution s = xi - u^2.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from weakref import WeakKeyDictionary

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import CubicSpline

from .errors import (
    BranchViolation,
    CutEvaluation,
    GenericityViolation,
    NonpositiveTime,
    QuadratureFailure,
    WindowExceeded,
)
from .scattering import EPS_GENERIC, ScatteringData

_QUAD_LIMIT = 400
_interp_cache: "WeakKeyDictionary[ScatteringData, _Interp]" = WeakKeyDictionary()


def stationary_point(x: float, t: float) -> float:
    """xi = -x/(4t), the zero of the phase derivative."""
    if not t > 0:
        raise NonpositiveTime(f"t must be positive, got {t}")
    return -x / (4.0 * t)


class _Interp:
    """Cubic interpolants of r, rbreve and the unwrapped arg of 1 - r rbreve."""

    def __init__(self, data: ScatteringData):
        z = data.z_grid
        self.z_lo = float(z[0])
        self.z_hi = float(z[-1])
        w = 1.0 - data.r * data.r_breve
        if np.abs(w).min() < EPS_GENERIC:
            raise GenericityViolation("1 - r rbreve nearly vanishes on the grid")
        arg = np.unwrap(np.angle(w))
        arg -= arg[0] - math.remainder(arg[0], 2.0 * math.pi)
        self.branch_max_arg = float(np.abs(arg).max())
        if self.branch_max_arg >= math.pi:
            raise BranchViolation(
                f"|arg(1 - r rbreve)| reaches {self.branch_max_arg:.3f}"
            )
        self._re_r = CubicSpline(z, data.r.real)
        self._im_r = CubicSpline(z, data.r.imag)
        self._re_rb = CubicSpline(z, data.r_breve.real)
        self._im_rb = CubicSpline(z, data.r_breve.imag)
        self._arg = CubicSpline(z, arg)
        nu_grid = -(np.log(np.abs(w)) + 1j * arg) / (2.0 * math.pi)
        # left-edge magnitude for tail estimates; a window maximum is used so
        # an oscillation node at the very end cannot fake a small tail
        edge = max(4, len(z) // 20)
        self._abs_nu_tail = float(np.abs(nu_grid[:edge]).max())
        self.nu_grid = nu_grid

    def r(self, s):
        return self._re_r(s) + 1j * self._im_r(s)

    def r_breve(self, s):
        return self._re_rb(s) + 1j * self._im_rb(s)

    def w(self, s):
        return 1.0 - self.r(s) * self.r_breve(s)

    def nu(self, s):
        """Interpolate r, rbreve first, then take the branch-corrected log."""
        w = self.w(s)
        aw = np.abs(w)
        if np.any(aw < EPS_GENERIC):
            raise GenericityViolation("1 - r rbreve nearly vanishes off-grid")
        arg_ref = self._arg(s)
        arg = np.angle(w)
        k = np.round((arg_ref - arg) / (2.0 * math.pi))
        return -(np.log(aw) + 1j * (arg + 2.0 * math.pi * k)) / (2.0 * math.pi)


def _interp(data: ScatteringData) -> _Interp:
    itp = _interp_cache.get(data)
    if itp is None:
        itp = _Interp(data)
        _interp_cache[data] = itp
    return itp


def branch_diagnostics(data: ScatteringData) -> float:
    """max |arg(1 - r rbreve)| over the grid after unwrapping."""
    return _interp(data).branch_max_arg


def nu_at(data: ScatteringData, s: float) -> complex:
    """nu(s) between grid nodes (cubic in r, rbreve before the log)."""
    itp = _interp(data)
    if not itp.z_lo <= s <= itp.z_hi:
        raise WindowExceeded(f"s = {s} outside the spectral grid")
    return complex(itp.nu(np.asarray(s)))


def _quad_complex(f, a, b, points=None, epsabs=1e-12, epsrel=1e-11):
    kw = dict(limit=_QUAD_LIMIT, epsabs=epsabs, epsrel=epsrel)
    if points:
        kw["points"] = [p for p in points if a < p < b]
        if not kw["points"]:
            del kw["points"]
    with warnings.catch_warnings():
        # roundoff warnings are expected near the subtracted point; the
        # explicit error-estimate gate below is the real guard
        warnings.simplefilter("ignore", IntegrationWarning)
        re, re_err = quad(lambda s: f(s).real, a, b, **kw)
        im, im_err = quad(lambda s: f(s).imag, a, b, **kw)
    err = re_err + im_err
    if err > 1e-6:
        raise QuadratureFailure(f"quadrature error estimate {err:.2e}")
    return complex(re, im), err


def _log_ratio(z, hi, lo):
    """int_lo^hi ds/(s - z) = Log(hi - z) - Log(lo - z) for z off [lo, hi]."""
    return cmath.log(hi - z) - cmath.log(lo - z)


def _cauchy_exponent(data: ScatteringData, xi: float, z: complex):
    """int_{z_lo}^{xi} i nu(s)/(s - z) ds with local subtraction near Re z."""
    itp = _interp(data)
    z_lo = itp.z_lo
    if xi > itp.z_hi or xi < z_lo:
        raise WindowExceeded(f"xi = {xi} outside the spectral grid")
    z = complex(z)
    near = (z_lo - 1.0 <= z.real <= xi + 1.0) and abs(z.imag) < 1.0
    if near:
        s_ref = min(max(z.real, z_lo), xi)
        nu_ref = complex(itp.nu(np.asarray(s_ref)))

        def f(s):
            return 1j * (complex(itp.nu(np.asarray(s))) - nu_ref) / (s - z)

        val, err = _quad_complex(f, z_lo, xi, points=[s_ref])
        val += 1j * nu_ref * _log_ratio(z, xi, z_lo)
    else:
        def f(s):
            return 1j * complex(itp.nu(np.asarray(s))) / (s - z)

        val, err = _quad_complex(f, z_lo, xi)
    # analytic tail bound beyond the window, reported not added
    dist = max(abs(z - z_lo), 1.0)
    tail = itp._abs_nu_tail * abs(z_lo) / max(abs(z_lo), 1.0) / dist
    return val, err + tail


def delta(data: ScatteringData, xi: float, z: complex) -> complex:
    """delta(z) off the cut (-inf, xi]."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= xi:
        raise CutEvaluation(f"z = {z} lies on the cut (-inf, {xi}]")
    val, _ = _cauchy_exponent(data, xi, z)
    return cmath.exp(val)


def delta_boundary(data: ScatteringData, xi: float, z0: float, side: str) -> complex:
    """One-sided boundary value delta_+/- at z0 on the cut.

    Evaluated at z0 +- i eps with eps = 1e-6 (1 + |xi|) and Richardson
    extrapolation in eps on the exponent.
    """
    if z0 > xi:
        raise CutEvaluation(f"z0 = {z0} is to the right of xi = {xi}")
    sgn = 1.0 if side == "plus" else -1.0
    eps = 1e-6 * (1.0 + abs(xi))
    e1, _ = _cauchy_exponent(data, xi, complex(z0, sgn * eps))
    e2, _ = _cauchy_exponent(data, xi, complex(z0, sgn * eps / 2.0))
    return cmath.exp(2.0 * e2 - e1)


def beta(data: ScatteringData, xi: float, z: complex) -> complex:
    """Regularized phase beta(z, xi); finite at z = xi."""
    itp = _interp(data)
    z = complex(z)
    if z.imag == 0.0 and z.real < xi:
        raise CutEvaluation("beta is evaluated off (-inf, xi) or at xi itself")
    if xi > itp.z_hi or xi - 1.0 < itp.z_lo:
        raise WindowExceeded("xi (and xi - 1) must lie inside the grid")
    nu_xi = complex(itp.nu(np.asarray(xi)))

    # chunk 1: (z_lo, xi - 1], integrand nu(s)/(s - z)
    near = (itp.z_lo - 1.0 <= z.real <= xi + 1.0) and abs(z.imag) < 1.0
    s_ref = min(max(z.real, itp.z_lo), xi - 1.0)
    if near:
        nu_ref = complex(itp.nu(np.asarray(s_ref)))

        def f1(s):
            return (complex(itp.nu(np.asarray(s))) - nu_ref) / (s - z)

        v1, e1 = _quad_complex(f1, itp.z_lo, xi - 1.0, points=[s_ref])
        v1 += nu_ref * _log_ratio(z, xi - 1.0, itp.z_lo)
    else:
        def f1(s):
            return complex(itp.nu(np.asarray(s))) / (s - z)

        v1, e1 = _quad_complex(f1, itp.z_lo, xi - 1.0)

    # chunk 2: [xi - 1, xi] with s = xi - u^2 absorbing the endpoint
    def f2(u):
        s = xi - u * u
        return 2.0 * u * (complex(itp.nu(np.asarray(s))) - nu_xi) / (s - z)

    hint = math.sqrt(abs(z - xi)) if abs(z - xi) < 1.0 else None
    v2, e2 = _quad_complex(f2, 0.0, 1.0, points=[hint] if hint else None)

    return v1 + v2 - nu_xi * cmath.log(z - xi + 1.0)


def delta0(data: ScatteringData, xi: float) -> complex:
    """delta0(xi) = e^{i beta(xi, xi)}."""
    return cmath.exp(1j * beta(data, xi, complex(xi)))


def nu_tail_with_bound(data: ScatteringData, xi: float):
    """(int_{-inf}^{xi} nu(s) ds over the grid, estimated truncation error)."""
    itp = _interp(data)
    if xi > itp.z_hi or xi < itp.z_lo:
        raise WindowExceeded(f"xi = {xi} outside the spectral grid")

    def f(s):
        return complex(itp.nu(np.asarray(s)))

    val, err = _quad_complex(f, itp.z_lo, xi)
    # tail: envelope |nu(s)| <= nu_edge (s/z_lo)^{-2} beyond the window
    # (the 1/s^2 rate is the slow box-like case; smooth data decay faster,
    # so the reported bound errs on the safe side)
    tail = itp._abs_nu_tail * abs(itp.z_lo)
    return val, err + tail


def nu_tail_integral(data: ScatteringData, xi: float) -> complex:
    return nu_tail_with_bound(data, xi)[0]


@dataclass
class PhaseData:
    xi: float
    nu_at_xi: complex
    delta0: complex
    nu_tail_integral: complex
    nu_tail_bound: float
    branch_max_arg: float
    r_xi: complex
    r_breve_xi: complex

    def to_json_dict(self):
        return {
            "xi": self.xi,
            "nu": [self.nu_at_xi.real, self.nu_at_xi.imag],
            "delta0": [self.delta0.real, self.delta0.imag],
            "nu_tail": [self.nu_tail_integral.real, self.nu_tail_integral.imag],
            "branch_max_arg": self.branch_max_arg,
        }


def phase_data(data: ScatteringData, xi: float) -> PhaseData:
    """All phase quantities the asymptotic formula consumes, at one xi."""
    itp = _interp(data)
    tail, bound = nu_tail_with_bound(data, xi)
    return PhaseData(
        xi=float(xi),
        nu_at_xi=nu_at(data, xi),
        delta0=delta0(data, xi),
        nu_tail_integral=tail,
        nu_tail_bound=bound,
        branch_max_arg=itp.branch_max_arg,
        r_xi=complex(itp.r(np.asarray(xi))),
        r_breve_xi=complex(itp.r_breve(np.asarray(xi))),
    )
