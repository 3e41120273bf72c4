"""Initial data q0(x) and the off-diagonal Lax-pair coefficient matrix.

The evolution couples q(x) with conj(q(-x)), so every potential evaluator
exposes both q(x) and the mirrored conjugate m(x) = conj(q(-x)).  The matrix

    Q(x) = [[0, q(x)], [-sigma * conj(q(-x)), 0]]

feeds the linear system  phi_x + i z sigma3 phi = Q phi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import BadInput

sigma3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: |q| below this level counts as numerically absent (truncation criterion)
TAIL_LEVEL = 1e-12

_KINDS = ("zero", "box", "gaussian", "samples")


@dataclass
class Potential:
    kind: str
    amplitude: complex = 0.0 + 0.0j
    sigma: int = 1
    L: float = 64.0
    N: int = 4096
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise BadInput(f"unknown potential kind {self.kind!r}")
        if self.sigma not in (1, -1):
            raise BadInput("sigma must be +1 or -1")
        if not (self.L > 0):
            raise BadInput("domain halfwidth L must be positive")
        if self.N < 4 or self.N & (self.N - 1):
            raise BadInput("N must be a power of two >= 4")
        self.amplitude = complex(self.amplitude)
        self._spline_re = None
        self._spline_im = None
        if self.kind == "box":
            left = float(self.params.get("left", -1.0))
            right = float(self.params.get("right", 1.0))
            if not right > left:
                raise BadInput("box needs right > left")
            if max(abs(left), abs(right)) > self.L:
                raise BadInput("box support must lie inside [-L, L]")
        elif self.kind == "gaussian":
            if float(self.params.get("width", 1.0)) <= 0:
                raise BadInput("gaussian width must be positive")
            if self.tail_bound() > TAIL_LEVEL:
                raise BadInput("gaussian tail exceeds 1e-12 inside [-L, L]")
        elif self.kind == "samples":
            vals = np.asarray(self.params["samples"], dtype=complex)
            if vals.shape != (self.N,):
                raise BadInput("samples array must have length N")
            if not np.all(np.isfinite(vals.view(float))):
                raise BadInput("samples must be finite")
            x = self.grid()
            self._spline_re = CubicSpline(x, vals.real, bc_type="natural")
            self._spline_im = CubicSpline(x, vals.imag, bc_type="natural")

    # -- evaluation ---------------------------------------------------------

    def grid(self) -> np.ndarray:
        """Uniform symmetric grid x_j = -L + j * (2L/N), j = 0..N-1."""
        return -self.L + (2.0 * self.L / self.N) * np.arange(self.N)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros(x.shape, dtype=complex)
        if self.kind == "box":
            left = float(self.params.get("left", -1.0))
            right = float(self.params.get("right", 1.0))
            return np.where((x >= left) & (x <= right), self.amplitude, 0.0 + 0.0j)
        if self.kind == "gaussian":
            w = float(self.params.get("width", 1.0))
            x0 = float(self.params.get("center", 0.0))
            c = float(self.params.get("chirp", 0.0))
            return self.amplitude * np.exp(-(1.0 + 1j * c) * (x - x0) ** 2 / (2.0 * w * w))
        inside = (x >= -self.L) & (x <= self.L)
        out = np.zeros(x.shape, dtype=complex)
        xi = x[inside]
        out[inside] = self._spline_re(xi) + 1j * self._spline_im(xi)
        return out

    def mirror_conj(self, x) -> np.ndarray:
        """conj(q(-x)), the partner sample entering the PT-symmetric product."""
        return np.conj(self(-np.asarray(x, dtype=float)))

    # -- geometry -----------------------------------------------------------

    def scatter_halfwidth(self) -> float:
        """Halfwidth X such that |q| < 1e-12 * (1 + |A|) outside [-X, X]."""
        if self.kind == "zero":
            return 1.0
        if self.kind == "box":
            left = float(self.params.get("left", -1.0))
            right = float(self.params.get("right", 1.0))
            return max(abs(left), abs(right)) + 0.125
        if self.kind == "gaussian":
            w = float(self.params.get("width", 1.0))
            x0 = float(self.params.get("center", 0.0))
            amp = max(abs(self.amplitude), TAIL_LEVEL)
            reach = w * np.sqrt(2.0 * np.log(amp / (TAIL_LEVEL * 0.1)))
            return min(abs(x0) + reach, self.L)
        q = np.abs(np.asarray(self.params["samples"], dtype=complex))
        thresh = TAIL_LEVEL * (1.0 + q.max(initial=0.0))
        hot = np.nonzero(q > thresh)[0]
        if hot.size == 0:
            return 1.0
        x = self.grid()
        return min(max(abs(x[hot[0]]), abs(x[hot[-1]])) + 4.0 * self.L / self.N, self.L)

    def breakpoints(self) -> list[float] | None:
        """Discontinuity locations of x -> (q(x), conj(q(-x))); None if smooth."""
        if self.kind != "box":
            return None
        left = float(self.params.get("left", -1.0))
        right = float(self.params.get("right", 1.0))
        return sorted({left, right, -left, -right})

    def tail_bound(self) -> float:
        """Upper estimate of sup |q| outside [-L, L].

        For sampled data the edge samples stand in for the invisible tail:
        a sampled potential that has not decayed by the boundary cannot be
        truncated faithfully.
        """
        if self.kind in ("zero", "box"):
            return 0.0
        if self.kind == "samples":
            vals = np.abs(np.asarray(self.params["samples"], dtype=complex))
            edge = max(4, self.N // 64)
            return float(max(vals[:edge].max(), vals[-edge:].max()))
        w = float(self.params.get("width", 1.0))
        x0 = float(self.params.get("center", 0.0))
        edge = self.L - abs(x0)
        return abs(self.amplitude) * float(np.exp(-(edge * edge) / (2.0 * w * w)))

    def l1_norm_estimate(self) -> float:
        x = self.grid()
        return float(np.trapezoid(np.abs(self(x)), x))

    # -- serialization ------------------------------------------------------

    @classmethod
    def from_json_dict(cls, doc: dict[str, Any]) -> "Potential":
        if not isinstance(doc, dict):
            raise BadInput("potential descriptor must be a JSON object")
        try:
            kind = doc["kind"]
            amp = doc.get("amplitude", [0.0, 0.0])
            amplitude = complex(float(amp[0]), float(amp[1]))
            params = dict(doc.get("params", {}))
            if "samples" in params:
                arr = np.asarray(params["samples"], dtype=float)
                params["samples"] = arr[:, 0] + 1j * arr[:, 1]
            return cls(
                kind=kind,
                amplitude=amplitude,
                sigma=int(doc.get("sigma", 1)),
                L=float(doc.get("L", 64.0)),
                N=int(doc.get("N", 4096)),
                params=params,
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise BadInput(f"bad potential descriptor: {exc}") from exc

    def to_json_dict(self) -> dict[str, Any]:
        params = dict(self.params)
        if "samples" in params:
            vals = np.asarray(params["samples"], dtype=complex)
            params["samples"] = np.stack([vals.real, vals.imag], axis=1).tolist()
        return {
            "kind": self.kind,
            "amplitude": [self.amplitude.real, self.amplitude.imag],
            "params": params,
            "sigma": self.sigma,
            "L": self.L,
            "N": self.N,
        }


@dataclass(frozen=True)
class LaxMatrix:
    """Q(x) evaluated at one point; diagonal is identically zero."""

    x: float
    q: complex
    mirror: complex
    sigma: int

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[0.0, self.q], [-self.sigma * self.mirror, 0.0]], dtype=complex
        )


def build_lax_matrix(potential: Potential, x: float) -> LaxMatrix:
    """Q(x) with entries Q12 = q(x), Q21 = -sigma conj(q(-x)).

    Out-of-range x yields the zero matrix, consistent with truncation.
    """
    X = potential.scatter_halfwidth()
    if abs(x) > max(X, potential.L):
        return LaxMatrix(x=x, q=0.0j, mirror=0.0j, sigma=potential.sigma)
    q = complex(potential(np.array([x]))[0])
    m = complex(potential.mirror_conj(np.array([x]))[0])
    return LaxMatrix(x=x, q=q, mirror=m, sigma=potential.sigma)
