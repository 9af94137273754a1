"""Mean-zero disorder distributions and the decoherence functions they induce.

Two distributions are supported, Gaussian N(0, sigma^2) and uniform U[-b, b].
The default parameters are variance matched (sigma = 1, b = sqrt(3)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OMEGA3 = np.exp(2j * np.pi / 3)
SERIES_CUTOFF = 1e-4
POLE_TOL = 1e-12
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


class DisorderError(ValueError):
    pass


@dataclass(frozen=True)
class Distribution:
    """Symmetric disorder distribution P(h).

    ``scale`` is sigma for ``kind == "gaussian"`` and the half-width b for
    ``kind == "uniform"``.
    """

    kind: str
    scale: float

    def __post_init__(self):
        if self.kind not in ("gaussian", "uniform"):
            raise DisorderError(f"unknown distribution kind {self.kind!r}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DisorderError(f"distribution scale must be positive, got {self.scale}")

    @property
    def variance(self) -> float:
        if self.kind == "gaussian":
            return self.scale**2
        return self.scale**2 / 3

    # -- densities, sampling, moments ---------------------------------------

    def pdf(self, h):
        h = np.asarray(h, dtype=float)
        if self.kind == "gaussian":
            s = self.scale
            out = np.exp(-0.5 * (h / s) ** 2) / (s * math.sqrt(2 * math.pi))
        else:
            out = np.where(np.abs(h) <= self.scale, 1 / (2 * self.scale), 0.0)
        return out if out.ndim else float(out)

    def sample(self, rng: np.random.Generator, size=None):
        if self.kind == "gaussian":
            return rng.normal(0.0, self.scale, size)
        return rng.uniform(-self.scale, self.scale, size)

    def log_abs_moment(self, n: int) -> float:
        """log E[|h|^n] for even n (the only moments that do not vanish)."""
        if n < 0 or n % 2:
            raise DisorderError("log_abs_moment is defined for even n >= 0")
        if self.kind == "gaussian":
            # (n-1)!! = n! / (2^(n/2) (n/2)!)
            k = n // 2
            return n * math.log(self.scale) + math.lgamma(n + 1) - k * math.log(2) - math.lgamma(k + 1)
        return n * math.log(self.scale) - math.log(n + 1)

    def moment(self, n: int) -> float:
        """E[h^n]; odd moments vanish exactly. Raises OverflowError past float range."""
        if n < 0:
            raise DisorderError("moment order must be non-negative")
        if n % 2:
            return 0.0
        lm = self.log_abs_moment(n)
        if lm > _LOG_FLOAT_MAX:
            raise OverflowError(f"moment E[h^{n}] exceeds the floating range")
        return math.exp(lm)

    # -- characteristic function and decoherence functions --------------------

    def characteristic_fn(self, t_prime):
        """E[exp(-i h t')], real because P(h) is even."""
        tp = np.asarray(t_prime, dtype=float)
        if self.kind == "gaussian":
            out = np.exp(-0.5 * self.scale**2 * tp**2)
        else:
            out = _sinc(self.scale * tp)
        return out if out.ndim else float(out)

    def G(self, t):
        return self.characteristic_fn(2 * np.asarray(t, dtype=float))

    def G_prime(self, t):
        return self.characteristic_fn(t)

    def dG(self, t):
        """Time derivative of G."""
        t = np.asarray(t, dtype=float)
        if self.kind == "gaussian":
            s2 = self.scale**2
            out = -4 * s2 * t * np.exp(-2 * s2 * t**2)
        else:
            out = 2 * self.scale * _dsinc(2 * self.scale * t)
        return out if out.ndim else float(out)

    def gamma_pole(self, t) -> bool:
        return abs(self.G(t)) < POLE_TOL

    def decay_rate_gamma(self, t) -> float:
        """Case-I decay rate -G'(t) / (2 G(t)); NaN at a pole (zero of G)."""
        t = float(t)
        if self.kind == "gaussian":
            return 2 * self.scale**2 * t
        if self.gamma_pole(t):
            return math.nan
        b = self.scale
        x = 2 * b * t
        if abs(x) < SERIES_CUTOFF:
            # 1/t - 2b cot(2bt) = (x^2/3 + x^4/45) / t
            return 0.5 * 2 * b * (x / 3 + x**3 / 45)
        return 0.5 * (1 / t - 2 * b / math.tan(x))

    def G123(self, t) -> tuple[complex, complex, complex]:
        """Qutrit clock-case decoherence functions; Gaussian closed form only."""
        if self.kind != "gaussian":
            raise DisorderError("G1..G3 closed forms exist only for Gaussian disorder; use quadrature")
        x = 1.5 * self.scale**2 * float(t) ** 2
        w = OMEGA3
        v = np.array([np.exp(x), np.exp(w * x), np.exp(w * w * x)])
        g1 = v @ np.array([1, 1, 1])
        g2 = v @ np.array([1, w * w, w])
        g3 = v @ np.array([1, w, w * w])
        return complex(g1), complex(g2), complex(g3)

    # -- quadrature ----------------------------------------------------------

    def quadrature(self, nodes: int) -> tuple[np.ndarray, np.ndarray]:
        """Abscissae and weights with E[f(h)] ~= sum(w * f(h))."""
        if nodes < 1:
            raise DisorderError("need at least one quadrature node")
        if self.kind == "gaussian":
            x, w = np.polynomial.hermite.hermgauss(nodes)
            return math.sqrt(2) * self.scale * x, w / math.sqrt(math.pi)
        x, w = np.polynomial.legendre.leggauss(nodes)
        return self.scale * x, 0.5 * w

    # -- JSON ----------------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "gaussian":
            return {"kind": "gaussian", "sigma": self.scale}
        return {"kind": "uniform", "b": self.scale}

    @classmethod
    def from_json(cls, d: dict) -> Distribution:
        kind = d.get("kind")
        try:
            if kind == "gaussian":
                return cls("gaussian", float(d.get("sigma", 1.0)))
            if kind == "uniform":
                return cls("uniform", float(d.get("b", math.sqrt(3))))
        except (TypeError, ValueError) as exc:
            raise DisorderError(str(exc)) from None
        raise DisorderError(f"unknown distribution kind {kind!r}")


def gaussian(sigma: float = 1.0) -> Distribution:
    return Distribution("gaussian", sigma)


def uniform(b: float = math.sqrt(3)) -> Distribution:
    return Distribution("uniform", b)


def _sinc(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, 1 - x**2 / 6 + x**4 / 120, np.sin(safe) / safe)


def _dsinc(x):
    """d/dx sin(x)/x."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, -x / 3 + x**3 / 30, (safe * np.cos(safe) - np.sin(safe)) / safe**2)
