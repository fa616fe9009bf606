"""Continuous weighted composite distributions with a Pareto tail.

The density is ``g1(x)/G1(theta)/(1+phi)`` on ``(0, theta]`` and the Pareto
density ``alpha theta^alpha / x^(alpha+1)`` weighted by ``phi/(1+phi)`` above
``theta``. Only continuity at ``theta`` is imposed, which fixes

    phi = theta * g1(theta) / (alpha * G1(theta)).

Heads are pluggable: anything implementing :class:`HeadModel` works. The
lognormal and Weibull heads ship built in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DegenerateHeadError, DomainError
from .specfun import std_normal_cdf, std_normal_sf

__all__ = [
    "HeadModel",
    "Lognormal",
    "Weibull",
    "CompositeParams",
    "compute_phi",
    "composite_pdf",
    "composite_cdf",
    "composite_sf",
    "composite_pdf_limits",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)


class HeadModel:
    """Evaluation contract for a head distribution supported on ``(0, inf)``.

    Subclasses provide ``pdf``, ``cdf`` and ``sf`` (vectorized). The
    defaults for ``splice_ratio`` and ``interval_mass`` are generic; heads can
    override them with numerically safer closed forms.
    """

    kind: str = "custom"

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def splice_ratio(self, theta: float) -> float:
        """``theta * g1(theta) / G1(theta)``; ``phi`` is this over ``alpha``."""
        return float(theta * self.pdf(theta) / self.cdf(theta))

    def interval_mass(self, lo, hi):
        """``G1(hi) - G1(lo)``, differencing whichever tail is smaller."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        c_hi = self.cdf(hi)
        lower = c_hi - self.cdf(lo)
        upper = self.sf(lo) - self.sf(hi)
        return np.where(c_hi <= 0.5, lower, upper)

    def as_dict(self) -> dict[str, float]:
        raise NotImplementedError


@dataclass(frozen=True)
class Lognormal(HeadModel):
    mu: float
    sigma: float
    kind: str = field(default="lognormal", init=False, repr=False)

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError("lognormal mu must be finite")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError("lognormal sigma must be > 0")

    def _z(self, x):
        with np.errstate(divide="ignore"):
            return (np.log(np.asarray(x, dtype=float)) - self.mu) / self.sigma

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        z = self._z(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(-0.5 * z * z) / (_SQRT_2PI * self.sigma * x)
        return np.where(x > 0, out, 0.0)

    def cdf(self, x):
        return std_normal_cdf(self._z(x))

    def sf(self, x):
        return std_normal_sf(self._z(x))

    def splice_ratio(self, theta: float) -> float:
        # exp(-z^2/2) / Phi(z) == 2 / erfcx(-z / sqrt 2), finite deep in the lower tail
        z = float(self._z(theta))
        return float(2.0 / (_SQRT_2PI * self.sigma * special.erfcx(-z / _SQRT2)))

    def as_dict(self) -> dict[str, float]:
        return {"mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class Weibull(HeadModel):
    shape: float
    scale: float
    kind: str = field(default="weibull", init=False, repr=False)

    def __post_init__(self):
        if not (self.shape > 0 and math.isfinite(self.shape)):
            raise DomainError("Weibull shape must be > 0")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError("Weibull scale must be > 0")

    def _u(self, x):
        return (np.asarray(x, dtype=float) / self.scale) ** self.shape

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        u = self._u(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.shape / x * u * np.exp(-u)
        return np.where(x > 0, out, 0.0)

    def cdf(self, x):
        return -np.expm1(-self._u(x))

    def sf(self, x):
        return np.exp(-self._u(x))

    def splice_ratio(self, theta: float) -> float:
        u = float(self._u(theta))
        if u == 0.0:
            return 0.0
        return self.shape * u * math.exp(-u) / -math.expm1(-u)

    def interval_mass(self, lo, hi):
        # exp(-u_lo) * (1 - exp(-(u_hi - u_lo)))
        u_lo = self._u(lo)
        u_hi = self._u(hi)
        return np.exp(-u_lo) * -np.expm1(-(u_hi - u_lo))

    def as_dict(self) -> dict[str, float]:
        return {"shape": self.shape, "scale": self.scale}


def compute_phi(head: HeadModel, alpha: float, theta: float) -> float:
    """Weight fixed by density continuity at the splice point."""
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError("alpha must be > 0")
    if not (theta > 0 and math.isfinite(theta)):
        raise DomainError("theta must be > 0")
    if not float(head.cdf(theta)) > 0.0:
        raise DegenerateHeadError(f"head CDF underflows at theta={theta!r}")
    phi = head.splice_ratio(theta) / alpha
    if not (phi > 0.0 and math.isfinite(phi)):
        raise DegenerateHeadError(f"weight phi={phi!r} is not positive and finite")
    return phi


@dataclass(frozen=True)
class CompositeParams:
    """Head, Pareto tail index ``alpha`` and splice point ``theta``.

    ``phi`` is derived at construction and cached.
    """

    head: HeadModel
    alpha: float
    theta: float
    phi: float = field(init=False)
    head_cdf_theta: float = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", compute_phi(self.head, self.alpha, self.theta))
        object.__setattr__(self, "head_cdf_theta", float(self.head.cdf(self.theta)))

    @property
    def head_weight(self) -> float:
        return 1.0 / (1.0 + self.phi)

    @property
    def tail_weight(self) -> float:
        return self.phi / (1.0 + self.phi)

    def pdf(self, x):
        return composite_pdf(self, x)

    def cdf(self, x):
        return composite_cdf(self, x)

    def sf(self, x):
        return composite_sf(self, x)

    def as_dict(self) -> dict[str, float]:
        return {**self.head.as_dict(), "alpha": self.alpha, "theta": self.theta}


def _as_float(x, out):
    return float(out) if np.ndim(x) == 0 else out


def composite_pdf(p: CompositeParams, x):
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("composite_pdf requires x > 0")
    head = p.head_weight * p.head.pdf(np.minimum(xa, p.theta)) / p.head_cdf_theta
    tail = p.tail_weight * p.alpha / p.theta * (p.theta / np.maximum(xa, p.theta)) ** (p.alpha + 1.0)
    return _as_float(x, np.where(xa <= p.theta, head, tail))


def composite_cdf(p: CompositeParams, x):
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa >= 0)):
        raise DomainError("composite_cdf requires x >= 0")
    head = p.head_weight * p.head.cdf(np.minimum(xa, p.theta)) / p.head_cdf_theta
    tail = 1.0 - p.tail_weight * (p.theta / np.maximum(xa, p.theta)) ** p.alpha
    return _as_float(x, np.where(xa <= p.theta, head, tail))


def composite_sf(p: CompositeParams, x):
    """Survival function; the tail branch is evaluated directly, not as 1 - CDF."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa >= 0)):
        raise DomainError("composite_sf requires x >= 0")
    head = 1.0 - p.head_weight * p.head.cdf(np.minimum(xa, p.theta)) / p.head_cdf_theta
    tail = p.tail_weight * (p.theta / np.maximum(xa, p.theta)) ** p.alpha
    return _as_float(x, np.where(xa <= p.theta, head, tail))


def composite_pdf_limits(p: CompositeParams) -> tuple[float, float]:
    """Left and right limits of the density at ``theta``."""
    left = p.head_weight * float(p.head.pdf(p.theta)) / p.head_cdf_theta
    right = p.tail_weight * p.alpha / p.theta
    return left, right
