"""Baseline count distributions: Poisson, NB and their zero-inflated versions.

Zero inflation mixes a point mass at zero with weight ``pi`` into the count
model: ``P(0) = pi + (1 - pi) f(0)`` and ``P(y) = (1 - pi) f(y)`` for
``y > 0``. NB uses ``size`` ``r`` and success probability ``p`` with
``f(y) = C(y + r - 1, y) p^r (1 - p)^y`` and mean ``r (1 - p) / p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DomainError

__all__ = ["PoissonDist", "ZIPDist", "NBDist", "ZINBDist"]


class _CountDist:
    def pmf(self, y):
        return np.exp(self.logpmf(y))

    def prob_zero(self) -> float:
        return float(self.pmf(0))


@dataclass(frozen=True)
class PoissonDist(_CountDist):
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError("Poisson rate must be > 0")

    def logpmf(self, y):
        return stats.poisson.logpmf(y, self.rate)

    def cdf(self, y):
        return stats.poisson.cdf(y, self.rate)


@dataclass(frozen=True)
class NBDist(_CountDist):
    size: float
    prob: float

    def __post_init__(self):
        if not self.size > 0:
            raise DomainError("NB size must be > 0")
        if not 0 < self.prob < 1:
            raise DomainError("NB success probability must lie in (0, 1)")

    def logpmf(self, y):
        return stats.nbinom.logpmf(y, self.size, self.prob)

    def cdf(self, y):
        return stats.nbinom.cdf(y, self.size, self.prob)


@dataclass(frozen=True)
class _ZeroInflated(_CountDist):
    pi: float

    def _base(self):
        raise NotImplementedError

    def logpmf(self, y):
        y = np.asarray(y)
        base = self._base()
        lp = base.logpmf(y)
        with np.errstate(divide="ignore"):
            log_zero = np.logaddexp(np.log(self.pi), math.log1p(-self.pi) + float(base.logpmf(0)))
        return np.where(y == 0, log_zero, math.log1p(-self.pi) + lp)

    def cdf(self, y):
        return self.pi + (1.0 - self.pi) * self._base().cdf(y)


@dataclass(frozen=True)
class ZIPDist(_ZeroInflated):
    rate: float = 1.0

    def __post_init__(self):
        if not 0 <= self.pi < 1:
            raise DomainError("zero-inflation probability must lie in [0, 1)")

    def _base(self):
        return PoissonDist(self.rate)


@dataclass(frozen=True)
class ZINBDist(_ZeroInflated):
    size: float = 1.0
    prob: float = 0.5

    def __post_init__(self):
        if not 0 <= self.pi < 1:
            raise DomainError("zero-inflation probability must lie in [0, 1)")

    def _base(self):
        return NBDist(self.size, self.prob)
