"""Survival discretization of a composite distribution onto the integers.

``P(Y = y) = S_X(y) - S_X(y + 1)`` for ``y = 0, 1, 2, ...``. The discrete
survival function coincides with the continuous one at the integers, so the
Pareto tail carries over unchanged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .composite import CompositeParams, composite_sf
from .errors import DomainError
from .specfun import hurwitz_zeta, riemann_zeta

__all__ = ["DiscreteComposite", "MomentMethod", "MomentReport"]

# quantiles are returned as int64; values beyond this are clipped
_MAX_COUNT = 2**53
_CHUNK = 1_000_000


class MomentMethod(enum.Enum):
    CLOSED_FORM_ZETA = "ClosedFormZeta"
    TRUNCATED_SUM = "TruncatedSum"
    DIVERGENT = "Divergent"


@dataclass(frozen=True)
class MomentReport:
    order_n: int
    exists: bool
    value: float | None
    method: MomentMethod


def _check_counts(y) -> np.ndarray:
    ya = np.asarray(y)
    if ya.dtype.kind in "iu":
        if np.any(ya < 0):
            raise DomainError("counts must be nonnegative")
        return ya.astype(np.float64)
    ya = ya.astype(np.float64)
    if np.any(~np.isfinite(ya)) or np.any(ya < 0) or np.any(ya != np.floor(ya)):
        raise DomainError("counts must be nonnegative integers")
    return ya


class DiscreteComposite:
    """Integer-valued composite distribution obtained by survival discretization.

    Parameters
    ----------
    params : CompositeParams
        The underlying continuous composite model.
    """

    def __init__(self, params: CompositeParams):
        self.params = params

    def __repr__(self):
        return f"DiscreteComposite({self.params!r})"

    @property
    def _ceil_theta(self) -> int:
        return max(int(math.ceil(self.params.theta)), 1)

    def sf(self, y):
        """``P(Y >= y)``; identical to the continuous survival at ``y``."""
        _check_counts(y)
        return composite_sf(self.params, y)

    def cdf(self, y):
        """``P(Y <= y) = 1 - S_X(y + 1)``."""
        ya = _check_counts(y)
        out = 1.0 - composite_sf(self.params, ya + 1.0)
        return float(out) if np.ndim(y) == 0 else out

    def _pmf_parts(self, ya: np.ndarray):
        """Masses of the head-only, straddling and tail-only bins.

        Each branch is ``S(y) - S(y+1)`` rewritten so that no two nearly
        equal survival values are subtracted.
        """
        p = self.params
        theta = p.theta
        head_mask = ya + 1.0 <= theta
        tail_mask = ya >= theta
        mid_mask = ~(head_mask | tail_mask)

        hi = np.minimum(ya + 1.0, theta)
        head_mass = p.head.interval_mass(np.minimum(ya, theta), hi) / p.head_cdf_theta

        with np.errstate(divide="ignore", invalid="ignore"):
            y_safe = np.maximum(ya, theta)
            # (theta/y)^alpha - (theta/(y+1))^alpha
            tail_mass = (theta / y_safe) ** p.alpha * -np.expm1(-p.alpha * np.log1p(1.0 / y_safe))
            # 1 - (theta/(y+1))^alpha on the straddling bin
            over = -np.expm1(p.alpha * np.log(theta / np.maximum(ya + 1.0, theta)))
        return head_mask, mid_mask, tail_mask, head_mass, tail_mass, over

    def pmf(self, y):
        ya = _check_counts(y)
        p = self.params
        head_mask, mid_mask, _, head_mass, tail_mass, over = self._pmf_parts(ya)
        out = np.where(
            head_mask,
            p.head_weight * head_mass,
            np.where(
                mid_mask,
                p.head_weight * head_mass + p.tail_weight * over,
                p.tail_weight * tail_mass,
            ),
        )
        return float(out) if np.ndim(y) == 0 else out

    def logpmf(self, y):
        """Log of :meth:`pmf`; the tail branch is assembled in log space."""
        ya = _check_counts(y)
        p = self.params
        head_mask, mid_mask, _, head_mass, _, over = self._pmf_parts(ya)
        with np.errstate(divide="ignore", invalid="ignore"):
            y_safe = np.maximum(ya, p.theta)
            log_tail = (
                math.log(p.tail_weight)
                + p.alpha * np.log(p.theta / y_safe)
                + np.log(-np.expm1(-p.alpha * np.log1p(1.0 / y_safe)))
            )
            log_head = math.log(p.head_weight) + np.log(head_mass)
            log_mid = np.log(p.head_weight * head_mass + p.tail_weight * over)
        out = np.where(head_mask, log_head, np.where(mid_mask, log_mid, log_tail))
        return float(out) if np.ndim(y) == 0 else out

    def prob_zero(self) -> float:
        return self.pmf(0)

    # -- quantiles and sampling -------------------------------------------

    def quantile(self, q):
        """Smallest integer ``y`` with ``cdf(y) >= q``, for ``0 <= q < 1``."""
        qa = np.asarray(q, dtype=float)
        if np.any(~((qa >= 0) & (qa < 1))):
            raise DomainError("quantile level must lie in [0, 1)")
        flat = qa.ravel()
        out = np.zeros(flat.shape, dtype=np.int64)
        p = self.params
        k = self._ceil_theta
        # for y >= k - 1 the discrete CDF is 1 - w_tail (theta/(y+1))^alpha
        in_tail = flat > 1.0 - float(composite_sf(p, float(k)))

        if np.any(in_tail):
            qt = flat[in_tail]
            with np.errstate(divide="ignore", over="ignore"):
                x = p.theta * (p.tail_weight / (1.0 - qt)) ** (1.0 / p.alpha)
            x = np.minimum(x, float(_MAX_COUNT))
            y = np.maximum(np.ceil(x) - 1.0, k - 1.0)
            # rounding in the inversion can leave y one step off either way
            for _ in range(3):
                low = (self.cdf(y) < qt) & (y < _MAX_COUNT)
                y = np.where(low, y + 1.0, y)
                high = (y > k - 1) & (self.cdf(np.maximum(y - 1.0, 0.0)) >= qt)
                y = np.where(high, y - 1.0, y)
            out[in_tail] = y.astype(np.int64)

        if np.any(~in_tail):
            qh = flat[~in_tail]
            lo = np.zeros(qh.shape, dtype=np.int64)
            hi = np.full(qh.shape, k - 1, dtype=np.int64)
            while np.any(lo < hi):
                mid = (lo + hi) // 2
                ok = self.cdf(mid) >= qh
                hi = np.where(ok, mid, hi)
                lo = np.where(ok, lo, mid + 1)
            out[~in_tail] = lo

        out = out.reshape(qa.shape)
        return int(out) if np.ndim(q) == 0 else out

    def sample(self, rng_seed: int, n: int) -> np.ndarray:
        """Draw ``n`` values by inversion of seeded uniforms."""
        if int(n) < 1:
            raise DomainError("sample size must be >= 1")
        rng = np.random.default_rng(rng_seed)
        return self.quantile(rng.random(int(n)))

    # -- moments -----------------------------------------------------------

    def partial_moment(self, order_n: int, upper: int) -> float:
        """``sum_{y=0}^{upper} y^n P(Y = y)``."""
        total = 0.0
        for start in range(0, int(upper) + 1, _CHUNK):
            ys = np.arange(start, min(start + _CHUNK, int(upper) + 1), dtype=np.float64)
            total += float(np.sum(ys**order_n * self.pmf(ys)))
        return total

    def moment(self, order_n: int) -> MomentReport:
        """``E[Y^n]`` with an existence check on the tail index.

        The n-th moment exists iff ``alpha > n``. For the mean with
        ``theta <= 1`` the value is ``phi theta^alpha zeta(alpha) / (1+phi)``.
        Otherwise the bins below ``ceil(theta)`` are summed directly and the
        Pareto remainder is summed by parts into Hurwitz zeta values.
        """
        if int(order_n) != order_n or order_n < 1:
            raise DomainError("moment order must be a positive integer")
        n = int(order_n)
        p = self.params
        if p.alpha <= n:
            return MomentReport(n, False, None, MomentMethod.DIVERGENT)
        scale = p.tail_weight * p.theta**p.alpha
        if n == 1 and p.theta <= 1.0:
            return MomentReport(n, True, scale * riemann_zeta(p.alpha), MomentMethod.CLOSED_FORM_ZETA)

        k = self._ceil_theta
        head = self.partial_moment(n, k - 1)
        # sum_{y>=k} y^n (S(y) - S(y+1)) = k^n S(k) + sum_{y>k} (y^n - (y-1)^n) S(y)
        tail = float(k) ** n * float(composite_sf(p, float(k)))
        for j in range(n):
            coef = math.comb(n, j) * (-1) ** (n - 1 - j)
            tail += scale * coef * hurwitz_zeta(p.alpha - j, k + 1.0)
        return MomentReport(n, True, head + tail, MomentMethod.TRUNCATED_SUM)
