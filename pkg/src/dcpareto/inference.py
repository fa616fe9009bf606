"""Likelihood-ratio tests for the Pareto tail index.

``H0: alpha <= c`` with ``c = 1`` (infinite mean) or ``c = 2`` (infinite
variance). The statistic is twice the gap between the unconstrained and the
constrained maximized log-likelihoods, referred to chi-square with one
degree of freedom. When the unconstrained estimate already satisfies the
null, the statistic is 0 and the p-value 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .composite import CompositeParams
from .errors import DegenerateHeadError, DomainError
from .fit import (
    CountSample,
    Family,
    FitConfig,
    FitResult,
    _as_sample,
    _check_fittable,
    fit_composite,
    make_distribution,
    optimize_composite,
)
from .specfun import chi2_1_sf

__all__ = ["LrtResult", "lrt_tail_index", "lrt_report"]

SIGNIFICANCE = 0.05


@dataclass
class LrtResult:
    boundary_c: float
    lam: float
    p_value: float
    unconstrained: FitResult
    constrained: FitResult
    reject_at_005: bool
    # half the chi2_1 p-value when lam > 0: the chi2_0/chi2_1 mixture reference
    p_value_mixture: float | None = None

    @property
    def alpha_hat(self) -> float:
        return self.unconstrained.params["alpha"]


def _params(result: FitResult) -> CompositeParams:
    return make_distribution(result.family, result.params).params


def _with_alpha(params: CompositeParams, alpha: float) -> list[CompositeParams]:
    try:
        return [CompositeParams(params.head, alpha, params.theta)]
    except (DomainError, DegenerateHeadError):
        return []


def _assemble(c: float, unconstrained: FitResult, constrained: FitResult, mixture: bool) -> LrtResult:
    if unconstrained.params["alpha"] <= c:
        lam, p = 0.0, 1.0
        constrained = unconstrained
    else:
        lam = max(2.0 * (unconstrained.loglik - constrained.loglik), 0.0)
        p = float(chi2_1_sf(lam))
    mix = None
    if mixture:
        mix = 0.5 * p if lam > 0 else 1.0
    return LrtResult(float(c), lam, p, unconstrained, constrained, p < SIGNIFICANCE, mix)


def _constrained_fit(
    family: Family,
    sample: CountSample,
    c: float,
    config: FitConfig,
    unconstrained: FitResult,
    extra: list[CompositeParams],
) -> FitResult:
    """Best of an alpha-pinned fit and a bounded-alpha fit over ``alpha <= c``."""
    u = _params(unconstrained)
    pinned = optimize_composite(
        family, sample, config, alpha_mode="pinned", bound=c, starts=_with_alpha(u, c) + extra
    )
    bounded_starts = _with_alpha(_params(pinned), 0.99 * c) + _with_alpha(u, 0.9 * c)
    bounded_starts += [s for p in extra for s in _with_alpha(p, min(p.alpha, 0.99 * c))]
    bounded = optimize_composite(family, sample, config, alpha_mode="bounded", bound=c, starts=bounded_starts)
    best = bounded if bounded.loglik > pinned.loglik else pinned
    if best.loglik < pinned.loglik - config.ftol:
        best = replace(best, converged=False)
    return best


def lrt_tail_index(
    family: Family | str,
    sample,
    boundary_c: float,
    config: FitConfig | None = None,
    *,
    unconstrained: FitResult | None = None,
    mixture: bool = False,
    _extra_starts: list[CompositeParams] | None = None,
) -> LrtResult:
    """Test ``H0: alpha <= boundary_c`` for a WDLNP or WDWP fit.

    Pass ``unconstrained`` to reuse an existing full-model fit.
    """
    family = Family.parse(family)
    if not family.is_composite:
        raise DomainError("the tail-index test needs a composite family")
    if not boundary_c > 0:
        raise DomainError("boundary must be positive")
    config = config or FitConfig()
    sample = _as_sample(sample)
    _check_fittable(sample)
    u = unconstrained if unconstrained is not None else fit_composite(family, sample, config)
    if u.params["alpha"] <= boundary_c:
        return _assemble(boundary_c, u, u, mixture)

    extra = list(_extra_starts or [])
    cons = _constrained_fit(family, sample, boundary_c, config, u, extra)
    if cons.loglik > u.loglik:
        # the constrained optimum beats the full fit, so the full fit stalled: restart it there
        u = optimize_composite(family, sample, config, starts=[_params(cons), _params(u)])
        if u.params["alpha"] <= boundary_c:
            return _assemble(boundary_c, u, u, mixture)
    return _assemble(boundary_c, u, cons, mixture)


def lrt_report(
    family: Family | str,
    sample,
    config: FitConfig | None = None,
    *,
    mixture: bool = False,
    unconstrained: FitResult | None = None,
) -> tuple[LrtResult, LrtResult]:
    """Both tail-index tests (c = 1 and c = 2) on one shared unconstrained fit."""
    family = Family.parse(family)
    config = config or FitConfig()
    sample = _as_sample(sample)
    u = unconstrained if unconstrained is not None else fit_composite(family, sample, config)
    r1 = lrt_tail_index(family, sample, 1.0, config, unconstrained=u, mixture=mixture)
    # alpha <= 1 is inside alpha <= 2, so the c=1 optimum is a valid c=2 start
    extra = [] if r1.constrained is r1.unconstrained else [_params(r1.constrained)]
    r2 = lrt_tail_index(
        family, sample, 2.0, config, unconstrained=r1.unconstrained, mixture=mixture, _extra_starts=extra
    )
    if r2.unconstrained is not r1.unconstrained:
        r1 = _assemble(1.0, r2.unconstrained, r1.constrained, mixture)
    if r2.lam > 0 and r1.lam > 0 and r2.constrained.loglik < r1.constrained.loglik:
        r2 = _assemble(2.0, r2.unconstrained, r1.constrained, mixture)
    return r1, r2
