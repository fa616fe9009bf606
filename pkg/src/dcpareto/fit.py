"""Likelihoods, maximum-likelihood fits and AIC comparison.

Composite families (WDLNP, WDWP) are fitted by multi-start Nelder-Mead on
unconstrained coordinates ``(mu, ln sigma, ln alpha, ln theta)`` and
``(ln a, ln sigma, ln alpha, ln theta)``. Baselines (Poisson, ZIP, NB, ZINB)
use the closed form (Poisson) or the same optimizer with log/logit
transforms.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expit, logit

from .baselines import NBDist, PoissonDist, ZINBDist, ZIPDist
from .composite import CompositeParams, Lognormal, Weibull
from .discrete import DiscreteComposite
from .errors import DcParetoError, DegenerateDataError, DegenerateHeadError, DomainError
from .optimize import multistart_minimize

__all__ = [
    "Family",
    "ModelSpec",
    "FitConfig",
    "CountSample",
    "FitResult",
    "FitFailure",
    "aic",
    "loglik_composite",
    "fit_composite",
    "fit_baseline",
    "fit_model",
    "compare_models",
    "LOGPMF_FLOOR",
]

LOGPMF_FLOOR = -745.0
# share of observations allowed at the floor before a point is infeasible
_FLOOR_SHARE = 0.01
_THETA_INIT_QUANTILES = (0.5, 0.7, 0.8, 0.9, 0.95)


class Family(enum.Enum):
    WDLNP = "wdlnp"
    WDWP = "wdwp"
    POISSON = "poisson"
    ZIP = "zip"
    NB = "nb"
    ZINB = "zinb"

    @property
    def k(self) -> int:
        return _FREE_PARAMS[self]

    @property
    def is_composite(self) -> bool:
        return self in (Family.WDLNP, Family.WDWP)

    @property
    def label(self) -> str:
        return self.name if self is not Family.POISSON else "Poisson"

    @classmethod
    def parse(cls, name: str | "Family") -> "Family":
        if isinstance(name, Family):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(f.value for f in cls)
            raise DomainError(f"unknown model {name!r}; valid models: {valid}") from None


_FREE_PARAMS = {
    Family.WDLNP: 4,
    Family.WDWP: 4,
    Family.POISSON: 1,
    Family.ZIP: 2,
    Family.NB: 2,
    Family.ZINB: 3,
}
_FAMILY_ORDER = {f: i for i, f in enumerate(Family)}


@dataclass(frozen=True)
class ModelSpec:
    family: Family
    k: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "k", self.family.k)


@dataclass(frozen=True)
class FitConfig:
    """Optimizer settings; loadable from ``key = value`` text.

    ``n_restarts`` beyond the five quantile-based starts adds jittered
    starts drawn with ``seed``. ``debug`` makes the Poisson fit use the
    optimizer instead of the closed form.
    """

    ftol: float = 1e-10
    xtol: float = 1e-8
    max_iter: int = 5000
    n_restarts: int = 5
    seed: int = 0
    init_step: float = 0.3
    polish_rounds: int = 10
    debug: bool = False

    @classmethod
    def from_text(cls, text: str) -> "FitConfig":
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line {lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in types:
                raise DomainError(f"config line {lineno}: unknown key {key!r}")
            kind = types[key]
            try:
                if kind == "bool":
                    values[key] = value.lower() in ("1", "true", "yes", "on")
                elif kind == "int":
                    values[key] = int(value)
                else:
                    values[key] = float(value)
            except ValueError:
                raise DomainError(f"config line {lineno}: bad value for {key}: {value!r}") from None
        return cls(**values)

    @classmethod
    def from_file(cls, path: str | Path) -> "FitConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


class CountSample:
    """Nonnegative integer counts, stored with their distinct values."""

    def __init__(self, counts: Iterable[int]):
        arr = np.asarray(list(counts) if not isinstance(counts, np.ndarray) else counts)
        if arr.size == 0:
            raise DegenerateDataError("sample is empty")
        if arr.dtype.kind not in "iu":
            if arr.dtype.kind != "f" or np.any(arr != np.floor(arr)):
                raise DomainError("counts must be integers")
        if np.any(arr < 0):
            raise DomainError("counts must be nonnegative")
        self.counts = arr.astype(np.int64)
        self.values, self.weights = np.unique(self.counts, return_counts=True)

    @property
    def n(self) -> int:
        return int(self.counts.size)

    @property
    def zero_count(self) -> int:
        return int(np.sum(self.counts == 0))

    m = zero_count

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"CountSample(n={self.n}, zeros={self.zero_count}, max={int(self.counts.max())})"


@dataclass
class FitResult:
    spec: ModelSpec
    params: dict[str, float]
    loglik: float
    aic: float
    converged: bool
    n_restarts_used: int

    @property
    def family(self) -> Family:
        return self.spec.family

    def distribution(self):
        return make_distribution(self.spec.family, self.params)

    def as_dict(self) -> dict:
        return {
            "model": self.family.value,
            "k": self.spec.k,
            "params": dict(self.params),
            "loglik": self.loglik,
            "aic": self.aic,
            "converged": self.converged,
            "n_restarts_used": self.n_restarts_used,
        }


@dataclass
class FitFailure:
    """Marker for a family whose fit raised during :func:`compare_models`."""

    spec: ModelSpec
    error: str

    @property
    def family(self) -> Family:
        return self.spec.family


def aic(loglik: float, k: int) -> float:
    return -2.0 * loglik + 2.0 * k


def make_distribution(family: Family | str, params: dict[str, float]):
    family = Family.parse(family)
    if family is Family.WDLNP:
        head = Lognormal(params["mu"], params["sigma"])
    elif family is Family.WDWP:
        head = Weibull(params["shape"], params["scale"])
    elif family is Family.POISSON:
        return PoissonDist(params["rate"])
    elif family is Family.ZIP:
        return ZIPDist(params["pi"], params["rate"])
    elif family is Family.NB:
        return NBDist(params["size"], params["prob"])
    else:
        return ZINBDist(params["pi"], params["size"], params["prob"])
    return DiscreteComposite(CompositeParams(head, params["alpha"], params["theta"]))


def _as_sample(sample) -> CountSample:
    return sample if isinstance(sample, CountSample) else CountSample(sample)


# -- composite likelihood ---------------------------------------------------


def loglik_composite(family: Family | str, params: CompositeParams, sample) -> float:
    """Exact log-likelihood ``sum_i ln P(Y = y_i)``; ``-inf`` if any mass is 0."""
    family = Family.parse(family)
    expected = {Family.WDLNP: "lognormal", Family.WDWP: "weibull"}.get(family)
    if expected is None:
        raise DomainError(f"{family.value} is not a composite family")
    if params.head.kind != expected:
        raise DomainError(f"{family.value} needs a {expected} head, got {params.head.kind}")
    s = _as_sample(sample)
    lp = DiscreteComposite(params).logpmf(s.values)
    if np.any(~np.isfinite(lp)):
        return -math.inf
    return float(np.dot(s.weights, lp))


def _floored_loglik(logp: np.ndarray, sample: CountSample) -> float:
    """Sum of log-masses with underflowed (``-inf``) terms floored.

    Finite log-masses are kept as computed, however small. The point is
    infeasible if more than 1% of observations need the floor.
    """
    bad = ~np.isfinite(logp)
    if np.any(bad):
        if np.dot(sample.weights, bad) > _FLOOR_SHARE * sample.n:
            return -math.inf
        logp = np.where(bad, LOGPMF_FLOOR, logp)
    return float(np.dot(sample.weights, logp))


class CompositeObjective:
    """Negative log-likelihood on unconstrained coordinates.

    ``alpha_mode`` selects how the tail index enters: ``"free"``
    (``ln alpha`` is a coordinate), ``"pinned"`` (fixed at ``bound``, three
    coordinates) or ``"bounded"`` (``alpha = bound * expit(eta)``).
    """

    def __init__(self, family: Family, sample: CountSample, alpha_mode: str = "free", bound: float | None = None):
        if alpha_mode not in ("free", "pinned", "bounded"):
            raise ValueError(alpha_mode)
        if alpha_mode != "free" and bound is None:
            raise ValueError("bound required for constrained alpha")
        self.family = family
        self.sample = sample
        self.alpha_mode = alpha_mode
        self.bound = bound

    def unpack(self, x) -> CompositeParams:
        x = np.asarray(x, dtype=float)
        if self.family is Family.WDLNP:
            head = Lognormal(float(x[0]), math.exp(x[1]))
        else:
            head = Weibull(math.exp(x[0]), math.exp(x[1]))
        if self.alpha_mode == "free":
            alpha = math.exp(x[2])
        elif self.alpha_mode == "pinned":
            alpha = self.bound
        else:
            alpha = self.bound * float(expit(x[2]))
        return CompositeParams(head, alpha, math.exp(x[-1]))

    def pack(self, params: CompositeParams) -> np.ndarray:
        h = params.head
        if self.family is Family.WDLNP:
            head = [h.mu, math.log(h.sigma)]
        else:
            head = [math.log(h.shape), math.log(h.scale)]
        if self.alpha_mode == "free":
            tail = [math.log(params.alpha)]
        elif self.alpha_mode == "pinned":
            tail = []
        else:
            ratio = min(max(params.alpha / self.bound, 1e-9), 1.0 - 1e-9)
            tail = [float(logit(ratio))]
        return np.array(head + tail + [math.log(params.theta)])

    def __call__(self, x) -> float:
        if not np.all(np.isfinite(x)):
            return math.inf
        try:
            with np.errstate(over="ignore", under="ignore"):
                p = self.unpack(x)
        except (DomainError, DegenerateHeadError, OverflowError):
            return math.inf
        with np.errstate(all="ignore"):
            logp = DiscreteComposite(p).logpmf(self.sample.values)
        ll = _floored_loglik(logp, self.sample)
        return -ll if math.isfinite(ll) else math.inf


def _hill_alpha(counts: np.ndarray, threshold: float) -> float:
    above = counts[counts > threshold].astype(float)
    if above.size < 2:
        return 1.5
    total = float(np.sum(np.log(above / threshold)))
    if not total > 0:
        return 1.5
    return min(max(above.size / total, 0.05), 20.0)


def composite_initial_params(family: Family, sample: CountSample) -> list[CompositeParams]:
    """Quantile-based starting points: theta, Hill alpha and a moment-matched head."""
    counts = sample.counts
    starts: list[CompositeParams] = []
    seen = set()
    for q in _THETA_INIT_QUANTILES:
        theta = max(float(np.quantile(counts, q)), 0.5)
        if theta in seen:
            continue
        seen.add(theta)
        alpha = _hill_alpha(counts, theta)
        below = counts[counts <= theta].astype(float)
        if below.size == 0:
            below = counts.astype(float)
        if family is Family.WDLNP:
            logs = np.log(below + 1.0)
            sigma = float(np.std(logs))
            head = Lognormal(float(np.mean(logs)), sigma if sigma > 1e-3 else 1.0)
        else:
            head = Weibull(1.0, max(float(np.mean(below)), 0.5))
        try:
            starts.append(CompositeParams(head, alpha, theta))
        except (DomainError, DegenerateHeadError):
            continue
    return starts


def _composite_result(family, objective, opt, n_starts) -> FitResult:
    spec = ModelSpec(family)
    params = objective.unpack(opt.x)
    ll = loglik_composite(family, params, objective.sample) if math.isfinite(opt.fun) else -math.inf
    if not math.isfinite(ll):
        # floored points are only ever accepted by the optimizer; report the floored value
        ll = -opt.fun
    return FitResult(spec, params.as_dict(), ll, aic(ll, spec.k), opt.converged, n_starts)


def _check_fittable(sample: CountSample):
    if sample.n < 5:
        raise DegenerateDataError("composite fits need at least 5 observations")
    if not np.any(sample.counts > 0):
        raise DegenerateDataError("sample has no positive counts; there is no tail to fit")


def optimize_composite(
    family: Family,
    sample: CountSample,
    config: FitConfig,
    *,
    alpha_mode: str = "free",
    bound: float | None = None,
    starts: Sequence[CompositeParams] = (),
) -> FitResult:
    """Run the multi-start fit with optional alpha constraint and extra starts."""
    objective = CompositeObjective(family, sample, alpha_mode, bound)
    base = list(starts)
    if alpha_mode == "free":
        base += composite_initial_params(family, sample)[: max(config.n_restarts, 1)]
    else:
        for p in composite_initial_params(family, sample):
            alpha = bound if alpha_mode == "pinned" else 0.9 * bound
            try:
                base.append(CompositeParams(p.head, alpha, p.theta))
            except (DomainError, DegenerateHeadError):
                pass
    x0s = [objective.pack(p) for p in base]
    n_extra = config.n_restarts - len(_THETA_INIT_QUANTILES)
    if n_extra > 0 and x0s:
        rng = np.random.default_rng(config.seed)
        for i in range(n_extra):
            x0s.append(x0s[i % len(x0s)] + rng.normal(0.0, 0.5, size=x0s[0].size))
    if not x0s:
        raise DegenerateDataError("no feasible starting point for the composite fit")
    opt = multistart_minimize(
        objective,
        x0s,
        ftol=config.ftol,
        xtol=config.xtol,
        max_iter=config.max_iter,
        step=config.init_step,
        polish_rounds=config.polish_rounds,
    )
    if not math.isfinite(opt.fun):
        raise DegenerateDataError("no feasible parameter point found")
    return _composite_result(family, objective, opt, opt.n_starts)


def fit_composite(family: Family | str, sample, config: FitConfig | None = None) -> FitResult:
    """Maximum-likelihood fit of WDLNP or WDWP."""
    family = Family.parse(family)
    if not family.is_composite:
        raise DomainError(f"{family.value} is not a composite family")
    config = config or FitConfig()
    sample = _as_sample(sample)
    _check_fittable(sample)
    return optimize_composite(family, sample, config)


# -- baselines --------------------------------------------------------------


def _poisson_loglik(sample: CountSample, rate: float) -> float:
    return float(np.dot(sample.weights, PoissonDist(rate).logpmf(sample.values)))


def _unpack_baseline(family: Family, x) -> dict[str, float]:
    if family is Family.POISSON:
        return {"rate": math.exp(x[0])}
    if family is Family.ZIP:
        return {"pi": float(expit(x[0])), "rate": math.exp(x[1])}
    if family is Family.NB:
        return {"size": math.exp(x[0]), "prob": float(expit(x[1]))}
    return {"pi": float(expit(x[0])), "size": math.exp(x[1]), "prob": float(expit(x[2]))}


def _baseline_objective(family: Family, sample: CountSample):
    def objective(x):
        if not np.all(np.isfinite(x)):
            return math.inf
        try:
            with np.errstate(all="ignore"):
                dist = make_distribution(family, _unpack_baseline(family, x))
                logp = dist.logpmf(sample.values)
        except (DomainError, OverflowError):
            return math.inf
        ll = _floored_loglik(np.asarray(logp, dtype=float), sample)
        return -ll if math.isfinite(ll) else math.inf

    return objective


def _nb_moments(counts: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(counts))
    var = float(np.var(counts, ddof=1)) if counts.size > 1 else 0.0
    if var > mean > 0:
        prob = mean / var
        size = mean * prob / (1.0 - prob)
    else:
        prob, size = 0.9, max(mean, 0.1) * 9.0
    return size, min(max(prob, 1e-6), 1 - 1e-6)


def _baseline_starts(family: Family, sample: CountSample) -> list[np.ndarray]:
    counts = sample.counts
    mean = float(np.mean(counts))
    pos = counts[counts > 0]
    zero_frac = sample.zero_count / sample.n
    if family is Family.POISSON:
        return [np.array([math.log(mean)])]
    if family is Family.ZIP:
        rate = float(np.mean(pos))
        pi = min(max(zero_frac - math.exp(-rate), 0.01), 0.99)
        return [np.array([logit(pi), math.log(rate)])]
    size, prob = _nb_moments(counts)
    if family is Family.NB:
        return [np.array([math.log(size), logit(prob)])]
    pi = min(max(zero_frac * 0.5, 0.01), 0.99)
    return [np.array([logit(pi), math.log(size), logit(prob)])]


def fit_baseline(family: Family | str, sample, config: FitConfig | None = None) -> FitResult:
    """Fit Poisson (closed form), ZIP, NB or ZINB by maximum likelihood.

    For the zero-inflated families the boundary ``pi = 0`` (the plain model)
    is also evaluated and kept when it is at least as good.
    """
    family = Family.parse(family)
    if family.is_composite:
        raise DomainError(f"{family.value} is not a baseline family")
    config = config or FitConfig()
    sample = _as_sample(sample)
    if not np.any(sample.counts > 0):
        raise DegenerateDataError("sample has no positive counts")
    spec = ModelSpec(family)
    if family in (Family.NB, Family.ZINB) and not np.var(sample.counts) > 0:
        raise DegenerateDataError("NB fits need positive sample variance")

    if family is Family.POISSON and not config.debug:
        rate = float(np.mean(sample.counts))
        ll = _poisson_loglik(sample, rate)
        return FitResult(spec, {"rate": rate}, ll, aic(ll, spec.k), True, 0)

    objective = _baseline_objective(family, sample)
    opt = multistart_minimize(
        objective,
        _baseline_starts(family, sample),
        ftol=config.ftol,
        xtol=config.xtol,
        max_iter=config.max_iter,
        step=config.init_step,
        polish_rounds=config.polish_rounds,
    )
    params = _unpack_baseline(family, opt.x)
    ll = -opt.fun
    converged = opt.converged

    if family in (Family.ZIP, Family.ZINB):
        plain = fit_baseline(Family.POISSON if family is Family.ZIP else Family.NB, sample, config)
        if plain.loglik >= ll:
            params = {"pi": 0.0, **plain.params}
            ll = plain.loglik
            converged = plain.converged
    return FitResult(spec, params, ll, aic(ll, spec.k), converged, opt.n_starts)


def fit_model(family: Family | str, sample, config: FitConfig | None = None) -> FitResult:
    family = Family.parse(family)
    if family.is_composite:
        return fit_composite(family, sample, config)
    return fit_baseline(family, sample, config)


def compare_models(sample, families: Iterable[Family | str | ModelSpec], config: FitConfig | None = None):
    """Fit every family and rank by AIC (ties: fewer parameters, then family order).

    Families whose fit raises appear as :class:`FitFailure` entries after
    all successful fits.
    """
    sample = _as_sample(sample)
    specs = [f if isinstance(f, ModelSpec) else ModelSpec(Family.parse(f)) for f in families]
    if not specs:
        raise DomainError("no families to compare")
    results, failures = [], []
    for spec in specs:
        try:
            results.append(fit_model(spec.family, sample, config))
        except DcParetoError as exc:
            failures.append(FitFailure(spec, str(exc)))
    results.sort(key=lambda r: (r.aic, r.spec.k, _FAMILY_ORDER[r.family]))
    failures.sort(key=lambda f: _FAMILY_ORDER[f.family])
    return results + failures
