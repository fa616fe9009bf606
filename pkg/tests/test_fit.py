import math

import numpy as np
import pytest
from scipy import optimize, special, stats

from dcpareto import (
    CompositeParams,
    CountSample,
    DegenerateDataError,
    DiscreteComposite,
    DomainError,
    Family,
    FitConfig,
    FitFailure,
    Lognormal,
    ModelSpec,
    Weibull,
    aic,
    compare_models,
    fit_baseline,
    fit_composite,
    fit_model,
    loglik_composite,
)
from oracles import loglik_printed


def _random_pairs(n_pairs, theta_low, theta_high, seed):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n_pairs):
        theta = float(rng.uniform(theta_low, theta_high))
        alpha = float(rng.uniform(0.5, 4.0))
        if i % 2:
            head = Lognormal(float(math.log(theta) + rng.uniform(-2, 1)), float(rng.uniform(0.4, 2)))
        else:
            head = Weibull(float(rng.uniform(0.5, 2.5)), float(theta * rng.uniform(0.3, 3)))
        p = CompositeParams(head, alpha, theta)
        y = DiscreteComposite(p).sample(i, int(rng.integers(5, 300)))
        out.append((p, y))
    return out


class TestFamily:
    def test_parameter_counts(self):
        assert [f.k for f in Family] == [4, 4, 1, 2, 2, 3]
        assert ModelSpec(Family.ZINB).k == 3
        assert ModelSpec("wdwp").k == 4

    def test_parse(self):
        assert Family.parse(" WDLNP ") is Family.WDLNP
        with pytest.raises(DomainError, match="wdlnp"):
            Family.parse("gamma")


class TestCompositeLoglik:
    def test_single_zero(self):
        p = CompositeParams(Weibull(1.0, 1.0), 2.0, 0.7)
        phi = p.phi
        expected = math.log((1 + phi * (1 - 0.7**2)) / (1 + phi))
        assert loglik_composite("wdwp", p, [0]) == pytest.approx(expected, abs=1e-14)

    def test_printed_l1(self):
        for p, y in _random_pairs(50, 0.1, 1.0, 1):
            ref = loglik_printed(p.head.kind, p.head.as_dict(), p.alpha, p.theta, y)
            fam = "wdlnp" if p.head.kind == "lognormal" else "wdwp"
            assert loglik_composite(fam, p, y) == pytest.approx(ref, abs=1e-10, rel=1e-12)

    def test_printed_l2(self):
        for p, y in _random_pairs(50, 1.0001, 300.0, 2):
            ref = loglik_printed(p.head.kind, p.head.as_dict(), p.alpha, p.theta, y)
            fam = "wdlnp" if p.head.kind == "lognormal" else "wdwp"
            assert loglik_composite(fam, p, y) == pytest.approx(ref, abs=1e-10, rel=1e-12)

    def test_family_mismatch(self):
        p = CompositeParams(Weibull(1.0, 1.0), 2.0, 0.7)
        with pytest.raises(DomainError):
            loglik_composite("wdlnp", p, [0, 1])
        with pytest.raises(DomainError):
            loglik_composite("poisson", p, [0, 1])


class TestAic:
    def test_values(self):
        assert aic(0.0, 0) == 0.0
        assert aic(-100.0, 4) == 208.0

    def test_result_identity(self):
        r = fit_baseline("nb", [0, 3, 1, 7, 2, 0, 11, 4])
        assert r.aic == pytest.approx(-2 * r.loglik + 2 * 2, abs=1e-12)


class TestBaselines:
    def test_poisson_closed_form(self):
        r = fit_baseline("poisson", [0, 1, 2, 3])
        assert r.params["rate"] == 1.5
        assert r.loglik == pytest.approx(float(np.sum(stats.poisson.logpmf([0, 1, 2, 3], 1.5))), abs=1e-14)

    def test_poisson_debug_path(self):
        rng = np.random.default_rng(0)
        cfg = FitConfig(debug=True)
        for i in range(100):
            y = rng.poisson(rng.uniform(0.2, 30), size=int(rng.integers(5, 200)))
            if not y.any():
                continue
            fast = fit_baseline("poisson", y)
            slow = fit_baseline("poisson", y, cfg)
            assert slow.loglik == pytest.approx(fast.loglik, abs=1e-8)
            assert slow.params["rate"] == pytest.approx(fast.params["rate"], rel=1e-4)

    def test_zip_without_zeros(self):
        y = np.random.default_rng(4).poisson(6.0, 400) + 1
        zip_fit = fit_baseline("zip", y)
        pois = fit_baseline("poisson", y)
        assert zip_fit.loglik == pytest.approx(pois.loglik, abs=1e-6)
        assert zip_fit.params["pi"] < 1e-3

    def test_zip_recovers_inflation(self):
        rng = np.random.default_rng(9)
        y = np.where(rng.random(5000) < 0.3, 0, rng.poisson(4.0, 5000))
        r = fit_baseline("zip", y)
        assert r.params["pi"] == pytest.approx(0.3, abs=0.03)
        assert r.params["rate"] == pytest.approx(4.0, rel=0.05)

    def test_nb_against_scipy_optimizer(self):
        y = np.random.default_rng(2).negative_binomial(1.7, 0.05, 800)

        def nll(v):
            size, prob = math.exp(v[0]), special.expit(v[1])
            return -np.sum(stats.nbinom.logpmf(y, size, prob))

        ref = optimize.minimize(nll, [0.0, 0.0], method="BFGS")
        r = fit_baseline("nb", y)
        assert r.loglik == pytest.approx(-ref.fun, abs=1e-5)
        assert r.loglik >= -ref.fun - 1e-8

    def test_zinb_hand_loglik(self):
        y = np.random.default_rng(3).negative_binomial(2.0, 0.2, 300)
        y[:60] = 0
        r = fit_baseline("zinb", y)
        pi, size, prob = r.params["pi"], r.params["size"], r.params["prob"]
        f = stats.nbinom.pmf(y, size, prob)
        hand = np.sum(np.log(np.where(y == 0, pi + (1 - pi) * f, (1 - pi) * f)))
        assert r.loglik == pytest.approx(hand, abs=1e-9)
        assert r.loglik >= fit_baseline("nb", y).loglik - 1e-8

    def test_all_zero(self):
        for fam in ("poisson", "zip", "nb", "zinb", "wdlnp", "wdwp"):
            with pytest.raises(DegenerateDataError):
                fit_model(fam, [0] * 20)

    def test_nb_needs_variance(self):
        with pytest.raises(DegenerateDataError):
            fit_baseline("nb", [3] * 10)


class TestCompositeFit:
    def test_refit_is_stable(self):
        p = CompositeParams(Weibull(1.2, 50.0), 1.5, 100.0)
        y = DiscreteComposite(p).sample(1, 2000)
        r = fit_composite("wdwp", y)
        assert r.converged
        assert set(r.params) == {"shape", "scale", "alpha", "theta"}
        truth = loglik_composite("wdwp", p, y)
        assert r.loglik >= truth - 1e-6
        assert abs(r.params["alpha"] - 1.5) < 0.5

    def test_deterministic(self):
        y = DiscreteComposite(CompositeParams(Lognormal(3.0, 1.0), 1.5, 100.0)).sample(3, 1000)
        a = fit_composite("wdlnp", y)
        b = fit_composite("wdlnp", y)
        assert a.params == b.params and a.loglik == b.loglik

    def test_extra_restarts_never_worse(self):
        y = DiscreteComposite(CompositeParams(Lognormal(3.0, 1.0), 1.5, 100.0)).sample(4, 800)
        base = fit_composite("wdlnp", y)
        more = fit_composite("wdlnp", y, FitConfig(n_restarts=8, seed=1))
        assert more.loglik >= base.loglik - 1e-6

    def test_too_small(self):
        with pytest.raises(DegenerateDataError):
            fit_composite("wdwp", [1, 2, 3])

    def test_wrong_family(self):
        with pytest.raises(DomainError):
            fit_composite("nb", [1, 2, 3, 4, 5, 6])
        with pytest.raises(DomainError):
            fit_baseline("wdwp", [1, 2, 3, 4, 5, 6])


class TestCompare:
    def test_singleton(self):
        out = compare_models([0, 1, 2, 3], ["poisson"])
        assert len(out) == 1 and out[0].family is Family.POISSON

    def test_heavy_tail_ranking(self):
        y = DiscreteComposite(CompositeParams(Weibull(1.2, 50.0), 1.5, 100.0)).sample(8, 1500)
        out = compare_models(y, ["poisson", "wdwp"])
        assert [r.family for r in out] == [Family.WDWP, Family.POISSON]

    def test_sorted_and_failures_last(self):
        y = [5] * 30
        out = compare_models(y, ["nb", "poisson", "zip"])
        assert isinstance(out[-1], FitFailure) and out[-1].family is Family.NB
        ok = [r for r in out if not isinstance(r, FitFailure)]
        assert [r.aic for r in ok] == sorted(r.aic for r in ok)

    def test_empty(self):
        with pytest.raises(DomainError):
            compare_models([1, 2], [])


class TestConfig:
    def test_parse(self, tmp_path):
        text = "# optimizer\nftol = 1e-8\nn_restarts=7  # more\n\nseed = 3\ndebug = true\n"
        cfg = FitConfig.from_text(text)
        assert cfg.ftol == 1e-8 and cfg.n_restarts == 7 and cfg.seed == 3 and cfg.debug
        path = tmp_path / "fit.cfg"
        path.write_text(text)
        assert FitConfig.from_file(path) == cfg

    @pytest.mark.parametrize("text", ["bogus = 1", "ftol", "max_iter = many"])
    def test_errors(self, text):
        with pytest.raises(DomainError):
            FitConfig.from_text(text)


class TestCountSample:
    def test_counts(self):
        s = CountSample([0, 0, 3, 1])
        assert s.n == 4 and s.zero_count == 2 and s.m == 2
        assert list(s.values) == [0, 1, 3] and list(s.weights) == [2, 1, 1]

    @pytest.mark.parametrize("bad", [[-1, 2], [1.5], []])
    def test_invalid(self, bad):
        with pytest.raises((DomainError, DegenerateDataError)):
            CountSample(bad)


@pytest.fixture(scope="module")
def fitted():
    y = DiscreteComposite(CompositeParams(Lognormal(3.0, 1.0), 1.5, 100.0)).sample(12, 1500)
    return CountSample(y), fit_composite("wdlnp", y)


class TestOptimizerWitnesses:
    def test_loglik_nonpositive(self, fitted):
        _, r = fitted
        assert r.loglik <= 0

    def test_refit_from_optimum(self, fitted):
        from dcpareto.fit import CompositeObjective
        from dcpareto.optimize import multistart_minimize

        s, r = fitted
        cfg = FitConfig()
        obj = CompositeObjective(Family.WDLNP, s)
        x0 = obj.pack(r.distribution().params)
        again = multistart_minimize(obj, [x0], ftol=cfg.ftol, xtol=cfg.xtol, max_iter=cfg.max_iter, step=cfg.init_step)
        assert -again.fun <= r.loglik + cfg.ftol

    def test_adding_an_observation(self, fitted):
        s, r = fitted
        extra = int(s.counts[7])
        aug = fit_composite("wdlnp", np.append(s.counts, extra))
        # L*(y + y_j) <= L*(y) + max ln p(y_j) <= L*(y), and >= L*(y) + ln p_hat(y_j)
        assert aug.loglik <= r.loglik + 1e-6
        assert aug.loglik >= r.loglik + r.distribution().logpmf(extra) - 1e-6
