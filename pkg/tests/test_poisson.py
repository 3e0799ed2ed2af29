"""Poisson predictors, dominance regions and the brute-force risk oracle."""

import math

import numpy as np
import pytest

from stochpred.errors import InvalidParameterError, TruncationError
from stochpred.poisson import (
    bayes_predict,
    dominance_interval_all_s,
    dominance_interval_at_s,
    exact_risk_poisson,
    map_predict,
    up_predict,
)
from stochpred.priors import GammaPrior


def test_up_examples():
    assert up_predict(0, 10.0, 1.0).value == 0.0
    p = up_predict(20, 10.0, 1.0)
    assert p.value == 22.0 and p.theta_estimate == 2.0
    assert up_predict(15, 15.0, 2.0).value == 17.0


def test_up_ratio_form_equivalent():
    for n_s, s, h in [(20, 10.0, 1.0), (7, 3.5, 0.25), (0, 1.0, 5.0)]:
        assert up_predict(n_s, s, h).value == pytest.approx((s + h) / s * n_s, rel=1e-14)


def test_up_rejects_bad_inputs():
    with pytest.raises(InvalidParameterError):
        up_predict(3, 0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        up_predict(3, 10.0, -1.0)
    with pytest.raises(InvalidParameterError):
        up_predict(-1, 10.0, 1.0)


def test_bayes_examples():
    p = bayes_predict(20, 10.0, 1.0, GammaPrior(1, 1))
    assert p.theta_estimate == pytest.approx(21 / 11, rel=1e-14)
    assert p.value == pytest.approx(20 + 21 / 11, rel=1e-14)
    assert bayes_predict(0, 10.0, 1.0, GammaPrior(1, 1)).value == pytest.approx(1 / 11, rel=1e-14)


def test_bayes_prior_dominates_as_b_grows():
    theta0, b = 0.7, 1e12
    p = bayes_predict(9, 10.0, 2.0, GammaPrior(theta0 * b, b))
    assert p.value == pytest.approx(9 + theta0 * 2.0, abs=1e-9)


def test_map_examples():
    p = map_predict(20, 10.0, 1.0, GammaPrior(1, 1))
    assert p.theta_estimate == pytest.approx(20 / 11, rel=1e-14)
    assert p.value == pytest.approx(20 + 20 / 11, rel=1e-14)
    assert map_predict(0, 10.0, 1.0, GammaPrior(1, 1)).value == 0.0
    with pytest.raises(InvalidParameterError):
        map_predict(5, 10.0, 1.0, GammaPrior(0.5, 1))


def test_shift_identity_bit_exact_for_integer_shapes():
    ns = np.arange(0, 200, dtype=np.float64)
    for a in (1.0, 2.0, 4.0):
        via_map = map_predict(ns, 10.0, 1.0, GammaPrior(a + 1, 1.0))
        via_bayes = bayes_predict(ns, 10.0, 1.0, GammaPrior(a, 1.0))
        assert np.array_equal(via_map.value, via_bayes.value)
        assert np.array_equal(via_map.theta_estimate, via_bayes.theta_estimate)


def test_shift_identity_general_shapes():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = rng.uniform(1.01, 6.0)
        b = rng.uniform(0.1, 5.0)
        s = rng.uniform(0.5, 80.0)
        h = rng.uniform(0.1, 5.0)
        n_s = int(rng.integers(0, 100))
        lhs = map_predict(n_s, s, h, GammaPrior(a, b)).value
        rhs = bayes_predict(n_s, s, h, GammaPrior(a - 1, b)).value
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_mixture_identity():
    # bayes = alpha * up + (1 - alpha) * (n_s + theta0 h), alpha = s/(b+s)
    rng = np.random.default_rng(1)
    for _ in range(300):
        a = rng.uniform(0.05, 8.0)
        b = rng.uniform(0.05, 8.0)
        s = rng.uniform(0.2, 120.0)
        h = rng.uniform(0.05, 6.0)
        n_s = int(rng.integers(0, 400))
        alpha = s / (b + s)
        mix = alpha * up_predict(n_s, s, h).value + (1 - alpha) * (n_s + (a / b) * h)
        assert bayes_predict(n_s, s, h, GammaPrior(a, b)).value == pytest.approx(mix, rel=1e-12)


def test_prediction_invariant_value_structure():
    p = bayes_predict(13, 7.0, 0.5, GammaPrior(2, 3))
    assert p.value == 13 + p.theta_estimate * 0.5


# ---------------------------------------------------------------------------
# dominance regions
# ---------------------------------------------------------------------------

def _interval_oracle(a, b, s):
    """Roots of theta^2 - (2 theta0 + 1/s + 2/b) theta + theta0^2."""
    theta0 = a / b
    roots = np.roots([1.0, -(2 * theta0 + 1 / s + 2 / b), theta0 ** 2])
    return float(roots.min()), float(roots.max())


def test_dominance_at_s_against_quadratic_oracle():
    for a, b, s in [(1, 1, 20), (1, 1, 15), (4, 1, 30), (2.5, 0.7, 8.0)]:
        lo, hi = dominance_interval_at_s(GammaPrior(a, b), s)
        olo, ohi = _interval_oracle(a, b, s)
        assert lo == pytest.approx(olo, rel=1e-10)
        assert hi == pytest.approx(ohi, rel=1e-10)


def test_dominance_at_s_center_value():
    lo, hi = dominance_interval_at_s(GammaPrior(1, 1), 20.0)
    assert (lo + hi) / 2 == pytest.approx(2.025, abs=1e-12)


def test_dominance_large_s_limit_equals_all_s():
    prior = GammaPrior(1.3, 0.8)
    lo, hi = dominance_interval_at_s(prior, 1e14)
    alo, ahi = dominance_interval_all_s(prior)
    assert lo == pytest.approx(alo, abs=1e-16 + 1e-10)
    assert hi == pytest.approx(ahi, abs=1e-10)


def test_dominance_lower_endpoint_vanishes_with_prior_mean():
    lo, _ = dominance_interval_at_s(GammaPrior(1e-14, 1.0), 10.0)
    assert 0 <= lo < 1e-12


def test_dominance_all_s_values():
    lo, hi = dominance_interval_all_s(GammaPrior(1, 1))
    assert lo == pytest.approx(2 - math.sqrt(3), abs=1e-14)
    assert hi == pytest.approx(2 + math.sqrt(3), abs=1e-14)
    assert dominance_interval_all_s(GammaPrior(4, 1)) == pytest.approx((2.0, 8.0), abs=1e-12)


def test_all_s_contained_in_every_at_s_interval():
    prior = GammaPrior(2.0, 1.5)
    alo, ahi = dominance_interval_all_s(prior)
    for s in (0.5, 2.0, 10.0, 200.0):
        lo, hi = dominance_interval_at_s(prior, s)
        assert lo <= alo and ahi <= hi


# ---------------------------------------------------------------------------
# brute-force risk oracle
# ---------------------------------------------------------------------------

def test_exact_risk_up_closed_form():
    risk = exact_risk_poisson("up", 1.0, 15.0, 1.0)
    assert risk.estimation_risk == pytest.approx(1 / 15, abs=1e-10)
    assert risk.prediction_risk == pytest.approx(1 + 1 / 15, abs=1e-10)
    assert risk.tail_mass < 1e-12


def test_exact_risk_zero_horizon():
    risk = exact_risk_poisson("up", 1.0, 15.0, 0.0)
    assert risk.estimation_risk == 0.0 and risk.prediction_risk == 0.0


def test_exact_risk_bayes_closed_form():
    # BP estimation risk = h^2 (theta s / (b+s)^2 + ((a - theta b)/(b+s))^2)
    risk = exact_risk_poisson("bayes", 1.0, 15.0, 1.0, GammaPrior(1, 1))
    assert risk.estimation_risk == pytest.approx(15 / 256, abs=1e-10)
    up = exact_risk_poisson("up", 1.0, 15.0, 1.0)
    pct = 100 * (risk.estimation_risk - up.estimation_risk) / up.estimation_risk
    assert pct == pytest.approx(-12.109375, abs=1e-6)


def test_exact_risk_general_closed_form():
    for theta, s, h, a, b in [(2.0, 9.0, 0.7, 3.0, 1.2), (0.5, 30.0, 2.0, 1.0, 4.0)]:
        risk = exact_risk_poisson("bayes", theta, s, h, GammaPrior(a, b))
        closed = h * h * (theta * s / (b + s) ** 2 + ((a - theta * b) / (b + s)) ** 2)
        assert risk.estimation_risk == pytest.approx(closed, rel=1e-10)


def test_exact_risk_pythagoras_decomposition():
    risk = exact_risk_poisson("map", 1.3, 22.0, 1.7, GammaPrior(2, 1))
    assert risk.prediction_risk - risk.estimation_risk == pytest.approx(1.3 * 1.7, abs=1e-15)


def test_exact_risk_truncation_error():
    with pytest.raises(TruncationError) as err:
        exact_risk_poisson("up", 1.0, 15.0, 1.0, truncation=20)
    assert err.value.tail_mass > 1e-12


def test_exact_risk_unknown_predictor():
    with pytest.raises(InvalidParameterError):
        exact_risk_poisson("median", 1.0, 15.0, 1.0)


def test_dominance_consistency_on_theta_grid():
    # sign of the exact risk difference must match interval membership
    prior = GammaPrior(1, 1)
    s, h = 15.0, 1.0
    lo, hi = dominance_interval_at_s(prior, s)
    for theta in np.linspace(0.2, 5.0, 20):
        bp = exact_risk_poisson("bayes", theta, s, h, prior).estimation_risk
        up = exact_risk_poisson("up", theta, s, h).estimation_risk
        if lo < theta < hi:
            assert bp < up
        else:
            assert bp > up
