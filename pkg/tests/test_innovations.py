from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from longmem.errors import ConfigError
from longmem.innovations import (
    INNOVATIONS,
    Rademacher,
    StandardGaussian,
    SymmetricPareto2,
    check_da_equivalences,
    make_innovation,
)
from longmem.streams import substream

ALL_MODELS = [Rademacher(), StandardGaussian(), SymmetricPareto2()]


# --- closed forms against quadrature of the density -----------------------


def _gaussian_density(t):
    return np.exp(-0.5 * t * t) / np.sqrt(2.0 * np.pi)


def _pareto_density(t):
    return np.abs(t) ** -3.0  # symmetric, |t| >= 1


@pytest.mark.parametrize("x", [0.05, 0.19, 0.3, 1.0, 1.7, 3.2])
def test_gaussian_truncated_second_moment_matches_quadrature(x):
    expected, err = integrate.quad(lambda t: 2.0 * t * t * _gaussian_density(t), 0, x)
    got = StandardGaussian().truncated_second_moment(x)
    assert got == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_gaussian_truncated_moment_is_stable_near_zero():
    """Regression: the closed forms for the truncated second and third
    moments cancel as x -> 0 and once returned negative values (found by
    the monotonicity property test below, e.g. at x ~ 2e-294). The small-x
    branches must stay nonnegative and monotone through the switchover and
    match their leading power terms."""
    xs = np.array(
        [0.0, 2.0858257979648996e-294, 1e-160, 1e-30, 1e-12, 1e-8,
         1e-6, 1e-4, 1e-2, 0.1, 0.1999, 0.2, 0.25]
    )
    model = StandardGaussian()
    for moment, power, denom in [
        (model.truncated_second_moment, 3, 3.0),
        (model.abs_third_moment_below, 4, 4.0),
    ]:
        vals = np.asarray(moment(xs))
        assert (vals >= 0.0).all()
        assert (np.diff(vals) >= 0.0).all()
        mid = np.array([1e-12, 1e-8, 1e-6, 1e-4])
        lead = np.sqrt(2.0 / np.pi) * mid**power / denom
        assert np.allclose(np.asarray(moment(mid)), lead, rtol=1e-7)


@pytest.mark.parametrize("x", [1.0, 1.5, 4.0, 20.0])
def test_pareto_truncated_second_moment_matches_quadrature(x):
    expected, err = integrate.quad(lambda t: 2.0 * t * t * _pareto_density(t), 1, x)
    got = SymmetricPareto2().truncated_second_moment(x)
    assert got == pytest.approx(expected, rel=1e-10, abs=1e-12)
    # closed form is 2 ln x
    assert got == pytest.approx(2.0 * np.log(x), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("x", [0.05, 0.19, 0.5, 1.2, 2.5])
def test_gaussian_tail_functions_match_quadrature(x):
    model = StandardGaussian()
    tail, _ = integrate.quad(lambda t: 2.0 * _gaussian_density(t), x, np.inf)
    absmean, _ = integrate.quad(lambda t: 2.0 * t * _gaussian_density(t), x, np.inf)
    third, _ = integrate.quad(lambda t: 2.0 * t**3 * _gaussian_density(t), 0, x)
    assert model.tail_probability(x) == pytest.approx(tail, rel=1e-10)
    assert model.abs_moment_above(x) == pytest.approx(absmean, rel=1e-10)
    assert model.abs_third_moment_below(x) == pytest.approx(third, rel=1e-10)


@pytest.mark.parametrize("x", [1.0, 2.0, 10.0])
def test_pareto_tail_functions_closed_forms(x):
    model = SymmetricPareto2()
    assert model.tail_probability(x) == pytest.approx(x**-2.0, rel=1e-12)
    assert model.abs_moment_above(x) == pytest.approx(2.0 / x, rel=1e-12)
    assert model.abs_third_moment_below(x) == pytest.approx(2.0 * (x - 1.0), rel=1e-12)


def test_rademacher_piecewise_values():
    model = Rademacher()
    x = np.array([0.0, 0.5, 1.0, 3.0])
    assert np.array_equal(model.truncated_second_moment(x), [0.0, 0.0, 1.0, 1.0])
    assert np.array_equal(model.tail_probability(x), [1.0, 1.0, 0.0, 0.0])
    assert np.array_equal(model.abs_moment_above(x), [1.0, 1.0, 0.0, 0.0])
    assert np.array_equal(model.abs_third_moment_below(x), [0.0, 0.0, 1.0, 1.0])


def test_second_moment_limits():
    assert Rademacher().second_moment_limit == 1.0
    assert StandardGaussian().second_moment_limit == 1.0
    assert SymmetricPareto2().second_moment_limit == np.inf


def test_truncation_index_is_one_for_all_models():
    # all truncated moments are exact from x >= 1 on
    for model in ALL_MODELS:
        assert model.b == 1.0


# --- sampling --------------------------------------------------------------


def test_sampling_is_deterministic_per_stream():
    for model in ALL_MODELS:
        a = model.sample(substream(11, 3), 64)
        b = model.sample(substream(11, 3), 64)
        assert np.array_equal(a, b)


def test_rademacher_draws_are_signs():
    draws = Rademacher().sample(substream(1, 2), 4096)
    assert set(np.unique(draws)) == {-1.0, 1.0}
    # fair to within 4 binomial standard errors
    assert abs(draws.mean()) < 4.0 / np.sqrt(draws.size)


def test_gaussian_draws_match_moments():
    draws = StandardGaussian().sample(substream(5, 0), 200_000)
    n = draws.size
    assert abs(draws.mean()) < 4.0 / np.sqrt(n)
    assert abs(draws.var() - 1.0) < 4.0 * np.sqrt(2.0 / n)


def test_pareto_draws_match_tail_and_truncated_moment():
    model = SymmetricPareto2()
    draws = model.sample(substream(9, 1), 200_000)
    n = draws.size
    assert np.all(np.abs(draws) >= 1.0)
    assert abs(draws.mean()) < 4.0 * np.sqrt(2.0 * np.log(n) / n)
    for x in (2.0, 5.0):
        p = model.tail_probability(x)
        phat = np.mean(np.abs(draws) > x)
        assert abs(phat - p) < 4.0 * np.sqrt(p * (1 - p) / n)
    # truncated second moment at x = 3: E eps^2 1(|eps|<=3) = 2 ln 3
    clipped = np.where(np.abs(draws) <= 3.0, draws, 0.0)
    est = np.mean(clipped**2)
    se = np.std(clipped**2) / np.sqrt(n)
    assert abs(est - 2.0 * np.log(3.0)) < 4.0 * se


def test_sample_zero_count():
    for model in ALL_MODELS:
        assert model.sample(substream(0, 0), 0).size == 0


# --- domain-of-attraction equivalence report -------------------------------


def test_equivalence_report_pareto_ratios():
    model = SymmetricPareto2()
    grid = np.array([10.0, 100.0, 1000.0])
    report = check_da_equivalences(model, grid)
    # x^2 P(|eps|>x) / l(x) = 1 / (2 ln x), already small and decreasing
    expected = 1.0 / (2.0 * np.log(grid))
    assert np.allclose(report.tail_ratio, expected, rtol=1e-12)
    assert np.all(np.diff(report.tail_ratio) < 0)
    # x E|eps|1(>x) / l(x) = 1 / ln x
    assert np.allclose(report.abs_mean_ratio, 1.0 / np.log(grid), rtol=1e-12)
    assert np.all(report.third_moment_ratio > 0)
    assert np.all(np.diff(report.third_moment_ratio) < 0)


def test_equivalence_report_gaussian_vanishes_fast():
    report = check_da_equivalences(StandardGaussian(), np.array([2.0, 4.0, 8.0]))
    assert report.tail_ratio[-1] < 1e-12
    assert report.abs_mean_ratio[-1] < 1e-12


@pytest.mark.parametrize(
    "grid",
    [np.array([2.0]), np.array([1.0, 2.0]), np.array([3.0, 2.0, 4.0]), np.array([-1.0, 2.0, 3.0])],
)
def test_equivalence_report_rejects_bad_grids(grid):
    with pytest.raises(ValueError):
        check_da_equivalences(StandardGaussian(), grid)


# --- registry ---------------------------------------------------------------


def test_make_innovation_known_names():
    assert isinstance(make_innovation("gaussian"), StandardGaussian)
    assert isinstance(make_innovation("rademacher"), Rademacher)
    assert isinstance(make_innovation("pareto2"), SymmetricPareto2)
    assert set(INNOVATIONS) == {"gaussian", "rademacher", "pareto2"}


def test_make_innovation_unknown_name_says_choices():
    with pytest.raises(ConfigError, match="pareto2"):
        make_innovation("cauchy")


def test_negative_argument_rejected():
    for model in ALL_MODELS:
        with pytest.raises(ValueError):
            model.truncated_second_moment(-0.5)


# --- monotonicity properties ------------------------------------------------


@given(
    x=st.floats(min_value=0.0, max_value=50.0),
    y=st.floats(min_value=0.0, max_value=50.0),
)
@settings(max_examples=60, deadline=None)
def test_truncated_moment_monotone_and_tails_decreasing(x, y):
    lo, hi = sorted((x, y))
    for model in ALL_MODELS:
        assert model.truncated_second_moment(lo) <= model.truncated_second_moment(hi)
        assert model.tail_probability(lo) >= model.tail_probability(hi)
        assert model.abs_moment_above(lo) >= model.abs_moment_above(hi)
        assert model.abs_third_moment_below(lo) <= model.abs_third_moment_below(hi)


@given(x=st.floats(min_value=1.0, max_value=100.0))
@settings(max_examples=60, deadline=None)
def test_truncated_moment_bounded_by_limit(x):
    for model in (Rademacher(), StandardGaussian()):
        assert model.truncated_second_moment(x) <= model.second_moment_limit + 1e-15
