"""Path simulation, step functionals, truncation, and the autoregression.

The FFT convolution is checked against a direct O(n M) double loop, the
prefix sums against their bitwise construction identity, and the
autoregression statistics against hand-computable stubs (constant
observations give rational closed forms for the slope).
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from longmem import (
    DegeneratePathError,
    Farima,
    PowerLaw,
    Rademacher,
    ResourceError,
    StandardGaussian,
    StepFunction,
    SymmetricPareto2,
    build_table,
    default_burnin,
    functionals,
    simulate_path,
    substream,
    truncated_path_diagnostic,
    unit_root_run,
)

from conftest import FlatCoeff, build_stub_path


def brute_convolve(a: np.ndarray, eps: np.ndarray, n: int, m_lag: int) -> np.ndarray:
    """Direct X_k = sum_i a_i eps_{k-i}; eps_t sits at array slot t + m_lag - 1."""
    x = np.zeros(n)
    for k in range(1, n + 1):
        for i in range(m_lag + 1):
            t = k - i
            x[k - 1] += a[i] * eps[t + m_lag - 1]
    return x


# --- simulation -------------------------------------------------------------


@pytest.mark.parametrize(
    "model,scheme",
    [(StandardGaussian(), Farima(0.3)), (SymmetricPareto2(), PowerLaw(0.75))],
    ids=["gauss-farima", "pareto-powerlaw"],
)
@pytest.mark.parametrize("n,m_lag", [(1, 1), (8, 8), (8, 64), (33, 64), (64, 64)])
def test_fft_path_matches_direct_convolution(model, scheme, n, m_lag):
    path = simulate_path(model, scheme, n, substream(11, 0, n, m_lag), m_lag=m_lag)
    expected = brute_convolve(scheme.coeffs(m_lag), path.eps, n, m_lag)
    np.testing.assert_allclose(path.x, expected, atol=1e-10, rtol=0)


def test_prefix_sums_construction_identity():
    path = simulate_path(StandardGaussian(), Farima(0.3), 200, substream(3, 1), m_lag=200)
    assert path.s[0] == 0.0
    assert np.array_equal(path.s[1:], np.cumsum(path.x))
    assert path.eps.shape == (400,)
    assert path.x.shape == (200,)


def test_simulation_is_keyed_deterministically():
    a = simulate_path(SymmetricPareto2(), Farima(0.3), 64, substream(5, 2, 64, 0), m_lag=64)
    b = simulate_path(SymmetricPareto2(), Farima(0.3), 64, substream(5, 2, 64, 0), m_lag=64)
    c = simulate_path(SymmetricPareto2(), Farima(0.3), 64, substream(5, 2, 64, 1), m_lag=64)
    assert np.array_equal(a.x, b.x)
    assert not np.array_equal(a.x, c.x)


def test_simulate_validation():
    rng = substream(0)
    with pytest.raises(ValueError, match="n must be"):
        simulate_path(Rademacher(), Farima(0.3), 0, rng)
    with pytest.raises(ValueError, match="burn-in"):
        simulate_path(Rademacher(), Farima(0.3), 100, rng, m_lag=50)


def test_fft_length_resource_cap():
    with pytest.raises(ResourceError, match="FFT"):
        simulate_path(Rademacher(), Farima(0.3), 1 << 26, substream(0), m_lag=1 << 26)


def test_seed_key_is_recorded():
    path = simulate_path(Rademacher(), Farima(0.3), 4, substream(0), m_lag=4, seed_key=(9, 4, 2))
    assert path.seed_key == (9, 4, 2)


# --- burn-in policy ---------------------------------------------------------


def test_default_burnin_cap_branch():
    # catalog long-memory schemes hit the cap: their tail mass at 8n is huge
    scheme = Farima(0.25)
    m = default_burnin(scheme, 1000)
    assert m == 8000
    assert scheme.tail_sq_mass(m) > 1e-6 * scheme.asq_total


def test_default_burnin_interior_branch():
    # near-zero memory decays fast enough that the mass target binds first
    scheme = Farima(0.05)
    n = 2000
    m = default_burnin(scheme, n)
    target = 1e-6 * scheme.asq_total
    assert n <= m < 8 * n
    assert scheme.tail_sq_mass(m) <= target < scheme.tail_sq_mass(m - 1)


def test_default_burnin_validation():
    with pytest.raises(ValueError, match="n must be"):
        default_burnin(Farima(0.3), 0)
    with pytest.raises(ValueError, match="cap_multiple"):
        default_burnin(Farima(0.3), 10, cap_multiple=0)


# --- step functions ---------------------------------------------------------


def test_step_function_floor_indexing():
    n = 10
    f = StepFunction(np.arange(n + 1, dtype=float), n)
    assert f(0.0) == 0.0
    assert f(1.0) == n
    assert f(0.05) == 0.0  # floor(0.5)
    assert f(0.1) == 1.0
    assert f(0.55) == 5.0
    vals = f(np.array([0.0, 0.25, 1.0]))
    np.testing.assert_array_equal(vals, [0.0, 2.0, 10.0])
    assert np.isscalar(f(0.5)) or np.ndim(f(0.5)) == 0


def test_step_function_domain():
    f = StepFunction(np.zeros(3), 2)
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        f(-0.01)
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        f(np.array([0.5, 1.5]))


@given(t=st.floats(0.0, 1.0), n=st.integers(1, 40))
@settings(max_examples=60, deadline=None)
def test_step_function_matches_definition(t, n):
    values = np.arange(n + 1, dtype=float) ** 2
    f = StepFunction(values, n)
    assert f(t) == values[min(int(np.floor(n * t)), n)]


# --- path functionals -------------------------------------------------------


def test_functional_values_by_hand():
    model, scheme = Rademacher(), Farima(0.25)
    n = 128
    table = build_table(model, scheme, [n])
    path = simulate_path(model, scheme, n, substream(21, 0, n), m_lag=n)
    got = functionals(path, table)
    ssq = float(np.dot(path.x, path.x))
    assert got.w(1.0) == pytest.approx(path.s[n] / np.sqrt(table.B_sq(n)), rel=1e-14)
    assert got.sn(1.0) == pytest.approx(
        path.s[n] / (n * scheme.coeff(n) * np.sqrt(ssq)), rel=1e-14
    )
    assert got.lln == pytest.approx(ssq / (n * table.l_at(n)), rel=1e-14)


def test_self_normalized_statistic_scale_invariance():
    # power-of-two innovation scalings commute with every float operation
    # involved, so sn must come out bit-identical; decimal scalings agree to
    # rounding
    model, scheme = StandardGaussian(), Farima(0.3)
    n = 64
    table = build_table(model, scheme, [n])
    base = simulate_path(model, scheme, n, substream(8, 0, n), m_lag=n)
    t_grid = np.linspace(0.0, 1.0, 13)
    sn_base = functionals(base, table).sn(t_grid)

    def scaled_copy(c: float):
        clone = build_stub_path(base.x * c, scheme=scheme, model=model)
        return functionals(clone, table).sn(t_grid)

    for c in (2.0**20, 2.0**-20):
        np.testing.assert_array_equal(scaled_copy(c), sn_base)
    for c in (1e6, 1e-6):
        np.testing.assert_allclose(scaled_copy(c), sn_base, rtol=1e-12)


def test_functionals_model_mismatch_and_degenerate():
    scheme = Farima(0.3)
    table = build_table(Rademacher(), scheme, [8])
    path = simulate_path(StandardGaussian(), scheme, 8, substream(1), m_lag=8)
    with pytest.raises(ValueError, match="different innovation model"):
        functionals(path, table)
    zeros = build_stub_path(np.zeros(8), scheme=scheme, model=Rademacher())
    with pytest.raises(DegeneratePathError):
        functionals(zeros, table)


# --- truncation diagnostic ---------------------------------------------------


def test_truncation_no_clip_is_bitwise_identity():
    # Rademacher draws are +/-1 and every threshold is at least 2, so nothing
    # is clipped and the sequential prefix totals must agree exactly
    model, scheme = Rademacher(), Farima(0.3)
    n = 64
    table = build_table(model, scheme, [n])
    path = simulate_path(model, scheme, n, substream(2, 0, n), m_lag=n)
    rep = truncated_path_diagnostic(path, table)
    assert rep.clipped == 0
    assert rep.s_n_truncated == rep.s_n
    assert rep.gap_over_b == 0.0


def test_truncation_against_brute_force():
    model, scheme = SymmetricPareto2(), Farima(0.3)
    n, m_lag = 24, 48
    table = build_table(model, scheme, [n])
    path = simulate_path(model, scheme, n, substream(13, 0, n), m_lag=m_lag)
    rep = truncated_path_diagnostic(path, table)

    thresholds = table.eta_array(n + m_lag - 1)[::-1]
    keep = np.abs(path.eps) <= thresholds
    assert rep.clipped == int(np.sum(~keep))
    assert rep.clipped > 0  # heavy tails at small thresholds must clip
    x_brute = brute_convolve(scheme.coeffs(m_lag), np.where(keep, path.eps, 0.0), n, m_lag)
    assert rep.s_n_truncated == pytest.approx(float(np.sum(x_brute)), abs=1e-10)
    expected_gap = abs(rep.s_n - rep.s_n_truncated) / np.sqrt(table.B_sq(n))
    assert rep.gap_over_b == pytest.approx(expected_gap, rel=1e-14)


def test_truncation_threshold_orientation():
    # the oldest draw faces the largest threshold, the newest the smallest
    model = SymmetricPareto2()
    table = build_table(model, Farima(0.3), [4])
    thresholds = table.eta_array(4 + 8 - 1)[::-1]
    assert thresholds[0] == max(thresholds)
    assert thresholds[-1] == float(model.b) + 1.0


# --- autoregression ----------------------------------------------------------


def test_unit_root_constant_path_closed_form():
    # X_k = 1 gives Y_k = k, whose OLS slope is 2(n+1)/(2n-1)
    n = 10
    run = unit_root_run(build_stub_path(np.ones(n)))
    assert np.array_equal(run.y, np.arange(n + 1, dtype=float))
    assert run.rho_hat == pytest.approx(2.0 * (n + 1) / (2 * n - 1), rel=1e-14)
    assert run.stat_c == pytest.approx(3.0 * n / (2 * n - 1), rel=1e-13)


def test_unit_root_statistics_by_hand():
    path = build_stub_path(np.array([1.0, -2.0, 0.5, 3.0]))
    run = unit_root_run(path)
    y = np.concatenate([[0.0], np.cumsum(path.x)])
    lag, cur = y[:-1], y[1:]
    ssq = float(np.dot(path.x, path.x))
    a_n = 1.0  # FlatCoeff stub
    n = 4.0
    assert run.rho_hat == pytest.approx(np.dot(lag, cur) / np.dot(lag, lag), rel=1e-14)
    assert run.stat_a == pytest.approx(np.dot(lag, lag) / (n**3 * a_n**2 * ssq), rel=1e-14)
    assert run.stat_b == pytest.approx(
        np.dot(lag, cur - lag) / (n**2 * a_n**2 * ssq), rel=1e-14
    )
    assert run.stat_c == pytest.approx(n * (run.rho_hat - 1.0), rel=1e-14)


def test_unit_root_telescoping_identity():
    # at rho = 1 the cross term telescopes: sum Y_{k-1} dY = (Y_n^2 - ssq) / 2
    model, scheme = StandardGaussian(), Farima(0.3)
    n = 256
    for r in range(100):
        path = simulate_path(model, scheme, n, substream(17, 4, n, r), m_lag=n)
        run = unit_root_run(path)
        ssq = float(np.dot(path.x, path.x))
        expected = (path.s[n] ** 2 - ssq) / (2.0 * n**2 * scheme.coeff(n) ** 2 * ssq)
        assert run.stat_b == pytest.approx(expected, rel=1e-9)


def test_unit_root_stationary_branch_matches_recursion():
    path = build_stub_path(np.arange(1.0, 51.0))
    for rho in (0.0, 0.5, -0.8):
        run = unit_root_run(path, rho=rho)
        y = np.zeros(51)
        for k in range(1, 51):
            y[k] = rho * y[k - 1] + path.x[k - 1]
        np.testing.assert_allclose(run.y, y, rtol=1e-12, atol=1e-12)
        assert run.rho == rho
    zero_rho = unit_root_run(path, rho=0.0)
    np.testing.assert_allclose(zero_rho.y[1:], path.x, rtol=1e-12)


def test_unit_root_degenerate_paths():
    with pytest.raises(DegeneratePathError):
        unit_root_run(build_stub_path(np.zeros(6)))
    # all mass on the last observation: every lagged level is zero
    spike = np.zeros(6)
    spike[-1] = 3.0
    with pytest.raises(DegeneratePathError):
        unit_root_run(build_stub_path(spike))


@given(scale=st.sampled_from([2.0**-10, 0.25, 1.0, 4.0, 2.0**10]))
@settings(max_examples=10, deadline=None)
def test_unit_root_statistics_scale_free(scale):
    # every statistic is a ratio of quadratics in the path, so positive
    # scalings cancel; power-of-two scalings cancel exactly
    x = np.array([0.5, -1.25, 2.0, 0.75, -0.5])
    base = unit_root_run(build_stub_path(x))
    scaled = unit_root_run(build_stub_path(x * scale))
    assert scaled.stat_a == base.stat_a
    assert scaled.stat_b == base.stat_b
    assert scaled.stat_c == base.stat_c
