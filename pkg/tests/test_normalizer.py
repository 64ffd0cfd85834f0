"""Threshold sequences, the window constant, and the normalization table.

eta_j has a closed form for Rademacher innovations (max(2, sqrt(j))) and is
checked against scalar brentq root-finding for the other laws. The window
constant c(alpha) is pinned to digits that were verified against 40-digit
arbitrary-precision quadrature, with a live scipy cross-check on a different
decomposition of the integral.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from longmem import (
    ConfigError,
    DivergenceError,
    Farima,
    NormalizerTable,
    PowerLaw,
    Rademacher,
    StandardGaussian,
    SymmetricPareto2,
    build_table,
    c_alpha,
    eta,
    eta_many,
    variance_equivalence_ratio,
)

# --- eta thresholds --------------------------------------------------------


def test_rademacher_eta_closed_form():
    model = Rademacher()
    j = np.arange(0, 1001)
    expected = np.maximum(2.0, np.sqrt(j))
    np.testing.assert_allclose(eta_many(model, j), expected, atol=1e-8, rtol=0)


def test_rademacher_eta_100_is_10():
    assert abs(eta(Rademacher(), 100) - 10.0) <= 1e-8


@pytest.mark.parametrize("model", [StandardGaussian(), SymmetricPareto2()], ids=lambda m: m.kind)
@pytest.mark.parametrize("j", [1.0, 2.0, 10.0, 100.0, 1e6])
def test_eta_against_brentq(model, j):
    # independent root of j l(s) = s^2 on a bracket that spans the crossing
    def f(s):
        return j * float(model.truncated_second_moment(s)) - s * s

    base = float(model.b) + 1.0
    if f(base) <= 0:
        expected = base  # predicate already holds at the left endpoint
    else:
        hi = 2.0 * base
        while f(hi) > 0:
            hi *= 2.0
        expected = optimize.brentq(f, base, hi, xtol=1e-12, rtol=1e-15)
    assert eta(model, j) == pytest.approx(expected, rel=1e-8, abs=1e-8)


def test_eta_at_zero_is_left_endpoint():
    for model in (Rademacher(), StandardGaussian(), SymmetricPareto2()):
        assert eta(model, 0) == float(model.b) + 1.0


@given(j=st.floats(5.0, 1e6))
@settings(max_examples=40, deadline=None)
def test_eta_is_the_infimum(j):
    # at the returned point the defining inequality holds; just below it fails
    # (whenever the threshold sits above the left endpoint)
    model = SymmetricPareto2()
    s = eta(model, j)
    assert j * float(model.truncated_second_moment(s)) <= s * s * (1 + 1e-9)
    if s > float(model.b) + 1.0 + 1e-6:
        below = s * (1.0 - 1e-5)
        assert j * float(model.truncated_second_moment(below)) > below * below


def test_eta_vector_matches_scalars():
    model = StandardGaussian()
    j = np.array([0.0, 3.0, 17.0, 250.0, 1e5])
    batch = eta_many(model, j)
    singles = np.array([eta(model, v) for v in j])
    # batch bisection keeps refining until the slowest entry converges, so
    # the two routes agree only to the bisection tolerance, not bit-for-bit
    np.testing.assert_allclose(batch, singles, rtol=1e-9, atol=1e-9)


def test_eta_rejects_bad_j():
    with pytest.raises(ValueError, match="nonnegative"):
        eta(Rademacher(), -1.0)
    with pytest.raises(ValueError, match="finite"):
        eta_many(Rademacher(), [1.0, np.inf])


class _QuadraticTailModel:
    """Stub law whose truncated second moment grows like s^2.

    l(s)/s^2 never falls below 1/j for j > 4, so no threshold exists and the
    bracket search must give up rather than loop.
    """

    kind = "QuadraticTail"
    b = 1.0

    def truncated_second_moment(self, s):
        return 0.25 * np.asarray(s, dtype=float) ** 2


def test_eta_diverges_on_quadratic_tail():
    with pytest.raises(DivergenceError, match="no threshold"):
        eta(_QuadraticTailModel(), 100.0)


def test_eta_boundary_identity_when_interior():
    # an interior threshold satisfies n l(eta_n) = eta_n^2 exactly
    for model in (Rademacher(), StandardGaussian(), SymmetricPareto2()):
        for n in (100, 10_000):
            s = eta(model, n)
            assert n * float(model.truncated_second_moment(s)) == pytest.approx(
                s * s, rel=1e-7
            )


# --- the window constant ---------------------------------------------------

# digits verified against 40-digit arbitrary-precision quadrature of the
# defining integral (exact head on [0,1], tanh-sinh on the rest)
C_ALPHA_FROZEN = {
    0.55: 13.55049002862446,
    0.6: 9.49734085130544,
    0.65: 9.244427221967758,
    0.7: 10.65019009261948,
    0.75: 13.98430695622464,
    0.9: 86.3716611967178,
}


@pytest.mark.parametrize("alpha", sorted(C_ALPHA_FROZEN))
def test_c_alpha_frozen_digits(alpha):
    assert c_alpha(alpha) == pytest.approx(C_ALPHA_FROZEN[alpha], rel=1e-12)


@pytest.mark.parametrize("alpha", [0.65, 0.75, 0.9])
def test_c_alpha_against_plain_quad(alpha):
    # same integral, different decomposition: raw integrand out to infinity
    one_m = 1.0 - alpha

    def raw(x):
        return (x**one_m - (x - 1.0) ** one_m) ** 2

    head = 1.0 / (3.0 - 2.0 * alpha)
    mid, _ = integrate.quad(raw, 1.0, 50.0, epsabs=0.0, epsrel=1e-13, limit=300)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        tail, _ = integrate.quad(raw, 50.0, np.inf, epsabs=1e-15, epsrel=1e-12, limit=300)
    assert c_alpha(alpha) == pytest.approx((head + mid + tail) / one_m**2, rel=1e-8)


def test_c_alpha_minimum_sits_between_endpoint_blowups():
    # the constant blows up at both ends of (1/2, 1) and dips in between
    assert c_alpha(0.51) > c_alpha(0.65) < c_alpha(0.99)


def test_c_alpha_domain():
    with pytest.raises(ConfigError):
        c_alpha(0.5)
    with pytest.raises(ConfigError):
        c_alpha(1.0)


# --- normalization table ---------------------------------------------------


def test_b_sq_and_d_sq_formulas():
    table = NormalizerTable(Rademacher(), Farima(0.25))
    n = 4096
    # Rademacher truncated second moment is identically 1 above the edge
    l_n = 1.0
    expected_b = c_alpha(0.75) * l_n * n**1.5 * Farima(0.25).slowvary_at(n) ** 2
    assert table.B_sq(n) == pytest.approx(expected_b, rel=1e-12)
    assert table.D_sq(n) == pytest.approx(Farima(0.25).asq_total * n, rel=1e-12)
    with pytest.raises(ValueError):
        table.B_sq(0)
    with pytest.raises(ValueError):
        table.D_sq(0)


def test_table_dense_and_sparse_paths_agree():
    table = NormalizerTable(SymmetricPareto2(), Farima(0.3))
    sparse_val = table.eta(50)  # cached on the sparse path
    dense = table.eta_array(100)
    assert dense.shape == (101,)
    assert table.eta(50) == pytest.approx(sparse_val, abs=1e-8)
    assert dense[50] == pytest.approx(sparse_val, abs=1e-8)
    # l_at memoizes
    assert table.l_at(64) == table.l_at(64)
    assert table.l_at(64) == pytest.approx(
        float(SymmetricPareto2().truncated_second_moment(table.eta(64))), rel=1e-12
    )


def test_build_table_prefills():
    table = build_table(StandardGaussian(), Farima(0.25), [16, 64])
    assert set(table._l) == {16, 64}


@pytest.mark.parametrize(
    "model,tol",
    [(Rademacher(), 0.02), (StandardGaussian(), 0.02), (SymmetricPareto2(), 0.06)],
    ids=lambda m: getattr(m, "kind", str(m)),
)
def test_b_sq_regular_variation(model, tol):
    # B_{2n}^2 / B_n^2 tends to 2^(3-2 alpha); the heavy-tailed law carries a
    # slowly varying factor that is still visibly off at n = 1e5 but shrinking
    scheme = Farima(0.25)
    table = build_table(model, scheme, [1000, 2000, 100_000, 200_000])
    target = 2.0 ** (3.0 - 2.0 * scheme.alpha)
    small = table.B_sq(2000) / table.B_sq(1000)
    large = table.B_sq(200_000) / table.B_sq(100_000)
    assert abs(large / target - 1.0) <= tol
    assert abs(large / target - 1.0) <= abs(small / target - 1.0) + 1e-12


# --- deterministic variance equivalence ------------------------------------


def test_variance_equivalence_frozen_values():
    # heavy-tail-free pair with a pure power-law scheme; the deficit decays
    # like n^(-1/4) because the window prefix sums carry a constant offset
    model, scheme = Rademacher(), PowerLaw(0.75)
    assert variance_equivalence_ratio(model, scheme, 1000) == pytest.approx(
        0.7466851605465353, rel=1e-6
    )
    assert variance_equivalence_ratio(model, scheme, 10_000) == pytest.approx(
        0.8509742355683271, rel=1e-6
    )


def test_variance_equivalence_increases_toward_one():
    model, scheme = StandardGaussian(), Farima(0.3)
    r_small = variance_equivalence_ratio(model, scheme, 500)
    r_large = variance_equivalence_ratio(model, scheme, 2000)
    assert r_small < r_large < 1.02


def test_variance_equivalence_validation():
    with pytest.raises(ValueError, match="n must be"):
        variance_equivalence_ratio(Rademacher(), Farima(0.3), 0)
    with pytest.raises(ValueError, match="head_multiple"):
        variance_equivalence_ratio(Rademacher(), Farima(0.3), 100, head_multiple=1)
