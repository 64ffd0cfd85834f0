"""Simulation of the linear process and the statistics computed from one path.

A path is X_k = sum_{i=0}^{M} a_i eps_{k-i} for k = 1..n, a truncated moving
average driven by n + M innovation draws (M is the pre-sample burn-in lag).
The convolution runs through a zero-padded real FFT, which reduces the
O(n M) direct cost to O((n + M) log(n + M)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import signal

from .coefficients import MAX_ARRAY_LEN, CoefficientScheme
from .errors import DegeneratePathError, ResourceError
from .innovations import InnovationModel
from .normalizer import NormalizerTable

__all__ = [
    "SamplePath",
    "StepFunction",
    "PathFunctionals",
    "TruncationReport",
    "UnitRootRun",
    "default_burnin",
    "simulate_path",
    "fft_window_convolve",
    "functionals",
    "truncated_path_diagnostic",
    "unit_root_run",
]


@dataclass
class SamplePath:
    """One realized innovation window and the path it generates.

    ``eps`` holds the n + M draws eps_{1-M}, ..., eps_n in time order;
    ``x`` the observations X_1..X_n; ``s`` the prefix sums S_0..S_n.
    """

    n: int
    m_lag: int
    eps: np.ndarray
    x: np.ndarray
    s: np.ndarray
    model: Any
    scheme: Any
    seed_key: tuple[int, ...] = ()


def default_burnin(
    scheme: CoefficientScheme,
    n: int,
    mass_tol: float = 1e-6,
    cap_multiple: int = 8,
) -> int:
    """Burn-in lag policy: max(n, M*) capped at cap_multiple * n.

    M* is the smallest lag whose analytic squared-coefficient tail bound is
    below mass_tol times the total squared mass. For long-memory decay that
    point sits astronomically far out (around 1e13 lags for typical memory
    parameters), so the cap is what actually binds for the catalog schemes;
    experiments that need a tighter truncation bias pass an explicit lag.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if cap_multiple < 1:
        raise ValueError("cap_multiple must be at least 1")
    target = mass_tol * scheme.asq_total
    cap = cap_multiple * n
    if scheme.tail_sq_mass(cap) > target:
        return cap
    lo, hi = 1, cap  # tail(hi) <= target; find the smallest such lag
    while lo < hi:
        mid = (lo + hi) // 2
        if scheme.tail_sq_mass(mid) <= target:
            hi = mid
        else:
            lo = mid + 1
    return max(n, hi)


def fft_window_convolve(coeff_fft: np.ndarray, eps: np.ndarray, length: int, n: int, m_lag: int) -> np.ndarray:
    """X_1..X_n from precomputed rfft of the coefficient array and raw draws."""
    conv = np.fft.irfft(coeff_fft * np.fft.rfft(eps, length), length)
    return conv[m_lag : m_lag + n]


def _fft_length(n: int, m_lag: int) -> int:
    need = n + 2 * m_lag
    length = 1 << (need - 1).bit_length()
    if length > MAX_ARRAY_LEN:
        raise ResourceError(
            f"path of n = {n} with burn-in lag {m_lag} needs an FFT of length "
            f"{length}, above the limit {MAX_ARRAY_LEN}"
        )
    return length


def simulate_path(
    model: InnovationModel,
    scheme: CoefficientScheme,
    n: int,
    rng: np.random.Generator,
    m_lag: int | None = None,
    seed_key: tuple[int, ...] = (),
) -> SamplePath:
    """Draw one innovation window and produce the path and its prefix sums."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if m_lag is None:
        m_lag = default_burnin(scheme, n)
    if m_lag < n:
        raise ValueError("burn-in lag must be at least n")
    length = _fft_length(n, m_lag)
    a = scheme.coeffs(m_lag)
    eps = np.asarray(model.sample(rng, n + m_lag), dtype=float)
    x = fft_window_convolve(np.fft.rfft(a, length), eps, length, n, m_lag)
    s = np.empty(n + 1)
    s[0] = 0.0
    np.cumsum(x, out=s[1:])
    return SamplePath(
        n=n, m_lag=m_lag, eps=eps, x=x, s=s, model=model, scheme=scheme, seed_key=seed_key
    )


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous step function t -> values[floor(n t)] on [0, 1]."""

    values: np.ndarray
    n: int

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > 1):
            raise ValueError("time must lie in [0, 1]")
        idx = np.minimum(np.floor(self.n * t).astype(int), self.n)
        return self.values[idx][()]


@dataclass(frozen=True)
class PathFunctionals:
    """The three path statistics: W, its self-normalized twin, and the
    normalized sum of squares.

    ``w(t)`` is S_[nt]/B_n and ``sn(t)`` is S_[nt]/(n a_n sqrt(sum X_i^2));
    ``lln`` is sum X_i^2 / (n l_n), whose limit is the total squared
    coefficient mass. ``sn`` is exactly invariant under scaling every
    innovation by a positive constant: numerator and denominator both pick
    up the same factor.
    """

    w: StepFunction
    sn: StepFunction
    lln: float


def functionals(path: SamplePath, table: NormalizerTable) -> PathFunctionals:
    if table.model != path.model:
        raise ValueError("normalizer table was built for a different innovation model")
    ssq = float(np.dot(path.x, path.x))
    if ssq == 0.0:
        raise DegeneratePathError("all observations are zero; statistics undefined")
    n = path.n
    b_n = np.sqrt(table.B_sq(n))
    sn_scale = n * path.scheme.coeff(n) * np.sqrt(ssq)
    return PathFunctionals(
        w=StepFunction(path.s / b_n, n),
        sn=StepFunction(path.s / sn_scale, n),
        lln=ssq / (n * table.l_at(n)),
    )


@dataclass(frozen=True)
class TruncationReport:
    """Effect of clipping each innovation at its window-matched threshold.

    eps_m is kept only when |eps_m| <= eta_{n-m}; the report compares the
    resulting partial sum against the untruncated one on the B_n scale.
    """

    s_n: float
    s_n_truncated: float
    gap_over_b: float
    clipped: int


def truncated_path_diagnostic(path: SamplePath, table: NormalizerTable) -> TruncationReport:
    n, m_lag = path.n, path.m_lag
    # The threshold of eps_m depends only on its time index: time m sits at
    # array position m + m_lag - 1, so position p gets eta_{n + m_lag - 1 - p}.
    thresholds = table.eta_array(n + m_lag - 1)[::-1]
    keep = np.abs(path.eps) <= thresholds
    clipped_eps = np.where(keep, path.eps, 0.0)
    length = _fft_length(n, m_lag)
    a = path.scheme.coeffs(m_lag)
    x_trunc = fft_window_convolve(np.fft.rfft(a, length), clipped_eps, length, n, m_lag)
    s_n = float(path.s[n])
    # Sequential prefix total, matching how path.s was built: when nothing
    # is clipped the two totals agree bitwise, not just to rounding.
    s_trunc = float(np.cumsum(x_trunc)[-1])
    gap = abs(s_n - s_trunc) / np.sqrt(table.B_sq(n))
    return TruncationReport(
        s_n=s_n,
        s_n_truncated=s_trunc,
        gap_over_b=gap,
        clipped=int(np.count_nonzero(~keep)),
    )


@dataclass(frozen=True)
class UnitRootRun:
    """Autoregression Y_k = rho Y_{k-1} + X_k with OLS slope and statistics.

    ``stat_a`` = sum Y_{k-1}^2 / (n^3 a_n^2 sum X_i^2),
    ``stat_b`` = sum Y_{k-1} (Y_k - Y_{k-1}) / (n^2 a_n^2 sum X_i^2),
    ``stat_c`` = n (rho_hat - 1), the Dickey-Fuller-type statistic.
    """

    y: np.ndarray
    rho: float
    rho_hat: float
    stat_a: float
    stat_b: float
    stat_c: float


def unit_root_run(path: SamplePath, rho: float = 1.0) -> UnitRootRun:
    n = path.n
    y = np.empty(n + 1)
    y[0] = 0.0
    if rho == 1.0:
        y[1:] = path.s[1:]
    else:
        y[1:] = signal.lfilter([1.0], [1.0, -rho], path.x)
    lag = y[:-1]
    cur = y[1:]
    den = float(np.dot(lag, lag))
    ssq = float(np.dot(path.x, path.x))
    if den == 0.0 or ssq == 0.0:
        raise DegeneratePathError("autoregression denominators vanish on this path")
    rho_hat = float(np.dot(lag, cur)) / den
    a_n = path.scheme.coeff(n)
    nf = float(n)
    scale = a_n * a_n * ssq
    stat_a = den / (nf**3 * scale)
    stat_b = float(np.dot(lag, cur - lag)) / (nf**2 * scale)
    stat_c = nf * (rho_hat - 1.0)
    return UnitRootRun(y=y, rho=rho, rho_hat=rho_hat, stat_a=stat_a, stat_b=stat_b, stat_c=stat_c)
