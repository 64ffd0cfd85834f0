"""Moving-average coefficient sequences with slowly decaying long-memory tails.

Two families are provided:

* ``Farima(d)``: the fractional-differencing weights of (1 - B)^(-d), generated
  by the stable recurrence a_0 = 1, a_i = a_{i-1} (i - 1 + d) / i. Their decay
  exponent is alpha = 1 - d.
* ``PowerLaw(alpha, slowvary)``: a_0 = 0 and a_i = i^(-alpha) L(i) for i >= 1,
  where L is ``Const(c)`` or ``LogPower(p)`` (L(n) = (1 + ln n)^p).

Both have square-summable coefficients whose partial-sum windows grow like
n^(1-alpha) times a slowly varying factor; that growth is what produces the
super-diffusive normalization of the partial-sum process downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ConfigError, ResourceError

__all__ = [
    "Const",
    "LogPower",
    "CoefficientScheme",
    "Farima",
    "PowerLaw",
    "PartialSumTable",
    "build_partial_sums",
    "OrderReport",
    "coefficient_order_check",
    "make_scheme",
]

# Hard cap on any coefficient or window array: 2^27 doubles is 1 GiB.
MAX_ARRAY_LEN = 1 << 27

# Where the LogPower total-variance partial sum stops before the analytic
# tail integral takes over; the midpoint-rule remainder there is ~1e-11
# relative, far below the 1e-10 accuracy target.
_LOGPOW_PARTIAL_TERMS = 300_000


def _check_len(length: int, what: str) -> None:
    if length > MAX_ARRAY_LEN:
        raise ResourceError(
            f"{what} would need {length} entries; the limit is {MAX_ARRAY_LEN}"
        )


@dataclass(frozen=True)
class Const:
    """Constant slowly varying factor L(n) = c."""

    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ConfigError(f"Const factor must be positive, got {self.c}")

    def __call__(self, n):
        return np.broadcast_to(float(self.c), np.shape(n)).copy() if np.ndim(n) else float(self.c)

    @property
    def label(self) -> str:
        return f"const{self.c:g}"


@dataclass(frozen=True)
class LogPower:
    """Logarithmic slowly varying factor L(n) = (1 + ln n)^p."""

    p: float

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        if np.any(n < 1):
            raise ValueError("LogPower factor is defined for n >= 1")
        return ((1.0 + np.log(n)) ** self.p)[()]

    @property
    def label(self) -> str:
        return f"logpow{self.p:g}"


class CoefficientScheme:
    """Base class for coefficient sequences a_0, a_1, ...

    Subclasses fill in ``alpha`` (decay exponent), ``_compute_coeffs``,
    ``slowvary_at`` (the exact slowly varying part of a_n), ``asq_total``
    (the summed squares, including a_0), and ``tail_sq_mass`` (an analytic
    upper bound on the squared mass beyond a lag).
    """

    alpha: float
    label: str

    def __init__(self) -> None:
        self._acache: np.ndarray | None = None

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_acache"] = None  # regenerated on demand; keeps pickles small
        return state

    def coeffs(self, imax: int) -> np.ndarray:
        """Return the array a_0..a_imax (cached; grows on demand)."""
        if imax < 0:
            raise ValueError("imax must be nonnegative")
        _check_len(imax + 1, "coefficient array")
        if self._acache is None or self._acache.size <= imax:
            self._acache = self._compute_coeffs(imax)
        return self._acache[: imax + 1]

    def coeff(self, i: int) -> float:
        if i < 0:
            raise ValueError("coefficient index must be nonnegative")
        return float(self.coeffs(i)[i])

    def _compute_coeffs(self, imax: int) -> np.ndarray:
        raise NotImplementedError

    def slowvary_at(self, n: int) -> float:
        raise NotImplementedError

    @property
    def asq_total(self) -> float:
        raise NotImplementedError

    def tail_sq_mass(self, lag: int) -> float:
        raise NotImplementedError


class Farima(CoefficientScheme):
    """Fractional-differencing weights with memory parameter d in (0, 1/2)."""

    def __init__(self, d: float) -> None:
        super().__init__()
        if not 0.0 < d < 0.5:
            raise ConfigError(f"Farima memory parameter must lie in (0, 1/2), got {d}")
        self.d = float(d)
        self.alpha = 1.0 - self.d
        self.label = f"farima-d{self.d:g}"

    def _compute_coeffs(self, imax: int) -> np.ndarray:
        a = np.empty(imax + 1)
        a[0] = 1.0
        if imax >= 1:
            i = np.arange(1, imax + 1, dtype=float)
            a[1:] = np.cumprod((i - 1.0 + self.d) / i)
        return a

    def slowvary_at(self, n: int) -> float:
        """Exact L(n) = a_n n^(1-d), the slowly varying part of a_n.

        Tends to 1/Gamma(d) as n grows.
        """
        if n < 1:
            raise ValueError("n must be at least 1")
        return self.coeff(n) * float(n) ** (1.0 - self.d)

    @property
    def asq_total(self) -> float:
        # Sum of squared fractional-differencing weights:
        # Gamma(1 - 2d) / Gamma(1 - d)^2, by Gauss's 2F1(d, d; 1; 1) identity.
        d = self.d
        return math.exp(special.gammaln(1.0 - 2.0 * d) - 2.0 * special.gammaln(1.0 - d))

    def tail_sq_mass(self, lag: int) -> float:
        # a_i <= i^(d-1)/Gamma(d) for i >= 1 (ratio test against the power),
        # so the squared tail is below the integral of x^(2d-2)/Gamma(d)^2.
        if lag < 1:
            raise ValueError("lag must be at least 1")
        d = self.d
        return lag ** (2.0 * d - 1.0) / ((1.0 - 2.0 * d) * math.gamma(d) ** 2)


class PowerLaw(CoefficientScheme):
    """a_i = i^(-alpha) L(i) for i >= 1, with a_0 = 0."""

    def __init__(self, alpha: float, slowvary: Const | LogPower | None = None) -> None:
        super().__init__()
        if not 0.5 < alpha < 1.0:
            raise ConfigError(f"decay exponent must lie in (1/2, 1), got {alpha}")
        self.alpha = float(alpha)
        self.slowvary = slowvary if slowvary is not None else Const(1.0)
        self.label = f"powerlaw-a{self.alpha:g}-{self.slowvary.label}"

    def _compute_coeffs(self, imax: int) -> np.ndarray:
        a = np.zeros(imax + 1)
        if imax >= 1:
            i = np.arange(1, imax + 1, dtype=float)
            a[1:] = i ** (-self.alpha) * np.asarray(self.slowvary(i), dtype=float)
        return a

    def slowvary_at(self, n: int) -> float:
        if n < 1:
            raise ValueError("n must be at least 1")
        return float(self.slowvary(float(n)))

    @property
    def asq_total(self) -> float:
        two_a = 2.0 * self.alpha
        if isinstance(self.slowvary, Const):
            return self.slowvary.c**2 * float(special.zeta(two_a, 1))
        # LogPower: direct partial sum, then the integral of the smooth
        # remainder from the midpoint of the first neglected gap. With
        # lam = 2 alpha - 1 and t = lam (1 + ln x) the tail integral is
        # e^lam lam^(-(2p+1)) Gamma(2p+1, lam (1 + ln M)).
        m = _LOGPOW_PARTIAL_TERMS
        i = np.arange(1, m + 1, dtype=float)
        head = float(np.sum(i ** (-two_a) * np.asarray(self.slowvary(i)) ** 2))
        return head + self._tail_sq_integral(m + 0.5)

    def _tail_sq_integral(self, start: float) -> float:
        """Integral of x^(-2 alpha) L(x)^2 over [start, infinity)."""
        lam = 2.0 * self.alpha - 1.0
        if isinstance(self.slowvary, Const):
            return self.slowvary.c**2 * start**-lam / lam
        p = self.slowvary.p
        shape = 2.0 * p + 1.0
        t0 = lam * (1.0 + math.log(start))
        if shape > 0:
            upper_gamma = special.gammaincc(shape, t0) * math.gamma(shape)
            return math.exp(lam) * lam**-shape * upper_gamma
        # Strongly negative log powers: the closed form needs a positive
        # shape, so integrate numerically on the same substitution.
        val, _ = integrate.quad(
            lambda t: math.exp(-t) * (t / lam) ** (2.0 * p),
            t0,
            np.inf,
            epsabs=1e-14,
            epsrel=1e-12,
            limit=200,
        )
        return math.exp(lam) * val / lam

    def tail_sq_mass(self, lag: int) -> float:
        # The summand is decreasing beyond e^(p/alpha - 1), which every
        # realistic lag already exceeds, so the sum is below the integral
        # starting at the lag itself.
        if lag < 1:
            raise ValueError("lag must be at least 1")
        if isinstance(self.slowvary, LogPower) and self.slowvary.p < 0:
            lam = 2.0 * self.alpha - 1.0
            return float(self.slowvary(float(lag))) ** 2 * lag**-lam / lam
        return self._tail_sq_integral(float(lag))


@dataclass(frozen=True)
class PartialSumTable:
    """Sliding-window sums of coefficients and their squares.

    ``b[j]`` holds the window sum over a_i for i in (j-n, j] intersected with
    i >= 1 (so plain prefix sums a_1 + ... + a_j below j = n), and ``asq[j]``
    the same window applied to a_i^2. ``asq_total`` is the full squared mass
    including a_0.
    """

    n: int
    b: np.ndarray
    asq: np.ndarray
    asq_total: float


def build_partial_sums(scheme: CoefficientScheme, n: int, jmax: int) -> PartialSumTable:
    """Fill the window arrays for indices 0..jmax in one forward pass."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if jmax < n:
        raise ValueError("jmax must be at least n")
    _check_len(jmax + 1, "window-sum table")
    a = scheme.coeffs(jmax)
    prefix = np.cumsum(a)
    prefix -= a[0]  # window sums start at i = 1
    b = prefix.copy()
    b[n:] = prefix[n:] - prefix[:-n]
    prefix_sq = np.cumsum(a * a)
    prefix_sq -= a[0] * a[0]
    asq = prefix_sq.copy()
    asq[n:] = prefix_sq[n:] - prefix_sq[:-n]
    return PartialSumTable(n=n, b=b, asq=asq, asq_total=scheme.asq_total)


@dataclass(frozen=True)
class OrderReport:
    """Scaled suprema of the window sums over the near and far ranges.

    ``head_ratio`` is max over 1 <= i <= 2n of b_{ni} / (i^(1-alpha) L(i));
    ``tail_ratio`` is max over 2n < i <= 10n of b_{ni} / (n (i-n)^(-alpha) L(i)).
    Both stay bounded in n when the windows grow at the expected rate.
    """

    n: int
    head_ratio: float
    tail_ratio: float


def coefficient_order_check(scheme: CoefficientScheme, n: int) -> OrderReport:
    if n < 100:
        raise ValueError("order diagnostics need n >= 100")
    table = build_partial_sums(scheme, n, 10 * n)
    i_head = np.arange(1, 2 * n + 1, dtype=float)
    lf = np.asarray(scheme.slowvary(i_head) if isinstance(scheme, PowerLaw) else 1.0)
    if isinstance(scheme, Farima):
        # For these weights the slowly varying part of the window scale is
        # a_i i^alpha itself; using it keeps the ratio truly dimensionless.
        lf = scheme.coeffs(2 * n)[1:] * i_head**scheme.alpha
    head = float(np.max(table.b[1 : 2 * n + 1] / (i_head ** (1.0 - scheme.alpha) * lf)))
    i_tail = np.arange(2 * n + 1, 10 * n + 1, dtype=float)
    lf_tail = np.asarray(scheme.slowvary(i_tail) if isinstance(scheme, PowerLaw) else 1.0)
    if isinstance(scheme, Farima):
        lf_tail = scheme.coeffs(10 * n)[2 * n + 1 :] * i_tail**scheme.alpha
    tail = float(
        np.max(table.b[2 * n + 1 :] / (n * (i_tail - n) ** (-scheme.alpha) * lf_tail))
    )
    return OrderReport(n=n, head_ratio=head, tail_ratio=tail)


def make_scheme(kind: str, *, d: float | None = None, alpha: float | None = None,
                slowvary: str | Const | LogPower | None = None) -> CoefficientScheme:
    """Build a scheme from plain config values.

    ``slowvary`` accepts the objects themselves or the compact strings used in
    config files: ``const:2.0`` or ``logpow:0.5``.
    """
    key = kind.strip().lower()
    if key == "farima":
        if d is None:
            raise ConfigError("farima scheme needs the memory parameter d")
        if alpha is not None and abs((1.0 - float(d)) - float(alpha)) > 1e-12:
            raise ConfigError("give either d or alpha, not conflicting values of both")
        return Farima(float(d))
    if key == "powerlaw":
        if alpha is None:
            if d is None:
                raise ConfigError("powerlaw scheme needs the decay exponent alpha")
            alpha = 1.0 - float(d)
        return PowerLaw(float(alpha), _parse_slowvary(slowvary))
    raise ConfigError(f"unknown coefficient scheme {kind!r}; choose farima or powerlaw")


def _parse_slowvary(value: str | Const | LogPower | None) -> Const | LogPower:
    if value is None:
        return Const(1.0)
    if isinstance(value, (Const, LogPower)):
        return value
    text = value.strip().lower()
    name, _, arg = text.partition(":")
    try:
        if name == "const":
            return Const(float(arg) if arg else 1.0)
        if name == "logpow":
            return LogPower(float(arg))
    except ValueError as exc:
        raise ConfigError(f"bad slowly varying factor argument in {value!r}") from exc
    raise ConfigError(f"unknown slowly varying factor {value!r}; use const:c or logpow:p")
