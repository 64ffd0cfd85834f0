from __future__ import annotations

import numpy as np
import pytest

from longmem.coefficients import CoefficientScheme
from longmem.process import SamplePath


class WhiteNoise(CoefficientScheme):
    """a_0 = 1 and nothing else, so X_k = eps_k with textbook closed forms.

    The nominal decay exponent only feeds normalization formulas; the
    coefficients themselves are exactly the identity filter.
    """

    def __init__(self, alpha: float = 0.75):
        super().__init__()
        self.alpha = alpha
        self.label = "white-noise-stub"

    def _compute_coeffs(self, imax: int) -> np.ndarray:
        a = np.zeros(imax + 1)
        a[0] = 1.0
        return a

    def slowvary_at(self, n: int) -> float:
        return 1.0

    @property
    def asq_total(self) -> float:
        return 1.0

    def tail_sq_mass(self, lag: int) -> float:
        return 0.0


class FlatCoeff(CoefficientScheme):
    """Every coefficient equal to one; used where tests need a_n = 1."""

    def __init__(self):
        super().__init__()
        self.alpha = 0.75
        self.label = "flat-stub"

    def _compute_coeffs(self, imax: int) -> np.ndarray:
        return np.ones(imax + 1)

    def slowvary_at(self, n: int) -> float:
        return 1.0

    @property
    def asq_total(self) -> float:
        return float("inf")

    def tail_sq_mass(self, lag: int) -> float:
        return float("inf")


def build_stub_path(x, scheme=None, model=None) -> SamplePath:
    """SamplePath with hand-chosen observations and consistent prefix sums."""
    x = np.asarray(x, dtype=float)
    n = x.size
    s = np.concatenate([[0.0], np.cumsum(x)])
    return SamplePath(
        n=n,
        m_lag=n,
        eps=np.zeros(2 * n),
        x=x,
        s=s,
        model=model,
        scheme=scheme if scheme is not None else FlatCoeff(),
    )


@pytest.fixture
def white_noise():
    return WhiteNoise()


# --------------------------------------------------------------------------
# acceptance-suite verdict table

_CRITERION_RESULTS: dict[int, tuple[bool, str]] = {}


def _record_criterion(num: int, ok: bool, detail: str) -> None:
    _CRITERION_RESULTS[num] = (bool(ok), detail)


@pytest.fixture
def criterion():
    """Callable (num, ok, detail) that logs one acceptance verdict.

    Tests call it right before their final assert so that the verdict table
    at the end of the run shows every criterion, failed ones included.
    """
    return _record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERION_RESULTS):
        ok, detail = _CRITERION_RESULTS[num]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:02d}: {verdict} ({detail})")
