"""Exception types shared across the package."""

from __future__ import annotations


class LongmemError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(LongmemError, ValueError):
    """A parameter or configuration value is out of its documented domain."""


class ResourceError(LongmemError, RuntimeError):
    """A request would exceed an explicit memory or size budget."""


class DegeneratePathError(LongmemError, ArithmeticError):
    """A statistic's denominator vanished (for instance an all-zero path)."""


class DivergenceError(LongmemError, RuntimeError):
    """An iterative search exhausted its scan range without bracketing."""
