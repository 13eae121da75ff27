"""Scalar backends: binary64 floats or mpmath multiprecision floats."""

from __future__ import annotations

import contextlib
import math

import mpmath

from .errors import InvalidParameterError

F64 = "f64"
EXTENDED = "extended"
DEFAULT_DPS = 40


def check_precision(precision: str) -> str:
    if precision not in (F64, EXTENDED):
        raise InvalidParameterError(f"precision must be 'f64' or 'extended', got {precision!r}")
    return precision


@contextlib.contextmanager
def working_precision(precision: str = F64, dps: int = DEFAULT_DPS):
    """Yield a scalar constructor for the requested precision.

    In extended mode the mpmath working precision is raised for the duration
    of the block; values created inside keep their precision afterwards.
    """
    check_precision(precision)
    if precision == F64:
        yield float
    else:
        if dps < 30:
            raise InvalidParameterError("extended precision needs at least 30 digits")
        with mpmath.workdps(dps):
            yield mpmath.mpf


def is_mp(x) -> bool:
    return isinstance(x, mpmath.mpf)


def log(x):
    return mpmath.log(x) if is_mp(x) else math.log(x)


def exp(x):
    return mpmath.exp(x) if is_mp(x) else math.exp(x)


def isfinite(x) -> bool:
    return bool(mpmath.isfinite(x)) if is_mp(x) else math.isfinite(x)
