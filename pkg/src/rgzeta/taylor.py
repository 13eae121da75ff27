"""Truncated Taylor jets in a single small parameter eps.

A jet of order J stores c_0 .. c_J of f(eps) = sum_n c_n eps**n.  Products are
truncated Cauchy products, so every operation is exact to order J.  The
coefficient type is whatever scalar the caller supplies (float or mpmath mpf).
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from . import precision as _p
from .errors import InvalidParameterError, OrderMismatchError, SingularJetError

MAX_ORDER = 8
_TINY = 2.2250738585072014e-308  # smallest normal binary64


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable):
        c = tuple(coeffs)
        if not c:
            raise InvalidParameterError("a jet needs at least the constant term")
        if len(c) - 1 > MAX_ORDER:
            raise InvalidParameterError(f"jet order {len(c) - 1} exceeds {MAX_ORDER}")
        self.c = c

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        zero = value * 0
        return cls((value,) + (zero,) * order)

    @classmethod
    def variable(cls, value, order: int) -> "Jet":
        """value + eps."""
        if order == 0:
            return cls((value,))
        one = value * 0 + 1
        zero = value * 0
        return cls((value, one) + (zero,) * (order - 1))

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def __repr__(self):
        return f"Jet({list(self.c)!r})"

    def __len__(self):
        return len(self.c)

    def __getitem__(self, n):
        return self.c[n]

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise OrderMismatchError(f"orders {self.order} and {other.order} differ")
            return other
        return Jet.constant(self.c[0] * 0 + other, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(a + b for a, b in zip(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-a for a in self.c)

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet(a - b for a, b in zip(self.c, o.c))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(a * other for a in self.c)
        o = self._coerce(other)
        a, b = self.c, o.c
        return Jet(sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(len(a)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            if other == 0:
                raise SingularJetError("division by zero scalar")
            return Jet(a / other for a in self.c)
        o = self._coerce(other)
        b = o.c
        if b[0] == 0 or not _p.isfinite(b[0]):
            raise SingularJetError("divisor has zero constant term")
        q = []
        for n, an in enumerate(self.c):
            s = an - sum(q[i] * b[n - i] for i in range(n))
            q.append(s / b[0])
        return Jet(q)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise InvalidParameterError("only non-negative integer powers are supported")
        out = Jet.constant(self.c[0] * 0 + 1, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def log(self) -> "Jet":
        """Natural log; needs a strictly positive, non-underflowed constant term."""
        a = self.c
        a0 = a[0]
        if not _p.isfinite(a0) or a0 <= 0 or (not _p.is_mp(a0) and a0 < _TINY):
            raise SingularJetError(f"log of jet with constant term {a0!r}")
        b = [_p.log(a0)]
        for n in range(1, len(a)):
            s = a[n] - sum(k * b[k] * a[n - k] for k in range(1, n)) / n
            b.append(s / a0)
        return Jet(b)

    def derivative(self, j: int):
        """d^j f / d eps^j at eps = 0, i.e. j! c_j."""
        if not 0 <= j <= self.order:
            raise InvalidParameterError(f"derivative order {j} outside 0..{self.order}")
        return math.factorial(j) * self.c[j]

    def value(self):
        return self.c[0]

    def to_float(self) -> "Jet":
        return Jet(float(a) for a in self.c)


# functional spellings
def jet_add(a: Jet, b) -> Jet:
    return a + b


def jet_mul(a: Jet, b) -> Jet:
    return a * b


def jet_div(a: Jet, b) -> Jet:
    return a / b


def jet_ln(a: Jet) -> Jet:
    return a.log()


def derivative_coeff(a: Jet, j: int):
    return a.derivative(j)


def zeta_from_logdet(logdet: Jet, n: int, j: int):
    """I_j = (1/N) (-1)^(j-1)/(j-1)! d^j/deps^j ln[det(L+eps)/eps] at eps=0."""
    if j < 1:
        raise InvalidParameterError("zeta index j must be >= 1")
    sign = 1 if j % 2 == 1 else -1
    return sign * logdet.derivative(j) / (math.factorial(j - 1) * n)


def check_order(J: int) -> int:
    if not isinstance(J, int) or not 1 <= J <= MAX_ORDER:
        raise InvalidParameterError(f"jet order must be an integer in 1..{MAX_ORDER}")
    return J


def coeffs(j: Jet) -> Sequence:
    return j.c
