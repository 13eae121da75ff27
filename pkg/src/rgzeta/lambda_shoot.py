"""Largest Laplacian eigenvalue from RG recursions of the eigenvalue equation.

Decimating L - lam on the same hierarchy as the determinant RG gives scalar
recursions.  The surviving four (Hanoi) or two (MK) sites close the system;
the symmetric-mode closure is the termination constraint whose roots are
eigenvalues.

The decimation is a block LDL^T factorization of L - lam, so by Sylvester's
law the number of eigenvalues above lam equals the number of positive pivots
collected on the way.  That count brackets lam_N robustly.  The constraint is
then solved by safeguarded regula falsi inside the bracket.

Termination conventions (checked against dense spectra):
  hn3  q2 + 2l + 1 = 0
  hn5  r + 2l = 0
  mk   q/2 - p = 0
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import mpmath

from . import precision as _p
from .errors import BracketError, ConvergenceError, InvalidParameterError, PoleError

VARIANTS = ("hn3", "hn5", "mk")
CORRECTED = "corrected"
ALTERNATE = "alternate"


@dataclass
class ShootState:
    variant: str
    params: tuple
    step: int
    k: int
    b: int | None = None
    above: int = 0            # eigenvalues above lam seen so far
    poles: list = field(default_factory=list)


def _pos2(x, y, z) -> int:
    """Number of positive eigenvalues of [[x, y], [y, z]]."""
    det = x * z - y * y
    if det > 0:
        return 2 if x > 0 else 0
    if det < 0:
        return 1
    return 1 if x + z > 0 else 0


def _check(variant, k, b):
    if variant not in VARIANTS:
        raise InvalidParameterError(f"variant must be one of {VARIANTS}")
    if variant == "mk":
        if not isinstance(b, int) or b < 1:
            raise InvalidParameterError("mk needs an integer b >= 1")
        if not isinstance(k, int) or k < 1:
            raise InvalidParameterError("mk needs k >= 1")
    elif not isinstance(k, int) or k < 2:
        raise InvalidParameterError("Hanoi networks need k >= 2")


def initial_state(variant: str, lam, k: int, b: int | None = None) -> ShootState:
    _check(variant, k, b)
    one = lam * 0 + 1
    if variant == "hn3":
        params = (3 - lam, 3 - lam, one, 0 * one)
    elif variant == "hn5":
        params = (3 - lam, 2 * k - lam, one, one)
    else:
        q = tuple(2 - lam / b ** i for i in range(k)) + (2 - 2 * lam / b ** k,)
        params = (q, one)
    return ShootState(variant, params, 0, k, b)


def step(s: ShootState) -> ShootState:
    """One decimation step; pole crossings raise PoleError and are logged in s.poles."""
    k, mu = s.k, s.step
    if s.variant == "hn3":
        q1, q2, p, l = s.params
        d1, d2 = q1 - 1, q1 * q1 - 1
        if d1 == 0 or d2 == 0:
            s.poles.append(mu)
            raise PoleError(f"q1 - 1 or q1^2 - 1 vanishes at step {mu}", mu)
        s.above += (1 << (k - 2 - mu)) * (int(d1 > 0) + int(q1 + 1 > 0))
        pp = p * p
        s.params = (q2 - 2 * pp / d1, q2 - 2 * pp * q1 / d2, l + pp / d1, pp / d2)
    elif s.variant == "hn5":
        q, r, p, l = s.params
        d1, d2 = q - 1, q * q - 1
        if d1 == 0 or d2 == 0:
            s.poles.append(mu)
            raise PoleError(f"q - 1 or q^2 - 1 vanishes at step {mu}", mu)
        s.above += (1 << (k - 2 - mu)) * (int(d1 > 0) + int(q + 1 > 0))
        pp = p * p
        s.params = (q + 2 * l - 2 * pp / d1, r - 2 * pp * q / d2, l + pp / d1, 1 + pp / d2)
    else:
        qs, p = s.params
        q0 = qs[0]
        if q0 == 0:
            s.poles.append(mu)
            raise PoleError(f"q0 vanishes at step {mu}", mu)
        s.above += s.b * (2 * s.b) ** (k - 1 - mu) * int(q0 > 0)
        r = 2 * p * p / q0
        s.params = (tuple(qi - r for qi in qs[1:]), p * p / q0)
    s.step += 1
    return s


def _steps(variant, k):
    return k if variant == "mk" else k - 2


def evolve(variant: str, lam, k: int, b: int | None = None) -> ShootState:
    s = initial_state(variant, lam, k, b)
    for _ in range(_steps(variant, k)):
        step(s)
    return s


def _closure(s: ShootState):
    """(symmetric-mode residual, alternate closure residual, positive pivots of the final block)."""
    if s.variant == "hn3":
        q1, q2, p, l = s.params
        a, c = q2, -(2 * l + 1)
        extra = int(a - c > 0) + int(q1 + 1 > 0) + _pos2(a + c, -2 * p, q1 - 1)
        return q2 + 2 * l + 1, q2 - 2 * l + 1, extra
    if s.variant == "hn5":
        q, r, p, l = s.params
        extra = int(r + 2 * l > 0) + int(q + 1 > 0) + _pos2(r - 2 * l, -2 * p, q - 1)
        return r + 2 * l, r + 2 * l, extra
    (q,), p = s.params
    extra = int(q / 2 - p > 0) + int(q / 2 + p > 0)
    return q / 2 - p, q / 2 + p, extra


def constraint_residual(variant: str, lam, k: int, b: int | None = None,
                        convention: str = CORRECTED):
    """Termination constraint after the full recursion; zero at eigenvalues of its mode."""
    s = evolve(variant, lam, k, b)
    fixed, alt, _ = _closure(s)
    if convention == CORRECTED:
        return fixed
    if convention == ALTERNATE:
        return alt
    raise InvalidParameterError("convention must be 'corrected' or 'alternate'")


def count_above(variant: str, lam, k: int, b: int | None = None) -> int:
    """Number of Laplacian eigenvalues strictly greater than lam (Sylvester inertia)."""
    s = evolve(variant, lam, k, b)
    return s.above + _closure(s)[2]


def upper_bound(variant: str, k: int, b: int | None = None) -> float:
    """Degree bound lam_N <= max over edges of d_u + d_v."""
    if variant == "hn3":
        return 6.0
    if variant == "hn5":
        return 4.0 * k
    dmax = max(b ** k, 2 * b ** (k - 1)) if k >= 1 else 1
    return 2.0 * dmax


@dataclass(frozen=True)
class ShootResult:
    lambda_max: float
    iterations: int
    achieved_tol: float
    residual: float
    method: str           # "regula-falsi" or "bisection"
    seconds: float


def _probe(variant, lam, k, b):
    """(eigenvalues above lam, symmetric-mode residual or None at a pole)."""
    try:
        s = evolve(variant, lam, k, b)
    except PoleError:
        # exact pole: the count is taken just above it, the residual is unusable
        lam2 = lam + abs(lam) * 8 * _ulp(lam) + 8 * _ulp(lam)
        s = evolve(variant, lam2, k, b)
        return s.above + _closure(s)[2], None
    fixed, _, extra = _closure(s)
    return s.above + extra, fixed


def _ulp(x):
    return mpmath.eps if _p.is_mp(x) else 2.220446049250313e-16


def shoot(variant: str, k: int, b: int | None = None, bracket=None, tol: float = 1e-14,
          max_iter: int = 2000, precision: str = _p.F64, dps: int = _p.DEFAULT_DPS) -> ShootResult:
    """Largest eigenvalue of L in the bracket (default: [0, degree bound]).

    The eigenvalue count keeps [lo, hi] a valid bracket of lam_N at every
    iteration.  Trial points come from regula falsi on the constraint when it
    changes sign over the bracket, otherwise (or after two one-sided updates)
    from bisection.
    """
    _check(variant, k, b)
    t0 = time.perf_counter()
    with _p.working_precision(precision, dps) as num:
        lo, hi = (num(0), num(upper_bound(variant, k, b))) if bracket is None else map(num, bracket)
        if not lo < hi:
            raise BracketError("bracket must satisfy lo < hi")
        floor = 4 * _ulp(hi)
        if tol < floor:
            raise InvalidParameterError(f"tol {tol} below precision floor {floor}")
        c_hi, f_hi = _probe(variant, hi, k, b)
        c_lo, f_lo = _probe(variant, lo, k, b)
        if c_hi != 0:
            raise BracketError(f"upper end {hi} is not above the largest eigenvalue")
        if c_lo == 0:
            raise BracketError(f"no eigenvalue above the lower end {lo}")

        it, rf_steps, last_side = 0, 0, 0
        while hi - lo > tol * max(1, abs(hi)):
            it += 1
            if it > max_iter:
                raise ConvergenceError("bracket did not shrink within budget", float((lo + hi) / 2), it)
            x = (lo + hi) / 2
            # the constraint root equals lam_N only once the bracket holds a single eigenvalue cluster
            if f_lo is not None and f_hi is not None and f_lo * f_hi < 0 and last_side != 2 and last_side != -2:
                cand = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
                if lo < cand < hi:
                    x = cand
                    rf_steps += 1
            c_x, f_x = _probe(variant, x, k, b)
            if c_x >= 1:
                lo, f_lo = x, f_x
                last_side = last_side - 1 if last_side <= 0 else -1
            else:
                hi, f_hi = x, f_x
                last_side = last_side + 1 if last_side >= 0 else 1
        root = (lo + hi) / 2
        _, r_val = _probe(variant, root, k, b)
        method = "regula-falsi" if rf_steps else "bisection"
        return ShootResult(float(root), it, float(hi - lo), float("nan") if r_val is None else float(r_val),
                           method, time.perf_counter() - t0)


def lambda_max_series(variant: str, k_range, b: int | None = None, tol: float = 1e-13,
                      precision: str = _p.F64) -> list:
    """[(k, lam_N, result-or-error)] for every k; errors are collected, not raised."""
    rows = []
    for k in k_range:
        try:
            rows.append((k, shoot(variant, k, b, tol=tol, precision=precision)))
        except Exception as exc:  # aggregated per k
            rows.append((k, exc))
    return rows
