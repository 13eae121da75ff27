"""Exact decimation RG for det(L + eps) on the Hanoi networks hn3 and hn5.

Each step integrates out the current odd sites.  Those sit in pairs joined by
a long bond, so with on-site weight q the pair block is [[q, -1], [-1, q]] and
the remaining (even) sites pick up renormalized couplings

    q' = q + 2l - 2p^2/(q-1)
    p' = l + p^2/(q-1)
    l' = l0 + p^2/(q^2-1)

where p couples an even site to its ring neighbours at the current scale and l
couples even sites two ring steps apart.  l0 is the bare same-level bond (0 for
hn3, 1 for hn5).  After k-2 steps four sites are left; their 4x4 determinant
is factored by the reflection symmetry so the exact zero mode can be divided
out analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import mpmath

from . import precision as _p
from .errors import InvalidParameterError
from .taylor import Jet, check_order, zeta_from_logdet

VARIANTS = ("hn3", "hn5")
MAX_K = 200


def _l0(variant: str) -> int:
    if variant not in VARIANTS:
        raise InvalidParameterError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return 0 if variant == "hn3" else 1


@dataclass(frozen=True)
class RGStateHanoi:
    q: Jet
    p: Jet
    l: Jet
    lnC: Jet
    # d = (q - 1 - 2p)/eps, carried exactly so the zero mode never has to be
    # recovered from a cancellation
    d: Jet
    mu: int
    k: int
    variant: str


def hanoi_initial_state(k: int, J: int = 4, variant: str = "hn3",
                        precision: str = _p.F64) -> RGStateHanoi:
    l0 = _l0(variant)
    if not isinstance(k, int) or not 2 <= k <= MAX_K:
        raise InvalidParameterError(f"k must be an integer in [2, {MAX_K}]")
    check_order(J)
    _p.check_precision(precision)
    one = mpmath.mpf(1) if precision == _p.EXTENDED else 1.0
    return RGStateHanoi(
        q=Jet.variable(3 * one, J),
        p=Jet.constant(one, J),
        l=Jet.constant(l0 * one, J),
        lnC=Jet.constant(0 * one, J),
        d=Jet.constant(one, J),
        mu=0, k=k, variant=variant,
    )


def hanoi_rg_step(s: RGStateHanoi) -> RGStateHanoi:
    if s.mu > s.k - 3:
        raise InvalidParameterError(f"no RG step left at mu={s.mu} for k={s.k}")
    l0 = _l0(s.variant)
    qm1 = s.q - 1
    qq1 = s.q * s.q - 1
    p2 = s.p * s.p
    r = p2 / qm1
    w = 1 << (s.k - 3 - s.mu)  # half the number of decimated pairs
    return replace(
        s,
        q=s.q + 2 * s.l - 2 * r,
        p=s.l + r,
        l=l0 + p2 / qq1,
        lnC=s.lnC - w * qq1.log(),
        d=s.d * (qm1 + 2 * s.p) / qm1,
        mu=s.mu + 1,
    )


def hanoi_final_factor(s: RGStateHanoi) -> Jet:
    """ln of (residual 4x4 determinant)/eps for the four surviving sites."""
    if s.mu != s.k - 2:
        raise InvalidParameterError("final factor needs the state after k-2 steps")
    # sites 0 and N/2 carry a = q + 2l (plus the closing bond), sites N/4 and 3N/4 carry q
    sign = 1 if s.variant == "hn3" else -1
    antisym = s.q + 4 * s.l + sign      # (x0 - x2) mode
    odd_anti = s.q + 1                  # (x1 - x3) mode
    # symmetric 2x2 block [[q-1, -2p], [-2p, q-1]] = (q-1-2p)(q-1+2p), first factor = eps*d
    return antisym.log() + odd_anti.log() + (s.q - 1 + 2 * s.p).log() + s.d.log()


F64_MAX_K = 30


def resolve_precision(k: int, precision: str | None, dps: int | None) -> tuple[str, int]:
    """binary64 up to k = 30; beyond that q - 1 is too small, so switch to mpmath
    with enough digits to absorb the (2/phi)^mu cancellation."""
    if precision is None:
        precision = _p.F64 if k <= F64_MAX_K else _p.EXTENDED
    if dps is None:
        dps = max(_p.DEFAULT_DPS, 30 + (k + 1) // 2)
    return _p.check_precision(precision), dps


def hanoi_log_det(k: int, J: int = 4, variant: str = "hn3", precision: str | None = None,
                  dps: int | None = None) -> Jet:
    """Jet of ln[det(L + eps)/eps] for hn3/hn5 at N = 2**k."""
    precision, dps = resolve_precision(k, precision, dps)
    with _p.working_precision(precision, dps):
        s = hanoi_initial_state(k, J, variant, precision)
        for _ in range(k - 2):
            s = hanoi_rg_step(s)
        return -2 * s.lnC + hanoi_final_factor(s)


def hanoi_zeta_all(k: int, J: int = 4, variant: str = "hn3", precision: str | None = None,
                   dps: int | None = None) -> list:
    """[I_1, ..., I_J]."""
    precision, dps = resolve_precision(k, precision, dps)
    with _p.working_precision(precision, dps):
        ld = hanoi_log_det(k, J, variant, precision, dps)
        return [zeta_from_logdet(ld, 1 << k, j) for j in range(1, J + 1)]


def hanoi_zeta(k: int, j: int, variant: str = "hn3", J: int | None = None,
               precision: str | None = None, dps: int | None = None):
    J = max(j, 4) if J is None else J
    if not 1 <= j <= J:
        raise InvalidParameterError(f"j must lie in 1..{J}")
    return hanoi_zeta_all(k, J, variant, precision, dps)[j - 1]


def hanoi_eps0_orbit(variant: str, steps: int, dps: int = 50, l_start=None):
    """(q, p, l) at eps = 0 for mu = 0..steps, in extended precision."""
    l0 = _l0(variant)
    with mpmath.workdps(dps):
        q, p = mpmath.mpf(3), mpmath.mpf(1)
        l = mpmath.mpf(l0 if l_start is None else l_start)
        out = [(q, p, l)]
        for _ in range(steps):
            r = p * p / (q - 1)
            q, p, l = q + 2 * l - 2 * r, l + r, l0 + p * p / (q * q - 1)
            out.append((q, p, l))
        return out


@dataclass(frozen=True)
class AlphaEstimate:
    value: float
    digits: float       # estimated correct significant digits
    iterations: int
    converged: bool


def hanoi_alpha_estimate(variant: str = "hn3", digits: int = 12, max_iter: int = 400,
                         dps: int | None = None) -> AlphaEstimate:
    """ln alpha = lim (1/N) ln det'(L) = sum_mu 2^(-2-mu) ln(q_mu^2 - 1) at eps = 0.

    The tail after the last term is bounded by twice that term (weights halve
    while ln(q^2 - 1) grows at most linearly), which gives the digit estimate.
    """
    l0 = _l0(variant)
    dps = dps or digits + 20
    with mpmath.workdps(dps):
        q, p, l = mpmath.mpf(3), mpmath.mpf(1), mpmath.mpf(l0)
        total = mpmath.mpf(0)
        term = mpmath.mpf(1)
        it = 0
        for it in range(max_iter):
            g = q * q - 1
            if g <= 0:
                break
            term = mpmath.ldexp(mpmath.log(g), -2 - it)
            total += term
            r = p * p / (q - 1)
            q, p, l = q + 2 * l - 2 * r, l + r, l0 + p * p / g
            if abs(term) < mpmath.mpf(10) ** (-digits - 3):
                break
        err = 2 * abs(term) / abs(total)
        got = float(-mpmath.log10(err)) if err > 0 else float(dps)
        return AlphaEstimate(float(mpmath.exp(total)), min(got, dps - 5), it + 1, got >= digits)


def hanoi_alpha(variant: str = "hn3", digits: int = 12):
    with mpmath.workdps(digits + 20):
        est = hanoi_alpha_estimate(variant, digits)
        return est.value


GOLDEN = (1 + math.sqrt(5)) / 2


def hanoi_spectral_dimension(variant: str) -> float:
    """d_s of the Hanoi networks: 2/(2 - log2 phi) for hn3, 2 for hn5."""
    if _l0(variant) == 0:
        return 2 / (2 - math.log2(GOLDEN))
    return 2.0
