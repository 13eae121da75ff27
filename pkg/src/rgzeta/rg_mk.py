"""Exact decimation RG for det(L + eps) on Migdal-Kadanoff diamond lattices (l = 2).

Full mode keeps one on-site weight per remaining hierarchy level.  At step mu
the lowest-level vertices (those created last) are integrated out.  Each sits
between the two ends of a bond.  With q_i the weight of a vertex i levels above
the current bottom and p the bond coupling,

    q'_{i-1} = b (q_i - 2 p^2 / q_0),    p' = b p^2 / q_0,

starting from q_i = 2 + eps / b^i (i < k), q_k = 2 + 2 eps / b^k and p = 1.  All
level weights share the same eps-free part 2s, so q_i = 2s + eps / b^i exactly,
which lets the zero mode of the final 2x2 block be tracked without
cancellation.

Reduced mode is the rescaled single-weight recursion q' = q - 2p^2/q,
p' = p^2/q with q_0 = 2 + eps.  It is the determinant of L + eps W with
W = b^level on every vertex (b^k / 2 on the two top sites), so its reduced
log-determinant exceeds the full one by exactly ln(sum W / N).  It reproduces
scaling exponents but not the exact eps-dependence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import mpmath

from . import precision as _p
from .errors import InvalidParameterError
from .netgen import mk_vertex_count
from .taylor import Jet, check_order, zeta_from_logdet

FULL = "full"
REDUCED = "reduced"


@dataclass(frozen=True)
class RGStateMK:
    q_levels: tuple   # full: weights by level above bottom; reduced: (q_mu,)
    p: Jet
    lnC: Jet          # ln det contribution so far is -2 lnC
    d: Jet            # full: (s - p)/eps ; reduced: (q/2 - p)/eps
    mu: int
    b: int
    k: int
    mode: str


def _check(b, k):
    if not isinstance(b, int) or b < 1:
        raise InvalidParameterError(f"b must be a positive integer, got {b!r}")
    if not isinstance(k, int) or k < 1:
        raise InvalidParameterError(f"k must be a positive integer, got {k!r}")


def decimated_count(b: int, k: int, mu: int) -> int:
    """Number of vertices removed at step mu (created by replacement k - mu)."""
    return b * (2 * b) ** (k - 1 - mu)


def mk_initial_state(b: int, k: int, J: int = 4, mode: str = FULL,
                     precision: str = _p.F64) -> RGStateMK:
    _check(b, k)
    check_order(J)
    _p.check_precision(precision)
    one = mpmath.mpf(1) if precision == _p.EXTENDED else 1.0
    eps = Jet.variable(0 * one, J)
    two = Jet.constant(2 * one, J)
    if mode == FULL:
        levels = tuple(two + eps * (one / b ** i) for i in range(k)) + (two + eps * (2 * one / b ** k),)
        d = Jet.constant(0 * one, J)
    elif mode == REDUCED:
        levels = (two + eps,)
        d = Jet.constant(one / 2, J)
    else:
        raise InvalidParameterError(f"mode must be 'full' or 'reduced', got {mode!r}")
    return RGStateMK(levels, Jet.constant(one, J), Jet.constant(0 * one, J), d, 0, b, k, mode)


def mk_rg_step_full(s: RGStateMK) -> RGStateMK:
    if s.mode != FULL:
        raise InvalidParameterError("state is not in full mode")
    if s.mu >= s.k:
        raise InvalidParameterError("no RG step left")
    b = s.b
    q0 = s.q_levels[0]
    p2 = s.p * s.p
    r = 2 * p2 / q0
    levels = tuple(b * (qi - r) for qi in s.q_levels[1:])
    sym = (q0 - Jet.variable(q0[0] * 0, q0.order)) / 2  # q0 = 2s + eps
    d = b * (2 * s.d * (sym + s.p) + sym) / q0
    n_mu = decimated_count(b, s.k, s.mu)
    return replace(s, q_levels=levels, p=b * p2 / q0, lnC=s.lnC - (n_mu / 2) * q0.log(),
                   d=d, mu=s.mu + 1)


def mk_rg_step_reduced(s: RGStateMK) -> RGStateMK:
    if s.mode != REDUCED:
        raise InvalidParameterError("state is not in reduced mode")
    if s.mu >= s.k:
        raise InvalidParameterError("no RG step left")
    (q,) = s.q_levels
    p2 = s.p * s.p
    n_mu = decimated_count(s.b, s.k, s.mu)
    # unrescaled weight of a decimated vertex is b^mu q
    lnC = s.lnC - (n_mu / 2) * (q.log() + s.mu * math.log(s.b))
    return replace(s, q_levels=(q - 2 * p2 / q,), p=p2 / q, lnC=lnC,
                   d=s.d * (q + 2 * s.p) / q, mu=s.mu + 1)


def mk_final_factor(s: RGStateMK) -> Jet:
    """ln of the final 2x2 determinant over eps."""
    if s.mu != s.k:
        raise InvalidParameterError("final factor needs the state after k steps")
    (q,) = s.q_levels
    if s.mode == FULL:
        # top pair [[q/2, -p], [-p, q/2]] with q/2 - p = eps (d + 1)
        return (s.d + 1).log() + (q / 2 + s.p).log()
    return (2 * s.k * math.log(s.b)) + s.d.log() + (q / 2 + s.p).log()


def mk_log_det(b: int, k: int, J: int = 4, mode: str = FULL, precision: str = _p.F64,
               dps: int = _p.DEFAULT_DPS) -> Jet:
    """Jet of ln[det(L + eps)/eps] (full mode) or ln[det(L + eps W)/eps] (reduced)."""
    with _p.working_precision(precision, dps):
        s = mk_initial_state(b, k, J, mode, precision)
        step = mk_rg_step_full if mode == FULL else mk_rg_step_reduced
        for _ in range(k):
            s = step(s)
        return -2 * s.lnC + mk_final_factor(s)


def mk_zeta_all(b: int, k: int, J: int = 4, mode: str = FULL, precision: str = _p.F64,
                dps: int = _p.DEFAULT_DPS) -> list:
    with _p.working_precision(precision, dps):
        ld = mk_log_det(b, k, J, mode, precision, dps)
        n = mk_vertex_count(b, k)
        return [zeta_from_logdet(ld, n, j) for j in range(1, J + 1)]


def mk_zeta(b: int, k: int, j: int, J: int | None = None, mode: str = FULL,
            precision: str = _p.F64, dps: int = _p.DEFAULT_DPS):
    J = max(j, 4) if J is None else J
    if not 1 <= j <= J:
        raise InvalidParameterError(f"j must lie in 1..{J}")
    return mk_zeta_all(b, k, J, mode, precision, dps)[j - 1]


@dataclass(frozen=True)
class MKAlphaEstimate:
    value: float
    digits: float
    iterations: int
    converged: bool


def mk_alpha_estimate(b: int, digits: int = 12, max_iter: int = 400) -> MKAlphaEstimate:
    """ln alpha = lim (1/N) ln det'(L) at eps = 0 from the reduced recursion.

    With n_mu = b (2b)^(k-1-mu) vertices of weight b^mu q_mu removed at step mu
    and N ~ b (2b)^k / (2b - 1), the limit is
    (2b-1)/(2b) * sum_mu (2b)^(-mu) ln(b^mu q_mu).
    """
    _check(b, 1)
    with mpmath.workdps(digits + 20):
        q, p = mpmath.mpf(2), mpmath.mpf(1)
        x = mpmath.mpf(1) / (2 * b)
        total = mpmath.mpf(0)
        term = mpmath.mpf(1)
        it = 0
        for it in range(max_iter):
            term = x ** it * (it * mpmath.log(b) + mpmath.log(q))
            total += term
            q, p = q - 2 * p * p / q, p * p / q
            if abs(term) < mpmath.mpf(10) ** (-digits - 3):
                break
        total *= (2 * b - 1) * x
        err = 2 * abs(term) / max(abs(total), mpmath.mpf(10) ** (-digits - 20))
        got = float(-mpmath.log10(err)) if err > 0 else float(digits + 15)
        return MKAlphaEstimate(float(mpmath.exp(total)), got, it + 1, got >= digits)


def mk_alpha(b: int, digits: int = 12) -> float:
    return mk_alpha_estimate(b, digits).value


def mk_spectral_dimension(b: float) -> float:
    if b < 1:
        raise InvalidParameterError("b must be >= 1")
    return 1 + math.log2(b)
