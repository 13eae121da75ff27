import math

import numpy as np
import pytest

from rgzeta import lambda_shoot as ls
from rgzeta.errors import BracketError, InvalidParameterError, PoleError

CASES = [("hn3", k, None) for k in range(2, 11)] + [("hn5", k, None) for k in range(3, 10)] + \
        [("mk", k, b) for b, k in [(1, 3), (1, 4), (2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)]]


@pytest.mark.parametrize("variant,k,b", CASES)
def test_lambda_max_matches_dense(dense, variant, k, b):
    r = ls.shoot(variant, k, b, tol=1e-14)
    want = dense(variant, k, b).lambda_max
    assert abs(r.lambda_max - want) <= 1e-12 * want
    assert r.achieved_tol <= 1e-14 * max(1, want)


@pytest.mark.parametrize("variant,k,b", [("hn3", 6, None), ("hn5", 6, None), ("mk", 3, 2), ("mk", 2, 3)])
def test_count_above_is_exact(dense, variant, k, b):
    ev = dense(variant, k, b).eigenvalues
    mids = (ev[1:] + ev[:-1]) / 2
    probes = np.concatenate([mids[np.diff(ev) > 1e-8], [-0.5, ev[-1] + 0.5]])
    for lam in probes:
        assert ls.count_above(variant, float(lam), k, b) == int(np.sum(ev > lam))


@pytest.mark.parametrize("variant,k,b", [("hn3", 7, None), ("hn5", 7, None), ("mk", 3, 3)])
def test_constraint_vanishes_at_lambda_max(dense, variant, k, b):
    lam = dense(variant, k, b).lambda_max
    scale = abs(ls.constraint_residual(variant, lam + 0.1, k, b))
    assert abs(ls.constraint_residual(variant, lam, k, b)) < 1e-9 * max(1, scale)


@pytest.mark.parametrize("k", [6, 8, 10])
def test_alternate_hn3_closure_roots_sit_below_lambda_max(dense, k):
    from scipy.optimize import brentq
    ev = dense("hn3", k).eigenvalues
    f = lambda x: ls.constraint_residual("hn3", x, k, convention=ls.ALTERNATE)
    xs = np.linspace(5.0, 6.0, 4001)
    v = [f(x) for x in xs]
    roots = [brentq(f, xs[i], xs[i + 1]) for i in range(len(xs) - 1)
             if np.sign(v[i]) != np.sign(v[i + 1]) and abs(v[i]) < 5 and abs(v[i + 1]) < 5]
    top = max(roots)
    assert np.min(np.abs(ev[:-1] - top)) < 1e-9   # a genuine eigenvalue ...
    assert ev[-1] - top > 1e-7                    # ... but never the largest one


def _hn5_alternative(lam, k):
    """Reading in which r is renormalized by l at every step."""
    q, r, p, l = 3 - lam, 2 * k - lam, 1.0, 1.0
    for _ in range(k - 2):
        d1, d2, pp = q - 1, q * q - 1, p * p
        q, r, p, l = q + 2 * l - 2 * pp / d1, r + 2 * l - 2 * pp * q / d2, l + pp / d1, 1 + pp / d2
    return r + 2 * l, r


@pytest.mark.parametrize("k", [4, 6, 8])
def test_hn5_readings(dense, k):
    ev = dense("hn5", k).eigenvalues
    # r enters only at termination: exact root at lambda_N
    assert abs(ls.constraint_residual("hn5", ev[-1], k)) < 1e-12
    # r renormalized by l each step: no root anywhere near the top of the spectrum
    xs = np.linspace(ev[-1] - 3, ev[-1] + 0.5, 2001)
    for which in (0, 1):
        f = np.array([_hn5_alternative(x, k)[which] for x in xs])
        assert (np.sign(f) == np.sign(f[0])).all()


def test_small_hn3_values():
    assert abs(ls.shoot("hn3", 2).lambda_max - 4) < 1e-12
    assert abs(ls.shoot("hn3", 3).lambda_max - (4 + math.sqrt(2))) < 1e-12


def test_extended_precision_agrees():
    a = ls.shoot("hn3", 30).lambda_max
    b = ls.shoot("hn3", 30, precision="extended", tol=1e-20, dps=40).lambda_max
    assert abs(a - b) < 1e-13


def test_converges_with_depth():
    v = [ls.shoot("hn3", k).lambda_max for k in (30, 40, 50)]
    assert abs(v[2] - v[1]) < 1e-13 and abs(v[1] - v[0]) < 1e-9


def test_pole_is_reported():
    # lam = 2 makes q - 1 vanish on the first step
    s = ls.initial_state("hn3", 2.0, 5)
    with pytest.raises(PoleError) as info:
        ls.step(s)
    assert info.value.step == 0 and s.poles == [0]
    # the bracketing solver steps past exact poles
    assert ls.count_above("hn3", 2.0 + 1e-12, 5) >= 1


def test_bracket_errors():
    with pytest.raises(BracketError):
        ls.shoot("hn3", 6, bracket=(0.0, 5.0))
    with pytest.raises(BracketError):
        ls.shoot("hn3", 6, bracket=(6.0, 7.0))
    with pytest.raises(BracketError):
        ls.shoot("hn3", 6, bracket=(3.0, 3.0))
    with pytest.raises(InvalidParameterError):
        ls.shoot("hn3", 6, tol=1e-20)
    with pytest.raises(InvalidParameterError):
        ls.shoot("mk", 3)
    with pytest.raises(InvalidParameterError):
        ls.shoot("hn7", 3)


def test_series_collects_errors():
    rows = ls.lambda_max_series("hn3", [1, 3, 4])
    assert isinstance(rows[0][1], InvalidParameterError)
    assert abs(rows[1][1].lambda_max - (4 + math.sqrt(2))) < 1e-12
