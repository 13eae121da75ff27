"""Exponent fits, rank-spectrum fits and the synchronizability report."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import lambda_shoot as shoot, netgen, rg_hanoi, rg_mk, spectrum
from .errors import DomainError, InvalidParameterError

log = logging.getLogger(__name__)

LOG_LOG = "log-log"
LIN_LOG = "lin-log"
LIN_LIN = "lin-lin"


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual_rms: float
    n_points: int
    axes: str

    def as_dict(self) -> dict:
        return asdict(self)


def _lstsq(x, y, axes) -> FitResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        raise InvalidParameterError("a fit needs at least 3 points")
    if np.ptp(x) == 0:
        raise InvalidParameterError("degenerate abscissae")
    A = np.column_stack([x, np.ones_like(x)])
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - (slope * x + icpt)
    return FitResult(float(slope), float(icpt), float(np.sqrt(np.mean(res ** 2))), len(x), axes)


def fit_powerlaw(points) -> FitResult:
    """value ~ N^slope: least squares on (ln N, ln value)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidParameterError("points must be (N, value) pairs")
    if np.any(pts <= 0):
        raise DomainError("power-law fit needs positive N and values")
    return _lstsq(np.log(pts[:, 0]), np.log(pts[:, 1]), LOG_LOG)


def fit_linear(points, axes: str = LIN_LIN) -> FitResult:
    """Ordinary least squares on the given (x, y) pairs."""
    pts = np.asarray(points, dtype=float)
    return _lstsq(pts[:, 0], pts[:, 1], axes)


def fit_loglinear(points) -> FitResult:
    """value ~ a + c ln N."""
    pts = np.asarray(points, dtype=float)
    if np.any(pts[:, 0] <= 0):
        raise DomainError("N must be positive")
    return _lstsq(np.log(pts[:, 0]), pts[:, 1], LIN_LOG)


def fit_powerlaw_differenced(points) -> FitResult:
    """Exponent of value ~ A N^slope + const from successive differences.

    For sizes in geometric progression the increments scale with the same
    exponent while the additive constant drops out exactly.
    """
    pts = np.asarray(points, dtype=float)
    ratios = pts[1:, 0] / pts[:-1, 0]
    if len(pts) < 4 or not np.allclose(ratios, ratios[0], rtol=1e-9, atol=0):
        raise InvalidParameterError("differenced fit needs >= 4 sizes in geometric progression")
    diffs = np.abs(np.diff(pts[:, 1]))
    return fit_powerlaw(np.column_stack([pts[1:, 0], diffs]))


@dataclass(frozen=True)
class GrowthComparison:
    power: FitResult
    logarithmic: FitResult
    power_rms: float        # residual of ln(value) under each model
    log_rms: float
    winner: str             # "power" or "log"


def compare_growth(points) -> GrowthComparison:
    """Decide between value ~ N^a and value ~ a + c ln N.

    Both residuals are measured on ln(value) so they are comparable.
    """
    pts = np.asarray(points, dtype=float)
    pw = fit_powerlaw(pts)
    lg = fit_loglinear(pts)
    lnN, lnv = np.log(pts[:, 0]), np.log(pts[:, 1])
    pw_rms = float(np.sqrt(np.mean((lnv - (pw.slope * lnN + pw.intercept)) ** 2)))
    pred = lg.slope * lnN + lg.intercept
    lg_rms = float(np.sqrt(np.mean((lnv - np.log(pred)) ** 2))) if np.all(pred > 0) else math.inf
    return GrowthComparison(pw, lg, pw_rms, lg_rms, "log" if lg_rms < pw_rms else "power")


def burn_in(rows, skip: int = 3):
    return list(rows)[skip:]


# ---------------------------------------------------------------- zeta tables

def zeta_rg(family: str, k: int, J: int = 4, b: int | None = None, precision: str | None = None) -> list:
    if family in rg_hanoi.VARIANTS:
        return [float(x) for x in rg_hanoi.hanoi_zeta_all(k, J, family, precision)]
    if family == "mk":
        if b is None:
            raise InvalidParameterError("mk needs b")
        prec = precision or "f64"
        return [float(x) for x in rg_mk.mk_zeta_all(b, k, J, precision=prec)]
    raise InvalidParameterError(f"unknown family {family!r}")


def vertex_count(family: str, k: int, b: int | None = None) -> int:
    return netgen.mk_vertex_count(b, k) if family == "mk" else 1 << k


def zeta_oracle(family: str, k: int, J: int = 4, b: int | None = None, cache_dir=None) -> list:
    s = spectrum.eig_sym(netgen.laplacian(netgen.build(family, k, b)), cache_dir=cache_dir)
    return [spectrum.zeta_direct(s, j) for j in range(1, J + 1)]


@dataclass(frozen=True)
class ZetaExponent:
    rows: list                  # (N, I_j)
    power: FitResult            # plain log-log fit
    differenced: FitResult      # fit of successive increments (constant removed)
    growth: GrowthComparison


def zeta_exponent(family: str, k_range, j: int = 1, b: int | None = None, skip: int = 3) -> ZetaExponent:
    """Fit I_j(N) from RG data after dropping the first `skip` sizes."""
    rows = [(vertex_count(family, k, b), zeta_rg(family, k, max(j, 4), b)[j - 1]) for k in k_range]
    pts = burn_in(rows, skip)
    if family == "mk":
        # vertex counts are only asymptotically geometric; difference in k via (2b)^k
        geo = [((2 * b) ** k, v) for k, (_, v) in zip(list(k_range)[skip:], pts)]
    else:
        geo = pts
    return ZetaExponent(rows, fit_powerlaw(pts), fit_powerlaw_differenced(geo), compare_growth(pts))


def spectral_dimension(family: str, b: int | None = None) -> float:
    if family == "mk":
        return rg_mk.mk_spectral_dimension(b)
    return rg_hanoi.hanoi_spectral_dimension(family)


# ------------------------------------------------------------ rank spectrum

def rank_window(n: int, min_points: int = 30) -> tuple[float, float]:
    """Lowest decade [10^m, 10^(m+1)] of i/N holding at least min_points nonzero eigenvalues."""
    m = math.floor(math.log10(2 / n))
    while True:
        lo, hi = 10.0 ** m, 10.0 ** (m + 1)
        count = sum(1 for i in range(2, n + 1) if lo <= i / n <= hi)
        if count >= min_points or hi >= 1:
            return lo, hi
        m += 1


def fit_rank_spectrum(s: spectrum.SpectrumResult, window=None, min_points: int = 30) -> FitResult:
    """Power-law fit of lambda_i against i/N over a decade at small i/N."""
    table = spectrum.rank_spectrum_export(s)[1:]  # drop the zero mode
    lo, hi = window or rank_window(s.n, min_points)
    m = (table[:, 0] >= lo) & (table[:, 0] <= hi)
    return fit_powerlaw(table[m])


# -------------------------------------------------------------- sync report

@dataclass
class SyncReport:
    family: str
    b: int | None
    rows: list                  # per k: dict with N, lambda_max, I_1, I_J, proxies, oracle values
    eigenratio_scaling_exponent: FitResult
    proxy: str                  # which lambda_2 proxy fed the fit
    proxy_warning: str | None = None
    notes: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"mk(b={self.b})" if self.family == "mk" else self.family


def _proxy_moment(n, IJ, J):
    return (n * IJ) ** (-1.0 / J)


def sync_report(families, k_range, J: int = 4, oracle_max_n: int = 1024, skip: int = 3,
                proxy: str = "moment") -> tuple[list, list]:
    """Eigenratio lambda_N/lambda_2 scaling per family and the resulting ranking.

    families: iterable of "hn3", "hn5" or ("mk", b).  lambda_N comes from
    shooting, lambda_2 from a zeta-moment proxy (N I_J)^(-1/J), valid when
    2J > d_s, or from 1/(N I_1), valid only when d_s < 2.  Oracle values are
    added where N <= oracle_max_n.
    """
    if proxy not in ("moment", "i1"):
        raise InvalidParameterError("proxy must be 'moment' or 'i1'")
    reports = []
    for fam in families:
        family, b = (fam, None) if isinstance(fam, str) else (fam[0], int(fam[1]))
        ds = spectral_dimension(family, b)
        warn = None
        if ds >= 2:
            warn = f"d_s = {ds:.4g} >= 2: the 1/(N I_1) proxy for lambda_2 is not valid"
            if proxy == "i1":
                warnings.warn(warn)
        if proxy == "moment" and 2 * J <= ds:
            raise InvalidParameterError(f"moment proxy needs 2J > d_s = {ds}")
        rows = []
        for k in k_range:
            n = vertex_count(family, k, b)
            I = zeta_rg(family, k, J, b)
            lam_n = shoot.shoot(family, k, b, tol=1e-13).lambda_max
            row = {"k": k, "N": n, "lambda_max": lam_n, "I_1": I[0], f"I_{J}": I[J - 1],
                   "lambda2_i1_proxy": 1.0 / (n * I[0]),
                   "lambda2_moment_proxy": _proxy_moment(n, I[J - 1], J)}
            row["eigenratio"] = lam_n / (row["lambda2_moment_proxy"] if proxy == "moment" else row["lambda2_i1_proxy"])
            if n <= oracle_max_n:
                s = spectrum.eig_sym(netgen.laplacian(netgen.build(family, k, b)))
                row["lambda2_oracle"] = s.lambda2
                row["lambda_max_oracle"] = s.lambda_max
                row["eigenratio_oracle"] = s.eigenratio
            rows.append(row)
        pts = burn_in([(r["N"], r["eigenratio"]) for r in rows], skip)
        rep = SyncReport(family, b, rows, fit_powerlaw(pts), proxy, warn)
        reports.append(rep)
    ranking = [r.label for r in sorted(reports, key=lambda r: r.eigenratio_scaling_exponent.slope)]
    return reports, ranking
