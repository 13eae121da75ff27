"""Brute-force spectral oracle: dense eigensolve and everything derived from it."""

from __future__ import annotations

import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConvergenceError, InvalidParameterError, MultiplicityError, SizeLimitError
from .netgen import LaplacianMatrix
from .taylor import Jet, check_order, zeta_from_logdet

log = logging.getLogger(__name__)

DENSE_LIMIT = 4096


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray  # ascending
    n: int
    provenance: dict = field(default_factory=dict)

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def eigenratio(self) -> float:
        return self.lambda_max / self.lambda2

    def nonzero(self, tol: float = 1e-9) -> np.ndarray:
        """Eigenvalues 2..N, after checking that exactly one eigenvalue vanishes."""
        ev = self.eigenvalues
        scale = max(1.0, float(ev[-1]))
        nzero = int(np.sum(np.abs(ev) <= tol * scale))
        if nzero > 1:
            raise MultiplicityError(f"{nzero} zero eigenvalues; graph is disconnected")
        return ev[1:]


def eig_sym(m: LaplacianMatrix, limit: int = DENSE_LIMIT, cache_dir: str | Path | None = None) -> SpectrumResult:
    """Full spectrum by LAPACK's symmetric solver (numpy.linalg.eigvalsh)."""
    if m.n > limit:
        raise SizeLimitError(f"n = {m.n} exceeds the dense limit {limit}")
    if limit > DENSE_LIMIT and m.n > DENSE_LIMIT:
        log.warning("dense eigensolve with n = %d above the default limit", m.n)
    key = m.fingerprint()
    path = Path(cache_dir) / f"spec-{key}.npy" if cache_dir else None
    if path is not None and path.exists():
        ev = np.load(path)
        return SpectrumResult(ev, m.n, {"hash": key, "cached": True})
    ev = np.linalg.eigvalsh(m.to_dense().astype(float))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".npy")
        with os.fdopen(fd, "wb") as fh:
            np.save(fh, ev)
        os.replace(tmp, path)
    return SpectrumResult(ev, m.n, {"hash": key, "cached": False})


def zeta_direct(s: SpectrumResult, j: int) -> float:
    if j < 1:
        raise InvalidParameterError("j must be >= 1")
    lam = s.nonzero()
    return float(np.sum(lam ** (-float(j))) / s.n)


def roughness(s: SpectrumResult) -> float:
    """Steady-state width <w^2>, identical to I_1."""
    return zeta_direct(s, 1)


def rank_spectrum_export(s: SpectrumResult) -> np.ndarray:
    """Rows (i/N, lambda_i) for i = 1..N in ascending order."""
    i = np.arange(1, s.n + 1)
    return np.column_stack([i / s.n, s.eigenvalues])


def power_method_numeric(m: LaplacianMatrix, tol: float = 1e-12, max_iter: int = 200_000,
                         seed: int = 0) -> tuple[float, int]:
    """Largest Laplacian eigenvalue by power iteration with Rayleigh-quotient estimates.

    The start vector is seeded and projected off the all-ones null vector.
    Slow geometric convergence makes the step change a poor error estimate, so
    the stop uses the tail bound delta_t * r / (1 - r) with r the observed
    ratio of successive changes.  Returns (estimate, iterations).
    """
    A = m.to_sparse()
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(m.n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    lam, prev_delta = 0.0, math.inf
    for t in range(1, max_iter + 1):
        y = A @ x
        new = float(x @ y)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            raise ConvergenceError("iterate collapsed to the null space", 0.0, t)
        x = y / norm
        if t > 1:
            delta = abs(new - lam)
            r = delta / prev_delta if prev_delta > 0 else 0.0
            tail = delta * r / (1 - r) if r < 1 else math.inf
            if delta <= tol * new and tail <= tol * new:
                return new, t
            prev_delta = delta
        lam = new
    raise ConvergenceError(f"power method did not reach tol={tol} in {max_iter} steps", lam, max_iter)


def det_shifted(s: SpectrumResult, eps: float) -> float:
    return float(np.prod(s.eigenvalues + eps))


def log_det_shifted(s: SpectrumResult, eps: float) -> float:
    return float(np.sum(np.log(s.eigenvalues + eps)))


def det_shifted_jet(s: SpectrumResult, J: int = 4) -> Jet:
    """Jet of ln[det(L + eps)/eps] = sum_{i>=2} ln(lambda_i + eps)."""
    check_order(J)
    lam = s.nonzero()
    c = [float(np.sum(np.log(lam)))]
    for n in range(1, J + 1):
        c.append((-1) ** (n - 1) * float(np.sum(lam ** (-float(n)))) / n)
    return Jet(c)


def zeta_from_spectrum_jet(s: SpectrumResult, j: int, J: int = 4) -> float:
    return zeta_from_logdet(det_shifted_jet(s, max(J, j)), s.n, j)


def spectral_sum_check(s: SpectrumResult, trace: int) -> float:
    """Relative mismatch between sum of eigenvalues and the Laplacian trace."""
    return abs(float(np.sum(s.eigenvalues)) - trace) / max(1.0, abs(trace))


def digits_agree(a: float, b: float) -> float:
    if a == b:
        return math.inf
    return -math.log10(abs(a - b) / abs(b))
