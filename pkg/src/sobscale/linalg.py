"""Operator-norm estimation with a dense cross-check."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericError, NumericWarning
from .rng import complex_gaussian, generator

MAX_ITER = 500
RTOL = 1e-10
DENSE_LIMIT = 500


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    residual: float
    converged: bool
    dense: Optional[float] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def spectral_norm(A: np.ndarray) -> float:
    """Largest singular value via a dense SVD."""
    try:
        return float(np.linalg.norm(A, 2)) if A.size else 0.0
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc


def singular_values(A: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc


def power_norm(A: np.ndarray, seed: int = 0, max_iter: int = MAX_ITER, rtol: float = RTOL, cross_check: bool = True) -> NormEstimate:
    """Estimate ``||A||_2`` by power iteration on ``A^H A``.

    Converged when successive estimates agree to ``rtol`` (relative).  Boxes of
    at most 500 points also get a dense SVD value in ``dense``.
    """
    A = np.asarray(A, dtype=np.complex128)
    x = complex_gaussian(generator(seed), A.shape[1])
    x /= np.linalg.norm(x)
    est = 0.0
    residual = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        y = A.conj().T @ (A @ x)
        lam = float(np.real(np.vdot(x, y)))
        ny = np.linalg.norm(y)
        if ny == 0.0:
            est, residual = 0.0, 0.0
            break
        x = y / ny
        new = np.sqrt(max(lam, 0.0))
        residual = abs(new - est) / max(new, np.finfo(float).tiny)
        est = new
        if residual <= rtol:
            break
    converged = residual <= rtol
    if not converged:
        warnings.warn(f"power iteration stopped after {max_iter} steps, residual {residual:.3e}", NumericWarning, stacklevel=2)
    dense = spectral_norm(A) if cross_check and A.shape[0] <= DENSE_LIMIT else None
    return NormEstimate(float(est), it, float(residual), bool(converged), dense)


def weighted_conjugate(T: np.ndarray, w_out: np.ndarray, w_in: np.ndarray) -> np.ndarray:
    """``diag(w_out) T diag(w_in)^-1``."""
    return (w_out[:, None] * T) / w_in[None, :]
