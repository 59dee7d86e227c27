"""Finite-truncation shadows of Fredholm properties.

Every square matrix is Fredholm with index 0, so what can be observed is the
numerical kernel and cokernel, whether rank defects move with the Sobolev
order ``s``, and range/kernel orthogonality from the SVD.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import NumericError, NumericWarning, ParameterError
from ..lattice import LatticeBox
from ..linalg import singular_values, weighted_conjugate
from ..torus import TorusGrid
from .estimates import ellipticity_estimate
from .operators import PdoMatrix, pdo_matrix
from .symbol import Symbol

TOL = 1e-8


def _operator(op, box, grid, order):
    if isinstance(op, Symbol):
        if ellipticity_estimate(op, box, grid).verdict != "pass":
            warnings.warn("symbol is not certified elliptic on this box", NumericWarning, stacklevel=3)
        T = pdo_matrix(op, box, grid)
    elif isinstance(op, PdoMatrix):
        T = op
    else:
        raise ParameterError("expected a Symbol or a PdoMatrix")
    if box is not None and T.box != box:
        raise ParameterError("operator lives on another box")
    m = T.order if order is None else float(order)
    return T, m


def _defects(T: PdoMatrix, s: float, m: float, tol: float):
    br = T.box.bracket
    W = weighted_conjugate(T.entries, br ** (s - m), br**s)
    sv = singular_values(W)
    svh = singular_values(W.conj().T)
    top = float(sv[0]) if sv.size else 0.0
    ker = int(np.sum(sv < tol * top))
    coker = int(np.sum(svh < tol * top))
    return ker, coker, sv


@dataclass(frozen=True)
class FredholmReport:
    s: float
    dim_ker: int
    dim_coker: int
    index: int
    smallest_singulars: tuple
    s_prime: float
    rank_defect: int
    rank_defect_prime: int
    tol: float

    @property
    def s_independent(self) -> bool:
        return self.rank_defect == self.rank_defect_prime

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["smallest_singulars"] = list(self.smallest_singulars)
        d["s_independent"] = self.s_independent
        return d


def fredholm_surrogate(op, s: float, box: LatticeBox | None = None, grid: TorusGrid | None = None, tol: float = TOL, order: float | None = None, s_prime: float | None = None) -> FredholmReport:
    """Kernel/cokernel counts of ``T: H^(s) -> H^(s-m)`` on the truncation.

    ``op`` is a :class:`Symbol` (assembled on ``box``) or a ready
    :class:`PdoMatrix`.  The rank defect is recomputed at ``s_prime``
    (default ``s + 1``) for the s-independence check.
    """
    if box is None and isinstance(op, PdoMatrix):
        box = op.box
    if box is None:
        raise ParameterError("a box is required for a symbol")
    T, m = _operator(op, box, grid, order)
    ker, coker, sv = _defects(T, s, m, tol)
    sp = s + 1.0 if s_prime is None else float(s_prime)
    ker_p, _, _ = _defects(T, sp, m, tol)
    return FredholmReport(
        s=float(s),
        dim_ker=ker,
        dim_coker=coker,
        index=ker - coker,
        smallest_singulars=tuple(float(x) for x in sv[::-1][:5]),
        s_prime=sp,
        rank_defect=ker,
        rank_defect_prime=ker_p,
        tol=tol,
    )


def range_decomposition(T: PdoMatrix | np.ndarray, v: np.ndarray, tol: float = TOL) -> dict:
    """Split ``v`` into its part in ``Ran T`` and its part in ``Ker T^dagger``."""
    A = T.entries if isinstance(T, PdoMatrix) else np.asarray(T)
    try:
        U, S, _ = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc
    r = int(np.sum(S >= tol * S[0])) if S.size else 0
    Ur, Uk = U[:, :r], U[:, r:]
    p = Ur @ (Ur.conj().T @ v)
    q = Uk @ (Uk.conj().T @ v)
    nv = np.linalg.norm(v)
    cross = float(np.max(np.abs(Uk.conj().T @ p))) if Uk.shape[1] else 0.0
    return {
        "rank": r,
        "dim_coker": A.shape[0] - r,
        "reconstruction_residual": float(np.linalg.norm(v - p - q) / nv) if nv else 0.0,
        "orthogonality_defect": cross / nv if nv else 0.0,
        "range_part": p,
        "coker_part": q,
    }


def parametrix_defect(T: PdoMatrix) -> np.ndarray:
    """Singular values of ``K = B T - I`` with ``B`` the pseudoinverse."""
    A = T.entries
    try:
        B = np.linalg.pinv(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"pseudoinverse failed: {exc}") from exc
    return singular_values(B @ A - np.eye(A.shape[0]))
