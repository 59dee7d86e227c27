"""The scale ``||phi(A) u||`` generated by a positive self-adjoint truncation ``A``."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericError, NumericWarning, ParameterError, ShapeError
from ..lattice import LatticeBox, LatticeFunction, _readonly, pairwise_sum
from ..linalg import singular_values
from ..ro import ROFunction
from ..rng import generator, random_function
from ..spaces import WeightFamily, h_phi_norm
from ..torus import TorusGrid
from .estimates import ellipticity_estimate
from .operators import PdoMatrix, pdo_matrix
from .symbol import Symbol

HERMITIAN_TOL = 1e-12
H2_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class AScale:
    operator: PdoMatrix
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    phi: ROFunction | None = None
    shift: float = 0.0

    def __post_init__(self):
        A = self.operator.entries
        scale = max(float(np.max(np.abs(A))), 1.0)
        if np.max(np.abs(A - A.conj().T)) > HERMITIAN_TOL * scale:
            raise NumericError("A-scale operator is not Hermitian")
        if float(np.min(self.eigenvalues)) < 1.0 - H2_SLACK:
            raise NumericError(f"smallest eigenvalue {float(np.min(self.eigenvalues))} is below 1")
        object.__setattr__(self, "eigenvalues", _readonly(np.array(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _readonly(np.array(self.eigenvectors, dtype=np.complex128)))

    @property
    def box(self) -> LatticeBox:
        return self.operator.box

    def phi_of_lambda(self, phi: ROFunction | None = None) -> np.ndarray:
        phi = self.phi if phi is None else phi
        lam = np.maximum(self.eigenvalues, 1.0)
        return np.ones_like(lam) if phi is None else phi(lam)


def ascale_build(a: Symbol | PdoMatrix, box: LatticeBox | None = None, grid: TorusGrid | None = None, phi: ROFunction | None = None) -> AScale:
    """Symmetrize ``T_a``, shift it so that ``(A u, u) >= ||u||^2``, and diagonalize.

    The applied shift is ``c = max(0, 1 - lambda_min)`` of the symmetrized
    matrix and is stored on the result.
    """
    if isinstance(a, Symbol):
        if a.order != 1:
            raise ParameterError(f"A-scale generators have order 1, got {a.order}")
        if box is None:
            raise ParameterError("a box is required for a symbol")
        if ellipticity_estimate(a, box, grid).verdict != "pass":
            warnings.warn("symbol is not certified elliptic on this box", NumericWarning, stacklevel=2)
        T = pdo_matrix(a, box, grid)
    elif isinstance(a, PdoMatrix):
        T = a
    else:
        raise ParameterError("expected a Symbol or a PdoMatrix")
    H = 0.5 * (T.entries + T.entries.conj().T)
    try:
        lam = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    c = max(0.0, 1.0 - float(lam[0]))
    if c:
        H = H + c * np.eye(H.shape[0])
    try:
        lam, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    A = PdoMatrix(T.box, T.grid, H, f"symmetrized:{T.symbol_ref}", 1.0)
    return AScale(A, lam, U, phi, c)


def ascale_norm(u: LatticeFunction, scale: AScale, phi: ROFunction | None = None) -> float:
    """``||phi(Lambda) U^H u||``."""
    if u.box != scale.box:
        raise ShapeError("function lives on another box")
    coef = scale.phi_of_lambda(phi) * (scale.eigenvectors.conj().T @ u.values)
    return float(np.sqrt(pairwise_sum(np.abs(coef) ** 2)))


def exact_ratio_band(scale: AScale, phi: ROFunction) -> tuple[float, float]:
    """Extremes of ``ascale_norm(u) / ||u||_phi`` over all ``u``."""
    w = WeightFamily.from_phi(scale.box, phi).weight
    M = scale.phi_of_lambda(phi)[:, None] * scale.eigenvectors.conj().T / w[None, :]
    sv = singular_values(M)
    return float(sv[-1]), float(sv[0])


def verify_theorem7(a: Symbol, phi: ROFunction, box_radii, trials: int = 200, seed: int = 0, kappa: float = 2.0) -> dict:
    """Ratio band of ``ascale_norm / h_phi_norm`` over random ``u`` for each radius.

    Passes when every band lies in ``[1/kappa, kappa]`` and the band width
    does not grow from one radius to the next.
    """
    rng = generator(seed)
    rows = []
    for N in box_radii:
        box = LatticeBox(a.n, int(N))
        scale = ascale_build(a, box, phi=phi)
        w = WeightFamily.from_phi(box, phi)
        ratios = np.empty(trials)
        for i in range(trials):
            u = random_function(box, rng)
            ratios[i] = ascale_norm(u, scale) / h_phi_norm(u, w)
        lo, hi = exact_ratio_band(scale, phi)
        rows.append(
            {
                "N": int(N),
                "min_ratio": float(ratios.min()),
                "max_ratio": float(ratios.max()),
                "width": float(ratios.max() - ratios.min()),
                "shift": scale.shift,
                "exact_band": [lo, hi],
            }
        )
    inside = all(1.0 / kappa <= r["min_ratio"] and r["max_ratio"] <= kappa for r in rows)
    widths = [r["width"] for r in rows]
    steady = all(b <= a_ + 1e-12 for a_, b in zip(widths, widths[1:]))
    return {
        "claim": "a_scale_equivalence",
        "parameters": {"symbol": a.spec(), "phi": phi.spec(), "radii": [int(N) for N in box_radii], "seed": seed, "kappa": kappa},
        "trials": trials,
        "bands": rows,
        "pass": bool(inside and steady),
    }
