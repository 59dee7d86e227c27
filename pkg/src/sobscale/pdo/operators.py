"""Applying symbols to lattice functions and assembling truncated matrices."""

from __future__ import annotations

import csv
import io
import struct
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericError, ResolutionError, ShapeError, TruncationWarning
from ..lattice import LatticeBox, LatticeFunction, _readonly
from ..torus import TorusGrid, dft_array, idft_array
from .symbol import Symbol, grid_for

MAGIC = b"SOBSCALE"
LEAK_TOL = 1e-8
CHUNK = 128


def _check_grid(a: Symbol, box: LatticeBox, grid: TorusGrid) -> LatticeBox:
    if grid.n != box.n or a.n != box.n:
        raise ShapeError(f"dimension mismatch: symbol {a.n}, box {box.n}, grid {grid.n}")
    outer = box.enlarged(a.mode_radius)
    if grid.M < 2 * outer.N + 1:
        raise ResolutionError(
            f"M={grid.M} cannot resolve radius N+r={outer.N}; need M >= 2(N+r)+1 = {2 * outer.N + 1}"
        )
    return outer


def _apply_columns(a: Symbol, values: np.ndarray, box: LatticeBox, grid: TorusGrid, outer: LatticeBox) -> np.ndarray:
    """``T_a`` on the columns of ``values`` (shape ``(K, b)``), returned on ``outer``."""
    uh = dft_array(values, box, grid)
    f = a.k_factors(outer.bracket)
    out = np.zeros((outer.cardinality, values.shape[1]), dtype=np.complex128)
    for ft, term in zip(f, a.terms):
        p = term.grid_poly(grid)
        out += ft[:, None] * idft_array(p[:, None] * uh, grid, outer)
    return out


def pdo_apply_with_leakage(a: Symbol, u: LatticeFunction, grid: TorusGrid | None = None) -> tuple[LatticeFunction, float]:
    """``T_a u`` on ``u.box`` together with the l^2 norm of what fell outside the box."""
    box = u.box
    grid = grid_for(a, box) if grid is None else grid
    outer = _check_grid(a, box, grid)
    full = _apply_columns(a, u.values[:, None], box, grid, outer)[:, 0]
    inside = box.embed_indices(outer)
    mask = np.ones(outer.cardinality, dtype=bool)
    mask[inside] = False
    leak = float(np.linalg.norm(full[mask]))
    return LatticeFunction(box, full[inside]), leak


def pdo_apply(a: Symbol, u: LatticeFunction, grid: TorusGrid | None = None, leak_tol: float | None = LEAK_TOL) -> LatticeFunction:
    """``(T_a u)(k) = M^-n sum_m exp(2 pi i k.x_m) a(k, x_m) u_hat(x_m)`` on ``u.box``.

    The quadrature runs on the box enlarged by the symbol's mode radius, so it
    is exact for trigonometric-polynomial symbols.  If the part outside the
    box exceeds ``leak_tol`` relative to the full result, a
    :class:`TruncationWarning` carrying the leaked mass is issued.
    """
    out, leak = pdo_apply_with_leakage(a, u, grid)
    if leak_tol is not None and leak > 0:
        total = np.hypot(np.linalg.norm(out.values), leak)
        if leak > leak_tol * total:
            warnings.warn(TruncationWarning(f"leaked l2 mass {leak:.6g} outside the box"), stacklevel=2)
    return out


@dataclass(frozen=True, eq=False)
class PdoMatrix:
    box: LatticeBox
    grid: TorusGrid
    entries: np.ndarray = field(repr=False)
    symbol_ref: str = ""
    order: float = 0.0

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.complex128)
        K = self.box.cardinality
        if e.shape != (K, K):
            raise ShapeError(f"matrix shape {e.shape} does not match box cardinality {K}")
        object.__setattr__(self, "entries", _readonly(e))

    def __matmul__(self, u: LatticeFunction) -> LatticeFunction:
        if u.box != self.box:
            raise ShapeError("function lives on another box")
        return LatticeFunction(self.box, self.entries @ u.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        K = self.box.cardinality
        for j in range(K):
            for i in range(K):
                z = self.entries[i, j]
                w.writerow([i, j, repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()

    def to_bytes(self) -> bytes:
        """``SOBSCALE``, int64 rows, int64 cols, then complex128 entries column-major (little endian)."""
        rows, cols = self.entries.shape
        body = np.asfortranarray(self.entries).astype("<c16").tobytes(order="F")
        return MAGIC + struct.pack("<qq", rows, cols) + body


def read_matrix_bytes(data: bytes) -> np.ndarray:
    if data[:8] != MAGIC:
        raise ShapeError("not a SOBSCALE matrix dump")
    rows, cols = struct.unpack("<qq", data[8:24])
    flat = np.frombuffer(data[24:], dtype="<c16")
    if flat.size != rows * cols:
        raise ShapeError("truncated matrix dump")
    return flat.reshape((rows, cols), order="F").astype(np.complex128)


def pdo_matrix(a: Symbol, box: LatticeBox, grid: TorusGrid | None = None, chunk: int = CHUNK) -> PdoMatrix:
    """Column ``k'`` is ``pdo_apply(a, delta_{k'})`` restricted to the box."""
    grid = grid_for(a, box) if grid is None else grid
    outer = _check_grid(a, box, grid)
    K = box.cardinality
    inside = box.embed_indices(outer)
    if a.is_multiplier:
        mat = np.diag(a.multiplier_values(box).astype(np.complex128))
        _check_multiplier(a, box, grid, outer, mat)
    else:
        mat = np.empty((K, K), dtype=np.complex128)
        for start in range(0, K, chunk):
            stop = min(K, start + chunk)
            cols = np.zeros((K, stop - start), dtype=np.complex128)
            cols[np.arange(start, stop), np.arange(stop - start)] = 1.0
            mat[:, start:stop] = _apply_columns(a, cols, box, grid, outer)[inside]
    return PdoMatrix(box, grid, mat, a.to_json(), a.order)


def _check_multiplier(a, box, grid, outer, mat):
    """Quadrature on a few basis columns must reproduce the diagonal."""
    K = box.cardinality
    picks = np.unique(np.array([0, K // 2, K - 1]))
    cols = np.zeros((K, picks.size), dtype=np.complex128)
    cols[picks, np.arange(picks.size)] = 1.0
    got = _apply_columns(a, cols, box, grid, outer)[box.embed_indices(outer)]
    want = mat[:, picks]
    scale = max(1.0, float(np.max(np.abs(want))))
    if np.max(np.abs(got - want)) > 1e-10 * scale:
        raise NumericError("multiplier symbol did not assemble to its diagonal")


def formal_adjoint(T: PdoMatrix) -> PdoMatrix:
    """Conjugate transpose: ``(T u, v) = (u, T^dagger v)``."""
    return PdoMatrix(T.box, T.grid, T.entries.conj().T, f"adjoint:{T.symbol_ref}", T.order)


def multiplier_matrix(values: np.ndarray, box: LatticeBox, grid: TorusGrid | None = None, order: float = 0.0) -> PdoMatrix:
    grid = TorusGrid.for_box(box) if grid is None else grid
    return PdoMatrix(box, grid, np.diag(np.asarray(values, dtype=np.complex128)), "multiplier", order)
