"""Sampled symbol-class constants, ellipticity and weighted mapping norms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import CapabilityError, ResolutionError, ShapeError
from ..lattice import LatticeBox, difference_along
from ..linalg import spectral_norm, weighted_conjugate
from ..ro import ROFunction
from ..torus import TorusGrid
from .operators import pdo_matrix
from .symbol import Symbol, grid_for

SLOPE_SLACK = 0.1
VANISH = 1e-13
K_CHUNK = 256


def _multiindices(n: int, max_order: int):
    for a in itertools.product(range(max_order + 1), repeat=n):
        if sum(a) <= max_order:
            yield a


def _sup_x(symbol: Symbol, box: LatticeBox, grid: TorusGrid, alpha) -> np.ndarray:
    """``sup_x |Delta^alpha_k symbol(k, x)|`` over grid nodes, for every ``k`` in the box."""
    r = sum(alpha)
    outer = box.enlarged(r) if r else box
    f = symbol.k_factors(outer.bracket)
    for axis, times in enumerate(alpha):
        if times:
            f = difference_along(f.reshape((len(symbol.terms),) + outer.shape), axis + 1, times)
            f = f.reshape(len(symbol.terms), -1)
    f = f[:, box.embed_indices(outer)] if r else f
    polys = np.stack([t.grid_poly(grid) for t in symbol.terms])
    if len(symbol.terms) == 1:
        return np.abs(f[0]) * float(np.max(np.abs(polys[0])))
    out = np.empty(box.cardinality)
    for start in range(0, box.cardinality, K_CHUNK):
        block = f[:, start:start + K_CHUNK].T @ polys
        out[start:start + K_CHUNK] = np.max(np.abs(block), axis=1)
    return out


def dyadic_slope(g: np.ndarray, box: LatticeBox) -> Optional[float]:
    """Log-log slope of the per-shell maxima of ``g`` against ``<k>``.

    Shells are ``2^j <= 1 + |k| < 2^(j+1)``; shells with ``1 + |k| >= 4`` are
    used when at least two exist, otherwise all shells.
    """
    one_plus = 1.0 + box.norm
    shell = np.floor(np.log2(one_plus) + 1e-12).astype(int)
    xs, ys, js = [], [], []
    for j in np.unique(shell):
        idx = np.nonzero(shell == j)[0]
        i = idx[np.argmax(g[idx])]
        if g[i] > 0:
            xs.append(math.log(box.bracket[i]))
            ys.append(math.log(g[i]))
            js.append(j)
    xs, ys, js = np.array(xs), np.array(ys), np.array(js)
    keep = js >= 2
    if keep.sum() >= 2:
        xs, ys = xs[keep], ys[keep]
    if xs.size < 2:
        return None
    return float(np.polyfit(xs, ys, 1)[0])


@dataclass(frozen=True)
class SymbolEstimates:
    order: float
    entries: tuple  # (alpha, beta, C, slope, vanishing)
    consistent: bool
    ellipticity: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "m": self.order,
            "entries": [
                {"alpha": list(a), "beta": list(b), "C": c, "slope": s, "vanishing": v}
                for a, b, c, s, v in self.entries
            ],
            "consistent_with_order": self.consistent,
            "ellipticity": self.ellipticity,
        }

    def get(self, alpha, beta):
        for a, b, c, s, v in self.entries:
            if tuple(a) == tuple(alpha) and tuple(b) == tuple(beta):
                return {"C": c, "slope": s, "vanishing": v}
        raise KeyError((alpha, beta))


def symbol_class_estimate(a: Symbol, box: LatticeBox, grid: TorusGrid | None = None, max_alpha: int = 1, max_beta: int = 1) -> SymbolEstimates:
    """Sampled ``C_{alpha,beta}`` and growth slopes of ``D^(beta)_x Delta^alpha_k a``.

    ``g(k)`` is the grid maximum over ``x``; ``C`` is
    ``max_k g(k) / (1+|k|)^(m-|alpha|)``.  The symbol is consistent with its
    order when every non-vanishing slope is at most ``m - |alpha| + 0.1``.
    """
    if not hasattr(a, "derivative"):
        raise CapabilityError("symbol has no closed-form x-derivative")
    if box.n != a.n:
        raise ShapeError("symbol and box dimensions differ")
    grid = grid_for(a, box) if grid is None else grid
    if grid.M < 2 * a.mode_radius + 1:
        raise ResolutionError(f"M={grid.M} cannot resolve symbol modes of radius {a.mode_radius}")
    scale = float(np.max(_sup_x(a, box, grid, (0,) * box.n)))
    entries = []
    ok = True
    for beta in _multiindices(box.n, max_beta):
        d = a.derivative(beta)
        for alpha in _multiindices(box.n, max_alpha):
            g = _sup_x(d, box, grid, alpha)
            expo = a.order - sum(alpha)
            C = float(np.max(g / (1.0 + box.norm) ** expo))
            vanishing = bool(np.max(g) <= VANISH * max(scale, 1.0))
            slope = None if vanishing else dyadic_slope(g, box)
            if slope is not None and slope > expo + SLOPE_SLACK:
                ok = False
            entries.append((alpha, beta, 0.0 if vanishing else C, slope, vanishing))
    return SymbolEstimates(a.order, tuple(entries), ok)


@dataclass(frozen=True)
class EllipticityReport:
    C: float
    R: float
    verdict: str
    table: tuple = field(default=())

    def to_dict(self) -> dict:
        return {"C": self.C, "R": self.R, "verdict": self.verdict, "table": [list(t) for t in self.table]}


def ellipticity_estimate(a: Symbol, box: LatticeBox, grid: TorusGrid | None = None) -> EllipticityReport:
    """Certified ``C(R) = inf_{|k| > R, x} |a(k, x)| / (1+|k|)^m`` for dyadic ``R``.

    The grid minimum is lowered by the symbol's Lipschitz constant in ``x``
    times the covering radius of the grid, so ``C(R)`` is a lower bound over
    the whole torus.  The verdict passes when some ``R`` has ``C(R) > 0``; the
    smallest such ``R`` is returned.
    """
    grid = grid_for(a, box) if grid is None else grid
    if grid.n != box.n:
        raise ShapeError("grid and box dimensions differ")
    f = a.k_factors(box.bracket)
    polys = np.stack([t.grid_poly(grid) for t in a.terms])
    lips = np.array([t.lipschitz() for t in a.terms])
    h = math.sqrt(box.n) / (2.0 * grid.M)
    mins = np.empty(box.cardinality)
    for start in range(0, box.cardinality, K_CHUNK):
        block = f[:, start:start + K_CHUNK].T @ polys
        mins[start:start + K_CHUNK] = np.min(np.abs(block), axis=1)
    lip_k = np.abs(f).T @ lips
    cert = np.maximum(mins - lip_k * h, 0.0) / (1.0 + box.norm) ** a.order
    radii = [0.0] + [float(2**j) for j in range(int(math.log2(box.N)) + 1) if 2**j < box.N]
    table = []
    for R in radii:
        sel = box.norm > R
        if not np.any(sel):
            continue
        table.append((R, float(np.min(cert[sel]))))
    for R, C in table:
        if C > 0:
            return EllipticityReport(C, R, "pass", tuple(table))
    return EllipticityReport(0.0, float("inf"), "fail", tuple(table))


def mapping_norm_scan(a: Symbol, phi: ROFunction, box_radii, n: int | None = None) -> list[tuple[int, float]]:
    """``||diag(<k>^-m phi) T_a diag(phi)^-1||_2`` for each truncation radius."""
    n = a.n if n is None else n
    out = []
    for N in box_radii:
        box = LatticeBox(n, int(N))
        w_in = phi(box.bracket)
        w_out = np.power(box.bracket, -a.order) * w_in
        T = pdo_matrix(a, box)
        if a.is_multiplier:
            norm = float(np.max(np.abs(w_out * np.diag(T.entries) / w_in)))
        else:
            norm = spectral_norm(weighted_conjugate(T.entries, w_out, w_in))
        out.append((int(N), norm))
    return out
