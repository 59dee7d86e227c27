"""Weighted l^2 norms: the Sobolev scale ``H^(s)`` and its refinement ``H^phi``.

A :class:`WeightFamily` holds ``phi(<k>)`` at every point of a box; every norm,
inner product and pairing below is a single fused pass over those weights.
"""

from __future__ import annotations

import csv
import io
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import DegenerateInputError, DomainError, ShapeError
from .lattice import LatticeBox, LatticeFunction, _readonly, l2_inner, pairwise_sum
from .ro import Power, ROFunction

Source = Union[float, ROFunction, str]


@dataclass(frozen=True, eq=False)
class WeightFamily:
    """Positive weights ``phi(<k>)`` on a box together with where they came from."""

    box: LatticeBox
    weight: np.ndarray = field(repr=False)
    source: Source = 0.0

    def __post_init__(self):
        w = np.array(self.weight, dtype=float).ravel()
        if w.size != self.box.cardinality:
            raise ShapeError(f"{w.size} weights for a box of {self.box.cardinality} points")
        bad = ~(np.isfinite(w) & (w > 0))
        if np.any(bad):
            i = int(np.argmax(bad))
            raise DomainError(f"weight at k={tuple(self.box.points[i])} is not positive", t=float(self.box.bracket[i]))
        object.__setattr__(self, "weight", _readonly(w))

    @classmethod
    def from_exponent(cls, box: LatticeBox, s: float) -> "WeightFamily":
        """``<k>^s``."""
        return _exponent_family(box, float(s))

    @classmethod
    def from_phi(cls, box: LatticeBox, phi: ROFunction) -> "WeightFamily":
        """``phi(<k>)``."""
        return _phi_family(box, phi)

    @classmethod
    def of(cls, box: LatticeBox, source) -> "WeightFamily":
        """Accept an exponent, an :class:`ROFunction` or a ready family."""
        if isinstance(source, WeightFamily):
            if source.box != box:
                raise ShapeError("weight family lives on another box")
            return source
        if isinstance(source, ROFunction):
            return cls.from_phi(box, source)
        return cls.from_exponent(box, float(source))

    def reciprocal(self) -> "WeightFamily":
        return WeightFamily(self.box, 1.0 / self.weight, ("reciprocal", self.describe()))

    def restrict(self, box: LatticeBox) -> "WeightFamily":
        return WeightFamily(box, self.weight[box.embed_indices(self.box)], self.source)

    def describe(self):
        if isinstance(self.source, ROFunction):
            return self.source.spec()
        if isinstance(self.source, (int, float)):
            return {"s": float(self.source)}
        return self.source


_cache_lock = threading.Lock()


@lru_cache(maxsize=256)
def _exponent_family_cached(box: LatticeBox, s: float) -> WeightFamily:
    return WeightFamily(box, np.power(box.bracket, s), s)


@lru_cache(maxsize=256)
def _phi_family_cached(box: LatticeBox, phi: ROFunction) -> WeightFamily:
    return WeightFamily(box, phi(box.bracket), phi)


def _exponent_family(box, s):
    with _cache_lock:
        return _exponent_family_cached(box, s)


def _phi_family(box, phi):
    with _cache_lock:
        return _phi_family_cached(box, phi)


def _same(u: LatticeFunction, w: WeightFamily):
    if u.box != w.box:
        raise ShapeError(f"function box {u.box} does not match weight box {w.box}")


def h_phi_norm(u: LatticeFunction, w: WeightFamily) -> float:
    """``sqrt(sum_k w(k)^2 |u(k)|^2)``."""
    _same(u, w)
    a = w.weight * np.abs(u.values)
    return float(np.sqrt(pairwise_sum(a * a)))


def h_phi_inner(u: LatticeFunction, v: LatticeFunction, w: WeightFamily) -> complex:
    """``sum_k w(k)^2 u(k) conj(v(k))``."""
    _same(u, w)
    _same(v, w)
    return complex(pairwise_sum(w.weight**2 * u.values * np.conj(v.values)))


def sobolev_norm(u: LatticeFunction, s: float) -> float:
    return h_phi_norm(u, WeightFamily.from_exponent(u.box, s))


def duality_pairing_bound(u: LatticeFunction, v: LatticeFunction, s: float) -> tuple[complex, float]:
    """``((u, v), ||u||_(s) ||v||_(-s))``; Cauchy-Schwarz says the first never exceeds the second."""
    pairing = l2_inner(u, v)
    return pairing, sobolev_norm(u, s) * sobolev_norm(v, -s)


def duality_sup(u: LatticeFunction, s: float) -> tuple[float, LatticeFunction]:
    """Attain ``sup |(u, v)|`` over ``||v||_(-s) = 1``.

    The maximizer is ``v*(k) = <k>^{2s} u(k) / ||u||_(s)``.
    """
    w = WeightFamily.from_exponent(u.box, s)
    norm = h_phi_norm(u, w)
    if norm == 0.0:
        raise DegenerateInputError("duality_sup needs a non-zero function")
    vstar = LatticeFunction(u.box, w.weight**2 * u.values / norm)
    return abs(l2_inner(u, vstar)), vstar


@dataclass(frozen=True)
class EmbeddingConstant:
    """``C_N = (sum_box w^-2)^(1/2)`` and the same quantity on nested sub-boxes."""

    value: float
    trend: tuple[tuple[int, float], ...]

    def __float__(self):
        return self.value

    def to_dict(self) -> dict:
        return {"C": self.value, "trend": [[N, c] for N, c in self.trend]}


def linf_embedding_constant(w: WeightFamily, radii=None) -> EmbeddingConstant:
    """Constant of ``||u||_inf <= C ||u||_w`` on the box, with a tail trend over nested boxes."""
    if radii is None:
        N = w.box.N
        radii = sorted({max(1, N // 8), max(1, N // 4), max(1, N // 2), N})
    trend = []
    for r in radii:
        sub = w.restrict(LatticeBox(w.box.n, int(r))) if r != w.box.N else w
        trend.append((int(r), float(np.sqrt(pairwise_sum(sub.weight**-2.0)))))
    value = float(np.sqrt(pairwise_sum(w.weight**-2.0)))
    return EmbeddingConstant(value, tuple(trend))


def embedding_ratio(w0: WeightFamily, w1: WeightFamily) -> float:
    """Norm of the identity ``H^{w1} -> H^{w0}``: ``max_k w0(k) / w1(k)``."""
    if w0.box != w1.box:
        raise ShapeError("weight families live on different boxes")
    return float(np.max(w0.weight / w1.weight))


def norm_breakdown_csv(u: LatticeFunction, w: WeightFamily) -> str:
    """CSV rows ``k1..kn, weight, abs_u, contribution`` with contribution ``(w |u|)^2``."""
    _same(u, w)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow([f"k{j + 1}" for j in range(u.box.n)] + ["weight", "abs_u", "contribution"])
    a = np.abs(u.values)
    for k, wk, ak in zip(u.box.points, w.weight, a):
        out.writerow([int(c) for c in k] + [repr(float(wk)), repr(float(ak)), repr(float((wk * ak) ** 2))])
    return buf.getvalue()


def norm_summary(u: LatticeFunction, w: WeightFamily) -> dict:
    return {"norm": h_phi_norm(u, w), "s_or_family": w.describe(), "box": {"n": u.box.n, "N": u.box.N}}


def power_phi(s: float) -> ROFunction:
    return ROFunction(Power(float(s)))
