"""Truncated integer lattices and complex-valued functions on them.

A :class:`LatticeBox` is the cube ``{k in Z^n : |k_j| <= N}`` enumerated
lexicographically in ``(k_1, ..., k_n)`` with ``k_1`` varying slowest, which is
C order for an array of shape ``(2N+1,) * n`` whose axis ``j`` carries
``k_{j+1} + N``.  Every vector and matrix in the package uses this order.

Values outside a box are treated as exactly zero.  Reductions go through
``numpy.add.reduce`` on contiguous 1-D arrays, which is numpy's pairwise
summation with a fixed tree for a fixed length.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, ParameterError, ShapeError


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def pairwise_sum(x: np.ndarray):
    """Sum a 1-D array with numpy's pairwise reduction in enumeration order."""
    return np.add.reduce(np.ascontiguousarray(x).ravel())


def multiindex(alpha, n: int) -> tuple[int, ...]:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise DimensionError(f"multiindex {alpha} has length {len(alpha)}, expected {n}")
    if any(a < 0 for a in alpha):
        raise ParameterError(f"multiindex entries must be non-negative, got {alpha}")
    return alpha


def japanese_bracket(k) -> float:
    """Return ``<k> = (1 + |k|^2)^(1/2)`` for an integer vector ``k``."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.ndim != 1 or k.size == 0:
        raise DimensionError("japanese_bracket needs a non-empty vector")
    return float(np.sqrt(1.0 + np.dot(k, k)))


@dataclass(frozen=True)
class LatticeBox:
    n: int
    N: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DimensionError(f"dimension must be a positive integer, got {self.n}")
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"radius must be a positive integer, got {self.N}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "N", int(self.N))

    @property
    def side(self) -> int:
        return 2 * self.N + 1

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.side,) * self.n

    @property
    def cardinality(self) -> int:
        return self.side ** self.n

    def __len__(self):
        return self.cardinality

    @cached_property
    def points(self) -> np.ndarray:
        """Integer array of shape ``(cardinality, n)`` in enumeration order."""
        axes = np.indices(self.shape).reshape(self.n, -1).T - self.N
        return _readonly(np.ascontiguousarray(axes, dtype=np.int64))

    @cached_property
    def bracket(self) -> np.ndarray:
        """``<k>`` at every point."""
        p = self.points.astype(float)
        return _readonly(np.sqrt(1.0 + np.einsum("ij,ij->i", p, p)))

    @cached_property
    def norm(self) -> np.ndarray:
        """Euclidean ``|k|`` at every point."""
        p = self.points.astype(float)
        return _readonly(np.sqrt(np.einsum("ij,ij->i", p, p)))

    def contains(self, k) -> bool:
        k = np.asarray(k)
        return k.shape == (self.n,) and bool(np.all(np.abs(k) <= self.N))

    def index_of(self, k) -> int:
        k = np.asarray(k, dtype=np.int64)
        if not self.contains(k):
            raise ShapeError(f"{tuple(k)} is outside the box n={self.n}, N={self.N}")
        return int(np.ravel_multi_index(tuple(k + self.N), self.shape))

    def enlarged(self, r: int) -> "LatticeBox":
        return LatticeBox(self.n, self.N + int(r))

    def embed_indices(self, outer: "LatticeBox") -> np.ndarray:
        """Positions of this box's points inside the enumeration of ``outer``."""
        if outer.n != self.n or outer.N < self.N:
            raise ShapeError("outer box must contain this box")
        shifted = self.points + outer.N
        return np.ravel_multi_index(tuple(shifted.T), outer.shape)


@dataclass(frozen=True, eq=False)
class LatticeFunction:
    box: LatticeBox
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).ravel()
        if v.size != self.box.cardinality:
            raise ShapeError(
                f"{v.size} values for a box of cardinality {self.box.cardinality}"
            )
        object.__setattr__(self, "values", _readonly(v))

    # constructors

    @classmethod
    def zeros(cls, box: LatticeBox) -> "LatticeFunction":
        return cls(box, np.zeros(box.cardinality, dtype=np.complex128))

    @classmethod
    def delta(cls, box: LatticeBox, k=None, scale: complex = 1.0) -> "LatticeFunction":
        """Unit mass at ``k`` (the origin by default)."""
        if k is None:
            k = (0,) * box.n
        v = np.zeros(box.cardinality, dtype=np.complex128)
        v[box.index_of(k)] = scale
        return cls(box, v)

    @classmethod
    def from_callable(cls, box: LatticeBox, f: Callable[[np.ndarray], np.ndarray]):
        """Evaluate ``f`` on the ``(K, n)`` point array."""
        return cls(box, f(box.points))

    # arithmetic

    def _check(self, other: "LatticeFunction"):
        if not isinstance(other, LatticeFunction):
            return NotImplemented
        if other.box != self.box:
            raise ShapeError(f"box mismatch: {self.box} vs {other.box}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return LatticeFunction(self.box, self.values + other.values)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return LatticeFunction(self.box, self.values - other.values)

    def __mul__(self, c):
        if isinstance(c, LatticeFunction):
            self._check(c)
            return LatticeFunction(self.box, self.values * c.values)
        return LatticeFunction(self.box, self.values * complex(c))

    __rmul__ = __mul__

    def __neg__(self):
        return LatticeFunction(self.box, -self.values)

    def __eq__(self, other):
        if not isinstance(other, LatticeFunction):
            return NotImplemented
        return self.box == other.box and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.box, self.values.tobytes()))

    def as_array(self) -> np.ndarray:
        """Values reshaped to ``box.shape`` (read-only view)."""
        return self.values.reshape(self.box.shape)

    def __call__(self, k) -> complex:
        k = np.asarray(k)
        if not self.box.contains(k):
            return 0j
        return complex(self.values[self.box.index_of(k)])

    def restrict(self, box: LatticeBox) -> "LatticeFunction":
        return LatticeFunction(box, self.values[box.embed_indices(self.box)])

    def extend(self, box: LatticeBox) -> "LatticeFunction":
        v = np.zeros(box.cardinality, dtype=np.complex128)
        v[self.box.embed_indices(box)] = self.values
        return LatticeFunction(box, v)

    # serialization

    def to_json(self) -> str:
        payload = {
            "n": self.box.n,
            "N": self.box.N,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "LatticeFunction":
        d = json.loads(text)
        box = LatticeBox(d["n"], d["N"])
        pairs = np.asarray(d["values"], dtype=float).reshape(-1, 2)
        return cls(box, pairs[:, 0] + 1j * pairs[:, 1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"k{j + 1}" for j in range(self.box.n)] + ["re", "im"])
        for k, z in zip(self.box.points, self.values):
            w.writerow([int(c) for c in k] + [repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()


def _same_box(u: LatticeFunction, v: LatticeFunction):
    if u.box != v.box:
        raise ShapeError(f"box mismatch: {u.box} vs {v.box}")


def lp_norm(u: LatticeFunction, p=2) -> float:
    """The l^p norm over the box for ``p`` in ``{1, 2, inf}``."""
    a = np.abs(u.values)
    if p == 1:
        return float(pairwise_sum(a))
    if p == 2:
        return float(np.sqrt(pairwise_sum(a * a)))
    if p in (np.inf, "inf", "infinity"):
        return float(a.max()) if a.size else 0.0
    raise ParameterError(f"unsupported p={p!r}; use 1, 2 or inf")


def l2_inner(u: LatticeFunction, v: LatticeFunction) -> complex:
    """``(u, v) = sum_k u(k) conj(v(k))``, linear in ``u``."""
    _same_box(u, v)
    return complex(pairwise_sum(u.values * np.conj(v.values)))


def difference_along(a: np.ndarray, axis: int, times: int = 1) -> np.ndarray:
    """Apply ``u(k + e) - u(k)`` ``times`` times along ``axis``, zero beyond the edge."""
    out = np.array(a, dtype=np.result_type(a, np.float64), copy=True)
    for _ in range(times):
        nxt = np.zeros_like(out)
        src = [slice(None)] * out.ndim
        dst = [slice(None)] * out.ndim
        src[axis] = slice(1, None)
        dst[axis] = slice(None, -1)
        nxt[tuple(dst)] = out[tuple(src)]
        out = nxt - out
    return out


def forward_difference(u: LatticeFunction, alpha) -> LatticeFunction:
    """Mixed forward difference ``Delta^alpha`` with zero extension outside the box."""
    alpha = multiindex(alpha, u.box.n)
    arr = u.as_array()
    for axis, times in enumerate(alpha):
        if times:
            arr = difference_along(arr, axis, times)
    return LatticeFunction(u.box, arr.ravel())


def monomial(box: LatticeBox, alpha) -> np.ndarray:
    """``k^alpha`` at every box point, with ``0^0 = 1``."""
    alpha = multiindex(alpha, box.n)
    out = np.ones(box.cardinality)
    for j, a in enumerate(alpha):
        if a:
            out = out * box.points[:, j].astype(float) ** a
    return out


def schwartz_seminorm(u: LatticeFunction, alpha, beta) -> float:
    """``sup_k |k^alpha (Delta^beta u)(k)|`` over the box."""
    d = forward_difference(u, beta)
    return float(np.max(np.abs(monomial(u.box, alpha) * d.values)))


def difference_matrix(box: LatticeBox, axis: int = 0) -> np.ndarray:
    """Dense matrix of ``Delta_{k_axis}`` in enumeration order."""
    eye = np.eye(box.cardinality).reshape(box.shape + (box.cardinality,))
    return difference_along(eye, axis).reshape(box.cardinality, box.cardinality)


def stack(functions: Sequence[LatticeFunction]) -> np.ndarray:
    """Values of several functions on one box as columns of a matrix."""
    if not functions:
        raise ParameterError("nothing to stack")
    box = functions[0].box
    for f in functions:
        if f.box != box:
            raise ShapeError("functions live on different boxes")
    return np.column_stack([f.values for f in functions])
