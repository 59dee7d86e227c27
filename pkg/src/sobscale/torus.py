"""Uniform torus grids and the lattice/torus Fourier pair.

The transforms are the literal finite sums

    u_hat(x_m) = sum_k exp(-2 pi i k.x_m) u(k)
    u(k)       = M^-n sum_m exp(2 pi i k.x_m) u_hat(x_m)

evaluated axis by axis (the exponential factorizes over coordinates), so the
reference semantics are those of the naive O(K M^n) sum.  Phases are reduced
modulo ``M`` in integer arithmetic before exponentiation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionError, ParameterError, ResolutionError, ShapeError
from .lattice import LatticeBox, LatticeFunction, multiindex, _readonly


@dataclass(frozen=True)
class TorusGrid:
    n: int
    M: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DimensionError(f"dimension must be a positive integer, got {self.n}")
        if int(self.M) != self.M or self.M < 1:
            raise ParameterError(f"points per axis must be positive, got {self.M}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "M", int(self.M))

    @classmethod
    def for_box(cls, box: LatticeBox, margin: int = 0) -> "TorusGrid":
        """Default grid: ``2(2N'+1)`` rounded up to odd, with ``N' = N + margin``."""
        m = 2 * (2 * (box.N + margin) + 1) + 1
        return cls(box.n, m)

    @property
    def size(self) -> int:
        return self.M ** self.n

    @property
    def weight(self) -> float:
        return 1.0 / self.size

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.M,) * self.n

    @property
    def nodes(self) -> np.ndarray:
        """``(M^n, n)`` array of nodes ``m / M`` in lexicographic order."""
        idx = np.indices(self.shape).reshape(self.n, -1).T
        return idx / self.M

    @property
    def modes(self) -> np.ndarray:
        """Integer frequency carried by each FFT slot along one axis.

        Odd ``M`` gives ``[-(M-1)/2, (M-1)/2]``; even ``M`` puts the ambiguous
        mode at ``+M/2``.
        """
        m = np.arange(self.M)
        return m - self.M * (m > self.M // 2)

    def check_box(self, box: LatticeBox) -> None:
        if box.n != self.n:
            raise ShapeError(f"grid dimension {self.n} does not match box dimension {box.n}")
        if self.M < 2 * box.N + 1:
            raise ResolutionError(
                f"M={self.M} undersamples a box of radius N={box.N}; need M >= 2N+1 = {2 * box.N + 1}"
            )


@dataclass(frozen=True, eq=False)
class TorusSamples:
    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).ravel()
        if v.size != self.grid.size:
            raise ShapeError(f"{v.size} samples for a grid of {self.grid.size} nodes")
        object.__setattr__(self, "values", _readonly(v))

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def __add__(self, other):
        if not isinstance(other, TorusSamples):
            return NotImplemented
        if other.grid != self.grid:
            raise ShapeError("grid mismatch")
        return TorusSamples(self.grid, self.values + other.values)

    def __mul__(self, c):
        if isinstance(c, TorusSamples):
            if c.grid != self.grid:
                raise ShapeError("grid mismatch")
            return TorusSamples(self.grid, self.values * c.values)
        return TorusSamples(self.grid, self.values * complex(c))

    __rmul__ = __mul__

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.grid.n,
                "M": self.grid.M,
                "values": [[float(z.real), float(z.imag)] for z in self.values],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TorusSamples":
        d = json.loads(text)
        pairs = np.asarray(d["values"], dtype=float).reshape(-1, 2)
        return cls(TorusGrid(d["n"], d["M"]), pairs[:, 0] + 1j * pairs[:, 1])


@lru_cache(maxsize=64)
def _phase_matrix(M: int, N: int, sign: int) -> np.ndarray:
    """``exp(sign * 2 pi i k m / M)`` with rows m = 0..M-1 and columns k = -N..N."""
    k = np.arange(-N, N + 1)
    m = np.arange(M)
    r = np.mod(np.outer(m, k), M)
    return _readonly(np.exp(sign * 2j * np.pi * r / M))


def apply_axes(arr: np.ndarray, mats, n: int) -> np.ndarray:
    """Contract axis ``j < n`` of ``arr`` with ``mats[j]`` (out, in); trailing axes ride along."""
    for axis in range(n):
        arr = np.moveaxis(np.tensordot(mats[axis], arr, axes=([1], [axis])), 0, axis)
    return arr


def dft_array(values: np.ndarray, box: LatticeBox, grid: TorusGrid) -> np.ndarray:
    """Forward transform of ``values`` with shape ``(K,)`` or ``(K, batch)``."""
    grid.check_box(box)
    batch = values.shape[1:]
    arr = np.asarray(values, dtype=np.complex128).reshape(box.shape + batch)
    F = _phase_matrix(grid.M, box.N, -1)
    return apply_axes(arr, [F] * box.n, box.n).reshape((grid.size,) + batch)


def idft_array(values: np.ndarray, grid: TorusGrid, box: LatticeBox) -> np.ndarray:
    """Inverse transform onto ``box`` of samples with shape ``(M^n,)`` or ``(M^n, batch)``."""
    grid.check_box(box)
    batch = values.shape[1:]
    arr = np.asarray(values, dtype=np.complex128).reshape(grid.shape + batch)
    G = _phase_matrix(grid.M, box.N, 1).T / grid.M
    return apply_axes(arr, [G] * box.n, box.n).reshape((box.cardinality,) + batch)


def dft(u: LatticeFunction, grid: TorusGrid) -> TorusSamples:
    return TorusSamples(grid, dft_array(u.values, u.box, grid))


def idft(samples: TorusSamples, box: LatticeBox) -> LatticeFunction:
    return LatticeFunction(box, idft_array(samples.values, samples.grid, box))


def falling_factorial(q, l: int):
    """``q (q-1) ... (q-l+1)``; the empty product is 1."""
    q = np.asarray(q, dtype=float)
    out = np.ones_like(q)
    for r in range(int(l)):
        out = out * (q - r)
    return out


def mode_samples(grid: TorusGrid, q, coeff: complex = 1.0) -> TorusSamples:
    """Samples of ``coeff * exp(2 pi i q.x)`` on the grid."""
    q = np.asarray(q, dtype=np.int64).reshape(-1)
    if q.size != grid.n:
        raise DimensionError(f"mode {tuple(q)} does not match grid dimension {grid.n}")
    idx = np.indices(grid.shape).reshape(grid.n, -1).T
    r = np.mod(idx @ q, grid.M)
    return TorusSamples(grid, coeff * np.exp(2j * np.pi * r / grid.M))


def falling_factorial_derivative(samples: TorusSamples, beta) -> TorusSamples:
    """Apply ``D^(beta)_x`` spectrally.

    On ``exp(2 pi i q.x)`` the operator multiplies by
    ``prod_j q_j (q_j - 1) ... (q_j - beta_j + 1)``.
    """
    grid = samples.grid
    beta = multiindex(beta, grid.n)
    if not any(beta):
        return samples
    coef = np.fft.fftn(samples.as_array())
    q = grid.modes
    for axis, b in enumerate(beta):
        if b:
            shape = [1] * grid.n
            shape[axis] = grid.M
            coef = coef * falling_factorial(q, b).reshape(shape)
    return TorusSamples(grid, np.fft.ifftn(coef).ravel())


def plancherel_defect(u: LatticeFunction, grid: TorusGrid) -> float:
    """Relative gap between ``sum |u|^2`` and the grid quadrature of ``|u_hat|^2``."""
    lhs = float(np.sum(np.abs(u.values) ** 2))
    uh = dft(u, grid).values
    rhs = float(np.sum(np.abs(uh) ** 2)) * grid.weight
    return abs(lhs - rhs) / max(lhs, np.finfo(float).tiny)
