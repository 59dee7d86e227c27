"""Symbols ``a(k, x) = sum_t f_t(<k>) sum_q c_{t,q} exp(2 pi i q.x)``.

Each term pairs a k-multiplier ``f_t`` from the RO family closure with a
trigonometric polynomial in ``x``.  Because the x-dependence is a finite mode
list, ``D^(beta)_x`` has a closed form (scale each mode by its falling
factorial), which serves as the derivative oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import CapabilityError, DimensionError, ParameterError
from ..lattice import LatticeBox, multiindex
from ..ro import Constant, Expr, Power, expr_from_spec
from ..torus import TorusGrid, falling_factorial


@dataclass(frozen=True)
class Term:
    k_factor: Expr
    modes: tuple  # ((q tuple), complex) pairs

    def poly(self, x: np.ndarray) -> np.ndarray:
        """Trig polynomial at points ``x`` of shape ``(P, n)``."""
        out = np.zeros(x.shape[0], dtype=np.complex128)
        for q, c in self.modes:
            out = out + c * np.exp(2j * np.pi * (x @ np.asarray(q, dtype=float)))
        return out

    def grid_poly(self, grid: TorusGrid) -> np.ndarray:
        """Trig polynomial on the grid, phases reduced modulo ``M`` in integers."""
        idx = np.indices(grid.shape).reshape(grid.n, -1).T
        out = np.zeros(grid.size, dtype=np.complex128)
        for q, c in self.modes:
            r = np.mod(idx @ np.asarray(q, dtype=np.int64), grid.M)
            out = out + c * np.exp(2j * np.pi * r / grid.M)
        return out

    def zero_mode(self) -> complex:
        return sum((c for q, c in self.modes if not any(q)), 0j)

    def mode_l1(self) -> float:
        return float(sum(abs(c) for _, c in self.modes))

    def lipschitz(self) -> float:
        """Lipschitz constant in ``x`` (Euclidean) of the trig polynomial."""
        return float(sum(2 * np.pi * abs(c) * np.linalg.norm(q) for q, c in self.modes))


@dataclass(frozen=True)
class Symbol:
    order: float
    terms: tuple
    n: int

    def __post_init__(self):
        if not self.terms:
            raise ParameterError("a symbol needs at least one term")
        for t in self.terms:
            for q, _ in t.modes:
                if len(q) != self.n:
                    raise DimensionError(f"mode {q} does not match dimension {self.n}")

    # construction

    @classmethod
    def from_terms(cls, order: float, terms, n: int) -> "Symbol":
        built = []
        for f, modes in terms:
            f = f if isinstance(f, Expr) else expr_from_spec(f)
            if not modes:
                modes = [((0,) * n, 1.0)]
            merged: dict = {}
            for q, c in modes:
                q = tuple(int(v) for v in q)
                merged[q] = merged.get(q, 0j) + complex(c)
            built.append(Term(f, tuple(sorted(merged.items()))))
        return cls(float(order), tuple(built), int(n))

    @classmethod
    def multiplier(cls, phi_spec, order: float, n: int) -> "Symbol":
        """x-independent symbol ``phi(<k>)``."""
        return cls.from_terms(order, [(phi_spec, None)], n)

    @classmethod
    def bracket_power(cls, m: float, n: int) -> "Symbol":
        return cls.from_terms(m, [(Power(float(m)), None)], n)

    @classmethod
    def constant(cls, c: complex, n: int) -> "Symbol":
        return cls.from_terms(0.0, [(Constant(1.0), [((0,) * n, c)])], n)

    @classmethod
    def from_spec(cls, spec, n: Optional[int] = None) -> "Symbol":
        """Read ``{"m": ..., "terms": [{"k_factor": ..., "x_modes": [{"q": [...], "coeff": [re, im]}]}]}``."""
        if isinstance(spec, str):
            spec = json.loads(spec)
        try:
            order = float(spec["m"])
            raw_terms = spec["terms"]
        except (KeyError, TypeError) as exc:
            raise ParameterError("symbol spec needs 'm' and 'terms'") from exc
        dims = {len(mode["q"]) for t in raw_terms for mode in t.get("x_modes", [])}
        if n is None:
            if len(dims) > 1:
                raise DimensionError(f"inconsistent mode dimensions {sorted(dims)}")
            n = dims.pop() if dims else int(spec.get("n", 1))
        terms = []
        for t in raw_terms:
            f = t.get("k_factor", {"family": "constant", "c": 1.0})
            modes = []
            for mode in t.get("x_modes", []):
                c = mode.get("coeff", [1.0, 0.0])
                c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
                modes.append((mode["q"], c))
            terms.append((f, modes))
        return cls.from_terms(order, terms, n)

    def spec(self) -> dict:
        return {
            "m": self.order,
            "n": self.n,
            "terms": [
                {
                    "k_factor": t.k_factor.spec(),
                    "x_modes": [{"q": list(q), "coeff": [c.real, c.imag]} for q, c in t.modes],
                }
                for t in self.terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.spec(), sort_keys=True)

    # structure

    @property
    def mode_radius(self) -> int:
        return max((max(abs(v) for v in q) for t in self.terms for q, _ in t.modes), default=0)

    @property
    def is_multiplier(self) -> bool:
        return all(not any(q) for t in self.terms for q, _ in t.modes)

    @property
    def has_derivative_oracle(self) -> bool:
        return True

    def k_factors(self, bracket: np.ndarray) -> np.ndarray:
        """``(T, K)`` array of ``f_t(<k>)``."""
        return np.stack([np.asarray(t.k_factor(bracket), dtype=float) * np.ones_like(bracket) for t in self.terms])

    def multiplier_values(self, box: LatticeBox) -> np.ndarray:
        """``a(k)`` for an x-independent symbol."""
        if not self.is_multiplier:
            raise CapabilityError("symbol depends on x")
        f = self.k_factors(box.bracket)
        z = np.array([t.zero_mode() for t in self.terms])
        return (z[:, None] * f).sum(axis=0)

    def evaluate(self, k, x) -> np.ndarray:
        """``a(k, x)`` for points ``k`` of shape ``(K, n)`` and ``x`` of shape ``(P, n)``, as ``(K, P)``."""
        k = np.atleast_2d(np.asarray(k, dtype=float))
        x = np.atleast_2d(np.asarray(x, dtype=float))
        br = np.sqrt(1.0 + np.einsum("ij,ij->i", k, k))
        f = self.k_factors(br)
        out = np.zeros((k.shape[0], x.shape[0]), dtype=np.complex128)
        for ft, t in zip(f, self.terms):
            out += np.outer(ft, t.poly(x))
        return out

    def __call__(self, k, x) -> complex:
        return complex(self.evaluate(np.reshape(k, (1, -1)), np.reshape(x, (1, -1)))[0, 0])

    def derivative(self, beta) -> "Symbol":
        """Closed-form ``D^(beta)_x a``."""
        beta = multiindex(beta, self.n)
        terms = []
        for t in self.terms:
            modes = []
            for q, c in t.modes:
                scale = 1.0
                for qj, bj in zip(q, beta):
                    scale *= float(falling_factorial(qj, bj))
                modes.append((q, c * scale))
            terms.append(Term(t.k_factor, tuple(modes)))
        return Symbol(self.order, tuple(terms), self.n)


def grid_for(symbol: Symbol, box: LatticeBox) -> TorusGrid:
    """Default grid resolving the box enlarged by the symbol's mode radius."""
    return TorusGrid.for_box(box, margin=symbol.mode_radius)
