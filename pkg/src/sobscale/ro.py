"""RO-varying weights, interpolation parameters and their analyses.

Functions are built from a closed set of named families plus product,
reciprocal, real powers and the quadratic composition
``phi0(t) * psi(phi1(t) / phi0(t))``.  Every instance is an immutable,
hashable expression tree with a JSON form, so any numeric estimate can be
cross-checked against an independent symbolic evaluation of the same tree.

Families (JSON ``{"family": name, ...}``):

``power``          ``t**s``  (alias ``bracket_power``)
``power_log``      ``t**s * log(e + t)**r``
``power_onelog``   ``t**s * (1 + log(max(t, 1)))**r``
``power_loglog``   ``t**s * log(e + log(e + t))**r``
``osc_exponent``   ``t**(s + amp * sin(log(1 + log(max(t, 1)))))``
``constant``       ``c``
``capped``         ``min(t, cap)``
``power_min``      ``min(t, 1)**s0 * max(t, 1)**s1`` (two-regime power)

Operations (JSON ``{"op": name, "args": [...]}``): ``product``,
``reciprocal``, ``power`` (with ``"p"``), ``compose_quadratic``
(args ``[phi0, phi1, psi]``), ``interp_from_phi`` and ``phi_from_interp``
(with ``"s0"``, ``"s1"``).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ParameterError

E = math.e
SQRT2 = math.sqrt(2.0)


# --------------------------------------------------------------------------
# expression nodes


class Expr:
    """Base for expression nodes.  Subclasses are frozen dataclasses."""

    def __call__(self, t):
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError

    def index_bounds(self) -> Optional[tuple[float, float]]:
        """Bounds ``lo <= sigma0 <= sigma1 <= hi`` on the Matuszewska indices, if known."""
        return None


@dataclass(frozen=True)
class Power(Expr):
    s: float

    def __call__(self, t):
        return np.power(np.asarray(t, dtype=float), self.s)

    def spec(self):
        return {"family": "power", "s": self.s}

    def index_bounds(self):
        return (self.s, self.s)


@dataclass(frozen=True)
class PowerLog(Expr):
    s: float
    r: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.power(t, self.s) * np.power(np.log(E + t), self.r)

    def spec(self):
        return {"family": "power_log", "s": self.s, "r": self.r}

    def index_bounds(self):
        return (self.s, self.s)


@dataclass(frozen=True)
class PowerOneLog(Expr):
    s: float
    r: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.power(t, self.s) * np.power(1.0 + np.log(np.maximum(t, 1.0)), self.r)

    def spec(self):
        return {"family": "power_onelog", "s": self.s, "r": self.r}

    def index_bounds(self):
        return (self.s, self.s)


@dataclass(frozen=True)
class PowerLogLog(Expr):
    s: float
    r: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.power(t, self.s) * np.power(np.log(E + np.log(E + t)), self.r)

    def spec(self):
        return {"family": "power_loglog", "s": self.s, "r": self.r}

    def index_bounds(self):
        return (self.s, self.s)


@dataclass(frozen=True)
class OscExponent(Expr):
    """``t**(s + amp*sin(log(1 + log t)))``; Matuszewska indices ``s -+ |amp| sqrt 2``."""

    s: float
    amp: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = np.log(np.maximum(t, 1.0))
        return np.power(t, self.s + self.amp * np.sin(np.log1p(u)))

    def spec(self):
        return {"family": "osc_exponent", "s": self.s, "amp": self.amp}

    def index_bounds(self):
        w = abs(self.amp) * SQRT2
        return (self.s - w, self.s + w)


@dataclass(frozen=True)
class Constant(Expr):
    c: float = 1.0

    def __call__(self, t):
        return np.full(np.shape(t), float(self.c))

    def spec(self):
        return {"family": "constant", "c": self.c}

    def index_bounds(self):
        return (0.0, 0.0)


@dataclass(frozen=True)
class Capped(Expr):
    cap: float

    def __call__(self, t):
        return np.minimum(np.asarray(t, dtype=float), self.cap)

    def spec(self):
        return {"family": "capped", "cap": self.cap}

    def index_bounds(self):
        return (0.0, 0.0)


@dataclass(frozen=True)
class PowerMin(Expr):
    """``t**s0`` below 1 and ``t**s1`` above; concave for ``0 <= s1 <= s0 <= 1``."""

    s0: float
    s1: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.power(np.minimum(t, 1.0), self.s0) * np.power(np.maximum(t, 1.0), self.s1)

    def spec(self):
        return {"family": "power_min", "s0": self.s0, "s1": self.s1}

    def index_bounds(self):
        return (self.s1, self.s1)


@dataclass(frozen=True)
class Product(Expr):
    args: tuple

    def __call__(self, t):
        out = self.args[0](t)
        for a in self.args[1:]:
            out = out * a(t)
        return out

    def spec(self):
        return {"op": "product", "args": [a.spec() for a in self.args]}

    def index_bounds(self):
        bs = [a.index_bounds() for a in self.args]
        if any(b is None for b in bs):
            return None
        return (sum(b[0] for b in bs), sum(b[1] for b in bs))


@dataclass(frozen=True)
class Reciprocal(Expr):
    arg: Expr

    def __call__(self, t):
        return 1.0 / self.arg(t)

    def spec(self):
        return {"op": "reciprocal", "args": [self.arg.spec()]}

    def index_bounds(self):
        b = self.arg.index_bounds()
        return None if b is None else (-b[1], -b[0])


@dataclass(frozen=True)
class PowerOf(Expr):
    arg: Expr
    p: float

    def __call__(self, t):
        return np.power(self.arg(t), self.p)

    def spec(self):
        return {"op": "power", "p": self.p, "args": [self.arg.spec()]}

    def index_bounds(self):
        b = self.arg.index_bounds()
        if b is None:
            return None
        lo, hi = self.p * b[0], self.p * b[1]
        return (min(lo, hi), max(lo, hi))


@dataclass(frozen=True)
class ComposeQuadratic(Expr):
    """``phi0(t) * psi(phi1(t) / phi0(t))``."""

    phi0: Expr
    phi1: Expr
    psi: Expr

    def __call__(self, t):
        a = self.phi0(t)
        return a * self.psi(self.phi1(t) / a)

    def spec(self):
        return {
            "op": "compose_quadratic",
            "args": [self.phi0.spec(), self.phi1.spec(), self.psi.spec()],
        }


@dataclass(frozen=True)
class InterpFromPhi(Expr):
    """``tau**(-s0/d) * phi(tau**(1/d))`` for ``tau >= 1``, ``phi(1)`` below; ``d = s1 - s0``."""

    phi: Expr
    s0: float
    s1: float

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        d = self.s1 - self.s0
        hi = np.maximum(tau, 1.0)
        upper = np.power(hi, -self.s0 / d) * self.phi(np.power(hi, 1.0 / d))
        low = self.phi(np.ones_like(tau))
        return np.where(tau >= 1.0, upper, low)

    def spec(self):
        return {"op": "interp_from_phi", "s0": self.s0, "s1": self.s1, "args": [self.phi.spec()]}

    def index_bounds(self):
        b = self.phi.index_bounds()
        if b is None:
            return None
        d = self.s1 - self.s0
        return ((b[0] - self.s0) / d, (b[1] - self.s0) / d)


@dataclass(frozen=True)
class PhiFromInterp(Expr):
    """``t**s0 * psi(t**(s1 - s0))``."""

    psi: Expr
    s0: float
    s1: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.power(t, self.s0) * self.psi(np.power(t, self.s1 - self.s0))

    def spec(self):
        return {"op": "phi_from_interp", "s0": self.s0, "s1": self.s1, "args": [self.psi.spec()]}

    def index_bounds(self):
        b = self.psi.index_bounds()
        if b is None:
            return None
        d = self.s1 - self.s0
        return (self.s0 + d * b[0], self.s0 + d * b[1])


_FAMILIES = {
    "power": (Power, ("s",)),
    "bracket_power": (Power, ("s",)),
    "power_log": (PowerLog, ("s", "r")),
    "power_onelog": (PowerOneLog, ("s", "r")),
    "power_loglog": (PowerLogLog, ("s", "r")),
    "osc_exponent": (OscExponent, ("s", "amp")),
    "constant": (Constant, ("c",)),
    "capped": (Capped, ("cap",)),
    "power_min": (PowerMin, ("s0", "s1")),
}


def expr_from_spec(spec) -> Expr:
    """Build an expression tree from its JSON form (dict or JSON text)."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    if isinstance(spec, Expr):
        return spec
    if not isinstance(spec, dict):
        raise ParameterError(f"cannot read a function spec from {spec!r}")
    if "family" in spec:
        name = spec["family"]
        if name not in _FAMILIES:
            raise ParameterError(f"unknown family {name!r}; known: {sorted(_FAMILIES)}")
        cls, keys = _FAMILIES[name]
        try:
            params = [float(spec[k]) for k in keys]
        except KeyError as exc:
            raise ParameterError(f"family {name!r} needs parameters {keys}") from exc
        if name == "constant" and params[0] <= 0:
            raise ParameterError("constant family needs c > 0")
        if name == "capped" and params[0] <= 0:
            raise ParameterError("capped family needs cap > 0")
        return cls(*params)
    op = spec.get("op")
    args = [expr_from_spec(a) for a in spec.get("args", [])]
    if op == "product":
        if not args:
            raise ParameterError("product needs at least one argument")
        return Product(tuple(args))
    if op == "reciprocal" and len(args) == 1:
        return Reciprocal(args[0])
    if op == "power" and len(args) == 1:
        return PowerOf(args[0], float(spec["p"]))
    if op == "compose_quadratic" and len(args) == 3:
        return ComposeQuadratic(*args)
    if op == "interp_from_phi" and len(args) == 1:
        return InterpFromPhi(args[0], float(spec["s0"]), float(spec["s1"]))
    if op == "phi_from_interp" and len(args) == 1:
        return PhiFromInterp(args[0], float(spec["s0"]), float(spec["s1"]))
    raise ParameterError(f"malformed function spec {spec!r}")


def _check_positive(values, t, what):
    values = np.asarray(values)
    bad = ~(np.isfinite(values) & (values > 0))
    if np.any(bad):
        tb = np.broadcast_to(np.asarray(t, dtype=float), values.shape)[bad]
        first = float(tb.ravel()[0])
        raise DomainError(f"{what} is not finite and positive at t={first!r}", t=first)
    return values


# --------------------------------------------------------------------------
# public types


@dataclass(frozen=True)
class ROFunction:
    """A positive function on ``[1, inf)`` with optional declared ``(s0, s1, c)``."""

    expr: Expr
    declared_bounds: Optional[tuple[float, float, float]] = None

    def __post_init__(self):
        if not isinstance(self.expr, Expr):
            object.__setattr__(self, "expr", expr_from_spec(self.expr))
        if self.declared_bounds is not None:
            s0, s1, c = (float(x) for x in self.declared_bounds)
            if s0 > s1 or c < 1:
                raise ParameterError(f"declared bounds need s0 <= s1 and c >= 1, got {self.declared_bounds}")
            object.__setattr__(self, "declared_bounds", (s0, s1, c))

    @classmethod
    def from_spec(cls, spec, declared_bounds=None) -> "ROFunction":
        return cls(expr_from_spec(spec), declared_bounds)

    @classmethod
    def power(cls, s: float) -> "ROFunction":
        return cls(Power(float(s)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 1.0):
            raise DomainError(f"RO functions live on [1, inf); got t={float(np.min(t))!r}", t=float(np.min(t)))
        return _check_positive(self.expr(t), t, "phi")

    def spec(self) -> dict:
        return self.expr.spec()

    def to_json(self) -> str:
        return json.dumps(self.spec(), sort_keys=True)

    def index_bounds(self):
        return self.expr.index_bounds()

    def reciprocal(self) -> "ROFunction":
        return ROFunction(Reciprocal(self.expr))

    def __mul__(self, other: "ROFunction") -> "ROFunction":
        return ROFunction(Product((self.expr, other.expr)))

    def __pow__(self, p: float) -> "ROFunction":
        return ROFunction(PowerOf(self.expr, float(p)))


@dataclass(frozen=True)
class InterpParameter:
    """A positive function on ``(0, inf)`` used as ``psi`` in ``psi(J)``."""

    expr: Expr
    provenance: tuple = ("user_supplied",)

    def __post_init__(self):
        if not isinstance(self.expr, Expr):
            object.__setattr__(self, "expr", expr_from_spec(self.expr))

    @classmethod
    def from_spec(cls, spec) -> "InterpParameter":
        return cls(expr_from_spec(spec))

    @classmethod
    def power(cls, theta: float) -> "InterpParameter":
        return cls(Power(float(theta)))

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        if np.any(tau <= 0):
            raise DomainError("interpolation parameters live on (0, inf)", t=float(np.min(tau)))
        return _check_positive(self.expr(tau), tau, "psi")

    def spec(self) -> dict:
        return self.expr.spec()

    def to_json(self) -> str:
        return json.dumps(self.spec(), sort_keys=True)


@dataclass(frozen=True)
class ROAnalysis:
    sigma0: float
    sigma1: float
    c_estimate: float
    grid: dict = field(default_factory=dict)
    verdict: str = "pass"

    def to_dict(self) -> dict:
        return {
            "sigma0": self.sigma0,
            "sigma1": self.sigma1,
            "c_estimate": self.c_estimate,
            "grid": self.grid,
            "verdict": self.verdict,
        }


# --------------------------------------------------------------------------
# analyses


def verify_ro(phi: ROFunction, a: float = 2.0, t_max: float = 1e6, grid_density: int = 200) -> ROAnalysis:
    """Scan ``phi(lam t) / phi(t)`` over log-spaced ``t`` in ``[1, t_max]`` and ``lam`` in ``[1, a]``."""
    if not a > 1:
        raise ParameterError(f"need a > 1, got {a}")
    if t_max < a:
        raise ParameterError(f"need t_max >= a, got t_max={t_max}, a={a}")
    if grid_density < 2:
        raise ParameterError("grid_density must be at least 2")
    t = np.geomspace(1.0, t_max, grid_density)
    lam = np.linspace(1.0, a, grid_density)
    base = phi(t)
    ratio = phi(np.outer(lam, t)) / base
    c = float(max(ratio.max(), (1.0 / ratio).max()))
    slopes = np.log(ratio[-1]) / math.log(a)
    return ROAnalysis(
        sigma0=float(slopes.min()),
        sigma1=float(slopes.max()),
        c_estimate=c,
        grid={"t": [1.0, float(t_max), grid_density, "geometric"], "lambda": [1.0, float(a), grid_density, "linear"]},
        verdict="pass" if math.isfinite(c) else "fail",
    )


def _tail_limit(t: np.ndarray, slopes: np.ndarray) -> Optional[float]:
    """Limit of a monotone slope curve as ``t -> inf``.

    Fits a quadratic in ``w = 1/log t`` on ``t >= sqrt(t_max)`` and evaluates
    it at ``w = 0``, clamped so the limit continues the monotone trend.
    Returns ``None`` when the curve is not monotone or the tail is too short.
    """
    d = np.diff(slopes)
    tol = 1e-12 * max(float(np.max(np.abs(slopes))), 1.0)
    down, up = bool(np.all(d <= tol)), bool(np.all(d >= -tol))
    if not (down or up):
        return None
    tail = t >= math.sqrt(t[-1])
    tail &= t > 1.0
    if tail.sum() < 4:
        return None
    w = 1.0 / np.log(t[tail])
    limit = float(np.polyval(np.polyfit(w, slopes[tail], 2), 0.0))
    if down and not up:
        limit = min(limit, float(slopes.min()))
    elif up and not down:
        limit = max(limit, float(slopes.max()))
    return limit


def estimate_matuszewska(
    phi: ROFunction,
    lambda_max: float = 1e4,
    t_max: float = 1e6,
    grid_density: int = 400,
    extrapolate: bool = True,
) -> ROAnalysis:
    """Grid estimate of the lower/upper Matuszewska indices.

    The raw estimate is the min/max over a log-spaced ``t`` grid of
    ``S(t) = log(phi(lambda_max t) / phi(t)) / log(lambda_max)``.  Slowly
    varying factors bias ``S`` by roughly ``1/log t``, so when ``S`` is
    monotone on the grid both indices are set to its tail limit (see
    :func:`_tail_limit`); oscillating curves keep the raw min/max.
    ``c_estimate`` is the smallest ``c`` making the two-sided power bound
    hold with the reported exponents on the grid ``t`` x
    ``lambda in [1, lambda_max]``.
    """
    if not lambda_max >= 10:
        raise ParameterError(f"lambda_max must be >= 10, got {lambda_max}")
    if t_max < 1:
        raise ParameterError("t_max must be >= 1")
    t = np.geomspace(1.0, t_max, grid_density)
    logphi_t = np.log(phi(t))
    L = math.log(lambda_max)
    slopes = (np.log(phi(lambda_max * t)) - logphi_t) / L
    raw = (float(slopes.min()), float(slopes.max()))
    limit = _tail_limit(t, slopes) if extrapolate else None
    s0, s1 = (limit, limit) if limit is not None else raw
    lam = np.geomspace(1.0, lambda_max, 64)
    logr = np.log(phi(np.outer(lam, t))) - logphi_t
    loglam = np.log(lam)[:, None]
    worst = np.maximum(s0 * loglam - logr, logr - s1 * loglam)
    c = float(np.exp(max(worst.max(), 0.0)))
    return ROAnalysis(
        sigma0=s0,
        sigma1=s1,
        c_estimate=c,
        grid={
            "t": [1.0, float(t_max), grid_density, "geometric"],
            "lambda": float(lambda_max),
            "lambda_c": [1.0, float(lambda_max), 64, "geometric"],
            "raw": list(raw),
            "method": "tail_limit" if limit is not None else "grid_scan",
        },
        verdict="pass" if math.isfinite(c) else "fail",
    )


def make_interp_parameter(phi: ROFunction, s0: float, s1: float, analysis: ROAnalysis | None = None) -> InterpParameter:
    """``psi(tau) = tau**(-s0/(s1-s0)) phi(tau**(1/(s1-s0)))`` for ``tau >= 1``, ``phi(1)`` below."""
    s0, s1 = float(s0), float(s1)
    if not s0 < s1:
        raise ParameterError(f"need s0 < s1, got s0={s0}, s1={s1}")
    if analysis is not None and not (s0 < analysis.sigma0 and s1 > analysis.sigma1):
        raise ParameterError(
            f"(s0, s1)=({s0}, {s1}) does not straddle the estimated indices "
            f"({analysis.sigma0:.6g}, {analysis.sigma1:.6g})"
        )
    return InterpParameter(InterpFromPhi(phi.expr, s0, s1), ("constructed_from_phi", s0, s1))


def reconstruct_phi(psi: InterpParameter, s0: float, s1: float) -> ROFunction:
    """``phi(t) = t**s0 * psi(t**(s1 - s0))`` on ``t >= 1``."""
    s0, s1 = float(s0), float(s1)
    if not s0 < s1:
        raise ParameterError(f"need s0 < s1, got s0={s0}, s1={s1}")
    return ROFunction(PhiFromInterp(psi.expr, s0, s1))


def ratio_bounded_near_infinity(f, g, t_max: float = 1e12, samples: int = 241) -> bool:
    """Heuristic: does ``f/g`` stay bounded as ``t`` grows?  Looks at the tail log-log slope."""
    t = np.geomspace(1.0, t_max, samples)
    r = np.log(np.asarray(f(t), dtype=float)) - np.log(np.asarray(g(t), dtype=float))
    tail = t >= t_max / 100.0
    slope = np.polyfit(np.log(t[tail]), r[tail], 1)[0]
    return bool(np.all(np.isfinite(r)) and slope <= 0.02)


def quadratic_compose(phi0: ROFunction, phi1: ROFunction, psi: InterpParameter) -> ROFunction:
    """``phi(t) = phi0(t) * psi(phi1(t) / phi0(t))``."""
    if not ratio_bounded_near_infinity(phi0, phi1):
        warnings.warn("phi0/phi1 does not look bounded near infinity", stacklevel=2)
    out = ROFunction(ComposeQuadratic(phi0.expr, phi1.expr, psi.expr))
    out(np.geomspace(1.0, 1e6, 61))
    return out


def upper_hull(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Indices of the upper convex hull of points sorted by ``x``."""
    hull: list[int] = []
    for i in range(len(x)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.asarray(hull)


def concave_majorant_ratio(psi, lo: float, hi: float, samples: int) -> float:
    """``sup psi1/psi`` with ``psi1`` the least concave majorant of ``psi`` sampled on ``[lo, hi]``."""
    t = np.geomspace(lo, hi, samples)
    y = np.asarray(psi(t), dtype=float)
    h = upper_hull(t, y)
    major = np.interp(t, t[h], y[h])
    return float(np.max(major / y))


@dataclass(frozen=True)
class PseudoconcavityReport:
    verdict: str
    ratio: float
    ratio_doubled: float
    threshold: float
    c_onset: float
    t_max: float
    samples: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_pseudoconcave(
    psi: InterpParameter,
    c_onset: float = 2.0,
    t_max: float = 1e4,
    threshold: float = 10.0,
    samples: int = 400,
    growth_tolerance: float = 0.1,
) -> PseudoconcavityReport:
    """Heuristic pseudoconcavity test on a sampled tail.

    Passes when the hull ratio ``sup psi1/psi`` is at most ``threshold`` on
    ``[c_onset, t_max]`` and on ``[c_onset, 2 t_max]``, and does not grow by
    more than ``growth_tolerance`` (relative) when ``t_max`` doubles.
    """
    if not c_onset > 1:
        raise ParameterError(f"c_onset must exceed 1, got {c_onset}")
    if samples < 3:
        raise ParameterError("need at least 3 sample points")
    if not t_max > c_onset:
        raise ParameterError("t_max must exceed c_onset")
    r1 = concave_majorant_ratio(psi, c_onset, t_max, samples)
    r2 = concave_majorant_ratio(psi, c_onset, 2.0 * t_max, samples)
    ok = r1 <= threshold and r2 <= threshold and r2 <= r1 * (1.0 + growth_tolerance)
    return PseudoconcavityReport(
        verdict="pass" if ok else "fail",
        ratio=r1,
        ratio_doubled=r2,
        threshold=threshold,
        c_onset=float(c_onset),
        t_max=float(t_max),
        samples=samples,
    )


def check_class_b(psi: InterpParameter, a: float = 1e-3, b: float = 1e3, c: float = 1.0, t_max: float = 1e9, samples: int = 400) -> dict:
    """Sampled class-B diagnostics: ``sup psi`` on ``[a, b]`` and ``sup 1/psi`` on ``(c, t_max]``."""
    inner = psi(np.geomspace(a, b, samples))
    tail = psi(np.geomspace(c, t_max, samples)[1:])
    sup_psi = float(inner.max())
    sup_inv = float((1.0 / tail).max())
    return {
        "sup_psi_on_ab": sup_psi,
        "sup_inverse_on_tail": sup_inv,
        "pass": bool(math.isfinite(sup_psi) and math.isfinite(sup_inv)),
    }


def builtin_phis() -> dict[str, ROFunction]:
    """Representatives of each named family, used by presets and tests."""
    return {
        "power": ROFunction(Power(1.5)),
        "power_log": ROFunction(PowerLog(1.5, 1.0)),
        "power_onelog": ROFunction(PowerOneLog(1.0, -0.5)),
        "power_loglog": ROFunction(PowerLogLog(0.5, 2.0)),
        "osc_exponent": ROFunction(OscExponent(1.0, 0.3)),
    }


def builtin_closure() -> dict[str, ROFunction]:
    """Named families plus one instance of each closure operation."""
    out = dict(builtin_phis())
    out["product"] = ROFunction(Product((Power(1.0), PowerLog(0.5, 1.0))))
    out["reciprocal"] = ROFunction(Reciprocal(PowerLog(1.0, 1.0)))
    out["power_op"] = ROFunction(PowerOf(PowerOneLog(1.0, 1.0), 2.0))
    out["compose_quadratic"] = ROFunction(ComposeQuadratic(Power(1.0), PowerLog(3.0, -1.0), Power(0.5)))
    return out
