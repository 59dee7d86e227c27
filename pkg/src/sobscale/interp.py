"""Interpolation with a function parameter between weighted lattice spaces.

For a pair ``[H^{phi0}, H^{phi1}]`` the generating operator is the multiplier
``J(k) = phi1(<k>) / phi0(<k>)``, so ``psi(J)`` is pointwise and the
interpolation norm is again a weighted l^2 norm with weight
``phi0(<k>) psi(J(k))``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, ShapeError
from .lattice import LatticeBox, LatticeFunction, _readonly
from .linalg import power_norm, weighted_conjugate
from .ro import (
    ComposeQuadratic,
    InterpParameter,
    ROFunction,
    estimate_matuszewska,
    make_interp_parameter,
    quadratic_compose,
    ratio_bounded_near_infinity,
)
from .rng import generator, random_function
from .spaces import WeightFamily, h_phi_norm

TOL = 1e-12


def _as_phi(x) -> ROFunction:
    if isinstance(x, ROFunction):
        return x
    return ROFunction.power(float(x))


@dataclass(frozen=True, eq=False)
class AdmissiblePair:
    box: LatticeBox
    w0: WeightFamily
    w1: WeightFamily
    J: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.w0.box != self.box or self.w1.box != self.box:
            raise ShapeError("pair weights must live on the pair's box")
        J = np.array(self.J, dtype=float).ravel()
        if not np.all(np.isfinite(J) & (J > 0)):
            raise DomainError("generating multiplier must be positive and finite")
        object.__setattr__(self, "J", _readonly(J))

    @classmethod
    def from_weights(cls, w0: WeightFamily, w1: WeightFamily) -> "AdmissiblePair":
        if w0.box != w1.box:
            raise ShapeError("weight families live on different boxes")
        return cls(w0.box, w0, w1, w1.weight / w0.weight)

    def isometry_defect(self, u: LatticeFunction) -> float:
        """Relative gap in ``||J u||_{w0} = ||u||_{w1}``."""
        ju = LatticeFunction(u.box, self.J * u.values)
        a, b = h_phi_norm(ju, self.w0), h_phi_norm(u, self.w1)
        return abs(a - b) / b if b else abs(a - b)


def make_pair(phi0, phi1, box: LatticeBox) -> AdmissiblePair:
    """Pair ``[H^{phi0}, H^{phi1}]``; numbers stand for ``t^s``."""
    p0, p1 = _as_phi(phi0), _as_phi(phi1)
    if not ratio_bounded_near_infinity(p0, p1):
        warnings.warn("phi0/phi1 does not look bounded near infinity", stacklevel=2)
    return AdmissiblePair.from_weights(WeightFamily.of(box, p0), WeightFamily.of(box, p1))


def sobolev_pair(s0: float, s1: float, box: LatticeBox) -> AdmissiblePair:
    return make_pair(float(s0), float(s1), box)


@dataclass(frozen=True, eq=False)
class InterpSpace:
    pair: AdmissiblePair
    psi: InterpParameter
    effective_weight: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = self.pair.w0.weight * self.psi(self.pair.J)
        if not np.all(np.isfinite(w) & (w > 0)):
            raise DomainError("interpolation weight must be positive and finite")
        object.__setattr__(self, "effective_weight", _readonly(w))

    def as_weight_family(self) -> WeightFamily:
        return WeightFamily(self.pair.box, self.effective_weight, ("interp", self.psi.spec()))


def interp_norm(u: LatticeFunction, space: InterpSpace) -> float:
    """``||psi(J) u||_{H0}``."""
    if u.box != space.pair.box:
        raise ShapeError("function and space live on different boxes")
    return h_phi_norm(u, space.as_weight_family())


def _max_rel_dev(box, trials, seed, lhs, rhs) -> float:
    rng = generator(seed)
    worst = 0.0
    for _ in range(trials):
        u = random_function(box, rng)
        a, b = lhs(u), rhs(u)
        worst = max(worst, abs(a - b) / b)
    return worst


def _report(claim, params, trials, dev, tol=TOL, **extra) -> dict:
    out = {
        "claim": claim,
        "parameters": params,
        "trials": trials,
        "max_rel_deviation": dev,
        "tolerance": tol,
        "pass": bool(dev <= tol),
    }
    out.update(extra)
    return out


def check_straddle(phi: ROFunction, s0: float, s1: float, lambda_max: float = 1e4, t_max: float = 1e6):
    """Raise unless ``s0 < sigma0`` and ``s1 > sigma1`` for both estimated and known indices."""
    est = estimate_matuszewska(phi, lambda_max, t_max)
    if not (s0 < est.sigma0 and s1 > est.sigma1):
        raise ParameterError(
            f"(s0, s1)=({s0}, {s1}) must straddle the estimated indices "
            f"sigma0={est.sigma0:.6g}, sigma1={est.sigma1:.6g}"
        )
    known = phi.index_bounds()
    if known is not None and not (s0 < known[0] and s1 > known[1]):
        raise ParameterError(f"(s0, s1)=({s0}, {s1}) must straddle the index bounds {known}")
    return est


def verify_theorem2(phi: ROFunction, s0: float, s1: float, box: LatticeBox, trials: int = 200, seed: int = 0) -> dict:
    """``[H^(s0), H^(s1)]_psi`` with ``psi`` built from ``phi`` has the ``H^phi`` norm."""
    est = check_straddle(phi, s0, s1)
    psi = make_interp_parameter(phi, s0, s1)
    space = InterpSpace(sobolev_pair(s0, s1, box), psi)
    wphi = WeightFamily.from_phi(box, phi)
    dev = _max_rel_dev(box, trials, seed, lambda u: interp_norm(u, space), lambda u: h_phi_norm(u, wphi))
    params = {
        "phi": phi.spec(),
        "s0": s0,
        "s1": s1,
        "n": box.n,
        "N": box.N,
        "seed": seed,
        "sigma_estimate": [est.sigma0, est.sigma1],
    }
    return _report("interp_sobolev_equals_h_phi", params, trials, dev)


def verify_theorem3(phi0: ROFunction, phi1: ROFunction, psi: InterpParameter, box: LatticeBox, trials: int = 200, seed: int = 0) -> dict:
    """``[H^{phi0}, H^{phi1}]_psi`` has the ``H^phi`` norm for ``phi = phi0 psi(phi1/phi0)``."""
    pair = make_pair(phi0, phi1, box)
    space = InterpSpace(pair, psi)
    phi = quadratic_compose(phi0, phi1, psi)
    wphi = WeightFamily.from_phi(box, phi)
    dev = _max_rel_dev(box, trials, seed, lambda u: interp_norm(u, space), lambda u: h_phi_norm(u, wphi))
    params = {"phi0": phi0.spec(), "phi1": phi1.spec(), "psi": psi.spec(), "n": box.n, "N": box.N, "seed": seed}
    return _report("quadratic_interpolation", params, trials, dev)


def verify_reiteration(
    pair: AdmissiblePair,
    lam: InterpParameter,
    eta: InterpParameter,
    psi: InterpParameter,
    box: LatticeBox | None = None,
    trials: int = 200,
    seed: int = 0,
) -> dict:
    """Interpolating ``[H_lam, H_eta]`` by ``psi`` gives ``H_omega``, ``omega = lam psi(eta/lam)``."""
    box = pair.box if box is None else box
    if box != pair.box:
        raise ShapeError("box does not match the pair")
    jr = pair.J
    ratio = lam(jr) / eta(jr)
    if not np.all(np.isfinite(ratio)):
        raise DomainError("lam/eta is not finite on the multiplier range")
    h_lam = InterpSpace(pair, lam).as_weight_family()
    h_eta = InterpSpace(pair, eta).as_weight_family()
    two_step = InterpSpace(AdmissiblePair.from_weights(h_lam, h_eta), psi)
    omega = InterpParameter(ComposeQuadratic(lam.expr, eta.expr, psi.expr), ("reiteration",))
    one_step = InterpSpace(pair, omega)
    dev = _max_rel_dev(box, trials, seed, lambda u: interp_norm(u, two_step), lambda u: interp_norm(u, one_step))
    params = {
        "pair": {"w0": pair.w0.describe(), "w1": pair.w1.describe()},
        "lambda": lam.spec(),
        "eta": eta.spec(),
        "psi": psi.spec(),
        "n": box.n,
        "N": box.N,
        "seed": seed,
    }
    return _report("reiteration", params, trials, dev)


def _as_matrix(T, box: LatticeBox):
    """Return ``(matrix, diagonal)``; exactly one is not ``None``."""
    if hasattr(T, "entries"):
        if T.box != box:
            raise ShapeError("operator lives on another box")
        return np.asarray(T.entries), None
    if isinstance(T, LatticeFunction):
        if T.box != box:
            raise ShapeError("multiplier lives on another box")
        return None, np.asarray(T.values)
    T = np.asarray(T)
    if T.ndim == 1:
        if T.size != box.cardinality:
            raise ShapeError("multiplier length does not match the box")
        return None, T
    if T.shape != (box.cardinality, box.cardinality):
        raise ShapeError(f"matrix shape {T.shape} does not match the box")
    return T, None


def interp_operator_bound(T, pair: AdmissiblePair, psi: InterpParameter, seed: int = 0) -> dict:
    """Norms of ``T`` on ``H0``, ``H1`` and ``H_psi``.

    Multipliers commute with the weights, so their norms are ``max |m|``
    exactly.  Matrices go through power iteration on ``W T W^-1`` with a dense
    SVD cross-check on small boxes.  ``C`` is ``n_psi / max(n0, n1)``; for
    ``psi = tau^theta`` the report also carries ``n0^(1-theta) n1^theta``.
    """
    box = pair.box
    mat, diag = _as_matrix(T, box)
    wpsi = InterpSpace(pair, psi).effective_weight
    weights = [pair.w0.weight, pair.w1.weight, wpsi]
    estimates = []
    if diag is not None:
        n = float(np.max(np.abs(diag))) if diag.size else 0.0
        norms = [n, n, n]
        details = [{"exact": True}] * 3
    else:
        norms, details = [], []
        for w in weights:
            est = power_norm(weighted_conjugate(mat, w, w), seed=seed)
            estimates.append(est)
            norms.append(est.value)
            details.append(est.to_dict())
    n0, n1, npsi = norms
    top = max(n0, n1)
    out = {
        "n0": n0,
        "n1": n1,
        "n_psi": npsi,
        "max_endpoint": top,
        "C": npsi / top if top > 0 else 1.0,
        "estimates": details,
    }
    theta = _power_exponent(psi)
    if theta is not None and 0 <= theta <= 1:
        out["theta"] = theta
        out["power_bound"] = n0 ** (1 - theta) * n1**theta
    return out


def _power_exponent(psi: InterpParameter):
    spec = psi.spec()
    if spec.get("family") in ("power", "bracket_power"):
        return float(spec["s"])
    return None


def lower_upper_constants(space: InterpSpace) -> tuple[float, float]:
    """Extremal ratios ``c, c'`` with ``||u||_{w1} >= c ||u||_psi >= c' ||u||_{w0}``."""
    w0, w1, wp = space.pair.w0.weight, space.pair.w1.weight, space.effective_weight
    c = float(np.min(w1 / wp))
    cp = c * float(np.min(wp / w0))
    return c, cp
