"""Independent reference implementations used by the tests.

Nothing here imports numerical code from the package: the function-spec
oracle re-reads the JSON form into sympy and evaluates it with mpmath, and
the operator oracle writes matrix entries from their closed form.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
import sympy as sp

T = sp.Symbol("t", positive=True)
mpmath.mp.dps = 40


def spec_to_sympy(spec, t=T):
    """Translate a function spec into a sympy expression in ``t``."""
    if "family" in spec:
        f = spec["family"]
        E = sp.E
        if f in ("power", "bracket_power"):
            return t ** sp.nsimplify(spec["s"])
        if f == "power_log":
            return t ** sp.nsimplify(spec["s"]) * sp.log(E + t) ** sp.nsimplify(spec["r"])
        if f == "power_onelog":
            return t ** sp.nsimplify(spec["s"]) * (1 + sp.log(t)) ** sp.nsimplify(spec["r"])
        if f == "power_loglog":
            return t ** sp.nsimplify(spec["s"]) * sp.log(E + sp.log(E + t)) ** sp.nsimplify(spec["r"])
        if f == "osc_exponent":
            return t ** (sp.nsimplify(spec["s"]) + sp.nsimplify(spec["amp"]) * sp.sin(sp.log(1 + sp.log(t))))
        if f == "constant":
            return sp.nsimplify(spec["c"]) + 0 * t
        if f == "capped":
            return sp.Min(t, sp.nsimplify(spec["cap"]))
        raise KeyError(f)
    args = spec["args"]
    op = spec["op"]
    if op == "product":
        out = sp.Integer(1)
        for a in args:
            out = out * spec_to_sympy(a, t)
        return out
    if op == "reciprocal":
        return 1 / spec_to_sympy(args[0], t)
    if op == "power":
        return spec_to_sympy(args[0], t) ** sp.nsimplify(spec["p"])
    if op == "compose_quadratic":
        p0 = spec_to_sympy(args[0], t)
        p1 = spec_to_sympy(args[1], t)
        return p0 * spec_to_sympy(args[2], t).subs(t, p1 / p0)
    if op == "interp_from_phi":
        # only evaluated for t >= 1 here
        s0, s1 = sp.nsimplify(spec["s0"]), sp.nsimplify(spec["s1"])
        d = s1 - s0
        return t ** (-s0 / d) * spec_to_sympy(args[0], t).subs(t, t ** (1 / d))
    if op == "phi_from_interp":
        s0, s1 = sp.nsimplify(spec["s0"]), sp.nsimplify(spec["s1"])
        return t**s0 * spec_to_sympy(args[0], t).subs(t, t ** (s1 - s0))
    raise KeyError(op)


def evaluate(spec, ts) -> np.ndarray:
    """High-precision values of ``spec`` at ``ts``, returned as floats."""
    f = sp.lambdify(T, spec_to_sympy(spec), modules="mpmath")
    return np.array([float(f(mpmath.mpf(float(x)))) for x in np.ravel(ts)])


def pdo_entry_matrix(terms, points: np.ndarray) -> np.ndarray:
    """``T[k, k'] = sum_t f_t(<k>) c_{t, k' - k}`` from the closed form.

    ``terms`` is a list of ``(f, {q: c})`` with ``f`` a callable of ``<k>``.
    """
    K = points.shape[0]
    index = {tuple(int(v) for v in p): i for i, p in enumerate(points)}
    out = np.zeros((K, K), dtype=complex)
    br = np.sqrt(1.0 + np.sum(points.astype(float) ** 2, axis=1))
    for i, k in enumerate(points):
        for f, modes in terms:
            for q, c in modes.items():
                j = index.get(tuple(int(a + b) for a, b in zip(k, q)))
                if j is not None:
                    out[i, j] += f(br[i]) * c
    return out


def direct_dft(values: np.ndarray, points: np.ndarray, M: int) -> np.ndarray:
    """``u_hat(m/M) = sum_k u(k) exp(-2 pi i k.m/M)`` by brute force."""
    n = points.shape[1]
    nodes = np.indices((M,) * n).reshape(n, -1).T / M
    return np.exp(-2j * np.pi * nodes @ points.T.astype(float)) @ values


PI_COTH_PI = float(mpmath.pi / mpmath.tanh(mpmath.pi))


def partial_sum_bracket(N: int) -> float:
    """``sum_{|k| <= N} 1/(1 + k^2)`` with mpmath."""
    return float(1 + 2 * mpmath.fsum(1 / (1 + mpmath.mpf(k) ** 2) for k in range(1, N + 1)))


def rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), np.finfo(float).tiny)))


assert math.isclose(PI_COTH_PI, 3.15334809493716, rel_tol=1e-13)
