"""Named verification bundles run by ``sobscale suite --preset NAME``.

Each preset returns ``(checks, results)``: a list of check records
``{"name", "pass", ...}`` and a dict of supporting numbers.
"""

from __future__ import annotations

import math

import numpy as np

from .interp import sobolev_pair, verify_reiteration, verify_theorem2, verify_theorem3
from .lattice import LatticeBox
from .pdo import (
    Symbol,
    ascale_build,
    fredholm_surrogate,
    mapping_norm_scan,
    pdo_matrix,
    range_decomposition,
    verify_theorem7,
)
from .ro import (
    Constant,
    InterpParameter,
    OscExponent,
    Power,
    PowerLog,
    PowerLogLog,
    PowerOneLog,
    ROFunction,
    make_interp_parameter,
)
from .rng import complex_gaussian, generator, random_function
from .spaces import WeightFamily, duality_pairing_bound, duality_sup, embedding_ratio, h_phi_norm, linf_embedding_constant, sobolev_norm

TOL = 1e-12
PI_COTH_PI = math.pi / math.tanh(math.pi)


def check(name: str, ok: bool, **info) -> dict:
    out = {"name": name, "pass": bool(ok)}
    out.update(info)
    return out


def theorem2_cases():
    """Five families, three straddles each around their index bounds."""
    families = [
        ROFunction(Power(1.5)),
        ROFunction(PowerLog(1.5, 1.0)),
        ROFunction(PowerOneLog(1.0, -0.5)),
        ROFunction(PowerLogLog(0.5, 2.0)),
        ROFunction(OscExponent(1.0, 0.3)),
    ]
    cases = []
    for phi in families:
        lo, hi = phi.index_bounds()
        for d0, d1 in ((0.5, 0.5), (2.0, 0.25), (0.1, 3.0)):
            cases.append((phi, round(lo - d0, 12), round(hi + d1, 12)))
    return cases


def theorem3_cases():
    log_inv = ROFunction({"op": "product", "args": [{"family": "power", "s": 1}, {"family": "power_log", "s": 0, "r": -1}]})
    inner = make_interp_parameter(ROFunction(PowerLog(1.5, 1.0)), 0.5, 2.5)
    return [
        (ROFunction(Power(1.0)), ROFunction(Power(3.0)), InterpParameter(Power(0.5))),
        (ROFunction(Power(1.0)), ROFunction(Power(3.0)), InterpParameter(Constant(1.0))),
        (log_inv, ROFunction(Power(2.0)), InterpParameter(Power(1.0 / 3.0))),
        (ROFunction(Power(0.0)), ROFunction(PowerLog(2.0, 1.0)), InterpParameter(PowerOneLog(0.5, 1.0))),
        (ROFunction(Power(0.5)), ROFunction(PowerOneLog(2.5, 1.0)), inner),
    ]


def reiteration_cases():
    return [
        (InterpParameter(Power(0.25)), InterpParameter(Power(0.75)), InterpParameter(Power(0.5))),
        (InterpParameter(Power(0.25)), InterpParameter(Power(0.75)), InterpParameter(Constant(1.0))),
        (InterpParameter(Power(1.0 / 3.0)), InterpParameter(PowerOneLog(2.0 / 3.0, -0.25)), InterpParameter(Power(0.5))),
    ]


def preset_theorem2(seed: int, trials: int = 200, n: int = 2, N: int = 6):
    box = LatticeBox(n, N)
    checks, reports = [], []
    for i, (phi, s0, s1) in enumerate(theorem2_cases()):
        r = verify_theorem2(phi, s0, s1, box, trials, seed + i)
        reports.append(r)
        checks.append(check(f"theorem2[{i}]", r["pass"], max_rel_deviation=r["max_rel_deviation"], tolerance=TOL))
    return checks, {"reports": reports}


def preset_theorem3(seed: int, trials: int = 200, n: int = 1, N: int = 8):
    box = LatticeBox(n, N)
    checks, reports = [], []
    for i, (p0, p1, psi) in enumerate(theorem3_cases()):
        r = verify_theorem3(p0, p1, psi, box, trials, seed + i)
        reports.append(r)
        checks.append(check(f"theorem3[{i}]", r["pass"], max_rel_deviation=r["max_rel_deviation"], tolerance=TOL))
    pair = sobolev_pair(0.0, 2.0, box)
    for i, (lam, eta, psi) in enumerate(reiteration_cases()):
        r = verify_reiteration(pair, lam, eta, psi, box, trials, seed + 100 + i)
        reports.append(r)
        checks.append(check(f"reiteration[{i}]", r["pass"], max_rel_deviation=r["max_rel_deviation"], tolerance=TOL))
    return checks, {"reports": reports}


def preset_theorem4(seed: int, trials: int = 1000, n: int = 1, N: int = 16):
    rng = generator(seed)
    checks = []
    box = LatticeBox(n, N)
    r = embedding_ratio(WeightFamily.from_exponent(box, 1.0), WeightFamily.from_exponent(box, 2.0))
    checks.append(check("embedding_ratio_t_vs_t2", abs(r - 1.0) <= TOL, value=r))
    r = embedding_ratio(WeightFamily.from_exponent(box, 2.0), WeightFamily.from_exponent(box, 1.0))
    edge = math.sqrt(1.0 + n * N * N)
    checks.append(check("embedding_ratio_t2_vs_t", abs(r - edge) <= TOL * edge, value=r, expected=edge))
    phi = ROFunction(Power(1.0))
    w = WeightFamily.from_phi(box, phi)
    C = linf_embedding_constant(w)
    worst = 0.0
    for _ in range(trials):
        u = random_function(box, rng)
        worst = max(worst, float(np.max(np.abs(u.values))) / (C.value * h_phi_norm(u, w)))
    checks.append(check("linf_embedding_contract", worst <= 1.0 + TOL, max_ratio=worst, trials=trials))
    big = linf_embedding_constant(WeightFamily.from_phi(LatticeBox(1, 2000), phi), radii=[250, 500, 1000, 2000])
    gap = abs(big.value**2 - PI_COTH_PI)
    checks.append(check("linf_constant_converges", gap < 1e-3, C_squared=big.value**2, target=PI_COTH_PI, gap=gap))
    dev = 0.0
    for _ in range(200):
        u = random_function(box, rng)
        sup, _ = duality_sup(u, 1.0)
        dev = max(dev, abs(sup - sobolev_norm(u, 1.0)) / sobolev_norm(u, 1.0))
    checks.append(check("mutual_duality_sup", dev <= TOL, max_rel_deviation=dev))
    return checks, {"C_N": C.to_dict(), "C_2000": big.to_dict()}


def fd_symbol(n: int = 1) -> Symbol:
    """``exp(2 pi i x_1) - 1``."""
    e1 = (1,) + (0,) * (n - 1)
    return Symbol.from_terms(0.0, [(Constant(1.0), [(e1, 1.0), ((0,) * n, -1.0)])], n)


def preset_theorem5(seed: int, trials: int = 0, n: int = 1, radii=(4, 8, 16)):
    checks, results = [], {}
    mults = {
        "bracket_power_1": (Symbol.bracket_power(1.0, n), ROFunction(Power(1.0))),
        "bracket_power_-1": (Symbol.bracket_power(-1.0, n), ROFunction(PowerLog(0.5, 1.0))),
        "bracket_power_2": (Symbol.bracket_power(2.0, n), ROFunction(OscExponent(1.0, 0.3))),
    }
    for name, (a, phi) in mults.items():
        scan = mapping_norm_scan(a, phi, radii, n)
        dev = max(abs(v - 1.0) for _, v in scan)
        results[name] = scan
        checks.append(check(f"multiplier_norm_one[{name}]", dev <= 1e-14, max_abs_deviation=dev))
    scan = mapping_norm_scan(fd_symbol(n), ROFunction(Power(1.0)), radii, n)
    results["forward_difference"] = scan
    vals = [v for _, v in scan]
    change = abs(vals[-1] - vals[-2]) / vals[-2]
    checks.append(check("forward_difference_bounded", max(vals) <= 4.0, max_norm=max(vals)))
    checks.append(check("forward_difference_settles", change < 0.05, relative_change=change))
    return checks, results


def perturbed_bracket(eps: float, n: int = 1) -> Symbol:
    """``<k> + eps cos(2 pi x_1)``."""
    e1 = (1,) + (0,) * (n - 1)
    m1 = tuple(-v for v in e1)
    return Symbol.from_terms(1.0, [(Power(1.0), None), (Constant(1.0), [(e1, eps / 2), (m1, eps / 2)])], n)


def modulated_bracket(eps: float, n: int = 1) -> Symbol:
    """``<k> (1 + eps cos(2 pi x_1))``."""
    e1 = (1,) + (0,) * (n - 1)
    m1 = tuple(-v for v in e1)
    return Symbol.from_terms(1.0, [(Power(1.0), [((0,) * n, 1.0), (e1, eps / 2), (m1, eps / 2)])], n)


def shifted_square(n: int = 1) -> Symbol:
    """``<k>^2 - 2``; vanishes at ``|k| = 1``."""
    return Symbol.from_terms(2.0, [(Power(2.0), None), (Constant(1.0), [((0,) * n, -2.0)])], n)


def preset_theorem6(seed: int, trials: int = 0, n: int = 1, N: int = 16, s_values=(0.0, 1.0, 2.5)):
    box = LatticeBox(n, N)
    scale = ascale_build(perturbed_bracket(0.3, n), box)
    checks, reports = [], []
    defects = []
    for s in s_values:
        r = fredholm_surrogate(scale.operator, s)
        reports.append(r.to_dict())
        defects.append(r.rank_defect)
        ok = r.dim_ker == 0 and r.dim_coker == 0 and r.index == 0 and r.s_independent
        checks.append(check(f"fredholm_elliptic[s={s}]", ok, dim_ker=r.dim_ker, dim_coker=r.dim_coker, index=r.index))
    checks.append(check("rank_defect_s_independent", len(set(defects)) == 1, rank_defects=defects))
    sq = pdo_matrix(shifted_square(n), box)
    r = fredholm_surrogate(sq, 0.0)
    reports.append(r.to_dict())
    checks.append(check("fredholm_kernel_example", r.dim_ker == 2 * n and r.index == 0, dim_ker=r.dim_ker, index=r.index))
    v = complex_gaussian(generator(seed), box.cardinality)
    d = range_decomposition(sq, v)
    checks.append(
        check(
            "range_kernel_orthogonality",
            d["reconstruction_residual"] <= 1e-10 and d["orthogonality_defect"] <= 1e-10,
            reconstruction_residual=d["reconstruction_residual"],
            orthogonality_defect=d["orthogonality_defect"],
        )
    )
    return checks, {"reports": reports, "shift": scale.shift}


def preset_theorem7(seed: int, trials: int = 200, n: int = 1, radii=(4, 8, 16)):
    checks, results = [], {}
    phi = ROFunction(Power(1.0))
    r = verify_theorem7(Symbol.bracket_power(1.0, n), phi, radii, trials, seed)
    dev = max(max(abs(b["min_ratio"] - 1), abs(b["max_ratio"] - 1)) for b in r["bands"])
    checks.append(check("multiplier_ratio_one", dev <= TOL, max_abs_deviation=dev))
    results["multiplier"] = r
    r = verify_theorem7(modulated_bracket(0.2, n), phi, radii, trials, seed + 1)
    widths = [b["width"] for b in r["bands"]]
    inside = all(0.5 <= b["min_ratio"] and b["max_ratio"] <= 2.0 for b in r["bands"])
    checks.append(check("perturbed_band_inside", inside, bands=[[b["min_ratio"], b["max_ratio"]] for b in r["bands"]]))
    checks.append(check("perturbed_band_not_widening", widths[-1] <= widths[-2], widths=widths))
    results["perturbed"] = r
    r = verify_theorem7(modulated_bracket(0.2, n), ROFunction(Constant(1.0)), radii, trials, seed + 2)
    dev = max(max(abs(b["min_ratio"] - 1), abs(b["max_ratio"] - 1)) for b in r["bands"])
    checks.append(check("constant_phi_ratio_one", dev <= TOL, max_abs_deviation=dev))
    results["constant_phi"] = r
    return checks, results


def preset_duality(seed: int, trials: int = 10000, n: int = 2, N: int = 4, s: float = 1.5):
    rng = generator(seed)
    box = LatticeBox(n, N)
    worst_cs = 0.0
    for _ in range(trials):
        u = random_function(box, rng)
        v = random_function(box, rng)
        pairing, bound = duality_pairing_bound(u, v, s)
        worst_cs = max(worst_cs, abs(pairing) / bound)
    dev_sup, dev_unit = 0.0, 0.0
    for _ in range(min(trials, 1000)):
        u = random_function(box, rng)
        sup, vstar = duality_sup(u, s)
        norm = sobolev_norm(u, s)
        dev_sup = max(dev_sup, abs(sup - norm) / norm)
        dev_unit = max(dev_unit, abs(sobolev_norm(vstar, -s) - 1.0))
    checks = [
        check("cauchy_schwarz", worst_cs <= 1.0 + TOL, max_ratio=worst_cs, trials=trials),
        check("duality_sup_norm", dev_sup <= TOL, max_rel_deviation=dev_sup),
        check("maximizer_unit_norm", dev_unit <= TOL, max_abs_deviation=dev_unit),
    ]
    return checks, {"s": s, "n": n, "N": N}


PRESETS = {
    "theorem2": preset_theorem2,
    "theorem3": preset_theorem3,
    "theorem4": preset_theorem4,
    "theorem5": preset_theorem5,
    "theorem6-surrogate": preset_theorem6,
    "theorem7": preset_theorem7,
    "appendix-duality": preset_duality,
}


def run_preset(name: str, seed: int, trials: int | None = None):
    fn = PRESETS[name]
    return fn(seed) if trials is None else fn(seed, trials)

