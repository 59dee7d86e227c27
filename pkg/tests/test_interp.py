import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sobscale.errors import ParameterError
from sobscale.interp import (
    InterpSpace,
    check_straddle,
    interp_norm,
    interp_operator_bound,
    lower_upper_constants,
    make_pair,
    sobolev_pair,
    verify_reiteration,
    verify_theorem2,
    verify_theorem3,
)
from sobscale.lattice import LatticeBox, LatticeFunction, difference_matrix
from sobscale.linalg import spectral_norm, weighted_conjugate
from sobscale.presets import reiteration_cases, theorem2_cases, theorem3_cases
from sobscale.ro import Constant, InterpParameter, OscExponent, PowerLog, PowerOneLog, ROFunction, builtin_closure, make_interp_parameter
from sobscale.rng import generator, random_function
from sobscale.spaces import h_phi_norm, sobolev_norm


class TestPair:
    def test_generator_example(self):
        box = LatticeBox(2, 2)
        pair = make_pair(0.0, 2.0, box)
        assert pair.J[box.index_of((1, 0))] == pytest.approx(2.0, rel=1e-15)
        assert np.all(make_pair(1.0, 1.0, box).J == 1.0)

    def test_isometry(self):
        rng = generator(3)
        box = LatticeBox(2, 4)
        pair = make_pair(ROFunction(PowerLog(0.5, 1.0)), ROFunction.power(2.5), box)
        for _ in range(100):
            assert pair.isometry_defect(random_function(box, rng)) <= 1e-13


class TestInterpNorm:
    box = LatticeBox(2, 3)

    def test_endpoint_parameters(self, rng):
        pair = make_pair(ROFunction.power(0.5), ROFunction(PowerLog(2.0, 1.0)), self.box)
        u = random_function(self.box, rng)
        assert interp_norm(u, InterpSpace(pair, InterpParameter(Constant(1.0)))) == pytest.approx(h_phi_norm(u, pair.w0), rel=1e-14)
        assert interp_norm(u, InterpSpace(pair, InterpParameter.power(1.0))) == pytest.approx(h_phi_norm(u, pair.w1), rel=1e-14)

    def test_sobolev_midpoint(self):
        rng = generator(11)
        box = LatticeBox(2, 6)
        psi = make_interp_parameter(ROFunction.power(1.0), 0.0, 2.0)
        space = InterpSpace(sobolev_pair(0.0, 2.0, box), psi)
        for _ in range(50):
            u = random_function(box, rng)
            a, b = interp_norm(u, space), sobolev_norm(u, 1.0)
            assert abs(a - b) <= 1e-13 * b


class TestVerifiers:
    def test_power_log_example(self):
        r = verify_theorem2(ROFunction(PowerLog(1.5, 1.0)), 1.0, 2.0, LatticeBox(1, 8), trials=200)
        assert r["pass"] and r["max_rel_deviation"] <= 1e-12

    @pytest.mark.parametrize("s", [0.3, 1.0, 1.7])
    def test_pure_power(self, s):
        r = verify_theorem2(ROFunction.power(s), 0.0, 2.0, LatticeBox(2, 4), trials=50)
        assert r["max_rel_deviation"] <= 1e-13

    def test_delta(self):
        box = LatticeBox(1, 4)
        phi = ROFunction(OscExponent(1.0, 0.3))
        psi = make_interp_parameter(phi, 0.0, 2.5)
        u = LatticeFunction.delta(box)
        assert interp_norm(u, InterpSpace(sobolev_pair(0.0, 2.5, box), psi)) == float(phi(1.0))

    def test_straddle_enforced(self):
        with pytest.raises(ParameterError):
            check_straddle(ROFunction.power(1.0), 1.2, 3.0)
        with pytest.raises(ParameterError):
            check_straddle(ROFunction(OscExponent(1.0, 0.3)), 0.7, 3.0)  # inside the known index range

    @pytest.mark.parametrize("i", range(15))
    def test_builtin_straddles(self, i):
        phi, s0, s1 = theorem2_cases()[i]
        assert verify_theorem2(phi, s0, s1, LatticeBox(2, 4), trials=30, seed=i)["max_rel_deviation"] <= 1e-12

    def test_theorem3_examples(self):
        box = LatticeBox(1, 8)
        for p0, p1, psi in theorem3_cases():
            r = verify_theorem3(p0, p1, psi, box, trials=100)
            assert r["max_rel_deviation"] <= 1e-12, r["parameters"]
        # t, t^3, tau^(1/2) gives the H^(2) norm
        rng = generator(2)
        space = InterpSpace(make_pair(1.0, 3.0, box), InterpParameter.power(0.5))
        u = random_function(box, rng)
        assert interp_norm(u, space) == pytest.approx(sobolev_norm(u, 2.0), rel=1e-14)

    def test_reiteration_examples(self):
        box = LatticeBox(1, 8)
        pair = sobolev_pair(0.0, 2.0, box)
        for lam, eta, psi in reiteration_cases():
            assert verify_reiteration(pair, lam, eta, psi, trials=100)["max_rel_deviation"] <= 1e-12
        rng = generator(4)
        lam, eta, psi = reiteration_cases()[0]
        omega = InterpSpace(pair, InterpParameter.power(0.5))
        u = random_function(box, rng)
        assert interp_norm(u, omega) == pytest.approx(sobolev_norm(u, 1.0), rel=1e-14)


class TestOperatorBound:
    box = LatticeBox(1, 6)

    def test_identity(self):
        pair = sobolev_pair(0.0, 2.0, self.box)
        r = interp_operator_bound(np.eye(self.box.cardinality), pair, InterpParameter.power(0.5))
        assert r["n0"] == pytest.approx(1, rel=1e-10) and r["n1"] == pytest.approx(1, rel=1e-10) and r["n_psi"] == pytest.approx(1, rel=1e-10)

    def test_multiplier(self):
        pair = sobolev_pair(0.0, 2.0, self.box)
        for psi in (InterpParameter.power(0.3), InterpParameter(PowerOneLog(0.5, 1.0))):
            r = interp_operator_bound(self.box.bracket**-1, pair, psi)
            assert r["n0"] == r["n1"] == r["n_psi"] == 1.0
            assert r["n_psi"] <= r["max_endpoint"]

    def test_forward_difference_against_svd(self):
        pair = sobolev_pair(0.0, 1.0, self.box)
        D = difference_matrix(self.box)
        r = interp_operator_bound(D, pair, InterpParameter.power(0.5))
        ref = [spectral_norm(weighted_conjugate(D, w, w)) for w in (pair.w0.weight, pair.w1.weight, self.box.bracket**0.5)]
        np.testing.assert_allclose([r["n0"], r["n1"], r["n_psi"]], ref, rtol=1e-8)
        assert r["n_psi"] <= 1.0000001 * r["max_endpoint"] * r["C"]
        assert r["n_psi"] <= r["power_bound"] * (1 + 1e-8)


seeds = st.integers(0, 2**32 - 1)
phis = st.sampled_from(sorted(builtin_closure()))


@given(seeds, st.floats(0.05, 0.95))
def test_embedding_constants(seed, theta):
    box = LatticeBox(2, 3)
    pair = make_pair(0.0, 3.0, box)
    space = InterpSpace(pair, InterpParameter.power(theta))
    c, cp = lower_upper_constants(space)
    u = random_function(box, generator(seed))
    n0, n1, npsi = h_phi_norm(u, pair.w0), h_phi_norm(u, pair.w1), interp_norm(u, space)
    assert n1 >= c * npsi * (1 - 1e-13)
    assert c * npsi >= cp * n0 * (1 - 1e-13)


@given(seeds, phis)
def test_parallelogram(seed, name):
    rng = generator(seed)
    box = LatticeBox(2, 3)
    phi = builtin_closure()[name]
    space = InterpSpace(make_pair(-1.0, 4.0, box), make_interp_parameter(phi, -1.0, 4.0))
    u, v = random_function(box, rng), random_function(box, rng)
    lhs = interp_norm(u + v, space) ** 2 + interp_norm(u - v, space) ** 2
    rhs = 2 * interp_norm(u, space) ** 2 + 2 * interp_norm(v, space) ** 2
    assert abs(lhs - rhs) <= 1e-12 * rhs


@given(seeds, st.floats(-2, 2), st.floats(0.1, 2), st.floats(0.1, 2))
def test_theorem2_random_straddles(seed, s, d0, d1):
    phi = ROFunction(PowerLog(s, 1.0))
    r = verify_theorem2(phi, s - d0, s + d1, LatticeBox(1, 8), trials=10, seed=seed % 1000)
    assert r["max_rel_deviation"] <= 1e-12


@given(seeds)
def test_multiplier_interpolates_with_constant_one(seed):
    rng = generator(seed)
    box = LatticeBox(1, 6)
    m = rng.standard_normal(box.cardinality) + 1j * rng.standard_normal(box.cardinality)
    r = interp_operator_bound(m, sobolev_pair(0.0, 2.0, box), InterpParameter.power(0.4))
    assert r["n_psi"] <= r["max_endpoint"]
