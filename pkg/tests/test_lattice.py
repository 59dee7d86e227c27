import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sobscale.errors import DimensionError, ParameterError, ShapeError
from sobscale.lattice import (
    LatticeBox,
    LatticeFunction,
    difference_matrix,
    forward_difference,
    japanese_bracket,
    l2_inner,
    lp_norm,
    schwartz_seminorm,
)
from sobscale.rng import generator, random_function


def delta(box, k=None, scale=1.0):
    return LatticeFunction.delta(box, k, scale)


class TestBox:
    @pytest.mark.parametrize("n,N", [(1, 1), (1, 5), (2, 3), (3, 2)])
    def test_enumeration_is_bijection(self, n, N):
        box = LatticeBox(n, N)
        assert box.cardinality == (2 * N + 1) ** n
        assert len({tuple(p) for p in box.points}) == box.cardinality
        for i, p in enumerate(box.points):
            assert box.index_of(p) == i

    def test_lexicographic_order(self):
        box = LatticeBox(2, 1)
        expected = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]
        assert [tuple(p) for p in box.points] == expected

    def test_rejects_bad_parameters(self):
        with pytest.raises(DimensionError):
            LatticeBox(0, 2)
        with pytest.raises(ParameterError):
            LatticeBox(1, 0)
        with pytest.raises(ShapeError):
            LatticeBox(1, 2).index_of((3,))

    def test_points_read_only(self):
        box = LatticeBox(1, 2)
        with pytest.raises(ValueError):
            box.points[0, 0] = 7


class TestBracket:
    def test_examples(self):
        assert japanese_bracket((0, 0)) == 1.0
        assert japanese_bracket((3, 4)) == pytest.approx(math.sqrt(26), rel=1e-15)
        assert japanese_bracket((1,)) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_box_bracket_matches_pointwise(self):
        box = LatticeBox(2, 3)
        ref = [japanese_bracket(p) for p in box.points]
        assert np.array_equal(box.bracket, ref)


class TestNorms:
    def test_examples(self):
        b1 = LatticeBox(1, 1)
        assert lp_norm(delta(LatticeBox(2, 2)), 2) == 1.0
        assert lp_norm(LatticeFunction(b1, [1, 1, 1]), 1) == 3.0
        assert lp_norm(LatticeFunction(b1, [1, -2, 2]), np.inf) == 2.0
        with pytest.raises(ParameterError):
            lp_norm(delta(b1), 3)

    def test_inner_examples(self):
        box = LatticeBox(2, 2)
        d0, d1 = delta(box), delta(box, (1, 0))
        assert l2_inner(d0, d0) == 1
        assert l2_inner(d0, d1) == 0
        assert l2_inner(delta(box, scale=1j), d0) == 1j
        assert l2_inner(d0, delta(box, scale=1j)) == -1j

    def test_inner_box_mismatch(self):
        with pytest.raises(ShapeError):
            l2_inner(delta(LatticeBox(1, 1)), delta(LatticeBox(1, 2)))


class TestDifferences:
    def test_linear_function_interior(self):
        box = LatticeBox(1, 5)
        u = LatticeFunction.from_callable(box, lambda k: k[:, 0])
        d = forward_difference(u, (1,))
        assert np.array_equal(d.values[:-1], np.ones(box.cardinality - 1))

    def test_zero_order_is_identity(self, rng):
        u = random_function(LatticeBox(2, 3), rng)
        assert forward_difference(u, (0, 0)) == u

    def test_delta(self):
        box = LatticeBox(1, 3)
        d = forward_difference(delta(box), (1,))
        expected = delta(box, (-1,)).values - delta(box).values
        assert np.array_equal(d.values, expected)

    def test_matrix_matches_operator(self, rng):
        box = LatticeBox(2, 2)
        u = random_function(box, rng)
        for axis in range(2):
            e = tuple(int(j == axis) for j in range(2))
            np.testing.assert_allclose(difference_matrix(box, axis) @ u.values, forward_difference(u, e).values, atol=1e-15)

    def test_seminorm_examples(self):
        box = LatticeBox(1, 4)
        assert schwartz_seminorm(delta(box), (0,), (0,)) == 1
        assert schwartz_seminorm(delta(box), (1,), (0,)) == 0
        u = LatticeFunction.from_callable(box, lambda k: 1.0 / (1.0 + k[:, 0] ** 2))
        brute = max(abs(k) / (1 + k * k) for k in range(-4, 5))
        assert schwartz_seminorm(u, (1,), (0,)) == pytest.approx(brute, rel=1e-15)
        assert brute == 0.5


class TestSerialization:
    def test_json_round_trip(self, rng):
        u = random_function(LatticeBox(2, 2), rng)
        assert LatticeFunction.from_json(u.to_json()) == u

    def test_csv_header(self):
        text = delta(LatticeBox(2, 1)).to_csv().splitlines()
        assert text[0] == "k1,k2,re,im"
        assert len(text) == 10

    def test_restrict_extend(self, rng):
        small, big = LatticeBox(2, 1), LatticeBox(2, 3)
        u = random_function(small, rng)
        assert u.extend(big).restrict(small) == u
        assert lp_norm(u.extend(big)) == pytest.approx(lp_norm(u), rel=1e-15)


# ---------------------------------------------------------------------------
# properties

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([(1, 4), (2, 2), (3, 1)])


@given(seeds, dims)
def test_norm_squared_is_inner(seed, nd):
    u = random_function(LatticeBox(*nd), generator(seed))
    ip = l2_inner(u, u)
    n2 = lp_norm(u, 2) ** 2
    assert abs(ip.real - n2) <= 1e-13 * n2
    assert abs(ip.imag) <= 1e-14 * n2


@given(seeds, dims, st.sampled_from([1, 2, np.inf]), st.complex_numbers(min_magnitude=1e-6, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_triangle_and_homogeneity(seed, nd, p, c):
    rng = generator(seed)
    box = LatticeBox(*nd)
    u, v = random_function(box, rng), random_function(box, rng)
    assert lp_norm(u + v, p) <= (lp_norm(u, p) + lp_norm(v, p)) * (1 + 1e-14)
    assert lp_norm(c * u, p) == pytest.approx(abs(c) * lp_norm(u, p), rel=1e-13, abs=1e-300)


@given(seeds, st.sampled_from([(2, 3), (3, 2)]), st.data())
def test_differences_commute(seed, nd, data):
    box = LatticeBox(*nd)
    # Gaussian integers keep every difference exact in floating point
    rng = generator(seed)
    u = LatticeFunction(box, rng.integers(-1000, 1000, box.cardinality) + 1j * rng.integers(-1000, 1000, box.cardinality))
    i = data.draw(st.integers(0, box.n - 1))
    j = data.draw(st.integers(0, box.n - 1))
    ei = tuple(int(a == i) for a in range(box.n))
    ej = tuple(int(a == j) for a in range(box.n))
    a = forward_difference(forward_difference(u, ei), ej)
    b = forward_difference(forward_difference(u, ej), ei)
    assert np.array_equal(a.values, b.values)


@given(seeds, dims)
def test_difference_one_norm_bound(seed, nd):
    box = LatticeBox(*nd)
    u = random_function(box, generator(seed))
    e1 = (1,) + (0,) * (box.n - 1)
    assert lp_norm(forward_difference(u, e1), 1) <= 2 * lp_norm(u, 1) * (1 + 1e-14)


@given(seeds, dims)
def test_values_stay_finite(seed, nd):
    u = random_function(LatticeBox(*nd), generator(seed))
    d = forward_difference(u, (2,) + (1,) * (u.box.n - 1))
    assert np.all(np.isfinite(d.values))
