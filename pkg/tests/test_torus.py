import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import direct_dft
from sobscale.errors import ResolutionError
from sobscale.lattice import LatticeBox, LatticeFunction, l2_inner
from sobscale.rng import generator, random_function
from sobscale.torus import (
    TorusGrid,
    TorusSamples,
    dft,
    falling_factorial_derivative,
    idft,
    mode_samples,
    plancherel_defect,
)


def test_delta_transforms_to_one():
    box = LatticeBox(2, 3)
    uh = dft(LatticeFunction.delta(box), TorusGrid(2, 9))
    np.testing.assert_allclose(uh.values, 1.0, atol=0)


def test_single_exponential():
    box = LatticeBox(1, 2)
    grid = TorusGrid(1, 8)
    uh = dft(LatticeFunction.delta(box, (1,)), grid)
    assert uh.values[2] == pytest.approx(-1j, abs=1e-15)  # node x = 1/4


def test_matches_brute_force(rng):
    for n, N, M in [(1, 5, 11), (2, 3, 8), (3, 1, 5)]:
        box = LatticeBox(n, N)
        u = random_function(box, rng)
        ref = direct_dft(u.values, box.points, M)
        np.testing.assert_allclose(dft(u, TorusGrid(n, M)).values, ref, rtol=0, atol=1e-12 * np.abs(ref).max())


def test_plancherel_example(rng):
    box, grid = LatticeBox(1, 4), TorusGrid(1, 16)
    for _ in range(50):
        assert plancherel_defect(random_function(box, rng), grid) <= 1e-12


def test_round_trip_example(rng):
    box, grid = LatticeBox(2, 3), TorusGrid(2, 8)
    for _ in range(50):
        u = random_function(box, rng)
        back = idft(dft(u, grid), box)
        assert np.max(np.abs(back.values - u.values)) <= 1e-13 * np.max(np.abs(u.values))


def test_idft_examples():
    box = LatticeBox(1, 3)
    grid = TorusGrid(1, 9)
    one = idft(TorusSamples(grid, np.ones(9)), box)
    np.testing.assert_allclose(one.values, LatticeFunction.delta(box).values, atol=1e-15)
    e = idft(mode_samples(grid, (1,)), box)
    np.testing.assert_allclose(e.values, LatticeFunction.delta(box, (-1,)).values, atol=1e-15)


def test_undersampled_grid_rejected():
    with pytest.raises(ResolutionError):
        dft(LatticeFunction.delta(LatticeBox(1, 4)), TorusGrid(1, 8))


def test_default_grid_is_odd_and_resolving():
    for n, N in [(1, 1), (2, 5), (3, 4)]:
        g = TorusGrid.for_box(LatticeBox(n, N))
        assert g.M % 2 == 1 and g.M >= 2 * (2 * N + 1)


def test_mode_convention():
    assert list(TorusGrid(1, 5).modes) == [0, 1, 2, -2, -1]
    assert list(TorusGrid(1, 4).modes) == [0, 1, 2, -1]


class TestDerivative:
    grid = TorusGrid(1, 17)

    def test_identity(self, rng):
        s = TorusSamples(self.grid, rng.standard_normal(17))
        assert falling_factorial_derivative(s, (0,)) is s

    @pytest.mark.parametrize("beta,factor", [((1,), 3.0), ((2,), 6.0), ((3,), 6.0), ((4,), 0.0)])
    def test_mode_eigenvalues(self, beta, factor):
        s = mode_samples(self.grid, (3,))
        d = falling_factorial_derivative(s, beta)
        # rounding in the other FFT slots is scaled by their falling factorials
        np.testing.assert_allclose(d.values, factor * s.values, atol=1e-11)

    def test_negative_mode(self):
        s = mode_samples(self.grid, (-2,))
        d = falling_factorial_derivative(s, (2,))
        np.testing.assert_allclose(d.values, 6.0 * s.values, atol=1e-13)  # (-2)(-3)

    def test_commutes_on_modes(self):
        grid = TorusGrid(2, 9)
        for q in [(1, 2), (-3, 1), (2, -2)]:
            s = mode_samples(grid, q)
            a = falling_factorial_derivative(falling_factorial_derivative(s, (1, 0)), (0, 1))
            b = falling_factorial_derivative(falling_factorial_derivative(s, (0, 1)), (1, 0))
            np.testing.assert_allclose(a.values, b.values, atol=1e-12)
            np.testing.assert_allclose(a.values, q[0] * q[1] * s.values, atol=1e-12)


def test_samples_json_round_trip(rng):
    s = TorusSamples(TorusGrid(2, 5), rng.standard_normal(25) + 1j)
    t = TorusSamples.from_json(s.to_json())
    assert np.array_equal(s.values, t.values) and s.grid == t.grid


seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.sampled_from([(1, 6, 13), (2, 3, 7), (2, 2, 9)]))
def test_parseval_for_pairing(seed, cfg):
    n, N, M = cfg
    rng = generator(seed)
    box, grid = LatticeBox(n, N), TorusGrid(n, M)
    u, v = random_function(box, rng), random_function(box, rng)
    lhs = l2_inner(u, v)
    rhs = np.sum(dft(u, grid).values * np.conj(dft(v, grid).values)) / grid.size
    scale = np.linalg.norm(u.values) * np.linalg.norm(v.values)
    assert abs(lhs - rhs) <= 1e-12 * scale


@given(seeds, st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_dft_linear(seed, a, b):
    rng = generator(seed)
    box, grid = LatticeBox(2, 2), TorusGrid(2, 9)
    u, v = random_function(box, rng), random_function(box, rng)
    lhs = dft(a * u + b * v, grid).values
    rhs = a * dft(u, grid).values + b * dft(v, grid).values
    scale = (abs(a) + abs(b)) * np.abs(dft(u, grid).values).max() + 1e-300
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * max(scale, np.abs(rhs).max())


@given(seeds, st.integers(1, 4))
def test_spectral_derivative_matches_repeated_shifted(seed, order):
    rng = generator(seed)
    grid = TorusGrid(1, 21)
    coef = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    s = TorusSamples(grid, sum(mode_samples(grid, (q,), c).values for q, c in zip(range(-3, 4), coef)))
    ref = s
    for r in range(order - 1, -1, -1):
        ref = falling_factorial_derivative(ref, (1,)) + (-r) * ref
    out = falling_factorial_derivative(s, (order,))
    assert np.max(np.abs(out.values - ref.values)) <= 1e-12 * max(1.0, np.abs(ref.values).max())
