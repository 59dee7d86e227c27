"""Seeded random lattice data.

Everything random in the package flows through a Philox counter-based
generator so a seed reproduces the same draws on every platform.
"""

import numpy as np

from .lattice import LatticeBox, LatticeFunction


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def complex_gaussian(rng: np.random.Generator, size) -> np.ndarray:
    """Standard complex Gaussian entries, ``E|z|^2 = 1``."""
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    return (re + 1j * im) / np.sqrt(2.0)


def random_function(box: LatticeBox, rng: np.random.Generator) -> LatticeFunction:
    return LatticeFunction(box, complex_gaussian(rng, box.cardinality))


def random_functions(box: LatticeBox, rng: np.random.Generator, count: int):
    return [random_function(box, rng) for _ in range(count)]
