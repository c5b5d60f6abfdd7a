import numpy as np
import pytest
from hypothesis import strategies as st

from nctorus import FourierElement, SymplecticStructure


@pytest.fixture
def J():
    return SymplecticStructure.standard()


@pytest.fixture
def shear_hamiltonian():
    """H = 2 cos(2 pi x); its flow is the exactly solvable vertical shear."""
    return FourierElement.from_literal([[[1, 0], 1, 0], [[-1, 0], 1, 0]])


def modes2(radius=3):
    return st.tuples(
        st.integers(-radius, radius), st.integers(-radius, radius)
    )


def coefficients():
    return st.complex_numbers(
        min_magnitude=0.0, max_magnitude=3.0, allow_nan=False, allow_infinity=False
    )


def elements(radius=3, max_terms=6):
    """Strategy for small sparse elements on T^2."""
    return st.dictionaries(modes2(radius), coefficients(), max_size=max_terms).map(
        lambda d: FourierElement(2, d)
    )


def real_elements(radius=3, max_terms=4):
    """Strategy for real-valued elements (f + f*)/1."""
    return elements(radius, max_terms).map(lambda f: f + f.star())


def random_element(rng, radius=3, n_terms=5):
    """Deterministic random sparse element (for seeded bulk tests)."""
    modes = rng.integers(-radius, radius + 1, size=(n_terms, 2))
    coeffs = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    return FourierElement(2, zip(map(tuple, modes.tolist()), coeffs))
