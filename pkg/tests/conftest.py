import numpy as np
import pytest

from opalg.pauli import AlgebraSpec, OperatorSum, all_words


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_operator_sum(spec: AlgebraSpec, rng, max_terms: int = 4) -> OperatorSum:
    words = list(all_words(spec))
    picks = rng.choice(len(words), size=rng.integers(1, max_terms + 1),
                       replace=False)
    terms = {}
    for idx in picks:
        coeff = complex(rng.normal(), rng.normal())
        terms[words[int(idx)].key()] = coeff
    return OperatorSum(spec, terms)


def random_density(dim: int, rng) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
