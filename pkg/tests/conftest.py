import numpy as np
import pytest

from hyperforge.phasepoly import Monomial, PhasePolynomial

MODES = ("A", "B", "C", "D", "E")


def rand_monomial(rng, modes=MODES, max_order=3, max_exp=1):
    order = rng.integers(1, max_order + 1)
    chosen = rng.choice(len(modes), size=order, replace=False)
    return Monomial({modes[i]: int(rng.integers(1, max_exp + 1)) for i in chosen})


def rand_poly(rng, modes=MODES, n_terms=4, max_order=3, max_exp=1, constant=False):
    terms = {}
    for _ in range(n_terms):
        m = rand_monomial(rng, modes, max_order, max_exp)
        terms[m] = terms.get(m, 0.0) + float(rng.uniform(-2.0, 2.0))
    const = float(rng.uniform(-2.0, 2.0)) if constant else 0.0
    return PhasePolynomial(terms, const)


def rand_point(rng, modes=MODES):
    return {m: float(rng.uniform(-1.5, 1.5)) for m in modes}


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
