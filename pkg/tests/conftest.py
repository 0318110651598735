"""Shared instances and generators for the suite.

Frozen coefficient sets live here so every module exercises the same
well-understood examples; the generator helpers produce reproducible
random instances from a caller-supplied random.Random.
"""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from ratsys import PeriodicCoefficients, criterion_delta, eigenvalues

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# first parity matrix is singular; K = 1, mu = 4, rho = 1, so orbits
# become exactly two-periodic (from the start only when y0 = x0)
RANK1_BOUNDARY = PeriodicCoefficients(
    1, 1, 1, 1, Fraction(1, 2), Fraction(3, 2), Fraction(7, 10), Fraction(13, 10)
)

# same singular first parity matrix; K = 2, mu = 6, rho = 4/3
RANK1_GROWTH = PeriodicCoefficients(1, 1, 1, 1, Fraction(1, 2), Fraction(3, 2), 2, 2)

# K = 1/4, mu = 5/2, rho = 2/5
RANK1_DECAY = PeriodicCoefficients(
    1, 1, 1, 1, Fraction(3, 2), Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)
)

# composed matrix ((5, 8), (10, 14)), det -10, irrational eigenvalues
# (19 +- sqrt(401))/2, delta_crit < 0
RANK2_GENERIC = PeriodicCoefficients(2, 1, 4, 3, 1, 2, 3, 1)

# composed matrix ((5, 4), (9, 5)), discriminant 144: eigenvalues 11 and
# -1 are rational, so the exact spectral path works end to end
RANK2_SQUARE = PeriodicCoefficients(1, 1, 1, 2, 1, 3, 4, 1)

# delta_crit = 0.2 > 0: even subsequences blow up, odd ones vanish
RANK2_BLOW = PeriodicCoefficients(1, 1, 1, 2, 1, 1, 2, 1)

# composed matrix ((5, 3), (3, 2)): the trichotomy quantity vanishes
# identically (the limit ratio Q is the golden ratio), so every orbit
# converges to a positive two-cycle; rational witness for the exact path
RANK2_BALANCED = PeriodicCoefficients(1, 1, 1, 2, 2, 1, 1, 1)


def log_uniform(rng, lo=0.1, hi=10.0):
    return 10 ** rng.uniform(math.log10(lo), math.log10(hi))


def random_float_params(rng):
    """Coefficients drawn log-uniformly from [0.1, 10]."""
    return PeriodicCoefficients(*(log_uniform(rng) for _ in range(8)))


def random_rank1_params(rng):
    """Random member of the singular family a0 = b0 = c0 = d0 = 1."""
    return PeriodicCoefficients(
        1.0, 1.0, 1.0, 1.0, *(log_uniform(rng) for _ in range(4))
    )


def random_rational(rng, hi=12):
    return Fraction(rng.randint(1, hi), rng.randint(1, hi))


def random_rational_params(rng, hi=12):
    return PeriodicCoefficients(*(random_rational(rng, hi) for _ in range(8)))


def find_balanced(rng, r_lo=1e-3, r_hi=0.9):
    """Random coefficients sitting on the convergence boundary.

    Draws seven coefficients, then bisects b1 to the sign change of the
    trichotomy quantity. Returns (params, r) where r = |lambda2/lambda1|
    is kept inside [r_lo, r_hi] so tests see a usable contraction rate;
    draws without a sign change or with extreme r are rejected.
    """
    while True:
        a0, b0, c0, d0, a1, c1, d1 = (log_uniform(rng) for _ in range(7))

        def delta_at(b1):
            p = PeriodicCoefficients(a0, b0, c0, d0, a1, b1, c1, d1)
            return criterion_delta(p)

        grid = [10 ** (e / 4) for e in range(-12, 13)]
        signs = [delta_at(b) > 0 for b in grid]
        bracket = None
        for i in range(len(grid) - 1):
            if signs[i] != signs[i + 1]:
                bracket = (grid[i], grid[i + 1])
                break
        if bracket is None:
            continue
        lo, hi = bracket
        lo_sign = delta_at(lo) > 0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if (delta_at(mid) > 0) == lo_sign:
                lo = mid
            else:
                hi = mid
        b1 = 0.5 * (lo + hi)
        params = PeriodicCoefficients(a0, b0, c0, d0, a1, b1, c1, d1)
        l1, l2 = eigenvalues(params)
        r = abs(l2 / l1)
        if r_lo <= r <= r_hi:
            return params, r


@pytest.fixture
def rank1_boundary():
    return RANK1_BOUNDARY


@pytest.fixture
def rank2_generic():
    return RANK2_GENERIC


@pytest.fixture
def rank2_square():
    return RANK2_SQUARE


@pytest.fixture
def balanced_instance():
    """One deterministic boundary instance (seeded)."""
    return find_balanced(random.Random(777))
