"""Classification entry point, periodicity detection, product limits."""

import math
from fractions import Fraction
from itertools import count

import pytest

from ratsys import (
    ArithmeticMode,
    DomainError,
    Kind,
    LimitCycle,
    PeriodStatus,
    ProductStatus,
    Rank1Data,
    Rank2Witness,
    classify,
    compare,
    detect_period,
    product_converges,
    simulate,
)

from conftest import (
    RANK1_BOUNDARY,
    RANK1_GROWTH,
    RANK2_BALANCED,
    RANK2_GENERIC,
)

EXACT = ArithmeticMode.EXACT_RATIONAL


def test_classify_dispatches_to_rank_one():
    verdict = classify(RANK1_BOUNDARY, EXACT)
    assert verdict.rank == 1
    assert verdict.kind is Kind.EXACT_TWO_PERIODIC
    assert isinstance(verdict.witness, Rank1Data)
    assert verdict.cycle is None


def test_classify_dispatches_to_rank_two():
    verdict = classify(RANK2_GENERIC)
    assert verdict.rank == 2
    assert verdict.kind is Kind.VANISH_EVEN_BLOW_ODD
    assert isinstance(verdict.witness, Rank2Witness)
    assert verdict.cycle is None


def test_classify_attaches_cycle_in_the_convergent_case():
    verdict = classify(RANK2_BALANCED)
    assert verdict.kind is Kind.CONVERGES_TO_TWO_PERIODIC
    assert isinstance(verdict.cycle, LimitCycle)
    assert verdict.cycle.residual < 1e-9
    bare = classify(RANK2_BALANCED, attach_cycle=False)
    assert bare.cycle is None
    other = classify(RANK2_BALANCED, probe_init=(3.0, 0.5))
    assert abs(other.cycle.x_even - verdict.cycle.x_even) > 1e-6


def test_detect_period_from_the_start():
    p = RANK1_BOUNDARY
    k_init = (Fraction(2), Fraction(2))  # on the ray y0 = K*x0 with K = 1
    orbit = simulate(p, k_init, 12, EXACT)
    report = detect_period(orbit)
    assert report.status is PeriodStatus.PERIODIC
    assert report.start_index == 0


def test_detect_period_eventual():
    orbit = simulate(RANK1_BOUNDARY, (Fraction(1), Fraction(2)), 12, EXACT)
    report = detect_period(orbit)
    assert report.status is PeriodStatus.EVENTUALLY_PERIODIC
    assert report.start_index == 1
    strict = detect_period(orbit, require_from_start=True)
    assert strict.status is PeriodStatus.NOT_PERIODIC
    assert strict.start_index is None


def test_detect_period_float_tolerance():
    orbit = simulate(RANK2_BALANCED.as_floats(), (1.0, 1.0), 60)
    report = detect_period(orbit, tol=1e-9)
    assert report.status is PeriodStatus.EVENTUALLY_PERIODIC
    assert 0 < report.start_index < 40


def test_detect_period_rejects_aperiodic_orbits():
    orbit = simulate(RANK2_GENERIC.as_floats(), (1.0, 1.0), 30)
    report = detect_period(orbit)
    assert report.status is PeriodStatus.NOT_PERIODIC
    assert report.start_index is None


def test_detect_period_needs_enough_points():
    orbit = simulate(RANK1_BOUNDARY.as_floats(), (1.0, 1.0), 2)
    with pytest.raises(ValueError):
        detect_period(orbit, period=2)


def test_product_converges_geometric():
    report = product_converges(0.5 ** k for k in count(1))
    assert report.status is ProductStatus.CONVERGES
    direct = 1.0
    for k in range(1, 80):
        direct *= 1.0 + 0.5 ** k
    assert report.limit == pytest.approx(direct, rel=1e-10)
    assert report.log_partial == pytest.approx(math.log(direct), rel=1e-10)


def test_product_converges_terminating():
    # the zero at the second term drives the estimated tail to zero, so
    # the scan can already stop there
    report = product_converges(iter([0.1, 0.0, 0.0]))
    assert report.status is ProductStatus.CONVERGES
    assert report.limit == pytest.approx(1.1, rel=1e-15)
    assert report.terms_used == 2


def test_product_diverges_to_infinity():
    report = product_converges(0.5 for _ in count())
    assert report.status is ProductStatus.DIVERGES_TO_INFINITY
    assert report.limit is None
    assert report.log_partial > 50.0


def test_product_diverges_to_zero():
    report = product_converges(-0.5 for _ in count())
    assert report.status is ProductStatus.DIVERGES_TO_ZERO
    assert report.log_partial < -50.0


def test_product_rejects_nonpositive_factors():
    with pytest.raises(DomainError):
        product_converges(iter([0.5, -1.0]))
    with pytest.raises(DomainError):
        product_converges(iter([-1.5]))


def test_product_undecided_for_slow_decay():
    # 1/k**2 converges, but too slowly for the geometric tail bound;
    # saying UNDECIDED is the honest verdict at this budget
    report = product_converges((1.0 / k ** 2 for k in count(1)), max_terms=2000)
    assert report.status is ProductStatus.UNDECIDED
    assert report.terms_used == 2000


def test_compare_exact_closed_forms_are_error_free():
    report = compare(RANK1_BOUNDARY, (Fraction(1), Fraction(2)), 30, EXACT)
    assert report.max_rel_error_x == 0.0
    assert report.max_rel_error_y == 0.0
    assert report.first_divergence_index is None


def test_compare_float_rank1():
    report = compare(RANK1_GROWTH.as_floats(), (1.0, 1.0), 40)
    assert report.max_rel_error_x < 1e-9
    assert report.max_rel_error_y < 1e-9
    assert report.first_divergence_index is None


def test_compare_float_rank2():
    report = compare(RANK2_GENERIC.as_floats(), (1.0, 1.0), 40)
    assert report.max_rel_error_x < 1e-9
    assert report.max_rel_error_y < 1e-9
    assert report.first_divergence_index is None


def test_compare_reports_first_index_over_threshold():
    report = compare(
        RANK2_GENERIC.as_floats(), (1.0, 1.0), 40, divergence_threshold=1e-300
    )
    assert report.first_divergence_index is not None
    assert report.first_divergence_index >= 2


def test_compare_rejects_negative_horizon():
    with pytest.raises(DomainError):
        compare(RANK2_GENERIC.as_floats(), (1.0, 1.0), -1)
