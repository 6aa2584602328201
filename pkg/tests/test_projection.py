"""Closed-form projection against truncated series and exact rationals."""
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from mpmath import mp

from cantor_fiber import seqcore as sq
from cantor_fiber.projection import (C_001, C_01, C_01M, C_01M0, Shape, classify_monotonicity,
                                     critical_lambda, phi_value, pi2_closed, pi_closed,
                                     pi_derivative, pi_eval, pi_eval_truncated)
from strategies import codings, lambdas


def series(c, lam, n=200):
    """Direct partial sum, the independent oracle for the closed form."""
    return (1 - lam) * sum(d * lam ** k for k, d in enumerate(c.prefix(n)))


@given(codings, lambdas)
def test_closed_form_matches_series(c, lam):
    exact = pi_closed(c, lam)
    # tail after 200 terms is below λ^200 ≤ 3^-200
    assert abs(exact - series(c, lam)) <= Fraction(1, 3) ** 199


@given(codings, lambdas)
def test_derivative_matches_termwise_derivative(c, lam):
    # Π₂ = Σ c_n (n-1-nλ) λ^(n-2)
    oracle = sum(d * (n - 1 - n * lam) * lam ** (n - 2) if n >= 2 else d * -1
                 for n, d in enumerate(c.prefix(150), start=1))
    assert abs(pi2_closed(c, lam) - oracle) <= Fraction(1, 10 ** 40)


@given(codings, st.floats(0.01, 0.33))
def test_derivative_matches_finite_difference(c, lam):
    with mp.workdps(40):
        h = mp.mpf("1e-12")
        fd = (pi_closed(c, mp.mpf(lam) + h) - pi_closed(c, mp.mpf(lam) - h)) / (2 * h)
        assert abs(fd - pi2_closed(c, mp.mpf(lam))) < 1e-10


@given(codings, codings, lambdas)
def test_lexicographic_monotonicity(a, b, lam):
    assume(a != b and lam < Fraction(1, 3))
    if sq.lex_lt(b, a):
        a, b = b, a
    assert pi_closed(a, lam) < pi_closed(b, lam)


@given(codings, lambdas)
def test_negation_symmetry(c, lam):
    assert pi_closed(sq.negate(c), lam) == -pi_closed(c, lam)


@given(codings, lambdas)
def test_values_lie_in_unit_interval(c, lam):
    assert -1 <= pi_closed(c, lam) <= 1


@given(codings, lambdas)
def test_derivative_bound(c, lam):
    # |Π₂| ≤ Σ |n-1-nλ| λ^(n-2) ≤ 1 + Σ_{n≥2} n 3^(2-n) < 6
    assert abs(pi2_closed(c, lam)) < 6


@pytest.mark.parametrize("c,ref", [
    (C_01, lambda x: x),
    (sq.PeriodicCoding((1,), (-1,)), lambda x: 1 - 2 * x),
    (C_001, lambda x: x * x),
    (C_01M0, lambda x: x * (1 - x) ** 2),
    (sq.ONE, lambda x: 1),
    (sq.ZERO, lambda x: 0),
])
@pytest.mark.parametrize("lam", [Fraction(1, 10), Fraction(1, 4), Fraction(1, 3)])
def test_reference_closed_forms(c, ref, lam):
    assert pi_closed(c, lam) == ref(lam)


def test_eval_wrappers():
    assert pi_eval(C_01, "1/4").exact == Fraction(1, 4)
    assert pi_derivative(C_001, "1/5").exact == Fraction(2, 5)
    v = pi_eval(C_01, "0.3")
    assert v.contains(Fraction(3, 10))
    with pytest.raises(ValueError):
        pi_eval(C_01, "0.4")


def test_truncated_matches_closed_form():
    c = sq.coding((1, -1), (0, 1))
    approx = pi_eval_truncated(iter(c), "1/4", 1e-30)
    assert approx.contains(pi_closed(c, Fraction(1, 4)))
    assert approx.error_radius < 1e-29


def test_shapes():
    assert classify_monotonicity(sq.ZERO).shape is Shape.CONSTANT_ZERO
    assert classify_monotonicity(C_001).shape is Shape.INCREASING
    assert classify_monotonicity(C_01).shape is Shape.INCREASING
    assert classify_monotonicity(sq.coding((0, 1), (0,))).shape is Shape.INCREASING
    assert classify_monotonicity(sq.coding((1,), (-1,))).shape is Shape.DECREASING
    m = classify_monotonicity(sq.coding((0, 1, -1, -1), (0,)))
    assert m.shape is Shape.UNIMODAL and m.effective()[0] == "unimodal_max"
    neg = classify_monotonicity(sq.coding((-1,), (1,)))
    assert neg.shape is Shape.NEGATED and neg.effective()[0] == "increasing"


@given(st.lists(st.sampled_from((-1, 0, 1)), min_size=1, max_size=6))
def test_critical_point_is_a_maximum(tail):
    c = sq.with_tail((0, 1, -1, -1) + tuple(tail), 0)
    assume(sq.lex_le(C_01M, c) and sq.lex_lt(c, C_01M0))
    lam = critical_lambda(c)
    assert lam.certainly_ge(Fraction(1, 4)) and lam.possibly_le(Fraction(1, 3))
    with mp.workprec(128):
        x = lam.value
        assert abs(pi2_closed(c, x)) < 1e-25
        peak = pi_closed(c, x)
        for dx in ("1e-3", "-1e-3"):
            y = x + mp.mpf(dx)
            if mp.mpf(1) / 4 <= y <= mp.mpf(1) / 3:
                assert pi_closed(c, y) < peak
    assert phi_value(c).contains(pi_closed(c, lam.iv).mid) or abs(phi_value(c).value - peak) < 1e-30


def test_critical_endpoints_are_exact():
    assert critical_lambda(C_01M).exact == Fraction(1, 4)
    assert critical_lambda(C_01M0).exact == Fraction(1, 3)
    assert phi_value(C_01M).exact == Fraction(1, 8)
    assert phi_value(C_01M0).exact == Fraction(4, 27)
    with pytest.raises(ValueError):
        critical_lambda(C_01)
