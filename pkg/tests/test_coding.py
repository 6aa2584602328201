"""Digit recursion and cylinder covers against brute-force enumeration."""
import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cantor_fiber import seqcore as sq
from cantor_fiber.coding import (BOUNDARY_GREEDY, BOUNDARY_LAZY, IN_COVER, NOT_MEMBER, OUT,
                                 UNIQUE, auto_mode, e_lambda_cover, membership, phi_t_digits,
                                 pi_lambda_inverse_roundtrip)
from cantor_fiber.projection import pi_closed
from cantor_fiber.reals import RealScalar, scalar, workprec
from strategies import codings, lambdas

ts = st.fractions(min_value=-1, max_value=1, max_denominator=1000)


def x_word(w, lam):
    return (1 - lam) * sum(d * lam ** k for k, d in enumerate(w))


def brute_words(t, lam, n):
    """All depth-n words whose cylinder [x_w - λ^n, x_w + λ^n] contains t."""
    return [w for w in itertools.product(sq.DIGITS, repeat=n) if abs(t - x_word(w, lam)) <= lam ** n]


@given(ts, lambdas, st.integers(1, 5))
def test_membership_matches_brute_force(t, lam, n):
    inside = bool(brute_words(t, lam, n))
    assert (membership(t, lam, n) == IN_COVER) == inside
    res = phi_t_digits(t, lam, n, "greedy")
    assert (res.status != NOT_MEMBER) == inside


@given(ts, lambdas, st.integers(1, 5))
def test_greedy_and_lazy_are_extreme_admissible_words(t, lam, n):
    words = brute_words(t, lam, n)
    assume(words)
    # prefixes of admissible words of every length must themselves be admissible:
    # the recursion only commits to a digit with a nonempty future
    g = phi_t_digits(t, lam, n, "greedy").digits
    z = phi_t_digits(t, lam, n, "lazy").digits
    assert g in words and z in words
    assert g >= z
    if lam < Fraction(1, 3):
        # cylinders of distinct words are disjoint below 1/3 except at shared endpoints
        assert len(words) <= 2


@given(codings, lambdas.filter(lambda x: x < Fraction(1, 3)), st.integers(1, 20))
def test_round_trip_recovers_the_coding(c, lam, n):
    assert pi_lambda_inverse_roundtrip(c, lam, n)


@given(codings, st.floats(0.01, 0.33), st.integers(1, 30))
def test_round_trip_with_inexact_lambda(c, lam, n):
    lam = scalar(lam) * scalar("1.0000000001")
    with workprec():
        t = RealScalar(pi_closed(c, lam.iv))
    res = phi_t_digits(t, lam, n, "greedy")
    assert res.status != NOT_MEMBER
    # each digit costs log2(1/λ) bits of the 128-bit working precision
    if n * math.log2(1 / float(lam.value)) < 100:
        assert not res.exhausted
    assert res.digits == c.prefix(len(res.digits))


@given(ts, lambdas, st.integers(1, 12))
def test_residual_bound(t, lam, n):
    res = phi_t_digits(t, lam, n)
    assume(res.status != NOT_MEMBER)
    assert abs(t - x_word(res.digits, lam)) <= lam ** n


@given(ts.filter(lambda t: t != 0), lambdas)
def test_negation_mirrors_digits(t, lam):
    a = phi_t_digits(t, lam, 8, "greedy")
    b = phi_t_digits(-t, lam, 8, "lazy")
    assert a.status == NOT_MEMBER or b.digits == tuple(-d for d in a.digits)


def test_known_codings():
    assert phi_t_digits("1/2", "1/4", 8).digits == (1,) + (-1,) * 7
    assert phi_t_digits("1/2", "1/4", 8).status == UNIQUE
    assert phi_t_digits("1/3", "3/10", 6).status == NOT_MEMBER
    assert phi_t_digits("0", "1/5", 4).digits == (0, 0, 0, 0)


def test_ties_at_one_third():
    g = phi_t_digits("1/9", "1/3", 6, "greedy")
    z = phi_t_digits("1/9", "1/3", 6, "lazy")
    assert g.digits == (0, 1, -1, -1, -1, -1) and g.status == BOUNDARY_GREEDY
    assert z.digits == (0, 0, 1, 1, 1, 1) and z.status == BOUNDARY_LAZY
    assert phi_t_digits("1/9", "1/3", 6).digits == g.digits


@pytest.mark.parametrize("t,mode", [("1/18", "greedy"), ("1/9", "greedy"), ("0.12", "lazy"),
                                    ("4/27", "greedy"), ("0.2", "greedy"), ("1/2", "lazy"),
                                    ("1/3", "greedy")])
def test_auto_rule(t, mode):
    assert auto_mode(scalar(t)) == mode


def test_input_validation():
    with pytest.raises(ValueError):
        phi_t_digits("2", "1/4", 3)
    with pytest.raises(ValueError):
        phi_t_digits("0", "1/2", 3)
    with pytest.raises(ValueError):
        phi_t_digits("0", "1/4", 0)
    with pytest.raises(ValueError):
        phi_t_digits("0", "1/4", 3, "eager")


@given(lambdas, st.integers(0, 6))
def test_cover_matches_union_of_cylinders(lam, n):
    cover = [(iv.lo.exact, iv.hi.exact) for iv in e_lambda_cover(lam, n)]
    pieces = sorted((x_word(w, lam) - lam ** n, x_word(w, lam) + lam ** n)
                    for w in itertools.product(sq.DIGITS, repeat=n))
    assert cover[0][0] == -1 and cover[-1][1] == 1
    for a, b in pieces:
        assert any(lo <= a and b <= hi for lo, hi in cover)
    for (_, b), (a, _) in zip(cover, cover[1:]):
        assert b < a
        # the gap really is a gap
        mid = (a + b) / 2
        assert not any(p <= mid <= q for p, q in pieces)


@given(lambdas, st.integers(0, 5))
def test_covers_are_nested(lam, n):
    outer = [(iv.lo.exact, iv.hi.exact) for iv in e_lambda_cover(lam, n)]
    for iv in e_lambda_cover(lam, n + 1):
        assert any(lo <= iv.lo.exact and iv.hi.exact <= hi for lo, hi in outer)


def test_small_covers():
    assert [(i.lo.exact, i.hi.exact) for i in e_lambda_cover("1/4", 1)] == \
        [(-1, Fraction(-1, 2)), (Fraction(-1, 4), Fraction(1, 4)), (Fraction(1, 2), 1)]
    assert len(e_lambda_cover("1/3", 3)) == 1
    with pytest.raises(ValueError):
        e_lambda_cover("1/4", 13)


def test_membership_inexact():
    assert membership("0.09", "0.3", 20) == IN_COVER
    assert membership("1/3", "0.3", 10) == OUT
    assert membership(0.09, 0.3, 30) == OUT
