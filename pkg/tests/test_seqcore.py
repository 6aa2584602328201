from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cantor_fiber import seqcore as sq
from strategies import codings, words


def test_parse_round_trip_and_canonical_form():
    c = sq.PeriodicCoding.parse("1,-1:1")
    assert c.preperiod == (1, -1) and c.period == (1,)
    assert sq.PeriodicCoding.parse(str(c)) == c
    # 1,1:1,1 is just 1^∞
    assert sq.PeriodicCoding.parse("1,1:1,1") == sq.ONE
    # 0,1:0,1 shortens to (0,1)^∞ after rotating the preperiod into the period
    assert sq.PeriodicCoding((0, 1), (0, 1)) == sq.PeriodicCoding((), (0, 1))


@pytest.mark.parametrize("text", ["", "1,2", "a:1", "1:"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        sq.PeriodicCoding.parse(text)


def test_json_round_trip():
    c = sq.coding((0, 1, -1), (1, 0))
    assert sq.PeriodicCoding.from_json(c.to_json()) == c


@given(codings)
def test_canonicalization_is_idempotent(c):
    again = sq.PeriodicCoding(c.preperiod, c.period)
    assert again == c and again.preperiod == c.preperiod and again.period == c.period


@given(codings, codings)
def test_structural_equality_matches_digit_equality(a, b):
    n = 2 * (len(a.preperiod) + len(b.preperiod) + len(a.period) * len(b.period)) + 2
    assert (a == b) == (a.prefix(n) == b.prefix(n))


@given(codings, codings, codings)
def test_lex_is_a_total_order(a, b, c):
    assert sq.lex_compare(a, b) == -sq.lex_compare(b, a)
    if sq.lex_le(a, b) and sq.lex_le(b, c):
        assert sq.lex_le(a, c)


@given(codings, codings)
def test_lex_agrees_with_prefix_comparison(a, b):
    i = sq.first_difference(a, b)
    assume(i is not None)
    assert (sq.lex_compare(a, b) < 0) == (a.prefix(i + 1) < b.prefix(i + 1))


@given(codings, codings, codings)
def test_rho_is_an_ultrametric(a, b, c):
    assert sq.rho_distance(a, b) == sq.rho_distance(b, a)
    assert (sq.rho_distance(a, b) == 0) == (a == b)
    assert sq.rho_distance(a, c) <= max(sq.rho_distance(a, b), sq.rho_distance(b, c))


@given(codings, codings)
def test_negation_reverses_order(a, b):
    assert sq.lex_compare(sq.negate(a), sq.negate(b)) == -sq.lex_compare(a, b)
    assert sq.negate(sq.negate(a)) == a


def test_rho_values():
    a, b = sq.coding((1, 0), (1,)), sq.coding((1, -1), (1,))
    assert sq.rho_distance(a, b) == Fraction(1, 3)


@given(codings, st.integers(0, 12))
def test_tail_from_matches_shifted_digits(c, k):
    assert c.tail_from(k).prefix(10) == c.prefix(k + 10)[k:]


@given(words.filter(lambda w: w and w[-1] != 1))
def test_successor_is_the_next_word(w):
    s = sq.word_successor(w)
    assert s > w and sq.word_predecessor(s) == w


def test_successor_edge_cases():
    with pytest.raises(ValueError):
        sq.word_successor((0, 1))
    with pytest.raises(ValueError):
        sq.word_predecessor(())


def test_frequency_stats():
    stats = sq.frequency_stats(sq.coding((1, 0), (0, 1, -1)), n=5)
    assert stats.counts == {-1: 1, 0: 2, 1: 2}
    assert stats.lower_freq0 == stats.upper_freq0 == Fraction(1, 3)
    assert sq.zero_frequency_checkpoints((0, 1, 0, 0), [1, 2, 4]) == [1, Fraction(1, 2), Fraction(3, 4)]
