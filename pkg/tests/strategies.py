from fractions import Fraction

from hypothesis import strategies as st

from cantor_fiber import seqcore as sq

digits = st.sampled_from(sq.DIGITS)
words = st.lists(digits, max_size=6).map(tuple)
codings = st.builds(sq.PeriodicCoding, words, st.lists(digits, min_size=1, max_size=4).map(tuple))
# rationals in (0, 1/3]
lambdas = st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(1, 3), max_denominator=10 ** 6)
