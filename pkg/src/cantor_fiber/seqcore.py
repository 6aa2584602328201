"""Digit sequences over {-1, 0, 1}.

Finite words are plain tuples of ints. Infinite sequences that matter here are
eventually periodic and are stored as :class:`PeriodicCoding`
(``preperiod · period^∞``) in a canonical form, so equality and hashing are
structural.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

DIGITS = (-1, 0, 1)

Word = tuple  # tuple[int, ...] over {-1, 0, 1}


def check_word(digits: Iterable[int]) -> Word:
    w = tuple(int(d) for d in digits)
    bad = [d for d in w if d not in DIGITS]
    if bad:
        raise ValueError(f"digits must lie in {{-1, 0, 1}}, got {bad[0]}")
    return w


def _primitive_root(period: Word) -> Word:
    p = len(period)
    for d in range(1, p + 1):
        if p % d == 0 and period[:d] * (p // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class PeriodicCoding:
    """The infinite sequence ``preperiod · period^∞`` in canonical form.

    Canonical means the period is primitive and the preperiod is as short as
    possible. The constructor canonicalizes, so two instances are equal iff
    they represent the same sequence.
    """

    preperiod: Word = ()
    period: Word = (0,)

    def __post_init__(self):
        pre = check_word(self.preperiod)
        per = check_word(self.period)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = (per[-1],) + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, digit: int) -> "PeriodicCoding":
        return cls((), (digit,))

    @classmethod
    def parse(cls, text: str) -> "PeriodicCoding":
        """Parse ``"1,-1:1"`` (preperiod ``1,-1``, period ``1``).

        Without a colon the whole list is the period.
        """
        text = text.strip()
        if ":" in text:
            head, tail = text.split(":", 1)
        else:
            head, tail = "", text
        try:
            pre = tuple(int(s) for s in head.split(",") if s.strip())
            per = tuple(int(s) for s in tail.split(",") if s.strip())
        except ValueError:
            raise ValueError(f"malformed coding string {text!r}") from None
        if not per:
            raise ValueError(f"coding {text!r} has an empty period")
        return cls(pre, per)

    @classmethod
    def from_json(cls, obj: dict) -> "PeriodicCoding":
        digits = list(obj["digits"])
        start = int(obj["period_start"])
        if not 0 <= start < len(digits):
            raise ValueError("period_start out of range")
        return cls(tuple(digits[:start]), tuple(digits[start:]))

    # -- views -------------------------------------------------------------
    def __str__(self) -> str:
        pre = ",".join(str(d) for d in self.preperiod)
        per = ",".join(str(d) for d in self.period)
        return f"{pre}:{per}" if pre else per

    def to_json(self) -> dict:
        return {
            "digits": list(self.preperiod + self.period),
            "period_start": len(self.preperiod),
        }

    def __getitem__(self, i: int) -> int:
        """0-based digit access into the infinite sequence."""
        if i < 0:
            raise IndexError("negative index into an infinite sequence")
        m = len(self.preperiod)
        if i < m:
            return self.preperiod[i]
        return self.period[(i - m) % len(self.period)]

    def __iter__(self) -> Iterator[int]:
        return itertools.chain(self.preperiod, itertools.cycle(self.period))

    def prefix(self, n: int) -> Word:
        return tuple(itertools.islice(iter(self), n))

    def tail_from(self, k: int) -> "PeriodicCoding":
        """The shifted sequence starting at 0-based position ``k``."""
        m = len(self.preperiod)
        if k <= m:
            return PeriodicCoding(self.preperiod[k:], self.period)
        r = (k - m) % len(self.period)
        return PeriodicCoding((), self.period[r:] + self.period[:r])


def coding(preperiod: Sequence[int], period: Sequence[int]) -> PeriodicCoding:
    return PeriodicCoding(tuple(preperiod), tuple(period))


def with_tail(word: Sequence[int], digit: int) -> PeriodicCoding:
    """``word · digit^∞``."""
    return PeriodicCoding(tuple(word), (digit,))


ZERO = PeriodicCoding.constant(0)
ONE = PeriodicCoding.constant(1)
MINUS_ONE = PeriodicCoding.constant(-1)


def _comparison_horizon(a: PeriodicCoding, b: PeriodicCoding) -> int:
    return (len(a.preperiod) + len(b.preperiod)
            + math.lcm(len(a.period), len(b.period)))


def first_difference(a: PeriodicCoding, b: PeriodicCoding) -> int | None:
    """0-based index of the first disagreement, or None if equal."""
    if a == b:
        return None
    for i, (x, y) in enumerate(zip(a.prefix(_comparison_horizon(a, b)),
                                   b.prefix(_comparison_horizon(a, b)))):
        if x != y:
            return i
    # canonical forms differ but the horizon agrees: impossible
    raise AssertionError("canonical codings disagree structurally only")


def lex_compare(a: PeriodicCoding, b: PeriodicCoding) -> int:
    """-1, 0 or 1 as ``a`` is lexicographically below, equal to, above ``b``."""
    i = first_difference(a, b)
    if i is None:
        return 0
    return -1 if a[i] < b[i] else 1


def lex_lt(a: PeriodicCoding, b: PeriodicCoding) -> bool:
    return lex_compare(a, b) < 0


def lex_le(a: PeriodicCoding, b: PeriodicCoding) -> bool:
    return lex_compare(a, b) <= 0


def rho_distance(a: PeriodicCoding, b: PeriodicCoding) -> Fraction:
    """``3^(1-k)`` with ``k`` the 1-based index of the first disagreement."""
    i = first_difference(a, b)
    if i is None:
        return Fraction(0)
    return Fraction(1, 3 ** i)


def word_successor(w: Sequence[int]) -> Word:
    w = check_word(w)
    if not w:
        raise ValueError("successor of the empty word is undefined")
    if w[-1] == 1:
        raise ValueError("last digit is already 1; successor undefined")
    return w[:-1] + (w[-1] + 1,)


def word_predecessor(w: Sequence[int]) -> Word:
    w = check_word(w)
    if not w:
        raise ValueError("predecessor of the empty word is undefined")
    if w[-1] == -1:
        raise ValueError("last digit is already -1; predecessor undefined")
    return w[:-1] + (w[-1] - 1,)


def negate(c: PeriodicCoding) -> PeriodicCoding:
    return PeriodicCoding(tuple(-d for d in c.preperiod), tuple(-d for d in c.period))


@dataclass(frozen=True)
class FrequencyStats:
    prefix_length: int
    counts: dict = field(default_factory=dict)
    lower_freq0: Fraction = Fraction(0)
    upper_freq0: Fraction = Fraction(0)

    @property
    def prefix_freq0(self) -> Fraction:
        if self.prefix_length == 0:
            return Fraction(0)
        return Fraction(self.counts[0], self.prefix_length)


def frequency_stats(c: PeriodicCoding, n: int = 0) -> FrequencyStats:
    """Digit counts over the first ``n`` digits plus the exact asymptotic
    zero-frequency (liminf and limsup coincide for periodic sequences)."""
    if n < 0:
        raise ValueError("prefix length must be nonnegative")
    counts = {d: 0 for d in DIGITS}
    for d in c.prefix(n):
        counts[d] += 1
    f0 = Fraction(c.period.count(0), len(c.period))
    return FrequencyStats(n, counts, f0, f0)


def zero_frequency_checkpoints(digits: Sequence[int], checkpoints: Iterable[int]) -> list:
    """Exact running zero-frequency of a finite digit word at given lengths."""
    running = [0]
    for d in digits:
        running.append(running[-1] + (d == 0))
    out = []
    for n in checkpoints:
        if not 0 < n <= len(digits):
            raise ValueError(f"checkpoint {n} outside word of length {len(digits)}")
        out.append(Fraction(running[n], n))
    return out
