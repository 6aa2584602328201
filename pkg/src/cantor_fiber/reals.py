"""Certified real scalars backed by mpmath interval arithmetic.

A :class:`RealScalar` is an enclosure ``[lo, hi]`` of an unknown real number.
It is reported as a midpoint ``value`` with an ``error_radius``; every
arithmetic operation goes through :mod:`mpmath.iv`, which rounds outward, so
the enclosure stays valid no matter how many operations are chained.

The working precision is a process-wide setting (default 128 bits, overridden
by the ``CANTOR_FIBER_PRECISION`` environment variable or :func:`precision`).
"""
from __future__ import annotations

import contextlib
import functools
import os
import re
from fractions import Fraction
from typing import Union

from mpmath import iv, mp

DEFAULT_PRECISION = 128
_ENV_VAR = "CANTOR_FIBER_PRECISION"


def _initial_precision() -> int:
    raw = os.environ.get(_ENV_VAR)
    if not raw:
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < 53:
        raise ValueError(f"{_ENV_VAR} must be >= 53, got {bits}")
    return bits


_PREC = _initial_precision()


def get_precision() -> int:
    return _PREC


def set_precision(bits: int) -> None:
    global _PREC
    if int(bits) < 53:
        raise ValueError(f"precision must be >= 53 bits, got {bits}")
    _PREC = int(bits)


@contextlib.contextmanager
def precision(bits: int):
    """Temporarily change the working precision (in bits)."""
    old = get_precision()
    set_precision(bits)
    try:
        yield
    finally:
        set_precision(old)


@contextlib.contextmanager
def workprec():
    """Run mpmath (both point and interval contexts) at the working precision."""
    old_mp, old_iv = mp.prec, iv.prec
    mp.prec = iv.prec = _PREC
    try:
        yield
    finally:
        mp.prec, iv.prec = old_mp, old_iv


def with_workprec(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with workprec():
            return func(*args, **kwargs)

    return wrapper


Number = Union["RealScalar", Fraction, int, float, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or a decimal literal exactly."""
    m = _RATIONAL_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational or decimal number: {text!r}") from None


class RealScalar:
    """Enclosure of a real number with a certified error radius.

    ``exact`` holds the rational value when the scalar was built from an exact
    rational input (``"1/3"``, ``Fraction(1, 4)``, a decimal string); it lets
    callers that can work in exact arithmetic do so.
    """

    __slots__ = ("iv", "exact")

    def __init__(self, interval, exact: Fraction | None = None):
        self.iv = interval
        self.exact = exact

    # -- construction -------------------------------------------------
    @classmethod
    def from_fraction(cls, q: Fraction) -> "RealScalar":
        q = Fraction(q)
        with workprec():
            x = iv.mpf(q.numerator) / iv.mpf(q.denominator)
        return cls(x, q)

    @classmethod
    def from_interval(cls, lo, hi) -> "RealScalar":
        with workprec():
            return cls(iv.mpf([lo, hi]))

    @classmethod
    def coerce(cls, x: Number) -> "RealScalar":
        if isinstance(x, RealScalar):
            return x
        if isinstance(x, str):
            return cls.from_fraction(parse_fraction(x))
        if isinstance(x, (int, Fraction)):
            return cls.from_fraction(Fraction(x))
        if isinstance(x, float):
            # floats are binary rationals, hence exact
            return cls.from_fraction(Fraction(x))
        if hasattr(x, "_mpi_"):
            return cls(x)
        if hasattr(x, "_mpf_"):
            with workprec():
                return cls(iv.mpf(x))
        raise TypeError(f"cannot convert {type(x).__name__} to RealScalar")

    # -- views ---------------------------------------------------------
    @property
    def lo(self):
        return mp.make_mpf(self.iv._mpi_[0])

    @property
    def hi(self):
        return mp.make_mpf(self.iv._mpi_[1])

    @property
    def value(self):
        with workprec():
            return (self.lo + self.hi) / 2

    @property
    def error_radius(self):
        return _radius(self)

    def __float__(self) -> float:
        return float(self.value)

    def contains(self, x: Number) -> bool:
        other = RealScalar.coerce(x)
        return bool(self.lo <= other.lo and other.hi <= self.hi)

    # -- arithmetic ------------------------------------------------------
    def _binary(self, other, op):
        other = RealScalar.coerce(other)
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = op(self.exact, other.exact)
        with workprec():
            return RealScalar(op(self.iv, other.iv), exact)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return RealScalar.coerce(other) - self

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return RealScalar.coerce(other) / self

    def __neg__(self):
        return RealScalar(-self.iv, None if self.exact is None else -self.exact)

    def __abs__(self):
        with workprec():
            return RealScalar(abs(self.iv), None if self.exact is None else abs(self.exact))

    # -- certified comparisons -----------------------------------------
    def certainly_lt(self, other: Number) -> bool:
        return bool(self.hi < RealScalar.coerce(other).lo)

    def certainly_gt(self, other: Number) -> bool:
        return bool(self.lo > RealScalar.coerce(other).hi)

    def certainly_le(self, other: Number) -> bool:
        return bool(self.hi <= RealScalar.coerce(other).lo)

    def certainly_ge(self, other: Number) -> bool:
        return bool(self.lo >= RealScalar.coerce(other).hi)

    def possibly_le(self, other: Number) -> bool:
        return not self.certainly_gt(other)

    def possibly_ge(self, other: Number) -> bool:
        return not self.certainly_lt(other)

    # -- formatting --------------------------------------------------------
    def decimal_str(self, digits: int | None = None) -> str:
        """Midpoint as a decimal string with enough digits for the precision."""
        if digits is None:
            digits = required_digits()
        with workprec():
            return mp.nstr(self.value, digits, strip_zeros=False, min_fixed=-6, max_fixed=6)

    def to_json(self) -> dict:
        with workprec():
            return {
                "value": self.decimal_str(),
                "error_radius": mp.nstr(self.error_radius, 6),
            }

    def __repr__(self) -> str:
        return f"RealScalar({mp.nstr(self.value, 20)} ± {mp.nstr(self.error_radius, 3)})"


def _radius(x: RealScalar):
    with workprec():
        mid = (x.lo + x.hi) / 2
        # half-width, rounded up so that [mid - r, mid + r] really covers [lo, hi]
        return max(mp.fsub(x.hi, mid, rounding="u"), mp.fsub(mid, x.lo, rounding="u"))


def required_digits(bits: int | None = None) -> int:
    import math

    bits = get_precision() if bits is None else bits
    return max(int(math.ceil(bits * math.log10(2))) - 2, 15)


def scalar(x: Number) -> RealScalar:
    return RealScalar.coerce(x)


def to_iv(x: Number):
    """Interval enclosure of ``x`` at the working precision."""
    if isinstance(x, RealScalar):
        return x.iv
    return RealScalar.coerce(x).iv


ONE_THIRD = Fraction(1, 3)
