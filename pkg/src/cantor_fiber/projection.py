"""The projection ``Π(c, λ) = (1 - λ) Σ c_n λ^(n-1)`` and its λ-derivative.

For an eventually periodic coding with preperiod ``u`` (length m) and period
``v`` (length p) the series sums in closed form::

    Π(c, λ) = (1 - λ) [U(λ) + λ^m V(λ) / (1 - λ^p)],
    U(λ) = Σ_{k<m} u_k λ^k,   V(λ) = Σ_{k<p} v_k λ^k,

so no truncation error is involved. Exact rational λ yields an exact result.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from mpmath import iv, mp

from . import seqcore as sq
from .reals import Number, RealScalar, scalar, with_workprec, workprec
from .rootfind import bisect_monotone
from .seqcore import PeriodicCoding

# boundary codings of the four monotonicity regions on (0^∞, 1^∞)
C_001 = sq.PeriodicCoding((0, 0), (1,))
C_01M = sq.PeriodicCoding((0, 1), (-1,))          # 01(-1)^∞
C_01M0 = sq.PeriodicCoding((0, 1, -1), (0,))      # 01(-1)0^∞
C_01 = sq.PeriodicCoding((0,), (1,))


def _horner(coeffs, x):
    acc = 0
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def _dhorner(coeffs, x):
    acc = 0
    for k in range(len(coeffs) - 1, 0, -1):
        acc = acc * x + k * coeffs[k]
    return acc


def pi_closed(c: PeriodicCoding, lam):
    """Closed-form Π for any numeric type supporting + - * / and int powers
    (Fraction, float, mpf, iv.mpf)."""
    m, p = len(c.preperiod), len(c.period)
    U = _horner(c.preperiod, lam)
    V = _horner(c.period, lam)
    return (1 - lam) * (U + lam ** m * V / (1 - lam ** p))


def pi2_closed(c: PeriodicCoding, lam):
    """Closed-form ∂Π/∂λ, same numeric conventions as :func:`pi_closed`."""
    m, p = len(c.preperiod), len(c.period)
    U, dU = _horner(c.preperiod, lam), _dhorner(c.preperiod, lam)
    V, dV = _horner(c.period, lam), _dhorner(c.period, lam)
    lm = lam ** m
    denom = 1 - lam ** p
    dlm = m * lam ** (m - 1) if m else 0
    W = lm * V / denom
    dW = (dlm * V + lm * dV) / denom + lm * V * p * lam ** (p - 1) / denom ** 2
    return -(U + W) + (1 - lam) * (dU + dW)


def _check_lambda(lam: RealScalar) -> None:
    if not lam.certainly_gt(0) or lam.certainly_gt(Fraction(1, 3)):
        raise ValueError(f"lambda must lie in (0, 1/3], got {lam!r}")


@with_workprec
def pi_eval(c: PeriodicCoding, lam: Number) -> RealScalar:
    """Π(c, λ) for 0 < λ ≤ 1/3; exact when λ is an exact rational."""
    lam = scalar(lam)
    _check_lambda(lam)
    if lam.exact is not None:
        return RealScalar.from_fraction(pi_closed(c, lam.exact))
    return RealScalar(pi_closed(c, lam.iv))


@with_workprec
def pi_derivative(c: PeriodicCoding, lam: Number) -> RealScalar:
    """∂Π(c, λ)/∂λ for 0 < λ ≤ 1/3."""
    lam = scalar(lam)
    _check_lambda(lam)
    if lam.exact is not None:
        return RealScalar.from_fraction(pi2_closed(c, lam.exact))
    return RealScalar(pi2_closed(c, lam.iv))


@with_workprec
def pi_eval_truncated(stream: Iterable[int], lam: Number, eps) -> RealScalar:
    """Π of an arbitrary digit stream, summing N terms with 2λ^N ≤ eps.

    The neglected tail is bounded by λ^N, which is folded into the radius.
    """
    lam = scalar(lam)
    _check_lambda(lam)
    eps = mp.mpf(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    lam_hi = lam.hi
    n = 0
    power_hi = mp.mpf(1)
    while 2 * power_hi > eps:
        power_hi *= lam_hi
        n += 1
    x = lam.iv
    acc = iv.mpf(0)
    pw = iv.mpf(1)
    for d in itertools.islice(stream, n):
        acc += d * pw
        pw *= x
    tail = iv.mpf([-power_hi, power_hi]) if power_hi else iv.mpf(0)
    return RealScalar((1 - x) * acc + tail)


class Shape(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    UNIMODAL = "unimodal"
    CONSTANT_ZERO = "constant_zero"
    CONSTANT_ONE = "constant_one"
    NEGATED = "negated"


@dataclass(frozen=True)
class MonotonicityClass:
    """Shape of λ ↦ Π(c, λ) on (0, 1/3].

    ``critical`` is set for UNIMODAL; ``inner`` for NEGATED, which describes
    codings below 0^∞ through the class of their digitwise negation.
    """

    shape: Shape
    critical: RealScalar | None = None
    inner: "MonotonicityClass | None" = None

    def effective(self) -> tuple[str, RealScalar | None]:
        """Flatten NEGATED into a plain description.

        Returns ``(kind, critical)`` with kind one of ``increasing``,
        ``decreasing``, ``unimodal_max``, ``unimodal_min``, ``constant``.
        """
        if self.shape is Shape.NEGATED:
            kind, crit = self.inner.effective()
            flipped = {"increasing": "decreasing", "decreasing": "increasing",
                       "unimodal_max": "unimodal_min", "unimodal_min": "unimodal_max",
                       "constant": "constant"}
            return flipped[kind], crit
        if self.shape is Shape.UNIMODAL:
            return "unimodal_max", self.critical
        if self.shape in (Shape.CONSTANT_ZERO, Shape.CONSTANT_ONE):
            return "constant", None
        return self.shape.value, None

    def to_json(self) -> dict:
        out = {"shape": self.shape.value}
        if self.critical is not None:
            out["critical"] = self.critical.to_json()
        if self.inner is not None:
            out["inner"] = self.inner.to_json()
        return out


def in_unimodal_range(c: PeriodicCoding) -> bool:
    """c ∈ (001^∞, 01(-1)0^∞)."""
    return sq.lex_lt(C_001, c) and sq.lex_lt(c, C_01M0)


def classify_monotonicity(c: PeriodicCoding) -> MonotonicityClass:
    if c == sq.ZERO:
        return MonotonicityClass(Shape.CONSTANT_ZERO)
    if c == sq.ONE:
        return MonotonicityClass(Shape.CONSTANT_ONE)
    if sq.lex_lt(c, sq.ZERO):
        return MonotonicityClass(Shape.NEGATED, inner=classify_monotonicity(sq.negate(c)))
    if sq.lex_le(c, C_001):
        return MonotonicityClass(Shape.INCREASING)
    if sq.lex_lt(c, C_01M0):
        return MonotonicityClass(Shape.UNIMODAL, critical=critical_lambda(c))
    if sq.lex_le(c, C_01):
        return MonotonicityClass(Shape.INCREASING)
    if sq.lex_lt(c, sq.ONE):
        return MonotonicityClass(Shape.DECREASING)
    # above 1^∞ is impossible over {-1, 0, 1}
    raise AssertionError("coding above 1^∞")


@with_workprec
def critical_lambda(c: PeriodicCoding, rtol=None) -> RealScalar:
    """The unique zero of λ ↦ Π₂(c, λ) in [1/4, 1/3].

    Defined for c ∈ [01(-1)^∞, 01(-1)0^∞]; Π₂ is strictly decreasing in λ
    there, so plain bisection converges unconditionally.
    """
    if not (sq.lex_le(C_01M, c) and sq.lex_le(c, C_01M0)):
        raise ValueError(f"coding {c} is outside [01(-1)^∞, 01(-1)0^∞]")
    if rtol is None:
        rtol = mp.mpf("1e-30")
    if c == C_01M0:
        return RealScalar.from_fraction(Fraction(1, 3))
    if c == C_01M:
        return RealScalar.from_fraction(Fraction(1, 4))
    third = RealScalar.from_fraction(Fraction(1, 3))
    return bisect_monotone(lambda x: pi2_closed(c, x), mp.mpf(1) / 4, third.hi,
                           increasing=False, rtol=rtol)


@with_workprec
def phi_value(c: PeriodicCoding) -> RealScalar:
    """Maximum of Π(c, ·): Π evaluated at the critical point of c."""
    if not (sq.lex_le(C_01M, c) and sq.lex_le(c, C_01M0)):
        raise ValueError(f"coding {c} is outside [01(-1)^∞, 01(-1)0^∞]")
    lam = critical_lambda(c)
    if lam.exact is not None:
        return RealScalar.from_fraction(pi_closed(c, lam.exact))
    return RealScalar(pi_closed(c, lam.iv))
