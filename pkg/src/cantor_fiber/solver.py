"""Root solvers in λ: Π(c, λ) = t, and the distinguished parameters of Λ(t)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath import iv, mp

from . import seqcore as sq
from .projection import C_01M, C_01M0, classify_monotonicity, critical_lambda, pi2_closed, pi_closed
from .reals import Number, RealScalar, scalar, with_workprec, workprec
from .rootfind import bisect_monotone
from .seqcore import PeriodicCoding

THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class Root:
    value: RealScalar
    branch: str            # "increasing" | "decreasing" | "double"

    def to_json(self) -> dict:
        return {"lambda": self.value.to_json(), "branch": self.branch}


@dataclass(frozen=True)
class RootSet:
    """All λ ∈ (0, 1/3] with Π(c, λ) = t.

    ``identically`` is set when Π(c, ·) is constant and equal to t, in which
    case every λ is a solution and ``roots`` is empty.
    """

    coding: PeriodicCoding
    t: RealScalar
    roots: tuple = ()
    identically: bool = False

    def __len__(self):
        return len(self.roots)

    def values(self) -> list:
        return [r.value for r in self.roots]

    def to_json(self) -> dict:
        return {
            "coding": str(self.coding),
            "t": self.t.to_json(),
            "identically": self.identically,
            "roots": [r.to_json() for r in self.roots],
        }


def _third_hi():
    return RealScalar.from_fraction(THIRD).hi


def _solve_branch(c, t, lo, hi, increasing):
    """Root of Π(c, ·) = t on a monotone piece [lo, hi] of (0, 1/3], or None.

    The value at ``lo`` is checked with ``lo`` taken literally (λ = 0 is a
    legitimate evaluation point of the closed form), but a root sitting
    exactly at λ = 0 is excluded from the domain.
    """
    tiv = t.iv

    def f(x):
        return pi_closed(c, x) - tiv

    f_lo, f_hi = f(iv.mpf(lo)), f(iv.mpf(hi))
    if lo == 0 and f_lo.a == 0 == f_lo.b:
        # the root is λ = 0 itself; strict monotonicity leaves none in (0, hi]
        return None
    sgn = 1 if increasing else -1
    # need sgn*f(lo) <= 0 <= sgn*f(hi), possibly
    if (sgn * f_lo).a > 0 or (sgn * f_hi).b < 0:
        return None
    root = bisect_monotone(f, lo, hi, increasing=increasing)
    if root.hi <= 0:
        return None
    return root


@with_workprec
def solve_lambda(c: PeriodicCoding, t: Number, double_tol=None) -> RootSet:
    """Every λ ∈ (0, 1/3] with Π(c, λ) = t, found by bisection per monotone
    branch.

    For codings with an interior maximum (or minimum) the extreme value is
    compared with t: if they agree within ``double_tol`` (default: within
    the certified enclosure) a single root at the critical point is returned,
    tagged ``double``.
    """
    t = scalar(t)
    cls = classify_monotonicity(c)
    kind, crit = cls.effective()
    zero, top = mp.mpf(0), _third_hi()
    if kind == "constant":
        val = pi_closed(c, iv.mpf(0))
        same = not (val - t.iv).a > 0 and not (val - t.iv).b < 0
        return RootSet(c, t, (), identically=bool(same))
    if kind in ("increasing", "decreasing"):
        r = _solve_branch(c, t, zero, top, kind == "increasing")
        roots = () if r is None else (Root(r, kind),)
        return RootSet(c, t, roots)

    # unimodal: a single interior extremum at crit
    peak_is_max = kind == "unimodal_max"
    ext = RealScalar(pi_closed(c, crit.iv))
    diff = ext - t
    if double_tol is not None:
        touching = abs(float(diff.value)) <= float(double_tol)
    else:
        touching = not diff.certainly_gt(0) and not diff.certainly_lt(0)
    if touching:
        return RootSet(c, t, (Root(crit, "double"),))
    if (peak_is_max and diff.certainly_lt(0)) or (not peak_is_max and diff.certainly_gt(0)):
        return RootSet(c, t, ())
    roots = []
    left = _solve_branch(c, t, zero, crit.lo, increasing=peak_is_max)
    if left is not None:
        roots.append(Root(left, "increasing" if peak_is_max else "decreasing"))
    right = _solve_branch(c, t, crit.hi, top, increasing=not peak_is_max)
    if right is not None:
        roots.append(Root(right, "decreasing" if peak_is_max else "increasing"))
    return RootSet(c, t, tuple(roots))


@with_workprec
def lambda_diamond(t: Number) -> RealScalar:
    """The root in (0, 1/3) of λ(1 - λ)² = t, for 0 < t < 4/27."""
    t = scalar(t)
    if not (t.certainly_gt(0) and t.certainly_lt(Fraction(4, 27))):
        raise ValueError("lambda_diamond needs 0 < t < 4/27")
    tiv = t.iv
    # λ(1-λ)^2 is increasing on (0, 1/3): derivative (1-λ)(1-3λ) > 0
    return bisect_monotone(lambda x: x * (1 - x) ** 2 - tiv, 0, _third_hi(), increasing=True)


TAU_DIGITS = 64


def _turning_point(c: PeriodicCoding, guess):
    """(λ_c, Π(c, λ_c)) in point arithmetic, by the secant method on Π₂ started
    near ``guess``; falls back to certified bisection if the secant strays."""
    quarter, third = mp.mpf(1) / 4, mp.mpf(1) / 3
    x0, x1 = mp.mpf(guess), mp.mpf(guess) + mp.mpf("1e-7")
    f0, f1 = pi2_closed(c, x0), pi2_closed(c, x1)
    eps = mp.mpf(2) ** (-mp.prec + 12)
    for _ in range(80):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not quarter <= x2 <= third:
            x1 = None
            break
        x0, f0 = x1, f1
        x1, f1 = x2, pi2_closed(c, x2)
        if abs(x1 - x0) <= eps:
            break
    if x1 is None or abs(f1) > mp.mpf("1e-20"):
        x1 = critical_lambda(c).value
    return x1, pi_closed(c, x1)


@dataclass(frozen=True)
class TauResult:
    """The turning point of λ ↦ Φ_t(λ) and the coding attained there.

    ``coding`` approximates c* = min{c : φ(c) ≥ t} (φ(c) = max_λ Π(c, λ) is
    lexicographically nondecreasing) by its first ``TAU_DIGITS`` digits
    followed by 1^∞, and ``tau`` is its critical point. When φ jumps over t
    (``jump``), c* is attained at two parameters of Λ(t), listed in
    ``fiber_points``, and ``tau`` lies strictly between them.
    """

    tau: RealScalar
    coding: PeriodicCoding | None
    pi_residual: object = 0        # Π(coding, τ) - t = φ(coding) - t
    pi2_residual: object = 0       # Π₂(coding, τ)
    jump: bool = False
    fiber_points: tuple = ()


JUMP_TOLERANCE = mp.mpf("1e-20")


@with_workprec
def tau_detail(t: Number) -> TauResult:
    """τ(t) for 1/9 < t < 4/27, with the coding it is built from.

    For t ≤ 1/8 the turning point is exactly 1/4. Otherwise the digits of c*
    after the fixed prefix 01(-1) are chosen one at a time: the smallest d
    with φ(w d 1^∞) ≥ t. Codings above 01(-1)0^∞ have φ ≥ 4/27 > t and need
    no evaluation.
    """
    t = scalar(t)
    if not (t.certainly_gt(Fraction(1, 9)) and t.certainly_lt(Fraction(4, 27))):
        raise ValueError("tau needs 1/9 < t < 4/27")
    if t.possibly_le(Fraction(1, 8)):
        if not t.certainly_le(Fraction(1, 8)):
            raise ValueError("t is too close to 1/8 to decide which branch applies")
        return TauResult(RealScalar.from_fraction(Fraction(1, 4)), C_01M, 0, 0)
    tv = t.value
    word = [0, 1, -1]
    guess, phi_w = mp.mpf("0.29"), None
    for _ in range(TAU_DIGITS - len(word)):
        for d in (-1, 0):
            c = sq.with_tail(tuple(word) + (d,), 1)
            if sq.lex_lt(C_01M0, c):
                break
            lam, phi = _turning_point(c, guess)
            if phi >= tv:
                guess, phi_w = lam, phi
                break
        else:
            d = 1
        word.append(d)
    coding = sq.with_tail(tuple(word), 1)
    lam, phi = _turning_point(coding, guess)
    d2 = pi2_closed(coding, lam)
    # curvature of Π(c, ·) at λ_c, for an error estimate on λ_c
    h = mp.mpf("1e-12")
    curv = abs((pi2_closed(coding, lam + h) - pi2_closed(coding, lam - h)) / (2 * h))
    n = len(word)
    radius = 4 * (n + 1) * lam ** (n - 1) / curv + abs(d2) / curv
    tau_val = RealScalar(iv.mpf([lam - radius, lam + radius]))
    gap = phi - tv
    jump = gap > JUMP_TOLERANCE
    points = ()
    if jump:
        points = tuple(r.value for r in solve_lambda(coding, t).roots)
    return TauResult(tau_val, coding, gap, d2, jump, points)


def tau(t: Number) -> RealScalar:
    return tau_detail(t).tau


@dataclass(frozen=True)
class Extremes:
    min: RealScalar
    max: RealScalar
    flag: str = "regular"         # "regular" | "degenerate" | "full_interval"


@with_workprec
def lambda_extremes(t: Number) -> Extremes:
    """(min Λ(t), max Λ(t)) = (min{t, (1-t)/2}, 1/3)."""
    t = scalar(t)
    third = RealScalar.from_fraction(THIRD)
    if t.exact is not None:
        if t.exact == THIRD:
            return Extremes(third, third, "degenerate")
        if t.exact in (0, 1):
            return Extremes(RealScalar.from_fraction(Fraction(0)), third, "full_interval")
    if not (t.certainly_gt(0) and t.certainly_lt(1)):
        raise ValueError("lambda_extremes needs t in (0, 1)")
    other = (1 - t) / 2
    lo = t if t.certainly_le(other) else other if other.certainly_le(t) else \
        RealScalar(iv.mpf([min(t.lo, other.lo), min(t.hi, other.hi)]))
    return Extremes(lo, third)


@with_workprec
def prefix_flip_root(prefix: Sequence[int], direction: str, t: Number, window) -> RealScalar:
    """Root in ``window`` of Π(w⁺1^∞, λ) = t (``plus``) or Π(w⁻(-1)^∞, λ) = t
    (``minus``) where w is ``prefix``."""
    c = flipped_coding(prefix, direction)
    a, b = (scalar(x) for x in window)
    inside = [r.value for r in solve_lambda(c, t).roots
              if r.value.possibly_ge(a) and r.value.possibly_le(b)]
    if not inside:
        raise ValueError(f"no root of Π({c}, λ) = t in the window")
    if len(inside) > 1:
        raise ValueError(f"root of Π({c}, λ) = t is not unique in the window")
    return inside[0]


def flipped_coding(prefix: Sequence[int], direction: str) -> PeriodicCoding:
    if direction == "plus":
        return sq.with_tail(sq.word_successor(prefix), 1)
    if direction == "minus":
        return sq.with_tail(sq.word_predecessor(prefix), -1)
    raise ValueError("direction must be 'plus' or 'minus'")
