"""The coding of t in base λ, and the level-n covers E_λ(n) of E_λ.

Two independent routes decide whether t ∈ E_λ(n):

* :func:`phi_t_digits` runs the digit recursion on the normalized state
  ``s = t/(1-λ)``; digit i is admissible iff ``|s - i| <= λ/(1-λ)``.
* :func:`membership` descends the tree of cylinder intervals
  ``g_{i_1}∘…∘g_{i_k}([-1, 1])`` with ``g_i(x) = λx + i(1-λ)``.

Exact rational inputs are handled in exact arithmetic, so genuine ties (only
possible at λ = 1/3) are detected exactly; otherwise interval arithmetic is
used and a digit is emitted only when no other digit is possible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv, mp

from . import seqcore as sq
from .projection import pi_eval
from .reals import Number, RealScalar, scalar, with_workprec

THIRD = Fraction(1, 3)

UNIQUE = "unique"
BOUNDARY_GREEDY = "boundary_greedy"
BOUNDARY_LAZY = "boundary_lazy"
NOT_MEMBER = "not_member"


@dataclass(frozen=True)
class CodingResult:
    digits: tuple
    status: str
    residual_bound: object
    certain: bool = True        # every emitted digit was certainly admissible
    exhausted: bool = False     # stopped early because the precision ran out

    def to_json(self) -> dict:
        return {
            "digits": ",".join(str(d) for d in self.digits),
            "status": self.status,
            "residual_bound": mp.nstr(self.residual_bound, 6),
            "certain": self.certain,
            "precision_exhausted": self.exhausted,
        }


def auto_mode(t: RealScalar) -> str:
    """Greedy or lazy tie-breaking for λ = 1/3 as a function of t ≥ 0.

    Greedy on (0, 1/9] ∪ [4/27, 1/3), lazy on (1/9, 4/27) ∪ (1/3, 1). The
    remaining points (t = 0, 1/3, 1) have no tie or are excluded from the
    rule; greedy is used for them.
    """
    q = t.exact if t.exact is not None else Fraction(str(mp.nstr(t.value, 40)))
    if Fraction(1, 9) < q < Fraction(4, 27) or THIRD < q < 1:
        return "lazy"
    return "greedy"


def _pick(candidates, mode):
    return max(candidates) if mode == "greedy" else min(candidates)


def _status_for(mode):
    return BOUNDARY_GREEDY if mode == "greedy" else BOUNDARY_LAZY


def _digits_exact(t: Fraction, lam: Fraction, n: int, mode: str):
    r = lam / (1 - lam)
    s = t / (1 - lam)
    digits, tie = [], False
    for _ in range(n):
        cands = [i for i in sq.DIGITS if abs(s - i) <= r]
        if not cands:
            return digits, NOT_MEMBER, True, False
        if len(cands) > 1:
            tie = True
        d = cands[0] if len(cands) == 1 else _pick(cands, mode)
        digits.append(d)
        s = (s - d) / lam
    return digits, (_status_for(mode) if tie else UNIQUE), True, False


# a state whose enclosure is this wide can no longer separate digits
_EXHAUSTED_RADIUS = mp.mpf("0.05")


def _digits_interval(t, lam, n: int, mode: str):
    r = lam / (1 - lam)
    s = t / (1 - lam)
    digits, tie, certain = [], False, True
    for _ in range(n):
        if (s.b - s.a) / 2 > _EXHAUSTED_RADIUS:
            return digits, _status_for(mode), certain, True
        possible, sure = [], []
        for i in sq.DIGITS:
            dist = abs(s - i) - r
            if not dist.a > 0:
                possible.append(i)
                if dist.b <= 0:
                    sure.append(i)
        if not possible:
            return digits, NOT_MEMBER, certain, False
        if len(possible) > 1:
            tie = True
            d = _pick(possible, mode)
        else:
            d = possible[0]
        if d not in sure:
            certain = False
        digits.append(d)
        s = (s - d) / lam
    return digits, (_status_for(mode) if tie else UNIQUE), certain, False


@with_workprec
def phi_t_digits(t: Number, lam: Number, n: int, mode: str = "auto") -> CodingResult:
    """First ``n`` digits of the coding of t in base λ.

    ``mode`` resolves ties (only genuine at λ = 1/3): ``greedy`` takes the
    larger digit, ``lazy`` the smaller, ``auto`` follows :func:`auto_mode`.
    Negative t is coded as the negation of the coding of -t.
    """
    t, lam = scalar(t), scalar(lam)
    if not lam.certainly_gt(0) or lam.certainly_gt(THIRD):
        raise ValueError("lambda must lie in (0, 1/3]")
    if abs(t).certainly_gt(1):
        raise ValueError("t must lie in [-1, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode not in ("greedy", "lazy", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    flip = t.certainly_lt(0)
    if flip:
        t = -t
    if mode == "auto":
        mode = auto_mode(t)
    elif flip:
        # coding -t with the mirrored rule keeps 'greedy' meaning 'larger digit'
        mode = "lazy" if mode == "greedy" else "greedy"
    if t.exact is not None and lam.exact is not None:
        digits, status, certain, exhausted = _digits_exact(t.exact, lam.exact, n, mode)
    else:
        digits, status, certain, exhausted = _digits_interval(t.iv, lam.iv, n, mode)
    if flip:
        digits = [-d for d in digits]
        status = {BOUNDARY_GREEDY: BOUNDARY_LAZY, BOUNDARY_LAZY: BOUNDARY_GREEDY}.get(status, status)
    residual = lam.hi ** len(digits) + t.error_radius
    return CodingResult(tuple(digits), status, residual, certain, exhausted)


@with_workprec
def pi_lambda_inverse_roundtrip(c: sq.PeriodicCoding, lam: Number, n: int) -> bool:
    """Whether coding Π(c, λ) in base λ gives back the first n digits of c."""
    lam = scalar(lam)
    t = pi_eval(c, lam)
    res = phi_t_digits(t, lam, n, mode="greedy")
    return res.status != NOT_MEMBER and res.digits == c.prefix(n)


# -- the cover E_λ(n) ------------------------------------------------------

DEFAULT_COVER_BUDGET = 3 ** 12


@dataclass(frozen=True)
class CoverInterval:
    lo: RealScalar
    hi: RealScalar

    def as_floats(self) -> tuple:
        return float(self.lo.value), float(self.hi.value)


@with_workprec
def e_lambda_cover(lam: Number, n: int, budget: int = DEFAULT_COVER_BUDGET) -> list:
    """The sorted, merged list of cylinder intervals making up E_λ(n).

    Each of the 3^n words w gives ``[x_w - λ^n, x_w + λ^n]`` where
    ``x_w = (1-λ) Σ w_k λ^(k-1)``. Words are generated in lexicographic
    order, which is also the left-to-right order of their intervals.
    Intervals that possibly touch are merged, so the union is a superset.
    """
    lam = scalar(lam)
    if not lam.certainly_gt(0) or lam.certainly_gt(THIRD):
        raise ValueError("lambda must lie in (0, 1/3]")
    if n < 0:
        raise ValueError("depth must be >= 0")
    if 3 ** n > budget:
        raise ValueError(f"3^{n} intervals exceed the budget of {budget}")
    exact = lam.exact is not None
    x = lam.exact if exact else lam.iv
    centers = [Fraction(0) if exact else iv.mpf(0)]
    step = 1 - x
    for _ in range(n):
        centers = [cen + d * step for cen in centers for d in sq.DIGITS]
        step = step * x
    half = x ** n
    if exact:
        pieces = [(c - half, c + half) for c in centers]
        merged = []
        for a, b in pieces:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return [CoverInterval(RealScalar.from_fraction(a), RealScalar.from_fraction(b))
                for a, b in merged]
    merged = []
    for cen in centers:
        a, b = cen - half, cen + half
        if merged and not (a.a > merged[-1][1].b):
            merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return [CoverInterval(RealScalar(a), RealScalar(b)) for a, b in merged]


IN_COVER = "in_cover"
OUT = "out"
UNDECIDED = "undecided"


@with_workprec
def membership(t: Number, lam: Number, n: int, max_candidates: int = 64) -> str:
    """Locate t against E_λ(n) by descending the cylinder tree.

    Only cylinders that possibly contain t are expanded, so the work is
    linear in n. ``out`` is certified; ``in_cover`` means some depth-n
    cylinder certainly contains t; ``undecided`` means t is within the
    rounding radius of a cylinder boundary.
    """
    t, lam = scalar(t), scalar(lam)
    if not lam.certainly_gt(0) or lam.certainly_gt(THIRD):
        raise ValueError("lambda must lie in (0, 1/3]")
    exact = t.exact is not None and lam.exact is not None
    if exact:
        return _membership_exact(t.exact, lam.exact, n)
    x, tv = lam.iv, t.iv
    cands = [iv.mpf(0)]
    half = iv.mpf(1)
    step = 1 - x
    for _ in range(n):
        half = half * x
        nxt = []
        for cen in cands:
            for d in sq.DIGITS:
                c2 = cen + d * step
                if not (abs(tv - c2) - half).a > 0:
                    nxt.append(c2)
        step = step * x
        if not nxt:
            return OUT
        if len(nxt) > max_candidates:
            return UNDECIDED
        cands = nxt
    for cen in cands:
        if (abs(tv - cen) - half).b <= 0:
            return IN_COVER
    return UNDECIDED


def _membership_exact(t: Fraction, lam: Fraction, n: int) -> str:
    cands = [Fraction(0)]
    half = Fraction(1)
    step = 1 - lam
    for _ in range(n):
        half *= lam
        cands = sorted({cen + d * step for cen in cands for d in sq.DIGITS
                        if abs(t - cen - d * step) <= half})
        step *= lam
        if not cands:
            return OUT
    return IN_COVER
