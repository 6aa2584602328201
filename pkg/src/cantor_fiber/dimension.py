"""Closed-form dimension quantities, evaluated at the working precision.

All logarithms are natural; every formula is a ratio of logarithms, so the
base cancels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import mp

from . import seqcore as sq
from .reals import Number, RealScalar, scalar, with_workprec

THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class DimensionReport:
    hausdorff: object
    packing: object
    formula: str                     # zero_frequency | local | levelset | moran | boxcount
    flags: tuple = ()

    def to_json(self) -> dict:
        return {
            "hausdorff": RealScalar.coerce(self.hausdorff).decimal_str(),
            "packing": RealScalar.coerce(self.packing).decimal_str(),
            "formula": self.formula,
            "flags": list(self.flags),
        }


def _log(x):
    """Natural log of a Fraction/int/float/RealScalar at the working precision."""
    if isinstance(x, RealScalar):
        x = x.exact if x.exact is not None else x.value
    if isinstance(x, Fraction):
        return mp.log(x.numerator) - mp.log(x.denominator)
    return mp.log(x)


def _check_lambda(lam: RealScalar) -> None:
    if not lam.certainly_gt(0) or lam.certainly_gt(THIRD):
        raise ValueError("lambda must lie in (0, 1/3]")


@with_workprec
def intersection_dims(c: sq.PeriodicCoding, lam: Number, ambiguous: bool = False) -> DimensionReport:
    """Dimensions of C_λ ∩ (C_λ + t) for the t coded by ``c`` in base λ.

    Both equal freq₀(c)·log 2/(-log λ); the lower and upper zero
    frequencies coincide for an eventually periodic coding. ``ambiguous``
    records that t has two codings at λ = 1/3 and ``c`` is the one picked by
    the tie-breaking rule.
    """
    lam = scalar(lam)
    _check_lambda(lam)
    stats = sq.frequency_stats(c)
    scale = mp.log(2) / -_log(lam)
    flags = ("double_coding",) if ambiguous else ()
    return DimensionReport(stats.lower_freq0 * scale, stats.upper_freq0 * scale, "zero_frequency", flags)


@with_workprec
def intersection_dims_from_digits(digits: Sequence[int], lam: Number,
                                  ambiguous: bool = False) -> DimensionReport:
    """Same formula with the zero frequency read off a finite digit prefix."""
    lam = scalar(lam)
    _check_lambda(lam)
    if not digits:
        raise ValueError("need at least one digit")
    freq = Fraction(sum(1 for d in digits if d == 0), len(digits))
    value = freq * mp.log(2) / -_log(lam)
    flags = ("prefix_estimate",) + (("double_coding",) if ambiguous else ())
    return DimensionReport(value, value, "zero_frequency", flags)


@with_workprec
def entropy(p: Sequence) -> object:
    """-Σ p_i log p_i with 0·log 0 = 0."""
    if len(p) != 3:
        raise ValueError("expected a probability vector of length 3")
    exact = all(isinstance(x, (int, Fraction)) for x in p)
    if any(x < 0 for x in p):
        raise ValueError("probabilities must be nonnegative")
    total = sum(p) if exact else sum(mp.mpf(x) for x in p)
    if (exact and total != 1) or (not exact and abs(total - 1) > mp.mpf("1e-15")):
        raise ValueError("probabilities must sum to 1")
    return -sum((x * _log(x) for x in p if x != 0), mp.mpf(0))


@with_workprec
def level_set_dim(beta: Number) -> object:
    """h((1-β)/2, β, (1-β)/2) / log 3."""
    beta = scalar(beta)
    if beta.certainly_lt(0) or beta.certainly_gt(1):
        raise ValueError("beta must lie in [0, 1]")
    b = beta.exact if beta.exact is not None else beta.value
    side = (1 - b) / 2
    return entropy((side, b, side)) / mp.log(3)


@with_workprec
def local_dim_lambda_set(lam: Number) -> object:
    """log 3/(-log λ); exactly 1 at λ = 1/3."""
    lam = scalar(lam)
    _check_lambda(lam)
    if lam.exact == THIRD:
        return mp.mpf(1)
    return mp.log(3) / -_log(lam)


@with_workprec
def moran_dim(level_counts: Sequence[int], ratio) -> object:
    """liminf over generations of Σ log n_i / (-Σ log r_i) for a homogeneous
    Moran construction with n_i pieces scaled by r_i at generation i.

    ``ratio`` is one number or one per generation. On a finite list the
    liminf is taken as the minimum of the quotients over the second half of
    the generations.
    """
    counts = list(level_counts)
    if not counts:
        raise ValueError("need at least one generation")
    if any(int(n) < 1 for n in counts):
        raise ValueError("counts must be >= 1")
    ratios = list(ratio) if isinstance(ratio, (list, tuple)) else [ratio] * len(counts)
    if len(ratios) != len(counts):
        raise ValueError("one ratio per generation expected")
    logs_r = []
    for r in ratios:
        r = scalar(r)
        if not (r.certainly_gt(0) and r.certainly_lt(1)):
            raise ValueError("ratios must lie in (0, 1)")
        logs_r.append(-_log(r))
    if all(int(n) == 1 for n in counts):
        return mp.mpf(0)
    num = den = mp.mpf(0)
    quotients = []
    for n, lr in zip(counts, logs_r):
        num += mp.log(int(n))
        den += lr
        quotients.append(num / den)
    return min(quotients[len(quotients) // 2:])


@with_workprec
def sigma_lower_bound(q: int, gamma: Number) -> object:
    """((q-1) log 3 + log 2) / (-(q+1) log γ)."""
    if int(q) != q or q < 1:
        raise ValueError("q must be a positive integer")
    gamma = scalar(gamma)
    _check_lambda(gamma)
    return ((q - 1) * mp.log(3) + mp.log(2)) / (-(q + 1) * _log(gamma))


def sigma_moran_geometry(q: int, generations: int) -> tuple:
    """Per-generation piece counts and word lengths of the Σ construction:
    generation m has (3^(q-1)·2)^(3·2^m) words of length 3(q+1)2^m."""
    counts = [(3 ** (q - 1) * 2) ** (3 * 2 ** m) for m in range(generations)]
    lengths = [3 * (q + 1) * 2 ** m for m in range(generations)]
    return counts, lengths


# -- Σ_{q,j} digit pattern -------------------------------------------------

def zero_filler(position: int) -> int:
    return 0


@dataclass(frozen=True)
class SigmaPattern:
    """Digit pattern whose zero frequency oscillates between two limits.

    Generation m consists of 3q·2^m free digits followed by 1^(2^(m+1))
    0^(2^m); every q-th free digit must not be -1. ``filler`` maps the
    1-based position of a free digit (counted after ``prefix``) to a digit;
    a -1 proposed at a constrained position is replaced by 0.
    """

    q: int
    m_max: int
    prefix: tuple = ()
    filler: Callable[[int], int] = field(default=zero_filler, compare=False)

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 1:
            raise ValueError("q must be a positive integer")
        if self.m_max < 0:
            raise ValueError("m_max must be >= 0")
        sq.check_word(self.prefix)

    def r(self, m: int) -> int:
        return 3 * (self.q + 1) * (2 ** m - 1)

    def ell(self, m: int) -> int:
        return self.r(m) - 2 ** (m - 1)

    @property
    def length(self) -> int:
        """Number of pattern digits (after the prefix) for generations 0..m_max."""
        return self.r(self.m_max + 1)

    def constrained(self, position: int) -> bool:
        """Whether the 1-based pattern position is one of the r_m + kq slots."""
        m = 0
        while self.r(m + 1) < position:
            m += 1
        offset = position - self.r(m)
        return offset <= 3 * self.q * 2 ** m and offset % self.q == 0


@dataclass(frozen=True)
class SigmaWord:
    digits: tuple                 # prefix followed by the pattern digits
    pattern: tuple                # the pattern digits alone
    r_checkpoints: tuple          # (m, r_m, zero frequency of the first r_m pattern digits)
    ell_checkpoints: tuple        # (m, ℓ_m, zero frequency of the first ℓ_m pattern digits)


def sigma_generate(p: SigmaPattern, n: int | None = None) -> SigmaWord:
    """The first ``n`` pattern digits (all of them by default), with zero
    frequencies at the checkpoints r_m and ℓ_m = r_m - 2^(m-1) that fit."""
    total = p.length
    if n is None:
        n = total
    if not 0 <= n <= total:
        raise ValueError(f"n must be in [0, {total}] for m_max={p.m_max}")
    out = []
    pos = 0
    for m in range(p.m_max + 1):
        free = 3 * p.q * 2 ** m
        for k in range(1, free + 1):
            d = p.filler(pos + 1)
            if d not in sq.DIGITS:
                raise ValueError(f"filler produced invalid digit {d}")
            if k % p.q == 0 and d == -1:
                d = 0
            out.append(d)
            pos += 1
        out.extend([1] * 2 ** (m + 1) + [0] * 2 ** m)
        pos += 3 * 2 ** m
    pattern = tuple(out[:n])
    zeros = [0]
    for d in pattern:
        zeros.append(zeros[-1] + (d == 0))
    r_cp, l_cp = [], []
    for m in range(1, p.m_max + 2):
        if p.r(m) <= n:
            r_cp.append((m, p.r(m), Fraction(zeros[p.r(m)], p.r(m))))
        if p.ell(m) <= n:
            l_cp.append((m, p.ell(m), Fraction(zeros[p.ell(m)], p.ell(m))))
    return SigmaWord(tuple(p.prefix) + pattern, pattern, tuple(r_cp), tuple(l_cp))


def sigma_limits(q: int, zeta: Number | None = None) -> tuple:
    """Limits of the checkpoint frequencies along r_m and ℓ_m when the free
    blocks contain ζ·2^m zeros asymptotically (ζ = 3q for zero filler)."""
    z = Fraction(3 * q) if zeta is None else Fraction(zeta)
    return (z + 1) / (3 * (q + 1)), (2 * z + 1) / (6 * q + 5)
