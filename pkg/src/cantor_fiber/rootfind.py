"""Certified bisection for monotone functions evaluated in interval arithmetic."""
from __future__ import annotations

from mpmath import iv, mp

from .reals import RealScalar, workprec


def _sign(v) -> int:
    """+1 / -1 when the interval ``v`` certainly excludes zero, else 0."""
    if v.a > 0:
        return 1
    if v.b < 0:
        return -1
    return 0


def bisect_monotone(f, lo, hi, increasing: bool, rtol=None, max_iter: int = 4000) -> RealScalar:
    """Enclose the root of a monotone ``f`` on ``[lo, hi]``.

    ``f`` maps a point (as a degenerate ``iv.mpf``) to an interval. The caller
    guarantees a sign change, i.e. ``f(lo) <= 0 <= f(hi)`` for increasing
    ``f`` (reversed for decreasing). Midpoints whose sign cannot be certified
    are handled by shrinking towards them from both sides, so the returned
    enclosure is as narrow as the working precision permits.
    """
    with workprec():
        lo, hi = mp.mpf(lo), mp.mpf(hi)
        if rtol is None:
            rtol = mp.mpf(2) ** (-mp.prec + 4)
        rtol = mp.mpf(rtol)
        sgn = 1 if increasing else -1

        def side(x):
            # -1: x is certainly left of the root, +1: certainly right, 0: unknown
            return sgn * _sign(f(iv.mpf(x)))

        for _ in range(max_iter):
            if hi - lo <= rtol * max(abs(hi), abs(lo), mp.mpf(2) ** -60):
                break
            mid = (lo + hi) / 2
            if mid <= lo or mid >= hi:
                break
            s = side(mid)
            if s < 0:
                lo = mid
            elif s > 0:
                hi = mid
            else:
                lo = _shrink(side, lo, mid, -1, rtol, max_iter)
                hi = _shrink(side, mid, hi, +1, rtol, max_iter)
                break
        return RealScalar(iv.mpf([lo, hi]))


def _shrink(side, a, b, want, rtol, max_iter):
    """Move the bracket end that is certainly on side ``want`` towards the
    uncertain zone. For ``want == -1`` returns the largest certified-left
    point found in ``[a, b]``; for ``+1`` the smallest certified-right one."""
    good, bad = (a, b) if want == -1 else (b, a)
    for _ in range(max_iter):
        if abs(good - bad) <= rtol * max(abs(good), abs(bad), mp.mpf(2) ** -60):
            break
        mid = (good + bad) / 2
        if mid == good or mid == bad:
            break
        if side(mid) == want:
            good = mid
        else:
            bad = mid
    return good
