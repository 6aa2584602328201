"""Self-verification: the acceptance checks, runnable from the CLI and pytest."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from mpmath import iv, mp

from . import seqcore as sq
from .coding import IN_COVER, NOT_MEMBER, OUT, UNDECIDED, membership, phi_t_digits
from .dimension import (SigmaPattern, level_set_dim, moran_dim, sigma_generate,
                        sigma_limits, sigma_lower_bound, sigma_moran_geometry)
from .fiberset import box_count_estimate, box_scales, lambda_cover, psi_from_cover
from .projection import (C_001, C_01, C_01M, C_01M0, critical_lambda, phi_value,
                         pi2_closed, pi_closed)
from .reals import RealScalar, scalar, workprec
from .solver import lambda_diamond, solve_lambda, tau, tau_detail

THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.title}: {self.detail}"


CHECKS: dict[int, tuple[str, Callable[[], tuple[bool, str]]]] = {}


def check(number: int, title: str):
    def register(fn):
        CHECKS[number] = (title, fn)
        return fn

    return register


def run_check(number: int) -> CheckResult:
    title, fn = CHECKS[number]
    passed, detail = fn()
    return CheckResult(number, title, bool(passed), detail)


def run_all(numbers=None) -> list:
    return [run_check(n) for n in (numbers or sorted(CHECKS))]


# -- 1 ---------------------------------------------------------------------

@check(1, "closed-form identities on the lambda grid")
def closed_forms():
    refs = [
        (C_01, lambda x: x),
        (sq.PeriodicCoding((1,), (-1,)), lambda x: 1 - 2 * x),
        (C_001, lambda x: x * x),
        (C_01M0, lambda x: x * (1 - x) ** 2),
    ]
    worst = mp.mpf(0)
    with workprec():
        grid = [iv.mpf(k) / 100 for k in range(1, 34)] + [iv.mpf(1) / 3]
        for lam in grid:
            for c, ref in refs:
                d = RealScalar(pi_closed(c, lam) - ref(lam))
                worst = max(worst, abs(d.value) + d.error_radius)
    return worst <= mp.mpf("1e-20"), f"max deviation {mp.nstr(worst, 3)} (limit 1e-20)"


# -- 2 ---------------------------------------------------------------------

@check(2, "critical points and phi endpoints")
def critical_points():
    a = critical_lambda(C_01M)
    b = critical_lambda(C_01M0)
    lo = phi_value(C_01M)
    hi = phi_value(C_01M0)
    errs = [abs(a.value - mp.mpf(1) / 4) + a.error_radius,
            abs(b.value - mp.mpf(1) / 3) + b.error_radius,
            abs(lo.value - mp.mpf(1) / 8) + lo.error_radius,
            abs(hi.value - mp.mpf(4) / 27) + hi.error_radius]
    ok = errs[0] <= 1e-10 and errs[1] <= 1e-10 and errs[2] <= 1e-12 and errs[3] <= 1e-12
    return ok, "errors " + ", ".join(mp.nstr(e, 3) for e in errs)


# -- 3 ---------------------------------------------------------------------

GAP_ENDPOINTS = [("1,-1,-1:1", 0.2696), ("1,-1,0:-1", 0.2779),
                 ("1,-1,0:1", 0.3154), ("1,-1,1:-1", 0.3194)]


@check(3, "gap endpoints for t = 1/2")
def gap_endpoints():
    parts, ok = [], True
    for text, target in GAP_ENDPOINTS:
        roots = [r for r in solve_lambda(sq.PeriodicCoding.parse(text), "1/2").roots
                 if r.value.certainly_gt(Fraction(1, 4))]
        if len(roots) != 1:
            ok = False
            parts.append(f"{text}: {len(roots)} roots")
            continue
        v = float(roots[0].value)
        ok &= abs(v - target) <= 5e-4
        parts.append(f"{text} -> {v:.6f}")
    return ok, "; ".join(parts)


# -- 4 ---------------------------------------------------------------------

@check(4, "cover extremes at depth 20")
def cover_extremes():
    parts, ok = [], True
    for t in ("0.2", "0.5", "0.9"):
        tq = Fraction(t)
        expected = min(tq, (1 - tq) / 2)
        cover = lambda_cover(t, 20)
        err = abs(cover.min_endpoint - float(expected))
        top = cover.max_endpoint()
        ok &= err <= 1e-5 and top.exact == THIRD
        parts.append(f"t={t}: |min-{float(expected)}|={err:.2e}, max={'1/3' if top.exact == THIRD else top}")
    return ok, "; ".join(parts)


# -- 5 ---------------------------------------------------------------------

@check(5, "psi plateau for t = 1/2")
def psi_plateau():
    cover = lambda_cover("1/2", 14)
    (s,) = psi_from_cover(cover, ["0.276"])
    return abs(s.psi - 0.8381) <= 2e-3, f"psi(0.276) = {s.psi:.6f} (target 0.8381 +- 2e-3)"


# -- 6 ---------------------------------------------------------------------

def random_coding(rng: random.Random, max_pre: int = 4, max_per: int = 4) -> sq.PeriodicCoding:
    pre = tuple(rng.choice(sq.DIGITS) for _ in range(rng.randint(0, max_pre)))
    per = tuple(rng.choice(sq.DIGITS) for _ in range(rng.randint(1, max_per)))
    return sq.PeriodicCoding(pre, per)


@check(6, "lexicographic monotonicity of the projection")
def lex_monotone(pairs: int = 10_000, seed: int = 20240611):
    rng = random.Random(seed)
    violations = done = 0
    top = Fraction(1, 3) - Fraction(1, 10 ** 6)
    while done < pairs:
        a, b = random_coding(rng), random_coding(rng)
        cmp = sq.lex_compare(a, b)
        if cmp == 0:
            continue
        if cmp > 0:
            a, b = b, a
        lam = Fraction(rng.random()) * top
        if lam == 0:
            continue
        done += 1
        if not pi_closed(a, lam) < pi_closed(b, lam):
            violations += 1
    return violations == 0, f"{violations} violations in {pairs} pairs (exact rational arithmetic)"


# -- 7 ---------------------------------------------------------------------

def sampled_codings(t: str, depth: int, count: int, lo=None, hi=None):
    """Up to ``count`` λ values spread over the certified hit leaves of the
    cover (one per distinct word), each paired with the first ``depth``
    digits of its coding computed by the digit recursion."""
    cover = lambda_cover(t, depth)
    seen, pool = set(), []
    for lam, word in cover.hit_words():
        if (lo is not None and lam <= lo) or (hi is not None and lam >= hi):
            continue
        if word not in seen:
            seen.add(word)
            pool.append((lam, word))
    if len(pool) > count:
        step = (len(pool) - 1) / (count - 1)
        pool = [pool[round(i * step)] for i in range(count)]
    out = []
    for lam, word in pool:
        res = phi_t_digits(t, lam, depth)
        out.append((lam, res.digits, res.digits == word and res.status != NOT_MEMBER))
    return out


def _monotone(samples, direction: int) -> bool:
    """direction +1: codings increase with λ; -1: they decrease."""
    return all(sq.lex_compare(sq.with_tail(y[1], 0), sq.with_tail(x[1], 0)) == direction
               for x, y in zip(samples, samples[1:]))


@check(7, "monotonicity of the coding map along the fiber")
def coding_monotone(depth: int = 12, count: int = 50):
    parts, ok = [], True
    dec = sampled_codings("0.2", depth, count)
    good = all(x[2] for x in dec) and _monotone(dec, -1) and len(dec) == count
    ok &= good
    parts.append(f"t=0.2 decreasing over {len(dec)}: {good}")
    inc = sampled_codings("0.4", depth, count)
    good = all(x[2] for x in inc) and _monotone(inc, 1) and len(inc) == count
    ok &= good
    parts.append(f"t=0.4 increasing over {len(inc)}: {good}")

    turn = float(tau("0.13").value)
    below = sampled_codings("0.13", depth, count, hi=turn)
    above = sampled_codings("0.13", depth, count, lo=turn)
    good = (all(x[2] for x in below + above) and _monotone(below, -1) and _monotone(above, 1))
    ok &= good
    parts.append(f"t=0.13 turn at {turn:.6f}: dec {len(below)}/inc {len(above)} {good}")

    t12 = tau("0.12")
    good = t12.exact == Fraction(1, 4)
    ok &= good
    parts.append(f"tau(0.12) = {t12.exact if t12.exact is not None else t12}")

    detail = tau_detail("0.14")
    with workprec():
        coding = phi_t_digits("0.14", detail.tau, 64)
        complete = len(coding.digits) == 64 and coding.status != NOT_MEMBER
        if complete:
            d2 = RealScalar(pi2_closed(sq.with_tail(coding.digits, 0), detail.tau.iv))
            r = abs(d2.value) + d2.error_radius + 64 * detail.tau.hi ** 63
            good = r < 1e-8
            msg = f"|Pi2| at tau(0.14) <= {mp.nstr(r, 3)}"
        else:
            good = False
            msg = (f"0.14 has no 64-digit coding at tau(0.14) = {mp.nstr(detail.tau.value, 12)}"
                   f" ({coding.status}, {len(coding.digits)} digits)")
        if detail.jump:
            pts = ", ".join(mp.nstr(p.value, 12) for p in detail.fiber_points)
            msg += f"; turning coding overshoots t by {mp.nstr(detail.pi_residual, 3)}, fiber points {pts}"
    ok &= good
    parts.append(msg)
    return ok, "; ".join(parts)


# -- 8 ---------------------------------------------------------------------

@check(8, "ordering chain of the distinguished parameters")
def ordering_chain(samples: int = 100):
    n_low = samples // 2
    n_mid = samples - n_low
    bad = []
    for i in range(1, n_low + 1):
        t = Fraction(i, n_low) / 9
        d = lambda_diamond(t)
        if not (d.certainly_gt(t) and d.certainly_lt(_sqrt(t))):
            bad.append(f"chain fails at t={t}")
    taus = []
    lo, hi = Fraction(1, 9), Fraction(4, 27)
    for i in range(1, n_mid + 1):
        t = lo + (hi - lo) * Fraction(i, n_mid + 1)
        d = lambda_diamond(t)
        tv = tau(t)
        if not (d.certainly_gt(t) and tv.certainly_gt(d) and tv.certainly_lt(THIRD)):
            bad.append(f"chain fails at t={float(t):.6f}")
        if t > Fraction(1, 8):
            taus.append((t, tv))
    flat = [f"{float(a[0]):.6f}/{float(b[0]):.6f}" for a, b in zip(taus, taus[1:])
            if not b[1].certainly_gt(a[1])]
    if flat:
        bad.append(f"tau not strictly increasing between t = {', '.join(flat)}")
    return not bad, "; ".join(bad) if bad else f"{samples} samples, {len(taus)} tau values increasing"


def _sqrt(t: Fraction) -> RealScalar:
    with workprec():
        return RealScalar(iv.sqrt(RealScalar.from_fraction(t).iv))


# -- 9 ---------------------------------------------------------------------

@check(9, "level-set dimension endpoints")
def level_sets():
    a = level_set_dim(0)
    b = level_set_dim(1)
    c = level_set_dim(Fraction(1, 3))
    ok = abs(a - mp.log(2) / mp.log(3)) <= 1e-14 and b == 0 and abs(c - 1) <= 1e-14
    return ok, f"{mp.nstr(a, 16)}, {mp.nstr(b, 3)}, {mp.nstr(c, 16)}"


# -- 10 --------------------------------------------------------------------

@check(10, "zero-frequency oscillation and the q-limit of the lower bound")
def sigma_frequencies():
    q, m = 1, 12
    word = sigma_generate(SigmaPattern(q, m))
    lim_r, lim_l = sigma_limits(q)
    fr = {mm: f for mm, _, f in word.r_checkpoints}
    fl = {mm: f for mm, _, f in word.ell_checkpoints}
    ok = abs(fr[m] - lim_r) <= Fraction(1, 100) and abs(fl[m] - lim_l) <= Fraction(1, 100)
    separated = all(fr[k] != fl[k] for k in fr if k in fl)
    ok &= separated
    worst, low_tail = 0.0, 1.0
    for qq in range(1, 51):
        got = sigma_lower_bound(qq, Fraction(1, 3))
        with workprec():
            counts, lengths = sigma_moran_geometry(qq, 8)
            oracle = moran_dim(counts, [Fraction(1, 3) ** n for n in lengths])
        ref = ((qq - 1) * math.log(3) + math.log(2)) / ((qq + 1) * math.log(3))
        worst = max(worst, abs(float(got) - ref), abs(float(oracle) - ref))
        if qq >= 40:
            low_tail = min(low_tail, float(got))
    ok &= worst <= 1e-3 and low_tail > 0.95
    return ok, (f"r_{m}: {float(fr[m]):.5f} (->{lim_r}), l_{m}: {float(fl[m]):.5f} (->{lim_l}), "
                f"separated={separated}; bound deviation {worst:.1e}, min q>=40 {low_tail:.4f}")


# -- 11 --------------------------------------------------------------------

@check(11, "cover oracle agrees with the digit recursion")
def oracle_equivalence(pairs: int = 1000, depth: int = 30, seed: int = 7):
    rng = random.Random(seed)
    contradictions = decided = 0
    kinds = {IN_COVER: 0, OUT: 0, UNDECIDED: 0}
    for i in range(pairs):
        lam = Fraction(rng.uniform(1e-3, 1 / 3))
        if i % 4 == 0:
            t = Fraction(rng.uniform(-1, 1))
        elif i % 4 == 1:
            # a genuine member, in exact arithmetic
            t = pi_closed(random_coding(rng, 6, 6), lam)
        elif i % 4 == 2:
            # a member whose λ is only known as an enclosure
            with workprec():
                lam = RealScalar(RealScalar.from_fraction(lam).iv + iv.mpf(2) ** -100)
                t = RealScalar(pi_closed(random_coding(rng, 6, 6), lam.iv))
        else:
            # near-miss: a member shifted by a tiny amount
            t = pi_closed(random_coding(rng, 6, 6), lam) + Fraction(rng.choice((-1, 1)), 10 ** rng.randint(3, 12))
            if abs(t) > 1:
                t = t / abs(t)
        m = membership(t, lam, depth)
        kinds[m] += 1
        if m == UNDECIDED:
            continue
        res = phi_t_digits(t, lam, depth)
        if res.exhausted:
            continue
        decided += 1
        if (m == OUT) != (res.status == NOT_MEMBER):
            contradictions += 1
    return contradictions == 0, (f"{contradictions} contradictions over {decided} decided pairs "
                                 f"(in {kinds[IN_COVER]}, out {kinds[OUT]}, undecided {kinds[UNDECIDED]})")


# -- 12 --------------------------------------------------------------------

LOCAL_WINDOW = (0.295, 0.305)


@check(12, "local dimension trend from box counting")
def local_dimension_trend():
    target = math.log(3) / -math.log(0.30)
    scales = box_scales(LOCAL_WINDOW)
    est = {}
    for depth, budget in ((14, 10 ** 7), (18, 3 * 10 ** 8)):
        cover = lambda_cover("1/2", depth, window=("0.295", "0.305"), budget=budget)
        if cover.truncated:
            return False, f"depth {depth} cover truncated"
        est[depth] = box_count_estimate(cover, LOCAL_WINDOW, scales).slope
    d14, d18 = abs(est[14] - target), abs(est[18] - target)
    ok = d14 <= 0.08 and d18 <= 0.08 and d18 <= d14
    return ok, f"slopes {est[14]:.4f} (depth 14), {est[18]:.4f} (depth 18), target {target:.4f}"
