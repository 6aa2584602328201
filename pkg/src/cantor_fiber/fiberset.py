"""Level-n covers of Λ(t) = {λ ∈ (0, 1/3] : t ∈ E_λ}, and quantities read off them.

The cover is built by a branch-and-bound over nodes ``(I, w)`` where I is a
λ-interval and w a digit word of length k. For ξ ranging over all codings,
``Π(wξ, λ)`` fills ``[x_w(λ) - λ^k, x_w(λ) + λ^k]``, so a node is discarded as
soon as t is certainly outside that band for every λ ∈ I.

Band extremes over I come from the values at the two endpoints plus the
second-derivative remainder ``M h²/8``: every Π(c, ·) has ``|∂²Π/∂λ²| ≤ 45/4``
on (0, 1/3]. Evaluation is vectorized float64 with an absolute slack that
dominates the rounding error of the short polynomials involved, so discarded
regions are genuine gaps and the reported cover is a superset of Λ(t) ∩ window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .reals import Number, RealScalar, scalar

THIRD = Fraction(1, 3)

CURVATURE_BOUND = 11.25      # Σ_{j≥0} (j+1)(j+2)3^{-j} + 2Σ_{j≥0}(j+1)3^{-j}
FLOAT_SLACK = 1e-12
MAX_DEPTH = 39               # words are packed base 3 into int64
DEFAULT_BUDGET = 10 ** 6
CHUNK = 1 << 16
LEAF_RESOLUTION = 0.5      # stop bisecting once the λ-spread is this fraction of the band


@dataclass(frozen=True)
class LambdaInterval:
    lo: RealScalar
    hi: RealScalar

    def to_json(self) -> list:
        return [self.lo.decimal_str(), self.hi.decimal_str()]


@dataclass
class IntervalCover:
    """Sorted disjoint λ-intervals covering Λ(t) ∩ window at a given depth.

    ``bounds`` is an (N, 2) float array of merged intervals; ``gaps`` the
    open intervals between consecutive ones. ``leaves`` keeps the raw
    branch-and-bound leaves (``lo, hi, code, k, hit``), where ``hit`` marks
    leaves on which t was certified inside the depth-n band throughout.
    The last interval's right end is reported as the exact window end.
    """

    t: RealScalar
    depth: int
    window: tuple
    bounds: np.ndarray
    leaves: dict = field(repr=False, default_factory=dict)
    truncated: bool = False
    nodes: int = 0

    @property
    def gaps(self) -> np.ndarray:
        if len(self.bounds) < 2:
            return np.empty((0, 2))
        return np.column_stack([self.bounds[:-1, 1], self.bounds[1:, 0]])

    @property
    def min_endpoint(self) -> float:
        return float(self.bounds[0, 0])

    def max_endpoint(self) -> RealScalar:
        """Right end of the cover; the exact window end when it is reached."""
        top = self.bounds[-1, 1]
        if top >= _float_up(self.window[1]):
            return self.window[1]
        return RealScalar.coerce(float(top))

    def intervals(self) -> list:
        out = [LambdaInterval(RealScalar.coerce(float(a)), RealScalar.coerce(float(b)))
               for a, b in self.bounds]
        if out and self.bounds[-1, 1] >= _float_up(self.window[1]):
            out[-1] = LambdaInterval(out[-1].lo, self.window[1])
        return out

    def hit_words(self) -> list:
        """(λ-midpoint, word) for every certified hit leaf, sorted by λ."""
        lv = self.leaves
        idx = np.nonzero(lv["hit"])[0]
        mids = (lv["lo"][idx] + lv["hi"][idx]) / 2
        order = np.argsort(mids, kind="stable")
        return [(float(mids[i]), decode_word(int(lv["code"][idx[i]]), int(lv["k"][idx[i]])))
                for i in order]

    def contains(self, lam: float) -> bool:
        i = np.searchsorted(self.bounds[:, 0], lam, side="right") - 1
        return bool(i >= 0 and lam <= self.bounds[i, 1])

    def to_json(self) -> dict:
        ivs = self.intervals()
        gaps = [[RealScalar.coerce(float(a)).decimal_str(), RealScalar.coerce(float(b)).decimal_str()]
                for a, b in self.gaps]
        return {
            "t": self.t.decimal_str(),
            "depth": self.depth,
            "window": [self.window[0].decimal_str(), self.window[1].decimal_str()],
            "truncated": self.truncated,
            "nodes": self.nodes,
            "min": ivs[0].lo.decimal_str() if ivs else None,
            "max": ivs[-1].hi.decimal_str() if ivs else None,
            "intervals": [iv.to_json() for iv in ivs],
            "gaps": gaps,
        }


def _float_down(x: RealScalar) -> float:
    v = float(x.lo)
    return v if v <= x.lo else float(np.nextafter(v, -np.inf))


def _float_up(x: RealScalar) -> float:
    v = float(x.hi)
    return v if v >= x.hi else float(np.nextafter(v, np.inf))


def decode_word(code: int, k: int) -> tuple:
    digits = []
    for _ in range(k):
        code, r = divmod(code, 3)
        digits.append(r - 1)
    return tuple(reversed(digits))


def encode_word(word) -> int:
    code = 0
    for d in word:
        code = code * 3 + d + 1
    return code


def _x_word(code, k, lam):
    """x_w(λ) = (1-λ) Σ w_j λ^(j-1), vectorized over nodes."""
    acc = np.zeros_like(lam)
    code = code.copy()
    kmax = int(k.max()) if len(k) else 0
    for j in range(kmax):
        live = j < k
        d = (code % 3 - 1).astype(np.float64)
        acc = np.where(live, d + lam * acc, acc)
        code //= 3
    return (1 - lam) * acc


def default_window(t: RealScalar) -> tuple:
    m = min(t, (1 - t) / 2, key=lambda x: x.value)
    lo = max(float(m.value) - 1e-3, float(m.value) / 2)
    return RealScalar.coerce(lo), RealScalar.from_fraction(THIRD)


def _check_t(t: RealScalar) -> None:
    if not (t.certainly_gt(0) and t.certainly_lt(1)):
        raise ValueError("t must lie in (0, 1)")
    if t.possibly_le(THIRD) and t.possibly_ge(THIRD):
        raise ValueError("t = 1/3 is excluded: Λ(1/3) = {1/3}")


def lambda_cover(t: Number, depth: int, window=None, budget: int = DEFAULT_BUDGET) -> IntervalCover:
    """Certified depth-``depth`` cover of Λ(t) inside ``window``.

    Nodes are expanded left to right in chunks, so when ``budget`` nodes have
    been processed the left part of the window is fully resolved and the
    remaining nodes are kept whole as coarse leaves (``truncated`` is set).
    """
    t = scalar(t)
    _check_t(t)
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in [0, {MAX_DEPTH}]")
    if window is None:
        window = default_window(t)
    w_lo, w_hi = (scalar(x) for x in window)
    if not (w_lo.certainly_gt(0) and w_hi.possibly_le(THIRD) and w_lo.certainly_lt(w_hi)):
        raise ValueError("window must satisfy 0 < lo < hi <= 1/3")
    tv = float(t.value)
    t_slack = FLOAT_SLACK + float(t.error_radius)
    a0, b0 = _float_down(w_lo), _float_up(w_hi)

    root = dict(a=np.array([a0]), b=np.array([b0]), code=np.zeros(1, np.int64),
                k=np.zeros(1, np.int64), xa=np.zeros(1), xb=np.zeros(1),
                pa=np.ones(1), pb=np.ones(1))
    stack = [root]
    leaves = {key: [] for key in ("lo", "hi", "code", "k", "hit")}
    processed, truncated = 0, False

    def emit(nd, mask, hit):
        leaves["lo"].append(nd["a"][mask])
        leaves["hi"].append(nd["b"][mask])
        leaves["code"].append(nd["code"][mask])
        leaves["k"].append(nd["k"][mask])
        leaves["hit"].append(hit[mask])

    while stack:
        nd = stack.pop()
        if processed >= budget:
            truncated = True
            everything = np.ones(len(nd["a"]), bool)
            emit(nd, everything, ~everything)
            continue
        processed += len(nd["a"])

        a, b, xa, xb, pa, pb = (nd[key] for key in ("a", "b", "xa", "xb", "pa", "pb"))
        h = b - a
        curv = CURVATURE_BOUND * h * h / 8 + t_slack
        alive = (np.minimum(xa - pa, xb - pb) - curv <= tv) & (tv <= np.maximum(xa + pa, xb + pb) + curv)
        if not alive.any():
            continue
        nd = {key: v[alive] for key, v in nd.items()}
        a, b, k, xa, xb, pa, pb = (nd[key] for key in ("a", "b", "k", "xa", "xb", "pa", "pb"))
        h, curv = h[alive], curv[alive]

        spread = np.abs(xb - xa) + curv
        band = np.minimum(pa, pb)
        at_depth = k >= depth
        hit = at_depth & (np.maximum(xa - pa, xb - pb) + curv <= tv) \
            & (tv <= np.minimum(xa + pa, xb + pb) - curv)
        tiny = (a + h / 2 <= a) | (a + h / 2 >= b)
        leaf = hit | (at_depth & ((spread <= band * LEAF_RESOLUTION) | tiny))
        if leaf.any():
            emit(nd, leaf, hit)
        extend = ~leaf & ~at_depth & ((2 * band > spread) | tiny)
        split = ~leaf & ~extend

        parts = []
        if extend.any():
            e = {key: v[extend] for key, v in nd.items()}
            for d in (-1, 0, 1):
                parts.append(dict(
                    a=e["a"], b=e["b"], code=e["code"] * 3 + (d + 1), k=e["k"] + 1,
                    xa=e["xa"] + d * (1 - e["a"]) * e["pa"], xb=e["xb"] + d * (1 - e["b"]) * e["pb"],
                    pa=e["pa"] * e["a"], pb=e["pb"] * e["b"]))
        if split.any():
            sp = {key: v[split] for key, v in nd.items()}
            mid = sp["a"] + (sp["b"] - sp["a"]) / 2
            xm, pm = _x_word(sp["code"], sp["k"], mid), mid ** sp["k"]
            parts.append(dict(sp, b=mid, xb=xm, pb=pm))
            parts.append(dict(sp, a=mid, xa=xm, pa=pm))
        if not parts:
            continue
        merged = {key: np.concatenate([p[key] for p in parts]) for key in root}
        order = np.lexsort((merged["code"], merged["k"], merged["a"]))
        merged = {key: v[order] for key, v in merged.items()}
        # push rightmost chunks first so the leftmost one is expanded next
        for s in reversed(range(0, len(order), CHUNK)):
            stack.append({key: v[s:s + CHUNK] for key, v in merged.items()})

    lv = {key: (np.concatenate(v) if v else np.empty(0)) for key, v in leaves.items()}
    if len(lv["lo"]):
        lv["code"] = lv["code"].astype(np.int64)
        lv["k"] = lv["k"].astype(np.int64)
        lv["hit"] = lv["hit"].astype(bool)
    bounds = _merge(lv["lo"], lv["hi"])
    return IntervalCover(t, depth, (w_lo, w_hi), bounds, lv, truncated, processed)


def _merge(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    if len(lo) == 0:
        return np.empty((0, 2))
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(hi)
    new = np.ones(len(lo), bool)
    new[1:] = lo[1:] > reach[:-1]
    starts = np.nonzero(new)[0]
    ends = np.append(starts[1:], len(lo)) - 1
    return np.column_stack([lo[starts], reach[ends]])


# -- dimension-distribution function ---------------------------------------

@dataclass(frozen=True)
class PsiSample:
    lam: float
    psi: float
    below_min: bool = False


def psi_from_cover(cover: IntervalCover, lambdas) -> list:
    """ψ_t(λ) = log 3 / (-log γ) with γ the largest cover point ≤ λ.

    Since the cover contains Λ(t), γ is an upper estimate of sup Λ(t) ∩ (0, λ].
    Below the cover, ψ is 0 and ``below_min`` is set.
    """
    b = cover.bounds
    top_exact = cover.max_endpoint()
    out = []
    for lam in lambdas:
        lam_s = scalar(lam)
        lf = float(lam_s.value)
        i = int(np.searchsorted(b[:, 0], lf, side="right")) - 1
        if i < 0:
            out.append(PsiSample(lf, 0.0, True))
            continue
        if i == len(b) - 1 and top_exact.exact is not None and lam_s.possibly_ge(top_exact):
            gamma = top_exact if not lam_s.certainly_lt(top_exact) else lam_s
            if gamma.exact == THIRD:
                out.append(PsiSample(lf, 1.0))
                continue
            out.append(PsiSample(lf, math.log(3) / -math.log(float(gamma.value))))
            continue
        gamma = min(lf, float(b[i, 1]))
        out.append(PsiSample(lf, math.log(3) / -math.log(gamma)))
    return out


def psi_samples(t: Number, depth: int, lambdas, window=None, budget: int = DEFAULT_BUDGET,
                cover: IntervalCover | None = None) -> list:
    if cover is None:
        cover = lambda_cover(t, depth, window, budget)
    return psi_from_cover(cover, lambdas)


# -- the master set Γ ----------------------------------------------------

@dataclass(frozen=True)
class Band:
    lam: float
    t_lo: float
    t_hi: float
    word: tuple


def _all_words(depth: int) -> np.ndarray:
    grids = np.meshgrid(*([np.array([-1, 0, 1])] * depth), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1) if depth else np.zeros((1, 0), int)


def gamma_raster(depth: int, lambdas, t_range=(0.0, 1.0), budget: int = DEFAULT_BUDGET) -> list:
    """Bands {Π(w(-1)^∞, λ) ≤ y ≤ Π(w1^∞, λ)} over all words w of length
    ``depth``, sampled on ``lambdas`` and clipped to ``t_range``.

    Rows are ordered by λ, then by band position.
    """
    lambdas = sorted(float(scalar(x).value) for x in lambdas)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if len(lambdas) * 3 ** depth > budget:
        raise ValueError(f"{len(lambdas)} x 3^{depth} bands exceed the budget of {budget}")
    if any(not 0 < lam <= 1 / 3 + 1e-15 for lam in lambdas):
        raise ValueError("lambda grid must lie in (0, 1/3]")
    y0, y1 = t_range
    words = _all_words(depth)
    rows = []
    for lam in lambdas:
        powers = lam ** np.arange(depth)
        centers = (1 - lam) * (words @ powers) if depth else np.zeros(1)
        half = lam ** depth
        lo, hi = np.maximum(centers - half, y0), np.minimum(centers + half, y1)
        keep = np.nonzero(lo <= hi)[0]
        for i in keep[np.argsort(centers[keep], kind="stable")]:
            rows.append(Band(lam, float(lo[i]), float(hi[i]), tuple(int(d) for d in words[i])))
    return rows


def gamma_fiber(depth: int, lam: Number, t_range=(0.0, 1.0)) -> list:
    """Merged vertical slice of the depth-n approximation of Γ at λ."""
    bands = gamma_raster(depth, [lam], t_range, budget=3 ** depth)
    if not bands:
        return []
    merged = _merge(np.array([b.t_lo for b in bands]), np.array([b.t_hi for b in bands]))
    return [(float(a), float(b)) for a, b in merged]


def gamma_occupancy(depth: int, width: int, height: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Boolean (height, width) grid over (0, 1/3] x [0, 1]; cell (j, i) is set
    when some band meets the t-cell j at the i-th λ sample."""
    lambdas = [(i + 1) / (3 * width) for i in range(width)]
    grid = np.zeros((height, width), bool)
    for band in gamma_raster(depth, lambdas, budget=budget):
        i = lambdas.index(band.lam)
        j0 = min(int(band.t_lo * height), height - 1)
        j1 = min(int(band.t_hi * height), height - 1)
        grid[j0:j1 + 1, i] = True
    return grid


# -- box counting --------------------------------------------------------

@dataclass(frozen=True)
class BoxCount:
    slope: float
    scales: tuple
    counts: tuple


def _intervals_of(cover) -> np.ndarray:
    if isinstance(cover, IntervalCover):
        return cover.bounds
    arr = np.asarray(cover, dtype=float).reshape(-1, 2)
    return arr[np.argsort(arr[:, 0], kind="stable")]


def box_scales(window, count: int = 11, coarsest: float = 0.1, finest: float = 1e-4) -> list:
    """Geometric scales from ``coarsest`` to ``finest`` times the window width."""
    w0, w1 = (float(scalar(x).value) for x in window)
    width = w1 - w0
    ratio = finest / coarsest
    return [width * coarsest * ratio ** (i / (count - 1)) for i in range(count)]


def box_count_estimate(cover, window, scales) -> BoxCount:
    """Least-squares slope of log N(ε) against log(1/ε).

    N(ε) counts the boxes ``[w0 + iε, w0 + (i+1)ε)`` met by the cover inside
    ``window = (w0, w1)``.
    """
    scales = [float(s) for s in scales]
    if len(scales) < 2:
        raise ValueError("need at least two scales")
    if any(s <= 0 for s in scales):
        raise ValueError("scales must be positive")
    w0, w1 = (float(scalar(x).value) for x in window)
    iv = _intervals_of(cover)
    lo, hi = np.maximum(iv[:, 0], w0), np.minimum(iv[:, 1], w1)
    keep = lo <= hi
    lo, hi = lo[keep], hi[keep]
    if len(lo) == 0:
        raise ValueError("the cover does not meet the window")
    counts = []
    for eps in scales:
        nbox = max(int(math.ceil((w1 - w0) / eps)), 1)
        first = np.minimum(np.floor((lo - w0) / eps), nbox - 1).astype(np.int64)
        last = np.minimum(np.ceil((hi - w0) / eps) - 1, nbox - 1).astype(np.int64)
        last = np.maximum(last, first)
        total = int(np.sum(last - first + 1))
        total -= int(np.sum(first[1:] <= last[:-1]))
        counts.append(total)
    x = np.log(1 / np.array(scales))
    y = np.log(np.array(counts, dtype=float))
    slope = float(np.polyfit(x, y, 1)[0])
    return BoxCount(slope, tuple(scales), tuple(counts))
