"""Discrete uncentered Hardy-Littlewood maximal operator on grid functions.

Windows are grid-aligned cell ranges [l, r] inside the domain; the output
value at cell i is the maximum of (prefix[r+1] - prefix[l]) / (r - l + 1)
over windows containing i.  ``maximal_naive`` scans all windows in O(N^2);
``maximal_fast`` computes the same cell maxima by divide and conquer over
prefix-sum points, maximizing slopes against convex hulls, in roughly
O(N log^2 N).  The true supremum over arbitrary subintervals exceeds the
grid-aligned one by at most a factor 2, so all downstream constants are
stated for the discrete operator.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveWeight
from .grid import GridFunction, weighted_lp_norm

_BASE_BLOCK = 128


@dataclass(frozen=True)
class WindowFamily:
    """Window family: every contiguous cell range, or only dyadic ranges."""

    mode: str

    def __post_init__(self):
        if self.mode not in ("all", "dyadic"):
            raise ValueError(f"unknown window family {self.mode!r}")

    def ranges(self, n):
        """Iterate (l, r) cell ranges of this family for an n-cell grid."""
        if self.mode == "all":
            for l in range(n):
                for r in range(l, n):
                    yield l, r
        else:
            level = 1
            while level <= n:
                for m in range(n // level):
                    yield m * level, (m + 1) * level - 1
                level *= 2


ALL = WindowFamily("all")
DYADIC = WindowFamily("dyadic")


def as_family(family):
    if isinstance(family, WindowFamily):
        return family
    return WindowFamily(str(family))


def maximal_naive(f, family=ALL):
    """All-window (or dyadic-window) maxima of averages of |f|, per cell."""
    family = as_family(family)
    a = np.abs(f.values)
    n = len(a)
    P = np.concatenate(([0.0], np.cumsum(a)))
    out = a.copy()
    if family.mode == "dyadic":
        level = 1
        while level <= n:
            m = n // level
            avg = (P[level::level] - P[:-level:level])[:m] / float(level)
            np.maximum(out, np.repeat(avg, level), out=out)
            level *= 2
        return f.with_values(out)
    for l in range(n):
        sums = P[l + 1:] - P[l]
        avgs = sums / np.arange(1.0, n - l + 1.0)
        suffix = np.maximum.accumulate(avgs[::-1])[::-1]
        np.maximum(out[l:], suffix, out=out[l:])
    return f.with_values(out)


def maximal_fast(f):
    """Same cell maxima as maximal_naive(f, ALL), computed sub-quadratically."""
    a = np.abs(f.values)
    n = len(a)
    P = np.concatenate(([0.0], np.cumsum(a)))
    out = a.copy()
    _solve(P, out, 0, n)
    return f.with_values(out)


def _solve(P, out, lo, hi):
    n = hi - lo
    if n <= _BASE_BLOCK:
        for l in range(lo, hi):
            sums = P[l + 1:hi + 1] - P[l]
            avgs = sums / np.arange(1.0, hi - l + 1.0)
            suffix = np.maximum.accumulate(avgs[::-1])[::-1]
            np.maximum(out[l:hi], suffix, out=out[l:hi])
        return
    mid = (lo + hi) // 2
    _solve(P, out, lo, mid)
    _solve(P, out, mid, hi)

    # crossing windows [l, r] with l < mid <= r; averages are slopes from
    # (l, P[l]) to (r + 1, P[r + 1])
    qx = np.arange(lo, mid, dtype=float)
    qy = P[lo:mid]
    px = np.arange(mid + 1, hi + 1, dtype=float)
    py = P[mid + 1:hi + 1]
    g = _max_slopes(qx, qy, px, py)
    np.maximum(out[lo:mid], np.maximum.accumulate(g), out=out[lo:mid])

    # mirrored: queries are right endpoints, candidates the left ones
    g2 = _max_slopes(-px[::-1], -py[::-1], -qx[::-1], -qy[::-1])[::-1]
    suffix = np.maximum.accumulate(g2[::-1])[::-1]
    np.maximum(out[mid:hi], suffix, out=out[mid:hi])


def _upper_hull(px, py):
    hx, hy = [], []
    for x, y in zip(px, py):
        while len(hx) >= 2 and (
            (hx[-1] - hx[-2]) * (y - hy[-2]) - (hy[-1] - hy[-2]) * (x - hx[-2])
        ) >= 0.0:
            hx.pop()
            hy.pop()
        hx.append(x)
        hy.append(y)
    return np.asarray(hx), np.asarray(hy)


def _max_slopes(qx, qy, px, py):
    """max over hull points of (py - qy)/(px - qx), per query left of px.

    Slopes along the strictly convex upper hull are unimodal in the vertex
    index with at most one flat adjacent pair at the peak, so a ternary
    search with an equality branch is exact.
    """
    hx, hy = _upper_hull(px, py)
    m = len(hx)
    nq = len(qx)
    if m == 1:
        return (hy[0] - qy) / (hx[0] - qx)
    lo = np.zeros(nq, dtype=np.int64)
    hi = np.full(nq, m - 1, dtype=np.int64)
    while True:
        span = hi - lo
        if not np.any(span > 2):
            break
        third = np.maximum(span // 3, 1)
        m1 = lo + third
        m2 = hi - third
        s1 = (hy[m1] - qy) / (hx[m1] - qx)
        s2 = (hy[m2] - qy) / (hx[m2] - qx)
        up = s1 < s2
        eq = s1 == s2
        lo = np.where(up, m1 + 1, np.where(eq, m1, lo))
        hi = np.where(up, hi, np.where(eq, m2, m2 - 1))
    best = np.full(nq, -np.inf)
    for off in range(3):
        idx = np.minimum(lo + off, hi)
        np.maximum(best, (hy[idx] - qy) / (hx[idx] - qx), out=best)
    return best


def maximal_iterate(f, k):
    """k-fold composition of maximal_fast; monotone nondecreasing in k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = f
    for _ in range(int(k)):
        g = maximal_fast(g)
    return g


def shifted_dyadic_maximal(f):
    """Maxima over the union of three shifted dyadic grids at every scale.

    Grids are shifted by 0, floor(L/3) and floor(2L/3) cells at scale L and
    truncated at the domain boundary, so every cell range of length ell is
    contained in a family window at most 3x longer; hence the all-window
    maximal function is at most 3x this one.
    """
    a = np.abs(f.values)
    n = len(a)
    P = np.concatenate(([0.0], np.cumsum(a)))
    out = a.copy()
    level = 2
    while level <= n:
        for shift in (0, level // 3, (2 * level) // 3):
            for start in range(shift - level, n, level):
                s0, s1 = max(start, 0), min(start + level, n)
                if s1 > s0:
                    avg = (P[s1] - P[s0]) / (s1 - s0)
                    seg = out[s0:s1]
                    np.maximum(seg, avg, out=seg)
        level *= 2
    return f.with_values(out)


# ----------------------------------------------------------------------
# empirical operator norms

@dataclass(frozen=True)
class NormEstimate:
    """Empirical lower bound on ||M|| with the safety-factor-2 bound B.

    Not a proof: lower_bound is the largest observed ratio ||Mg||/||g||
    over the recorded probes, and every downstream contract is stated
    relative to B = 2 * lower_bound.
    """

    p: float
    weight_id: str
    lower_bound: float
    B: float
    trials: int
    seed: int

    def to_json(self):
        return {
            "p": self.p,
            "weight_id": self.weight_id,
            "lower_bound": self.lower_bound,
            "B": self.B,
            "trials": self.trials,
            "seed": self.seed,
        }


def grid_id(f):
    """Stable short id of a grid function (domain, depth, value bytes)."""
    hsh = hashlib.sha1()
    hsh.update(repr((f.domain.left, f.domain.right, f.depth)).encode())
    hsh.update(np.ascontiguousarray(f.values).tobytes())
    return hsh.hexdigest()[:12]


def _probe_functions(template, rng, trials, extra=()):
    n = template.n_cells
    yield template.with_values(np.ones(n))
    for g in extra:
        yield g
    spikes = {0, n - 1, n // 2}
    for i in sorted(spikes):
        v = np.zeros(n)
        v[i] = 1.0
        yield template.with_values(v)
    for _ in range(trials):
        # log-uniform cell values over [1e-3, 1e3]
        v = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), size=n))
        yield template.with_values(v)


def norm_ratio_lower_bound(norm_fn, template, trials, seed, extra_probes=()):
    rng = np.random.default_rng(seed)
    best = 0.0
    for g in _probe_functions(template, rng, trials, extra_probes):
        denom = norm_fn(g)
        if denom == 0 or not math.isfinite(denom):
            continue
        best = max(best, norm_fn(maximal_fast(g)) / denom)
    return best


def op_norm_estimate(w, p, trials=16, seed=0):
    """Empirical ||M||_{B(L^p_w)} lower bound and bound B = 2x, seeded.

    Probes: the constant 1, the dual weight w^(1-p'), spikes, and
    ``trials`` log-uniform random fields.
    """
    wg = w.grid if hasattr(w, "grid") else w
    if np.any(wg.values <= 0):
        raise NonPositiveWeight("op_norm_estimate requires w > 0")
    if p <= 1:
        raise ValueError("p must exceed 1")
    pprime = p / (p - 1.0)
    sigma = wg.with_values(wg.values ** (1.0 - pprime))
    lower = norm_ratio_lower_bound(
        lambda g: weighted_lp_norm(g, wg, p), wg, trials, seed,
        extra_probes=(sigma,),
    )
    lower = max(lower, 1.0)
    return NormEstimate(
        p=float(p), weight_id=grid_id(wg), lower_bound=lower,
        B=2.0 * lower, trials=int(trials), seed=int(seed),
    )
