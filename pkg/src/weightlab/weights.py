"""A_p constants over window families and the weight algebra.

The A_p product of a window [l, r] is (avg w) * (avg w^(1-p'))^(p-1) for
p > 1 and (avg w) / (min over cells) at p = 1; the constant is the max
over the window family.  Averages come from shared prefix-sum arrays so
re-evaluating the worst window reproduces the reported constant exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DepthMismatch, NoExponentFound, NonPositiveWeight
from .grid import (DEFAULT_TREND_CONFIG, GridFunction, check_same_grid,
                   divergence_probe, refine)
from .maximal import ALL, WindowFamily, as_family

RH_LADDER = tuple(1.0 + 16.0 * 0.5 ** j for j in range(18))


@dataclass(frozen=True)
class Weight:
    """A grid function that is strictly positive on every cell."""

    grid: GridFunction

    def __post_init__(self):
        if np.any(self.grid.values <= 0.0):
            raise NonPositiveWeight("weights must be positive on every cell")

    @property
    def values(self):
        return self.grid.values

    @property
    def domain(self):
        return self.grid.domain

    @property
    def depth(self):
        return self.grid.depth

    def with_values(self, values):
        return Weight(self.grid.with_values(values))

    def refined(self, times=1):
        return Weight(refine(self.grid, times))


def as_weight(w):
    if isinstance(w, Weight):
        return w
    return Weight(w)


@dataclass(frozen=True)
class ApReport:
    p: float
    constant: float
    worst_window: tuple
    family: str
    per_window: str

    def to_json(self):
        return {
            "p": self.p,
            "constant": self.constant,
            "worst_window": list(self.worst_window),
            "family": self.family,
            "per_window": self.per_window,
        }


def _prefixes(values, p):
    Pw = np.concatenate(([0.0], np.cumsum(values)))
    if p == 1.0:
        return Pw, None
    pprime = p / (p - 1.0)
    with np.errstate(over="ignore"):
        sigma = values ** (1.0 - pprime)
    Ps = np.concatenate(([0.0], np.cumsum(sigma)))
    return Pw, Ps


def ap_constant(w, p, family=ALL):
    """[w]_{A_p} over the window family, with the witnessing worst window."""
    w = as_weight(w)
    family = as_family(family)
    if p < 1.0:
        raise ValueError("p must be >= 1")
    values = w.values
    n = len(values)
    Pw, Ps = _prefixes(values, p)
    best = -math.inf
    best_win = (0, 0)
    if family.mode == "dyadic":
        level = 1
        while level <= n:
            for m in range(n // level):
                l, r = m * level, (m + 1) * level - 1
                v = _window_value(values, Pw, Ps, p, l, r)
                if v > best:
                    best, best_win = v, (l, r)
            level *= 2
        return ApReport(float(p), float(best), best_win, family.mode,
                        _formula(p))
    for l in range(n):
        lens = np.arange(1.0, n - l + 1.0)
        avg_w = (Pw[l + 1:] - Pw[l]) / lens
        if p == 1.0:
            row = avg_w / np.minimum.accumulate(values[l:])
        else:
            avg_s = (Ps[l + 1:] - Ps[l]) / lens
            with np.errstate(over="ignore"):
                row = avg_w * avg_s ** (p - 1.0)
        i = int(np.argmax(row))
        if row[i] > best:
            best, best_win = float(row[i]), (l, l + i)
    return ApReport(float(p), float(best), best_win, family.mode, _formula(p))


def _formula(p):
    if p == 1.0:
        return "avg(w)/min(w)"
    return "avg(w)*avg(w**(1-p'))**(p-1)"


def _window_value(values, Pw, Ps, p, l, r):
    lens = float(r - l + 1)
    avg_w = (Pw[r + 1] - Pw[l]) / lens
    if p == 1.0:
        return avg_w / np.min(values[l:r + 1])
    avg_s = (Ps[r + 1] - Ps[l]) / lens
    with np.errstate(over="ignore"):
        return avg_w * avg_s ** (p - 1.0)


def evaluate_ap_window(w, p, l, r):
    """The A_p product of one window, from the same prefix arrays the scan
    uses, so a reported worst window reproduces its constant exactly."""
    w = as_weight(w)
    Pw, Ps = _prefixes(w.values, p)
    if p == 1.0:
        lens = np.arange(1.0, len(w.values) - l + 1.0)
        avg_w = (Pw[l + 1:] - Pw[l]) / lens
        row = avg_w / np.minimum.accumulate(w.values[l:])
        return float(row[r - l])
    lens = np.arange(1.0, len(w.values) - l + 1.0)
    avg_w = (Pw[l + 1:] - Pw[l]) / lens
    avg_s = (Ps[l + 1:] - Ps[l]) / lens
    with np.errstate(over="ignore"):
        row = avg_w * avg_s ** (p - 1.0)
    return float(row[r - l])


# ----------------------------------------------------------------------
# weight algebra

def dual_weight(w, p):
    """sigma = w^(1-p'), the dual weight of w in A_p, cell-wise."""
    w = as_weight(w)
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    pprime = p / (p - 1.0)
    return w.with_values(w.values ** (1.0 - pprime))


def power_weight(w, s):
    if s <= 0:
        raise ValueError("s must be positive")
    w = as_weight(w)
    return w.with_values(w.values ** float(s))


def factor_product(u, v, p):
    """u * v^(1-p): sends an A_1 pair to an A_p weight."""
    u, v = as_weight(u), as_weight(v)
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    check_same_grid(u.grid, v.grid)
    return u.with_values(u.values * v.values ** (1.0 - p))


def combine_max(u, v):
    u, v = as_weight(u), as_weight(v)
    check_same_grid(u.grid, v.grid)
    return u.with_values(np.maximum(u.values, v.values))


def combine_min(u, v):
    u, v = as_weight(u), as_weight(v)
    check_same_grid(u.grid, v.grid)
    return u.with_values(np.minimum(u.values, v.values))


def truncate(w, lam):
    """max(w, lam) cell-wise, for lam > 0."""
    if lam <= 0:
        raise ValueError("truncation level must be positive")
    w = as_weight(w)
    return w.with_values(np.maximum(w.values, float(lam)))


# ----------------------------------------------------------------------
# reverse Holder

@dataclass(frozen=True)
class RHReport:
    s: float
    rh_constant: float
    satisfied: bool
    worst_window: tuple
    search_trace: tuple

    def to_json(self):
        return {
            "s": self.s,
            "rh_constant": self.rh_constant,
            "satisfied": self.satisfied,
            "worst_window": list(self.worst_window),
            "search_trace": [[s, r] for s, r in self.search_trace],
        }


def rh_max_ratio(w, s, family=ALL):
    """max over windows of (avg w^s)^(1/s) / (avg w), with its window."""
    w = as_weight(w)
    family = as_family(family)
    values = w.values
    n = len(values)
    with np.errstate(over="ignore"):
        ws = values ** float(s)
    if np.any(~np.isfinite(ws)):
        return math.inf, (0, n - 1)
    Pw = np.concatenate(([0.0], np.cumsum(values)))
    Ps = np.concatenate(([0.0], np.cumsum(ws)))
    best = -math.inf
    best_win = (0, 0)
    if family.mode == "dyadic":
        level = 1
        while level <= n:
            for m in range(n // level):
                l, r = m * level, (m + 1) * level - 1
                L = float(r - l + 1)
                v = ((Ps[r + 1] - Ps[l]) / L) / ((Pw[r + 1] - Pw[l]) / L) ** s
                if v > best:
                    best, best_win = v, (l, r)
            level *= 2
    else:
        for l in range(n):
            lens = np.arange(1.0, n - l + 1.0)
            avg_ws = (Ps[l + 1:] - Ps[l]) / lens
            avg_w = (Pw[l + 1:] - Pw[l]) / lens
            with np.errstate(over="ignore", divide="ignore"):
                row = avg_ws / avg_w ** s
            i = int(np.argmax(row))
            if row[i] > best:
                best, best_win = float(row[i]), (l, l + i)
    if not math.isfinite(best):
        return math.inf, best_win
    return best ** (1.0 / s), best_win


def reverse_holder_exponent(w, family=ALL, rh_constant=2.0):
    """Largest ladder exponent s with (avg w^s)^(1/s) <= 2 avg w on every
    window, found by bisection on the geometric ladder s = 1 + 16/2^j.

    Monotone failure (if s fails, every larger s fails) is exploited for
    the bisection and re-verified on the returned exponent and s * 1.01.
    """
    w = as_weight(w)
    family = as_family(family)
    trace = []

    def satisfied(s):
        ratio, win = rh_max_ratio(w, s, family)
        trace.append((s, ratio))
        return ratio <= rh_constant, win

    ok, win = satisfied(RH_LADDER[0])
    if ok:
        s = RH_LADDER[0]
    else:
        lo, hi = 0, len(RH_LADDER) - 1
        ok_bottom, win = satisfied(RH_LADDER[hi])
        if not ok_bottom:
            raise NoExponentFound(
                f"even s = {RH_LADDER[-1]:.6f} fails the reverse Holder "
                f"inequality at constant {rh_constant}")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            ok_mid, win_mid = satisfied(RH_LADDER[mid])
            if ok_mid:
                hi, win = mid, win_mid
            else:
                lo = mid
        s = RH_LADDER[hi]
    ok_again, win = satisfied(s)
    if not ok_again:
        raise NoExponentFound(
            f"reverse Holder check at s = {s} is not reproducible; "
            "the window scan is numerically degenerate")
    satisfied(s * 1.01)   # recorded in the trace: monotonicity witness
    return RHReport(float(s), float(rh_constant), True, win, tuple(trace))


def self_improve_exponent(w, p, plateau_rtol=0.05, bound_factor=4.0):
    """Largest ladder s with w^s still A_p-stable under one refinement step
    and [w^s]_{A_p} <= bound_factor * [w]_{A_p}^s (heuristic acceptance).

    Refinement here is cell splitting of the given grid data; resampling a
    generator at higher depth is the caller's business.
    """
    w = as_weight(w)
    base = ap_constant(w, p).constant
    for s in RH_LADDER:
        with np.errstate(over="ignore"):
            vs = w.values ** s
        if np.any(~np.isfinite(vs)):
            continue
        ws = w.with_values(vs)
        c0 = ap_constant(ws, p).constant
        if not math.isfinite(c0) or c0 > bound_factor * base ** s:
            continue
        c1 = ap_constant(ws.refined(), p).constant
        if abs(c1 - c0) <= plateau_rtol * max(c0, c1):
            return float(s)
    raise NoExponentFound("no ladder exponent passes the self-improvement "
                          "acceptance bound; result is inconclusive")


# ----------------------------------------------------------------------
# plateau certification

def ap_trend(source, p, depths, family=ALL, config=DEFAULT_TREND_CONFIG):
    """Trend of [source(depth)]_{A_p} along a depth ladder.

    ``source`` maps a depth to a Weight; sampling failures and overflowed
    constants record +inf and force a divergent verdict.
    """
    return divergence_probe(
        source, lambda wt: ap_constant(wt, p, family).constant, depths, config)


def certify_ap(source, p, depths, family=ALL, config=DEFAULT_TREND_CONFIG):
    """Map an A_p trend onto the verdict taxonomy."""
    trend = ap_trend(source, p, depths, family, config)
    verdict = {"plateau": "certified-yes",
               "divergent": "certified-no-at-scale"}.get(trend.verdict,
                                                         "inconclusive")
    return verdict, trend
