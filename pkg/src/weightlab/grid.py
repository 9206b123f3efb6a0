"""Piecewise-constant functions on dyadic partitions and their functionals.

Cell values are cell AVERAGES of the represented function, never point
samples, so every integral functional of a sampled function agrees with
the closed-form integral to quadrature tolerance, and refining a grid by
splitting cells leaves every functional exactly unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closedform as cf
from .errors import DepthMismatch, NonIntegrableCell


@dataclass(frozen=True)
class Interval:
    left: float
    right: float

    def __post_init__(self):
        if not self.left < self.right:
            raise ValueError(f"empty interval [{self.left}, {self.right}]")

    @property
    def width(self):
        return self.right - self.left

    def to_json(self):
        return {"left": self.left, "right": self.right}


@dataclass(frozen=True)
class GridFunction:
    """2^depth equal cells on ``domain``; ``values[i]`` is the cell average.

    ``prefix[i]`` is the running integral over the first i cells, so
    prefix[i+1] - prefix[i] == values[i] * cellwidth.
    """

    domain: Interval
    depth: int
    values: np.ndarray
    prefix: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or len(v) != 2 ** self.depth:
            raise ValueError("values must have length 2^depth")
        if not np.all(np.isfinite(v)):
            raise ValueError("cell values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.prefix is None:
            p = np.concatenate(([0.0], np.cumsum(v * self.cellwidth)))
            p.setflags(write=False)
            object.__setattr__(self, "prefix", p)

    @property
    def n_cells(self):
        return 2 ** self.depth

    @property
    def cellwidth(self):
        return self.domain.width / 2 ** self.depth

    def edges(self):
        n = self.n_cells
        return self.domain.left + self.domain.width * np.arange(n + 1) / n

    def centers(self):
        e = self.edges()
        return 0.5 * (e[:-1] + e[1:])

    def integral(self):
        return float(self.prefix[-1])

    def with_values(self, values):
        return GridFunction(self.domain, self.depth, values)

    def cell_index(self, x):
        """Index of the cell containing x (right endpoint maps to the last)."""
        i = int((x - self.domain.left) / self.cellwidth)
        return min(max(i, 0), self.n_cells - 1)


def constant_grid(c, domain, depth):
    return GridFunction(domain, depth, np.full(2 ** depth, float(c)))


def refine(f, times=1):
    """Split each cell in two, duplicating values.

    Exact for every integral functional; used for structural refinement
    of raw grid data (resampling a closed-form source reveals new detail,
    splitting does not).
    """
    v = f.values
    for _ in range(int(times)):
        v = np.repeat(v, 2)
    return GridFunction(f.domain, f.depth + int(times), v)


# ----------------------------------------------------------------------
# sampling closed-form functions

def sample(func, domain, depth, rel_tol=1e-10):
    """Exact cell averages of a closed-form function on a dyadic grid.

    Uses closed-form antiderivatives where the atom admits one and
    adaptive quadrature elsewhere.  Raises NonIntegrableCell if any cell
    average diverges.
    """
    n = 2 ** depth
    h = domain.width / n
    edges = domain.left + domain.width * np.arange(n + 1) / n
    sums = np.zeros(n)

    for a, b, payload in cf.to_pieces(func, domain.left, domain.right):
        if b <= a:
            continue
        i0 = min(int((a - domain.left) / h), n - 1)
        i1 = min(int((b - domain.left) / h), n - 1)
        if edges[i1] >= b and i1 > i0:
            i1 -= 1
        cells = np.arange(i0, i1 + 1)
        cuts = np.concatenate(([a], edges[i0 + 1:i1 + 1], [b]))
        if isinstance(payload, cf.Const):
            sums[cells] += payload.c * np.diff(cuts)
            continue
        slices = None
        if isinstance(payload, cf.PowerLog):
            slices = _powerlog_slices(payload, cuts)
        if slices is None:
            slices = np.array([
                cf.integrate_piece(payload, x0, x1, rel_tol)
                for x0, x1 in zip(cuts[:-1], cuts[1:])
            ])
        bad = ~np.isfinite(slices)
        if bad.any():
            j = int(cells[np.argmax(bad)])
            point = _nearest_singularity(payload, edges[j], edges[j + 1])
            raise NonIntegrableCell(j, edges[j], edges[j + 1], point)
        sums[cells] += slices

    return GridFunction(domain, depth, sums / h)


def _powerlog_slices(p, cuts):
    pref = cf.side_prefix(p, cuts, cuts[0])
    if pref is None:
        return None
    d = np.diff(pref)
    bad = ~(np.isfinite(pref[:-1]) & np.isfinite(pref[1:]) & np.isfinite(d))
    if bad.any():
        d = d.copy()
        d[bad] = np.inf
    return d


def _nearest_singularity(payload, lo, hi):
    pts = cf.singular_points(payload, lo - 1.0, hi + 1.0)
    if not pts:
        return lo
    mid = 0.5 * (lo + hi)
    return min(pts, key=lambda s: abs(s - mid))


# ----------------------------------------------------------------------
# functionals

def lp_norm(f, p):
    """(integral |f|^p)^(1/p); p = inf gives the max cell value."""
    if p == math.inf:
        return float(np.max(np.abs(f.values)))
    if p <= 0:
        raise ValueError("p must be positive")
    with np.errstate(over="ignore"):
        s = float(np.sum(np.abs(f.values) ** p)) * f.cellwidth
    if not math.isfinite(s):
        return math.inf
    return s ** (1.0 / p)


def integral(f):
    return f.integral()


def weighted_lp_norm(f, w, p):
    """(integral |f|^p w)^(1/p) for grids sharing domain and depth."""
    if p <= 0 or p == math.inf:
        raise ValueError("p must be in (0, inf)")
    wg = w.grid if hasattr(w, "grid") else w
    check_same_grid(f, wg)
    with np.errstate(over="ignore"):
        s = float(np.sum(np.abs(f.values) ** p * wg.values)) * f.cellwidth
    if not math.isfinite(s):
        return math.inf
    return s ** (1.0 / p)


def weak_lp_quasinorm(f, p, level_rtol=1e-12):
    """sup_t t |{|f| > t}|^(1/p), thresholds scanned at realized values.

    Superlevel sets are taken strictly above each realized value, plus the
    limiting threshold just below the smallest positive value (so that a
    constant c on a unit domain scores c).  Values within ``level_rtol``
    relative of each other belong to one level set; otherwise float noise
    splits symmetric cells into spurious levels.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    v = np.abs(f.values)
    vd = np.sort(v[v > 0])[::-1]
    if len(vd) == 0:
        return 0.0
    distinct = np.nonzero(vd[:-1] - vd[1:] > level_rtol * vd[:-1])[0]
    ends = np.append(distinct, len(vd) - 1)        # last index of each level
    starts = np.concatenate(([0], distinct + 1))   # first (largest) of each
    levels = vd[starts]
    meas = (ends + 1.0) * f.cellwidth              # |{|f| >= level_k}|
    best = float(vd[-1] * meas[-1] ** (1.0 / p))
    if len(levels) > 1:
        cand = levels[1:] * meas[:-1] ** (1.0 / p)
        best = max(best, float(np.max(cand)))
    return best


def check_same_grid(f, g):
    if f.depth != g.depth or f.domain != g.domain:
        raise DepthMismatch(
            f"grids differ: depth {f.depth} on {f.domain} vs "
            f"depth {g.depth} on {g.domain}"
        )


# ----------------------------------------------------------------------
# trend reports

@dataclass(frozen=True)
class TrendConfig:
    """Decision thresholds for finite/infinite trend verdicts.

    Defaults implement the documented rule: plateau iff the last three
    values differ pairwise by < 5% relative; divergent iff the last-3
    log-log slope exceeds 0.1 and the last value exceeds 10x the first.
    Log-speed divergences (A_p constants of boundary power weights, for
    example) need a smaller growth factor to become visible at feasible
    scales; override growth_min for those suites and record the config.
    """

    plateau_rtol: float = 0.05
    slope_min: float = 0.1
    growth_min: float = 10.0


DEFAULT_TREND_CONFIG = TrendConfig()


@dataclass(frozen=True)
class TrendReport:
    params: tuple
    values: tuple
    verdict: str
    slope: float
    config: TrendConfig = DEFAULT_TREND_CONFIG

    def to_json(self):
        return {
            "params": [_json_real(p) for p in self.params],
            "values": [_json_real(v) for v in self.values],
            "verdict": self.verdict,
            "slope": _json_real(self.slope),
            "config": {
                "plateau_rtol": self.config.plateau_rtol,
                "slope_min": self.config.slope_min,
                "growth_min": self.config.growth_min,
            },
        }


def _json_real(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def classify_trend(params, values, config=DEFAULT_TREND_CONFIG):
    params = [float(p) for p in params]
    values = [float(v) for v in values]
    last3 = values[-3:]
    slope = _loglog_slope(params[-3:], last3)
    if any(not math.isfinite(v) for v in last3):
        return TrendReport(tuple(params), tuple(values), "divergent", math.inf, config)
    if len(values) >= 3 and _pairwise_close(last3, config.plateau_rtol):
        return TrendReport(tuple(params), tuple(values), "plateau", slope, config)
    first, last = values[0], values[-1]
    if slope > config.slope_min and last > config.growth_min * first:
        return TrendReport(tuple(params), tuple(values), "divergent", slope, config)
    return TrendReport(tuple(params), tuple(values), "inconclusive", slope, config)


def _pairwise_close(vals, rtol):
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            a, b = vals[i], vals[j]
            if abs(a - b) > rtol * max(abs(a), abs(b)):
                return False
    return True


def _loglog_slope(params, values):
    if any(not (math.isfinite(v) and v > 0) for v in values):
        return math.inf if any(not math.isfinite(v) for v in values) else 0.0
    if any(not (math.isfinite(p) and p > 0) for p in params):
        return math.inf
    lx = np.log(np.asarray(params))
    ly = np.log(np.asarray(values))
    if np.ptp(lx) == 0:
        return 0.0
    return float(np.polyfit(lx, ly, 1)[0])


def divergence_probe(family, functional, params, config=DEFAULT_TREND_CONFIG):
    """Evaluate functional(family(p)) along a ladder and classify the trend.

    ``params`` must be strictly increasing with at least 4 entries.
    Overflow and non-integrable samples record +inf, which forces a
    divergent verdict.
    """
    params = list(params)
    if len(params) < 4:
        raise ValueError("need at least 4 ladder points")
    if any(b <= a for a, b in zip(params[:-1], params[1:])):
        raise ValueError("ladder must be strictly increasing")
    values = []
    for p in params:
        try:
            values.append(float(functional(family(p))))
        except (NonIntegrableCell, OverflowError):
            values.append(math.inf)
    return classify_trend(params, values, config)


# ----------------------------------------------------------------------
# CSV round trip

def write_csv(f, path):
    with open(path, "w") as fh:
        fh.write(f"# domain={f.domain.left!r},{f.domain.right!r} depth={f.depth}\n")
        e = f.edges()
        for i, v in enumerate(f.values):
            fh.write(f"{i},{e[i]!r},{e[i + 1]!r},{v!r}\n")


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# domain="):
            raise ValueError("missing grid CSV header")
        spec, depth_part = header[len("# domain="):].split(" depth=")
        left, right = (float(t) for t in spec.split(","))
        depth = int(depth_part)
        values = np.empty(2 ** depth)
        for line in fh:
            line = line.strip()
            if not line:
                continue
            idx, _, _, val = line.split(",")
            values[int(idx)] = float(val)
    return GridFunction(Interval(left, right), depth, values)
