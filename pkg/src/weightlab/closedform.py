"""Closed-form power-log function algebra.

Atoms are c*|x - x0|^alpha * |log|x - x0||^beta with c > 0, combined by
pointwise max/min, products, positive powers, restriction to an interval
and truncation (max with a constant).  Every function built here is
nonnegative, and integrals over intervals are computed exactly from
antiderivatives wherever one exists (beta = 0, or alpha = -1), falling
back to adaptive quadrature with geometric subdivision toward singular
endpoints otherwise.

Integrability at a singular point is decided symbolically from the local
exponent pair: |u|^a |log u|^b is integrable at u = 0 iff a > -1, or
a = -1 and b < -1; the |log u|^b factor is integrable at u = 1 iff b > -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

_QUAD_REL_TOL = 1e-10
_RING_LIMIT = 2000
_CROSSING_PROBES = 257


class Expr:
    """Base node of the expression tree."""

    def evaluate(self, xs):
        """Pointwise values at ``xs`` (singularities map to their limits)."""
        raise NotImplementedError

    def __call__(self, xs):
        return self.evaluate(np.asarray(xs, dtype=float))


@dataclass(frozen=True)
class Const(Expr):
    c: float

    def evaluate(self, xs):
        return np.full_like(np.asarray(xs, dtype=float), float(self.c))


@dataclass(frozen=True)
class PowerLog(Expr):
    """c * |x - x0|^alpha * |log|x - x0||^beta."""

    c: float
    x0: float
    alpha: float
    beta: float = 0.0

    def evaluate(self, xs):
        xs = np.asarray(xs, dtype=float)
        u = np.abs(xs - self.x0)
        out = np.empty_like(u)
        at0 = u == 0.0
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            pos = ~at0
            val = np.power(u[pos], self.alpha)
            if self.beta != 0.0:
                lg = np.abs(np.log(u[pos]))
                at1 = lg == 0.0
                lgb = np.empty_like(lg)
                lgb[~at1] = np.power(lg[~at1], self.beta)
                lgb[at1] = np.inf if self.beta < 0 else 0.0
                val = val * lgb
            out[pos] = self.c * val
        out[at0] = _limit_at_zero(self.c, self.alpha, self.beta)
        return out


@dataclass(frozen=True)
class Max(Expr):
    a: Expr
    b: Expr

    def evaluate(self, xs):
        return np.maximum(self.a.evaluate(xs), self.b.evaluate(xs))


@dataclass(frozen=True)
class Min(Expr):
    a: Expr
    b: Expr

    def evaluate(self, xs):
        return np.minimum(self.a.evaluate(xs), self.b.evaluate(xs))


@dataclass(frozen=True)
class Product(Expr):
    a: Expr
    b: Expr

    def evaluate(self, xs):
        with np.errstate(invalid="ignore"):
            out = self.a.evaluate(xs) * self.b.evaluate(xs)
        return np.nan_to_num(out, nan=np.inf, posinf=np.inf)


@dataclass(frozen=True)
class Restrict(Expr):
    """f * indicator([lo, hi])."""

    f: Expr
    lo: float
    hi: float

    def evaluate(self, xs):
        xs = np.asarray(xs, dtype=float)
        inside = (xs >= self.lo) & (xs <= self.hi)
        out = np.zeros_like(xs)
        if inside.any():
            out[inside] = self.f.evaluate(xs[inside])
        return out


def _limit_at_zero(c, alpha, beta):
    if alpha < 0:
        return math.inf
    if alpha > 0:
        return 0.0
    if beta > 0:
        return math.inf
    if beta < 0:
        return 0.0
    return c


# ----------------------------------------------------------------------
# constructors

def constant(c):
    return Const(float(c))


def powerlog(c=1.0, alpha=0.0, beta=0.0, x0=0.0):
    if c <= 0:
        raise ValueError("powerlog coefficient must be positive")
    return PowerLog(float(c), float(x0), float(alpha), float(beta))


def maximum(*fs):
    out = fs[0]
    for f in fs[1:]:
        out = Max(out, f)
    return out


def minimum(*fs):
    out = fs[0]
    for f in fs[1:]:
        out = Min(out, f)
    return out


def product(*fs):
    out = fs[0]
    for f in fs[1:]:
        out = _product2(out, f)
    return out


def _product2(a, b):
    # merge atoms sharing a singular point so powers/products stay closed form
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.c * b.c)
    if isinstance(a, Const) and isinstance(b, PowerLog):
        return PowerLog(a.c * b.c, b.x0, b.alpha, b.beta)
    if isinstance(b, Const) and isinstance(a, PowerLog):
        return PowerLog(a.c * b.c, a.x0, a.alpha, a.beta)
    if isinstance(a, PowerLog) and isinstance(b, PowerLog) and a.x0 == b.x0:
        return PowerLog(a.c * b.c, a.x0, a.alpha + b.alpha, a.beta + b.beta)
    return Product(a, b)


def power(f, s):
    """f^s for s > 0, pushed through the tree structurally."""
    s = float(s)
    if s <= 0:
        raise ValueError("power exponent must be positive")
    if isinstance(f, Const):
        return Const(f.c ** s)
    if isinstance(f, PowerLog):
        return PowerLog(f.c ** s, f.x0, f.alpha * s, f.beta * s)
    if isinstance(f, Max):
        return Max(power(f.a, s), power(f.b, s))
    if isinstance(f, Min):
        return Min(power(f.a, s), power(f.b, s))
    if isinstance(f, Product):
        return Product(power(f.a, s), power(f.b, s))
    if isinstance(f, Restrict):
        return Restrict(power(f.f, s), f.lo, f.hi)
    raise TypeError(f"cannot raise {type(f).__name__} to a power")


def restrict(f, lo, hi):
    return Restrict(f, float(lo), float(hi))


def truncate(f, lam):
    """Pointwise max(f, lam) for lam > 0."""
    if lam <= 0:
        raise ValueError("truncation level must be positive")
    return Max(f, Const(float(lam)))


def describe(f):
    if isinstance(f, Const):
        return f"{f.c:g}"
    if isinstance(f, PowerLog):
        base = f"|x-{f.x0:g}|" if f.x0 else "|x|"
        s = ("" if f.c == 1 else f"{f.c:g}*") + f"{base}^{f.alpha:g}"
        if f.beta:
            s += f"*|log{base}|^{f.beta:g}"
        return s
    if isinstance(f, Max):
        return f"max({describe(f.a)},{describe(f.b)})"
    if isinstance(f, Min):
        return f"min({describe(f.a)},{describe(f.b)})"
    if isinstance(f, Product):
        return f"({describe(f.a)})*({describe(f.b)})"
    if isinstance(f, Restrict):
        return f"({describe(f.f)})*chi[{f.lo:g},{f.hi:g}]"
    return type(f).__name__


# ----------------------------------------------------------------------
# singular structure

def singular_points(f, lo, hi):
    """Points in [lo, hi] where f may blow up, vanish abruptly or kink."""
    pts = set()

    def walk(node):
        if isinstance(node, PowerLog):
            cand = [node.x0]
            if node.beta != 0.0:
                cand += [node.x0 - 1.0, node.x0 + 1.0]
            for p in cand:
                if lo <= p <= hi:
                    pts.add(p)
        elif isinstance(node, Restrict):
            for p in (node.lo, node.hi):
                if lo <= p <= hi:
                    pts.add(p)
            walk(node.f)
        elif isinstance(node, (Max, Min, Product)):
            walk(node.a)
            walk(node.b)

    walk(f)
    return sorted(pts)


def envelope(f, s, side):
    """Local growth (a, b, c) with f(x) ~ c|x-s|^a |log|x-s||^b as x -> s.

    ``side`` is +1 (approach from above) or -1 (from below).  c = 0 means
    the function vanishes identically on that side near s.
    """
    if isinstance(f, Const):
        return (0.0, 0.0, f.c)
    if isinstance(f, PowerLog):
        if s == f.x0:
            return (f.alpha, f.beta, f.c)
        d = abs(s - f.x0)
        if f.beta != 0.0 and d == 1.0:
            # |log u|^beta ~ |u - 1|^beta near u = 1
            return (f.beta, 0.0, f.c)
        v = float(f.evaluate(np.array([s]))[0])
        return (0.0, 0.0, v)
    if isinstance(f, Max):
        ea, eb = envelope(f.a, s, side), envelope(f.b, s, side)
        return ea if _env_cmp(ea, eb) >= 0 else eb
    if isinstance(f, Min):
        ea, eb = envelope(f.a, s, side), envelope(f.b, s, side)
        return ea if _env_cmp(ea, eb) <= 0 else eb
    if isinstance(f, Product):
        (a1, b1, c1) = envelope(f.a, s, side)
        (a2, b2, c2) = envelope(f.b, s, side)
        if c1 == 0.0 or c2 == 0.0:
            return (0.0, 0.0, 0.0)
        return (a1 + a2, b1 + b2, c1 * c2)
    if isinstance(f, Restrict):
        if f.lo < s < f.hi:
            inside = True
        elif s == f.lo:
            inside = side > 0
        elif s == f.hi:
            inside = side < 0
        else:
            inside = False
        return envelope(f.f, s, side) if inside else (0.0, 0.0, 0.0)
    raise TypeError(type(f).__name__)


def _env_cmp(e1, e2):
    """Order by asymptotic size as x -> s (larger blowup wins)."""
    a1, b1, c1 = e1
    a2, b2, c2 = e2
    if c1 == 0.0 and c2 == 0.0:
        return 0
    if c1 == 0.0:
        return -1
    if c2 == 0.0:
        return 1
    if a1 != a2:
        return 1 if a1 < a2 else -1      # smaller power exponent blows up more
    if b1 != b2:
        return 1 if b1 > b2 else -1      # then larger log exponent
    if c1 != c2:
        return 1 if c1 > c2 else -1
    return 0


def _side_integrable(env):
    a, b, c = env
    if c == 0.0:
        return True
    return a > -1.0 or (a == -1.0 and b < -1.0)


def divergence_points(f, lo, hi):
    """Singular points of f in [lo, hi] where the integral diverges."""
    bad = []
    for s in singular_points(f, lo, hi):
        for side in (-1, +1):
            if side < 0 and s <= lo:
                continue
            if side > 0 and s >= hi:
                continue
            if not _side_integrable(envelope(f, s, side)):
                bad.append(s)
                break
    return bad


# ----------------------------------------------------------------------
# piecewise-atomic decomposition

def to_pieces(f, lo, hi):
    """Decompose f on [lo, hi] into (a, b, payload) pieces.

    payload is a Const, a PowerLog, or the original subtree when no atomic
    reduction applies (integrated by quadrature).  Pieces are split at
    every singular point so each piece interior is smooth and lies on one
    side of its atom's singularity.
    """
    if hi <= lo:
        return []
    pieces = _pieces(f, lo, hi)
    out = []
    for a, b, payload in pieces:
        cuts = [p for p in singular_points(payload, a, b) if a < p < b]
        edges = [a] + cuts + [b]
        for x0, x1 in zip(edges[:-1], edges[1:]):
            if x1 > x0:
                out.append((x0, x1, payload))
    return out


def _pieces(f, lo, hi):
    if isinstance(f, (Const, PowerLog)):
        return [(lo, hi, f)]
    if isinstance(f, Restrict):
        out = []
        if lo < f.lo:
            out.append((lo, min(hi, f.lo), Const(0.0)))
        a, b = max(lo, f.lo), min(hi, f.hi)
        if a < b:
            out.extend(_pieces(f.f, a, b))
        if hi > f.hi:
            out.append((max(lo, f.hi), hi, Const(0.0)))
        return out
    if isinstance(f, Product):
        return _combine(f, lo, hi, _merge_product)
    if isinstance(f, (Max, Min)):
        return _combine(f, lo, hi, _merge_minmax)
    raise TypeError(type(f).__name__)


def _combine(f, lo, hi, merge):
    pa = _pieces(f.a, lo, hi)
    pb = _pieces(f.b, lo, hi)
    edges = sorted({lo, hi}
                   | {x for a, b, _ in pa for x in (a, b)}
                   | {x for a, b, _ in pb for x in (a, b)})
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        qa = _piece_at(pa, a, b)
        qb = _piece_at(pb, a, b)
        out.extend(merge(f, a, b, qa, qb))
    return out


def _piece_at(pieces, a, b):
    mid = 0.5 * (a + b)
    for x0, x1, payload in pieces:
        if x0 <= mid <= x1:
            return payload
    return Const(0.0)


def _merge_product(f, a, b, qa, qb):
    merged = _product2(qa, qb)
    if isinstance(merged, (Const, PowerLog)):
        return [(a, b, merged)]
    return [(a, b, f)]


def _merge_minmax(f, a, b, qa, qb):
    take_max = isinstance(f, Max)
    if not (isinstance(qa, (Const, PowerLog)) and isinstance(qb, (Const, PowerLog))):
        return [(a, b, f)]
    # resolve crossings on singularity-free open intervals only
    sing = sorted(s for s in set(singular_points(qa, a, b))
                  | set(singular_points(qb, a, b)) if a < s < b)
    out = []
    for x0, x1 in zip([a] + sing, sing + [b]):
        if x1 <= x0:
            continue
        edges = [x0] + _crossings(qa, qb, x0, x1) + [x1]
        for y0, y1 in zip(edges[:-1], edges[1:]):
            if y1 <= y0:
                continue
            xm = _probe_point(y0, y1, qa, qb)
            va = float(qa.evaluate(np.array([xm]))[0])
            vb = float(qb.evaluate(np.array([xm]))[0])
            win = qa if (va >= vb) == take_max else qb
            out.append((y0, y1, win))
    return out


def _probe_point(a, b, qa, qb):
    # avoid probing exactly on a singular point of either side
    sing = set(singular_points(qa, a, b)) | set(singular_points(qb, a, b))
    for t in (0.5, 0.382, 0.618, 0.271, 0.729):
        x = a + t * (b - a)
        if x not in sing:
            return x
    return 0.5 * (a + b)


def _crossings(qa, qb, a, b):
    """Sign changes of qa - qb inside (a, b), refined by brentq.

    Callers split at singular points first, so the interior is finite.
    """

    def diff(x):
        va = float(qa.evaluate(np.array([x]))[0])
        vb = float(qb.evaluate(np.array([x]))[0])
        if math.isinf(va) and math.isinf(vb):
            return 0.0
        if math.isinf(va):
            return 1.0
        if math.isinf(vb):
            return -1.0
        return va - vb

    # probe grid clustered toward endpoints (singularities live there)
    t = np.concatenate([
        np.geomspace(1e-12, 0.5, _CROSSING_PROBES // 2),
        1.0 - np.geomspace(1e-12, 0.5, _CROSSING_PROBES // 2)[::-1],
    ])
    xs = a + (b - a) * np.unique(t)
    va = qa.evaluate(xs)
    vb = qb.evaluate(xs)
    with np.errstate(invalid="ignore"):
        vals = np.where(
            np.isinf(va) & np.isinf(vb), 0.0,
            np.where(np.isinf(va), 1.0, np.where(np.isinf(vb), -1.0, va - vb)))
    roots = []
    for x0, x1, v0, v1 in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if v0 == 0.0:
            roots.append(float(x0))
        elif v0 * v1 < 0:
            roots.append(float(brentq(diff, x0, x1, xtol=1e-14, rtol=8.9e-16)))
    return sorted(set(roots))


# ----------------------------------------------------------------------
# integration

def integrate(f, lo, hi, rel_tol=_QUAD_REL_TOL):
    """Integral of f over [lo, hi]; +inf when it provably diverges."""
    if hi <= lo:
        return 0.0
    total = 0.0
    for a, b, payload in to_pieces(f, lo, hi):
        v = integrate_piece(payload, a, b, rel_tol)
        if math.isinf(v):
            return math.inf
        total += v
    return total


def integrate_piece(payload, a, b, rel_tol=_QUAD_REL_TOL):
    if isinstance(payload, Const):
        return payload.c * (b - a)
    if isinstance(payload, PowerLog):
        return _integrate_powerlog(payload, a, b, rel_tol)
    return _integrate_general(payload, a, b, rel_tol)


def _integrate_powerlog(p, a, b, rel_tol):
    # pieces are one-sided relative to x0; map to distances t in [t1, t2]
    if a >= p.x0:
        t1, t2 = a - p.x0, b - p.x0
    elif b <= p.x0:
        t1, t2 = p.x0 - b, p.x0 - a
    else:
        left = _integrate_powerlog(p, a, p.x0, rel_tol)
        right = _integrate_powerlog(p, p.x0, b, rel_tol)
        return left + right
    return _powerlog_side_integral(p.c, p.alpha, p.beta, t1, t2, rel_tol)


def _powerlog_side_integral(c, alpha, beta, t1, t2, rel_tol):
    """Integral of c t^alpha |log t|^beta over distances [t1, t2]."""
    if t2 <= t1:
        return 0.0
    if beta == 0.0:
        if alpha == -1.0:
            if t1 == 0.0:
                return math.inf
            return c * (math.log(t2) - math.log(t1))
        e = alpha + 1.0
        if t1 == 0.0 and e < 0.0:
            return math.inf
        return c * (t2 ** e - t1 ** e) / e
    if t1 < 1.0 < t2:
        return (_powerlog_side_integral(c, alpha, beta, t1, 1.0, rel_tol)
                + _powerlog_side_integral(c, alpha, beta, 1.0, t2, rel_tol))
    if alpha == -1.0:
        return _log_power_integral(c, beta, t1, t2)
    # no elementary antiderivative: quadrature with ring subdivision
    if not _side_integrable((alpha, beta, c)) and t1 == 0.0:
        return math.inf
    if beta < 0.0 and (t1 == 1.0 or t2 == 1.0):
        if beta <= -1.0:
            return math.inf
    g = PowerLog(c, 0.0, alpha, beta)
    return _integrate_general(g, t1, t2, rel_tol)


def _log_power_integral(c, beta, t1, t2):
    """c * t^-1 |log t|^beta on one side of t = 1 (both t <= 1 or >= 1)."""
    # substitute s = |log t|: integral of s^beta ds between the two s values
    def anti(s):
        if beta == -1.0:
            return math.log(s) if s > 0 else -math.inf
        return s ** (beta + 1.0) / (beta + 1.0)

    if t2 <= 1.0:
        s_lo = -math.log(t2) if t2 < 1.0 else 0.0   # smaller s
        s_hi = math.inf if t1 == 0.0 else -math.log(t1)
    else:
        s_lo = math.log(t1) if t1 > 1.0 else 0.0
        s_hi = math.log(t2)
    if s_hi == math.inf:
        if beta + 1.0 < 0.0:
            hi_val = 0.0
        else:
            return math.inf
    else:
        hi_val = anti(s_hi)
    if s_lo == 0.0:
        if beta == -1.0 or beta + 1.0 < 0.0:
            return math.inf
        lo_val = 0.0
    else:
        lo_val = anti(s_lo)
    return c * abs(hi_val - lo_val)


def _integrate_general(node, a, b, rel_tol):
    """Quadrature of an arbitrary subtree, rings toward singular endpoints."""
    for s in divergence_points(node, a, b):
        if a <= s <= b:
            return math.inf

    def fn(x):
        return float(node.evaluate(np.array([x]))[0])

    interior = [p for p in singular_points(node, a, b) if a < p < b]
    edges = [a] + interior + [b]
    total = 0.0
    for x0, x1 in zip(edges[:-1], edges[1:]):
        sing_left = x0 in singular_points(node, x0, x0)
        sing_right = x1 in singular_points(node, x1, x1)
        total += _quad_segment(fn, x0, x1, sing_left, sing_right, rel_tol)
    return total


def _quad_segment(fn, a, b, sing_left, sing_right, rel_tol):
    if not sing_left and not sing_right:
        val, _ = quad(fn, a, b, epsrel=rel_tol, limit=200)
        return val
    if sing_left and sing_right:
        m = 0.5 * (a + b)
        return (_quad_segment(fn, a, m, True, False, rel_tol)
                + _quad_segment(fn, m, b, False, True, rel_tol))
    # geometric rings toward the singular endpoint
    total = 0.0
    width = b - a
    prev = None
    for j in range(_RING_LIMIT):
        w_hi = width * 0.5 ** j
        w_lo = width * 0.5 ** (j + 1)
        if sing_left:
            x0, x1 = a + w_lo, a + w_hi
        else:
            x0, x1 = b - w_hi, b - w_lo
        if x1 <= x0:
            break
        ring, _ = quad(fn, x0, x1, epsrel=rel_tol, limit=100)
        total += ring
        if prev is not None and abs(ring) <= max(abs(total), 1e-300) * rel_tol * 0.1:
            break
        prev = ring
    return total


def side_prefix(p, xs, anchor):
    """Vector antiderivative of a PowerLog piece, measured from ``anchor``.

    Returns F(xs) with F(x) = integral of p from anchor to x.  Valid only
    when all of xs and anchor lie on one side of p.x0 and, when beta != 0,
    on one side of the distance-1 ring.  Returns None when no closed form
    applies (alpha != -1 with beta != 0).
    """
    xs = np.asarray(xs, dtype=float)
    t = np.abs(xs - p.x0)
    t_a = abs(anchor - p.x0)
    # sign of dx in terms of dt: +1 on the right of x0, -1 on the left
    sgn = 1.0 if max(xs.max(), anchor) > p.x0 else -1.0

    if p.beta == 0.0:
        if p.alpha == -1.0:
            with np.errstate(divide="ignore"):
                g = np.log(t)
            g_a = -math.inf if t_a == 0.0 else math.log(t_a)
        else:
            e = p.alpha + 1.0
            with np.errstate(divide="ignore"):
                g = np.power(t, e) / e
            g_a = (math.inf if e < 0 else 0.0) if t_a == 0.0 else t_a ** e / e
        return p.c * sgn * (g - g_a)
    if p.alpha == -1.0:
        # substitute s = |log t|; A(s) = s^(beta+1)/(beta+1) (log s at -1)
        lo_side = max(t.max(), t_a) <= 1.0

        def A(s):
            if p.beta == -1.0:
                with np.errstate(divide="ignore"):
                    return np.log(s)
            e = p.beta + 1.0
            with np.errstate(over="ignore", divide="ignore"):
                return np.power(s, e) / e

        with np.errstate(divide="ignore"):
            s = np.abs(np.log(np.where(t > 0, t, 1.0)))
        s = np.where(t > 0, s, np.inf)
        s_a = math.inf if t_a == 0.0 else abs(math.log(t_a))
        g = A(s)
        if s_a == math.inf:
            g_a = 0.0 if p.beta + 1.0 < 0 else math.inf
        else:
            g_a = float(A(np.array([s_a]))[0])
        orient = -1.0 if lo_side else 1.0   # s decreases as t grows below 1
        return p.c * sgn * orient * (g - g_a)
    return None


def lp_integral(f, p_exp, lo, hi, rel_tol=_QUAD_REL_TOL):
    """Exact integral of f^p over [lo, hi]; +inf when divergent."""
    return integrate(power(f, p_exp), lo, hi, rel_tol)


# ----------------------------------------------------------------------
# superlevel sets (for weak-L^p probes)

def level_set(f, t, lo, hi):
    """{x in [lo, hi] : f(x) > t} as disjoint intervals, or None.

    Supported for constants, pure power atoms (beta = 0) and max/min/
    restrict combinations of them; returns None otherwise.
    """
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    if isinstance(f, Const):
        return [(lo, hi)] if f.c > t else []
    if isinstance(f, PowerLog):
        if f.beta != 0.0:
            return None
        if f.alpha == 0.0:
            return [(lo, hi)] if f.c > t else []
        if t == 0.0:
            return [(lo, hi)]
        ustar = (t / f.c) ** (1.0 / f.alpha)
        if f.alpha < 0:
            span = [(f.x0 - ustar, f.x0 + ustar)]
        else:
            span = [(-math.inf, f.x0 - ustar), (f.x0 + ustar, math.inf)]
        return _clip(span, lo, hi)
    if isinstance(f, Max):
        sa = level_set(f.a, t, lo, hi)
        sb = level_set(f.b, t, lo, hi)
        if sa is None or sb is None:
            return None
        return _union(sa + sb)
    if isinstance(f, Min):
        sa = level_set(f.a, t, lo, hi)
        sb = level_set(f.b, t, lo, hi)
        if sa is None or sb is None:
            return None
        return _intersect(sa, sb)
    if isinstance(f, Restrict):
        inner = level_set(f.f, t, max(lo, f.lo), min(hi, f.hi))
        return inner
    if isinstance(f, Product):
        if isinstance(f.a, Const):
            return level_set(f.b, t / f.a.c, lo, hi)
        if isinstance(f.b, Const):
            return level_set(f.a, t / f.b.c, lo, hi)
        return None
    return None


def level_measure(f, t, lo, hi):
    s = level_set(f, t, lo, hi)
    if s is None:
        return None
    return sum(b - a for a, b in s)


def _clip(spans, lo, hi):
    out = []
    for a, b in spans:
        a, b = max(a, lo), min(b, hi)
        if b > a:
            out.append((a, b))
    return out


def _union(spans):
    if not spans:
        return []
    spans = sorted(spans)
    out = [list(spans[0])]
    for a, b in spans[1:]:
        if a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [tuple(x) for x in out]


def _intersect(sa, sb):
    out = []
    i = j = 0
    while i < len(sa) and j < len(sb):
        a = max(sa[i][0], sb[j][0])
        b = min(sa[i][1], sb[j][1])
        if b > a:
            out.append((a, b))
        if sa[i][1] < sb[j][1]:
            i += 1
        else:
            j += 1
    return out
