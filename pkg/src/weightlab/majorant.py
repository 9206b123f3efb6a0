"""A_1 majorant constructions and membership classification.

Certificates are self-verifying: they store the majorant, the cell-wise
domination margin and the A_1 report, and `verify` recomputes all of it
from the stored data.  Verdicts follow the taxonomy {certified-yes,
certified-no-at-scale, inconclusive}: no finite computation proves a
continuum membership, so "yes" means every numeric witness passed at the
recorded scales and "no-at-scale" means a divergence was exhibited
(symbolically, for closed-form inputs, or as a scale trend).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closedform as cf
from .errors import (BTooSmall, ChainBroken, DeltaOutOfRange, NotInLp,
                     RHFailed, TailNotSmall)
from .grid import (DEFAULT_TREND_CONFIG, GridFunction, Interval, TrendReport,
                   classify_trend, constant_grid, lp_norm, refine, sample,
                   weak_lp_quasinorm, weighted_lp_norm)
from .maximal import ALL, grid_id, maximal_fast, norm_ratio_lower_bound, op_norm_estimate
from .weights import (ApReport, Weight, ap_constant, as_weight, dual_weight,
                      factor_product, reverse_holder_exponent)

P_LADDER = (1.01, 1.1, 1.5, 2.0, 4.0)
_FLOAT_SLACK = 1e-9


# ----------------------------------------------------------------------
# function spaces for the Rubio de Francia iteration

@dataclass(frozen=True)
class WeightedLp:
    """L^p_w on the weight's grid."""

    p: float
    w: Weight

    def norm(self, f):
        return weighted_lp_norm(f, self.w.grid, self.p)

    @property
    def is_normed(self):
        return True

    def describe(self):
        return {"space": "L^p_w", "p": self.p, "weight_id": grid_id(self.w.grid)}


@dataclass(frozen=True)
class WeakLp:
    """Weak L^p; the quasinorm is not subadditive, so series bounds that
    rely on the triangle inequality are recorded, not enforced."""

    p: float

    def norm(self, f):
        return weak_lp_quasinorm(f, self.p)

    @property
    def is_normed(self):
        return False

    def describe(self):
        return {"space": "L^p,inf", "p": self.p}


# ----------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class MajorantCertificate:
    """A claimed majorant |f|^r <= w plus machine-checkable evidence."""

    target: str
    r: float
    w: Weight
    domination_margin: float
    a1_report: ApReport
    trace: dict = field(compare=False)

    def valid(self):
        return (self.domination_margin >= -_FLOAT_SLACK * self._scale()
                and self.a1_report.p == 1.0)

    def _scale(self):
        return float(np.max(self.w.values))

    def verify(self, f, already_powered=False):
        """Recompute the stored evidence against the actual target grid.

        ``already_powered`` says f carries cell averages of |target|^r
        (the carrier convention used for closed-form classification).
        """
        r_eff = 1.0 if already_powered else self.r
        margin = domination_margin(f, r_eff, self.w)
        rep = ap_constant(self.w, 1.0)
        return {
            "margin_matches": math.isclose(margin, self.domination_margin,
                                           rel_tol=1e-12, abs_tol=1e-12),
            "margin": margin,
            "a1_matches": math.isclose(rep.constant, self.a1_report.constant,
                                       rel_tol=1e-12),
            "a1_constant": rep.constant,
        }

    def to_json(self):
        return {
            "target": self.target,
            "r": self.r,
            "weight_id": grid_id(self.w.grid),
            "domination_margin": self.domination_margin,
            "a1_report": self.a1_report.to_json(),
            "trace": _jsonable(self.trace),
        }


@dataclass(frozen=True)
class MembershipReport:
    function_id: str
    class_queried: dict
    verdict: str
    evidence: dict = field(compare=False)

    def to_json(self):
        return {
            "function_id": self.function_id,
            "class_queried": _jsonable(self.class_queried),
            "verdict": self.verdict,
            "evidence": _jsonable(self.evidence),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(float(obj))
    return obj


def domination_margin(f, r, w):
    """min over cells of w - |f|^r."""
    return float(np.min(w.values - np.abs(f.values) ** r))


def _certificate(target_id, r, w, f, trace):
    return MajorantCertificate(
        target=target_id, r=float(r), w=w,
        domination_margin=domination_margin(f, r, w),
        a1_report=ap_constant(w, 1.0), trace=trace,
    )


# ----------------------------------------------------------------------
# Coifman-Rochberg and the local pipeline

def coifman_rochberg(f, delta):
    """(Mf)^delta as an A_1 majorant of |f|^delta, for 0 < delta < 1."""
    if not 0.0 < delta < 1.0:
        raise DeltaOutOfRange(f"delta = {delta} is outside (0, 1)")
    mf = maximal_fast(f)
    w = Weight(mf.with_values(mf.values ** delta))
    return _certificate(
        grid_id(f), delta, w, f,
        {"method": "CoifmanRochberg", "delta": delta},
    )


def local_majorant(f, r, p, trend=None):
    """Majorant for |f|^r via (M(|f|^p))^(r/p), given f in L^p at p > r.

    ``trend``, when provided, must be a plateau TrendReport certifying the
    L^p membership; a non-plateau trend raises NotInLp.
    """
    if not 0.0 < r < p:
        raise ValueError("need 0 < r < p")
    if trend is not None and trend.verdict != "plateau":
        raise NotInLp(f"L^{p} trend verdict is {trend.verdict!r}")
    g = f.with_values(np.abs(f.values) ** p)
    inner = coifman_rochberg(g, r / p)
    return MajorantCertificate(
        target=grid_id(f), r=float(r), w=inner.w,
        domination_margin=domination_margin(f, r, inner.w),
        a1_report=inner.a1_report,
        trace={"method": "CoifmanRochberg", "delta": r / p, "p": p,
               "majorized_power": p,
               "lp_trend": trend.to_json() if trend is not None else None},
    )


# ----------------------------------------------------------------------
# Rubio de Francia

def rubio_de_francia(f, space, B=None, K=1, tol=0.05, k_max=64,
                     trials=12, seed=0):
    """R_K f = sum_{k<=K} M^k f / (2B)^k with checked contracts.

    (a) |f| <= R_K f cell-wise (the k = 0 term);
    (b) ||R_K f|| <= 2 (1 + tol) ||f|| in normed spaces;
    (c) M(R_K f) <= 2B R_{K+1} f <= 2B (1 + tol) R_K f cell-wise, the
        last step once the tail proxy ||M^(K+1) f||_inf / (2B)^(K+1)
        drops below tol * min(R_K f); K grows until it does.

    Raises BTooSmall when an observed ratio ||Mg||/||g|| exceeds B, and
    TailNotSmall when K reaches k_max without meeting the tail condition.
    """
    fa = f.with_values(np.abs(f.values))
    if not np.any(fa.values > 0):
        raise ValueError("Rubio de Francia needs f not identically zero")
    if B is None:
        est = norm_ratio_lower_bound(space.norm, fa, trials, seed)
        B = 2.0 * max(est, 1.0)
    B = float(B)

    norm_f = space.norm(fa)
    R = fa.values.copy()
    gk = fa
    norm_prev = norm_f
    K = max(int(K), 1)
    k = 0
    while True:
        g_next = maximal_fast(gk)
        norm_next = space.norm(g_next)
        if norm_prev > 0 and norm_next > B * norm_prev * (1.0 + 1e-12):
            raise BTooSmall(
                f"observed ||M g||/||g|| = {norm_next / norm_prev:.6g} "
                f"exceeds B = {B:.6g}; re-estimate the operator norm")
        k += 1
        gk, norm_prev = g_next, norm_next
        term = g_next.values / (2.0 * B) ** k
        if k <= K:
            R = R + term
            continue
        # k == K + 1: ``term`` is the truncation tail candidate
        tail_term = term
        tail_max = float(np.max(term))
        min_R = float(np.min(R))
        if tail_max <= tol * min_R:
            break
        if K >= k_max:
            raise TailNotSmall(
                f"tail proxy {tail_max:.3g} > tol * min R = {tol * min_R:.3g} "
                f"at K = {K}")
        R = R + term
        K = k

    Rf = f.with_values(R)
    w = Weight(Rf)
    margin = domination_margin(f, 1.0, w)
    norm_R = space.norm(Rf)
    norm_ratio = norm_R / norm_f if norm_f > 0 else math.inf
    if space.is_normed and norm_ratio > 2.0 * (1.0 + tol):
        raise BTooSmall(
            f"||Rf||/||f|| = {norm_ratio:.6g} exceeds 2 (1 + tol); the norm "
            "bound B in use is too small")
    mR = maximal_fast(Rf).values
    R_next = R + tail_term
    scale = float(np.max(R))
    ok_first = np.all(mR <= 2.0 * B * R_next + _FLOAT_SLACK * scale * 2.0 * B)
    ok_second = np.all(R_next <= (1.0 + tol) * R * (1.0 + _FLOAT_SLACK))
    cert = MajorantCertificate(
        target=grid_id(f), r=1.0, w=w,
        domination_margin=margin,
        a1_report=ap_constant(w, 1.0),
        trace={
            "method": "RubioDeFrancia", "B": B, "K": K, "tol": tol,
            "space": space.describe(), "norm_ratio": norm_ratio,
            "tail_max": tail_max, "min_R": min_R,
            "maximal_contract_ok": bool(ok_first and ok_second),
            "seed": seed, "trials": trials,
        },
    )
    if not (ok_first and ok_second):
        raise ChainBroken("Rubio de Francia cell-wise contract failed; "
                          "this signals an upstream bug")
    return cert


# ----------------------------------------------------------------------
# weighted membership from a majorant

def weighted_membership_from_majorant(f, cert, p0, already_powered=False):
    """sigma = w^(1 - p0/r): an A_{p0/r} witness with the forced bound
    integral |f|^p0 sigma <= integral w.

    With ``already_powered`` the grid f carries cell averages of the
    r-th power of the target, and the bound is checked at exponent q0.
    """
    q0 = p0 / cert.r
    if q0 <= 1.0:
        raise ValueError("need p0 > r")
    ones = Weight(constant_grid(1.0, cert.w.domain, cert.w.depth))
    sigma = factor_product(ones, cert.w, q0)
    exponent = q0 if already_powered else p0
    lhs = weighted_lp_norm(f, sigma.grid, exponent) ** exponent
    rhs = cert.w.grid.integral()
    return {
        "sigma": sigma,
        "q0": q0,
        "bound_ok": bool(lhs <= rhs * (1.0 + _FLOAT_SLACK)),
        "lhs": lhs,
        "rhs": rhs,
        "ap_report": ap_constant(sigma, q0),
    }


def global_ap_certificate(f, cert_w, u, p):
    """v = u w^(1-p) from an A_1 majorant w of f and an A_1 weight u with
    f integrable against u; checks the displayed integral inequality."""
    if cert_w.r != 1.0:
        raise ValueError("need an r = 1 majorant certificate")
    v = factor_product(u, cert_w.w, p)
    lhs = weighted_lp_norm(f, v.grid, p) ** p
    rhs = weighted_lp_norm(f, u.grid, 1.0)
    fa = np.abs(f.values)
    cellwise = np.all(
        fa ** p * cert_w.w.values ** (1.0 - p) * u.values
        <= fa * u.values * (1.0 + _FLOAT_SLACK) + 1e-300)
    return {
        "v": v,
        "ap_report": ap_constant(v, p),
        "integral_lhs": lhs,
        "integral_rhs": rhs,
        "integral_bound_ok": bool(lhs <= rhs * (1.0 + _FLOAT_SLACK)),
        "cellwise_ok": bool(cellwise),
    }


# ----------------------------------------------------------------------
# A_infty majorants reduce to A_1 (local)

def ainfty_to_a1(w, family=ALL):
    """Majorize an A_infty-certified weight by M_Q w, an A_1 weight.

    Requires a reverse Holder exponent; checks w <= M_Q w and the RH
    sandwich (M_Q w^s)^(1/s) <= 2 M_Q w <= 2 (M_Q w^s)^(1/s) cell-wise.
    """
    w = as_weight(w)
    try:
        rh = reverse_holder_exponent(w, family)
    except Exception as exc:
        raise RHFailed(f"no reverse Holder exponent: {exc}") from exc
    s = rh.s
    mw = maximal_fast(w.grid)
    mws = maximal_fast(w.grid.with_values(w.values ** s))
    lhs = mws.values ** (1.0 / s)
    slack = 1.0 + _FLOAT_SLACK
    if not np.all(mw.values <= lhs * slack):
        raise ChainBroken("Jensen side of the RH sandwich failed")
    if not np.all(lhs <= 2.0 * mw.values * slack):
        raise ChainBroken("reverse Holder side of the sandwich failed")
    if not np.all(w.values <= mw.values * slack):
        raise ChainBroken("w <= M w failed cell-wise")
    maj = Weight(mw)
    return MajorantCertificate(
        target=grid_id(w.grid), r=1.0, w=maj,
        domination_margin=domination_margin(w.grid, 1.0, maj),
        a1_report=ap_constant(maj, 1.0),
        trace={"method": "AinftyToA1", "rh_exponent": s,
               "rh_trace": list(rh.search_trace)},
    )


# ----------------------------------------------------------------------
# inequality-chain transfer to the maximal function

def majorant_maximal_transfer(f, cert):
    """Certificate for M f from one for f (r >= 1): the chain
    (Mf)^r <= M(|f|^r) <= M w <= [w]_{A_1} w is checked cell by cell."""
    r = cert.r
    if r < 1.0:
        raise ValueError("transfer requires r >= 1")
    mf = maximal_fast(f)
    m_fr = maximal_fast(f.with_values(np.abs(f.values) ** r))
    mw = maximal_fast(cert.w.grid)
    C = cert.a1_report.constant
    scale = float(np.max(mw.values)) * max(C, 1.0)
    tol = 1e-12 * max(scale, 1.0)
    if not np.all(mf.values ** r <= m_fr.values + tol):
        raise ChainBroken("(Mf)^r <= M(|f|^r) failed")
    if not np.all(m_fr.values <= mw.values + tol):
        raise ChainBroken("M(|f|^r) <= M(w) failed")
    if not np.all(mw.values <= C * cert.w.values + tol):
        raise ChainBroken("M(w) <= [w]_A1 * w failed")
    new_w = Weight(cert.w.grid.with_values(C * cert.w.values))
    return MajorantCertificate(
        target=f"M({cert.target})", r=r, w=new_w,
        domination_margin=float(np.min(new_w.values - mf.values ** r)),
        a1_report=ap_constant(new_w, 1.0),
        trace={"method": "Product", "factor": C, "base": cert.trace},
    )


# ----------------------------------------------------------------------
# cross-exponent transfer (global route)

def cross_exponent_transfer(f, p, w, q, tol=0.05, trials=12, seed=0):
    """Move f in L^p_w (w in A_p) to f in L^q_v with v in A_q.

    Route: Rubio de Francia majorant W of f in L^p_w; a dual-space run on
    the normalized constant produces u in A_1 with integral |f| u under
    control; v = u W^(1-q).
    """
    w = as_weight(w)
    space = WeightedLp(p, w)
    cert_W = rubio_de_francia(f, space, tol=tol, trials=trials, seed=seed)
    sigma = dual_weight(w, p)
    pprime = p / (p - 1.0)
    ones = constant_grid(1.0, w.domain, w.depth)
    gnorm = weighted_lp_norm(ones, sigma.grid, pprime)
    g = ones.with_values(ones.values / gnorm)
    cert_u = rubio_de_francia(g, WeightedLp(pprime, sigma), tol=tol,
                              trials=trials, seed=seed + 1)
    u = cert_u.w
    pairing = weighted_lp_norm(f, u.grid, 1.0)
    norm_f = space.norm(f)
    v = factor_product(u, cert_W.w, q)
    lhs = weighted_lp_norm(f, v.grid, q) ** q
    rhs = weighted_lp_norm(f, u.grid, 1.0)
    return {
        "v": v,
        "u_certificate": cert_u,
        "majorant_certificate": cert_W,
        "pairing_bound_ok": bool(pairing <= 2.0 * (1.0 + tol) * norm_f),
        "pairing": pairing,
        "norm_f": norm_f,
        "ap_report": ap_constant(v, q),
        "membership_ok": bool(lhs <= rhs * (1.0 + _FLOAT_SLACK)),
    }


# ----------------------------------------------------------------------
# global M_{A_1}(R) test for closed-form functions

def maximal_window_probe(fs, x, R_ladder, n_points=140):
    """sup of closed-form averages over windows containing x, per R.

    Window endpoints run over a log grid inside [-R, R]; masses accumulate
    outward from x, so a non-integrable singularity anywhere in a window
    propagates +inf without ever forming inf - inf.
    """
    Rmax = float(max(R_ladder))
    tiny = 1e-7 * max(abs(x), 1.0)
    pos = np.geomspace(tiny, Rmax, n_points)
    T = np.unique(np.concatenate([-pos[::-1], [0.0, x], pos]))
    ix = int(np.searchsorted(T, x))
    left = np.zeros(ix + 1)               # integral from T[i] up to x
    for i in range(ix - 1, -1, -1):
        left[i] = left[i + 1] + cf.integrate(fs, T[i], T[i + 1])
    right = np.zeros(len(T) - ix)         # integral from x up to T[ix + j]
    for j in range(1, len(right)):
        right[j] = right[j - 1] + cf.integrate(fs, T[ix + j - 1], T[ix + j])
    sups = []
    for R in R_ladder:
        ii = np.nonzero(T[:ix + 1] >= -R)[0]
        jj = np.nonzero(T[ix:] <= R)[0]
        widths = T[ix + jj][None, :] - T[ii][:, None]
        mass = left[ii][:, None] + right[jj][None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            avg = np.where(widths > 0, mass / widths, -np.inf)
        sups.append(float(np.max(avg)))
    return sups


def global_a1_test(f, s_ladder=(1.01, 1.25, 1.5, 2.0, 3.0),
                   R_ladder=tuple(2.0 ** m for m in range(0, 10)),
                   radial_radii=tuple(2.0 ** m for m in range(0, 13)),
                   depth=12, config=DEFAULT_TREND_CONFIG,
                   probe_points=(0.7, -0.7)):
    """Probe whether |f|^s has an a.e.-finite maximal function for some
    ladder s > 1; builds the M(|f|^s)^(1/s) certificate when it does.

    Two probes per exponent: the closed-form running sup of averages over
    symmetric windows [-r, r], and the closed-form sup of averages over
    windows containing fixed interior points, restricted to [-R, R].
    """
    fid = cf.describe(f)
    Rmax = max(R_ladder)
    if cf.integrate(f, -Rmax, Rmax) == 0.0:
        ones = Weight(constant_grid(1.0, Interval(-Rmax, Rmax), depth))
        zero = constant_grid(0.0, Interval(-Rmax, Rmax), depth)
        return MembershipReport(
            function_id=fid, class_queried={"name": "M_A1", "domain": "R"},
            verdict="certified-yes",
            evidence={"note": "zero function; the constant weight majorizes",
                      "certificate": _certificate(fid, 1.0, ones, zero,
                                                  {"method": "External"})})
    per_s = {}
    best = None
    for s in s_ladder:
        fs = cf.power(f, s)
        raw = []
        for r in radial_radii:
            v = cf.integrate(fs, -r, r)
            raw.append(v / (2.0 * r) if math.isfinite(v) else math.inf)
        running = list(np.maximum.accumulate(raw))
        radial = classify_trend(radial_radii, running, config)
        window_vals = np.full(len(R_ladder), -math.inf)
        for x in probe_points:
            sups = maximal_window_probe(fs, x, R_ladder)
            window_vals = np.maximum(window_vals, sups)
        grid = classify_trend(R_ladder, list(window_vals), config)
        entry = {"s": s, "radial_raw": list(raw), "radial_trend": radial,
                 "window_trend": grid}
        per_s[s] = entry
        if (best is None and radial.verdict == "plateau"
                and grid.verdict == "plateau"):
            best = s
    if best is not None:
        dom = Interval(-Rmax, Rmax)
        fs_grid = sample(cf.power(f, best), dom, depth)
        fg = sample(f, dom, depth)
        mfs = maximal_fast(fs_grid)
        w = Weight(mfs.with_values(mfs.values ** (1.0 / best)))
        cert = _certificate(fid, 1.0, w, fg,
                            {"method": "CoifmanRochberg", "delta": 1.0 / best,
                             "majorized_power": best, "R": Rmax,
                             "depth": depth})
        verdict = "certified-yes"
        evidence = {"s": best, "per_s": per_s, "certificate": cert}
    elif all(e["radial_trend"].verdict == "divergent"
             or e["window_trend"].verdict == "divergent"
             for e in per_s.values()):
        verdict = "certified-no-at-scale"
        evidence = {"per_s": per_s}
    else:
        verdict = "inconclusive"
        evidence = {"per_s": per_s}
    return MembershipReport(
        function_id=fid, class_queried={"name": "M_A1", "domain": "R"},
        verdict=verdict, evidence=evidence)


# ----------------------------------------------------------------------
# local classification

def lp_membership(f, Q, p, depths=(8, 9, 10, 11, 12),
                  config=DEFAULT_TREND_CONFIG):
    """Exact L^p(Q) membership of a closed-form f, with grid evidence.

    The trend ladder carries the grid integrals of |f|^p at each depth and
    appends the exact improper integral as the limit entry (inf when the
    closed-form analysis proves divergence), so log-slow divergences that
    no feasible grid can exhibit still produce a divergent verdict.
    """
    exact = cf.lp_integral(f, p, Q.left, Q.right)
    values = []
    for d in depths:
        try:
            g = sample(f, Q, int(d))
            values.append(lp_norm(g, p) ** p)
        except Exception:
            values.append(math.inf)
    params = list(depths) + [math.inf]
    values = values + [exact]
    trend = classify_trend(params, values, config)
    verdict = "certified-yes" if math.isfinite(exact) else "certified-no-at-scale"
    return {"p": p, "exact": exact, "trend": trend, "verdict": verdict}


def classify_local(f, Q, p0, r=1.0, depths=(8, 9, 10, 11, 12),
                   grid_depth=12, config=DEFAULT_TREND_CONFIG):
    """Classify f on the cube Q against the local class lattice.

    Emits reports for L^r, M_F, the union of L^p over p > r, the majorant
    class at power r, and the weighted union at exponent p0; the last
    three share one verdict and, when certified, three mutually consistent
    witnesses (an integrability exponent, a Coifman-Rochberg majorant and
    a weighted-space membership bound).
    """
    if isinstance(f, GridFunction):
        return _classify_grid_input(f, Q, p0, r)
    fid = cf.describe(f)
    l1 = lp_membership(f, Q, 1.0, depths, config)
    base = l1 if r == 1.0 else lp_membership(f, Q, r, depths, config)
    ladder = [r * t for t in P_LADDER]
    per_p = {}
    pstar = None
    for p in ladder:
        memb = lp_membership(f, Q, p, depths, config)
        per_p[p] = memb
        if pstar is None and memb["verdict"] == "certified-yes":
            pstar = p

    reports = [
        MembershipReport(fid, {"name": "Lp", "p": r}, base["verdict"],
                         {"exact": base["exact"], "trend": base["trend"]}),
        MembershipReport(
            fid, {"name": "M_F", "domain": "local"},
            "certified-yes" if l1["verdict"] == "certified-yes"
            else "certified-no-at-scale",
            {"l1": {"exact": l1["exact"], "trend": l1["trend"]},
             "note": "f in L^1(Q) forces M_Q f finite a.e.; f outside "
                     "L^1(Q) forces M_Q f identically infinite"}),
    ]

    union_evidence = {"ladder": {p: {"exact": m["exact"], "trend": m["trend"]}
                                 for p, m in per_p.items()}}
    if pstar is not None:
        # grid carriers: exact cell averages of |f|^r and |f|^pstar (both
        # integrable once some ladder exponent is), so non-locally-
        # integrable f with small r still get certificates
        gr = sample(cf.power(f, r) if r != 1.0 else f, Q, grid_depth)
        if not np.any(np.abs(gr.values) > 0):
            return _classify_grid_input(gr, Q, p0, r, fid=fid)
        gp = sample(cf.power(f, pstar), Q, grid_depth)
        mgp = maximal_fast(gp)
        w = Weight(mgp.with_values(mgp.values ** (r / pstar)))
        cert = MajorantCertificate(
            target=fid, r=float(r), w=w,
            domination_margin=float(np.min(w.values - gr.values)),
            a1_report=ap_constant(w, 1.0),
            trace={"method": "CoifmanRochberg", "delta": r / pstar,
                   "majorized_power": pstar,
                   "carrier": "cell averages of |f|^r",
                   "lp_trend": per_p[pstar]["trend"].to_json()},
        )
        weighted = weighted_membership_from_majorant(gr, cert, p0,
                                                     already_powered=True)
        verdict = "certified-yes"
        union_evidence["p_witness"] = pstar
        maj_evidence = dict(union_evidence, certificate=cert)
        wgt_evidence = dict(union_evidence, sigma_ap=weighted["ap_report"],
                            bound_ok=weighted["bound_ok"],
                            lhs=weighted["lhs"], rhs=weighted["rhs"])
    elif all(m["verdict"] == "certified-no-at-scale" for m in per_p.values()):
        verdict = "certified-no-at-scale"
        maj_evidence = wgt_evidence = union_evidence
    else:
        verdict = "inconclusive"
        maj_evidence = wgt_evidence = union_evidence

    reports.append(MembershipReport(
        fid, {"name": "UnionLp", "r": r}, verdict, union_evidence))
    reports.append(MembershipReport(
        fid, {"name": "M_A1", "r": r, "domain": "local"}, verdict,
        maj_evidence))
    reports.append(MembershipReport(
        fid, {"name": "UnionWeightedLp", "p0": p0, "q0": p0 / r}, verdict,
        wgt_evidence))
    if r == 1.0:
        note = ("nested classes: an A_1 majorant is an A_p majorant, and "
                "locally M_{A_infty} = M_{A_1}")
        for cls in ({"name": "M_Ap", "p": p0}, {"name": "M_Ainfty"}):
            reports.append(MembershipReport(
                fid, cls, verdict, {"note": note}))
    return reports


def _classify_grid_input(f, Q, p0, r, fid=None):
    """Raw grid data is bounded, so every local class holds trivially."""
    fid = fid or grid_id(f)
    peak = float(np.max(np.abs(f.values)) ** r)
    w = Weight(constant_grid(max(peak, 1.0), f.domain, f.depth))
    cert = _certificate(fid, r, w, f, {"method": "External",
                                       "note": "constant majorant"})
    weighted = weighted_membership_from_majorant(f, cert, p0)
    evidence = {"certificate": cert, "bound_ok": weighted["bound_ok"],
                "note": "finite grid data is bounded"}
    classes = [{"name": "Lp", "p": r}, {"name": "M_F", "domain": "local"},
               {"name": "UnionLp", "r": r},
               {"name": "M_A1", "r": r, "domain": "local"},
               {"name": "UnionWeightedLp", "p0": p0, "q0": p0 / r}]
    return [MembershipReport(fid, c, "certified-yes", evidence)
            for c in classes]
