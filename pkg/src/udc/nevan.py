"""Value-distribution functionals on the disc: proximity, counting and
characteristic functions, the Jensen and logarithmic-derivative checks, mean
growth tables for the covering map, and the circle discrepancy toolkit.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import mpmath as mp

from .cover import CuspRefusal, f_n_eval
from .hyper import DEFAULT_CTX, DomainError, PrecisionCtx

UNIFORM_TRAPEZOID = "uniform-trapezoid"
ADAPTIVE = "adaptive"


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class CircleQuadrature:
    radius: object
    nodes: int = 256
    rule: str = UNIFORM_TRAPEZOID
    max_refused_fraction: float = 0.01
    jitter_tries: int = 3
    adaptive_rounds: int = 4
    adaptive_target: float = 1e-12

    def __post_init__(self):
        if self.nodes < 16:
            raise DomainError("quadrature needs at least 16 nodes")
        if self.rule not in (UNIFORM_TRAPEZOID, ADAPTIVE):
            raise DomainError("unknown quadrature rule %r" % self.rule)


@dataclass
class NevanlinnaProfile:
    r: object
    m: object
    Ncount: object
    T: object
    est_err: object


def log_plus(x):
    ax = abs(x)
    return mp.log(ax) if ax > 1 else mp.mpf(0)


# ---------------------------------------------------------------------------
# proximity and counting
# ---------------------------------------------------------------------------

def _circle_values(f, r, n, jitter_tries, ctx):
    """Values of f at n equispaced angles, jittering refused nodes."""
    vals = []
    refused = 0
    step = 2 * mp.pi / n
    for i in range(n):
        theta = i * step
        v = None
        for attempt in range(jitter_tries + 1):
            # deterministic jitter schedule, scaled to a fraction of a cell
            jit = step * mp.mpf(attempt) * mp.mpf("0.001") * (1 + (i % 7))
            try:
                v = f(r * mp.exp(1j * (theta + jit)))
                break
            except CuspRefusal:
                continue
        if v is None:
            refused += 1
        vals.append(v)
    return vals, refused


def _mean(vals):
    good = [v for v in vals if v is not None]
    return mp.fsum(good) / len(good)


def proximity_m(f, quad: CircleQuadrature, ctx: PrecisionCtx = DEFAULT_CTX):
    """(m(r,f), error estimate): the circle average of log+|f|.

    f is a callable z -> complex value that may raise CuspRefusal; refused
    nodes are retried at jittered angles and skipped if stubborn, failing
    the quadrature when more than the allowed fraction is lost.
    """
    with ctx.working():
        r = mp.mpf(quad.radius)
        n = quad.nodes
        rounds = quad.adaptive_rounds if quad.rule == ADAPTIVE else 1
        prev = None
        for _ in range(rounds):
            vals, refused = _circle_values(f, r, n, quad.jitter_tries, ctx)
            if refused > quad.max_refused_fraction * n:
                raise QuadratureError("%d of %d quadrature nodes refused" % (refused, n))
            logs = [None if v is None else log_plus(v) for v in vals]
            cur = _mean(logs)
            if prev is None:
                coarse = [logs[i] for i in range(0, n, 2)]
                est = abs(cur - _mean(coarse))
            else:
                est = abs(cur - prev)
            if quad.rule == ADAPTIVE and est < quad.adaptive_target:
                return cur, est
            prev = cur
            n *= 2
        return prev, est


def counting_n(poles, r):
    """N(r,f) = sum of mult * log(r/|rho|) over poles rho inside |z| < r.

    A pole at the origin is rejected: the identities implemented here assume
    the function is regular at 0.
    """
    r = mp.mpf(r)
    total = mp.mpf(0)
    for rho, mult in poles:
        rho = mp.mpc(rho)
        if rho == 0:
            raise DomainError("pole at the origin is unsupported")
        if abs(rho) < r:
            total += mult * mp.log(r / abs(rho))
    return total


def characteristic_t(f, poles, quad: CircleQuadrature,
                     ctx: PrecisionCtx = DEFAULT_CTX) -> NevanlinnaProfile:
    m, est = proximity_m(f, quad, ctx)
    n = counting_n(poles, quad.radius)
    return NevanlinnaProfile(mp.mpf(quad.radius), m, n, m + n, est)


# ---------------------------------------------------------------------------
# Jensen and the logarithmic derivative
# ---------------------------------------------------------------------------

def _winding_number(vals):
    total = mp.mpf(0)
    prev = None
    for v in vals:
        if v is None or v == 0:
            return None
        a = mp.arg(v)
        if prev is not None:
            d = a - prev
            while d > mp.pi:
                d -= 2 * mp.pi
            while d < -mp.pi:
                d += 2 * mp.pi
            total += d
        prev = a
    a0 = mp.arg(next(v for v in vals if v is not None))
    d = a0 - prev
    while d > mp.pi:
        d -= 2 * mp.pi
    while d < -mp.pi:
        d += 2 * mp.pi
    total += d
    return total / (2 * mp.pi)


def jensen_check(f, zeros, poles, r, ctx: PrecisionCtx = DEFAULT_CTX,
                 nodes: int = 512, c0=None):
    """|T(r,f) - T(r,1/f) - log|c(f,0)||, which vanishes analytically.

    zeros and poles are lists of (point, multiplicity) describing f inside
    the disc of radius r; c0 defaults to f(0), valid when f has neither a
    zero nor a pole at the origin.  The zero/pole data is cross-checked
    against the argument-principle winding of f along the circle.
    """
    with ctx.working():
        r = mp.mpf(r)
        vals, refused = _circle_values(f, r, nodes, 3, ctx)
        if refused > 0.01 * nodes:
            raise QuadratureError("too many refused nodes")
        mf = _mean([None if v is None else log_plus(v) for v in vals])
        minv = _mean([None if v is None else log_plus(1 / v) for v in vals])
        vals2, _ = _circle_values(f, r, 2 * nodes, 3, ctx)
        mf2 = _mean([None if v is None else log_plus(v) for v in vals2])
        minv2 = _mean([None if v is None else log_plus(1 / v) for v in vals2])
        quad_err = abs(mf - mf2) + abs(minv - minv2)
        zcount = sum(m for _, m in zeros)
        pcount = sum(m for _, m in poles)
        wind = _winding_number(vals2)
        if wind is not None and abs(wind - (zcount - pcount)) > 0.25:
            raise DomainError(
                "argument principle mismatch: winding %s vs supplied %d"
                % (mp.nstr(wind, 5), zcount - pcount))
        if c0 is None:
            c0 = f(mp.mpc(0))
        t_f = mf2 + counting_n(poles, r)
        t_inv = minv2 + counting_n(zeros, r)
        residual = abs(t_f - t_inv - mp.log(abs(c0)))
        return residual, quad_err


def first_main_theorem_gap(f, zeros_of_f_minus_a, poles, a, r,
                           ctx: PrecisionCtx = DEFAULT_CTX, nodes: int = 512):
    """|T(r,f) - T(r,1/(f-a)) - log|c(f,a)||, bounded by log+|a| + log 2."""
    with ctx.working():
        r = mp.mpf(r)
        quad = CircleQuadrature(r, nodes)
        m_f, e1 = proximity_m(f, quad, ctx)
        m_shift, e2 = proximity_m(lambda z: 1 / (f(z) - a), quad, ctx)
        t_f = m_f + counting_n(poles, r)
        t_shift = m_shift + counting_n(zeros_of_f_minus_a, r)
        c = f(mp.mpc(0)) - a
        gap = abs(t_f - t_shift - mp.log(abs(c)))
        return gap, e1 + e2


def derivative_richardson(f, z, ctx: PrecisionCtx = DEFAULT_CTX):
    """f'(z) by Richardson-extrapolated central differences at step
    2^(-bits/4)."""
    with ctx.working():
        h = mp.mpf(2) ** (-(ctx.bits // 4))
        d1 = (f(z + h) - f(z - h)) / (2 * h)
        d2 = (f(z + h / 2) - f(z - h / 2)) / h
        return (4 * d2 - d1) / 3


def logderiv_bound_check(g, r, R, ctx: PrecisionCtx = DEFAULT_CTX,
                         nodes: int = 256):
    """Check m(r, g'/g) against the explicit logarithmic-derivative bound
    log+{ m(R,g)/r * R/(R-r) } + log 2 + 1/e for a nonvanishing holomorphic
    g with g(0) = 1.  Returns (lhs, rhs)."""
    with ctx.working():
        r, R = mp.mpf(r), mp.mpf(R)
        if not 0 < r < R < 1:
            raise DomainError("need 0 < r < R < 1")

        def logderiv(z):
            gz = g(z)
            if gz == 0:
                raise DomainError("g vanishes on a quadrature node")
            return derivative_richardson(g, z, ctx) / gz

        lhs, _ = proximity_m(logderiv, CircleQuadrature(r, nodes), ctx)
        m_R, _ = proximity_m(g, CircleQuadrature(R, nodes), ctx)
        rhs = log_plus(m_R / r * R / (R - r)) + mp.log(2) + mp.exp(-1)
        return lhs, rhs


# ---------------------------------------------------------------------------
# growth tables for the covering map
# ---------------------------------------------------------------------------

P_CHOICES = ("x^N", "x^N/(x^N-1)", "1/(x^N-1)")


@dataclass
class GrowthRow:
    N: int
    r: object
    p_choice: str
    m_value: object
    ratio: object
    est_err: object


def sector_profile(N: int, r, ctx: PrecisionCtx, base_nodes: int = 64,
                   max_refused_fraction: float = 0.01):
    """Mesh data on the arc [0, pi/N] at radius r: sorted list of
    (theta, log|F^N|, log|F^N - 1|, coarse_flag)."""
    with ctx.working():
        r = mp.mpf(r)
        arc = mp.pi / N
        h = arc / base_nodes
        levels = max(2, int(mp.ceil(mp.log(h / (1 - r), 2))) + 2)
        mesh = {}
        for i in range(base_nodes + 1):
            mesh[i * h] = (i % 2 == 0)
        for lev in range(1, levels + 1):
            mesh[h / 2 ** lev] = (lev % 2 == 0)
            mesh[arc - h / 2 ** lev] = (lev % 2 == 0)
        thetas = sorted(mesh)
        out = []
        refused = 0
        seed = None
        for theta in thetas:
            try:
                rep = f_n_eval(N, r * mp.exp(1j * theta), ctx, seed=seed)
            except CuspRefusal:
                refused += 1
                continue
            seed = (rep.domain_point,
                    rep.value / mp.exp(2j * mp.pi * rep.rotation / N))
            wv = rep.f_pow_n
            om = rep.one_minus_f_pow_n
            lw = mp.log(abs(wv)) if wv != 0 else mp.mpf("-inf")
            lo = mp.log(abs(om)) if om != 0 else mp.mpf("-inf")
            out.append((theta, lw, lo, mesh[theta]))
        if refused > max_refused_fraction * len(thetas):
            raise QuadratureError("%d refused nodes in sector scan" % refused)
        return out


def _sector_trapezoid(samples, pick, coarse=False):
    """Circle average of a 2pi/N-periodic, reflection-even integrand given
    on one arc [0, pi/N]: equal to the plain average over the arc."""
    pts = [(t, pick(row)) for row in samples
           for t in [row[0]]
           if (not coarse) or row[3]]
    total = mp.mpf(0)
    for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
        total += (t1 - t0) * (v0 + v1) / 2
    arc = pts[-1][0] - pts[0][0]
    return total / arc


def growth_m_values(N: int, r, ctx: PrecisionCtx = DEFAULT_CTX,
                    base_nodes: int = 64):
    """m(r, p(F)) for the three partial-fraction choices of p, with error
    estimates; one covering scan serves all three."""
    samples = sector_profile(N, r, ctx, base_nodes)
    with ctx.working():
        results = {}
        zero = mp.mpf(0)
        integrands = {
            "x^N": lambda row: max(zero, row[1]),
            "x^N/(x^N-1)": lambda row: max(zero, row[1] - row[2]),
            "1/(x^N-1)": lambda row: max(zero, -row[2]),
        }
        for name, pick in integrands.items():
            fine = _sector_trapezoid(samples, pick)
            coarse = _sector_trapezoid(samples, pick, coarse=True)
            results[name] = (fine, abs(fine - coarse))
        return results


def growth_table(N_values, r_values, ctx: PrecisionCtx = DEFAULT_CTX,
                 nodes: int = 2048, jobs: int = 1):
    """Rows (N, r, p_choice, m_value, ratio, est_err); a quadrature failure
    leaves the affected row with empty values rather than a made-up one."""
    tasks = [(N, mp.mpf(r)) for N in N_values for r in r_values]
    rows = []
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = [ex.submit(_growth_worker, N, str(r), ctx.bits, nodes)
                       for N, r in tasks]
            partial = [f.result() for f in futures]
        for chunk in partial:
            rows.extend(_growth_rows_from_worker(chunk))
        return rows
    for N, r in tasks:
        rows.extend(_growth_rows_from_worker(
            _growth_worker(N, str(r), ctx.bits, nodes)))
    return rows


def _growth_worker(N, r_str, bits, nodes):
    ctx = PrecisionCtx(bits)
    with ctx.working():
        r = mp.mpf(r_str)
        base = max(16, nodes // (2 * N))
        denom = mp.log(N / (1 - r))
        try:
            mv = growth_m_values(N, r, ctx, base)
        except QuadratureError:
            return (N, r_str, None)
        out = []
        for p in P_CHOICES:
            m, est = mv[p]
            out.append((p, str(m), str(m / denom), str(est)))
        return (N, r_str, out)


def _growth_rows_from_worker(chunk):
    N, r_str, data = chunk
    r = mp.mpf(r_str)
    if data is None:
        return [GrowthRow(N, r, p, None, None, None) for p in P_CHOICES]
    return [GrowthRow(N, r, p, mp.mpf(m), mp.mpf(ratio), mp.mpf(est))
            for p, m, ratio, est in data]


def growth_table_csv(rows, stream=None):
    out = stream or io.StringIO()
    w = csv.writer(out)
    w.writerow(["N", "r", "p_choice", "m_value", "ratio", "est_err"])
    for row in rows:
        w.writerow([
            row.N,
            mp.nstr(row.r, 12),
            row.p_choice,
            "" if row.m_value is None else mp.nstr(row.m_value, 17),
            "" if row.ratio is None else mp.nstr(row.ratio, 17),
            "" if row.est_err is None else mp.nstr(row.est_err, 8),
        ])
    return out if stream else out.getvalue()


# ---------------------------------------------------------------------------
# discrepancy toolkit
# ---------------------------------------------------------------------------

def box_discrepancy(points):
    """Exact sup over circular arcs of |arc length - point fraction|,
    via a sorted-angle sweep."""
    if not points:
        raise DomainError("empty point list")
    d = len(points)
    us = sorted(float(mp.arg(mp.mpc(z)) / (2 * mp.pi)) % 1.0 for z in points)
    top = max((i + 1) / d - u for i, u in enumerate(us))
    bot = min(i / d - u for i, u in enumerate(us))
    return top - bot


def erdos_turan_bound(points, k_cap=None):
    """min over K of 3(1/(K+1) + sum_{k<=K} |power sum_k|/(k d))."""
    if not points:
        raise DomainError("empty point list")
    d = len(points)
    if k_cap is None:
        k_cap = 10 * d
    zs = [complex(mp.mpc(z)) for z in points]
    pw = list(zs)
    best = None
    acc = 0.0
    for k in range(1, k_cap + 1):
        if k > 1:
            pw = [p * z for p, z in zip(pw, zs)]
        acc += abs(sum(pw)) / (k * d)
        val = 3.0 * (1.0 / (k + 1) + acc)
        if best is None or val < best:
            best = val
    return best


def vandermonde_log(points):
    """sum_{i<j} log|z_i - z_j|; -inf when two points coincide."""
    zs = [complex(mp.mpc(z)) for z in points]
    total = 0.0
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            delta = abs(zs[i] - zs[j])
            if delta == 0.0:
                return float("-inf")
            total += math.log(delta)
    return total


def total_variation(g, refine: int = 4096):
    """Total variation of g on the circle by a fine partition sum."""
    prev = None
    first = None
    total = 0.0
    for i in range(refine):
        v = float(g(complex(mp.exp(2j * mp.pi * mp.mpf(i) / refine))))
        if first is None:
            first = v
        if prev is not None:
            total += abs(v - prev)
        prev = v
    total += abs(first - prev)
    return total


def koksma_defect(points, g, refine: int = 8192):
    """Koksma data for a bounded-variation g: the sampling defect
    |avg g(z_i) - int g|, the variation, the discrepancy, and the bound."""
    d = len(points)
    avg = sum(float(g(complex(mp.mpc(z)))) for z in points) / d
    integral = sum(float(g(complex(mp.exp(2j * mp.pi * mp.mpf(i) / refine))))
                   for i in range(refine)) / refine
    v = total_variation(g, refine // 2)
    disc = box_discrepancy(points)
    return {
        "defect": abs(avg - integral),
        "variation": v,
        "discrepancy": disc,
        "bound": v * disc,
    }


def discrepancy_suite(points, g=None):
    """Box discrepancy, Erdos-Turan bound, log Vandermonde, and (when a
    bounded-variation g is supplied) the Koksma defect data."""
    out = {
        "box_discrepancy": box_discrepancy(points),
        "erdos_turan_bound": erdos_turan_bound(points),
        "vandermonde_log": vandermonde_log(points),
    }
    if g is not None:
        out["koksma"] = koksma_defect(points, g)
    return out
