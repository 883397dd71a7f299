"""The dimension-bound pipeline: numerator growth integral over the scaled
covering map against the logarithm of its derivative at the origin, compared
with the exact congruence dimension count; plus a desk-scale auxiliary
construction by exact linear algebra (a Siegel-lemma style kernel vector
with certified vanishing order).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .hyper import DEFAULT_CTX, DomainError, PrecisionCtx, gamma_n, zeta_value
from .nevan import QuadratureError, _sector_trapezoid, sector_profile
from .series import PuiseuxSeries
from .sl2 import index_gamma2_gammaN


@dataclass
class BoundReport:
    N: int
    r: object
    log_phi_prime: object
    m_value: object
    rhs: object
    lower: object
    est_err: object = None
    slack: object = None


def default_slack(ctx: PrecisionCtx = DEFAULT_CTX):
    """zeta(3)/4: half of the leading conformal-radius excess."""
    with ctx.working():
        return zeta_value(3, ctx) / 4


def feasible_slack_interval(N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """Open interval of slack values keeping log|phi'(0)| positive."""
    with ctx.working():
        g = gamma_n(N, ctx)
        upper = mp.mpf(N) ** 3 * (1 - 16 ** (mp.mpf(1) / N) / g)
        return (mp.mpf(0), upper)


def dimension_bound_rhs(N: int, slack=None, ctx: PrecisionCtx = DEFAULT_CTX,
                        nodes: int = 2048) -> BoundReport:
    """Evaluate e * m(1, p(phi)) / log|phi'(0)| with phi(z) = 16^(-1/N) F(rz),
    p(x) = x^N and r = 1 - slack/N^3.

    The numerator is the circle average of log+ |F^N/16| at radius r; the
    denominator is log gamma_N + log r - log(16)/N composed exactly.  The
    returned rhs is rounded up and the analytic lower bound rounded down, so
    the comparison direction never benefits from rounding."""
    if N < 2:
        raise DomainError("N must be at least 2")
    with ctx.working():
        slack = default_slack(ctx) if slack is None else mp.mpf(slack)
        r = 1 - slack / mp.mpf(N) ** 3
        if not 0 < r < 1:
            raise DomainError("slack out of range")
        g = gamma_n(N, ctx)
        log_phi = mp.log(g) + mp.log(r) - mp.log(16) / N
        if log_phi <= 0:
            lo, hi = feasible_slack_interval(N, ctx)
            raise DomainError(
                "slack %s infeasible: log|phi'(0)| <= 0; feasible interval "
                "(%s, %s)" % (mp.nstr(slack, 8), mp.nstr(lo, 4), mp.nstr(hi, 8)))
        base = max(16, nodes // (2 * N))
        samples = sector_profile(N, r, ctx, base)
        log16 = mp.log(16)
        zero = mp.mpf(0)
        pick = lambda row: max(zero, row[1] - log16)
        m_fine = _sector_trapezoid(samples, pick)
        m_coarse = _sector_trapezoid(samples, pick, coarse=True)
        est = abs(m_fine - m_coarse)
        eps = mp.mpf(2) ** -40
        rhs = mp.e * (m_fine + est) / log_phi * (1 + eps)
        lower = mp.mpf(N) ** 3 / (12 * zeta_value(2, ctx)) * (1 - eps)
        return BoundReport(N, r, log_phi, m_fine, rhs, lower, est, slack)


def congruence_lower_bound(N: int):
    """(exact congruence dimension, analytic lower bound) for even N.

    The exact dimension is half the matrix-group index, except at N = 2
    where the curve degree is 1."""
    rep = index_gamma2_gammaN(N)
    exact = 1 if N == 2 else rep.half_index
    if exact != int(exact):
        raise DomainError("index is not even; unexpected at level %d" % N)
    return int(exact), rep.bound_float


@dataclass
class GapRow:
    N: int
    slack: object
    log_phi_prime: object
    m_value: object
    rhs: object
    exact_dim: int
    ratio_to_n3logn: object


def gap_report(N_values, ctx: PrecisionCtx = DEFAULT_CTX, slack=None,
               nodes: int = 2048):
    rows = []
    for N in N_values:
        rep = dimension_bound_rhs(N, slack, ctx, nodes)
        exact, _ = congruence_lower_bound(N)
        with ctx.working():
            ratio = rep.rhs / (mp.mpf(N) ** 3 * mp.log(N))
        rows.append(GapRow(N, rep.slack, rep.log_phi_prime, rep.m_value,
                           rep.rhs, exact, ratio))
    return rows


def gap_report_csv(rows, stream=None):
    out = stream or io.StringIO()
    w = csv.writer(out)
    w.writerow(["N", "slack", "log_phi_prime", "m_value", "rhs",
                "exact_dim", "ratio_to_N3logN"])
    for row in rows:
        w.writerow([row.N, mp.nstr(row.slack, 17), mp.nstr(row.log_phi_prime, 17),
                    mp.nstr(row.m_value, 17), mp.nstr(row.rhs, 17),
                    row.exact_dim, mp.nstr(row.ratio_to_n3logn, 17)])
    return out if stream else out.getvalue()


# ---------------------------------------------------------------------------
# the auxiliary construction
# ---------------------------------------------------------------------------

@dataclass
class SiegelInstance:
    """Data for the kernel construction: F = sum a_(i,k) x^k f_i(x) in d
    variables, vanishing to order at least alpha at the origin."""

    functions: list          # PuiseuxSeries on an integer exponent grid
    d: int
    alpha: int
    kappa: Fraction = Fraction(1, 2)
    D: int = None

    def __post_init__(self):
        if self.d not in (1, 2):
            raise DomainError("only one or two variables are supported")
        if not 1 <= self.alpha <= 30:
            raise DomainError("vanishing order must be between 1 and 30")
        if not 0 < self.kappa < 1:
            raise DomainError("kappa must lie in (0,1)")
        m = len(self.functions)
        conditions = math.comb(self.alpha - 1 + self.d, self.d)
        if self.D is None:
            D = 1
            while (m * D) ** self.d <= (1 + 1 / self.kappa) * conditions:
                D += 1
            self.D = D
        if (len(self.functions) * self.D) ** self.d <= conditions:
            raise DomainError("degree bound too small for the condition count")

    @property
    def m(self):
        return len(self.functions)

    @property
    def conditions(self):
        """Number of vanishing conditions: monomials of total degree < alpha."""
        return math.comb(self.alpha - 1 + self.d, self.d)


@dataclass
class SiegelResult:
    instance: SiegelInstance
    coefficients: dict       # (i_vec, k_vec) -> integer
    ord0: int
    lowest_coefficient: Fraction
    max_abs_coefficient: int
    series: object           # d=1: list of Fractions; d=2: dict exponent->Fraction


def _function_coeff(f: PuiseuxSeries, j: int) -> Fraction:
    if f.ram != 1:
        raise DomainError("auxiliary functions must have integer exponents")
    if j < f.val or j >= f.trunc:
        if j >= f.trunc:
            raise DomainError("function series too short for the construction")
        return Fraction(0)
    return f.coeffs[j - f.val]


def _kernel_vector(rows, ncols):
    """One exact nonzero kernel vector of the given row system over Q."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = {}
    prow = 0
    for col in range(ncols):
        sel = None
        for i in range(prow, nrows):
            if mat[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        mat[prow], mat[sel] = mat[sel], mat[prow]
        pv = mat[prow][col]
        mat[prow] = [x / pv for x in mat[prow]]
        for i in range(nrows):
            if i != prow and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[prow])]
        pivots[col] = prow
        prow += 1
        if prow == nrows:
            break
    free = next((c for c in range(ncols) if c not in pivots), None)
    if free is None:
        return None
    v = [Fraction(0)] * ncols
    v[free] = Fraction(1)
    for col, row in pivots.items():
        v[col] = -mat[row][free]
    return v


def siegel_construct(inst: SiegelInstance) -> SiegelResult:
    """Exact nonzero integer combination F = sum a_(i,k) x^k f_i(x) with
    ord_0(F) >= alpha, by a rational kernel vector cleared to integers.

    Only the first (conditions + 1) monomial columns enter the linear
    system; a rank count guarantees a nonzero kernel vector there already.
    """
    m, d, alpha, D = inst.m, inst.d, inst.alpha, inst.D
    window = alpha + 2 * (D + m) + 4
    for f in inst.functions:
        if f.trunc < window:
            raise DomainError("supply function series to order at least %d"
                              % window)
    if d == 1:
        columns = [(i, k) for k in range(D) for i in range(m)]
        conds = [(j,) for j in range(alpha)]
    else:
        columns = [((i1, i2), (k1, k2))
                   for k1 in range(D) for k2 in range(D)
                   for i1 in range(m) for i2 in range(m)]
        conds = [(j1, j2) for j1 in range(alpha + 1)
                 for j2 in range(alpha + 1 - j1) if j1 + j2 < alpha]
    ncols = min(len(columns), len(conds) + 1)
    columns = columns[:ncols]

    def col_coeff(col, e):
        if d == 1:
            i, k = col
            return _function_coeff(inst.functions[i], e[0] - k) \
                if e[0] >= k else Fraction(0)
        (i1, i2), (k1, k2) = col
        if e[0] < k1 or e[1] < k2:
            return Fraction(0)
        return (_function_coeff(inst.functions[i1], e[0] - k1)
                * _function_coeff(inst.functions[i2], e[1] - k2))

    rows = [[col_coeff(col, e) for col in columns] for e in conds]
    v = _kernel_vector(rows, ncols)
    if v is None:
        raise DomainError("the vanishing system admits only the zero "
                          "solution at the declared degree bound")
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    coeffs = {col: a for col, a in zip(columns, ints) if a}

    # expand F far enough to certify the vanishing order and nonzeroness
    if d == 1:
        series = [Fraction(0)] * window
        for (i, k), a in coeffs.items():
            f = inst.functions[i]
            for j in range(k, window):
                series[j] += a * _function_coeff(f, j - k)
        ord0 = next((j for j, c in enumerate(series) if c), None)
        lowest = series[ord0] if ord0 is not None else None
    else:
        series = {}
        for ((i1, i2), (k1, k2)), a in coeffs.items():
            f1, f2 = inst.functions[i1], inst.functions[i2]
            for j1 in range(k1, window):
                c1 = _function_coeff(f1, j1 - k1)
                if c1 == 0:
                    continue
                for j2 in range(k2, window - j1):
                    c2 = _function_coeff(f2, j2 - k2)
                    if c2:
                        series[(j1, j2)] = series.get((j1, j2), Fraction(0)) \
                            + a * c1 * c2
        series = {e: c for e, c in series.items() if c}
        ord0 = min((e[0] + e[1] for e in series), default=None)
        if ord0 is not None:
            lows = [e for e in series if e[0] + e[1] == ord0]
            lowest = series[max(lows)]  # lexicographically extreme monomial
        else:
            lowest = None
    if ord0 is None:
        raise DomainError("combination vanished identically through the "
                          "inspection window; enlarge it")
    if ord0 < alpha:
        raise DomainError("kernel vector fails the vanishing order; bug")
    return SiegelResult(inst, coeffs, ord0, lowest, max(abs(x) for x in ints),
                        series)


def lexi_check(result: SiegelResult, rho, ctx: PrecisionCtx = DEFAULT_CTX,
               nodes: int = 256):
    """Check log|c rho^beta| <= mean of log|F| over the polycircle of radius
    rho, with c the lowest-order coefficient (Jensen when d = 1).

    Returns (lhs, rhs, quadrature error estimate)."""
    inst = result.instance
    with ctx.working():
        rho = mp.mpf(rho)

        if inst.d == 1:
            def F_at(z):
                x = rho * z
                total = mp.mpc(0)
                for j, c in enumerate(result.series):
                    if c:
                        total += ctx.to_mp(c) * x ** j
                return total

            def mean(n):
                vals = [mp.log(abs(F_at(mp.exp(2j * mp.pi * mp.mpf(i) / n))))
                        for i in range(n)]
                return mp.fsum(vals) / n

            fine, coarse = mean(nodes), mean(nodes // 2)
        else:
            def F_at(z1, z2):
                total = mp.mpc(0)
                for (e1, e2), c in result.series.items():
                    total += ctx.to_mp(c) * (rho * z1) ** e1 * (rho * z2) ** e2
                return total

            def mean(n):
                vals = []
                for i in range(n):
                    zi = mp.exp(2j * mp.pi * mp.mpf(i) / n)
                    for j in range(n):
                        zj = mp.exp(2j * mp.pi * mp.mpf(j) / n)
                        vals.append(mp.log(abs(F_at(zi, zj))))
                return mp.fsum(vals) / (n * n)

            fine, coarse = mean(nodes), mean(max(8, nodes // 2))
        lhs = mp.log(abs(ctx.to_mp(result.lowest_coefficient))) \
            + result.ord0 * mp.log(rho)
        return lhs, fine, abs(fine - coarse)
