"""Arbitrary-precision special functions for the uniformization pipeline.

Values are mpmath numbers computed under a guarded working precision taken
from an explicit PrecisionCtx.  Gamma, digamma and zeta are delegated to
mpmath (Stirling with argument shifts, Euler-Maclaurin); the Gauss 2F1 is
implemented here with the direct series, the Pfaff transformation, and the
logarithmic connection formula for the (a,a;2a) family near z = 1, falling
back to mpmath's continuation elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp


class DomainError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision in bits plus the advertised absolute error target."""

    bits: int = 256
    guard: int = 48

    def __post_init__(self):
        if self.bits < 64:
            raise DomainError("precision must be at least 64 bits")

    @property
    def target_abs_err(self):
        with mp.workprec(64):
            return mp.mpf(2) ** (-self.bits)

    @property
    def prec(self):
        return self.bits + self.guard

    def working(self):
        return mp.workprec(self.prec)

    def doubled(self):
        return PrecisionCtx(2 * self.bits, self.guard)

    def to_mp(self, x):
        """Convert int/Fraction/float/str to an mpf at working precision."""
        with self.working():
            if isinstance(x, Fraction):
                return mp.mpf(x.numerator) / x.denominator
            return mp.mpf(x)

    def nstr(self, x, extra_digits=0):
        digits = int(self.bits * 0.30103) + extra_digits
        return mp.nstr(x, max(digits, 8))


DEFAULT_CTX = PrecisionCtx()


def _is_nonpositive_integer(x) -> bool:
    if isinstance(x, int):
        return x <= 0
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    x = mp.mpmathify(x)
    if mp.im(x) != 0:
        return False
    r = mp.re(x)
    return r <= 0 and r == mp.floor(r)


def _as_param(x):
    """Keep exact rationals exact; coerce everything else to mpmath."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return mp.mpmathify(x)


def _param_mp(x, ctx):
    if isinstance(x, Fraction):
        return ctx.to_mp(x)
    return x


# ---------------------------------------------------------------------------
# gamma family
# ---------------------------------------------------------------------------

def gamma(x, ctx: PrecisionCtx = DEFAULT_CTX):
    if _is_nonpositive_integer(x):
        raise DomainError("gamma pole at nonpositive integer %s" % (x,))
    with ctx.working():
        return mp.gamma(_to_number(x, ctx))


def digamma(x, ctx: PrecisionCtx = DEFAULT_CTX):
    if _is_nonpositive_integer(x):
        raise DomainError("digamma pole at nonpositive integer %s" % (x,))
    with ctx.working():
        return mp.digamma(_to_number(x, ctx))


def zeta_value(s: int, ctx: PrecisionCtx = DEFAULT_CTX):
    if not isinstance(s, int) or s < 2:
        raise DomainError("zeta_value requires an integer s >= 2")
    with ctx.working():
        return mp.zeta(s)


def _to_number(x, ctx):
    if isinstance(x, Fraction):
        return ctx.to_mp(x)
    return mp.mpmathify(x)


# ---------------------------------------------------------------------------
# Gauss 2F1
# ---------------------------------------------------------------------------

_SERIES_RADIUS = 0.72
_NEAR_ONE_RADIUS = 0.55
_MAX_TERMS = 100000


def hyp2f1(a, b, c, z, ctx: PrecisionCtx = DEFAULT_CTX):
    """2F1(a,b;c;z) on the cut plane C minus [1,oo), principal branch.

    Exact rational parameters (int or Fraction) enable the structured paths;
    the (a,a;2a) logarithmic formula is used near z = 1 for that family.
    """
    a, b, c = _as_param(a), _as_param(b), _as_param(c)
    if _is_nonpositive_integer(c):
        raise DomainError("2F1 parameter c is a nonpositive integer")
    with ctx.working():
        z = mp.mpmathify(z)
        if z == 0:
            return mp.mpc(1)
        if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
            return _series_2f1(a, b, c, z, ctx)
        if a == c:
            return mp.power(1 - z, -_param_mp(b, ctx))
        if b == c:
            return mp.power(1 - z, -_param_mp(a, ctx))
        if abs(z) <= _SERIES_RADIUS:
            return _series_2f1(a, b, c, z, ctx)
        w = z / (z - 1)
        if abs(w) <= _SERIES_RADIUS:
            return mp.power(1 - z, -_param_mp(a, ctx)) * _series_2f1(a, c - b, c, w, ctx)
        if _is_equal_pair_family(a, b, c) and abs(1 - z) <= _NEAR_ONE_RADIUS:
            return _log_formula_2f1(a, 1 - z, ctx)
        # remaining crescents: delegate to the library continuation
        return mp.hyp2f1(_param_mp(a, ctx), _param_mp(b, ctx), _param_mp(c, ctx), z)


def _is_equal_pair_family(a, b, c) -> bool:
    return (isinstance(a, Fraction) and isinstance(b, Fraction)
            and isinstance(c, Fraction) and a == b and c == 2 * a)


_RATIO_CACHE = {}


def _series_ratios(a, b, c, prec, n):
    """mpf table of the term ratios (a+k)(b+k)/((c+k)(k+1)), exact rational
    parameters only; extended on demand and cached per working precision."""
    key = (a, b, c, prec)
    tab = _RATIO_CACHE.get(key)
    if tab is None:
        tab = []
        _RATIO_CACHE[key] = tab
    if len(tab) < n:
        with mp.workprec(prec):
            for k in range(len(tab), n):
                r = (a + k) * (b + k) / ((c + k) * (k + 1))
                tab.append(mp.mpf(r.numerator) / r.denominator)
    return tab


def _series_2f1(a, b, c, z, ctx):
    tol = mp.mpf(2) ** (-(ctx.prec + 10))
    rational = (isinstance(a, Fraction) and isinstance(b, Fraction)
                and isinstance(c, Fraction))
    term = mp.mpc(1)
    total = mp.mpc(1)
    k = 0
    small = 0
    chunk = 128
    ratios = _series_ratios(a, b, c, ctx.prec, chunk) if rational else None
    am, bm, cm = (None, None, None) if rational else (
        _param_mp(a, ctx), _param_mp(b, ctx), _param_mp(c, ctx))
    while k < _MAX_TERMS:
        if rational:
            if k >= chunk:
                chunk *= 2
                ratios = _series_ratios(a, b, c, ctx.prec, chunk)
            term = term * ratios[k] * z
        else:
            term = term * (am + k) * (bm + k) / ((cm + k) * (k + 1)) * z
        total += term
        k += 1
        if abs(term) < tol * (1 + abs(total)):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise PrecisionError("2F1 series did not converge at z=%s" % z)


def _log_formula_2f1(a: Fraction, u, ctx):
    """2F1(a,a;2a;1-u) for |u| < 1 via the degenerate connection formula.

    2F1(a,a;2a;1-u) = Gamma(2a)/Gamma(a)^2 *
        sum_k ((a)_k/k!)^2 u^k (-log u + 2 psi(k+1) - 2 psi(k+a)).
    """
    if abs(u) > mp.mpf("0.8"):
        raise DomainError("logarithmic 2F1 formula needs |1-z| < 0.8")
    L = -mp.log(u)
    d = _log_d0(a, ctx.prec)
    t = mp.mpc(1)
    total = t * (L + d)
    tol = mp.mpf(2) ** (-(ctx.prec + 10))
    k = 0
    small = 0
    chunk = 128
    tab = _log_ratios(a, ctx.prec, chunk)
    while k < _MAX_TERMS:
        if k >= chunk:
            chunk *= 2
            tab = _log_ratios(a, ctx.prec, chunk)
        rk, dk = tab[k]
        t = t * rk * u
        d = d + dk
        k += 1
        term = t * (L + d)
        total += term
        if abs(term) < tol * (1 + abs(total)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    else:
        raise PrecisionError("logarithmic 2F1 series did not converge")
    return _log_prefactor(a, ctx.prec) * total


def _log_ratios(a: Fraction, prec, n):
    """Pairs (((a+k)/(k+1))^2, 2(1/(k+1) - 1/(a+k))) as mpf, cached."""
    key = ("log", a, prec)
    tab = _RATIO_CACHE.get(key)
    if tab is None:
        tab = []
        _RATIO_CACHE[key] = tab
    if len(tab) < n:
        with mp.workprec(prec):
            for k in range(len(tab), n):
                r = ((a + k) / (k + 1)) ** 2
                dlt = 2 * (Fraction(1, k + 1) - 1 / (a + k))
                tab.append((mp.mpf(r.numerator) / r.denominator,
                            mp.mpf(dlt.numerator) / dlt.denominator))
    return tab


@lru_cache(maxsize=None)
def _log_prefactor(a: Fraction, prec):
    with mp.workprec(prec):
        am = mp.mpf(a.numerator) / a.denominator
        return mp.gamma(2 * am) / mp.gamma(am) ** 2


@lru_cache(maxsize=None)
def _log_d0(a: Fraction, prec):
    with mp.workprec(prec):
        am = mp.mpf(a.numerator) / a.denominator
        return 2 * (-mp.euler - mp.digamma(am))


# ---------------------------------------------------------------------------
# the uniformization radius and its hypergeometric ratio
# ---------------------------------------------------------------------------

def _sn_params(N: int):
    up = Fraction(N + 1, 2 * N)
    dn = Fraction(N - 1, 2 * N)
    return up, dn


def s_n(z, N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """z^(1/N) * 2F1(up,up;2up;z) / 2F1(dn,dn;2dn;z) with principal root."""
    value, _ = _s_n_parts(z, N, ctx)
    return value


def _s_n_parts(z, N, ctx):
    if N < 2:
        raise DomainError("N must be at least 2")
    up, dn = _sn_params(N)
    with ctx.working():
        z = mp.mpmathify(z)
        if z == 0:
            return mp.mpc(0), mp.mpc(1)
        if mp.im(z) == 0 and mp.re(z) >= 1:
            raise DomainError("s_n is evaluated on the cut [1,oo)")
        num = hyp2f1(up, up, 2 * up, z, ctx)
        den = hyp2f1(dn, dn, 2 * dn, z, ctx)
        root = mp.exp(mp.log(z) / N)
        return root * num / den, den


def s_n_prime(z, N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """Derivative of s_n, from the Wronskian of its defining second order ODE.

    s_n'(z) = z^(1/N - 1) / (N (1-z) F(dn,dn;2dn;z)^2).
    """
    _, den = _s_n_parts(z, N, ctx)
    with ctx.working():
        z = mp.mpmathify(z)
        return mp.exp(mp.log(z) * (mp.mpf(1) / N - 1)) / (N * (1 - z) * den ** 2)


def s_n_near_one(Z, N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """s_n(1 - Z) with Z passed exactly, for use deep in the cusp regime
    where forming 1 - Z and recovering Z by subtraction would lose it.

    Returns (value, denominator_2f1) so the derivative comes for free.
    """
    if N < 2:
        raise DomainError("N must be at least 2")
    up, dn = _sn_params(N)
    with ctx.working():
        Z = mp.mpmathify(Z)
        num = _log_formula_2f1(up, Z, ctx)
        den = _log_formula_2f1(dn, Z, ctx)
        root = mp.exp(_log1p_exact(-Z) / N)
        return root * num / den, den


def s_n_prime_near_one(Z, N: int, den, ctx: PrecisionCtx = DEFAULT_CTX):
    """s_n'(1 - Z) given the denominator 2F1 from s_n_near_one.

    From the Wronskian form s'(w) = w^(1/N-1)/(N (1-w) F^2) at w = 1 - Z.
    """
    with ctx.working():
        Z = mp.mpmathify(Z)
        w_pow = mp.exp(_log1p_exact(-Z) * (mp.mpf(1) / N - 1))
        return w_pow / (N * Z * den ** 2)


def _log1p_exact(u):
    """log(1+u) accurate for u of tiny magnitude."""
    if abs(u) < mp.mpf(2) ** (-mp.mp.prec // 2):
        return u - u * u / 2
    return mp.log(1 + u)


def gamma_n(N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """Conformal radius of the disc cover of the plane minus the N-th roots of unity:
    16^(1/N) Gamma(1+1/2N)^2 Gamma(1-1/N) / (Gamma(1-1/2N)^2 Gamma(1+1/N))."""
    if N < 2:
        raise DomainError("N must be at least 2")
    return _gamma_n_cached(N, ctx.prec)


@lru_cache(maxsize=None)
def _gamma_n_cached(N: int, prec: int):
    with mp.workprec(prec):
        n = mp.mpf(N)
        return (16 ** (1 / n)
                * mp.gamma(1 + 1 / (2 * n)) ** 2 * mp.gamma(1 - 1 / n)
                / (mp.gamma(1 - 1 / (2 * n)) ** 2 * mp.gamma(1 + 1 / n)))


def gamma_n_asymptotic(N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """16^(1/N) (1 + zeta(3)/(2N^3) + 3 zeta(5)/(8 N^5)), the fifth-order truncation."""
    with ctx.working():
        n = mp.mpf(N)
        return 16 ** (1 / n) * (1 + mp.zeta(3) / (2 * n ** 3) + 3 * mp.zeta(5) / (8 * n ** 5))


def gamma_n_defect(N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """gamma_n minus its truncated asymptotic; positive and O(N^-6)."""
    with ctx.working():
        return gamma_n(N, ctx) - gamma_n_asymptotic(N, ctx)


def log_gamma_n_series(N: int, k_max: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """Truncation of log gamma_n = log(16)/N + sum_k c_k zeta(2k+1)/N^(2k+1),
    with c_k = (2^(2k)-1)/(2^(2k-1)(2k+1)); returns (value, next_term_bound)."""
    with ctx.working():
        n = mp.mpf(N)
        total = mp.log(16) / n
        for k in range(1, k_max + 1):
            c = Fraction(2 ** (2 * k) - 1, 2 ** (2 * k - 1) * (2 * k + 1))
            total += ctx.to_mp(c) * mp.zeta(2 * k + 1) / n ** (2 * k + 1)
        k = k_max + 1
        c = Fraction(2 ** (2 * k) - 1, 2 ** (2 * k - 1) * (2 * k + 1))
        nxt = ctx.to_mp(c) * mp.zeta(2 * k + 1) / n ** (2 * k + 1)
        # the tail is dominated by a geometric multiple of its first term
        return total, 2 * nxt


def psi_n(z, N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """gamma_n^-1 s_n(z^N), extended over the plane minus the N closed
    radial slits from the roots of unity to infinity.

    The value is pinned down by rotating z into the central sector
    |arg z| <= pi/N and applying the root-of-unity equivariance."""
    value, _ = psi_n_with_derivative(z, N, ctx)
    return value


def psi_n_with_derivative(z, N: int, ctx: PrecisionCtx = DEFAULT_CTX):
    if N < 2:
        raise DomainError("N must be at least 2")
    with ctx.working():
        z = mp.mpc(z)
        if z == 0:
            return mp.mpc(0), 1 / mp.mpc(gamma_n(N, ctx))
        k = int(mp.nint(mp.arg(z) * N / (2 * mp.pi)))
        zr = z * mp.exp(-2j * mp.pi * k / N)
        w = mp.exp(N * mp.log(zr))
        if mp.im(w) == 0 and mp.re(w) >= 1:
            raise DomainError("point lies on a slit ray of the inverse branch")
        g = gamma_n(N, ctx)
        (sval, den) = _s_n_parts(w, N, ctx)
        rot = mp.exp(2j * mp.pi * k / N)
        value = rot * sval / g
        sprime = mp.exp(mp.log(w) * (mp.mpf(1) / N - 1)) / (N * (1 - w) * den ** 2)
        dvalue = N * zr ** (N - 1) * sprime / g
        return value, dvalue
