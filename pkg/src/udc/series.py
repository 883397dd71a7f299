"""Exact truncated Puiseux series over Q.

A series is stored densely on the exponent grid k/ram for k = val .. trunc-1,
with Fraction coefficients.  Every series carries a nome tag recording which
exponential parameter the variable stands for; arithmetic between series with
different tags is refused.  All operations are pure and return new objects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class Nome(Enum):
    PI_I_TAU = "pi_i_tau"
    TWO_PI_I_TAU = "2pi_i_tau"
    FORMAL = "formal"


class SeriesError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer polynomial multiplication via Kronecker substitution
# ---------------------------------------------------------------------------

def _int_poly_mul(a: Sequence[int], b: Sequence[int], out_len: int) -> list[int]:
    """Multiply integer coefficient vectors, truncated to out_len terms.

    Coefficients are packed into two big integers (evaluation at 2**w) so the
    convolution is done by one CPython big-int multiply.  Negative entries are
    handled by a balanced digit recovery, which is exact as long as every
    convolution coefficient is < 2**(w-1) in magnitude.
    """
    if out_len <= 0:
        return []
    if not a or not b:
        return [0] * out_len
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * out_len
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    w = ((bits + 7) // 8) * 8
    width = w // 8

    def pack(v):
        pos = bytearray(width * len(v))
        neg = bytearray(width * len(v))
        for i, x in enumerate(v):
            if x > 0:
                pos[i * width:i * width + (x.bit_length() + 7) // 8] = x.to_bytes(
                    (x.bit_length() + 7) // 8, "little")
            elif x < 0:
                y = -x
                neg[i * width:i * width + (y.bit_length() + 7) // 8] = y.to_bytes(
                    (y.bit_length() + 7) // 8, "little")
        return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")

    prod = pack(a) * pack(b)
    n = min(out_len, len(a) + len(b) - 1)
    mask = (1 << w) - 1
    half = 1 << (w - 1)
    out = []
    for _ in range(n):
        d = prod & mask
        if d >= half:
            d -= 1 << w
        out.append(d)
        prod = (prod - d) >> w
    out.extend([0] * (out_len - len(out)))
    return out


def _frac_vec_mul(a: Sequence[Fraction], b: Sequence[Fraction], out_len: int) -> list[Fraction]:
    if out_len <= 0:
        return []
    da = math.lcm(*(x.denominator for x in a)) if a else 1
    db = math.lcm(*(x.denominator for x in b)) if b else 1
    ia = [int(x * da) for x in a]
    ib = [int(x * db) for x in b]
    c = _int_poly_mul(ia, ib, out_len)
    den = da * db
    return [Fraction(x, den) for x in c]


def _vec_add(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] += x
    return out


def _vec_inverse(u: Sequence[Fraction], out_len: int) -> list[Fraction]:
    """Series inverse of u with u[0] != 0, by Newton doubling."""
    if not u or u[0] == 0:
        raise SeriesError("series inverse requires a nonzero constant term")
    g = [Fraction(1, 1) / u[0]]
    m = 1
    while m < out_len:
        m = min(2 * m, out_len)
        ug = _frac_vec_mul(u[:m], g, m)
        # g <- g*(2 - u*g)
        t = [-x for x in ug]
        t[0] += 2
        g = _frac_vec_mul(g, t, m)
    return g[:out_len]


# ---------------------------------------------------------------------------
# Puiseux series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PuiseuxSeries:
    """Truncated series sum_{k=val}^{trunc-1} coeffs[k-val] * q^(k/ram)."""

    ram: int
    val: int
    coeffs: tuple
    trunc: int
    nome: Nome = Nome.FORMAL

    def __post_init__(self):
        if self.ram < 1:
            raise SeriesError("ram must be a positive integer")
        if len(self.coeffs) != self.trunc - self.val:
            raise SeriesError("coefficient window does not match val/trunc")

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_window(ram, val, coeffs, trunc, nome=Nome.FORMAL):
        coeffs = tuple(Fraction(c) for c in coeffs)
        s = PuiseuxSeries(ram, val, coeffs, trunc, nome)
        return s._normalize()

    @staticmethod
    def zero(trunc=1, ram=1, nome=Nome.FORMAL):
        return PuiseuxSeries(ram, trunc, (), trunc, nome)

    @staticmethod
    def one(order=10, nome=Nome.FORMAL):
        return PuiseuxSeries.from_window(1, 0, [1] + [0] * (order - 1), order, nome)

    @staticmethod
    def monomial(coeff, exponent, order, nome=Nome.FORMAL):
        """coeff * q^exponent known modulo q^(exponent + order)."""
        e = Fraction(exponent)
        ram = e.denominator
        val = e.numerator
        return PuiseuxSeries.from_window(
            ram, val, [coeff] + [0] * (order * ram - 1), val + order * ram, nome)

    # -- bookkeeping ---------------------------------------------------------

    def _normalize(self):
        """Strip leading zeros and reduce ram to the coarsest possible grid."""
        c = list(self.coeffs)
        v = self.val
        while c and c[0] == 0:
            c.pop(0)
            v += 1
        if not c:
            return PuiseuxSeries(1, 0, (), 0, self.nome) if False else \
                PuiseuxSeries(self.ram, self.trunc, (), self.trunc, self.nome)
        g = math.gcd(self.ram, v)
        for i, x in enumerate(c):
            if x != 0:
                g = math.gcd(g, i)
                if g == 1:
                    break
        g = math.gcd(g, self.trunc - v) if g > 1 else 1
        if g > 1:
            c = c[::g]
            return PuiseuxSeries(self.ram // g, v // g, tuple(c),
                                 v // g + len(c), self.nome)
        return PuiseuxSeries(self.ram, v, tuple(c), self.trunc, self.nome)

    @property
    def is_zero(self):
        return not self.coeffs

    def coeff(self, exponent) -> Fraction:
        """Coefficient of q^exponent; raises if beyond the truncation order."""
        e = Fraction(exponent)
        k = e * self.ram
        if k.denominator != 1:
            if e >= Fraction(self.trunc, self.ram):
                raise SeriesError("exponent beyond truncation order")
            return Fraction(0)
        k = int(k)
        if k >= self.trunc:
            raise SeriesError("exponent beyond truncation order")
        if k < self.val:
            return Fraction(0)
        return self.coeffs[k - self.val]

    def coefficients(self):
        """Pairs (exponent, coefficient) for the stored window."""
        return [(Fraction(self.val + i, self.ram), c) for i, c in enumerate(self.coeffs)]

    @property
    def valuation(self) -> Fraction:
        if self.is_zero:
            raise SeriesError("zero series has no valuation")
        return Fraction(self.val, self.ram)

    @property
    def order(self) -> Fraction:
        """The series is known modulo q^order."""
        return Fraction(self.trunc, self.ram)

    def leading_coefficient(self) -> Fraction:
        if self.is_zero:
            raise SeriesError("zero series has no leading coefficient")
        return self.coeffs[0]

    def _with_ram(self, ram):
        if ram == self.ram:
            return self
        if ram % self.ram:
            raise SeriesError("ram inflation must be by an integer factor")
        f = ram // self.ram
        c = [Fraction(0)] * (len(self.coeffs) * f)
        for i, x in enumerate(self.coeffs):
            c[i * f] = x
        return PuiseuxSeries(ram, self.val * f, tuple(c), self.trunc * f, self.nome)

    def _require_same_nome(self, other):
        if self.nome is not other.nome:
            raise SeriesError("nome tags differ: %s vs %s" % (self.nome, other.nome))

    def pad_to(self, order) -> "PuiseuxSeries":
        """Declare the series known modulo q^order by appending zeros.

        Only correct when the series really is exact to that order, e.g. for
        polynomials; arithmetic never calls this implicitly.
        """
        return _pad(self, order, self.nome)

    def truncate(self, order) -> "PuiseuxSeries":
        """Restrict knowledge to q^order."""
        t = Fraction(order) * self.ram
        if t.denominator != 1:
            raise SeriesError("truncation order not on the exponent grid")
        t = min(int(t), self.trunc)
        if t <= self.val:
            return PuiseuxSeries(self.ram, t, (), t, self.nome)
        return PuiseuxSeries(self.ram, self.val, self.coeffs[:t - self.val], t,
                             self.nome)._normalize()

    # -- ring operations -----------------------------------------------------

    def __neg__(self):
        return PuiseuxSeries(self.ram, self.val, tuple(-c for c in self.coeffs),
                             self.trunc, self.nome)

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.monomial(Fraction(other), 0,
                                           max(1, self.trunc), self.nome)
            other = other.truncate(self.order)
        self._require_same_nome(other)
        ram = math.lcm(self.ram, other.ram)
        a, b = self._with_ram(ram), other._with_ram(ram)
        trunc = min(a.trunc, b.trunc)
        val = min(a.val if not a.is_zero else trunc, b.val if not b.is_zero else trunc)
        n = trunc - val
        out = [Fraction(0)] * n
        for s in (a, b):
            for i, c in enumerate(s.coeffs):
                k = s.val + i - val
                if 0 <= k < n:
                    out[k] += c
        return PuiseuxSeries(ram, val, tuple(out), trunc, self.nome)._normalize()

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self.__add__(-other)
        return self.__add__(-Fraction(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def scale(self, factor) -> "PuiseuxSeries":
        f = Fraction(factor)
        if f == 0:
            return PuiseuxSeries(self.ram, self.trunc, (), self.trunc, self.nome)
        return PuiseuxSeries(self.ram, self.val, tuple(f * c for c in self.coeffs),
                             self.trunc, self.nome)

    def shift(self, exponent) -> "PuiseuxSeries":
        """Multiply by q^exponent."""
        e = Fraction(exponent)
        ram = math.lcm(self.ram, e.denominator)
        s = self._with_ram(ram)
        k = int(e * ram)
        return PuiseuxSeries(ram, s.val + k, s.coeffs, s.trunc + k, self.nome)._normalize()

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        self._require_same_nome(other)
        if self.is_zero or other.is_zero:
            a, b = self, other
            ram = math.lcm(a.ram, b.ram)
            ta = Fraction(a.trunc, a.ram) + (Fraction(b.val, b.ram) if not b.is_zero else 0)
            tb = Fraction(b.trunc, b.ram) + (Fraction(a.val, a.ram) if not a.is_zero else 0)
            t = int(min(ta, tb) * ram)
            return PuiseuxSeries(ram, t, (), t, self.nome)
        ram = math.lcm(self.ram, other.ram)
        a, b = self._with_ram(ram), other._with_ram(ram)
        val = a.val + b.val
        trunc = min(a.trunc + b.val, b.trunc + a.val)
        out = _frac_vec_mul(a.coeffs, b.coeffs, trunc - val)
        return PuiseuxSeries(ram, val, tuple(out), trunc, self.nome)._normalize()

    def __rmul__(self, other):
        return self.scale(other)

    def inverse(self) -> "PuiseuxSeries":
        if self.is_zero:
            raise SeriesError("division by a series that is zero to its truncation order")
        n = self.trunc - self.val
        inv = _vec_inverse(self.coeffs, n)
        return PuiseuxSeries(self.ram, -self.val, tuple(inv), -self.val + n,
                             self.nome)._normalize()

    def __truediv__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self.scale(Fraction(1) / Fraction(other))
        return self * other.inverse()

    def pow_int(self, k: int) -> "PuiseuxSeries":
        if k == 0:
            n = self.trunc - self.val if not self.is_zero else max(self.trunc, 1)
            n = max(n, 1)
            return PuiseuxSeries.from_window(1, 0, [1] + [0] * (n - 1), n, self.nome)
        if k < 0:
            return self.inverse().pow_int(-k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __pow__(self, k):
        return self.pow_int(k)

    # -- roots ---------------------------------------------------------------

    def nth_root(self, n: int) -> "PuiseuxSeries":
        """Principal n-th root; requires leading coefficient exactly 1."""
        if n < 1:
            raise SeriesError("root index must be a positive integer")
        if n == 1:
            return self
        if self.is_zero:
            raise SeriesError("cannot take a root of the zero series")
        if self.leading_coefficient() != 1:
            raise SeriesError("nth_root requires leading coefficient 1; normalize first")
        g = math.gcd(n, self.val)
        ram = self.ram * (n // g)
        s = self._with_ram(ram)
        assert s.val % n == 0
        m = s.trunc - s.val
        u = list(s.coeffs)  # 1 + higher order terms
        # Newton doubling for r = u^(1/n):  r <- r + r*((u * r^-n) - 1)/n
        r = [Fraction(1)]
        cur = 1
        while cur < m:
            cur = min(2 * cur, m)
            rn = [Fraction(1)]
            t = r[:cur]
            k = n
            acc = None
            base = t
            while k:
                if k & 1:
                    acc = base if acc is None else _frac_vec_mul(acc, base, cur)
                k >>= 1
                if k:
                    base = _frac_vec_mul(base, base, cur)
            rn = acc
            e = _frac_vec_mul(u[:cur], _vec_inverse(rn, cur), cur)
            e[0] -= 1
            corr = _frac_vec_mul(r[:cur], e, cur)
            r = _vec_add(r[:cur], [c / n for c in corr])
        return PuiseuxSeries(ram, s.val // n, tuple(r[:m]), s.val // n + m,
                             self.nome)._normalize()

    def sqrt(self):
        return self.nth_root(2)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        return {
            "ram": self.ram,
            "val": self.val,
            "trunc": self.trunc,
            "nome": self.nome.value,
            "coeffs": [str(c) for c in self.coeffs],
        }

    def to_json(self):
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json(text):
        d = json.loads(text) if isinstance(text, str) else text
        return PuiseuxSeries(d["ram"], d["val"],
                             tuple(Fraction(c) for c in d["coeffs"]),
                             d["trunc"], Nome(d["nome"]))

    def __repr__(self):
        head = ", ".join("%s*q^(%d/%d)" % (c, self.val + i, self.ram)
                         for i, c in enumerate(self.coeffs[:4]))
        more = ", ..." if len(self.coeffs) > 4 else ""
        return "PuiseuxSeries(%s%s mod q^(%d/%d), nome=%s)" % (
            head, more, self.trunc, self.ram, self.nome.name)


# ---------------------------------------------------------------------------
# composition and reversion
# ---------------------------------------------------------------------------

def compose(f: PuiseuxSeries, g: PuiseuxSeries) -> PuiseuxSeries:
    """f(g) for f on an integer exponent grid and g of positive valuation."""
    if f.ram != 1 or f.val < 0:
        raise SeriesError("compose requires f with nonnegative integer exponents")
    if g.is_zero:
        vg = g.trunc  # g = O(q^trunc)
        if vg <= 0:
            raise SeriesError("compose requires g with positive valuation")
        return PuiseuxSeries.from_window(1, 0, [f.coeff(0)], 1, g.nome) \
            if f.trunc > 0 else PuiseuxSeries.zero(1, 1, g.nome)
    if g.valuation <= 0:
        raise SeriesError("compose requires g with positive valuation")

    fv = [Fraction(0)] * f.trunc
    for i, c in enumerate(f.coeffs):
        fv[f.val + i] = c
    ram, vg, tg = g.ram, g.val, g.trunc
    out_trunc = min(f.trunc * vg, tg)
    n = out_trunc  # result window is exponents 0 .. out_trunc-1 on grid 1/ram
    gz = [Fraction(0)] * min(tg, n)
    for i, c in enumerate(g.coeffs):
        if g.val + i < len(gz):
            gz[g.val + i] = c

    def vmul(a, b):
        return _frac_vec_mul(a, b, n)

    # Paterson-Stockmeyer blocks
    deg = len(fv)
    bs = max(1, math.isqrt(deg))
    powers = [[Fraction(1)]]
    for _ in range(bs):
        powers.append(vmul(powers[-1], gz))
    gbs = powers[bs]
    nblocks = (deg + bs - 1) // bs
    acc = None
    for j in range(nblocks - 1, -1, -1):
        block = [Fraction(0)] * n
        for i in range(bs):
            k = j * bs + i
            if k < deg and fv[k] != 0:
                p = powers[i]
                for idx, x in enumerate(p):
                    if idx < n and x != 0:
                        block[idx] += fv[k] * x
        if acc is None:
            acc = block
        else:
            acc = _vec_add(vmul(acc, gbs), block)
    return PuiseuxSeries.from_window(ram, 0, acc[:out_trunc], out_trunc, g.nome)


def derivative(f: PuiseuxSeries) -> PuiseuxSeries:
    """Formal derivative with respect to q (exponents drop by 1)."""
    c = [Fraction(f.val + i, f.ram) * x for i, x in enumerate(f.coeffs)]
    return PuiseuxSeries(f.ram, f.val - f.ram, tuple(c), f.trunc - f.ram,
                         f.nome)._normalize()


def revert(f: PuiseuxSeries) -> PuiseuxSeries:
    """Compositional inverse of f = t + O(t^2), exact, by Newton doubling.

    Each Newton step g <- g - (f(g) - t)/(f'(g)) doubles the number of correct
    coefficients; f'(g) is recovered as (f(g))'/g' to save a composition.
    """
    if f.ram != 1 or f.is_zero or f.val != 1 or f.leading_coefficient() != 1:
        raise SeriesError("revert requires a series of the form t + O(t^2)")
    n = f.trunc
    g = PuiseuxSeries.from_window(1, 1, [1], 2, f.nome)
    t = PuiseuxSeries.from_window(1, 1, [1] + [0] * (n - 2), n, f.nome)
    cur = 2
    while cur < n:
        cur = min(2 * cur, n)
        gpad = _pad(g, cur, f.nome)
        fg = compose(f.truncate(cur), gpad)
        err = fg - t.truncate(cur)
        if err.is_zero:
            g = gpad
            continue
        dfg = derivative(fg) / derivative(gpad)
        g = (gpad - err / dfg).truncate(cur)
        g = _pad(g, cur, f.nome)
    return g.truncate(n)


def _pad(s: PuiseuxSeries, order, nome) -> PuiseuxSeries:
    """Extend the declared truncation window with zero coefficients."""
    t = int(Fraction(order) * s.ram)
    if s.is_zero:
        return PuiseuxSeries(s.ram, t, (), t, nome)
    if t <= s.trunc:
        return s
    return PuiseuxSeries(s.ram, s.val,
                         s.coeffs + (Fraction(0),) * (t - s.trunc), t, nome)


# ---------------------------------------------------------------------------
# denominator growth
# ---------------------------------------------------------------------------

@dataclass
class DenominatorProfile:
    """Cumulative LCM of coefficient denominators, in exponent order."""

    exponents: list
    lcms: list
    prime_valuations: dict = field(default_factory=dict)

    def bounded_upto(self, order) -> bool:
        """True if the cumulative LCM has stabilized strictly before order."""
        e = Fraction(order)
        last = None
        stable_from = None
        for x, l in zip(self.exponents, self.lcms):
            if x >= e:
                break
            if l != last:
                last = l
                stable_from = x
        if last is None:
            return True
        # bounded means the final LCM was already attained well before the end
        tail = [l for x, l in zip(self.exponents, self.lcms) if x < e]
        return len(tail) >= 2 and tail[-1] == tail[max(0, len(tail) - len(tail) // 4 - 1)]

    @property
    def final_lcm(self):
        return self.lcms[-1] if self.lcms else 1

    def is_integral(self) -> bool:
        return self.final_lcm == 1


def denominator_profile(f: PuiseuxSeries, primes: Iterable[int] = ()) -> DenominatorProfile:
    exps, lcms = [], []
    acc = 1
    tracks = {p: [] for p in primes}
    mins = {p: 0 for p in primes}
    for (e, c) in f.coefficients():
        acc = math.lcm(acc, c.denominator)
        exps.append(e)
        lcms.append(acc)
        for p in tracks:
            v = _padic_valuation(c, p)
            if v is not None:
                mins[p] = min(mins[p], v)
            tracks[p].append(mins[p])
    return DenominatorProfile(exps, lcms, tracks)


def _padic_valuation(c: Fraction, p: int):
    if c == 0:
        return None
    v = 0
    n = c.numerator
    while n % p == 0:
        n //= p
        v += 1
    if v:
        return v
    d = c.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# classical expansions
# ---------------------------------------------------------------------------

def eta_expansion(scale, order: int, nome: Nome = Nome.PI_I_TAU) -> PuiseuxSeries:
    """Expansion of eta(scale * tau) to the given q-order in the declared nome."""
    m = Fraction(scale)
    if order < 1:
        raise SeriesError("order must be >= 1")
    if m <= 0:
        raise SeriesError("scale must be positive")
    if nome is Nome.PI_I_TAU:
        prefactor = m / 12
        step = 2 * m
    elif nome is Nome.TWO_PI_I_TAU:
        prefactor = m / 24
        step = m
    else:
        raise SeriesError("eta expansion needs a modular nome tag")
    ram = math.lcm(prefactor.denominator, step.denominator)
    prod = _eta_product_int(int(step * ram), 1, order * ram)
    s = PuiseuxSeries.from_window(ram, 0, prod, order * ram, nome)
    return s.shift(prefactor)


def _eta_product_int(step: int, power: int, n: int) -> list[Fraction]:
    """prod_{k>=1} (1 - x^(step*k))^power as a length-n coefficient list."""
    base = [1] + [0] * (n - 1)
    k = 1
    while step * k < n:
        e = step * k
        for i in range(n - 1 - e, -1, -1):
            if base[i]:
                base[i + e] -= base[i]
        k += 1
    out = [Fraction(x) for x in base]
    if power == 1:
        return out
    acc = None
    b = out
    p = power
    while p:
        if p & 1:
            acc = b if acc is None else _frac_vec_mul(acc, b, n)
        p >>= 1
        if p:
            b = _frac_vec_mul(b, b, n)
    return acc


@lru_cache(maxsize=8)
def lambda_over_16(order: int) -> PuiseuxSeries:
    """lambda(tau)/16 = q - 8q^2 + ... in the nome q = exp(pi i tau).

    Assembled as q * prod(1-q^n)^8 (1-q^4n)^16 (1-q^2n)^-24, which is the
    eighth power of the eta quotient eta(tau/2) eta(2tau)^2 / eta(tau)^3
    with all fractional exponent prefactors cancelled in advance.
    """
    if order < 1:
        raise SeriesError("order must be >= 1")
    n = order
    p1 = _eta_product_int(1, 8, n)
    p2 = _eta_product_int(4, 16, n)
    p3 = _vec_inverse(_eta_product_int(2, 24, n), n)
    prod = _frac_vec_mul(_frac_vec_mul(p1, p2, n), p3, n)
    return PuiseuxSeries.from_window(1, 1, prod[:n], n + 1, Nome.PI_I_TAU)


def lambda_over_16_eta_assembly(order: int) -> PuiseuxSeries:
    """Same series assembled literally from eta_expansion calls (slower)."""
    e_half = eta_expansion(Fraction(1, 2), order + 1)
    e_two = eta_expansion(2, order + 1)
    e_one = eta_expansion(1, order + 1)
    quotient = e_half * e_two * e_two / (e_one * e_one * e_one)
    return quotient.pow_int(8).truncate(order + 1)


@lru_cache(maxsize=8)
def lambda_over_16_reverted(order: int) -> PuiseuxSeries:
    """Compositional inverse of lambda/16, cached."""
    return _lambda_reverted_cached(order)


@lru_cache(maxsize=4)
def _lambda_reverted_cached(order: int) -> PuiseuxSeries:
    return revert(lambda_over_16(order))


def h_series(order: int) -> PuiseuxSeries:
    """h = lambda(1-lambda)/16 in the nome q = exp(pi i tau)."""
    x = lambda_over_16(order)
    lam = x.scale(16)
    return (x * (PuiseuxSeries.one(order + 1, Nome.PI_I_TAU) - lam)).truncate(order + 1)


def h_series_eta_assembly(order: int) -> PuiseuxSeries:
    """h as the 24th power of eta(tau/2) eta(2tau) / eta(tau)^2."""
    n = order
    p1 = _eta_product_int(1, 24, n)
    p2 = _eta_product_int(4, 24, n)
    p3 = _vec_inverse(_eta_product_int(2, 48, n), n)
    prod = _frac_vec_mul(_frac_vec_mul(p1, p2, n), p3, n)
    return PuiseuxSeries.from_window(1, 1, prod[:n], n + 1, Nome.PI_I_TAU)


@lru_cache(maxsize=8)
def j_cube_root(order: int) -> PuiseuxSeries:
    """j(tau)^(1/3) = q^(-1/3)(1 + 248q + ...) in the nome q = exp(2 pi i tau)."""
    if order < 1:
        raise SeriesError("order must be >= 1")
    n = order
    sig = _sigma3_table(n)
    e4 = [Fraction(1)] + [Fraction(240 * sig[k]) for k in range(1, n)]
    etapow = _eta_product_int(1, 8, n)
    body = _frac_vec_mul(e4, _vec_inverse(etapow, n), n)
    s = PuiseuxSeries.from_window(1, 0, body, n, Nome.TWO_PI_I_TAU)
    return s.shift(Fraction(-1, 3))


def _sigma3_table(n: int) -> list[int]:
    sig = [0] * n
    for d in range(1, n):
        cube = d * d * d
        for m in range(d, n, d):
            sig[m] += cube
    return sig


def hypergeometric_coefficients(a, b, c, order: int) -> list[Fraction]:
    """Taylor coefficients of 2F1(a,b;c;z), exact rationals."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    out = [Fraction(1)]
    t = Fraction(1)
    for k in range(order - 1):
        t *= (a + k) * (b + k)
        t /= (c + k) * (k + 1)
        out.append(t)
    return out


def hypergeometric_series(a, b, c, order: int, nome=Nome.FORMAL) -> PuiseuxSeries:
    return PuiseuxSeries.from_window(1, 0, hypergeometric_coefficients(a, b, c, order),
                                     order, nome)


def elliptic_e_series(order: int) -> PuiseuxSeries:
    """(2/pi) E(lambda(q)) = 2F1(1/2,-1/2;1;lambda(q)) as a q-series."""
    f = hypergeometric_series(Fraction(1, 2), Fraction(-1, 2), 1, order + 1,
                              Nome.PI_I_TAU)
    lam = lambda_over_16(order).scale(16)
    return compose(f, lam)


def theta3_squared(order: int) -> PuiseuxSeries:
    """(sum_{n in Z} q^(n^2))^2 in the nome q = exp(pi i tau)."""
    n = order
    th = [Fraction(0)] * n
    th[0] = Fraction(1)
    k = 1
    while k * k < n:
        th[k * k] = Fraction(2)
        k += 1
    sq = _frac_vec_mul(th, th, n)
    return PuiseuxSeries.from_window(1, 0, sq, n, Nome.PI_I_TAU)


def catalan_square_series(order: int) -> PuiseuxSeries:
    """sum_n C_n^2 x^(n+1) with C_n the Catalan numbers."""
    out = []
    c = Fraction(1)
    for k in range(order):
        out.append(c * c)
        c = c * 2 * (2 * k + 1) / (k + 2)
    return PuiseuxSeries.from_window(1, 1, out, order + 1, Nome.FORMAL)


def binomial_power_series(exponent, scale, order: int) -> PuiseuxSeries:
    """(1 + scale*x)^exponent as an exact series in x."""
    e = Fraction(exponent)
    s = Fraction(scale)
    out = [Fraction(1)]
    t = Fraction(1)
    for k in range(order - 1):
        t *= (e - k) * s
        t /= k + 1
        out.append(t)
    return PuiseuxSeries.from_window(1, 0, out, order, Nome.FORMAL)
