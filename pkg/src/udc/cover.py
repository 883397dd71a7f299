"""Numerical evaluation of the based covering map of the plane minus the
N-th roots of unity.

The map F sends the unit disc onto C minus mu_N with F(0) = 0, F(1) = 1 and
|F'(0)| equal to the conformal radius from udc.hyper.  Evaluation reduces a
point into the ideal 2N-gon fundamental domain of the deck group (a free
group on N parabolics), then inverts the explicit local inverse psi by a
Newton iteration.  Near the two cusp classes of the domain the iteration is
replaced by a logarithmic parametrization and by the exact inversion
symmetry 1 - F^N(e^(i pi/N) x) = 1/(1 - F^N(x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .hyper import (
    DEFAULT_CTX,
    DomainError,
    PrecisionCtx,
    PrecisionError,
    digamma,
    gamma_n,
    psi_n_with_derivative,
    s_n_near_one,
    s_n_prime_near_one,
)
from .series import Nome, PuiseuxSeries, hypergeometric_series, revert

UPPER_HALF_PLANE = "upper_half_plane"
DISK = "disk"

REFUSE_CUSP_DIST = 1e-6


class CuspRefusal(DomainError):
    """Raised when an evaluation point is too close to a domain cusp."""


# ---------------------------------------------------------------------------
# real Moebius transformations
# ---------------------------------------------------------------------------

def _cayley_to_h(x):
    return 1j * (1 + x) / (1 - x)


def _cayley_to_disk(tau):
    return (tau - 1j) / (tau + 1j)


@dataclass(frozen=True)
class Moebius:
    """Real 2x2 determinant-one matrix acting on H, or on the disc through
    the Cayley transform when model == DISK."""

    a: object
    b: object
    c: object
    d: object
    model: str = UPPER_HALF_PLANE

    def det(self):
        return self.a * self.d - self.b * self.c

    def check(self, tolerance=None):
        t = tolerance if tolerance is not None else mp.mpf(2) ** (-mp.mp.prec + 12)
        if abs(self.det() - 1) > t:
            raise DomainError("matrix determinant differs from 1 beyond tolerance")
        return self

    def __matmul__(self, other):
        if self.model != other.model:
            raise DomainError("cannot compose transformations in different models")
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.model,
        )

    def inv(self):
        return Moebius(self.d, -self.b, -self.c, self.a, self.model)

    def pow(self, n: int):
        if n == 0:
            return Moebius(mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(1), self.model)
        g = self if n > 0 else self.inv()
        n = abs(n)
        out = None
        while n:
            if n & 1:
                out = g if out is None else out @ g
            n >>= 1
            if n:
                g = g @ g
        return out

    def apply(self, z):
        if self.model == UPPER_HALF_PLANE:
            return (self.a * z + self.b) / (self.c * z + self.d)
        tau = _cayley_to_h(z)
        tau = (self.a * tau + self.b) / (self.c * tau + self.d)
        return _cayley_to_disk(tau)

    def to_model(self, model: str):
        return Moebius(self.a, self.b, self.c, self.d, model)


@dataclass(frozen=True)
class Horoball:
    """Disc tangent internally to the unit circle."""

    tangency: object
    diameter: object

    def __post_init__(self):
        if not (0 < self.diameter <= 1):
            raise DomainError("horoball diameter must lie in (0, 1]")


def horoball_image(gamma: Moebius, D) -> Horoball:
    """Image in the disc model of the horoball {Im tau >= D} under gamma."""
    D = mp.mpf(D)
    if D <= 0:
        raise DomainError("horoball height must be positive")
    a, c = gamma.a, gamma.c
    diam = 2 / (1 + D * (a * a + c * c))
    tan = (a - 1j * c) / (a + 1j * c)
    return Horoball(tan, diam)


@dataclass(frozen=True)
class Generators:
    N: int
    translation: Moebius       # stabilizer of the cusp at x = 1 (tau = oo)
    rotation: Moebius          # order-N hyperbolic rotation around the origin
    translation_disk: Moebius
    rotation_disk: Moebius
    translation_length: object  # 2 cot(pi/2N)


def group_generators(N: int, ctx: PrecisionCtx = DEFAULT_CTX) -> Generators:
    if N < 2:
        raise DomainError("N must be at least 2")
    with ctx.working():
        cn = 2 / mp.tan(mp.pi / (2 * N))
        t = Moebius(mp.mpf(1), cn, mp.mpf(0), mp.mpf(1))
        r = Moebius(mp.cos(mp.pi / N), -mp.sin(mp.pi / N),
                    mp.sin(mp.pi / N), mp.cos(mp.pi / N))
        return Generators(N, t, r, t.to_model(DISK), r.to_model(DISK), cn)


# ---------------------------------------------------------------------------
# fundamental domain reduction
# ---------------------------------------------------------------------------

@dataclass
class CoveringEvalReport:
    value: object
    word: list
    residual: object
    domain_point: object = None
    rotation: int = 0
    f_pow_n: object = None          # value^N, rotation-invariant
    one_minus_f_pow_n: object = None  # 1 - value^N, kept exact near cusps


def rotational_reduce(N: int, x):
    """Rotate x into the central sector |arg x| <= pi/N; returns (k, x')
    with x = zeta_N^k x'."""
    if x == 0:
        return 0, x
    k = int(mp.nint(mp.arg(x) * N / (2 * mp.pi)))
    if k:
        x = x * mp.exp(-2j * mp.pi * k / N)
    return k % N, x


@lru_cache(maxsize=None)
def _reduction_moves(N: int, prec: int):
    """Parabolic moves, one per ideal vertex of the fundamental 2N-gon.

    Each entry is (tag, k, boundary_angle, translation_length): in the
    coordinates tau = Cayley(x * exp(-i*angle)) the move acts as
    tau -> tau + m * length.  Integer vertices carry the generators
    themselves; half-integer vertices carry the parabolic products
    g_(k+1) g_k, whose translation length is computed once from the
    matrices.
    """
    with mp.workprec(prec):
        cn = 2 / mp.tan(mp.pi / (2 * N))
        t = Moebius(mp.mpf(1), cn, mp.mpf(0), mp.mpf(1))
        r = Moebius(mp.cos(mp.pi / N), -mp.sin(mp.pi / N),
                    mp.sin(mp.pi / N), mp.cos(mp.pi / N))
        # the puncture loop around infinity: product of all cusp generators
        h = t
        for k in range(1, N):
            gk = (r.pow(k) @ t) @ r.pow(k).inv()
            h = gk @ h
        tr = h.a + h.d
        tol = mp.mpf(2) ** (-prec // 2)
        if abs(abs(tr) - 2) > tol:
            raise PrecisionError("cusp product is not parabolic")
        if tr < 0:
            h = Moebius(-h.a, -h.b, -h.c, -h.d)
        # parabolic fixed point tau* = (a-d)/(2c), then its boundary angle
        tau_star = (h.a - h.d) / (2 * h.c)
        p_star = _cayley_to_disk(tau_star)
        if abs(abs(p_star) - 1) > tol:
            raise PrecisionError("parabolic fixed point is not on the circle")
        angle_half = mp.arg(p_star)
        # translation length of h in coordinates adapted to its fixed cusp
        xt = mp.mpc("0.137", "0.04")
        tau0 = _cayley_to_h(xt * mp.exp(-1j * angle_half))
        ximg = h.to_model(DISK).apply(xt)
        tau1 = _cayley_to_h(ximg * mp.exp(-1j * angle_half))
        ch = mp.re(tau1 - tau0)
        if abs(mp.im(tau1 - tau0)) > tol:
            raise PrecisionError("half-cusp move is not a horizontal translation")
        moves = []
        for k in range(N):
            moves.append(("g", k, 2 * mp.pi * k / N, cn))
            moves.append(("h", k, angle_half + 2 * mp.pi * k / N, ch))
        return tuple(moves)


def reduce_to_domain(N: int, x, ctx: PrecisionCtx = DEFAULT_CTX):
    """Pull x into the ideal 2N-gon Dirichlet domain of the deck group.

    Returns (x0, word); the word is a list of (tag, k, m) tokens applied
    left-to-right to x0 to recover x.  Token ("g", k, m) is the m-th power
    of the k-th parabolic generator; ("h", k, m) is the m-th power of the
    parabolic g_(k+1) g_k stabilizing the half-integer vertex, batched so
    that deep horoball excursions unwind in one step.
    """
    with ctx.working():
        x = mp.mpc(x)
        if abs(x) >= 1:
            raise DomainError("reduction requires |x| < 1")
        moves = _reduction_moves(N, ctx.prec)
        shrink = 1 - mp.mpf(2) ** (-(ctx.prec // 2))
        steps = []
        absx = abs(x)
        cap = 120 + 16 * int(mp.log((1 + absx) / (1 - absx)) + 1)
        for _ in range(cap):
            best = None
            for tag, k, angle, length in moves:
                rot = mp.exp(-1j * angle)
                tau = _cayley_to_h(x * rot)
                m = -int(mp.nint(mp.re(tau) / length))
                for mm in {m, 1, -1}:
                    if mm == 0:
                        continue
                    cand = _cayley_to_disk(tau + mm * length) / rot
                    a = abs(cand)
                    if best is None or a < best[0]:
                        best = (a, tag, k, mm, cand)
            if best is None or best[0] >= absx * shrink:
                break
            absx, tag, k, mm, x = best
            steps.append((tag, k, -mm))
        else:
            raise PrecisionError("fundamental domain reduction did not terminate")
        return x, steps


def apply_word(N: int, word, x0, ctx: PrecisionCtx = DEFAULT_CTX):
    """Apply reduction word tokens (tag, k, m) left-to-right to x0."""
    with ctx.working():
        moves = {(tag, k): (angle, length)
                 for tag, k, angle, length in _reduction_moves(N, ctx.prec)}
        x = mp.mpc(x0)
        for tag, k, m in reversed(word):
            angle, length = moves[(tag, k)]
            rot = mp.exp(-1j * angle)
            tau = _cayley_to_h(x * rot)
            x = _cayley_to_disk(tau + m * length) / rot
        return x


def domain_cusps(N: int):
    """The 2N ideal vertices: all half-integer powers of zeta_N."""
    return [mp.exp(1j * mp.pi * j / N) for j in range(2 * N)]


# ---------------------------------------------------------------------------
# seed series: exact reversion of the rational part of psi
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _seed_coefficients(N: int, terms: int):
    """Rational coefficients b_j with F(x) = sum b_j (gamma x)^(1+jN);
    obtained by exact reversion of z * (2F1 ratio)(z^N)."""
    up = Fraction(N + 1, 2 * N)
    dn = Fraction(N - 1, 2 * N)
    fa = hypergeometric_series(up, up, 2 * up, terms + 2)
    fb = hypergeometric_series(dn, dn, 2 * dn, terms + 2)
    ratio = fa / fb
    order = 1 + (terms + 1) * N
    coeffs = [Fraction(0)] * (order - 1)
    coeffs[0] = Fraction(1)
    for j, (_, c) in enumerate(ratio.coefficients()):
        if 0 < j * N < len(coeffs):
            coeffs[j * N] = c
    phi = PuiseuxSeries.from_window(1, 1, coeffs, order, Nome.FORMAL)
    inv = revert(phi)
    return tuple(inv.coeff(1 + j * N) for j in range(terms + 1))


def f_n_taylor(N: int, x, ctx: PrecisionCtx = DEFAULT_CTX, terms: int = None):
    """Taylor evaluation of the covering map near the origin."""
    if terms is None:
        terms = max(6, 2 + (30 + N - 1) // N)
    bs = _seed_coefficients(N, terms)
    with ctx.working():
        y = gamma_n(N, ctx) * mp.mpc(x)
        yn = y ** N
        acc = mp.mpc(0)
        p = y
        for b in bs:
            if b:
                acc += ctx.to_mp(b) * p
            p *= yn
        return acc


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------

def _newton(N, target, v, ctx, tol, maxit=80):
    err_abs = None
    for _ in range(maxit):
        val, dval = psi_n_with_derivative(v, N, ctx)
        err = val - target
        err_abs = abs(err)
        if err_abs < tol:
            return v, err_abs
        step = err / dval
        lim = mp.mpf("0.4") * (1 + abs(v))
        sa = abs(step)
        if sa > lim:
            step *= lim / sa
        v = v - step
    raise PrecisionError("Newton iteration for the covering map stalled "
                         "(residual %s)" % mp.nstr(err_abs, 5))


def _cusp_constants(N, ctx):
    return _cusp_constants_cached(N, ctx.prec)


@lru_cache(maxsize=None)
def _cusp_constants_cached(N, prec):
    with mp.workprec(prec):
        ctx = PrecisionCtx(max(64, prec - 48), 48)
        A = 2 * (-mp.euler) - 2 * digamma(Fraction(1, 2) + Fraction(1, 2 * N), ctx)
        B = 2 * (-mp.euler) - 2 * digamma(Fraction(1, 2) - Fraction(1, 2 * N), ctx)
        return A, B


def _solve_near_one(N, x0, ctx, tol):
    """Solve psi(v) = x0 for x0 near the cusp at 1.

    Works in the logarithmic parameter lam = log Z with v^N = 1 - Z, which
    stays accurate however deep into the cusp the point sits.  Returns
    (Z, residual)."""
    with ctx.working():
        g = gamma_n(N, ctx)
        A, B = _cusp_constants(N, ctx)
        y = mp.mpc(x0)
        lam = None
        for _ in range(2):
            L = (y * B - A) / (1 - y)
            lam = -L
            if mp.re(lam) > -1:
                lam = mp.mpc(-1, mp.im(lam))
            Z = mp.exp(lam)
            if abs(Z) < mp.mpf("0.5"):
                y = mp.mpc(x0) * (1 + Z / N)
        target = g * mp.mpc(x0)
        for _ in range(80):
            Z = mp.exp(lam)
            val, den = s_n_near_one(Z, N, ctx)
            err = val - target
            if abs(err) < tol * g:
                return Z, abs(err) / g
            # d val / d lam = -Z * s'(1-Z) = -(1-Z)^(1/N-1)/(N den^2)
            dval = -mp.exp(_log1p_local(-Z) * (mp.mpf(1) / N - 1)) / (N * den ** 2)
            lam = lam - err / dval
        raise PrecisionError("cusp-regime iteration stalled")


def _log1p_local(u):
    if abs(u) < mp.mpf(2) ** (-mp.mp.prec // 2):
        return u - u * u / 2
    return mp.log(1 + u)


def _nth_root_in_sector(P, N, target_arg):
    """N-th root of P with argument nearest to target_arg."""
    r = abs(P) ** (mp.mpf(1) / N)
    theta = mp.arg(P)
    j = int(mp.nint((target_arg * N - theta) / (2 * mp.pi)))
    return r * mp.exp(1j * (theta + 2 * mp.pi * j) / N)


def _generic_pack(N, v, res):
    wv = mp.exp(N * mp.log(v)) if v != 0 else mp.mpc(0)
    return v, res, wv, 1 - wv


def _solve_central(N, x0, ctx, tol, seed=None):
    """Solve psi(v) = x0 for x0 in the fundamental domain, central sector.

    Returns (v, residual, v^N, 1 - v^N); the last two are computed in
    whatever parametrization keeps them accurate near the cusps."""
    with ctx.working():
        x0 = mp.mpc(x0)
        if x0 == 0:
            return mp.mpc(0), mp.mpf(0), mp.mpc(0), mp.mpc(1)
        if seed is not None:
            try:
                v, res = _newton(N, x0, seed, ctx, tol, maxit=12)
                return _generic_pack(N, v, res)
            except (PrecisionError, DomainError):
                pass
        spacing = 2 * mp.sin(mp.pi / (2 * N))
        d_int = abs(x0 - 1)
        sgn = 1 if mp.im(x0) >= 0 else -1
        half_cusp = mp.exp(sgn * 1j * mp.pi / N)
        d_half = abs(x0 - half_cusp)
        if abs(x0) <= mp.mpf("0.45"):
            v = f_n_taylor(N, x0, ctx)
            v, res = _newton(N, x0, v, ctx, tol)
            return _generic_pack(N, v, res)
        if d_int <= mp.mpf("0.6") * spacing:
            Z, res = _solve_near_one(N, x0, ctx, tol)
            v = _nth_root_in_sector(1 - Z, N, mp.arg(x0))
            return v, res, 1 - Z, Z
        if d_half <= mp.mpf("0.6") * spacing:
            x0p = x0 / half_cusp
            Zp, res = _solve_near_one(N, x0p, ctx, tol)
            P = (Zp - 1) / Zp
            v = _nth_root_in_sector(P, N, sgn * mp.pi / N)
            return v, res, P, 1 / Zp
        # homotopy along the ray toward x0
        t = mp.mpf("0.42") / abs(x0)
        v = f_n_taylor(N, t * x0, ctx)
        v, res = _newton(N, t * x0, v, ctx, tol)
        step = mp.mpf("0.2")
        while t < 1:
            t_next = min(mp.mpf(1), t + step)
            try:
                v_next, res = _newton(N, t_next * x0, v, ctx, tol, maxit=24)
            except (PrecisionError, DomainError):
                step /= 2
                if step < mp.mpf("1e-6"):
                    raise
                continue
            v, t = v_next, t_next
            step *= mp.mpf("1.5")
        return _generic_pack(N, v, res)


def f_n_eval(N: int, x, ctx: PrecisionCtx = DEFAULT_CTX,
             refuse_cusp_dist=REFUSE_CUSP_DIST, seed=None) -> CoveringEvalReport:
    """Value of the covering map at a point of the open unit disc.

    seed, when given, is a pair (x0_prev, v_prev) from a nearby previous
    evaluation, used to warm-start the Newton stage.
    """
    if N < 2:
        raise DomainError("N must be at least 2")
    with ctx.working():
        x = mp.mpc(x)
        if abs(x) >= 1:
            raise DomainError("the covering map is defined on |x| < 1")
        tol = mp.mpf(2) ** (-(ctx.bits + 8))
        if x == 0:
            return CoveringEvalReport(mp.mpc(0), [], mp.mpf(0), mp.mpc(0), 0,
                                      mp.mpc(0), mp.mpc(1))
        k1, xr = rotational_reduce(N, x)
        x0, word = reduce_to_domain(N, xr, ctx)
        k2, x0r = rotational_reduce(N, x0)
        dist = min(abs(x0r - c) for c in
                   (mp.mpf(1), mp.exp(1j * mp.pi / N), mp.exp(-1j * mp.pi / N)))
        if dist < refuse_cusp_dist:
            raise CuspRefusal("point reduces within %s of a domain cusp" %
                              refuse_cusp_dist)
        hint = None
        if seed is not None and abs(seed[0] - x0r) < mp.mpf("0.04"):
            hint = seed[1]
        v, res, wv, one_minus = _solve_central(N, x0r, ctx, tol, seed=hint)
        rot = (k1 + k2) % N
        value = v * mp.exp(2j * mp.pi * rot / N)
        tokens = []
        if k1:
            tokens.append(("rot", k1))
        tokens.extend(("%s%d" % (tag, k), m) for tag, k, m in word)
        if k2:
            tokens.append(("rot", k2))
        return CoveringEvalReport(value, tokens, res, x0r, rot, wv, one_minus)


def g_n_eval(N: int, x, ctx: PrecisionCtx = DEFAULT_CTX,
             refuse_cusp_dist=REFUSE_CUSP_DIST):
    """G(x) = F(x^(1/N))^N with the principal root."""
    with ctx.working():
        x = mp.mpc(x)
        if x == 0:
            return mp.mpc(0)
        root = mp.exp(mp.log(x) / N)
        rep = f_n_eval(N, root, ctx, refuse_cusp_dist)
        return rep.value ** N


class CoveringEvaluator:
    """Callable wrapper around f_n_eval keeping a warm-start seed, so that
    sweeps along a circle (quadrature, scans) reuse the previous solution.

    transform maps the evaluation report to the returned value; the default
    returns the covering map value itself.
    """

    def __init__(self, N: int, ctx: PrecisionCtx = DEFAULT_CTX, transform=None,
                 refuse_cusp_dist=REFUSE_CUSP_DIST):
        self.N = N
        self.ctx = ctx
        self.transform = transform or (lambda rep: rep.value)
        self.refuse = refuse_cusp_dist
        self.seed = None

    def __call__(self, z):
        rep = f_n_eval(self.N, z, self.ctx, self.refuse, seed=self.seed)
        self.seed = (rep.domain_point,
                     rep.value / mp.exp(2j * mp.pi * rep.rotation / self.N))
        return self.transform(rep)


def sup_scan(N: int, r, samples: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """Sampled maximum of log|F| on the circle of radius r, over one
    rotational sector (the maximum over the full circle coincides)."""
    if samples < 1:
        raise DomainError("need at least one sample")
    with ctx.working():
        r = mp.mpf(r)
        if not 0 < r < 1:
            raise DomainError("radius must lie in (0,1)")
        best = mp.mpf("-inf")
        seed = None
        width = 2 * mp.pi / N
        for j in range(samples):
            theta = (j + mp.mpf("0.5")) * width / samples
            for attempt in range(4):
                try:
                    rep = f_n_eval(N, r * mp.exp(1j * (theta + attempt * width * mp.mpf("1e-4") / samples)), ctx, seed=seed)
                    break
                except CuspRefusal:
                    continue
            else:
                continue
            seed = (rep.domain_point, rep.value / mp.exp(2j * mp.pi * rep.rotation / N))
            a = abs(rep.value)
            if a > 0:
                best = max(best, mp.log(a))
        return best


def circle_scan(N: int, r, base_nodes: int, ctx: PrecisionCtx = DEFAULT_CTX,
                graded_levels: int = None):
    """Covering-map values on the arc theta in [0, pi/N] at radius r.

    Returns a list of (theta, value) on a mesh that is uniform plus a
    geometric refinement toward the two cusp directions; by the rotation and
    reflection symmetries this arc determines circle averages of |F|.
    Refused nodes are skipped (they would contribute on a set of measure
    zero at the mesh scale).
    """
    with ctx.working():
        r = mp.mpf(r)
        arc = mp.pi / N
        h = arc / base_nodes
        if graded_levels is None:
            graded_levels = max(2, int(mp.ceil(mp.log(h / (1 - r), 2))) + 2)
        thetas = [h * i for i in range(base_nodes + 1)]
        for lev in range(1, graded_levels + 1):
            thetas.append(h / 2 ** lev)
            thetas.append(arc - h / 2 ** lev)
        thetas = sorted(set(thetas))
        out = []
        seed = None
        for theta in thetas:
            try:
                rep = f_n_eval(N, r * mp.exp(1j * theta), ctx, seed=seed)
            except CuspRefusal:
                continue
            seed = (rep.domain_point, rep.value / mp.exp(2j * mp.pi * rep.rotation / N))
            out.append((theta, rep.value))
        return out
