from fractions import Fraction as F

import mpmath as mp
import pytest

from udc.hyper import (
    DEFAULT_CTX,
    DomainError,
    PrecisionCtx,
    digamma,
    gamma,
    gamma_n,
    gamma_n_asymptotic,
    gamma_n_defect,
    hyp2f1,
    log_gamma_n_series,
    psi_n,
    psi_n_with_derivative,
    s_n,
    s_n_prime,
    zeta_value,
)
from udc.series import lambda_over_16

CTX = PrecisionCtx(256)


def tol(bits=220):
    return mp.mpf(2) ** (-bits)


# ---------------------------------------------------------------------------
# gamma / digamma / zeta
# ---------------------------------------------------------------------------

def test_gamma_basics():
    with CTX.working():
        assert abs(gamma(1, CTX) - 1) < tol()
        assert abs(gamma(F(1, 2), CTX) ** 2 - mp.pi) < tol()


def test_gamma_pole_rejected():
    for x in (0, -1, -7):
        with pytest.raises(DomainError):
            gamma(x, CTX)
    with pytest.raises(DomainError):
        digamma(-2, CTX)


def test_digamma_at_one_vs_harmonic_series_oracle():
    # psi(1) = -euler; cross-check euler via lim (H_n - log n) acceleration
    with mp.workprec(300):
        n = 8000
        h = mp.fsum(mp.mpf(1) / k for k in range(1, n + 1))
        approx = h - mp.log(n) - mp.mpf(1) / (2 * n) + mp.mpf(1) / (12 * n ** 2)
        assert abs(digamma(1, CTX) + approx) < mp.mpf(1) / n ** 4
        assert abs(digamma(1, CTX) + mp.euler) < tol()


def euler_maclaurin_zeta(s, terms=200, correction=14):
    """Independent Euler-Maclaurin oracle for zeta(s), s >= 2 an integer."""
    with mp.workprec(400):
        n = terms
        total = mp.fsum(mp.mpf(1) / mp.mpf(k) ** s for k in range(1, n))
        total += mp.mpf(n) ** (1 - s) / (s - 1) + mp.mpf(n) ** (-s) / 2
        fac = mp.mpf(s)
        npow = mp.mpf(n) ** (-s - 1)
        for j in range(1, correction + 1):
            total += mp.bernoulli(2 * j) / mp.factorial(2 * j) * fac * npow
            fac *= (s + 2 * j - 1) * (s + 2 * j)
            npow /= n * n
        return total


def test_zeta_values_against_euler_maclaurin_oracle():
    with mp.workprec(400):
        assert abs(zeta_value(2, CTX) - mp.pi ** 2 / 6) < tol()
        for s in (3, 5, 7):
            assert abs(zeta_value(s, CTX) - euler_maclaurin_zeta(s)) < mp.mpf(10) ** -60
    with mp.workprec(120):
        assert abs(zeta_value(3, CTX) - mp.mpf("1.2020569031595942854")) < mp.mpf("1e-18")
        assert abs(zeta_value(5, CTX) - mp.mpf("1.0369277551433699263")) < mp.mpf("1e-18")


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta_value(1, CTX)
    with pytest.raises(DomainError):
        zeta_value(2.5, CTX)


def test_precision_ctx_floor():
    with pytest.raises(DomainError):
        PrecisionCtx(32)


# ---------------------------------------------------------------------------
# 2F1
# ---------------------------------------------------------------------------

def test_binomial_identity():
    with CTX.working():
        z = mp.mpf(3) / 8
        v = hyp2f1(F(2, 3), F(1, 5), F(1, 5), z, CTX)
        assert abs(v - (1 - z) ** (-mp.mpf(2) / 3)) < tol()


def test_c_nonpositive_integer_rejected():
    with pytest.raises(DomainError):
        hyp2f1(F(1, 2), F(1, 2), -1, 0.1, CTX)


def test_euler_and_pfaff_transformations():
    with CTX.working():
        a, b, c = F(1, 3), F(2, 7), F(5, 4)
        for z in (mp.mpf("0.21"), mp.mpc("0.1", "0.17"), mp.mpf("-0.33")):
            lhs = hyp2f1(a, b, c, z, CTX)
            euler = (1 - z) ** CTX.to_mp(c - a - b) * hyp2f1(c - a, c - b, c, z, CTX)
            pfaff = (1 - z) ** (-CTX.to_mp(a)) * hyp2f1(a, c - b, c, z / (z - 1), CTX)
            assert abs(lhs - euler) < tol()
            assert abs(lhs - pfaff) < tol()


def test_derivative_contiguous_relation():
    with CTX.working():
        a, b, c = F(1, 2), F(1, 2), F(1, 1)
        z = mp.mpf("0.37")
        h = mp.mpf(2) ** -70
        fd = (hyp2f1(a, b, c, z + h, CTX) - hyp2f1(a, b, c, z - h, CTX)) / (2 * h)
        exact = CTX.to_mp(F(1, 4)) * hyp2f1(a + 1, b + 1, c + 1, z, CTX)
        assert abs(fd - exact) < mp.mpf(2) ** -130


def test_theta_series_value():
    # 2F1(1/2,1/2;1;lambda(q)) = (sum q^(n^2))^2 at q = 0.05
    with CTX.working():
        q = mp.mpf("0.05")
        lam = 16 * mp.fsum(CTX.to_mp(c) * q ** int(e)
                           for e, c in lambda_over_16(60).coefficients())
        lhs = hyp2f1(F(1, 2), F(1, 2), 1, lam, CTX)
        theta = 1 + 2 * mp.fsum(q ** (n * n) for n in range(1, 40))
        assert abs(lhs - theta ** 2) < mp.mpf(10) ** -20


def test_log_formula_agrees_with_series_through_overlap():
    from udc.hyper import _log_formula_2f1
    with CTX.working():
        a = F(1, 2)
        # path of points where both the direct/Pfaff evaluation and the
        # z -> 1 formula are valid
        for zs in ("0.55", "0.6", "0.7"):
            z = mp.mpf(zs)
            direct = hyp2f1(a, a, 2 * a, z, CTX)
            logform = _log_formula_2f1(a, 1 - z, CTX)
            assert abs(direct - logform) < tol()
        z = 1 - mp.mpf(10) ** -6
        v1 = hyp2f1(a, a, 2 * a, z, CTX)
        v2 = _log_formula_2f1(a, 1 - z, CTX)
        assert abs(v1 - v2) < tol()


def test_region_continuity():
    # values on both sides of internal region boundaries agree to precision
    with CTX.working():
        a, b, c = F(9, 16), F(9, 16), F(9, 8)
        eps = mp.mpf("1e-12")
        for base in (mp.mpf("0.72"), mp.mpc("0.3", "0.65")):
            u = base / abs(base)
            lo = hyp2f1(a, b, c, base - eps * u, CTX)
            hi = hyp2f1(a, b, c, base + eps * u, CTX)
            assert abs(lo - hi) < mp.mpf("1e-10")


def test_two_precision_self_consistency():
    with mp.workprec(800):
        pts = [mp.mpc("0.62", "0.20"), mp.mpf("-0.9"), mp.mpc("-0.2", "0.88")]
        for z in pts:
            v1 = hyp2f1(F(9, 16), F(9, 16), F(9, 8), z, CTX)
            v2 = hyp2f1(F(9, 16), F(9, 16), F(9, 8), z, CTX.doubled())
            assert abs(v1 - v2) < tol(240)


# ---------------------------------------------------------------------------
# s_n, gamma_n, psi_n
# ---------------------------------------------------------------------------

def test_s_n_leading_behavior():
    with CTX.working():
        z = mp.mpf(10) ** -30
        v = s_n(z, 5, CTX)
        assert abs(v / z ** (mp.mpf(1) / 5) - 1) < mp.mpf(10) ** -28


def test_s_n_ode_residual():
    # y = sqrt(1-z) z^(1/N) 2F1(up,up;1+1/N;z) solves
    # z(z-1)^2 y'' + (1-1/N)(z-1)^2 y' + (1/4 + (z-1)/(4N^2)) y = 0
    N = 3
    up = F(N + 1, 2 * N)

    def y(z):
        return mp.sqrt(1 - z) * z ** (mp.mpf(1) / N) * hyp2f1(up, up, 2 * up, z, CTX)

    with CTX.working():
        for z0 in (mp.mpf("0.3"), mp.mpc("0.2", "0.1")):
            h = mp.mpf(2) ** -45
            y0 = y(z0)
            y1 = (y(z0 + h) - y(z0 - h)) / (2 * h)
            y2 = (y(z0 + h) - 2 * y0 + y(z0 - h)) / h ** 2
            res = (z0 * (z0 - 1) ** 2 * y2
                   + (1 - mp.mpf(1) / N) * (z0 - 1) ** 2 * y1
                   + (mp.mpf(1) / 4 + (z0 - 1) / (4 * N ** 2)) * y0)
            assert abs(res) < mp.mpf(10) ** -25


def test_s_n_two_precision_value():
    with mp.workprec(800):
        v1 = s_n(mp.mpf("0.25"), 2, CTX)
        v2 = s_n(mp.mpf("0.25"), 2, CTX.doubled())
        assert abs(v1 - v2) < tol(240)
        assert abs(v1 - mp.mpf("0.53626761675013218303")) < mp.mpf(10) ** -19


def test_s_n_derivative_wronskian_formula():
    with CTX.working():
        h = mp.mpf(2) ** -60
        for N in (2, 5):
            for z0 in (mp.mpf("0.33"), mp.mpc("0.41", "0.35")):
                fd = (s_n(z0 + h, N, CTX) - s_n(z0 - h, N, CTX)) / (2 * h)
                assert abs(fd - s_n_prime(z0, N, CTX)) < mp.mpf(2) ** -110


def test_gamma_n_formula_and_asymptotics():
    with CTX.working():
        for N in (10, 100, 1000):
            d = gamma_n_defect(N, CTX)
            assert d > 0
            assert d < 16 ** (mp.mpf(1) / N) * 10 / mp.mpf(N) ** 6
        for N in (2, 3, 5, 17):
            assert gamma_n(N, CTX) > 16 ** (mp.mpf(1) / N)


def test_gamma_n_vs_near_one_ratio_of_gammas():
    # the Gamma-quotient equals the z -> 1 limit of the hypergeometric ratio;
    # at z = 1 - u the relative deviation is O(1/log(1/u))-free once the
    # digamma-corrected form is used
    N = 2
    with CTX.working():
        u = mp.mpf(10) ** -30
        g = gamma_n(N, CTX)
        L = -mp.log(u)
        A = 2 * (-mp.euler) - 2 * digamma(F(1, 2) + F(1, 2 * N), CTX)
        B = 2 * (-mp.euler) - 2 * digamma(F(1, 2) - F(1, 2 * N), CTX)
        predicted = g * (1 - u) ** (mp.mpf(1) / N) * (L + A) / (L + B)
        actual = s_n(1 - u, N, CTX)
        assert abs(predicted - actual) < mp.mpf(10) ** -27


def test_log_gamma_n_series_truncation_bound():
    with CTX.working():
        for N in (3, 7, 20):
            val, bound = log_gamma_n_series(N, 3, CTX)
            assert abs(mp.log(gamma_n(N, CTX)) - val) < bound


def test_psi_n_at_zero_and_derivative():
    with CTX.working():
        assert psi_n(0, 4, CTX) == 0
        for N in (2, 6):
            h = mp.mpf(2) ** -60
            fd = (psi_n(h, N, CTX) - psi_n(-h, N, CTX)) / (2 * h)
            assert abs(fd - 1 / gamma_n(N, CTX)) < mp.mpf(10) ** -20
            _, dv = psi_n_with_derivative(mp.mpc(0), N, CTX)
            assert abs(dv - 1 / gamma_n(N, CTX)) < tol()


def test_psi_n_rotation_equivariance():
    with CTX.working():
        for N in (3, 5, 8):
            zeta = mp.exp(2j * mp.pi / N)
            for z in (mp.mpc("0.21", "0.1"), mp.mpc("-0.3", "0.44")):
                lhs = psi_n(zeta * z, N, CTX)
                rhs = zeta * psi_n(z, N, CTX)
                assert abs(lhs - rhs) < tol()


def test_psi_n_slit_rejected():
    with pytest.raises(DomainError):
        psi_n(mp.mpf("1.5"), 4, CTX)
