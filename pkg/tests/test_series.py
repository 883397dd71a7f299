from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from udc.series import (
    Nome,
    PuiseuxSeries,
    SeriesError,
    binomial_power_series,
    catalan_square_series,
    compose,
    denominator_profile,
    elliptic_e_series,
    eta_expansion,
    h_series,
    h_series_eta_assembly,
    hypergeometric_series,
    j_cube_root,
    lambda_over_16,
    lambda_over_16_eta_assembly,
    lambda_over_16_reverted,
    revert,
    theta3_squared,
)
from udc.series import _frac_vec_mul, _int_poly_mul


# ---------------------------------------------------------------------------
# multiplication engine against a naive convolution oracle
# ---------------------------------------------------------------------------

def naive_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                out[i + j] += x * y
    return out


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(min_value=-10**12, max_value=10**12), min_size=1, max_size=40),
    st.lists(st.integers(min_value=-10**12, max_value=10**12), min_size=1, max_size=40),
)
def test_kronecker_multiplication_matches_naive(a, b):
    n = len(a) + len(b) - 1
    assert _int_poly_mul(a, b, n) == naive_mul(a, b, n)


def test_fraction_vector_multiplication():
    a = [Fraction(1, 3), Fraction(-2, 7)]
    b = [Fraction(5, 2), Fraction(1, 6), Fraction(3)]
    got = _frac_vec_mul(a, b, 4)
    want = naive_mul(a, b, 4)
    assert got == want


# ---------------------------------------------------------------------------
# basic ring operations
# ---------------------------------------------------------------------------

def test_one_plus_q_times_one_minus_q():
    one_plus = PuiseuxSeries.from_window(1, 0, [1, 1, 0, 0, 0], 5)
    one_minus = PuiseuxSeries.from_window(1, 0, [1, -1, 0, 0, 0], 5)
    prod = one_plus * one_minus
    assert prod.coeff(0) == 1 and prod.coeff(1) == 0 and prod.coeff(2) == -1


def test_pow_zero_is_one():
    x = lambda_over_16(10)
    assert x.pow_int(0).coeff(0) == 1
    assert all(c == 0 for _, c in x.pow_int(0).coefficients()[1:])


def test_nome_mismatch_rejected():
    a = PuiseuxSeries.from_window(1, 0, [1, 2], 2, Nome.PI_I_TAU)
    b = PuiseuxSeries.from_window(1, 0, [1, 2], 2, Nome.TWO_PI_I_TAU)
    with pytest.raises(SeriesError):
        a * b


def test_division_by_zero_series_rejected():
    z = PuiseuxSeries.zero(5)
    x = lambda_over_16(5)
    with pytest.raises(SeriesError):
        x / z


def test_serialization_roundtrip():
    x = j_cube_root(8)
    y = PuiseuxSeries.from_json(x.to_json())
    assert y == x
    d = x.to_json_dict()
    assert set(d) == {"ram", "val", "trunc", "nome", "coeffs"}
    assert all("." not in c for c in d["coeffs"])


# ---------------------------------------------------------------------------
# eta expansions
# ---------------------------------------------------------------------------

def test_eta_half_matches_product_form():
    # eta(tau/2) = q^(1/24) prod (1 - q^n) in the nome q = exp(pi i tau)
    e = eta_expansion(Fraction(1, 2), 12)
    assert e.valuation == Fraction(1, 24)
    body = e.shift(Fraction(-1, 24))
    # prod(1-q^n) = 1 - q - q^2 + q^5 + q^7 - ... (pentagonal numbers)
    for k, want in enumerate([1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0]):
        assert body.coeff(k) == want


def test_eta_order_one_is_leading_monomial():
    e = eta_expansion(1, 1)
    assert e.valuation == Fraction(1, 12)
    assert e.leading_coefficient() == 1
    assert len(e.coefficients()) <= e.ram


def test_eta_rejects_bad_arguments():
    with pytest.raises(SeriesError):
        eta_expansion(1, 0)
    with pytest.raises(SeriesError):
        eta_expansion(-2, 5)


def test_lambda_assemblies_agree():
    fast = lambda_over_16(30)
    slow = lambda_over_16_eta_assembly(30)
    assert fast.truncate(30) == slow.truncate(30)


def test_lambda_prefix():
    x = lambda_over_16(6)
    assert [x.coeff(k) for k in range(1, 5)] == [1, -8, 44, -192]


def test_h_assemblies_agree():
    assert h_series(40).truncate(40) == h_series_eta_assembly(40).truncate(40)


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------

def test_lambda_eighth_root_product_formula():
    # (lambda/16)^(1/8) = q^(1/8) prod (1+q^(2n)) (1+q^(2n-1))^(-1)
    n = 24
    root = lambda_over_16(n).nth_root(8)
    num = PuiseuxSeries.one(n, Nome.PI_I_TAU)
    den = PuiseuxSeries.one(n, Nome.PI_I_TAU)
    k = 1
    while 2 * k < n:
        num = num * PuiseuxSeries.from_window(1, 0, [1] + [0] * (2 * k - 1) + [1], 2 * k + 1, Nome.PI_I_TAU).pad_to(n)
        k += 1
    k = 1
    while 2 * k - 1 < n:
        den = den * PuiseuxSeries.from_window(1, 0, [1] + [0] * (2 * k - 2) + [1], 2 * k, Nome.PI_I_TAU).pad_to(n)
        k += 1
    prod = (num / den).truncate(n - 1).shift(Fraction(1, 8))
    assert root.truncate(prod.order) == prod


def test_nth_root_matches_binomial_series():
    f = binomial_power_series(1, -16, 40)  # 1 - 16x
    root = f.nth_root(8)
    oracle = binomial_power_series(Fraction(1, 8), -16, 40)
    assert root == oracle
    assert all(c.denominator == 1 for _, c in root.coefficients())


def test_nth_root_identity_for_n_equal_one():
    f = lambda_over_16(10)
    assert f.nth_root(1) == f


def test_nth_root_requires_unit_leading_coefficient():
    f = lambda_over_16(10).scale(3)
    with pytest.raises(SeriesError):
        f.nth_root(2)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=2, max_value=24),
    st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=12),
)
def test_nth_root_power_roundtrip(n, tail):
    f = PuiseuxSeries.from_window(1, 0, [1] + tail, len(tail) + 1)
    g = f.nth_root(n)
    assert g.pow_int(n).truncate(f.order) == f


def test_cube_root_of_lambda_has_three_power_denominators():
    prof = denominator_profile(lambda_over_16(50).nth_root(3), primes=(2, 3, 5))
    lcm = prof.final_lcm
    assert lcm > 1
    while lcm % 3 == 0:
        lcm //= 3
    assert lcm == 1  # denominators are pure powers of 3
    assert min(prof.prime_valuations[3]) < -8


# ---------------------------------------------------------------------------
# reversion and composition
# ---------------------------------------------------------------------------

def naive_lagrange_revert(f, n):
    """O(n^3) reversion oracle: [t^k] g = (1/k) [x^(k-1)] (x/f)^k."""
    base = [f.coeff(j + 1) for j in range(n)]  # f = x*(base series)
    inv = [Fraction(0)] * n
    inv[0] = 1 / base[0]
    for k in range(1, n):
        inv[k] = -sum(base[j] * inv[k - j] for j in range(1, k + 1)) / base[0]
    out = [Fraction(0)] * (n + 1)
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(1, n + 1):
        power = naive_mul(power, inv, n)
        out[k] = power[k - 1] / k
    return out[1:]


def test_revert_matches_naive_lagrange_oracle():
    f = lambda_over_16(9)
    got = [lambda_over_16_reverted(9).coeff(k) for k in range(1, 9)]
    assert got == naive_lagrange_revert(f, 8)


def test_revert_identity():
    t = PuiseuxSeries.from_window(1, 1, [1] + [0] * 9, 11)
    assert revert(t) == t


def test_revert_rejects_unnormalized():
    with pytest.raises(SeriesError):
        revert(lambda_over_16(10).scale(2))
    with pytest.raises(SeriesError):
        revert(lambda_over_16(10).shift(1))


def test_revert_roundtrip_order_30():
    x = lambda_over_16(31)
    g = revert(x)
    assert revert(g).truncate(30) == x.truncate(30)
    assert compose(g, x).truncate(30) == PuiseuxSeries.from_window(
        1, 1, [1] + [0] * 28, 30, Nome.PI_I_TAU)


def test_compose_identity():
    f = j_cube_root(8).shift(Fraction(1, 3))  # make exponents integral
    t = PuiseuxSeries.from_window(1, 1, [1] + [0] * 10, 12, Nome.TWO_PI_I_TAU)
    assert compose(f, t).truncate(8) == f.truncate(8)


def test_compose_rejects_nonpositive_valuation():
    f = hypergeometric_series(1, 1, 1, 5)
    g = PuiseuxSeries.one(5)
    with pytest.raises(SeriesError):
        compose(f, g)


# ---------------------------------------------------------------------------
# corpus values
# ---------------------------------------------------------------------------

def test_j_cube_root_coefficients():
    j = j_cube_root(5)
    assert j.valuation == Fraction(-1, 3)
    got = [j.coeff(Fraction(-1, 3) + k) for k in range(4)]
    assert got == [1, 248, 4124, 34752]


def test_elliptic_e_coefficients():
    E = elliptic_e_series(7)
    assert [E.coeff(k) for k in range(6)] == [1, -4, 20, -64, 164, -392]


def test_theta_identity_exact():
    n = 40
    lhs = compose(hypergeometric_series(Fraction(1, 2), Fraction(1, 2), 1, n + 1,
                                        Nome.PI_I_TAU),
                  lambda_over_16(n).scale(16))
    assert lhs.truncate(n) == theta3_squared(n).truncate(n)


def test_catalan_square_series_integral():
    s = catalan_square_series(200)
    assert all(c.denominator == 1 for _, c in s.coefficients())
    assert [s.coeff(k) for k in range(1, 5)] == [1, 1, 4, 25]


# ---------------------------------------------------------------------------
# denominator profiles
# ---------------------------------------------------------------------------

def test_profile_of_integral_root_is_trivial():
    prof = denominator_profile(binomial_power_series(Fraction(1, 8), -16, 101))
    assert all(l == 1 for l in prof.lcms)
    assert prof.is_integral()


def test_profile_of_constant():
    c = PuiseuxSeries.from_window(1, 0, [Fraction(7, 3)] + [0] * 9, 10)
    prof = denominator_profile(c)
    assert prof.lcms == [3] * 10


def test_profile_of_h_fifth_root_grows():
    prof = denominator_profile(h_series(60).nth_root(5), primes=(5,))
    lcms = prof.lcms
    assert lcms[-1] > lcms[len(lcms) // 2] > lcms[len(lcms) // 4]
    assert not prof.is_integral()
    assert min(prof.prime_valuations[5]) < -10


def test_divisor_of_24_window():
    h = h_series(40)
    for n in range(1, 25):
        root = h.nth_root(n)
        integral = all(c.denominator == 1 for _, c in root.coefficients())
        assert integral == (24 % n == 0)
