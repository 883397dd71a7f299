import random

import mpmath as mp
import pytest

from udc.cover import (
    DISK,
    CoveringEvalReport,
    CoveringEvaluator,
    CuspRefusal,
    Horoball,
    Moebius,
    apply_word,
    domain_cusps,
    f_n_eval,
    f_n_taylor,
    g_n_eval,
    group_generators,
    horoball_image,
    reduce_to_domain,
    rotational_reduce,
    sup_scan,
)
from udc.hyper import DomainError, PrecisionCtx, gamma_n, psi_n
from udc.series import lambda_over_16

CTX = PrecisionCtx(256)


def mpc(a, b=0):
    return mp.mpc(mp.mpf(a), mp.mpf(b))


# ---------------------------------------------------------------------------
# Moebius transformations and horoballs
# ---------------------------------------------------------------------------

def test_generators_basic():
    with CTX.working():
        gens = group_generators(2, CTX)
        assert abs(gens.translation_length - 2) < mp.mpf(10) ** -70
        # rotation has matrix order 2N in SL2, order N projectively
        r = gens.rotation
        power = r.pow(2)
        assert abs(power.a + 1) < mp.mpf(10) ** -70  # r^N = -identity
        # disk-model rotation acts as multiplication by the root of unity
        z = mpc("0.3", "0.1")
        assert abs(gens.rotation_disk.apply(z) - z * mp.exp(2j * mp.pi / 2)) \
            < mp.mpf(10) ** -70


def test_rotation_matches_root_of_unity_action():
    with CTX.working():
        for N in (3, 5, 8):
            gens = group_generators(N, CTX)
            z = mpc("0.21", "-0.4")
            want = z * mp.exp(2j * mp.pi / N)
            assert abs(gens.rotation_disk.apply(z) - want) < mp.mpf(10) ** -70


def test_shimizu_inequality_on_conjugates():
    with CTX.working():
        for N in (2, 3, 7, 12):
            gens = group_generators(N, CTX)
            cot = gens.translation_length / 2
            for k in range(1, N):
                g = (gens.rotation.pow(k) @ gens.translation) @ gens.rotation.pow(-k)
                assert 2 * abs(g.c) * cot >= 1 - mp.mpf(10) ** -40


def test_moebius_det_and_composition():
    with CTX.working():
        gens = group_generators(3, CTX)
        prod = gens.translation @ gens.rotation
        assert abs(prod.det() - 1) < mp.mpf(10) ** -70
        z = mpc("0.2", "0.6")
        lhs = prod.to_model(DISK).apply(z)
        rhs = gens.translation_disk.apply(gens.rotation_disk.apply(z))
        assert abs(lhs - rhs) < mp.mpf(10) ** -68


def test_horoball_formula():
    with CTX.working():
        ident = Moebius(mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(1))
        h = horoball_image(ident, mp.mpf(4))
        assert abs(h.diameter - mp.mpf(2) / 5) < mp.mpf(10) ** -70
        assert abs(h.tangency - 1) < mp.mpf(10) ** -70
        # translations share a, c with the identity, hence the same horoball
        gens = group_generators(4, CTX)
        h2 = horoball_image(gens.translation, mp.mpf(4))
        assert abs(h2.diameter - h.diameter) < mp.mpf(10) ** -70
        # a = 0, c = 1, D = 3: diameter 1/2, tangency -1
        w = Moebius(mp.mpf(0), mp.mpf(-1), mp.mpf(1), mp.mpf(0))
        h3 = horoball_image(w, mp.mpf(3))
        assert abs(h3.diameter - mp.mpf(1) / 2) < mp.mpf(10) ** -70
        assert abs(h3.tangency + 1) < mp.mpf(10) ** -70


def test_horoball_invariants():
    with pytest.raises(DomainError):
        Horoball(mp.mpc(1), mp.mpf(0))
    with pytest.raises(DomainError):
        horoball_image(Moebius(mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(1)),
                       mp.mpf(-1))


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

def test_reduce_interior_point_is_fixed():
    with CTX.working():
        x0, word = reduce_to_domain(4, mpc("0.1", "0.2"), CTX)
        assert word == []
        assert abs(x0 - mpc("0.1", "0.2")) == 0


def test_reduce_constructed_translate():
    with CTX.working():
        gens = group_generators(5, CTX)
        inner = mpc("0.15", "0.1")
        moved = gens.translation_disk.apply(inner)
        x0, word = reduce_to_domain(5, moved, CTX)
        assert abs(x0 - inner) < mp.mpf(10) ** -70
        assert [w[:2] for w in word] == [("g", 0)]
        assert word[0][2] == 1


def test_reduce_roundtrip_near_boundary():
    rng = random.Random(11)
    with CTX.working():
        for _ in range(6):
            theta = 2 * mp.pi * mp.mpf(rng.random())
            x = mp.mpf("0.999") * mp.exp(1j * theta)
            x0, word = reduce_to_domain(5, x, CTX)
            back = apply_word(5, word, x0, CTX)
            assert abs(back - x) < mp.mpf(10) ** -20
            assert abs(x0) <= abs(x)


# ---------------------------------------------------------------------------
# the covering map
# ---------------------------------------------------------------------------

def test_f_at_zero():
    rep = f_n_eval(3, 0, CTX)
    assert rep.value == 0 and rep.word == []


def test_outside_disc_rejected():
    with pytest.raises(DomainError):
        f_n_eval(3, mpc("1.2"), CTX)


def lambda_oracle_f2(x):
    """F_2(x) = 1 - 2 lambda(tau), tau = i(1+x)/(1-x): exact eta-quotient
    q-series, valid wherever the q-series converges comfortably."""
    lam = lambda_over_16(220)
    tau = 1j * (1 + x) / (1 - x)
    q = mp.exp(1j * mp.pi * tau)
    assert abs(q) < mp.mpf("0.75")
    val = 16 * mp.fsum(CTX.to_mp(c) * q ** int(e) for e, c in lam.coefficients())
    return 1 - 2 * val


def test_against_exact_lambda_oracle():
    with CTX.working():
        for x in (mpc("0.2"), mpc("-0.35"), mpc("0.1", "0.25"),
                  mpc("0.42", "-0.31"), mpc("0.0", "0.6"), mpc("0.72", "0.1")):
            rep = f_n_eval(2, x, CTX)
            assert abs(rep.value - lambda_oracle_f2(x)) < mp.mpf(10) ** -50
            assert rep.residual < mp.mpf(10) ** -50


def test_rotation_equivariance():
    with CTX.working():
        for N in (2, 3, 5, 8):
            zeta = mp.exp(2j * mp.pi / N)
            for j in range(4):
                x = mp.mpf("0.5") * mp.exp(1j * (mp.mpf("0.13") + j))
                lhs = f_n_eval(N, zeta * x, CTX).value
                rhs = zeta * f_n_eval(N, x, CTX).value
                assert abs(lhs - rhs) < mp.mpf(10) ** -20


def test_inverse_pair_roundtrip():
    rng = random.Random(5)
    with CTX.working():
        for N in (2, 3, 5, 8):
            for _ in range(6):
                rr = mp.mpf("0.3") * mp.sqrt(mp.mpf(rng.random()))
                x = rr * mp.exp(2j * mp.pi * mp.mpf(rng.random()))
                v = f_n_eval(N, x, CTX).value
                assert abs(psi_n(v, N, CTX) - x) < mp.mpf(10) ** -20


def test_deck_invariance():
    with CTX.working():
        for N in (2, 4):
            gens = group_generators(N, CTX)
            x = mpc("0.21", "0.33")
            base = f_n_eval(N, x, CTX).value
            deck = [gens.translation_disk, gens.translation_disk.inv()]
            deck.append((gens.rotation.pow(1) @ gens.translation)
                        @ gens.rotation.pow(-1))
            for g in deck:
                gd = g if g.model == DISK else g.to_model(DISK)
                moved = gd.apply(x)
                assert abs(f_n_eval(N, moved, CTX).value - base) < mp.mpf(10) ** -20


def test_taylor_two_method_agreement():
    # series route (exact reversion coefficients) against the Newton route
    rng = random.Random(3)
    with CTX.working():
        for N in (2, 5):
            for _ in range(5):
                x = mp.mpf("0.2") * mp.exp(2j * mp.pi * mp.mpf(rng.random()))
                series_value = f_n_taylor(N, x, CTX, terms=40)
                newton_value = f_n_eval(N, x, CTX).value
                assert abs(series_value - newton_value) < mp.mpf(10) ** -15


def test_cusp_refusal():
    with CTX.working():
        with pytest.raises(CuspRefusal):
            f_n_eval(3, 1 - mp.mpf(10) ** -8, CTX)


def test_inversion_symmetry_twist():
    with CTX.working():
        for N in (2, 4):
            s = mp.exp(1j * mp.pi / N)
            for x in (mpc("0.5", "0.1"), mpc("0.3", "-0.2")):
                lhs = 1 - f_n_eval(N, s * x, CTX).value ** N
                rhs = 1 / (1 - f_n_eval(N, x, CTX).value ** N)
                assert abs(lhs - rhs) < mp.mpf(10) ** -40


def test_g_map():
    with CTX.working():
        assert g_n_eval(3, 0, CTX) == 0
        for N in (2, 4):
            h = mp.mpf(2) ** -40
            d = (g_n_eval(N, h, CTX) - g_n_eval(N, -h, CTX)) / (2 * h)
            assert abs(d - gamma_n(N, CTX) ** N) < mp.mpf(10) ** -18


def test_report_pow_fields():
    with CTX.working():
        rep = f_n_eval(4, mpc("0.3", "0.2"), CTX)
        assert abs(rep.f_pow_n - rep.value ** 4) < mp.mpf(10) ** -60
        assert abs(rep.one_minus_f_pow_n - (1 - rep.value ** 4)) < mp.mpf(10) ** -60


def test_sup_scan_sector_symmetry():
    ctx = PrecisionCtx(128)
    with ctx.working():
        N, r = 3, mp.mpf("0.8")
        sector = sup_scan(N, r, 16, ctx)
        # manual full-circle scan over the orbit of the same sample angles
        width = 2 * mp.pi / N
        best = mp.mpf("-inf")
        for j in range(16):
            theta = (j + mp.mpf("0.5")) * width / 16
            for k in range(N):
                v = f_n_eval(N, r * mp.exp(1j * (theta + k * width)), ctx).value
                best = max(best, mp.log(abs(v)))
        assert abs(best - sector) < mp.mpf(10) ** -25


def test_sup_scan_monotone_in_radius():
    ctx = PrecisionCtx(128)
    with ctx.working():
        lo = sup_scan(2, mp.mpf("0.5"), 24, ctx)
        hi = sup_scan(2, mp.mpf("0.8"), 24, ctx)
        assert hi > lo


def test_covering_evaluator_seeding():
    ctx = PrecisionCtx(128)
    with ctx.working():
        ev = CoveringEvaluator(3, ctx)
        vals = [ev(mp.mpf("0.7") * mp.exp(1j * mp.mpf(t) / 40)) for t in range(6)]
        fresh = [f_n_eval(3, mp.mpf("0.7") * mp.exp(1j * mp.mpf(t) / 40), ctx).value
                 for t in range(6)]
        for a, b in zip(vals, fresh):
            assert abs(a - b) < mp.mpf(10) ** -25
