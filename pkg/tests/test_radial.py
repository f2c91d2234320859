"""Radial summation against the exact series, extrapolation synthetics, and a
desk-lite asymptotic match (the full twelve-row run lives in acceptance)."""

import random

import pytest
from mpmath import mp

from pretzel237.numerics import ModularPair
from pretzel237.qseries import _h_family
from pretzel237.radial import (aitken_accelerate, asymptotic_match,
                               h_value_radial, radial_samples, richardson)


@pytest.mark.parametrize("j,sign,lam", [
    (0, "plus", 0), (1, "minus", 0), (2, "plus", 1), (3, "minus", -1),
    (4, "plus", 2), (5, "minus", 0),
])
def test_radial_summation_matches_exact_series(j, sign, lam):
    pair = ModularPair(mp.mpc(1, 1) / 2, 128)
    with mp.workprec(160):
        q8 = pair.qpow(mp.mpf(1) / 8)
        direct = h_value_radial(j, sign, lam, pair.q, 128, q8=q8)
        exact = pair.eval_series(_h_family(sign, lam, j, 480), "q")
        assert abs(direct - exact) < mp.mpf(2) ** -100


def test_radial_leading_term_bound():
    # |H^+_{0,0}(q) - 1| is controlled by |q|^3 once |q| is away from 1;
    # close to the circle the sum is finite but exponentially large
    with mp.workprec(120):
        tau = mp.exp(1j * mp.pi / 5) / 12
        q = mp.exp(2j * mp.pi * tau)
        val = h_value_radial(0, "plus", 0, q, 96)
        assert abs(val - 1) < 50 * abs(q) ** 3
        tau100 = mp.exp(1j * mp.pi / 5) / 100
        q100 = mp.exp(2j * mp.pi * tau100)
        v100 = h_value_radial(0, "plus", 0, q100, 96)
        assert mp.isfinite(v100.real) and mp.isfinite(v100.imag)


def test_radial_sample_halved_precision_oracle():
    # the same sum at halved precision agrees to the lower precision
    with mp.workprec(200):
        tau = mp.exp(1j * mp.pi / 5) / 80
        q = mp.exp(2j * mp.pi * tau)
        q8 = mp.exp(2j * mp.pi * tau / 8)
        hi = h_value_radial(1, "plus", 0, q, 192, q8=q8)
        lo = h_value_radial(1, "plus", 0, q, 96, q8=q8)
        assert abs(hi - lo) < mp.mpf(2) ** -80 * max(1, abs(hi))


def test_radial_samples_reject_bad_rays():
    with pytest.raises(ValueError):
        radial_samples(0, "plus", 0.0, [10])
    with pytest.raises(ValueError):
        radial_samples(0, "plus", 3.2, [10])


def test_richardson_polynomial_tail():
    with mp.workprec(160):
        ns = list(range(5, 30))
        vals = [1 + mp.mpf(1) / n + mp.mpf(1) / n ** 2 for n in ns]
        lim, err = richardson(vals, 3, ns)
        assert abs(lim - 1) < mp.mpf(2) ** -100


def test_richardson_random_power_tail():
    rng = random.Random(8)
    with mp.workprec(200):
        cs = [mp.mpf(rng.uniform(-3, 3)) for _ in range(4)]
        ns = list(range(10, 40))
        vals = [cs[0] + sum(c / n ** (k + 1) for k, c in enumerate(cs[1:]))
                for n in ns]
        lim, err = richardson(vals, 6, ns)
        assert abs(lim - cs[0]) < mp.mpf(2) ** -100


@pytest.mark.parametrize("depth", range(1, 9))
def test_richardson_pure_power_recovery(depth):
    # depth-d elimination of a pure power tail recovers the limit sharply
    with mp.workprec(200):
        ns = list(range(8, 40))
        vals = [mp.mpf(2) + mp.mpf(3) / n ** depth for n in ns]
        lim, _ = richardson(vals, depth + 1, ns)
        assert abs(lim - 2) < mp.mpf(10) ** -(depth + 2)


def test_richardson_depth_zero_returns_raw():
    vals = [mp.mpf(k) for k in (1, 2, 3)]
    lim, _ = richardson(vals, 0, [1, 2, 3])
    assert lim == 3


def test_aitken_kills_geometric_transient():
    with mp.workprec(160):
        ns = list(range(30))
        vals = [mp.mpf(5) + mp.mpf("0.8") ** n for n in ns]
        acc = aitken_accelerate(vals, sweeps=2)
        assert abs(acc[-1] - 5) < mp.mpf("1e-10")


def test_asymptotic_match_desk_lite():
    rep = asymptotic_match(1, "plus", mp.pi / 5, K=6, prec=160,
                           N_list=list(range(60, 121, 6)))
    assert rep.matches_designated
    assert rep.digits_matched >= 6
    assert rep.constant_modulus_error < 1e-6


def test_asymptotic_match_digits_improve_with_K():
    # weak monotonicity up to the superasymptotic floor
    kwargs = dict(prec=160, N_list=list(range(60, 121, 10)))
    d2 = asymptotic_match(1, "plus", mp.pi / 5, K=1, **kwargs).digits_matched
    d6 = asymptotic_match(1, "plus", mp.pi / 5, K=6, **kwargs).digits_matched
    assert d6 >= d2
