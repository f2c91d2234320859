"""Acceptance suite: one test per criterion, each at its stated tolerance,
printing a PASS/FAIL line (run with -s to see them inline).

Every expected value here is either a frozen reference constant (asserted
with zero tolerance in exact arithmetic) or dual-route: quadrature against
series, closed form against numeric limit, formal expansion against a
model-integral fit.
"""

import time

import pytest
from mpmath import mp

from pretzel237.rings import QQ, qq_parse
from pretzel237.series import DENOM
from pretzel237 import qdiff, qseries
from pretzel237.qseries import SeriesFamilyKey, r_approximant, _h_family
from pretzel237.statphase import (critical_points, delta, gaussian_expand,
                                  model_integral_ratio)
from pretzel237.numerics import (ModularPair, f_entry_vs_descendant,
                                 factorization_residual, faddeev,
                                 faddeev_residue_closed,
                                 faddeev_residue_numeric, cocycle_matrices)
from pretzel237.radial import asymptotic_match


def report(num, ok, detail):
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def points():
    return critical_points(256)


@pytest.fixture(scope="module")
def expansions(points):
    return {p.label: gaussian_expand(p, 10) for p in points}


# -- 1: q-series ground truth (exact, zero tolerance) ------------------------

HQ_REFERENCE = {
    (0, "plus"): [(0, "1"), (24, "1"), (32, "3"), (40, "7"), (48, "13")],
    (0, "minus"): [(0, "1"), (16, "1"), (24, "3"), (32, "7"), (40, "13")],
    (1, "plus"): [(0, "1"), (8, "-4"), (16, "-8"), (24, "-3"), (32, "3")],
    (1, "minus"): [(0, "1"), (8, "-4"), (16, "-5"), (24, "1"), (32, "7")],
    (2, "plus"): [(0, "2/3"), (8, "-6"), (16, "6"), (24, "242/3"), (32, "200")],
    (2, "minus"): [(0, "5/6"), (8, "-10"), (16, "17/6"), (24, "141/2"),
                   (32, "971/6")],
    (3, "plus"): [(9, "1"), (13, "2"), (17, "4"), (21, "6")],
    (3, "minus"): [(7, "1"), (11, "2"), (15, "4"), (19, "6")],
    (4, "plus"): [(0, "1"), (24, "1"), (32, "-1"), (40, "3"), (48, "-3")],
    (4, "minus"): [(0, "1"), (16, "1"), (24, "-1"), (32, "3"), (40, "-3")],
    (5, "plus"): [(9, "1"), (13, "-2"), (17, "4"), (21, "-6")],
    (5, "minus"): [(7, "1"), (11, "-2"), (15, "4"), (19, "-6")],
}


def test_criterion_1_reference_series():
    t0 = time.time()
    bad = []
    for (j, sign), entries in HQ_REFERENCE.items():
        h = _h_family(sign, 0, j, 64)
        for k, c in entries:
            if h.coeff(k) != qq_parse(c):
                bad.append((j, sign, k))
    report(1, not bad and time.time() - t0 < 10,
           f"twelve series vs reference terms, exact ({time.time() - t0:.1f}s)")


# -- 2: the linear recurrence annihilates every family ----------------------

def test_criterion_2_recurrence():
    t0 = time.time()
    bad = []
    for j in range(6):
        for lam in range(-3, 4):
            for branch in ("inside", "outside"):
                r = qdiff.recurrence_residual(j, lam, branch, 80)
                if not (r.is_zero() and (r.trunc is None or r.trunc >= 80)):
                    bad.append((j, lam, branch))
    dt = time.time() - t0
    report(2, not bad and dt < 120,
           f"84 recurrence residuals exactly zero at order 80/8 ({dt:.1f}s)")


# -- 3: the Wronskian determinant monomial -----------------------------------

def test_criterion_3_determinant():
    t0 = time.time()
    ok = True
    for lam in (0, 1, 2):
        det = qdiff.wronskian_det(lam, 96)
        ok = ok and det.eq_mod(qdiff.det_expected(lam, 96))
    dt = time.time() - t0
    report(3, ok and dt < 300,
           f"det W_lam = 32 q^(lam+11/4) exactly, lam in 0..2, order 96/8 ({dt:.1f}s)")


# -- 4: orthogonality and the quadratic relation ------------------------------

def test_criterion_4_orthogonality_quadratic():
    t0 = time.time()
    ok = all(qdiff.orthogonality_residual(lam, 64).is_zero() for lam in (0, 1))
    ok = ok and all(qdiff.quadratic_relation(lam, 64).is_zero()
                    for lam in (-1, 0, 1))
    dt = time.time() - t0
    report(4, ok and dt < 600,
           f"orthogonality (lam 0,1) and quadratic relation (lam -1..1) exact ({dt:.1f}s)")


# -- 5: symbolic self-duality -------------------------------------------------

def test_criterion_5_symbolic_selfduality():
    t0 = time.time()
    rep = qdiff.verify_symbolic_selfduality()
    # the conjugation identity holds with the transpose on the shifted dual
    # companion; the untransposed orientation fails and is reported
    ok = (rep["a_tilde_is_inverse"] and rep["conjugation_holds"]
          and rep["det_a"] and rep["det_a_tilde"] and rep["det_q"])
    dt = time.time() - t0
    report(5, ok and dt < 1.0,
           f"A Q A~(lam+5)^T = Q(lam+1), dets (q, q, -64 q^(5+2lam)) exact "
           f"(untransposed orientation: {rep['conjugation_untransposed']}) ({dt:.2f}s)")


# -- 6: stationary-phase coefficients ----------------------------------------

def test_criterion_6_stationary_phase(points, expansions):
    t0 = time.time()
    xi1, eta4 = points[0], points[3]
    exp_xi = expansions["sigma1"]
    exp_eta = expansions["sigma4"]
    ok = tuple(exp_xi.c[1].coeff(2).coords) == (QQ(3, 92), QQ(-7, 92), QQ(-1, 46))
    ok &= tuple(exp_xi.c[1].coeff(1).coords) == (QQ(17, 46), QQ(-11, 92), QQ(3, 46))
    ok &= tuple(exp_xi.c[1].coeff(0).coords) == (QQ(-681, 8464), QQ(127, 2116),
                                                 QQ(293, 8464))
    ok &= tuple(exp_eta.c[1].coeff(2).coords) == (QQ(-1, 28), QQ(1, 14), QQ(1, 28))
    ok &= tuple(exp_eta.c[1].coeff(1).coords) == (QQ(3, 14), QQ(-1, 14), QQ(1, 28))
    ok &= tuple(exp_eta.c[1].coeff(0).coords) == (QQ(-17, 168), QQ(1, 16), QQ(1, 16))
    ok &= tuple(delta(xi1).coords) == (QQ(-4), QQ(10), QQ(-6))
    ok &= tuple(delta(eta4).coords) == (QQ(-2), QQ(2), QQ(-4))
    ok &= tuple(exp_xi.c[2].coeff(0).coords) == (
        QQ(2535, 778688), QQ(-50607, 6229504), QQ(65537, 6229504))
    eta_c2 = tuple(exp_eta.c[2].coeff(0).coords)
    # recorded: the eta-field hbar^2 coefficient
    ok &= eta_c2 == (QQ(85, 225792), QQ(43, 10752), QQ(23, 5376))
    exact_time = time.time() - t0

    # independent oracle: saddle-point quadrature of the model integral,
    # fitted for c_2 at hbar = 10^-3.  Weights kept through 7 so the model's
    # c_k equal the full ones for k <= 7; the exact c_1, c_3, c_4, c_5 are
    # subtracted and the budget is the next exact term plus the quadrature
    # resolution floor (1e-8, six orders below the c_2 scale being confirmed).
    t1 = time.time()
    oracle_ok = True
    with mp.workprec(400):
        hb = mp.mpf(1) / 1000
        for p in (points[0], points[5]):
            exp_ = expansions[p.label]
            emb = p.embedding_index
            cs = [exp_.c[k](0).numeric(emb, 360) for k in range(7)]
            r = model_integral_ratio(p, hb, weight_max=7, prec_bits=320,
                                     nodes=3200)
            est = (r - 1 - cs[1] * hb - cs[3] * hb ** 3 - cs[4] * hb ** 4
                   - cs[5] * hb ** 5) / hb ** 2
            budget = 3 * abs(cs[6]) * hb ** 4 + mp.mpf(10) ** -8
            oracle_ok = oracle_ok and abs(est - cs[2]) < budget
    dt = time.time() - t1
    report(6, ok and oracle_ok and exact_time < 60 and dt < 600,
           f"c1/Delta/c2 exact vs reference, eta c2 = 23/5376 eta^2 + 43/10752 eta"
           f" + 85/225792 recorded, oracle fit agrees "
           f"({exact_time:.1f}s exact, {dt:.1f}s oracle)")


# -- 7: the factorization of the descendant state integral -------------------

def test_criterion_7_factorization():
    t0 = time.time()
    pair = ModularPair(mp.mpc(1, 1) / 2, 192)
    worst = mp.mpf(0)
    for lam, lp in ((0, 0), (1, 0), (0, -1), (2, 1)):
        res, _, _ = factorization_residual(pair, lam, lp, 800)
        worst = max(worst, res)
    dt = time.time() - t0
    report(7, worst < mp.mpf(10) ** -30 and dt < 900,
           f"factorization residuals at tau=(1+i)/2, four (lam, lam') pairs: "
           f"worst {mp.nstr(worst, 3)} < 1e-30 ({dt:.1f}s)")


# -- 8: quantum dilogarithm properties ----------------------------------------

def test_criterion_8_faddeev_properties():
    t0 = time.time()
    pair = ModularPair(mp.mpc(1, 1) / 2, 256)
    tol = mp.mpf(10) ** -40
    worst = mp.mpf(0)
    with mp.workprec(320):
        import random
        rng = random.Random(1234)
        c = pair.qpow(QQ(1, 24)) * pair.qtpow(QQ(-1, 24))
        for _ in range(20):
            x = mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2))
            lhs = faddeev(pair, x) * faddeev(pair, -x)
            rhs = mp.exp(1j * mp.pi * x ** 2) * c
            worst = max(worst, abs(lhs - rhs))
            base = faddeev(pair, x + pair.c_b)
            q1 = faddeev(pair, x + pair.c_b + 1j * pair.b) / base
            worst = max(worst, abs(q1 - 1 / (1 - pair.q * mp.exp(2 * mp.pi * pair.b * x))))
            q2 = faddeev(pair, x + pair.c_b + 1j / pair.b) / base
            worst = max(worst, abs(q2 - 1 / (1 - mp.exp(2 * mp.pi * x / pair.b) / pair.qt)))
        for mn in ((0, 0), (1, 0), (0, 1)):
            a = faddeev_residue_closed(pair, *mn)
            b = faddeev_residue_numeric(pair, *mn, points=8)
            worst = max(worst, abs(a - b))
    dt = time.time() - t0
    report(8, worst < tol and dt < 120,
           f"quasi-periodicity, inversion, three residues: worst "
           f"{mp.nstr(worst, 3)} < 1e-40 at prec 256 ({dt:.1f}s)")


# -- 9: the cocycle and the descendant matrix ---------------------------------

def test_criterion_9_cocycle():
    t0 = time.time()
    tol = mp.mpf(10) ** -25
    ok = True
    for tau in (mp.mpc(1, 1) / 2, mp.mpc(-1, 2) / 3):
        pair = ModularPair(tau, 192)
        _, _, cons = cocycle_matrices(pair, 0, 0, 600)
        ok = ok and cons < tol
    pair = ModularPair(mp.mpc(1, 1) / 2, 192)
    _, _, diff = f_entry_vs_descendant(pair, 0, 0, 600, 5, 0)
    ok = ok and diff < tol
    _, _, diff2 = f_entry_vs_descendant(pair, 0, 0, 600, 0, 0)
    ok = ok and diff2 < tol
    dt = time.time() - t0
    report(9, ok and dt < 1200,
           f"cocycle consistency at two tau and two F entries vs direct "
           f"integrals < 1e-25 ({dt:.1f}s)")


# -- 10: radial matching ------------------------------------------------------

def test_criterion_10_radial(points, expansions):
    t0 = time.time()
    theta = mp.pi / 5
    n_list = list(range(120, 201, 4))
    ok = True
    lines = []
    for j in range(6):
        for sign in ("plus", "minus"):
            rep = asymptotic_match(j, sign, theta, K=10, prec=256,
                                   N_list=n_list, expansions=expansions)
            good = (rep.matches_designated and rep.digits_matched >= 5
                    and rep.constant_modulus_error < 1e-4)
            ok = ok and good
            lines.append(f"{j}{sign[0]}:{rep.sigma_label[-1]}/{rep.digits_matched}")
    dt = time.time() - t0
    report(10, ok and dt < 1800,
           "twelve radial rows matched (sigma/digits): "
           + " ".join(lines) + f" ({dt:.1f}s)")


# -- 11: the large-deformation approximant gap --------------------------------

def test_criterion_11_approximant_gap():
    t0 = time.time()
    ok = True
    for lam in (6, 8):
        bound = 12 * lam  # 3 lam/2 on the eighth lattice
        order = bound + 4 * DENOM
        for j in range(6):
            for sign in ("plus", "minus"):
                h = _h_family(sign, lam, j, order)
                r = r_approximant(SeriesFamilyKey(lam, j, sign), order)
                diff = h - r
                if not diff.is_zero() and diff.val() < bound:
                    ok = False
    dt = time.time() - t0
    report(11, ok and dt < 300,
           f"valuation(H - R) >= 3 lam/2 for lam in (6, 8), all families ({dt:.1f}s)")
