"""Stationary-phase data of the renormalized state integral.

The six critical points alpha solve (a^3-a-1)(a^3+2a^2-a-1) = 0 and split
into two Galois orbits living in the cubic fields of discriminant -23
(generator xi, a = xi^2 - xi) and 49 (generator eta, a = -1-eta).  At each
point the potential's Taylor data V_{n,m} is exact in the field (nonpositive
polylogarithms are rational functions), and a formal Gaussian integration
produces the expansion coefficients c_k(alpha, lambda), polynomials in the
deformation parameter of degree 2k over the field.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import factorial

from mpmath import mp

from .rings import (QQ, QQ0, QQ1, NFElement, NumberField, XI_FIELD, ETA_FIELD,
                    LambdaPoly, bernoulli_half, poly_mul, poly_add, poly_scale,
                    poly_trim)

SIGMA_LABELS = ("sigma1", "sigma2", "sigma3", "sigma4", "sigma5", "sigma6")


@dataclass(frozen=True)
class CriticalPoint:
    field: NumberField
    alpha: NFElement
    embedding_index: int
    label: str

    def numeric(self, prec_bits: int = 256):
        return self.alpha.numeric(self.embedding_index, prec_bits)

    def __repr__(self):
        return f"CriticalPoint({self.label}, {self.field.label})"


def critical_points(prec_bits: int = 256) -> list[CriticalPoint]:
    """All six critical points, ordered sigma1..sigma6.

    Within each field the embeddings are ordered by (Re, Im) of the critical
    value itself, which fixes the numbering: two conjugate
    complex points then the real one for the xi-field, three reals ascending
    for the eta-field.
    """
    pts = []
    for fld, alpha in ((XI_FIELD, XI_FIELD.from_coords([0, -1, 1])),
                       (ETA_FIELD, ETA_FIELD.from_coords([-1, -1, 0]))):
        vals = []
        for k in range(fld.degree):
            z = alpha.numeric(k, prec_bits)
            vals.append((mp.re(z), mp.im(z), k))
        vals.sort(key=lambda t: (t[0], t[1]))
        for _, _, k in vals:
            pts.append((fld, alpha, k))
    return [CriticalPoint(f, a, k, SIGMA_LABELS[i])
            for i, (f, a, k) in enumerate(pts)]


def xi_point(index: int = 0, prec_bits: int = 256) -> CriticalPoint:
    return critical_points(prec_bits)[index]


# ---------------------------------------------------------------------------
# nonpositive polylogarithms, exactly in the field
# ---------------------------------------------------------------------------

_LI_NUMERATORS: list[list] = [[QQ0, QQ1]]  # Li_0 numerator: w  (over (1-w)^1)


def _li_numerator(k: int):
    """Numerator polynomial N_k with Li_{-k}(w) = N_k(w) / (1-w)^(k+1)."""
    while len(_LI_NUMERATORS) <= k:
        n = len(_LI_NUMERATORS) - 1
        N = _LI_NUMERATORS[-1]
        # w d/dw [N/(1-w)^(n+1)] = w (N'(1-w) + (n+1) N) / (1-w)^(n+2)
        dN = poly_trim([i * c for i, c in enumerate(N)][1:])
        inner = poly_add(poly_mul(dN, [QQ1, QQ(-1)]), poly_scale(N, QQ(n + 1)))
        _LI_NUMERATORS.append(poly_mul([QQ0, QQ1], inner))
    return _LI_NUMERATORS[k]


def polylog_nonpos(s: int, w: NFElement) -> NFElement:
    """Li_s(w) for s <= 0 evaluated exactly in the number field of w."""
    if s > 0:
        raise ValueError("only nonpositive polylogarithm index is rational")
    fld = w.field
    one_minus = fld.one - w
    if fld.is_zero(one_minus):
        raise ZeroDivisionError("polylogarithm pole at w = 1")
    k = -s
    N = _li_numerator(k)
    num = fld.zero
    for c in reversed(N):
        num = num * w + fld.coerce(c)
    return num * (one_minus.inv() ** (k + 1))


# ---------------------------------------------------------------------------
# the V_{n,m} table
# ---------------------------------------------------------------------------

def _b_half_fact(n: int):
    """B_{2n}(1/2) / (2n)!"""
    return bernoulli_half(n) / QQ(factorial(2 * n))


def _even_weight_sum(n: int):
    """sum_{k<=n} B_{2n-2k}(1/2) / ((2n-2k)! (2k)! 2^(2k))"""
    s = QQ0
    for k in range(n + 1):
        s += _b_half_fact(n - k) / QQ(factorial(2 * k) * 4 ** k)
    return s


def _odd_weight_sum(n: int):
    """sum_{k<=n} B_{2n-2k}(1/2) / ((2n-2k)! (2k+1)! 2^(2k+1))"""
    s = QQ0
    for k in range(n + 1):
        s += _b_half_fact(n - k) / QQ(factorial(2 * k + 1) * 2 * 4 ** k)
    return s


@dataclass
class VTable:
    """Exact Taylor data of the potential at one critical point.

    ``entries[(n, m)]`` holds V_{n,m} for every requested index whose
    polylogarithm order is <= 0; the transcendental corner cases are not
    stored: V_{0,0} and V_{1,0} are numeric-prefactor data, V_{0,1} equals
    -2 pi i lambda' and cancels against the deformation insertion.
    """
    point: CriticalPoint
    n_max: int
    m_max: int
    entries: dict = dc_field(default_factory=dict)

    def __getitem__(self, nm):
        return self.entries[nm]


def v_table(point: CriticalPoint, n_max: int, m_max: int) -> VTable:
    fld = point.field
    alpha = point.alpha
    minus_alpha = -alpha
    alpha_minus2 = (alpha * alpha).inv()
    tab = VTable(point, n_max, m_max)
    for n in range(n_max + 1):
        for m in range(m_max + 1):
            if (n, m) in ((0, 0), (0, 1), (1, 0)):
                continue
            if n % 2 == 0:
                idx = 2 - n - m
                if idx > 0:
                    continue
                half_n = n // 2
                term1 = polylog_nonpos(idx, minus_alpha) * (2 * _b_half_fact(half_n))
                term2 = polylog_nonpos(idx, alpha_minus2) * (
                    QQ(-2) ** m * _even_weight_sum(half_n))
                val = (term1 - term2) * QQ(1, factorial(m))
            else:
                idx = 1 - (n - 1) - m
                if idx > 0:
                    continue
                half_n = (n - 1) // 2
                val = polylog_nonpos(idx, alpha_minus2) * (
                    -QQ(-2) ** m * QQ(1, factorial(m)) * _odd_weight_sum(half_n))
            tab.entries[(n, m)] = val
    return tab


def v02(point: CriticalPoint) -> NFElement:
    """V_{0,2} = Li_0(-a) - 2 Li_0(a^-2), the Gaussian weight."""
    alpha = point.alpha
    return (polylog_nonpos(0, -alpha)
            - 2 * polylog_nonpos(0, (alpha * alpha).inv()))


def delta(point: CriticalPoint) -> NFElement:
    """Delta = 2 V_{0,2} e^(-2 V_{1,0}) with e^(2 V_{1,0}) = 1 - a^-2, exact."""
    alpha = point.alpha
    e2v10 = point.field.one - (alpha * alpha).inv()
    return 2 * v02(point) * e2v10.inv()


def delta_quintic(point: CriticalPoint) -> NFElement:
    """The quintic closed form -2a^5 + 12a^3 - 2a^2 - 16a - 10, reduced."""
    a = point.alpha
    return -2 * a ** 5 + 12 * a ** 3 - 2 * a * a - 16 * a - 10 * point.field.one


# ---------------------------------------------------------------------------
# formal Gaussian integration
# ---------------------------------------------------------------------------

@dataclass
class AsymptoticSeries:
    point: CriticalPoint
    K: int
    c: list          # c[k] is a LambdaPoly over the field, degree <= 2k
    delta: NFElement

    def coeff_numeric(self, k: int, lam: int, prec_bits: int = 256):
        return self.c[k](lam).numeric(self.point.embedding_index, prec_bits)


def _poly2_mul(f, g, fld):
    out = {}
    for (y1, l1), a in f.items():
        for (y2, l2), b in g.items():
            k = (y1 + y2, l1 + l2)
            p = a * b
            if k in out:
                out[k] = out[k] + p
            else:
                out[k] = p
    return {k: v for k, v in out.items() if not fld.is_zero(v)}


def gaussian_expand(point: CriticalPoint, K: int) -> AsymptoticSeries:
    """Expansion coefficients c_k(alpha, lambda) for k <= K by formal Gaussian
    integration against e^(V02 y^2).

    The exponential insertion collects, in powers s^w of s = hbar^(1/2),
    the deformation term lambda*s*y and every V_{n,m} with weight
    n-1+m/2 > 0; the (1,0) constant and the Gaussian weight (0,2) are handled
    by the closed-form prefactor, and (0,1) cancels by the critical-point
    equation.  Odd moments vanish, so odd half-powers of hbar drop out
    structurally and c_k is the s^(2k) row.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    fld = point.field
    V02 = v02(point)
    if fld.is_zero(V02):
        raise ZeroDivisionError("degenerate critical point: V_{0,2} = 0")
    tab = v_table(point, K + 1, 2 * K + 2)
    smax = 2 * K
    # S[w] = polynomial in (y, lambda) entering at s^w
    S = [dict() for _ in range(smax + 1)]
    if smax >= 1:
        S[1][(1, 1)] = fld.one  # lambda * s * y
    for (n, m), val in tab.entries.items():
        if n == 0 and m < 3:
            continue
        w = 2 * n - 2 + m
        if 1 <= w <= smax:
            key = (m, 0)
            S[w][key] = S[w].get(key, fld.zero) + val
    # exp(S) by the derivative recurrence F_r = (1/r) sum k S_k F_{r-k}
    F = [dict() for _ in range(smax + 1)]
    F[0][(0, 0)] = fld.one
    for r in range(1, smax + 1):
        acc = {}
        for k in range(1, r + 1):
            if not S[k]:
                continue
            part = _poly2_mul(S[k], F[r - k], fld)
            for key, v in part.items():
                vv = v * k
                acc[key] = acc[key] + vv if key in acc else vv
        inv_r = QQ(1, r)
        F[r] = {key: v * inv_r for key, v in acc.items() if not fld.is_zero(v)}
    # Gaussian moments: <y^(2p)> = (2p-1)!! / (-2 V02)^p, odd moments vanish
    minus_2v02_inv = (-2 * V02).inv()
    c = []
    for k in range(K + 1):
        r = 2 * k
        coeffs = {}
        for (dy, dl), v in F[r].items():
            if dy % 2:
                continue
            p = dy // 2
            mom = fld.one * _double_factorial(2 * p - 1)
            mom = mom * (minus_2v02_inv ** p)
            w = v * mom
            coeffs[dl] = coeffs[dl] + w if dl in coeffs else w
        deg = max(coeffs) if coeffs else 0
        c.append(LambdaPoly(fld, [coeffs.get(i, fld.zero) for i in range(deg + 1)]))
    for r in range(1, smax + 1, 2):
        for (dy, _), v in F[r].items():
            if dy % 2 == 0 and not fld.is_zero(v):
                raise AssertionError("odd half-power of hbar survived the moments")
    if c[0] != LambdaPoly.const(fld, fld.one):
        raise AssertionError("normalization failed: c_0 != 1")
    return AsymptoticSeries(point, K, c, delta(point))


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


# ---------------------------------------------------------------------------
# numerics: dilogarithm, the exponential prefactor, model-integral oracle
# ---------------------------------------------------------------------------

def li2(z, side: int = 1):
    """Dilogarithm at working precision, principal branch.

    ``side`` selects the boundary value on the cut [1, oo): +1 means the
    limit from above (z + i0), -1 from below.  Off the cut the parameter is
    irrelevant.  Uses inversion/reflection to shrink the argument, then the
    rapidly convergent log-series with Bernoulli weights.
    """
    z = mp.mpc(z)
    if z == 0:
        return mp.mpc(0)
    if z == 1:
        return mp.mpc(mp.pi ** 2 / 6)
    on_cut = (mp.im(z) == 0 and mp.re(z) > 1)
    if abs(z) > 1:
        # Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2/2
        if on_cut:
            logmz = mp.log(mp.re(z)) - side * mp.mpc(0, mp.pi)
        else:
            logmz = mp.log(-z)
        return -li2(1 / z, side=-side) - mp.pi ** 2 / 6 - logmz ** 2 / 2
    if mp.re(z) > 0.5:
        # reflection: Li2(z) + Li2(1-z) = pi^2/6 - log(z) log(1-z)
        return mp.pi ** 2 / 6 - mp.log(z) * mp.log(1 - z) - li2(1 - z, side=side)
    # |z| <= 1, Re z <= 1/2: u = -log(1-z) has |u| < 2 pi, and
    # Li2 = sum_k B_k u^(k+1)/(k+1)!  (B_1 = -1/2 convention)
    u = -mp.log(1 - z)
    total = mp.mpc(0)
    term = mp.mpc(u)  # u^(k+1)/(k+1)!
    k = 0
    tol = mp.mpf(2) ** (-mp.prec - 8)
    while True:
        b = mp.bernoulli(k)
        if b != 0:
            contrib = b * term
            total += contrib
            if abs(contrib) < tol and k > 4:
                break
        k += 1
        term = term * u / (k + 1)
    return total


def li2_via_series(z, side: int = 1, max_terms: int = 200000):
    """Plain power-series dilogarithm (independent check, |z| < 1 only)."""
    z = mp.mpc(z)
    if abs(z) >= 1:
        raise ValueError("plain series needs |z| < 1")
    tol = mp.mpf(2) ** (-mp.prec - 8)
    total = mp.mpc(0)
    power = mp.mpc(1)
    for k in range(1, max_terms):
        power *= z
        contrib = power / k ** 2
        total += contrib
        if abs(contrib) < tol:
            return total
    raise ArithmeticError("dilogarithm series did not converge")


def v00_numeric(point: CriticalPoint, prec_bits: int = 256, side: int = 1):
    """V_{0,0} = 2 Li2(-alpha) - Li2(alpha^-2) at the chosen embedding."""
    with mp.workprec(prec_bits + 32):
        a = point.numeric(prec_bits + 32)
        return 2 * li2(-a, side=side) - li2(1 / a ** 2, side=side)


def phi_hat_numeric(point: CriticalPoint, lam: int, lam_prime: int, hbar,
                    K: int, prec_bits: int = 256, side: int = 1,
                    expansion: AsymptoticSeries | None = None):
    """Numeric truncation of the stationary-phase series:

        alpha^lam e^(V00/hbar) e^(2 pi i lam' log(alpha)/hbar)
            (i Delta)^(-1/2) sum_{k<=K} c_k(alpha, lam) hbar^k

    Branches: principal square root and logarithm at the chosen embedding;
    ``side`` fixes the dilogarithm boundary value when the embedding puts an
    argument on the cut.  The lam'-dependence is exactly the documented
    exponential factor.
    """
    with mp.workprec(prec_bits + 32):
        hb = mp.mpc(hbar)
        if hb == 0:
            raise ZeroDivisionError("hbar must be nonzero")
        exp_ = expansion if expansion is not None else gaussian_expand(point, K)
        a = point.numeric(prec_bits + 32)
        v00 = v00_numeric(point, prec_bits, side=side)
        dlt = exp_.delta.numeric(point.embedding_index, prec_bits + 32)
        pref = (a ** lam) * mp.e ** (v00 / hb)
        if lam_prime:
            pref *= mp.e ** (2j * mp.pi * lam_prime * mp.log(a) / hb)
        pref /= mp.sqrt(1j * dlt)
        tail = mp.mpc(0)
        hpow = mp.mpc(1)
        for k in range(min(K, exp_.K) + 1):
            ck = exp_.c[k](lam).numeric(point.embedding_index, prec_bits + 32)
            tail += ck * hpow
            hpow *= hb
        return pref * tail


def model_integral_ratio(point: CriticalPoint, hbar, weight_max: int = 3,
                         prec_bits: int = 320, nodes: int = 4000,
                         lam: int = 0):
    """Independent oracle: numeric Gaussian quadrature of the model integral.

    Integrates exp(V02 y^2 + sum_{0 < w <= weight_max} hbar^w y^m V_{n,m}
    + lam sqrt(hbar) y) along the steepest line through y = 0 and divides by
    the bare Gaussian; the result is 1 + c_1 hbar + c_2 hbar^2 + ... up to
    O(hbar^(weight_max + 1/2)).  Everything with weight <= weight_max is kept,
    so the coefficients c_k for k <= weight_max are those of the full model.
    """
    with mp.workprec(prec_bits + 64):
        hb = mp.mpc(hbar)
        emb = point.embedding_index
        V02n = v02(point).numeric(emb, prec_bits + 64)
        tab = v_table(point, 2 * weight_max + 2, 2 * weight_max + 4)
        terms = []
        if lam:
            terms.append((1, mp.sqrt(hb) * lam))
        for (n, m), val in tab.entries.items():
            if n == 0 and m < 3:
                continue
            wq = 2 * n - 2 + m  # twice the hbar-weight n-1+m/2
            if wq <= 0 or wq > 2 * weight_max:
                continue
            coeff = val.numeric(emb, prec_bits + 64) * hb ** (mp.mpf(wq) / 2)
            terms.append((m, coeff))
        # steepest direction: V02 d^2 real negative
        phi = (mp.pi - mp.arg(V02n)) / 2
        d = mp.e ** (1j * phi)
        a2 = V02n * d * d  # real negative
        S = mp.sqrt((prec_bits + 48) * mp.log(2) / (-mp.re(a2))) * mp.mpf("1.3")
        h = 2 * S / nodes
        total = mp.mpc(0)
        for i in range(nodes + 1):
            s = -S + i * h
            y = d * s
            ex = a2 * s * s
            for (m, coeff) in terms:
                ex += coeff * y ** m
            total += mp.e ** ex
        total *= h * d
        bare = d * mp.sqrt(mp.pi / (-a2))
        return total / bare
