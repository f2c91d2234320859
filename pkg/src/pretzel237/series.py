"""Truncated Laurent-Puiseux series on the fixed exponent lattice (1/8)Z.

A series holds a sparse map ``k -> coefficient`` meaning ``coeff * q^(k/8)``
with integer k of either sign, plus a truncation bound ``trunc``: the object
represents its terms exactly modulo q^(trunc/8).  ``trunc=None`` marks an
exact Laurent-Puiseux *polynomial* (no truncation at all); those are closed
under +,*,- and are what the cross-multiplied identity checks work with.

Truncation bookkeeping is the main correctness hazard in this artifact, so
every binary operation computes the tightest provable bound of the result
rather than trusting the caller.
"""

from __future__ import annotations

from .rings import QQ, QQ0, QQ_RING, qq_str, qq_parse

DENOM = 8  # global exponent lattice: all exponents are multiples of 1/8


class PuiseuxSeries:
    __slots__ = ("ring", "terms", "trunc")

    def __init__(self, ring, terms, trunc, _clean=False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            self.terms = {k: v for k, v in terms.items()
                          if not ring.is_zero(v) and (trunc is None or k < trunc)}
        self.trunc = trunc

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring=QQ_RING, trunc=None):
        return cls(ring, {}, trunc, _clean=True)

    @classmethod
    def one(cls, ring=QQ_RING, trunc=None):
        return cls.monomial(0, 1, ring=ring, trunc=trunc)

    @classmethod
    def monomial(cls, k, coeff=1, ring=QQ_RING, trunc=None):
        c = ring.coerce(coeff)
        if ring.is_zero(c) or (trunc is not None and k >= trunc):
            return cls(ring, {}, trunc, _clean=True)
        return cls(ring, {k: c}, trunc, _clean=True)

    @classmethod
    def from_int_coeffs(cls, coeffs, ring=QQ_RING, trunc=None):
        """Series sum coeffs[i] * q^i (integer exponents, lattice slot 8i)."""
        return cls(ring, {DENOM * i: ring.coerce(c) for i, c in enumerate(coeffs)},
                   trunc)

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def val(self):
        """Lowest exponent (lattice units); None for a (truncated) zero."""
        return min(self.terms) if self.terms else None

    def _val_floor(self):
        # lower bound usable in truncation arithmetic even for zero series
        if self.terms:
            return min(self.terms)
        return self.trunc  # None means genuinely zero

    def coeff(self, k):
        if self.trunc is not None and k >= self.trunc:
            raise ValueError(f"coefficient q^{k}/8 requested beyond truncation {self.trunc}")
        return self.terms.get(k, self.ring.zero)

    def support(self):
        return sorted(self.terms)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PuiseuxSeries):
            return other
        return PuiseuxSeries.monomial(0, self.ring.coerce(other), ring=self.ring)

    @staticmethod
    def _min_trunc(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        o = self._coerce(other)
        tr = self._min_trunc(self.trunc, o.trunc)
        terms = dict(self.terms)
        for k, v in o.terms.items():
            w = terms.get(k)
            terms[k] = v if w is None else w + v
        return PuiseuxSeries(self.ring, terms, tr)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.ring, {k: -v for k, v in self.terms.items()},
                             self.trunc, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            c = self.ring.coerce(other)
            if self.ring.is_zero(c):
                return PuiseuxSeries(self.ring, {}, self.trunc, _clean=True)
            return PuiseuxSeries(self.ring, {k: v * c for k, v in self.terms.items()},
                                 self.trunc, _clean=True)
        o = other
        # provable truncation: a.trunc shifted by a valuation floor of b, and
        # vice versa; an exactly-zero factor (floor None = +inf) is vacuous
        cands = []
        va, vb = self._val_floor(), o._val_floor()
        if self.trunc is not None and vb is not None:
            cands.append(self.trunc + vb)
        if o.trunc is not None and va is not None:
            cands.append(o.trunc + va)
        tr = min(cands) if cands else None
        terms = {}
        items_o = sorted(o.terms.items())
        for ka, va_ in self.terms.items():
            for kb, vb_ in items_o:
                k = ka + kb
                if tr is not None and k >= tr:
                    break  # items_o ascending
                w = terms.get(k)
                p = va_ * vb_
                terms[k] = p if w is None else w + p
        return PuiseuxSeries(self.ring, terms, tr)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        acc = PuiseuxSeries.one(self.ring, self.trunc)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inv()

    def shifted(self, k):
        """Multiply by q^(k/8)."""
        tr = None if self.trunc is None else self.trunc + k
        return PuiseuxSeries(self.ring, {e + k: v for e, v in self.terms.items()},
                             tr, _clean=True)

    def truncated(self, order):
        tr = order if self.trunc is None else min(self.trunc, order)
        return PuiseuxSeries(self.ring, {k: v for k, v in self.terms.items() if k < tr},
                             tr, _clean=True)

    def inv(self, order=None):
        """Multiplicative inverse mod truncation.

        Nonzero valuation is allowed (the leading monomial is factored out).
        ``order`` supplies a truncation when inverting an exact polynomial.
        """
        if not self.terms:
            raise ZeroDivisionError("inverse of (truncated) zero series")
        v = self.val()
        lead = self.terms[v]
        tr = self.trunc
        if tr is None:
            if len(self.terms) == 1:
                inv_lead = _ring_inv(self.ring, lead)
                return PuiseuxSeries(self.ring, {-v: inv_lead}, None, _clean=True)
            if order is None:
                raise ValueError("inverting a non-monomial exact polynomial needs an order")
            tr = order + 2 * v  # result then holds modulo q^(order/8)
        inv_lead = _ring_inv(self.ring, lead)
        n = tr - v  # relative precision in lattice units
        if n <= 0:
            raise ValueError("truncation too tight to invert")
        # normalized series 1 + u with val(u) > 0; Newton doubling for 1/(1+u).
        # If x = (1+u)^{-1} mod q^p then x(2 - (1+u)x) = (1+u)^{-1} mod q^{2p},
        # so promoting the tracked bound to the doubled precision is sound.
        s_terms = {0: self.ring.one}
        for k, c in self.terms.items():
            if k != v and (k - v) < n:
                s_terms[k - v] = c * inv_lead
        s = PuiseuxSeries(self.ring, s_terms, n, _clean=True)
        x = PuiseuxSeries.one(self.ring, 1)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            xe = PuiseuxSeries(self.ring, x.terms, prec, _clean=True)
            x = ((xe + xe) - (xe * xe * s.truncated(prec))).truncated(prec)
        out = {k - v: c * inv_lead for k, c in x.terms.items()}
        return PuiseuxSeries(self.ring, out, tr - 2 * v)

    def substituted_qinv(self):
        """q -> 1/q on an exact polynomial (trunc must be None)."""
        if self.trunc is not None:
            raise ValueError("q -> 1/q only defined for exact polynomials")
        return PuiseuxSeries(self.ring, {-k: v for k, v in self.terms.items()},
                             None, _clean=True)

    def map_coeffs(self, fn, ring=None):
        r = ring if ring is not None else self.ring
        return PuiseuxSeries(r, {k: fn(v) for k, v in self.terms.items()}, self.trunc)

    # -- comparisons -------------------------------------------------------

    def eq_mod(self, other, order=None):
        """Equality of all coefficients below min(truncations, order)."""
        o = self._coerce(other)
        tr = self._min_trunc(self.trunc, o.trunc)
        tr = self._min_trunc(tr, order)
        for k in set(self.terms) | set(o.terms):
            if tr is not None and k >= tr:
                continue
            a = self.terms.get(k, self.ring.zero)
            b = o.terms.get(k, self.ring.zero)
            if not self.ring.is_zero(a - b):
                return False
        return True

    def first_nonzero(self):
        if not self.terms:
            return None
        k = self.val()
        return (k, self.terms[k])

    def __eq__(self, other):
        if not isinstance(other, (PuiseuxSeries, int)) and type(other) is not type(QQ0):
            return NotImplemented
        o = self._coerce(other)
        return self.trunc == o.trunc and self.terms == o.terms

    def __hash__(self):
        return hash((self.trunc, tuple(sorted(self.terms.items()))))

    # -- numerics / io -----------------------------------------------------

    def evaluate(self, u8):
        """Numeric value with u8 = q^(1/8); Horner over the exponent gaps."""
        if not self.terms:
            return u8 * 0
        ks = self.support()
        acc = None
        prev = None
        for k in reversed(ks):
            cval = _coeff_to_mp(self.terms[k])
            acc = cval if acc is None else acc * u8 ** (prev - k) + cval
            prev = k
        return acc * u8 ** ks[0]

    def to_json(self):
        return {
            "denom": DENOM,
            "trunc_order": self.trunc,
            "terms": [[k, _coeff_str(self.terms[k])] for k in self.support()],
        }

    @classmethod
    def from_json(cls, data, ring=QQ_RING):
        if data["denom"] != DENOM:
            raise ValueError("exponent lattice mismatch")
        terms = {int(k): _coeff_from_str(ring, s) for k, s in data["terms"]}
        return cls(ring, terms, data["trunc_order"])

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for k in self.support()[:8]:
                e = f"q^{k}/8" if k % DENOM else (f"q^{k // DENOM}" if k else "1")
                parts.append(f"{self.terms[k]}*{e}")
            body = " + ".join(parts) + (" + ..." if len(self.terms) > 8 else "")
        tail = "" if self.trunc is None else f" + O(q^{self.trunc}/8)"
        return f"<{body}{tail}>"


def _ring_inv(ring, x):
    if hasattr(ring, "inv"):
        return ring.inv(x)
    return ring.one / x


def _coeff_to_mp(c):
    from mpmath import mp
    if type(c) is type(QQ0) or hasattr(c, "denominator"):
        return mp.mpf(int(c.numerator)) / mp.mpf(int(c.denominator))
    return c


def _coeff_str(c):
    return qq_str(c)


def _coeff_from_str(ring, s):
    return ring.coerce(qq_parse(s))


class SeriesRing:
    """Ring tag so RingMatrix can hold PuiseuxSeries entries."""

    def __init__(self, coeff_ring=QQ_RING):
        self.coeff_ring = coeff_ring
        self.zero = PuiseuxSeries.zero(coeff_ring)
        self.one = PuiseuxSeries.one(coeff_ring)
        self.label = f"PuiseuxSeries({getattr(coeff_ring, 'label', coeff_ring)!s})"

    def coerce(self, x):
        if isinstance(x, PuiseuxSeries):
            return x
        return PuiseuxSeries.monomial(0, self.coeff_ring.coerce(x), ring=self.coeff_ring)

    def is_zero(self, x):
        return x.is_zero()

    def __repr__(self):
        return self.label


SERIES_RING = SeriesRing()


# ---------------------------------------------------------------------------
# q-Pochhammer building blocks (all exact)
# ---------------------------------------------------------------------------

def one_minus_qpow(k8, ring=QQ_RING, sign=1):
    """1 - sign * q^(k8/8) as an exact polynomial."""
    one = ring.one
    return PuiseuxSeries(ring, {0: one, k8: ring.coerce(-sign)}, None)


def geometric_inverse(k8, order, ring=QQ_RING, sign=1):
    """(1 - sign q^(k8/8))^{-1} = sum_j sign^j q^(j*k8/8), truncated."""
    if k8 <= 0:
        raise ValueError("geometric inverse needs a positive exponent")
    terms = {}
    j, e = 0, 0
    c = ring.one
    s = ring.coerce(sign)
    while e < order:
        terms[e] = c
        c = c * s
        e += k8
        j += 1
    return PuiseuxSeries(ring, terms, order, _clean=True)


def poch_finite(a8, n, order=None, ring=QQ_RING, sign=1):
    """(sign * q^(a8/8); q)_n = prod_{i<n} (1 - sign q^(a8/8 + i)), exact."""
    acc = PuiseuxSeries.one(ring)
    for i in range(n):
        acc = acc * one_minus_qpow(a8 + DENOM * i, ring=ring, sign=sign)
    if order is not None:
        acc = acc.truncated(order)
    return acc


def poch_inf(a8, order, ring=QQ_RING, sign=1):
    """(sign q^(a8/8); q)_infty truncated: factors with exponent >= order are 1."""
    if a8 <= 0:
        raise ValueError("infinite Pochhammer needs positive starting exponent")
    acc = PuiseuxSeries.one(ring, order)
    e = a8
    while e < order:
        acc = acc * one_minus_qpow(e, ring=ring, sign=sign)
        e += DENOM
    return acc.truncated(order)
