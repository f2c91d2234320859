"""Laurent polynomials in two units q and L, where L stands for q^lambda.

No relation between q and L is ever assumed; the deformation parameter enters
companion-matrix identities only through the formal unit L, so those identities
live in QQ[q^{+-1}, L^{+-1}] and can be checked exactly.
"""

from __future__ import annotations

from .rings import QQ, QQ0, QQ1, QQ_RING
from .series import DENOM, PuiseuxSeries


class LaurentBivariate:
    __slots__ = ("terms",)

    def __init__(self, terms, _clean=False):
        if _clean:
            self.terms = terms
        else:
            self.terms = {k: QQ(v) for k, v in terms.items() if v != 0}

    @classmethod
    def const(cls, c):
        c = QQ(c)
        return cls({} if c == 0 else {(0, 0): c}, _clean=True)

    @classmethod
    def monomial(cls, eq, el, c=1):
        c = QQ(c)
        return cls({} if c == 0 else {(eq, el): c}, _clean=True)

    @classmethod
    def q_pow(cls, n):
        return cls.monomial(n, 0)

    @classmethod
    def qlambda_pow(cls, n):
        """q^(lambda*n) as the unit L^n."""
        return cls.monomial(0, n)

    @classmethod
    def q_lambda_plus(cls, k):
        """q^(lambda+k) = q^k * L."""
        return cls.monomial(k, 1)

    def _coerce(self, other):
        if isinstance(other, LaurentBivariate):
            return other
        return LaurentBivariate.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        t = dict(self.terms)
        for k, v in o.terms.items():
            w = t.get(k, QQ0) + v
            if w == 0:
                t.pop(k, None)
            else:
                t[k] = w
        return LaurentBivariate(t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentBivariate({k: -v for k, v in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        t = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in o.terms.items():
                k = (a1 + a2, b1 + b2)
                w = t.get(k, QQ0) + v1 * v2
                if w == 0:
                    t.pop(k, None)
                else:
                    t[k] = w
        return LaurentBivariate(t, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            # only monomials are invertible in a Laurent ring over a field
            if len(self.terms) != 1:
                raise ZeroDivisionError("negative power of a non-monomial")
            ((a, b), c), = self.terms.items()
            return LaurentBivariate.monomial(-a, -b, QQ1 / c) ** (-n)
        acc = LaurentBivariate.const(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def __truediv__(self, other):
        """Exact division; raises ValueError if the quotient is not a Laurent polynomial."""
        o = self._coerce(other)
        if not o.terms:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self.terms:
            return LaurentBivariate.const(0)
        # long division by the lex-leading monomial of o; a Laurent ring has
        # exponents unbounded below, so cap the steps to detect inexactness
        lead = max(o.terms)
        lead_c = o.terms[lead]
        rem = dict(self.terms)
        quo = {}
        max_steps = 16 * (len(self.terms) + 2) * (len(o.terms) + 2)
        steps = 0
        while rem:
            steps += 1
            if steps > max_steps:
                raise ValueError("quotient is not a Laurent polynomial")
            k = max(rem)
            c = rem[k]
            mk = (k[0] - lead[0], k[1] - lead[1])
            mc = c / lead_c
            quo[mk] = quo.get(mk, QQ0) + mc
            for (a, b), v in o.terms.items():
                kk = (a + mk[0], b + mk[1])
                w = rem.get(kk, QQ0) - mc * v
                if w == 0:
                    rem.pop(kk, None)
                else:
                    rem[kk] = w
        return LaurentBivariate(quo, _clean=True)

    def lambda_shift(self, k):
        """lambda -> lambda + k, i.e. q^a L^b -> q^(a+k*b) L^b."""
        return LaurentBivariate({(a + k * b, b): v for (a, b), v in self.terms.items()},
                                _clean=True)

    def dual_subs(self):
        """The composite lambda -> -lambda-1 then q -> 1/q: q^a L^b -> q^(b-a) L^b."""
        return LaurentBivariate({(b - a, b): v for (a, b), v in self.terms.items()},
                                _clean=True)

    def subs_lambda_int(self, m):
        """Substitute lambda = m (integer): result is an exact Puiseux polynomial."""
        terms = {}
        for (a, b), v in self.terms.items():
            k = DENOM * (a + m * b)
            terms[k] = terms.get(k, QQ0) + v
        return PuiseuxSeries(QQ_RING, terms, None)

    def evaluate(self, qval, lval):
        """Numeric value at complex q and L = q^lambda."""
        from mpmath import mp
        acc = qval * 0
        for (a, b), v in self.terms.items():
            c = mp.mpf(int(v.numerator)) / mp.mpf(int(v.denominator))
            acc += c * qval ** a * lval ** b
        return acc

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        o = self._coerce(other)
        return self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b) in sorted(self.terms):
            v = self.terms[(a, b)]
            mono = []
            if a:
                mono.append(f"q^{a}")
            if b:
                mono.append(f"L^{b}")
            parts.append(f"{v}" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)


class LaurentRing:
    """Ring tag so matrices can hold LaurentBivariate entries."""

    label = "QQ[q^+-1, L^+-1]"
    zero = LaurentBivariate.const(0)
    one = LaurentBivariate.const(1)

    def coerce(self, x):
        if isinstance(x, LaurentBivariate):
            return x
        return LaurentBivariate.const(x)

    def is_zero(self, x):
        return x.is_zero()

    def __repr__(self):
        return self.label


LAURENT_RING = LaurentRing()
