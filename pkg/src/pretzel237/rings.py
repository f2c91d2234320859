"""Exact scalar arithmetic: rationals, cubic number fields, dual numbers,
polynomials in one formal variable over a pluggable coefficient ring.

Every value here is immutable after construction and all operations are pure
functions, so everything can be shared freely across threads.  Containers
(series, matrices) stay generic by talking to a small "ring" object that
knows its ``zero``/``one`` and how to ``coerce`` Python scalars.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    def QQ(a=0, b=None):
        """Exact rational; accepts ints, 'num/den' strings, Fractions."""
        if b is None:
            if isinstance(a, Fraction):
                return _mpq(a.numerator, a.denominator)
            return _mpq(a)
        return _mpq(a, b)

except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    def QQ(a=0, b=None):
        if b is None:
            return Fraction(a)
        return Fraction(a, b)

QQ0 = QQ(0)
QQ1 = QQ(1)


def qq_str(x) -> str:
    """Serialize a rational as 'num/den' (den always positive)."""
    return f"{x.numerator}/{x.denominator}"


def qq_parse(s: str):
    num, _, den = s.partition("/")
    return QQ(int(num), int(den) if den else 1)


class RationalField:
    """The ring tag for plain rationals."""

    label = "QQ"
    zero = QQ0
    one = QQ1

    def coerce(self, x):
        if isinstance(x, (int, Fraction)) or type(x) is type(QQ0):
            return QQ(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def is_zero(self, x):
        return x == 0

    def inv(self, x):
        return QQ1 / x

    def __repr__(self):
        return "QQ"


QQ_RING = RationalField()


# ---------------------------------------------------------------------------
# univariate polynomials over QQ (internal helper: minpoly reduction, xgcd,
# closed forms of the nonpositive polylogarithms)
# ---------------------------------------------------------------------------

def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else QQ0) + (b[i] if i < len(b) else QQ0)
                      for i in range(n)])


def poly_scale(a, s):
    return poly_trim([c * s for c in a])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [QQ0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return poly_trim(out)


def poly_divmod(a, b):
    """Quotient/remainder in QQ[x]; b must be nonzero."""
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [QQ0] * max(0, len(a) - len(b) + 1)
    inv_lead = QQ1 / b[-1]
    while len(a) >= len(b) and poly_trim(a):
        a = poly_trim(a)
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        f = a[-1] * inv_lead
        q[k] = f
        for i, cb in enumerate(b):
            a[i + k] -= f * cb
        a = a[:-1]
    return poly_trim(q), poly_trim(a)


def poly_xgcd(a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = poly_trim(a), poly_trim(b)
    s0, s1 = [QQ1], []
    t0, t1 = [], [QQ1]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_add(s0, poly_scale(poly_mul(q, s1), QQ(-1)))
        t0, t1 = t1, poly_add(t0, poly_scale(poly_mul(q, t1), QQ(-1)))
    if not r0:
        raise ZeroDivisionError("xgcd of zero polynomials")
    lead = r0[-1]
    inv = QQ1 / lead
    return poly_scale(r0, inv), poly_scale(s0, inv), poly_scale(t0, inv)


def poly_eval(a, x):
    acc = None
    for c in reversed(a):
        acc = c if acc is None else acc * x + c
    return acc if acc is not None else QQ0


# ---------------------------------------------------------------------------
# number fields QQ[x]/(minpoly)
# ---------------------------------------------------------------------------

class NumberFieldSpec:
    """A monic integer-free description of QQ[x]/(minpoly).

    ``minpoly`` is ascending-coefficient, monic.  Irreducibility over QQ is
    checked by the rational-root test, which is complete for degree <= 3.
    """

    def __init__(self, minpoly, label):
        mp = tuple(QQ(c) for c in minpoly)
        if len(mp) < 2:
            raise ValueError("minpoly must have degree >= 1")
        if mp[-1] != 1:
            raise ValueError("minpoly must be monic")
        self.minpoly = mp
        self.label = label
        self.degree = len(mp) - 1
        if 2 <= self.degree <= 3 and self._has_rational_root():
            raise ValueError(f"minpoly of {label} is reducible over QQ")

    def _has_rational_root(self):
        # rational root p/q: p | c0*den-clearing, q | lead.  Clear denominators.
        from math import gcd
        den = 1
        for c in self.minpoly:
            den = den * c.denominator // gcd(den, int(c.denominator))
        ints = [int(c * den) for c in self.minpoly]
        c0, lead = ints[0], ints[-1]
        if c0 == 0:
            return True
        def divisors(n):
            n = abs(n)
            return [d for d in range(1, n + 1) if n % d == 0]
        for p in divisors(c0):
            for q in divisors(lead):
                for sign in (1, -1):
                    if poly_eval(self.minpoly, QQ(sign * p, q)) == 0:
                        return True
        return False

    def __eq__(self, other):
        return (isinstance(other, NumberFieldSpec)
                and self.minpoly == other.minpoly and self.label == other.label)

    def __hash__(self):
        return hash((self.minpoly, self.label))

    def __repr__(self):
        return f"NumberFieldSpec({self.label})"


class NumberField:
    """Arithmetic in QQ[x]/(minpoly); elements are reduced coordinate vectors."""

    def __init__(self, spec: NumberFieldSpec):
        self.spec = spec
        self.degree = spec.degree
        # x^degree = -(c0 + c1 x + ...), used for single-step reduction
        self._top = tuple(-c for c in spec.minpoly[:-1])
        self.zero = NFElement(self, (QQ0,) * self.degree)
        self.one = NFElement(self, (QQ1,) + (QQ0,) * (self.degree - 1))
        self.gen = NFElement(self, tuple(QQ1 if i == 1 else QQ0
                                         for i in range(self.degree)))
        self.label = spec.label

    def coerce(self, x):
        if isinstance(x, NFElement):
            if x.field is not self and x.field.spec != self.spec:
                raise ValueError("element of a different number field")
            return x
        return NFElement(self, (QQ(x),) + (QQ0,) * (self.degree - 1))

    def from_coords(self, coords):
        coords = tuple(QQ(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError("coordinate vector has wrong length")
        return NFElement(self, coords)

    def is_zero(self, x):
        return all(c == 0 for c in x.coords)

    def inv(self, x):
        return x.inv()

    def reduce_poly(self, coeffs):
        """Reduce an arbitrary-degree QQ[x] element mod minpoly."""
        c = list(coeffs)
        d = self.degree
        while len(c) > d:
            top = c.pop()
            if top != 0:
                for i, t in enumerate(self._top):
                    c[len(c) - d + i] += top * t
        c += [QQ0] * (d - len(c))
        return NFElement(self, tuple(c))

    def embeddings(self, prec_bits=256):
        """Numeric roots of minpoly, deterministically ordered by (Re, Im)."""
        from mpmath import mp, mpf
        with mp.workprec(prec_bits + 32):
            coeffs = [mpf(int(c.numerator)) / mpf(int(c.denominator))
                      for c in reversed(self.spec.minpoly)]
            roots = mp.polyroots(coeffs, maxsteps=200, extraprec=prec_bits)
            roots = sorted(roots, key=lambda r: (mp.re(r), mp.im(r)))
            return [mp.mpc(r) for r in roots]

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"NumberField({self.spec.label})"


class NFElement:
    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def _check(self, other):
        if isinstance(other, NFElement):
            if other.field.spec != self.field.spec:
                raise ValueError("mixed number fields")
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        o = self._check(other)
        return NFElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NFElement) or not _is_scalar(other):
            o = self._check(other)
            prod = poly_mul(list(self.coords), list(o.coords))
            return self.field.reduce_poly(prod)
        s = QQ(other)
        return NFElement(self.field, tuple(a * s for a in self.coords))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        acc, base = self.field.one, self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def inv(self):
        if self.field.is_zero(self):
            raise ZeroDivisionError("inverse of zero field element")
        g, s, _ = poly_xgcd(poly_trim(list(self.coords)), list(self.field.spec.minpoly))
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible (reducible minpoly?)")
        return self.field.reduce_poly(poly_scale(s, QQ1 / g[0]))

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inv()

    def __eq__(self, other):
        if isinstance(other, NFElement):
            return self.field.spec == other.field.spec and self.coords == other.coords
        if _is_scalar(other):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.spec, self.coords))

    def numeric(self, embedding_index, prec_bits=256):
        """Image under the chosen root of minpoly, as an mpmath complex."""
        from mpmath import mp
        root = self.field.embeddings(prec_bits)[embedding_index]
        with mp.workprec(prec_bits + 32):
            acc = mp.mpc(0)
            for c in reversed(self.coords):
                acc = acc * root + mp.mpf(int(c.numerator)) / mp.mpf(int(c.denominator))
            return acc

    def __repr__(self):
        x = self.field.label.split("-")[0]
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "1" if i == 0 else (x if i == 1 else f"{x}^{i}")
            parts.append(f"{c}*{mono}" if i else f"{c}")
        return " + ".join(parts) if parts else "0"


def _is_scalar(x):
    return isinstance(x, (int, Fraction)) or type(x) is type(QQ0)


XI_SPEC = NumberFieldSpec([1, 0, -1, 1], "xi-field")      # x^3 - x^2 + 1
ETA_SPEC = NumberFieldSpec([-1, -2, 1, 1], "eta-field")   # x^3 + x^2 - 2x - 1
XI_FIELD = NumberField(XI_SPEC)
ETA_FIELD = NumberField(ETA_SPEC)


# ---------------------------------------------------------------------------
# dual numbers a + b*eps with eps^2 = 0 (formal first-order perturbations)
# ---------------------------------------------------------------------------

class DualNum:
    __slots__ = ("a", "b")

    def __init__(self, a, b=QQ0):
        self.a = QQ(a)
        self.b = QQ(b)

    def __add__(self, other):
        o = other if isinstance(other, DualNum) else DualNum(other)
        return DualNum(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return DualNum(-self.a, -self.b)

    def __sub__(self, other):
        o = other if isinstance(other, DualNum) else DualNum(other)
        return DualNum(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = other if isinstance(other, DualNum) else DualNum(other)
        return DualNum(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, DualNum) else DualNum(other)
        if o.a == 0:
            raise ZeroDivisionError("dual number with nilpotent leading part")
        inv_a = QQ1 / o.a
        return DualNum(self.a * inv_a, (self.b * o.a - self.a * o.b) * inv_a * inv_a)

    def __eq__(self, other):
        o = other if isinstance(other, DualNum) else DualNum(other)
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"({self.a} + {self.b}*eps)"


class DualRing:
    """QQ[eps]/(eps^2); coefficient ring for nilpotent-perturbation tests."""

    label = "QQ[eps]"
    zero = DualNum(0)
    one = DualNum(1)

    def coerce(self, x):
        return x if isinstance(x, DualNum) else DualNum(QQ(x))

    def is_zero(self, x):
        return x.a == 0 and x.b == 0

    def inv(self, x):
        return DualRing.one / x

    def __repr__(self):
        return "QQ[eps]"


DUAL_RING = DualRing()


# ---------------------------------------------------------------------------
# polynomials in the deformation parameter over an arbitrary ring
# ---------------------------------------------------------------------------

class LambdaPoly:
    """Dense polynomial in the integer deformation parameter.

    Coefficients live in ``ring`` (QQ for the series weights, a cubic field
    for the stationary-phase coefficients).
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        cs = list(coeffs)
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, ring, c):
        return cls(ring, [ring.coerce(c)])

    @classmethod
    def gen(cls, ring):
        return cls(ring, [ring.zero, ring.one])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def _coerce(self, other):
        if isinstance(other, LambdaPoly):
            return other
        return LambdaPoly.const(self.ring, other)

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        def at(t, i):
            return t[i] if i < len(t) else self.ring.zero
        return LambdaPoly(self.ring, [at(self.coeffs, i) + at(o.coeffs, i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return LambdaPoly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return LambdaPoly(self.ring, [])
        out = [self.ring.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if self.ring.is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return LambdaPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        acc = LambdaPoly.const(self.ring, self.ring.one)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __call__(self, x):
        """Evaluate at a concrete value (int or ring element)."""
        acc = self.ring.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c if not isinstance(x, int) else acc * x + c
        return acc

    def coeff(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else self.ring.zero

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        o = self._coerce(other)
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            mono = "" if i == 0 else ("*L" if i == 1 else f"*L^{i}")
            parts.append(f"({c}){mono}")
        return " + ".join(parts)


class LambdaPolyRing:
    """Ring tag for LambdaPoly over a base ring."""

    def __init__(self, base):
        self.base = base
        self.zero = LambdaPoly(base, [])
        self.one = LambdaPoly(base, [base.one])
        self.label = f"{getattr(base, 'label', base)!s}[lambda]"

    def coerce(self, x):
        if isinstance(x, LambdaPoly):
            return x
        return LambdaPoly.const(self.base, self.base.coerce(x))

    def is_zero(self, x):
        return x.is_zero()

    def gen(self):
        return LambdaPoly.gen(self.base)

    def __repr__(self):
        return self.label


QLAMBDA = LambdaPolyRing(QQ_RING)


def bernoulli_numbers(n_max):
    """B_0..B_{n_max} by the defining recurrence sum_{k<=n} C(n+1,k) B_k = 0."""
    from math import comb
    B = [QQ1]
    for n in range(1, n_max + 1):
        s = QQ0
        for k in range(n):
            s += comb(n + 1, k) * B[k]
        B.append(-s / QQ(n + 1))
    return B


def bernoulli_half(n):
    """B_{2n}(1/2), via B_{2n}(1/2) = (2^(1-2n) - 1) B_{2n}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    B = bernoulli_numbers(2 * n)
    return (QQ(1, 2 ** (2 * n - 1)) - 1) * B[2 * n] if n else QQ1
