"""Dense matrices over an arbitrary commutative ring, with two determinant
routes: division-free Laplace expansion (the oracle, any ring) and
fraction-free Bareiss elimination (fast path; needs exact division, which all
the coefficient types here provide via ``/``).
"""

from __future__ import annotations


class RingMatrix:
    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries):
        self.ring = ring
        self.entries = tuple(tuple(row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)]
                          for i in range(n)])

    @classmethod
    def diagonal(cls, ring, diag):
        n = len(diag)
        return cls(ring, [[diag[i] if i == j else ring.zero for j in range(n)]
                          for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def transpose(self):
        return RingMatrix(self.ring, list(zip(*self.entries)))

    def __add__(self, other):
        self._shape_check(other)
        return RingMatrix(self.ring,
                          [[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._shape_check(other)
        return RingMatrix(self.ring,
                          [[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return RingMatrix(self.ring, [[-a for a in row] for row in self.entries])

    def _shape_check(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, RingMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in product")
            cols = list(zip(*other.entries))
            out = []
            for row in self.entries:
                out.append([_dot(row, col) for col in cols])
            return RingMatrix(self.ring, out)
        return RingMatrix(self.ring, [[a * other for a in row] for row in self.entries])

    def map(self, fn, ring=None):
        return RingMatrix(ring if ring is not None else self.ring,
                          [[fn(a) for a in row] for row in self.entries])

    def is_zero(self):
        return all(self.ring.is_zero(a) for row in self.entries for a in row)

    def __eq__(self, other):
        return (isinstance(other, RingMatrix) and self.rows == other.rows
                and self.cols == other.cols
                and all(self.ring.is_zero(a - b)
                        for ra, rb in zip(self.entries, other.entries)
                        for a, b in zip(ra, rb)))

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"RingMatrix({self.rows}x{self.cols} over {self.ring!r})"


def _dot(row, col):
    acc = None
    for a, b in zip(row, col):
        p = a * b
        acc = p if acc is None else acc + p
    return acc


def laplace_det(m: RingMatrix):
    """Division-free determinant, expansion by first column with memoization.

    Valid over any commutative ring (dual numbers included); the oracle for
    bareiss_det and the route used when exact division is unavailable.
    """
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return m.ring.one
    cache = {}

    def rec(rows, cols):
        if len(cols) == 1:
            return m.entries[rows[0]][cols[0]]
        key = (rows, cols)
        got = cache.get(key)
        if got is not None:
            return got
        acc = None
        rest = cols[1:]
        for idx, r in enumerate(rows):
            a = m.entries[r][cols[0]]
            if m.ring.is_zero(a):
                continue
            sub = rec(rows[:idx] + rows[idx + 1:], rest)
            term = a * sub
            if idx % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = m.ring.zero
        cache[key] = acc
        return acc

    return rec(tuple(range(n)), tuple(range(n)))


def bareiss_det(m: RingMatrix):
    """Fraction-free Bareiss determinant; divisions are exact in the ring.

    Entry types must implement ``/`` as exact division (series division over a
    unit-leading truncated ring counts: the tracked truncation absorbs it).
    Falls back to column pivoting; raises on a structurally singular pivot
    column only when the whole determinant is provably zero.
    """
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return m.ring.one
    a = [list(row) for row in m.entries]
    ring = m.ring
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if ring.is_zero(a[k][k]):
            piv = next((i for i in range(k + 1, n) if not ring.is_zero(a[i][k])), None)
            if piv is None:
                return ring.zero
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _exact_div(num, prev)
            a[i][k] = ring.zero
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def _exact_div(num, den):
    if isinstance(den, int):
        if den == 1:
            return num
    return num / den


def adjugate_inverse(m: RingMatrix, inv_det=None):
    """Inverse via adjugate/determinant.

    ``inv_det`` may pass a precomputed inverse of det (e.g. a series inverse
    with explicit valuation handling); otherwise ``1/det`` is formed with the
    entry type's own division.
    """
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    det = bareiss_det(m)
    if inv_det is None:
        inv_det = m.ring.one / det if not hasattr(det, "inv") else det.inv()
    cof = [[None] * n for _ in range(n)]
    idx = tuple(range(n))
    for i in range(n):
        rows = idx[:i] + idx[i + 1:]
        for j in range(n):
            cols = idx[:j] + idx[j + 1:]
            sub = RingMatrix(m.ring, [[m.entries[r][c] for c in cols] for r in rows])
            minor = laplace_det(sub)
            cof[j][i] = minor if (i + j) % 2 == 0 else -minor  # adjugate = C^T
    return RingMatrix(m.ring, [[c * inv_det for c in row] for row in cof]), det
