"""Exact integer and rational linear algebra.

Everything here is arbitrary precision: Python ints for integers,
``fractions.Fraction`` for rationals.  No floating point anywhere.
Characteristic polynomials are computed division-free (Berkowitz) so
all intermediates stay integral; lattices are canonicalized by a
row-style Hermite normal form with positive pivots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArgumentError, DimensionError

# Deterministic Miller-Rabin witness set, valid for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n):
    """Deterministic primality test for n below ~3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n == b:
            return True
        if n % b == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p):
    if not is_prime(p):
        raise ArgumentError(f"{p} is not prime")


def p_valuation(x, p):
    """v_p(x) for a rational (or int) x; math.inf for x = 0."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return math.inf
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def _int_valuation(n, p):
    # n != 0
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise DimensionError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        if not rows:
            raise DimensionError("matrix needs at least one row")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged rows")
        flat = tuple(int(x) for r in rows for x in r)
        return cls(len(rows), cols, flat)

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self):
        return self.rows == self.cols

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionError("matmul shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.entry(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c):
        return IntMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def mod(self, m):
        return IntMatrix(self.rows, self.cols, tuple(a % m for a in self.entries))

    def transpose(self):
        return IntMatrix(self.cols, self.rows,
                         tuple(self.entry(j, i) for i in range(self.cols) for j in range(self.rows)))

    def apply(self, v):
        """Matrix times column vector of Fractions (or ints)."""
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum(Fraction(self.entry(i, k)) * Fraction(v[k]) for k in range(self.cols))
                     for i in range(self.rows))


def charpoly(a):
    """Characteristic polynomial of a square IntMatrix, via Berkowitz.

    Returns coefficients leading-first: (1, c1, ..., cr) with
    chi(x) = x^r + c1 x^(r-1) + ... + cr.  Division free, so all
    intermediates are exact integers.
    """
    if not a.is_square:
        raise DimensionError("characteristic polynomial needs a square matrix")
    n = a.rows
    coeffs = [1, -a.entry(0, 0)]
    for m in range(1, n):
        row = [a.entry(m, j) for j in range(m)]
        col = [a.entry(i, m) for i in range(m)]
        # first column of the Toeplitz multiplier:
        # [1, -a_mm, -row.col, -row.M.col, ..., -row.M^(m-1).col]
        toe = [1, -a.entry(m, m)]
        w = col
        toe.append(-sum(r * c for r, c in zip(row, w)))
        for _ in range(m - 1):
            w = [sum(a.entry(i, k) * w[k] for k in range(m)) for i in range(m)]
            toe.append(-sum(r * c for r, c in zip(row, w)))
        new = [0] * (m + 2)
        for i in range(m + 2):
            s = 0
            for k in range(min(i, m) + 1):
                if i - k < len(toe):
                    s += toe[i - k] * coeffs[k]
            new[i] = s
        coeffs = new
    return tuple(coeffs)


def det_exact(a):
    """Exact determinant, read off the constant charpoly coefficient."""
    c = charpoly(a)
    r = a.rows
    return c[-1] if r % 2 == 0 else -c[-1]


def hnf_int(rows, transform=False):
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Pivots positive, entries above pivots reduced into [0, pivot).
    Returns (basis_rows, rank) or (basis_rows, rank, U) where U is the
    unimodular transform with U @ input = [basis; 0].
    """
    work = [list(map(int, r)) for r in rows]
    if not work:
        raise DimensionError("need at least one row")
    dim = len(work[0])
    if any(len(r) != dim for r in work):
        raise DimensionError("ragged rows")
    nrows = len(work)
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]

    def addmul(i, j, c):
        # row i -= c * row j
        wi, wj = work[i], work[j]
        for k in range(dim):
            wi[k] -= c * wj[k]
        ui, uj = u[i], u[j]
        for k in range(nrows):
            ui[k] -= c * uj[k]

    def swap(i, j):
        work[i], work[j] = work[j], work[i]
        u[i], u[j] = u[j], u[i]

    def negate(i):
        work[i] = [-x for x in work[i]]
        u[i] = [-x for x in u[i]]

    pr = 0
    for col in range(dim):
        while True:
            nz = [i for i in range(pr, nrows) if work[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(work[i][col]))
            if i0 != pr:
                swap(pr, i0)
            clean = True
            for i in range(pr + 1, nrows):
                if work[i][col]:
                    q = work[i][col] // work[pr][col]
                    addmul(i, pr, q)
                    if work[i][col]:
                        clean = False
            if clean:
                break
        if pr < nrows and work[pr][col] != 0:
            if work[pr][col] < 0:
                negate(pr)
            for i in range(pr):
                q = work[i][col] // work[pr][col]
                if q:
                    addmul(i, pr, q)
            pr += 1
    basis = [tuple(r) for r in work[:pr]]
    if transform:
        return basis, pr, [tuple(r) for r in u]
    return basis, pr


def lattice_member(basis, v):
    """Test membership of a rational vector in the integer row span.

    `basis` must be in (row-echelon) HNF.  Returns (True, coords) with
    integer coordinates, or (False, None).
    """
    basis = [list(r) for r in basis]
    if basis:
        dim = len(basis[0])
        if len(v) != dim:
            raise DimensionError("vector length mismatch")
    residual = [Fraction(x) for x in v]
    coords = []
    for row in basis:
        pc = next((j for j, x in enumerate(row) if x != 0), None)
        if pc is None:
            continue
        c = residual[pc] / row[pc]
        if c.denominator != 1:
            return False, None
        c = int(c)
        coords.append(c)
        if c:
            for j in range(pc, len(residual)):
                residual[j] -= c * row[j]
    if any(x != 0 for x in residual):
        return False, None
    return True, tuple(coords)


# --- rational (Fraction) dense linear algebra helpers ---

def rat_matmul(a, b):
    n, k = len(a), len(a[0])
    if len(b) != k:
        raise DimensionError("matmul shape mismatch")
    m = len(b[0])
    return [[sum(Fraction(a[i][t]) * Fraction(b[t][j]) for t in range(k)) for j in range(m)]
            for i in range(n)]


def rat_inverse(a):
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("inverse needs a square matrix")
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ArgumentError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                c = m[i][col]
                m[i] = [x - c * y for x, y in zip(m[i], m[col])]
    return [row[n:] for row in m]


def rat_matpow(a, k):
    n = len(a)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    base = [[Fraction(x) for x in row] for row in a]
    if k < 0:
        base = rat_inverse(base)
        k = -k
    while k:
        if k & 1:
            out = rat_matmul(out, base)
        base = rat_matmul(base, base)
        k >>= 1
    return out


def rat_apply(a, v):
    return tuple(sum(Fraction(a[i][j]) * Fraction(v[j]) for j in range(len(v)))
                 for i in range(len(a)))
