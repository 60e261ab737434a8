"""Truncated p-adic arithmetic: Z/p^N with tracked absolute precision.

Scalars, row vectors and matrices share a fixed (p, N); valuations at
or above N are precision-limited and reported as capped ("at least N"),
never as exact infinity.  Row modules are canonicalized by the Howell
normal form, which makes module equality a structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError, NotPadicIntegerError
from .exact import _int_valuation, hnf_int, require_prime


def _check_context(a, b):
    if (a.p, a.N) != (b.p, b.N):
        raise DimensionError("mismatched (p, N) contexts")


@dataclass(frozen=True)
class PadicScalar:
    """A residue mod p^N standing in for an element of Z_p."""

    p: int
    N: int
    residue: int

    def __post_init__(self):
        if self.N < 1:
            raise DimensionError("precision N must be >= 1")
        if not 0 <= self.residue < self.p ** self.N:
            raise DimensionError("residue out of range")

    @property
    def modulus(self):
        return self.p ** self.N

    def valuation(self):
        """min(v_p(residue), N); N means 'at least N' (precision-limited)."""
        if self.residue == 0:
            return self.N
        return min(_int_valuation(self.residue, self.p), self.N)

    @property
    def valuation_capped(self):
        return self.valuation() >= self.N

    def is_unit(self):
        return self.residue % self.p != 0

    def __add__(self, other):
        _check_context(self, other)
        return PadicScalar(self.p, self.N, (self.residue + other.residue) % self.modulus)

    def __sub__(self, other):
        _check_context(self, other)
        return PadicScalar(self.p, self.N, (self.residue - other.residue) % self.modulus)

    def __mul__(self, other):
        _check_context(self, other)
        return PadicScalar(self.p, self.N, self.residue * other.residue % self.modulus)

    def __neg__(self):
        return PadicScalar(self.p, self.N, -self.residue % self.modulus)

    def inverse(self):
        if not self.is_unit():
            raise NotPadicIntegerError("cannot invert a non-unit")
        return PadicScalar(self.p, self.N, pow(self.residue, -1, self.modulus))


@dataclass(frozen=True)
class PNorm:
    """A p-adic magnitude p^(-exponent); capped means '<= p^(-N)'."""

    p: int
    exponent: int
    capped: bool = False

    def __str__(self):
        if self.capped:
            return f"<={self.p}^-{self.exponent}"
        return f"{self.p}^-{self.exponent}"

    def as_fraction(self):
        return Fraction(1, self.p ** self.exponent)


def padic_reduce(x, p, N):
    """Reduce a rational p-adic integer to its residue mod p^N."""
    require_prime(p)
    if N < 1:
        raise DimensionError("precision N must be >= 1")
    x = Fraction(x)
    q = p ** N
    den = x.denominator
    if den % p == 0:
        raise NotPadicIntegerError(f"{x} is not a {p}-adic integer")
    res = x.numerator % q * pow(den, -1, q) % q
    return PadicScalar(p, N, res)


def _reduce_entry(x, p, N):
    x = Fraction(x)
    q = p ** N
    if x.denominator % p == 0:
        raise NotPadicIntegerError(f"{x} is not a {p}-adic integer")
    return x.numerator % q * pow(x.denominator, -1, q) % q


@dataclass(frozen=True)
class PadicRowVec:
    """Row vector over Z/p^N; norm is the max of entry absolute values."""

    p: int
    N: int
    entries: tuple  # int residues

    @classmethod
    def make(cls, entries, p, N):
        require_prime(p)
        return cls(p, N, tuple(_reduce_entry(x, p, N) for x in entries))

    @property
    def dim(self):
        return len(self.entries)

    def scalar(self, j):
        return PadicScalar(self.p, self.N, self.entries[j])

    def min_valuation(self):
        return min((PadicScalar(self.p, self.N, e).valuation() for e in self.entries),
                   default=self.N)

    def norm(self):
        v = self.min_valuation()
        return PNorm(self.p, v, capped=v >= self.N)

    def __add__(self, other):
        _check_context(self, other)
        q = self.p ** self.N
        return PadicRowVec(self.p, self.N,
                           tuple((a + b) % q for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        _check_context(self, other)
        q = self.p ** self.N
        return PadicRowVec(self.p, self.N,
                           tuple((a - b) % q for a, b in zip(self.entries, other.entries)))

    def dot(self, col):
        """Row times integer-residue column, as a PadicScalar."""
        if len(col) != self.dim:
            raise DimensionError("dot length mismatch")
        q = self.p ** self.N
        return PadicScalar(self.p, self.N,
                           sum(a * int(b) for a, b in zip(self.entries, col)) % q)


@dataclass(frozen=True)
class PadicMatrix:
    p: int
    N: int
    rows: int
    cols: int
    entries: tuple  # int residues, row-major

    @classmethod
    def from_int_matrix(cls, a, p, N):
        require_prime(p)
        q = p ** N
        return cls(p, N, a.rows, a.cols, tuple(x % q for x in a.entries))

    @classmethod
    def from_rows(cls, rows, p, N):
        require_prime(p)
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged rows")
        return cls(p, N, len(rows), cols,
                   tuple(_reduce_entry(x, p, N) for r in rows for x in r))

    @classmethod
    def identity(cls, n, p, N):
        return cls(p, N, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, n, m, p, N):
        return cls(p, N, n, m, (0,) * (n * m))

    @property
    def modulus(self):
        return self.p ** self.N

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_vec(self, i):
        return PadicRowVec(self.p, self.N, self.row(i))

    def __matmul__(self, other):
        _check_context(self, other)
        if self.cols != other.rows:
            raise DimensionError("matmul shape mismatch")
        q = self.modulus
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.entry(k, j) for k in range(self.cols)) % q)
        return PadicMatrix(self.p, self.N, self.rows, other.cols, tuple(out))

    def __add__(self, other):
        _check_context(self, other)
        q = self.modulus
        return PadicMatrix(self.p, self.N, self.rows, self.cols,
                           tuple((a + b) % q for a, b in zip(self.entries, other.entries)))

    def scale(self, c):
        q = self.modulus
        c = int(c) % q
        return PadicMatrix(self.p, self.N, self.rows, self.cols,
                           tuple(a * c % q for a in self.entries))

    def apply(self, col):
        """Matrix times integer-residue column; returns residue tuple."""
        if len(col) != self.cols:
            raise DimensionError("vector length mismatch")
        q = self.modulus
        return tuple(sum(self.entry(i, k) * int(col[k]) for k in range(self.cols)) % q
                     for i in range(self.rows))


@dataclass(frozen=True)
class RowModule:
    """Howell-normalized submodule of (Z/p^N)^dim, rows as residue tuples."""

    p: int
    N: int
    dim: int
    basis: tuple        # tuple of residue tuples, echelon, pivots p^e
    pivot_cols: tuple
    pivot_vals: tuple   # valuation e of each pivot

    @property
    def nrows(self):
        return len(self.basis)

    @property
    def rank(self):
        """Number of basis rows with unit pivots."""
        return sum(1 for e in self.pivot_vals if e == 0)

    @property
    def log_cardinality(self):
        """log_p of the number of elements: sum of N - e over pivots."""
        return sum(self.N - e for e in self.pivot_vals)

    def row_vecs(self):
        return [PadicRowVec(self.p, self.N, r) for r in self.basis]

    def contains(self, w):
        return row_module_contains(self, w)

    def is_submodule_of(self, other):
        return all(other.contains(PadicRowVec(self.p, self.N, r)) for r in self.basis)


def howell_form(rows, p=None, N=None, dim=None):
    """Canonical Howell basis of the row module generated by `rows`.

    `rows` may be PadicRowVec instances or raw residue sequences (then
    p, N, dim are required).  Two generating sets yield identical bases
    iff they span the same submodule of (Z/p^N)^dim.
    """
    rows = list(rows)
    if rows and isinstance(rows[0], PadicRowVec):
        p, N = rows[0].p, rows[0].N
        dim = rows[0].dim
        for r in rows:
            if (r.p, r.N, r.dim) != (p, N, dim):
                raise DimensionError("mismatched rows")
        work = [list(r.entries) for r in rows]
    else:
        if p is None or N is None or dim is None:
            raise DimensionError("raw rows need explicit p, N, dim")
        q = p ** N
        work = [[int(x) % q for x in r] for r in rows]
        if any(len(r) != dim for r in work):
            raise DimensionError("ragged rows")
    q = p ** N

    active = [r for r in work if any(r)]
    basis = []
    for col in range(dim):
        cand = [r for r in active if r[col] % q != 0]
        rest = [r for r in active if r[col] % q == 0]
        if not cand:
            active = rest
            continue
        # pick the entry of minimal valuation as pivot
        def val(r):
            return _int_valuation(r[col], p)
        piv = min(cand, key=val)
        cand.remove(piv)
        e = val(piv)
        pe = p ** e
        # normalize pivot to exactly p^e
        unit = piv[col] // pe
        inv = pow(unit, -1, q)
        piv = [x * inv % q for x in piv]
        for r in cand:
            c = (r[col] // pe) % q
            for k in range(col, dim):
                r[k] = (r[k] - c * piv[k]) % q
        basis.append((col, e, piv))
        active = cand + rest
        if e > 0:
            # Howell completion: p^(N-e) * pivot row has support right of col
            comp = [x * p ** (N - e) % q for x in piv]
            if any(comp):
                active.append(comp)
    # reduce entries above each pivot into [0, p^e); left-to-right order,
    # since reducing against a pivot only alters columns at or right of it
    for idx in range(len(basis)):
        col, e, piv = basis[idx]
        pe = p ** e
        for jdx in range(idx):
            r = basis[jdx][2]
            c = r[col] // pe
            if c:
                for k in range(col, dim):
                    r[k] = (r[k] - c * piv[k]) % q
    return RowModule(p, N, dim,
                     tuple(tuple(piv) for _, _, piv in basis),
                     tuple(col for col, _, _ in basis),
                     tuple(e for _, e, _ in basis))


def row_module_contains(module, w):
    """True iff w reduces to zero against the Howell basis of `module`."""
    if isinstance(w, PadicRowVec):
        if (w.p, w.N) != (module.p, module.N) or w.dim != module.dim:
            raise DimensionError("mismatched (p, N, dim)")
        residual = list(w.entries)
    else:
        residual = [int(x) % module.p ** module.N for x in w]
        if len(residual) != module.dim:
            raise DimensionError("dimension mismatch")
    p, q = module.p, module.p ** module.N
    for (col, e, row) in zip(module.pivot_cols, module.pivot_vals, module.basis):
        a = residual[col]
        if a == 0:
            continue
        if _int_valuation(a, p) < e:
            return False
        c = a // p ** e
        for k in range(col, module.dim):
            residual[k] = (residual[k] - c * row[k]) % q
    return not any(residual)


def left_kernel(m):
    """Howell basis of { w in (Z/p^N)^rows : w M = 0 mod p^N }.

    Computed exactly: the integer left-kernel lattice of [M; p^N I] is
    found via a unimodular HNF transform, then its projection to the
    first block is Howell-normalized mod p^N.
    """
    p, N = m.p, m.N
    q = p ** N
    r, c = m.rows, m.cols
    stacked = [list(m.row(i)) for i in range(r)]
    for j in range(c):
        stacked.append([q if k == j else 0 for k in range(c)])
    _, rank, u = hnf_int(stacked, transform=True)
    kernel_rows = [row[:r] for row in u[rank:]]
    return howell_form(kernel_rows, p=p, N=N, dim=r)


def matrix_poly_eval(coeffs, a):
    """Horner evaluation of a polynomial at a PadicMatrix.

    `coeffs` are leading-first, ints or PadicScalars.
    """
    if a.rows != a.cols:
        raise DimensionError("polynomial evaluation needs a square matrix")
    p, N, n = a.p, a.N, a.rows
    q = p ** N
    cs = [c.residue if isinstance(c, PadicScalar) else int(c) % q for c in coeffs]
    if not cs:
        return PadicMatrix.zero(n, n, p, N)
    out = PadicMatrix.identity(n, p, N).scale(cs[0])
    for c in cs[1:]:
        out = out @ a
        out = out + PadicMatrix.identity(n, p, N).scale(c)
    return out
