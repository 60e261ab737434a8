import random
from fractions import Fraction

import pytest

from statlim.exact import IntMatrix, det_exact, rat_apply, rat_matpow
from statlim.groups import StationaryPresentation

# Companion matrix of x^4 - 2x^2 + 9 (the running irreducible example).
COMPANION_ROWS = [[0, 0, 0, -9],
              [1, 0, 0, 0],
              [0, 1, 0, 2],
              [0, 0, 1, 0]]

# Hensel-computed residue mod 3^10 of nu - 2, nu the non-unit root of
# y^2 - 2y + 9 over Z_3; recomputed from scratch in test_factor.
GOLDEN_ALPHA = 5389


@pytest.fixture
def companion4():
    return StationaryPresentation(IntMatrix.from_rows(COMPANION_ROWS))


def random_nonsingular(rng, r, lo=-9, hi=9):
    while True:
        m = IntMatrix.from_rows(
            [[rng.randint(lo, hi) for _ in range(r)] for _ in range(r)])
        if det_exact(m) != 0:
            return m


def random_member(rng, presentation, max_power=5, entry=9):
    """A random element A^-n x of the presented group, as a Fraction tuple."""
    r = presentation.rank
    n = rng.randint(0, max_power)
    x = [rng.randint(-entry, entry) for _ in range(r)]
    a_rows = [[presentation.A.entry(i, j) for j in range(r)] for i in range(r)]
    return rat_apply(rat_matpow(a_rows, -n), tuple(Fraction(v) for v in x))


def charpoly_oracle(a):
    """Characteristic polynomial by cofactor expansion of det(xI - A).

    Polynomial entries are ascending coefficient lists; completely
    independent of the Berkowitz path.
    """
    n = a.rows
    mat = [[[-a.entry(i, j)] if i != j else [-a.entry(i, j), 1]
            for j in range(n)] for i in range(n)]
    coeffs = _poly_det(mat)
    coeffs = coeffs + [0] * (n + 1 - len(coeffs))
    return tuple(reversed(coeffs))


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
            for i in range(n)]


def _poly_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = [0]
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = _poly_mul(mat[0][j], _poly_det(minor))
        if j % 2:
            term = [-c for c in term]
        total = _poly_add(total, term)
    return total
