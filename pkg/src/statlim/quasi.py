"""Constructive quasi-isomorphism machinery.

Detects matrix-power congruences, turns an increasing-union
presentation (F, alpha) into a stationary one, adjoins a rational
element to a stationary group, and rebuilds a stationary presentation
for any group quasi-isomorphic to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArgumentError, DimensionError, InvariantViolation
from .exact import (IntMatrix, hnf_int, lattice_member, rat_apply, rat_inverse,
                    rat_matmul, rat_matpow)
from .groups import StationaryPresentation, member


@dataclass(frozen=True)
class IncreasingPresentation:
    """G = union alpha^n(F) for a free subgroup F and automorphism alpha.

    f_basis rows span F in ambient Q^r coordinates; alpha_mat is the
    automorphism on the ambient space.  Requires F contained in alpha(F).
    """

    f_basis: tuple   # tuple of tuples of Fractions, rows = basis of F
    alpha_mat: tuple  # tuple of tuples of Fractions, r x r

    def __post_init__(self):
        r = len(self.f_basis)
        if r == 0 or any(len(row) != r for row in self.f_basis):
            raise DimensionError("F basis must be a square row set")
        if len(self.alpha_mat) != r or any(len(row) != r for row in self.alpha_mat):
            raise DimensionError("alpha must be r x r")
        # transition matrix existence doubles as the F <= alpha(F) check
        transition_matrix(self)

    @classmethod
    def make(cls, f_basis, alpha_mat):
        return cls(tuple(tuple(Fraction(x) for x in row) for row in f_basis),
                   tuple(tuple(Fraction(x) for x in row) for row in alpha_mat))

    @classmethod
    def from_stationary(cls, presentation):
        """G = union A^-n(Z^r) as an increasing union with F = Z^r, alpha = A^-1."""
        r = presentation.rank
        a_rows = [[Fraction(presentation.A.entry(i, j)) for j in range(r)]
                  for i in range(r)]
        return cls.make([[int(i == j) for j in range(r)] for i in range(r)],
                        rat_inverse(a_rows))

    @property
    def rank(self):
        return len(self.f_basis)

    def alpha_of_basis(self):
        """Rows alpha(g_i) of the image basis."""
        return [rat_apply(self.alpha_mat, row) for row in self.f_basis]


def transition_matrix(pres):
    """Integer matrix B with g_i = sum_j B_ji alpha(g_j) (index reversal).

    The presented group is isomorphic to union B^-n(Z^r).  Raises if F
    is not contained in alpha(F) (non-integer solution).
    """
    image = pres.alpha_of_basis()
    inv = rat_inverse([list(row) for row in image])
    bt = rat_matmul([list(row) for row in pres.f_basis], inv)
    rows = []
    for row in bt:
        for x in row:
            if x.denominator != 1:
                raise InvariantViolation("F is not contained in alpha(F)")
        rows.append([int(x) for x in row])
    # bt expresses g_i over the alpha(g_j): bt[i][j] = B_ji, so B = bt^t
    return IntMatrix.from_rows(rows).transpose()


def increasing_to_limit(pres):
    """Stationary presentation of union alpha^n(F) via the transition matrix."""
    return StationaryPresentation(transition_matrix(pres))


def power_congruence(b, m):
    """First collision (k, l), k > l >= 0, with B^k = B^l mod m.

    Hash-based cycle detection over the finitely many matrices mod m;
    the defensive step cap is unreachable in practice.
    """
    if m < 2:
        raise ArgumentError("modulus must be >= 2")
    if not b.is_square:
        raise DimensionError("power congruence needs a square matrix")
    seen = {}
    cur = IntMatrix.identity(b.rows).mod(m)
    bm = b.mod(m)
    cap = m ** (b.rows * b.rows) + 1
    for n in range(cap + 1):
        key = cur.entries
        if key in seen:
            return n, seen[key]
        seen[key] = n
        cur = (cur @ bm).mod(m)
    raise InvariantViolation("no power collision found below the defensive cap")


def _minimal_multiple_in_lattice(pres, z):
    """Least m >= 1 with m z in F: the order of z + F, via F-coordinates."""
    coords = rat_apply(rat_inverse([list(r) for r in _transpose(pres.f_basis)]), z)
    return math.lcm(*(c.denominator for c in coords))


def _transpose(rows):
    return [list(col) for col in zip(*rows)]


def _scaled_hnf(rational_rows):
    """HNF basis of the lattice spanned by rational rows, as rational rows."""
    d = math.lcm(*(x.denominator for row in rational_rows for x in row))
    int_rows = [[int(x * d) for x in row] for row in rational_rows]
    basis, rank = hnf_int(int_rows)
    return [tuple(Fraction(x, d) for x in row) for row in basis], rank


def _rational_lattice_member(basis_rows, v):
    """Membership of rational v in the Z-span of rational basis rows."""
    d = math.lcm(*(x.denominator for row in basis_rows for x in row),
                 *(x.denominator for x in v))
    int_basis = [[int(x * d) for x in row] for row in basis_rows]
    hnf_basis, _ = hnf_int(int_basis)
    ok, _ = lattice_member(hnf_basis, [x * d for x in v])
    return ok


def _close_under_pullback(f_rows, alpha_mat, k, r, m):
    """Smallest lattice containing f_rows with alpha^-k(L) <= L.

    Every pullback stays inside (1/m) F, a finite-index overlattice, so
    the ascending chain stabilizes after at most r^2 log2(m) strict
    growth steps; the cap is defensive only.
    """
    alpha_inv_k = rat_matpow([list(row) for row in alpha_mat], -k)
    cap = r * r * m.bit_length() + 2
    cur = list(f_rows)
    for _ in range(cap):
        pulled = [rat_apply(alpha_inv_k, row) for row in cur]
        if all(_rational_lattice_member(cur, p) for p in pulled):
            return cur
        cur, _ = _scaled_hnf(cur + pulled)
    raise InvariantViolation("pullback closure did not stabilize")


@dataclass(frozen=True)
class AdjoinResult:
    """Stationary presentation of <G, z> plus the recorded basis change."""

    presentation: StationaryPresentation
    increasing: IncreasingPresentation  # (F', alpha^k) in the ambient coordinates
    alpha_power: int


def adjoin_element(pres, z):
    """Stationary presentation of the subgroup generated by G and z.

    Executes the constructive proof: find the order m of z over F, take
    the power-congruence exponents of the transition matrix mod m,
    enlarge F by z, and verify the increasing-union invariants for the
    chosen power of alpha before re-deriving the transition matrix.
    """
    if isinstance(pres, StationaryPresentation):
        pres = IncreasingPresentation.from_stationary(pres)
    z = tuple(Fraction(x) for x in z)
    if len(z) != pres.rank:
        raise DimensionError("adjoined vector has wrong dimension")

    m = _minimal_multiple_in_lattice(pres, z)
    if m == 1:
        return AdjoinResult(increasing_to_limit(pres), pres, 1)

    b = transition_matrix(pres)
    l1, l2 = power_congruence(b, m)
    k = math.lcm(l1, l1 - l2) if l2 else l1

    f_new, rank = _scaled_hnf(list(pres.f_basis) + [z])
    if rank != pres.rank:
        raise InvariantViolation("enlarged subgroup lost rank")
    alpha_k = tuple(tuple(x) for x in rat_matpow([list(r) for r in pres.alpha_mat], k))
    f_new = _close_under_pullback(f_new, pres.alpha_mat, k, pres.rank, m)
    new_pres = IncreasingPresentation(tuple(f_new), alpha_k)

    # proof-mandated runtime checks
    alpha_l = rat_matpow([list(r) for r in pres.alpha_mat], l1 - l2)
    moved = tuple(a - b_ for a, b_ in zip(z, rat_apply(alpha_l, z)))
    alpha_l1_f = [rat_apply(rat_matpow([list(r) for r in pres.alpha_mat], l1), row)
                  for row in pres.f_basis]
    if not _rational_lattice_member(alpha_l1_f, moved):
        raise InvariantViolation("z - alpha^(l1-l2)(z) escaped alpha^l1(F)")

    return AdjoinResult(increasing_to_limit(new_pres), new_pres, k)


@dataclass(frozen=True)
class QuasiIsoData:
    """Maps alpha: G -> H and beta: H -> G with both composites n * id."""

    n: int
    alpha_map: tuple  # rational r x r rows
    beta_map: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError("quasi-isomorphism scale n must be positive")
        ab = rat_matmul([list(r) for r in self.alpha_map],
                        [list(r) for r in self.beta_map])
        ba = rat_matmul([list(r) for r in self.beta_map],
                        [list(r) for r in self.alpha_map])
        r = len(self.alpha_map)
        n_id = [[Fraction(self.n) if i == j else Fraction(0) for j in range(r)]
                for i in range(r)]
        if ab != n_id or ba != n_id:
            raise ArgumentError("maps do not compose to n times the identity")

    @classmethod
    def make(cls, n, alpha_map, beta_map):
        return cls(int(n),
                   tuple(tuple(Fraction(x) for x in row) for row in alpha_map),
                   tuple(tuple(Fraction(x) for x in row) for row in beta_map))


def quasi_to_stationary(h_presentation, quasi, coset_reps):
    """Stationary presentation of G from a stationary H quasi-isomorphic to it.

    Starts from beta(H) (an isomorphic image of H inside G's ambient
    space) and folds adjoin_element over the coset representatives.
    Each representative z must satisfy n z in beta(H).
    """
    r = h_presentation.rank
    beta = [list(row) for row in quasi.beta_map]
    beta_inv = rat_inverse(beta)
    reps = [tuple(Fraction(x) for x in z) for z in coset_reps]
    for z in reps:
        if len(z) != r:
            raise DimensionError("coset representative has wrong dimension")
        pulled = rat_apply(beta_inv, tuple(quasi.n * x for x in z))
        ok, _ = member(h_presentation, pulled)
        if not ok:
            raise ArgumentError(f"representative {z} does not satisfy n z in beta(H)")

    # beta(H) = union (beta alpha_H beta^-1)^n (beta(Z^r)) with alpha_H = A^-1
    base = IncreasingPresentation.from_stationary(h_presentation)
    f_rows = [rat_apply(beta, row) for row in base.f_basis]
    alpha_g = rat_matmul(rat_matmul(beta, [list(r_) for r_ in base.alpha_mat]), beta_inv)
    current = IncreasingPresentation.make(f_rows, alpha_g)
    result = AdjoinResult(increasing_to_limit(current), current, 1)
    for z in reps:
        result = adjoin_element(result.increasing, z)
    return result
