"""Core computations on stationary presentations G = union of A^-n(Z^r).

Covers p-divisibility, the p-adic functional module (left kernel of the
unit root factor evaluated at A), unit projection and the divisibility
pseudometric, membership with certificates, pro-p corank, and the
finite-stage functional approximation for general inductive prefixes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (ArgumentError, DimensionError, InvariantViolation,
                     MembershipError)
from .exact import (IntMatrix, _int_valuation, charpoly, det_exact, is_prime,
                    require_prime)
from .factor import UnitIdealSplit, hensel_split, unit_root_count
from .padic import (PadicMatrix, PadicRowVec, PNorm, RowModule, howell_form,
                    left_kernel, matrix_poly_eval)

DEFAULT_PRECISION = 64

_TRIAL_DIVISION_LIMIT = 10 ** 6


@dataclass(frozen=True)
class StationaryPresentation:
    """Rank r and a nonsingular integer matrix A presenting union A^-n(Z^r)."""

    A: IntMatrix
    detA: int = 0  # filled at construction

    def __post_init__(self):
        if not self.A.is_square:
            raise DimensionError("presentation matrix must be square")
        d = det_exact(self.A)
        if d == 0:
            raise ArgumentError("presentation matrix must be nonsingular")
        object.__setattr__(self, "detA", d)

    @property
    def rank(self):
        return self.A.rows

    def charpoly(self):
        return charpoly(self.A)


@dataclass(frozen=True)
class InductivePrefix:
    """A finite prefix A_1, ..., A_n of an inductive system of Z^r's."""

    mats: tuple  # IntMatrix instances, all square of the same rank

    def __post_init__(self):
        if not self.mats:
            raise DimensionError("prefix needs at least one matrix")
        r = self.mats[0].rows
        for m in self.mats:
            if not m.is_square or m.rows != r:
                raise DimensionError("prefix matrices must be square of equal rank")
            if det_exact(m) == 0:
                raise ArgumentError("prefix matrices must be injective (nonsingular)")

    @property
    def rank(self):
        return self.mats[0].rows


@dataclass(frozen=True)
class GroupElement:
    """A rational vector in G with a certificate n such that A^n v is integral."""

    presentation: StationaryPresentation
    v: tuple  # Fractions
    cert: int = None

    @property
    def denominator(self):
        return math.lcm(*(x.denominator for x in self.v)) if self.v else 1


@dataclass(frozen=True)
class FunctionalBasis:
    """Howell basis of G^{*p} mod p^N, with the split that produced it."""

    p: int
    N: int
    module: RowModule
    split: UnitIdealSplit

    @property
    def rank(self):
        """Free rank of the functional module: the unit-root count."""
        return self.split.k

    def rows(self):
        return self.module.row_vecs()


def factor_denominator(d):
    """Factor a positive integer by trial division then a primality check.

    Raises ArgumentError if a composite cofactor survives trial division
    up to 10^6 (exactness over generality: such inputs are rejected, not
    guessed at).
    """
    if d < 1:
        raise ArgumentError("denominator must be positive")
    out = {}
    n = d
    f = 2
    while f <= _TRIAL_DIVISION_LIMIT and f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        if not is_prime(n):
            raise ArgumentError(f"cannot factor denominator cofactor {n}")
        out[n] = out.get(n, 0) + 1
    return out


def is_p_divisible(presentation, p):
    """Coefficient criterion for p-divisibility of G, with a power witness.

    Returns (divisible, witness) where witness is the smallest n with
    A^n = 0 mod p (n <= r by Cayley-Hamilton when the criterion holds).
    """
    require_prime(p)
    chi = presentation.charpoly()
    divisible = all(c % p == 0 for c in chi[1:])
    if not divisible:
        return False, None
    a = presentation.A.mod(p)
    power = a
    for n in range(1, presentation.rank + 1):
        if not any(power.entries):
            return True, n
        power = (power @ a).mod(p)
    raise InvariantViolation("coefficient criterion held but no nilpotent power found")


def functionals_basis(presentation, p, N=DEFAULT_PRECISION):
    """Howell basis of G^{*p} = { w : w chi1(A) = 0 } mod p^N."""
    require_prime(p)
    chi = presentation.charpoly()
    split = hensel_split(chi, p, N)
    a_mod = PadicMatrix.from_int_matrix(presentation.A, p, N)
    m1 = matrix_poly_eval(split.chi1, a_mod)
    module = left_kernel(m1)
    # the module is the reduction of a free Z_p-module of rank k, so its
    # cardinality mod p^N is exactly p^(N k)
    if module.log_cardinality != N * split.k:
        raise InvariantViolation(
            "functional module size disagrees with the unit root count")
    return FunctionalBasis(p, N, module, split)


def pro_p_corank(presentation, p):
    """Z_p-rank of the pro-p completion: the unit-root count of chi_A."""
    return unit_root_count(presentation.charpoly(), p)


def limit_prefix_functionals(prefix, p, N, n):
    """Stage-n over-approximation of G^{*p}: rows of (A_n ... A_1) mod p^N."""
    require_prime(p)
    if n < 0 or n > len(prefix.mats):
        raise ArgumentError("stage out of range for this prefix")
    r = prefix.rank
    if n == 0:
        ident = PadicMatrix.identity(r, p, N)
        return howell_form([ident.row_vec(i) for i in range(r)])
    prod = prefix.mats[0]
    for m in prefix.mats[1:n]:
        prod = m @ prod
    rows = PadicMatrix.from_int_matrix(prod, p, N)
    return howell_form([rows.row_vec(i) for i in range(r)])


def _as_fraction_vector(presentation, v):
    vec = tuple(Fraction(x) for x in v)
    if len(vec) != presentation.rank:
        raise DimensionError("vector length does not match rank")
    return vec


def certificate_bound(presentation, denominator):
    """Iteration bound n <= r (e_max + r) + r for certificates and oracles."""
    r = presentation.rank
    e_max = 0
    if denominator > 1:
        e_max = max(factor_denominator(denominator).values())
    return r * (e_max + r) + r


def _find_certificate(presentation, vec, bound):
    cur = vec
    for n in range(bound + 1):
        if all(x.denominator == 1 for x in cur):
            return n
        cur = presentation.A.apply(cur)
    return None


def member(presentation, v, N=DEFAULT_PRECISION):
    """Decide v in G via the functional closure criterion.

    v is in G iff every prime q of its denominator divides det(A) and
    every basis functional of G^{*q} evaluates to a q-adic integer on v.
    A certificate exponent is found by bounded iteration as a cross-check;
    its failure signals a bug, never a wrong answer.
    """
    vec = _as_fraction_vector(presentation, v)
    d = math.lcm(*(x.denominator for x in vec))
    if d == 1:
        return True, GroupElement(presentation, vec, 0)
    primes = factor_denominator(d)
    det = presentation.detA
    for q in primes:
        if det % q != 0:
            return False, None
    x = [int(f * d) for f in vec]
    for q, e in primes.items():
        nq = N + e
        basis = functionals_basis(presentation, q, nq)
        for w in basis.rows():
            res = w.dot(x)
            if res.valuation() < e:
                return False, None
    bound = certificate_bound(presentation, d)
    cert = _find_certificate(presentation, vec, bound)
    if cert is None:
        raise InvariantViolation(
            "closure criterion accepted v but no certificate found within bound")
    return True, GroupElement(presentation, vec, cert)


def element(presentation, v, N=DEFAULT_PRECISION, unchecked=False):
    """Wrap a rational vector as a validated GroupElement."""
    vec = _as_fraction_vector(presentation, v)
    if unchecked:
        return GroupElement(presentation, vec, None)
    ok, g = member(presentation, vec, N)
    if not ok:
        raise MembershipError(f"{v} is not in the presented group")
    return g


def unit_projection(presentation, p, N, g):
    """Component g^1 of g in the unit subspace, with its reported norm.

    g^1 = v(A) chi0(A) g where u chi1 + v chi0 = 1 (Bezout); its norm is
    the divisibility pseudometric distance d_p(g, 0).  Works at a raised
    internal precision to absorb the denominator of g.
    """
    require_prime(p)
    if isinstance(g, GroupElement):
        vec = g.v
    else:
        vec = _as_fraction_vector(presentation, g)
    r = presentation.rank
    d = math.lcm(*(x.denominator for x in vec))
    e = _int_valuation(d, p) if d % p == 0 else 0
    headroom = r * r * (_int_valuation(abs(presentation.detA), p)
                        if presentation.detA % p == 0 else 0)
    n_work = N + e + headroom
    split = hensel_split(presentation.charpoly(), p, n_work)
    q_work = p ** n_work
    # projector polynomial v * chi0, evaluated at A by Horner
    proj_poly = _poly_mul_desc(split.v, split.chi0, q_work)
    a_mod = PadicMatrix.from_int_matrix(presentation.A, p, n_work)
    proj = matrix_poly_eval(proj_poly, a_mod)
    x = [int(f * d) for f in vec]
    y = proj.apply(x)
    d_unit = d // p ** e
    inv = pow(d_unit, -1, q_work)
    q_out = p ** N
    out = []
    for yi in y:
        z = yi * inv % q_work
        if z % p ** e != 0:
            raise MembershipError(
                "unit projection has negative valuation; input is not in G")
        out.append(z // p ** e % q_out)
    g1 = PadicRowVec(p, N, tuple(out))
    return g1, g1.norm()


def _poly_mul_desc(a, b, q):
    a = list(a)
    b = list(b)
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return tuple(out)


def dp_distance(presentation, p, N, g, h):
    """Divisibility pseudometric d_p(g, h) = ||(g - h)^1||_p at precision N.

    Inputs must be members (GroupElement, or vectors that are validated).
    """
    ga = g if isinstance(g, GroupElement) else element(presentation, g, N)
    gb = h if isinstance(h, GroupElement) else element(presentation, h, N)
    diff = tuple(a - b for a, b in zip(ga.v, gb.v))
    _, norm = unit_projection(presentation, p, N, GroupElement(presentation, diff, None))
    return norm


def dp_distance_oracle(presentation, p, N, g, h):
    """Brute-force pseudometric: max j <= N with A^n (g-h) = 0 mod p^j.

    Independent of the projection path; searches divisibility directly
    by iterating the presentation matrix within the certificate bound.
    """
    require_prime(p)
    ga = g if isinstance(g, GroupElement) else element(presentation, g, N)
    gb = h if isinstance(h, GroupElement) else element(presentation, h, N)
    diff = tuple(a - b for a, b in zip(ga.v, gb.v))
    best = 0
    for j in range(N, 0, -1):
        if _divisible_by_power(presentation, diff, p, j):
            best = j
            break
    return PNorm(p, best, capped=best >= N)


def _divisible_by_power(presentation, vec, p, j):
    """True iff exists n within bound with A^n vec in p^j Z^r."""
    target = Fraction(p ** j)
    scaled = tuple(x / target for x in vec)
    d = math.lcm(*(x.denominator for x in scaled))
    bound = certificate_bound(presentation, d)
    return _find_certificate(presentation, scaled, bound) is not None


def is_divisible_oracle(presentation, vec, p):
    """Bounded-iteration test that vec is p-divisible in G."""
    return _divisible_by_power(presentation, tuple(Fraction(x) for x in vec), p, 1)
