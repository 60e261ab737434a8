"""Unit-root / ideal-root splitting of monic integer polynomials over Z_p.

The unit root factor chi1 collects the roots of p-adic absolute value 1,
the ideal root factor chi0 the roots of absolute value < 1.  The unit
root count is read off coefficient valuations alone (the slope-0 edge of
the Newton polygon), the split itself is produced by quadratic Hensel
lifting from the coprime seed chi = x^(r-k) * g(x) mod p.

Polynomial coefficient lists are leading-first throughout the public
API, matching charpoly output.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArgumentError, InvariantViolation
from .exact import require_prime

# ---- ascending-order helpers (index = degree), all mod q ----


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, q):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q
                  for i in range(n)])


def _psub(a, b, q):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q
                  for i in range(n)])


def _pmul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _trim(out)


def _pdivmod(a, b, q):
    """Divide by a polynomial whose leading coefficient is a unit mod q."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, q)
    rem = [x % q for x in a]
    if len(rem) < len(b):
        return [], _trim(rem)
    quo = [0] * (len(rem) - len(b) + 1)
    for i in range(len(rem) - len(b), -1, -1):
        c = rem[i + len(b) - 1] * inv % q
        if c:
            quo[i] = c
            for j, bj in enumerate(b):
                rem[i + j] = (rem[i + j] - c * bj) % q
    return _trim(quo), _trim(rem)


def _ext_euclid_mod_p(f, g, p):
    """Extended Euclid over F_p: returns (s, t) with s f + t g = 1."""
    r0, r1 = [x % p for x in f], [x % p for x in g]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    r0, r1 = _trim(r0), _trim(r1)
    while r1:
        quo, rem = _pdivmod(r0, r1, p)
        r0, r1 = r1, rem
        s0, s1 = s1, _psub(s0, _pmul(quo, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(quo, t1, p), p)
    if len(r0) != 1:
        raise InvariantViolation("polynomials are not coprime mod p")
    inv = pow(r0[0], -1, p)
    return ([x * inv % p for x in s0], [x * inv % p for x in t0])


def _asc(coeffs_desc, q):
    return _trim([int(c) % q for c in reversed(list(coeffs_desc))])


def _desc(coeffs_asc, degree=None):
    a = list(coeffs_asc)
    if degree is not None:
        a = a + [0] * (degree + 1 - len(a))
    return tuple(reversed(a)) if a else (0,)


@dataclass(frozen=True)
class UnitIdealSplit:
    """chi = chi1 * chi0 mod p^N with Bezout data u chi1 + v chi0 = 1."""

    p: int
    N: int
    k: int          # unit-root count = deg chi1
    chi1: tuple     # leading-first residues, monic, degree k
    chi0: tuple     # leading-first residues, monic, degree r - k
    u: tuple        # deg u < deg chi0 (when both factors nonconstant)
    v: tuple        # deg v < deg chi1


def _check_monic_int(chi):
    chi = [int(c) for c in chi]
    if not chi or chi[0] != 1:
        raise ArgumentError("polynomial must be monic (leading-first)")
    return chi


def unit_root_count(chi, p):
    """Number of roots of absolute value 1, from coefficient valuations.

    chi leading-first: (1, a1, ..., ar).  k is the largest index i with
    a_i a p-adic unit (a_0 = 1 always qualifies).
    """
    chi = _check_monic_int(chi)
    require_prime(p)
    k = 0
    for i, c in enumerate(chi):
        if c % p != 0:
            k = i
    return k


def hensel_split(chi, p, N):
    """Split a monic integer polynomial into unit and ideal root factors.

    Seed: chi = x^(r-k) * g(x) mod p with g(0) a unit; lifted
    quadratically to precision N.  Degenerate counts k = 0 and k = r
    return constant factors with trivial Bezout data.
    """
    chi = _check_monic_int(chi)
    require_prime(p)
    if N < 1:
        raise ArgumentError("precision N must be >= 1")
    r = len(chi) - 1
    k = unit_root_count(chi, p)
    q = p ** N
    chi_mod = tuple(c % q for c in chi)
    if k == 0:
        return UnitIdealSplit(p, N, 0, (1,), chi_mod, (1,), (0,))
    if k == r:
        return UnitIdealSplit(p, N, r, chi_mod, (1,), (0,), (1,))

    f = _asc(chi, q)
    m = r - k
    # seed mod p: chi = x^m * (x^k + a1 x^(k-1) + ... + ak)
    g = [chi[k - i] % p for i in range(k + 1)]  # ascending, monic degree k
    h = [0] * m + [1]                            # x^m
    s, t = _ext_euclid_mod_p(g, h, p)

    modulus = p
    while modulus < q:
        modulus = min(modulus * modulus, q)
        g, h, s, t = _lift_step(f, g, h, s, t, modulus)
    # re-derive the Bezout pair at full precision with tight degree bounds
    s, t = _ext_from_factors(g, h, p, q)
    return UnitIdealSplit(p, N, k, _desc(g, k), _desc(h, m), _desc(s), _desc(t))


def _lift_step(f, g, h, s, t, q):
    """One quadratic Hensel step: all identities lifted from m to m^2 (= q).

    h stays monic; g is recovered by exact division f / h so both
    factors keep their degrees, and the Bezout pair is re-solved against
    the lifted factors (divisions are all by monic polynomials).
    """
    g = _trim([x % q for x in g])
    h = _trim([x % q for x in h])
    s = _trim([x % q for x in s])
    t = _trim([x % q for x in t])
    e = _psub(f, _pmul(g, h, q), q)
    _, r = _pdivmod(_pmul(s, e, q), h, q)
    h1 = _padd(h, r, q)
    g1, rem = _pdivmod(f, h1, q)
    if rem:
        raise InvariantViolation("Hensel lift lost the factorization")
    b = _psub(_padd(_pmul(s, g1, q), _pmul(t, h1, q), q), [1], q)
    _, d = _pdivmod(_pmul(s, b, q), h1, q)
    s1 = _psub(s, d, q)
    t1, rem = _pdivmod(_psub([1], _pmul(s1, g1, q), q), h1, q)
    if rem:
        raise InvariantViolation("Hensel lift lost the Bezout identity")
    return g1, h1, s1, t1


def _ext_from_factors(g, h, p, q):
    """Bezout pair (s, t) with s g + t h = 1, deg s < deg h, deg t < deg g."""
    s = _poly_inverse_mod(g, h, p, q)
    num = _psub([1], _pmul(s, g, q), q)
    t, rem = _pdivmod(num, h, q)
    if rem:
        raise InvariantViolation("Bezout normalization failed")
    return s, t


def _poly_inverse_mod(g, h, p, q):
    """Inverse of g modulo monic h over Z/q, by Euclid mod p + Newton lift."""
    s, _ = _ext_euclid_mod_p([x % p for x in g], [x % p for x in h], p)
    modulus = p
    while modulus < q:
        modulus = min(modulus * modulus, q)
        # Newton step: s <- s (2 - g s) mod (h, modulus)
        gs = _pdivmod(_pmul(g, s, modulus), h, modulus)[1]
        corr = _psub([2], gs, modulus)
        s = _pdivmod(_pmul(s, corr, modulus), h, modulus)[1]
    return _pdivmod(s, h, q)[1]


def bezout_cofactors(chi1, chi0, p, N):
    """Cofactors (u, v) with u chi1 + v chi0 = 1 mod p^N.

    Requires chi1, chi0 coprime mod p (unit resultant); degenerate
    constant factors short-circuit.
    """
    require_prime(p)
    q = p ** N
    g = _asc(chi1, q)
    h = _asc(chi0, q)
    if len(g) == 1:
        inv = pow(g[0], -1, q)
        return ((inv,), (0,))
    if len(h) == 1:
        inv = pow(h[0], -1, q)
        return ((0,), (inv,))
    s, t = _ext_from_factors(g, h, p, q)
    return (_desc(s), _desc(t))
