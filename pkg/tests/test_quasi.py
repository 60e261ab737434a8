import math
import random
from fractions import Fraction

import pytest

from statlim.errors import ArgumentError, DimensionError
from statlim.exact import IntMatrix, rat_inverse, rat_matmul
from statlim.groups import StationaryPresentation, member, pro_p_corank
from statlim.quasi import (AdjoinResult, IncreasingPresentation, QuasiIsoData,
                           adjoin_element, increasing_to_limit,
                           power_congruence, quasi_to_stationary,
                           transition_matrix)

from conftest import random_nonsingular


def _pres(rows):
    return StationaryPresentation(IntMatrix.from_rows(rows))


def _ambient_member(result, v):
    """Membership of an ambient rational vector in the adjoined group."""
    f_rows = [list(r) for r in result.increasing.f_basis]
    coords = rat_matmul([[Fraction(x) for x in v]], rat_inverse(f_rows))[0]
    ok, _ = member(result.presentation, coords)
    return ok


class TestPowerCongruence:
    def test_identity(self):
        assert power_congruence(IntMatrix.identity(3), 7) == (1, 0)

    def test_unipotent_mod_2(self):
        assert power_congruence(IntMatrix.from_rows([[1, 1], [0, 1]]), 2) == (2, 0)

    def test_unit_scalar(self):
        assert power_congruence(IntMatrix.from_rows([[2]]), 3) == (2, 0)

    def test_nilpotent_tail(self):
        # 2^2 = 2^3 = 0 mod 4, so the first collision has l > 0
        assert power_congruence(IntMatrix.from_rows([[2]]), 4) == (3, 2)

    def test_rejects_small_modulus(self):
        with pytest.raises(ArgumentError):
            power_congruence(IntMatrix.identity(2), 1)

    def test_collision_property_random(self):
        rng = random.Random(401)
        saw_tail = False
        for _ in range(100):
            r = rng.randint(1, 3)
            b = IntMatrix.from_rows(
                [[rng.randint(-9, 9) for _ in range(r)] for _ in range(r)])
            m = rng.randint(2, 12)
            k, l = power_congruence(b, m)
            assert k > l >= 0
            diff = (b.mod(m) if k == 1 else None)
            pk = IntMatrix.identity(r)
            powers = []
            for _ in range(k + 1):
                powers.append(pk.mod(m).entries)
                pk = (pk @ b).mod(m)
            assert powers[k] == powers[l]
            # first collision: all earlier powers distinct
            assert len(set(powers[:k])) == k
            if l > 0:
                saw_tail = True
        assert saw_tail


class TestTransitionMatrix:
    def test_stationary_round_trip(self):
        rng = random.Random(402)
        for _ in range(25):
            r = rng.randint(1, 3)
            a = random_nonsingular(rng, r, -5, 5)
            pres = StationaryPresentation(a)
            inc = IncreasingPresentation.from_stationary(pres)
            assert transition_matrix(inc).entries == a.entries
            assert increasing_to_limit(inc).A.entries == a.entries

    def test_rank_one_dilation(self):
        inc = IncreasingPresentation.make([[1]], [[Fraction(1, 5)]])
        assert increasing_to_limit(inc).A.entries == (5,)

    def test_diagonal(self):
        inc = IncreasingPresentation.make(
            [[1, 0], [0, 1]],
            [[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
        assert increasing_to_limit(inc).A.entries == (2, 0, 0, 3)

    def test_rejects_non_increasing(self):
        # F not inside alpha(F): alpha shrinks
        with pytest.raises(Exception):
            IncreasingPresentation.make([[1]], [[2]])


class TestAdjoin:
    def test_lattice_member_is_noop(self):
        res = adjoin_element(_pres([[5]]), [3])
        assert res.alpha_power == 1
        assert res.presentation.A.entries == (5,)

    def test_group_member_keeps_group(self):
        # 1/5 is already in Z[1/5]; the rebuilt presentation may differ
        # but must present the same group
        res = adjoin_element(_pres([[5]]), [Fraction(1, 5)])
        for j in range(1, 5):
            assert _ambient_member(res, [Fraction(1, 5 ** j)])
        assert not _ambient_member(res, [Fraction(1, 2)])

    def test_half_into_integers(self):
        res = adjoin_element(_pres([[1]]), [Fraction(1, 2)])
        assert abs(res.presentation.detA) == 1
        assert res.increasing.f_basis == ((Fraction(1, 2),),)

    def test_half_into_z_one_fifth(self):
        res = adjoin_element(_pres([[5]]), [Fraction(1, 2)])
        assert abs(res.presentation.detA) == 5
        assert _ambient_member(res, [Fraction(1, 2)])
        assert _ambient_member(res, [Fraction(1, 10)])
        assert not _ambient_member(res, [Fraction(1, 3)])

    def test_half_into_z_half_uses_tail(self):
        # transition matrix 2 is nilpotent mod 2, exercising l > 0
        res = adjoin_element(_pres([[2]]), [Fraction(1, 2)])
        assert res.alpha_power == 2
        for j in range(1, 6):
            assert _ambient_member(res, [Fraction(1, 2 ** j)])
        assert not _ambient_member(res, [Fraction(1, 3)])

    def test_free_rank_two(self):
        res = adjoin_element(_pres([[1, 0], [0, 1]]), [Fraction(1, 2), 0])
        assert abs(res.presentation.detA) == 1
        assert _ambient_member(res, [Fraction(1, 2), 0])
        assert not _ambient_member(res, [0, Fraction(1, 2)])

    def test_soundness_random(self):
        # the rebuilt group must equal union of the m cosets G + j z
        rng = random.Random(403)
        for _ in range(30):
            r = rng.randint(1, 2)
            pres = StationaryPresentation(random_nonsingular(rng, r, -4, 4))
            m = rng.choice([2, 3, 4, 6])
            z = tuple(Fraction(rng.randint(-5, 5), m) for _ in range(r))
            res = adjoin_element(pres, z)
            assert abs(res.presentation.detA) > 0
            for _ in range(6):
                base = tuple(Fraction(rng.randint(-6, 6),
                                      rng.choice([1, 1, 2, 3])) for _ in range(r))
                j = rng.randrange(m + 1)
                v = tuple(b + j * x for b, x in zip(base, z))
                expected = any(
                    member(pres, tuple(a - jj * x for a, x in zip(v, z)))[0]
                    for jj in range(m))
                assert _ambient_member(res, v) == expected

    def test_idempotent_on_result(self):
        res = adjoin_element(_pres([[5]]), [Fraction(1, 2)])
        again = adjoin_element(res.increasing, (Fraction(1, 2),))
        assert again.alpha_power == 1
        assert again.presentation.A.entries == res.presentation.A.entries

    def test_rejects_wrong_dimension(self):
        with pytest.raises(DimensionError):
            adjoin_element(_pres([[2]]), [1, 2])


class TestQuasiIsoData:
    def test_valid(self):
        q = QuasiIsoData.make(2, [[2]], [[1]])
        assert q.n == 2

    def test_rejects_bad_composite(self):
        with pytest.raises(ArgumentError):
            QuasiIsoData.make(2, [[3]], [[1]])

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ArgumentError):
            QuasiIsoData.make(0, [[1]], [[1]])


class TestQuasiRebuild:
    def test_isomorphic_no_reps(self):
        q = QuasiIsoData.make(1, [[1]], [[1]])
        res = quasi_to_stationary(_pres([[1]]), q, [])
        assert abs(res.presentation.detA) == 1

    def test_index_two_in_half_integers(self):
        q = QuasiIsoData.make(2, [[2]], [[1]])
        res = quasi_to_stationary(_pres([[1]]), q, [[Fraction(1, 2)]])
        assert abs(res.presentation.detA) == 1
        assert _ambient_member(res, [Fraction(1, 2)])

    def test_z_one_fifth_twin(self):
        q = QuasiIsoData.make(2, [[2]], [[1]])
        res = quasi_to_stationary(_pres([[5]]), q, [[Fraction(1, 2)]])
        assert abs(res.presentation.detA) == 5
        assert _ambient_member(res, [Fraction(1, 2)])
        assert _ambient_member(res, [Fraction(1, 5)])
        assert not _ambient_member(res, [Fraction(1, 3)])

    def test_corank_is_quasi_invariant(self):
        # quasi-isomorphic groups share every pro-p corank
        q = QuasiIsoData.make(2, [[2]], [[1]])
        h = _pres([[5]])
        res = quasi_to_stationary(h, q, [[Fraction(1, 2)]])
        for p in (2, 3, 5, 7):
            assert pro_p_corank(res.presentation, p) == pro_p_corank(h, p)

    def test_rank_two(self):
        q = QuasiIsoData.make(2, [[2, 0], [0, 2]], [[1, 0], [0, 1]])
        h = _pres([[1, 0], [0, 1]])
        res = quasi_to_stationary(h, q, [[Fraction(1, 2), Fraction(1, 2)]])
        assert abs(res.presentation.detA) == 1
        assert _ambient_member(res, [Fraction(1, 2), Fraction(1, 2)])
        assert not _ambient_member(res, [Fraction(1, 2), 0])

    def test_rejects_bad_representative(self):
        q = QuasiIsoData.make(2, [[2]], [[1]])
        with pytest.raises(ArgumentError):
            quasi_to_stationary(_pres([[1]]), q, [[Fraction(1, 3)]])
