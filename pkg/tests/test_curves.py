import random

import pytest

from frobcensus.curves import (
    LMFDB_3680_A,
    CurveModel,
    Reduction,
    charpoly,
    charpoly_from_counts,
    check_weil_bounds,
    count_points,
    count_points_slow,
    fp2_character,
    fp2_pow,
    frobenius_coeffs,
    reduction_type,
    weil_coeffs_from_counts,
)
from frobcensus.errors import CapacityError, ConsistencyError, InvalidInputError
from frobcensus.numth import power_sums, primes_up_to, smallest_nonresidue

X5P1 = CurveModel((1, 0, 0, 0, 0, 1))
SEXTIC = CurveModel((1, 2, 0, 1, 0, 0, 3))


def good_primes(curve, bound):
    return [int(p) for p in primes_up_to(bound) if reduction_type(curve, int(p)) is Reduction.GOOD]


class TestModel:
    def test_parse(self):
        assert CurveModel.parse("1,0,0,2,-3,1").f == LMFDB_3680_A.f
        assert CurveModel.parse("f = [1, 0, 0, 2, -3, 1]").f == LMFDB_3680_A.f

    @pytest.mark.parametrize("f", [(1, 2, 3), (0, 0, 0, 0, 0, 0, 0, 1), (1, 0, 1, 0, 0, 0, 0, 0, 1)])
    def test_wrong_degree(self, f):
        with pytest.raises(InvalidInputError):
            CurveModel(f)

    def test_not_squarefree(self):
        # (x - 1)^2 (x^3 + 1)
        with pytest.raises(InvalidInputError):
            CurveModel((1, -2, 1, 1, -2, 1))

    def test_bad_text(self):
        with pytest.raises(InvalidInputError):
            CurveModel.parse("1,a,3")


class TestReduction:
    def test_examples(self):
        assert reduction_type(X5P1, 3) is Reduction.GOOD
        assert reduction_type(X5P1, 5) is Reduction.BAD
        assert reduction_type(LMFDB_3680_A, 2) is Reduction.BAD
        assert [p for p in primes_up_to(10**4) if reduction_type(LMFDB_3680_A, int(p)) is Reduction.BAD] == [2, 5, 23]

    def test_nonprime(self):
        with pytest.raises(InvalidInputError):
            reduction_type(X5P1, 9)

    def test_bad_prime_rejected(self):
        with pytest.raises(InvalidInputError):
            count_points(X5P1, 5, 1)


class TestCounts:
    def test_hand_example(self):
        # x = 0, 1, 2 give f = 1, 2, 0: 2 + 0 + 1 affine points, plus infinity
        assert count_points(X5P1, 3, 1) == 4
        assert count_points_slow(X5P1, 3, 1) == 4

    def test_f9_and_f81(self):
        assert count_points(X5P1, 3, 2) == count_points_slow(X5P1, 3, 2) == 10
        assert count_points_slow(X5P1, 3, 4) == 118

    @pytest.mark.parametrize("curve", [LMFDB_3680_A, X5P1, SEXTIC], ids=["3680a", "x5+1", "sextic"])
    def test_fp_matches_enumeration(self, curve):
        for p in good_primes(curve, 200):
            assert count_points(curve, p, 1) == count_points_slow(curve, p, 1), p

    @pytest.mark.parametrize("curve", [LMFDB_3680_A, X5P1, SEXTIC], ids=["3680a", "x5+1", "sextic"])
    def test_fp2_matches_enumeration(self, curve):
        for p in good_primes(curve, 60):
            assert count_points(curve, p, 2) == count_points_slow(curve, p, 2), p

    def test_sextic_nonsquare_lc_has_two_points_at_infinity_over_fp2(self):
        # lc = 3 is a nonresidue mod 7; over F_49 both points at infinity are rational
        p = 7
        assert SEXTIC.lc % p == 3 and pow(3, 3, 7) == 6
        n1_slow = count_points_slow(SEXTIC, p, 1)
        n2_slow = count_points_slow(SEXTIC, p, 2)
        assert count_points(SEXTIC, p, 1) == n1_slow
        assert count_points(SEXTIC, p, 2) == n2_slow

    def test_capacity(self):
        with pytest.raises(CapacityError):
            count_points_slow(LMFDB_3680_A, 101, 4)

    def test_k_out_of_range(self):
        with pytest.raises(InvalidInputError):
            count_points(LMFDB_3680_A, 7, 3)

    @pytest.mark.parametrize("p", [5, 13, 97])
    def test_fp2_character_via_norm(self, p):
        rng = random.Random(p)
        n = smallest_nonresidue(p)
        e = (p * p - 1) // 2
        for _ in range(1000):
            u = (rng.randrange(p), rng.randrange(p))
            if u == (0, 0):
                continue
            x, y = fp2_pow(u, e, p, n)
            euler = 1 if (x, y) == (1, 0) else -1
            assert (x, y) in ((1, 0), (p - 1, 0))
            assert fp2_character(u, p, n) == euler


class TestFrobenius:
    @pytest.mark.parametrize("p", [3, 7, 11, 13])
    def test_newton_oracle(self, p):
        counts = [count_points_slow(LMFDB_3680_A, p, k) for k in range(1, 5)]
        e = charpoly_from_counts(p, counts)
        t1, a2, n1, n2 = frobenius_coeffs(LMFDB_3680_A, p)
        assert (n1, n2) == tuple(counts[:2])
        assert e == charpoly(p, t1, a2)
        assert e[0] == p * p and e[1] == p * e[3]

    def test_printed_formula_without_p_is_off(self):
        # the variant without "+p" disagrees with the oracle at p = 7
        p = 7
        n1, n2 = count_points(LMFDB_3680_A, p, 1), count_points(LMFDB_3680_A, p, 2)
        t1, a2 = weil_coeffs_from_counts(p, n1, n2)
        assert a2 - p == (n2 + n1 * (n1 - 2 * p - 2)) // 2
        assert charpoly_from_counts(p, [count_points_slow(LMFDB_3680_A, p, k) for k in range(1, 5)])[2] == a2

    def test_elliptic_analogue(self):
        # y^2 = x^3 + x + 1 over F_5 has 9 points: trace p + 1 - N = -3
        pts = 1 + sum(1 for x in range(5) for y in range(5) if (y * y - x**3 - x - 1) % 5 == 0)
        assert 5 + 1 - pts == -3

    def test_weil_bounds_and_reconstruction(self, census_2000):
        for rec in census_2000.records:
            if rec.t1 is None:
                continue
            p = rec.p
            assert rec.t1**2 <= 16 * p and abs(rec.a2) <= 6 * p
            s = power_sums(charpoly(p, rec.t1, rec.a2), 2)
            assert p + 1 - s[0] == rec.N1
            assert p * p + 1 - s[1] == rec.N2

    def test_weil_violation(self):
        with pytest.raises(ConsistencyError):
            check_weil_bounds(7, 11, 0)
        with pytest.raises(ConsistencyError):
            weil_coeffs_from_counts(7, 8, 1)
