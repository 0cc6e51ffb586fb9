from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from frobcensus.errors import CapacityError, InvalidInputError
from frobcensus.numth import (
    QuadElem,
    discriminant,
    exact_sqrt,
    factor,
    is_perfect_square,
    is_prime,
    jacobi,
    legendre_table,
    newton_from_power_sums,
    nu,
    power_sums,
    primes_up_to,
    quad_is_square,
    rational_sqrt,
    smallest_nonresidue,
    squarefree_part,
)


def brute_legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


def has_square_factor(n):
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return True
        k += 1
    return False


class TestSquarefree:
    @pytest.mark.parametrize("n,expected", [(12, (3, 2)), (1, (1, 1)), (-48, (-3, 4)), (-1, (-1, 1))])
    def test_examples(self, n, expected):
        assert squarefree_part(n) == expected

    def test_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            squarefree_part(0)

    def test_capacity(self):
        # product of two primes above the trial bound
        with pytest.raises(CapacityError):
            squarefree_part(1000003 * 1000033, bound=100)

    @given(st.integers(-10**6, 10**6).filter(bool))
    def test_roundtrip(self, n):
        s, m = squarefree_part(n)
        assert s * m * m == n
        assert (s > 0) == (n > 0)
        assert not has_square_factor(s)


class TestSquares:
    @pytest.mark.parametrize("n,root", [(49, 7), (0, 0), (-4, None), (2, None)])
    def test_examples(self, n, root):
        assert exact_sqrt(n) == root
        assert is_perfect_square(n) == (root is not None)

    @given(st.integers(0, 10**30))
    def test_squares_found(self, k):
        assert exact_sqrt(k * k) == k
        # (k+1)^2 < k^2 + 2k + 2 < (k+2)^2
        assert not is_perfect_square(k * k + 2 * k + 2)

    def test_rational_sqrt(self):
        assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert rational_sqrt(Fraction(2, 9)) is None
        assert rational_sqrt(Fraction(-1)) is None


class TestJacobi:
    def test_examples(self):
        assert jacobi(2, 15) == 1
        assert jacobi(6, 3) == 0
        assert all(jacobi(a, 1) == 1 for a in range(-5, 6))

    @pytest.mark.parametrize("n", [0, -3, 4, 10])
    def test_rejects_bad_modulus(self, n):
        with pytest.raises(InvalidInputError):
            jacobi(3, n)

    @pytest.mark.parametrize("p", [int(p) for p in primes_up_to(200) if p > 2])
    def test_matches_residue_enumeration(self, p):
        assert [jacobi(a, p) for a in range(p)] == [brute_legendre(a, p) for a in range(p)]
        assert list(legendre_table(p)) == [brute_legendre(a, p) for a in range(p)]

    def test_multiplicative_in_modulus(self):
        ps = [int(p) for p in primes_up_to(50) if p > 2]
        for l in ps:
            for q in ps:
                n = l * q
                for a in range(n):
                    assert jacobi(a, n) == jacobi(a, l) * jacobi(a, q)

    @given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(0, 500))
    def test_multiplicative_in_numerator(self, a, b, k):
        n = 2 * k + 1
        assert jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n)

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 1009, 10007])
    def test_smallest_nonresidue(self, p):
        n = smallest_nonresidue(p)
        assert jacobi(n, p) == -1
        assert all(jacobi(k, p) == 1 for k in range(1, n))


class TestNu:
    def test_examples(self):
        assert nu(12) == 2
        assert nu(1) == 0
        assert nu(12, cap=2) == 1
        assert nu(-30) == 3


class TestPrimes:
    def test_is_prime_vs_sieve(self):
        ps = set(int(p) for p in primes_up_to(20000))
        assert all(is_prime(n) == (n in ps) for n in range(-5, 20000))

    def test_big(self):
        assert is_prime(2**61 - 1)
        assert not is_prime(2**61 + 1)
        assert factor(10**14 + 1) == {29: 1, 101: 1, 281: 1, 121499449: 1}

    @given(st.integers(2, 10**9))
    def test_factor_product(self, n):
        f = factor(n)
        prod = 1
        for p, e in f.items():
            assert is_prime(p)
            prod *= p**e
        assert prod == n


class TestQuadElem:
    def test_make_validates(self):
        with pytest.raises(InvalidInputError):
            QuadElem.make(4, 1, 1)
        with pytest.raises(InvalidInputError):
            QuadElem.make(1, 1, 1)

    def test_arithmetic(self):
        x = QuadElem.make(5, 2, 1)
        assert x * x == QuadElem(5, 9, 4)
        assert x.norm() == -1
        assert x.trace() == 4
        assert (x / x) == QuadElem(5, 1, 0)
        assert x.conjugate() == QuadElem(5, 2, -1)

    def test_totally_negative(self):
        assert QuadElem(13, -16, 0).is_totally_negative()
        assert not QuadElem(5, -1, 1).is_totally_negative()  # -1 + sqrt 5 > 0

    @pytest.mark.parametrize(
        "x,root",
        [(QuadElem(5, 9, 4), QuadElem(5, 2, 1)), (QuadElem(5, 4, 0), QuadElem(5, 2, 0)), (QuadElem(5, 0, 1), None)],
    )
    def test_is_square_examples(self, x, root):
        r = quad_is_square(x)
        if root is None:
            assert r is None
        else:
            assert r * r == x
            assert r in (root, -root)

    @given(
        st.sampled_from([2, 3, 5, 6, 7, 13, 57, 193]),
        st.fractions(max_denominator=50).filter(lambda f: abs(f) < 100),
        st.fractions(max_denominator=50).filter(lambda f: abs(f) < 100),
    )
    def test_squares_are_found(self, d, a, b):
        y = QuadElem(d, a, b)
        x = y * y
        r = quad_is_square(x)
        assert r is not None and r * r == x

    @given(
        st.sampled_from([2, 3, 5, 13]),
        st.integers(-50, 50),
        st.integers(-50, 50),
    )
    def test_returned_root_resquares(self, d, a, b):
        x = QuadElem(d, a, b)
        r = quad_is_square(x)
        if r is not None:
            assert r * r == x


class TestSymmetric:
    def test_examples(self):
        assert power_sums((2, -3, 1)) == [3, 5]
        assert power_sums((-7, 1), 4) == [7, 49, 343, 2401]
        s = power_sums((49, -7, 2, -1, 1))  # (t1, a2, p) = (1, 2, 7)
        assert s[:2] == [1, -3]
        assert newton_from_power_sums(s) == (49, -7, 2, -1, 1)

    @given(st.lists(st.integers(-20, 20), min_size=1, max_size=8))
    def test_newton_roundtrip(self, tail):
        poly = tuple(tail) + (1,)
        assert newton_from_power_sums(power_sums(poly)) == poly

    def test_discriminant(self):
        assert discriminant((1, 0, 0, 0, 0, 1)) == 3125
        assert discriminant((1, 0, 0, 2, -3, 1)) == -115
        assert discriminant((-1, 0, 1)) == 4
