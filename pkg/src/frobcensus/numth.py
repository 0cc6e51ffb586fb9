"""Exact integer, rational and real-quadratic arithmetic.

Polynomials are plain tuples of coefficients, lowest degree first, so
``(2, -3, 1)`` is x^2 - 3x + 2.  Nothing in here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CapacityError, InvalidInputError

Rational = Union[int, Fraction]
IntPoly = Tuple[int, ...]

# Trial division runs over primes up to this bound; anything with a cofactor
# that cannot be certified prime below bound**2 is a capacity error.
DEFAULT_TRIAL_BOUND = 10**8

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=8)
def _prime_table(limit: int) -> tuple:
    return tuple(int(q) for q in primes_up_to(limit))


def _table_for(limit: int) -> tuple:
    # grow in powers of two so the cache stays small
    size = 1 << max(10, (limit - 1).bit_length())
    return _prime_table(size)


def is_prime(n: int) -> bool:
    """Miller-Rabin with a base set that is deterministic below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_TABLE_CAP = 1 << 22


def _trial_divisors(limit: int):
    table = _table_for(min(limit, _TABLE_CAP))
    yield from table
    q = table[-1] + 2 if table else 3
    while q <= limit:
        yield q
        q += 2


def factor(n: int, bound: int = DEFAULT_TRIAL_BOUND) -> dict:
    """Factor |n| by trial division; returns {prime: exponent}."""
    if n == 0:
        raise InvalidInputError("cannot factor 0")
    m = abs(n)
    out: dict = {}
    for q in _trial_divisors(min(bound, math.isqrt(m))):
        if q * q > m:
            break
        if m % q == 0:
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            out[q] = e
    if m > 1:
        if m > bound * bound and not is_prime(m):
            raise CapacityError(f"cofactor {m} of {n} exceeds trial-division bound {bound}")
        out[m] = out.get(m, 0) + 1
    return out


def squarefree_part(n: int, bound: int = DEFAULT_TRIAL_BOUND) -> Tuple[int, int]:
    """Return (s, m) with n = s*m^2, s squarefree and sign(s) = sign(n)."""
    if n == 0:
        raise InvalidInputError("squarefree part of 0 is undefined")
    s, m = 1, 1
    for q, e in factor(n, bound).items():
        if e % 2:
            s *= q
        m *= q ** (e // 2)
    return (s if n > 0 else -s), m


def nu(d: int, cap: Optional[int] = None, bound: int = DEFAULT_TRIAL_BOUND) -> int:
    """Number of distinct prime divisors of d, optionally only those <= cap."""
    if d == 0:
        raise InvalidInputError("nu(0) is undefined")
    primes = factor(d, bound)
    if cap is None:
        return len(primes)
    return sum(1 for q in primes if q <= cap)


def exact_sqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def is_perfect_square(n: int) -> bool:
    return exact_sqrt(n) is not None


def rational_sqrt(x: Rational) -> Optional[Fraction]:
    x = Fraction(x)
    num, den = exact_sqrt(x.numerator), exact_sqrt(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise InvalidInputError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_table(p: int) -> np.ndarray:
    """int8 array chi with chi[x] = (x/p) for x in [0, p)."""
    chi = np.full(p, -1, dtype=np.int8)
    chi[0] = 0
    r = np.arange(1, (p + 1) // 2, dtype=np.int64)
    chi[(r * r) % p] = 1
    return chi


def smallest_nonresidue(p: int) -> int:
    for n in range(2, p):
        if jacobi(n, p) == -1:
            return n
    raise InvalidInputError(f"no quadratic nonresidue mod {p}")


# -- real quadratic fields ---------------------------------------------------


def _check_field(d: int) -> None:
    if d <= 1 or squarefree_part(d)[1] != 1:
        raise InvalidInputError(f"field label must be squarefree and > 1, got {d}")


@dataclass(frozen=True)
class QuadElem:
    """a + b*sqrt(d) in Q(sqrt d), d squarefree > 1."""

    d: int
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def make(cls, d: int, a: Rational = 0, b: Rational = 0) -> "QuadElem":
        _check_field(d)
        return cls(d, Fraction(a), Fraction(b))

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise InvalidInputError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        return QuadElem(self.d, Fraction(other), Fraction(0))

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElem(self.d, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.d, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadElem(self.d, self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return self * QuadElem(self.d, o.a / n, -o.b / n)

    def __pow__(self, k: int):
        out = QuadElem(self.d, Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_totally_negative(self) -> bool:
        # both a + b sqrt d and a - b sqrt d < 0  <=>  a < 0 and a^2 > d b^2
        return self.a < 0 and self.norm() > 0

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.d})"


def quad_is_square(x: QuadElem) -> Optional[QuadElem]:
    """A square root of x inside Q(sqrt d), or None when x is not a square there."""
    if x.b == 0:
        r = rational_sqrt(x.a)
        if r is not None:
            return QuadElem(x.d, r, 0)
        # a = d c^2  ->  (c sqrt d)^2
        r = rational_sqrt(x.a / x.d)
        if r is not None:
            return QuadElem(x.d, 0, r)
        return None
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    for u2 in ((x.a + n) / 2, (x.a - n) / 2):
        u = rational_sqrt(u2)
        if u:
            y = QuadElem(x.d, u, x.b / (2 * u))
            if y * y == x:
                return y
    return None


# -- symmetric functions -----------------------------------------------------


def _elementary(poly: Sequence[Rational]) -> list:
    n = len(poly) - 1
    if poly[n] != 1:
        raise InvalidInputError("power sums need a monic polynomial")
    # x^n - e1 x^(n-1) + e2 x^(n-2) - ...
    return [(-1) ** k * poly[n - k] for k in range(n + 1)]


def power_sums(poly: Sequence[Rational], count: Optional[int] = None) -> list:
    """s_1..s_count of the roots of a monic polynomial (Newton's identities)."""
    e = _elementary(poly)
    n = len(poly) - 1
    count = n if count is None else count
    s: list = []
    for k in range(1, count + 1):
        acc = 0
        for i in range(1, min(k - 1, n) + 1):
            acc += (-1) ** (i - 1) * e[i] * s[k - i - 1]
        if k <= n:
            acc += (-1) ** (k - 1) * k * e[k]
        s.append(acc)
    return s


def newton_from_power_sums(s: Sequence[Rational]) -> tuple:
    """Inverse of power_sums: the monic polynomial whose roots have power sums s."""
    n = len(s)
    e = [Fraction(1)]
    for k in range(1, n + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * Fraction(s[i - 1]) for i in range(1, k + 1))
        e.append(acc / k)
    coeffs = [(-1) ** (n - j) * e[n - j] for j in range(n + 1)]
    return tuple(int(c) if c.denominator == 1 else c for c in coeffs)


def poly_eval(poly: Sequence[Rational], x):
    acc = 0 * x
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def poly_mul(f: Sequence, g: Sequence) -> tuple:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return tuple(out)


def poly_trim(f: Sequence) -> tuple:
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return tuple(f)


def discriminant(f: Sequence[int]) -> int:
    """Discriminant of an integer polynomial via the exact resultant with f'."""
    f = poly_trim(f)
    n = len(f) - 1
    df = tuple(i * f[i] for i in range(1, n + 1))
    res = resultant(f, df)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, r = divmod(sign * res, f[-1])
    if r:
        raise AssertionError("resultant not divisible by leading coefficient")
    return q


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Sylvester determinant, computed with fraction-free Bareiss elimination."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - n - 1 - i))
    return bareiss_det(rows)


def bareiss_det(matrix) -> int:
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]
