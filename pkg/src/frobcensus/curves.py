"""Genus-2 curves y^2 = f(x): reduction type, point counts, Frobenius data.

Counts are for the smooth projective model.  N1 is an O(p) Legendre-table
sum.  N2 sums the quadratic character of F_{p^2} through the norm,
chi_{p^2}(u) = chi_p(u * conj(u)); for each imaginary part b the norm of
f(a + b*theta) is a degree-2*deg polynomial in a, so the inner loop over a
is pure finite differencing with no multiplications.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numba
import numpy as np

from .errors import CapacityError, ConsistencyError, InvalidInputError
from .numth import (
    discriminant,
    is_prime,
    legendre_table,
    newton_from_power_sums,
    poly_trim,
    smallest_nonresidue,
)


@dataclass(frozen=True)
class CurveModel:
    f: Tuple[int, ...]
    label: Optional[str] = None
    disc: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        f = poly_trim(tuple(int(c) for c in self.f))
        if len(f) - 1 not in (5, 6):
            raise InvalidInputError(f"genus 2 needs deg f in {{5, 6}}, got degree {len(f) - 1}")
        d = discriminant(f)
        if d == 0:
            raise InvalidInputError("f is not squarefree over Q")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "disc", d)

    @classmethod
    def parse(cls, text: str, label: Optional[str] = None) -> "CurveModel":
        """Parse ``"c0,c1,...,c5"`` (lowest degree first); brackets optional."""
        body = text.strip().removeprefix("f").strip().removeprefix("=").strip().strip("[]")
        try:
            coeffs = [int(t) for t in body.replace(" ", "").split(",") if t]
        except ValueError as exc:
            raise InvalidInputError(f"bad curve coefficients {text!r}") from exc
        return cls(tuple(coeffs), label)

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def lc(self) -> int:
        return self.f[-1]


# y^2 = x^5 - 3x^4 + 2x^3 + 1, LMFDB 3680.a.29440.1
LMFDB_3680_A = CurveModel((1, 0, 0, 2, -3, 1), "3680.a.29440.1")


class Reduction(Enum):
    GOOD = "good"
    BAD = "bad"


def reduction_type(curve: CurveModel, p: int) -> Reduction:
    """Bad-prime proxy: p = 2, or p divides the leading coefficient or disc(f)."""
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if p == 2 or curve.lc % p == 0 or curve.disc % p == 0:
        return Reduction.BAD
    return Reduction.GOOD


def _require_good(curve: CurveModel, p: int) -> None:
    if reduction_type(curve, p) is Reduction.BAD:
        raise InvalidInputError(f"p = {p} is a bad prime for {curve.f}")


# -- F_p and F_{p^2} kernels ---------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _charsum_fp(c, p, chi):
    total = 0
    deg = c.shape[0] - 1
    for a in range(p):
        v = 0
        for k in range(deg, -1, -1):
            v = (v * a + c[k]) % p
        total += chi[v]
    return total


@numba.njit(cache=True, nogil=True)
def _charsum_fp2(c, p, n, chi):
    """Sum of chi_{p^2}(f(u)) over u in F_{p^2}, with F_{p^2} = F_p(theta), theta^2 = n."""
    deg = c.shape[0] - 1
    # u in F_p: f(u) in F_p is a square in F_{p^2} unless it vanishes
    total = 0
    for a in range(p):
        v = 0
        for k in range(deg, -1, -1):
            v = (v * a + c[k]) % p
        if v != 0:
            total += 1
    nb = (p - 1) // 2
    m = 2 * deg
    table = np.empty((m + 1, nb), np.int32)
    for bi in range(nb):
        b = bi + 1
        for a in range(m + 1):
            x = 0
            y = 0
            for k in range(deg, -1, -1):
                nx = (x * a + (n * y % p) * b + c[k]) % p
                ny = (x * b + y * a) % p
                x = nx
                y = ny
            table[a, bi] = (x * x - n * (y * y % p)) % p
        for j in range(1, m + 1):
            for a in range(m, j - 1, -1):
                table[a, bi] = (table[a, bi] - table[a - 1, bi]) % p
    s = 0
    pp = np.int32(p)
    for a in range(p):
        row = table[0]
        for bi in range(nb):
            s += chi[row[bi]]
        for j in range(m):
            r0 = table[j]
            r1 = table[j + 1]
            for bi in range(nb):
                t = r0[bi] + r1[bi]
                r0[bi] = t - pp if t >= pp else t
    # b and -b give conjugate u, hence equal characters
    return total + 2 * s


def _points_at_infinity(curve: CurveModel, p: int, k: int) -> int:
    if curve.degree == 5:
        return 1
    if k % 2 == 0:
        return 2
    chi = legendre_table(p)
    return 1 + int(chi[curve.lc % p])


def count_points(curve: CurveModel, p: int, k: int) -> int:
    """#C(F_{p^k}) on the smooth model, k in {1, 2}."""
    _require_good(curve, p)
    c = np.array([x % p for x in curve.f], dtype=np.int64)
    chi = legendre_table(p)
    if k == 1:
        affine = p + int(_charsum_fp(c, p, chi))
    elif k == 2:
        affine = p * p + int(_charsum_fp2(c, p, smallest_nonresidue(p), chi))
    else:
        raise InvalidInputError("count_points handles k = 1, 2; use count_points_slow")
    return affine + _points_at_infinity(curve, p, k)


# -- small-field oracle ----------------------------------------------------------


class _PrimeField:
    """F_{p^k} as F_p[t]/(m), elements encoded as base-p integers."""

    def __init__(self, p: int, k: int):
        self.p, self.k = p, k
        self.q = p**k
        self.modulus = _irreducible(p, k)

    def digits(self, u: int) -> list:
        out = []
        for _ in range(self.k):
            u, r = divmod(u, self.p)
            out.append(r)
        return out

    def encode(self, ds: Sequence[int]) -> int:
        u = 0
        for d in reversed(ds):
            u = u * self.p + d
        return u

    def mul(self, u: int, v: int) -> int:
        p, k, m = self.p, self.k, self.modulus
        a, b = self.digits(u), self.digits(v)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # reduce by the monic modulus m (lowest first, length k + 1)
        for deg in range(2 * k - 2, k - 1, -1):
            top = prod[deg] % p
            if top:
                for i in range(k + 1):
                    prod[deg - k + i] -= top * m[i]
        return self.encode([x % p for x in prod[:k]])

    def add(self, u: int, v: int) -> int:
        a, b = self.digits(u), self.digits(v)
        return self.encode([(x + y) % self.p for x, y in zip(a, b)])

    def from_int(self, c: int) -> int:
        return c % self.p


def _irreducible(p: int, k: int) -> tuple:
    """Smallest monic irreducible of degree k over F_p (lowest first)."""
    if k == 1:
        return (0, 1)

    def divides(g, f):
        f = list(f)
        dg = len(g) - 1
        for deg in range(len(f) - 1, dg - 1, -1):
            top = f[deg] % p
            if top:
                for i in range(dg + 1):
                    f[deg - dg + i] -= top * g[i]
        return all(x % p == 0 for x in f[:dg])

    for tail in itertools.product(range(p), repeat=k):
        f = tuple(tail) + (1,)
        if f[0] == 0:
            continue
        if not any(
            divides(tuple(g) + (1,), f)
            for dg in range(1, k // 2 + 1)
            for g in itertools.product(range(p), repeat=dg)
        ):
            return f
    raise AssertionError("no irreducible polynomial found")


def count_points_slow(curve: CurveModel, p: int, k: int, limit: int = 10**7) -> int:
    """Direct enumeration of C(F_{p^k}); an independent oracle for tests."""
    _require_good(curve, p)
    if p**k > limit:
        raise CapacityError(f"F_{p}^{k} has more than {limit} elements")
    field_ = _PrimeField(p, k)
    roots = [0] * field_.q
    for y in range(field_.q):
        roots[field_.mul(y, y)] += 1
    coeffs = [field_.from_int(c) for c in curve.f]
    affine = 0
    for x in range(field_.q):
        v = 0
        for c in reversed(coeffs):
            v = field_.add(field_.mul(v, x), c)
        affine += roots[v]
    if curve.degree == 5:
        return affine + 1
    return affine + roots[field_.from_int(curve.lc)]


def fp2_pow(u: Tuple[int, int], e: int, p: int, n: int) -> Tuple[int, int]:
    """(x + y*theta)^e in F_p(theta), theta^2 = n, by square-and-multiply."""
    rx, ry = 1, 0
    x, y = u[0] % p, u[1] % p
    while e:
        if e & 1:
            rx, ry = (rx * x + n * ry * y) % p, (rx * y + ry * x) % p
        x, y = (x * x + n * y * y) % p, (2 * x * y) % p
        e >>= 1
    return rx, ry


def fp2_character(u: Tuple[int, int], p: int, n: int) -> int:
    """Quadratic character of F_{p^2} through the norm map."""
    chi = legendre_table(p)
    return int(chi[(u[0] * u[0] - n * u[1] * u[1]) % p])


# -- Frobenius polynomial ---------------------------------------------------------


def weil_coeffs_from_counts(p: int, n1: int, n2: int) -> Tuple[int, int]:
    """(t1, a2) with char poly x^4 - t1 x^3 + a2 x^2 - p t1 x + p^2."""
    t1 = p + 1 - n1
    twice = n2 + n1 * (n1 - 2 * p - 2)
    if twice % 2:
        raise ConsistencyError(f"N2 + N1(N1 - 2p - 2) is odd at p = {p}")
    return t1, p + twice // 2


def check_weil_bounds(p: int, t1: int, a2: int) -> None:
    # |t1| <= 4 sqrt p  <=>  t1^2 <= 16p
    if t1 * t1 > 16 * p or abs(a2) > 6 * p:
        raise ConsistencyError(f"Weil bound violated at p = {p}: t1 = {t1}, a2 = {a2}")


def frobenius_coeffs(curve: CurveModel, p: int) -> Tuple[int, int, int, int]:
    """(t1, a2, N1, N2) at a good prime."""
    n1 = count_points(curve, p, 1)
    n2 = count_points(curve, p, 2)
    t1, a2 = weil_coeffs_from_counts(p, n1, n2)
    check_weil_bounds(p, t1, a2)
    return t1, a2, n1, n2


def charpoly(p: int, t1: int, a2: int) -> Tuple[int, ...]:
    """x^4 - t1 x^3 + a2 x^2 - p t1 x + p^2, lowest degree first."""
    return (p * p, -p * t1, a2, -t1, 1)


def charpoly_from_counts(p: int, counts: Sequence[int]) -> Tuple[int, ...]:
    """Newton-identity reconstruction from N_1..N_4 (no Weil shape assumed)."""
    sums = [p**k + 1 - n for k, n in enumerate(counts, start=1)]
    return newton_from_power_sums(sums)

