"""The square sieve, evaluated exactly, plus the conic character sums.

For a sequence A of nonzero integers and a set P of odd primes,

    S(A) <= #A/#P + max_{l != q} |sum_a (a / lq)|
            + (2/#P) sum_a #{l | a} + (1/#P^2) sum_a #{l | a}^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .census import CensusReport
from .errors import InvalidInputError
from .numth import is_perfect_square, is_prime, jacobi, primes_up_to


@dataclass(frozen=True)
class SieveReport:
    n_A: int
    n_P: int
    term_main: Fraction
    term_char: Fraction
    char_pair: Optional[Tuple[int, int]]
    term_ram1: Fraction
    term_ram2: Fraction
    s_exact: int

    @property
    def bound(self) -> Fraction:
        return self.term_main + self.term_char + self.term_ram1 + self.term_ram2

    @property
    def holds(self) -> bool:
        return self.s_exact <= self.bound

    def to_json(self) -> dict:
        return {
            "n_A": self.n_A,
            "n_P": self.n_P,
            "term_main": str(self.term_main),
            "term_char": str(self.term_char),
            "char_pair": list(self.char_pair) if self.char_pair else None,
            "term_ram1": str(self.term_ram1),
            "term_ram2": str(self.term_ram2),
            "bound": str(self.bound),
            "s_exact": self.s_exact,
            "inequality_holds": self.holds,
        }


def _check_sieve_set(P: Sequence[int]) -> List[int]:
    P = [int(l) for l in P]
    if len(set(P)) != len(P):
        raise InvalidInputError("sieve primes must be distinct")
    for l in P:
        if l == 2 or not is_prime(l):
            raise InvalidInputError(f"sieve set needs odd primes, got {l}")
    return P


def sieve_terms(A: Sequence[int], P: Sequence[int]) -> SieveReport:
    A = [int(a) for a in A]
    P = _check_sieve_set(P)
    if any(a == 0 for a in A):
        raise InvalidInputError("the sieved sequence must avoid 0")
    if not P:
        raise InvalidInputError("empty sieve set")
    nP = len(P)
    # chi[i, j] = (a_j / l_i); (a / lq) = (a / l)(a / q) and the pair sum is a Gram entry
    chi = np.array([[jacobi(a, l) for a in A] for l in P], dtype=np.int64).reshape(nP, len(A))
    divides = (chi == 0).sum(axis=0)
    gram = np.abs(chi @ chi.T)
    term_char, pair = Fraction(0), None
    if nP >= 2:
        iu = np.triu_indices(nP, k=1)
        vals = gram[iu]
        best = int(vals.max())
        # lexicographically smallest (l, q) among the maximizers
        cands = sorted(
            tuple(sorted((P[i], P[j]))) for i, j, v in zip(iu[0], iu[1], vals) if v == best
        )
        term_char, pair = Fraction(best), cands[0]
    return SieveReport(
        n_A=len(A),
        n_P=nP,
        term_main=Fraction(len(A), nP),
        term_char=term_char,
        char_pair=pair,
        term_ram1=Fraction(2 * int(divides.sum()), nP),
        term_ram2=Fraction(int((divides**2).sum()), nP * nP),
        s_exact=sum(1 for a in A if a > 0 and is_perfect_square(a)),
    )


# -- sequences and sieve sets ---------------------------------------------------------


def sieve_sequence(report: CensusReport, d: int, variant: str = "delta") -> List[int]:
    """(d * Delta_p) or (d * gamma_p) over ordinary simple p <= X."""
    if variant == "delta":
        return [d * r.delta for r in report.ordinary_simple]
    if variant == "gamma":
        return [d * r.gamma for r in report.ordinary_simple]
    raise InvalidInputError(f"unknown sieve sequence variant {variant!r}")


@dataclass(frozen=True)
class SieveSet:
    primes: Tuple[int, ...]
    z: float
    lo: float
    hi: float
    widened: int  # how many times the interval (z, 2z] was doubled


def sieve_primes(z: float, exclude: int = 1, min_size: int = 2) -> SieveSet:
    """Odd primes in (z, 2z] not dividing ``exclude``.

    When z is so small that fewer than ``min_size`` primes qualify, the upper
    end is doubled until they do; the effective interval is recorded.
    """
    if z <= 0:
        raise InvalidInputError("z must be positive")
    hi = 2 * z
    widened = 0
    while True:
        ps = [int(l) for l in primes_up_to(int(math.floor(hi))) if l > z and l != 2 and exclude % l]
        if len(ps) >= min_size:
            return SieveSet(tuple(ps), z, z, hi, widened)
        hi *= 2
        widened += 1
        if widened > 64:
            raise InvalidInputError("could not assemble a sieve set")


def census_sieve(report: CensusReport, d: int, theta: Fraction = Fraction(1, 46),
                 variant: str = "delta") -> Tuple[SieveReport, SieveSet]:
    """Sieve (d * Delta_p) with z = X^theta."""
    A = sieve_sequence(report, d, variant)
    z = report.X ** float(theta)
    P = sieve_primes(z, exclude=2 * d * report.curve.disc)
    return sieve_terms(A, P.primes), P


def random_instance(rng, n_max: int = 40, a_max: int = 10**4, p_max: int = 200):
    """A seeded random (A, P) pair; a quarter of the entries are forced squares."""
    odd = [int(l) for l in primes_up_to(p_max) if l > 2]
    k = rng.randint(2, min(12, len(odd)))
    P = sorted(rng.sample(odd, k))
    A = []
    for _ in range(rng.randint(1, n_max)):
        if rng.random() < 0.25:
            A.append(rng.randint(1, int(a_max**0.5)) ** 2)
        else:
            a = 0
            while a == 0:
                a = rng.randint(-a_max, a_max)
            A.append(a)
    return A, P


# -- character sums and conics ---------------------------------------------------------


def quad_char_sum_brute(a: int, b: int, c: int, l: int) -> int:
    return sum(jacobi(a * x * x + b * x + c, l) for x in range(l))


def quad_char_sum(a: int, b: int, c: int, l: int) -> int:
    """sum_{x mod l} ((a x^2 + b x + c) / l) in closed form."""
    if l == 2 or not is_prime(l):
        raise InvalidInputError(f"{l} is not an odd prime")
    a, b, c = a % l, b % l, c % l
    if a:
        disc = (b * b - 4 * a * c) % l
        return (l - 1) * jacobi(a, l) if disc == 0 else -jacobi(a, l)
    if b:
        return 0
    return l * jacobi(c, l)


def conic_count(a: int, b: int, c: int, l: int) -> int:
    """Projective points on Y^2 = a X^2 + b X Z + c Z^2 over F_l.

    Affine part (Z = 1) has sum_x (1 + chi(q(x))) points; at Z = 0 the
    equation Y^2 = a X^2 has 1 + chi(a) points with X = 1.
    """
    if l == 2 or not is_prime(l):
        raise InvalidInputError(f"{l} is not an odd prime")
    a, b, c = a % l, b % l, c % l
    if a == 0 and b == 0 and c == 0:
        return l + 1  # the double line Y^2 = 0
    return l + quad_char_sum(a, b, c, l) + 1 + jacobi(a, l)


def conic_count_brute(a: int, b: int, c: int, l: int) -> int:
    """Enumerate normalized projective triples (X : Y : Z)."""
    pts = 0
    for X in range(l):
        for Y in range(l):
            for Z in range(l):
                if (X, Y, Z) == (0, 0, 0):
                    continue
                first = next(v for v in (X, Y, Z) if v)
                if first != 1:
                    continue
                if (Y * Y - a * X * X - b * X * Z - c * Z * Z) % l == 0:
                    pts += 1
    return pts
