"""Frobenius fields of ordinary simple reductions.

For a Weil polynomial of degree 2g with real Weil polynomial h (the
minimal polynomial of beta = pi + p/pi), the CM field is K0(sqrt r) with
K0 = Q(beta) and r = beta^2 - 4p.  The integer

    gamma_p = N_{K0/Q}(beta^2 - 4p) = (-1)^g charpoly_{beta^2}(4p)

has the same squarefree part as disc(K/Q), which is how fields get indexed
without computing maximal orders.

Coefficient conventions: numeric g=2 data is (t1, a2) with char poly
x^4 - t1 x^3 + a2 x^2 - p t1 x + p^2.  Symbolic polynomials use the raw
coefficients a_i of x^{2g-i}, so a1 = -t1.  Only a1^2 enters g=2 formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Dict, Optional, Sequence, Tuple

from .curves import charpoly, check_weil_bounds
from .errors import ConsistencyError, InvalidInputError
from .numth import (
    QuadElem,
    exact_sqrt,
    is_perfect_square,
    newton_from_power_sums,
    poly_eval,
    power_sums,
    quad_is_square,
    squarefree_part,
)


class ReductionClass(Enum):
    BAD = "bad"
    NON_ORDINARY = "nonordinary"
    NOT_SIMPLE = "notsimple"
    ORDINARY_SIMPLE = "ordinarysimple"


# -- irreducibility of integer quartics ------------------------------------------


def _divisors(n: int) -> list:
    n = abs(n)
    small = [k for k in range(1, int(n**0.5) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def quartic_factor(poly: Sequence[int]) -> Optional[tuple]:
    """A nontrivial monic factor of a monic integer quartic, or None if irreducible.

    Rational roots divide the constant term; a quadratic split
    (x^2 + u x + b)(x^2 + v x + d) has b*d equal to the constant term.
    """
    c0, c1, c2, c3, lead = poly
    if lead != 1:
        raise InvalidInputError("quartic_factor expects a monic quartic")
    if c0 == 0:
        return (0, 1)
    divs = _divisors(c0)
    for r in divs + [-k for k in divs]:
        if poly_eval(poly, r) == 0:
            return (-r, 1)
    for b in divs + [-k for k in divs]:
        d = c0 // b
        if b == d:
            # u + v = c3, uv = c2 - 2b, and b(u + v) must equal c1
            if b * c3 != c1:
                continue
            disc = c3 * c3 - 4 * (c2 - 2 * b)
            s = exact_sqrt(disc)
            if s is None or (c3 + s) % 2:
                continue
            u = (c3 + s) // 2
            return (b, u, 1)
        # u d + v b = c1 with v = c3 - u  ->  u (d - b) = c1 - b c3
        num = c1 - b * c3
        if num % (d - b):
            continue
        u = num // (d - b)
        v = c3 - u
        if b + d + u * v == c2:
            return (b, u, 1)
    return None


def classify(t1: int, a2: int, p: int) -> ReductionClass:
    check_weil_bounds(p, t1, a2)
    if a2 % p == 0:
        return ReductionClass.NON_ORDINARY
    if quartic_factor(charpoly(p, t1, a2)) is not None:
        return ReductionClass.NOT_SIMPLE
    return ReductionClass.ORDINARY_SIMPLE


# -- real quadratic subfield and CM key ---------------------------------------


def real_subfield(t1: int, a2: int, p: int) -> Tuple[int, int]:
    """(Delta, d0): Delta = t1^2 - 4 a2 + 8p and K0 = Q(sqrt d0), d0 = sf(Delta)."""
    delta = t1 * t1 - 4 * a2 + 8 * p
    if delta <= 0 or is_perfect_square(delta):
        raise ConsistencyError(
            f"Delta = {delta} at p = {p}: beta would not generate a real quadratic field"
        )
    d0, _ = squarefree_part(delta)
    return delta, d0


def contains_real_field(d: int, delta: int) -> bool:
    """Q(sqrt d) is the real subfield iff d * Delta is a square."""
    return is_perfect_square(d * delta)


@dataclass(frozen=True)
class CmFieldKey:
    """The quartic CM field K0(sqrt r), K0 = Q(sqrt d0), r totally negative."""

    d0: int
    r: QuadElem

    def __post_init__(self):
        if self.r.d != self.d0:
            raise InvalidInputError("r must live in Q(sqrt d0)")
        if not self.r.is_totally_negative():
            raise ConsistencyError(f"r = {self.r} is not totally negative")
        if quad_is_square(self.r) is not None:
            raise ConsistencyError(f"r = {self.r} is a square in K0")


def beta_element(t1: int, a2: int, p: int) -> QuadElem:
    """beta = (t1 + sqrt Delta)/2 written over Q(sqrt d0)."""
    delta, d0 = real_subfield(t1, a2, p)
    m = exact_sqrt(delta // d0)
    return QuadElem(d0, Fraction(t1, 2), Fraction(m, 2))


def cm_field_key(t1: int, a2: int, p: int) -> CmFieldKey:
    beta = beta_element(t1, a2, p)
    # beta is a root of x^2 - t1 x + (a2 - 2p)
    if not (beta * beta - t1 * beta + (a2 - 2 * p)).is_zero():
        raise ConsistencyError("beta fails its minimal polynomial")
    return CmFieldKey(beta.d, beta * beta - 4 * p)


def same_cm_field(k1: CmFieldKey, k2: CmFieldKey) -> bool:
    """K0(sqrt r) ~= K0(sqrt r') iff r r' or r sigma(r') is a square in K0."""
    if k1.d0 != k2.d0:
        return False
    return (
        quad_is_square(k1.r * k2.r) is not None
        or quad_is_square(k1.r * k2.r.conjugate()) is not None
    )


def gamma_norm(t1: int, a2: int, p: int) -> int:
    """N_{K0/Q}(beta^2 - 4p) by quadratic-field arithmetic."""
    r = cm_field_key(t1, a2, p).r
    n = r.norm()
    if n.denominator != 1:
        raise ConsistencyError("norm of beta^2 - 4p is not an integer")
    return int(n)


# -- real Weil polynomial and gamma, any g ------------------------------------------


def _is_weil_shape(P: Sequence[int], p: int) -> bool:
    n = len(P) - 1
    if n % 2 or P[-1] != 1:
        return False
    g = n // 2
    # coefficient of x^i equals p^(g-i) times coefficient of x^(2g-i)
    return all(P[i] == p ** (g - i) * P[n - i] for i in range(g + 1))


def _peel(A: Sequence, p, g: int) -> list:
    """h coefficients c'_0..c'_g from char poly coefficients A_0..A_g.

    Works over any ring: x^g h(x + p/x) has x^{2g-i} coefficient
    sum_{j + 2k = i} c'_j C(g-j, k) p^k, which is triangular in c'_i.
    """
    c = [A[0]]
    for i in range(1, g + 1):
        acc = A[i]
        for k in range(1, i // 2 + 1):
            j = i - 2 * k
            acc = acc - c[j] * comb(g - j, k) * p**k
        c.append(acc)
    return c


class _Quotient:
    """Q[x]/(P) for monic P, elements as Fraction vectors (lowest first)."""

    def __init__(self, P: Sequence[int]):
        self.P = [Fraction(c) for c in P]
        self.n = len(P) - 1

    def reduce(self, f: list) -> list:
        f = list(f) + [Fraction(0)] * max(0, self.n - len(f))
        for deg in range(len(f) - 1, self.n - 1, -1):
            top = f[deg]
            if top:
                for i in range(self.n + 1):
                    f[deg - self.n + i] -= top * self.P[i]
        return f[: self.n]

    def mul(self, u: list, v: list) -> list:
        out = [Fraction(0)] * (2 * self.n - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    out[i + j] += a * b
        return self.reduce(out)

    def one(self) -> list:
        return [Fraction(1)] + [Fraction(0)] * (self.n - 1)

    def x_inverse(self) -> list:
        # x (x^{n-1} + c_{n-1} x^{n-2} + ... + c_1) = -c_0
        c0 = self.P[0]
        return [-self.P[i] / c0 for i in range(1, self.n)] + [-Fraction(1) / c0]


def _solve_exact(columns: list, rhs: list) -> Optional[list]:
    """Unique solution of sum x_j columns[j] = rhs, or None if not unique/inconsistent."""
    rows = len(rhs)
    m = len(columns)
    aug = [[columns[j][i] for j in range(m)] + [rhs[i]] for i in range(rows)]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, rows) if aug[i][col] != 0), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if any(aug[i][m] != 0 for i in range(r, rows)):
        return None
    return [aug[i][m] for i in range(m)]


def _beta_in_quotient(Q: _Quotient, p: int) -> list:
    x = [Fraction(0), Fraction(1)] + [Fraction(0)] * (Q.n - 2)
    return [a + p * b for a, b in zip(x, Q.x_inverse())]


def real_weil_poly(P: Sequence[int], p: int) -> Tuple[int, ...]:
    """Monic degree-g h with h(x + p/x) x^g = P, found as the annihilator of beta.

    beta = x + p x^{-1} in Q[x]/(P); h is the monic degree-g polynomial with
    h(beta) = 0, solved by exact linear algebra on the powers of beta.
    """
    P = tuple(int(c) for c in P)
    if not _is_weil_shape(P, p):
        raise InvalidInputError(f"{P} is not a Weil-shape polynomial for p = {p}")
    g = (len(P) - 1) // 2
    Q = _Quotient(P)
    beta = _beta_in_quotient(Q, p)
    powers = [Q.one()]
    for _ in range(g):
        powers.append(Q.mul(powers[-1], beta))
    # beta^g + c'_1 beta^{g-1} + ... + c'_g = 0
    sol = _solve_exact([powers[g - j] for j in range(1, g + 1)], [-v for v in powers[g]])
    if sol is None:
        # beta has degree < g (repeated real roots): the annihilator is not
        # unique, so take the one forced by the functional equation
        A = [P[2 * g - i] for i in range(g + 1)]
        sol = [Fraction(c) for c in _peel(A, p, g)[1:]]
    if any(Fraction(c).denominator != 1 for c in sol):
        raise ConsistencyError("real Weil polynomial has non-integer coefficients")
    h = tuple(int(c) for c in reversed(sol)) + (1,)
    check = [Fraction(0)] * Q.n
    for j, coeff in enumerate(h):
        check = [a + coeff * b for a, b in zip(check, powers[j])]
    if any(check):
        raise ConsistencyError("h(beta) != 0 in the quotient algebra")
    return h


def charpoly_of_square(h: Sequence[int]) -> Tuple[int, ...]:
    """Characteristic polynomial of beta^2 given that of beta: s_k(beta^2) = s_2k(beta)."""
    g = len(h) - 1
    s = power_sums(h, 2 * g)
    return newton_from_power_sums([s[2 * k - 1] for k in range(1, g + 1)])


def gamma(P: Sequence[int], p: int) -> int:
    """gamma_p = (-1)^g charpoly_{beta^2}(4p) for a Weil polynomial P."""
    g = (len(P) - 1) // 2
    sq = charpoly_of_square(real_weil_poly(P, p))
    return (-1) ** g * poly_eval(sq, 4 * p)


def gamma_g2(t1: int, a2: int, p: int) -> int:
    return gamma(charpoly(p, t1, a2), p)


# -- symbolic gamma ------------------------------------------------------------------


class MPoly:
    """Integer polynomial in a_1..a_g, p as {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Dict[tuple, int]] = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c: int) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def _lift(self, other) -> "MPoly":
        return other if isinstance(other, MPoly) else MPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: Dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def evaluate(self, values: Sequence[int]) -> int:
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                term *= v**k
            total += term
        return total

    def max_degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)


@dataclass(frozen=True)
class GammaPoly:
    """gamma_p as a polynomial in (a_1, ..., a_g, p).

    ``coeffs[j]`` is the coefficient c_j of charpoly_{beta^2}; ``poly`` is the
    expanded (-1)^g sum_j c_j (4p)^(g-j).
    """

    g: int
    coeffs: Tuple[MPoly, ...]
    poly: MPoly

    def __call__(self, a: Sequence[int], p: int) -> int:
        return self.poly.evaluate(list(a) + [p])

    def degree_in(self, i: int) -> int:
        """Degree in a_i (1-based)."""
        return self.poly.max_degree(i - 1)


def _symbolic_square_charpoly(g: int) -> list:
    """c_0..c_g of charpoly_{beta^2} as MPolys, via h(y) = E(y^2) + y O(y^2)."""
    nv = g + 1
    p = MPoly.var(nv, g)
    A = [MPoly.const(nv, 1)] + [MPoly.var(nv, i) for i in range(g)]
    c = _peel(A, p, g)  # h(y) = sum_j c[j] y^(g-j)
    # coefficients of E and O in Y = y^2, lowest first
    E = [MPoly(nv) for _ in range(g // 2 + 1)]
    O = [MPoly(nv) for _ in range((g + 1) // 2 + 1)]
    for j, cj in enumerate(c):
        m = g - j
        if m % 2 == 0:
            E[m // 2] = E[m // 2] + cj
        else:
            O[(m - 1) // 2] = O[(m - 1) // 2] + cj
    # charpoly_{beta^2}(Y) = (-1)^g (E(Y)^2 - Y O(Y)^2)
    out = [MPoly(nv) for _ in range(g + 1)]
    for i, e1 in enumerate(E):
        for j, e2 in enumerate(E):
            if i + j <= g:
                out[i + j] = out[i + j] + e1 * e2
    for i, o1 in enumerate(O):
        for j, o2 in enumerate(O):
            if i + j + 1 <= g:
                out[i + j + 1] = out[i + j + 1] - o1 * o2
    sign = (-1) ** g
    lowest_first = [sign * t for t in out]
    if lowest_first[g] != MPoly.const(nv, 1):
        raise ConsistencyError("charpoly of beta^2 is not monic")
    return list(reversed(lowest_first))  # c_0 = 1, c_1, ..., c_g


def gamma_symbolic(g: int) -> GammaPoly:
    if not 1 <= g <= 8:
        raise InvalidInputError("gamma_symbolic supports 1 <= g <= 8")
    nv = g + 1
    c = _symbolic_square_charpoly(g)
    four_p = 4 * MPoly.var(nv, g)
    total = MPoly(nv)
    for j, cj in enumerate(c):
        total = total + cj * four_p ** (g - j)
    poly = (-1) ** g * total
    for i in range(g):
        if poly.max_degree(i) > 2:
            raise ConsistencyError(f"gamma is more than quadratic in a_{i + 1}")
    return GammaPoly(g, tuple(c), poly)


def _abs_bound(poly: MPoly, g: int) -> Fraction:
    """Triangle-inequality bound of poly / p^w, using |a_i| <= C(2g, i) p^(i/2).

    Every monomial must have the same weight w (a_i weighs i/2, p weighs 1).
    """
    weights = set()
    total = 0
    for e, c in poly.terms.items():
        w = Fraction(sum((i + 1) * k for i, k in enumerate(e[:g])), 2) + e[g]
        weights.add(w)
        term = abs(c)
        for i, k in enumerate(e[:g]):
            term *= comb(2 * g, i + 1) ** k
        total += term
    if len(weights) > 1:
        raise ConsistencyError("non-homogeneous polynomial in the psi bound")
    return Fraction(total)


def psi_constant(g: int, form: str = "auto") -> int:
    """C with |gamma_p| <= C p^g.

    ``form="expanded"`` bounds the fully expanded polynomial term by term;
    ``form="nested"`` bounds each c_j separately inside sum c_j (4p)^(g-j).
    The default ``"auto"`` uses expanded for g <= 2 and nested for g >= 3,
    the arrangement behind the customary constants 128 and 5072.
    """
    if form == "auto":
        form = "expanded" if g <= 2 else "nested"
    G = gamma_symbolic(g)
    if form == "expanded":
        return int(_abs_bound(G.poly, g))
    if form == "nested":
        total = Fraction(0)
        for j, cj in enumerate(G.coeffs):
            bound = _abs_bound(cj, g) if cj.terms else Fraction(0)
            total += bound * 4 ** (g - j)
        if total.denominator != 1:
            raise ConsistencyError("nested psi constant is not an integer")
        return int(total)
    raise InvalidInputError(f"unknown psi form {form!r}")


def psi_bound(g: int, p, form: str = "auto"):
    """psi_g(sqrt p): the polynomial bound on |gamma_p|, evaluated at p."""
    return psi_constant(g, form) * p**g


def random_weil_poly(g: int, p: int, rng) -> Tuple[int, ...]:
    """Product of g random real Weil quadratics x^2 - b x + p with |b| <= 2 sqrt p."""
    bmax = int((4 * p) ** 0.5)
    P: tuple = (1,)
    for _ in range(g):
        b = rng.randint(-bmax, bmax)
        while b * b > 4 * p:
            b = rng.randint(-bmax, bmax)
        q = (p, -b, 1)
        out = [0] * (len(P) + 2)
        for i, x in enumerate(P):
            for j, y in enumerate(q):
                out[i + j] += x * y
        P = tuple(out)
    return P

