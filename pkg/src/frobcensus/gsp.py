"""Finite symplectic similitude groups GSp_{2g}(F_l) for g <= 2 and small l.

Matrices are packed row-major into one uint64, 4 bits per entry, so l <= 13.
A matrix M is in GSp iff M J M^T = mu J; row i of M J M^T is the
symplectic pairing of row i with every row, which is what the exhaustive
scans use.  Orders are checked against the closed form

    #Sp_{2g}(F_l) = l^{g^2} prod_{i=1}^{g} (l^{2i} - 1),   #GSp = (l - 1) #Sp.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapacityError, ConsistencyError, InvalidInputError
from .numth import is_prime

BITS = 4
MAX_L = 13
BRUTE_LIMIT = 5 * 10**7


def _check(g: int, l: int) -> int:
    if g not in (1, 2):
        raise InvalidInputError("only g = 1, 2 are supported")
    if not is_prime(l) or l > MAX_L:
        raise InvalidInputError(f"l must be a prime <= {MAX_L} for 4-bit packing, got {l}")
    return 2 * g


def symplectic_form(g: int) -> np.ndarray:
    I = np.eye(g, dtype=np.int64)
    Z = np.zeros((g, g), dtype=np.int64)
    return np.block([[Z, I], [-I, Z]])


# -- packing -------------------------------------------------------------------------


def pack(mats, l: int) -> np.ndarray:
    """(..., n, n) integer array -> (...) uint64 words."""
    m = np.asarray(mats, dtype=np.int64) % l
    n = m.shape[-1]
    flat = m.reshape(m.shape[:-2] + (n * n,)).astype(np.uint64)
    shifts = (np.arange(n * n, dtype=np.uint64) * np.uint64(BITS))
    return np.bitwise_or.reduce(flat << shifts, axis=-1)


def unpack(words, n: int) -> np.ndarray:
    w = np.asarray(words, dtype=np.uint64)
    shifts = np.arange(n * n, dtype=np.uint64) * np.uint64(BITS)
    ent = (w[..., None] >> shifts) & np.uint64(0xF)
    return ent.astype(np.int64).reshape(w.shape + (n, n))


@dataclass(frozen=True)
class PackedMat:
    g: int
    l: int
    word: int

    @classmethod
    def from_array(cls, m, l: int) -> "PackedMat":
        m = np.asarray(m)
        n = m.shape[0]
        if m.shape != (n, n) or n not in (2, 4):
            raise InvalidInputError("expected a 2x2 or 4x4 matrix")
        _check(n // 2, l)
        return cls(n // 2, l, int(pack(m, l)))

    def to_array(self) -> np.ndarray:
        return unpack(np.uint64(self.word), 2 * self.g)

    def __matmul__(self, other: "PackedMat") -> "PackedMat":
        return PackedMat.from_array(self.to_array() @ other.to_array(), self.l)


def multiplicator(M: PackedMat) -> Optional[int]:
    """mu with M J M^T = mu J, or None if M is not a similitude."""
    J = symplectic_form(M.g)
    A = M.to_array()
    prod = (A @ J @ A.T) % M.l
    mu = int(prod[0, M.g])
    if mu == 0 or not np.array_equal(prod, (mu * J) % M.l):
        return None
    return mu


def _batch_mu(words: np.ndarray, g: int, l: int) -> np.ndarray:
    A = unpack(words, 2 * g)
    J = symplectic_form(g)
    return (np.einsum("nij,jk,nk->n", A[:, :1, :], J, A[:, g, :]) % l).astype(np.int64)


def group_order(g: int, l: int, which: str = "sp") -> int:
    if g < 1 or not is_prime(l):
        raise InvalidInputError("need g >= 1 and l prime")
    sp = l ** (g * g) * math.prod(l ** (2 * i) - 1 for i in range(1, g + 1))
    if which == "sp":
        return sp
    if which == "gsp":
        return (l - 1) * sp
    raise InvalidInputError(f"which must be 'sp' or 'gsp', got {which!r}")


# -- batch arithmetic ------------------------------------------------------------------


CHUNK = 1 << 18


def matmul_words(a: np.ndarray, b, n: int, l: int) -> np.ndarray:
    """Elementwise products a[i] @ b (b a single matrix or an aligned batch)."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if a.ndim == 0 or len(a) <= CHUNK:
        return pack(np.matmul(unpack(a, n), unpack(b, n)) % l, l)
    # chunked so the int64 unpacked copies stay small
    out = np.empty(len(a), dtype=np.uint64)
    for i in range(0, len(a), CHUNK):
        bi = b if b.ndim == 0 else b[i:i + CHUNK]
        out[i:i + CHUNK] = pack(np.matmul(unpack(a[i:i + CHUNK], n), unpack(bi, n)) % l, l)
    return out


def _det(M: np.ndarray) -> np.ndarray:
    """Exact integer determinants of a (N, k, k) batch by Laplace expansion."""
    k = M.shape[-1]
    if k == 0:
        return np.ones(M.shape[0], dtype=np.int64)
    if k == 1:
        return M[:, 0, 0]
    total = np.zeros(M.shape[0], dtype=np.int64)
    for j in range(k):
        minor = np.delete(np.delete(M, 0, axis=1), j, axis=2)
        total += (-1) ** j * M[:, 0, j] * _det(minor)
    return total


def charpolys(words: np.ndarray, n: int, l: int) -> np.ndarray:
    """(N, n) array: c_1..c_n mod l of x^n + c_1 x^{n-1} + ... + c_n."""
    M = unpack(words, n)
    out = np.zeros((M.shape[0], n), dtype=np.int64)
    for k in range(1, n + 1):
        acc = np.zeros(M.shape[0], dtype=np.int64)
        for S in itertools.combinations(range(n), k):
            acc += _det(M[:, S][:, :, S])
        out[:, k - 1] = ((-1) ** k * acc) % l
    return out


# -- enumeration ---------------------------------------------------------------------


def _pairing_table(g: int, l: int) -> Tuple[np.ndarray, np.ndarray]:
    n = 2 * g
    vecs = np.array(list(itertools.product(range(l), repeat=n)), dtype=np.int64)
    W = (vecs @ symplectic_form(g) @ vecs.T) % l
    return vecs, W


def _enumerate_g1(l: int, which: str) -> np.ndarray:
    # GSp_2 = GL_2 with mu = det; Sp_2 = SL_2
    m = np.array(list(itertools.product(range(l), repeat=4)), dtype=np.int64).reshape(-1, 2, 2)
    det = (m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]) % l
    keep = det == 1 if which == "sp" else det != 0
    return np.sort(pack(m[keep], l))


def _enumerate_g2_scan(l: int, which: str) -> np.ndarray:
    """All 4x4 similitudes by scanning row quadruples through the pairing table."""
    vecs, W = _pairing_table(2, l)
    nv = len(vecs)
    words = []
    idx = np.arange(nv)
    for r1 in range(nv):
        for r2 in np.nonzero(W[r1] == 0)[0]:
            r3s = idx[(W[r1] != 0) & (W[r2] == 0)]
            if which == "sp":
                r3s = r3s[W[r1, r3s] == 1]
            r4s = idx[W[r1] == 0]
            if len(r3s) == 0 or len(r4s) == 0:
                continue
            mu = W[r1, r3s]
            ok = (W[np.ix_([r2], r4s)][0][None, :] == mu[:, None]) & (W[np.ix_(r3s, r4s)] == 0)
            i3, i4 = np.nonzero(ok)
            if len(i3) == 0:
                continue
            mats = np.stack(
                [
                    np.broadcast_to(vecs[r1], (len(i3), 4)),
                    np.broadcast_to(vecs[r2], (len(i3), 4)),
                    vecs[r3s[i3]],
                    vecs[r4s[i4]],
                ],
                axis=1,
            )
            words.append(pack(mats, l))
    return np.sort(np.concatenate(words))


def transvection(v: Sequence[int], g: int, l: int) -> np.ndarray:
    """x -> x + omega(x, v) v on row vectors: I + J v^T v."""
    v = np.asarray(v, dtype=np.int64).reshape(1, -1)
    return (np.eye(2 * g, dtype=np.int64) + symplectic_form(g) @ v.T @ v) % l


def primitive_root(l: int) -> int:
    for c in range(2, l):
        if all(pow(c, (l - 1) // q, l) != 1 for q in _prime_divisors(l - 1)):
            return c
    return 1


def _prime_divisors(n: int) -> List[int]:
    return [q for q in range(2, n + 1) if n % q == 0 and is_prime(q)]


def generators(g: int, l: int, which: str) -> List[np.ndarray]:
    n = 2 * g
    basis = np.eye(n, dtype=np.int64)
    vs = [basis[i] for i in range(n)]
    # e_i + e_j and e_i + f_j mix the hyperbolic planes
    vs += [basis[i] + basis[j] for i in range(g) for j in range(i + 1, g)]
    vs += [basis[i] + basis[g + j] for i in range(g) for j in range(g) if i != j]
    gens = [transvection(v, g, l) for v in vs]
    if which == "gsp":
        mu0 = primitive_root(l)
        gens.append(np.diag([1] * g + [mu0] * g) % l)
    return gens


def closure(gens: Sequence[np.ndarray], g: int, l: int, limit: int = 2 * 10**7) -> np.ndarray:
    """Sorted words of the group generated by ``gens`` (breadth-first)."""
    n = 2 * g
    gw = [np.uint64(pack(m, l)) for m in gens]
    seen = np.array([pack(np.eye(n, dtype=np.int64), l)], dtype=np.uint64)
    frontier = seen
    while len(frontier):
        nxt = np.unique(np.concatenate([matmul_words(frontier, s, n, l) for s in gw]))
        nxt = nxt[~np.isin(nxt, seen, assume_unique=True)]
        if len(seen) + len(nxt) > limit:
            raise CapacityError(f"group closure exceeds {limit} elements")
        seen = np.union1d(seen, nxt)
        frontier = nxt
    return seen


def enumerate_group(g: int, l: int, which: str = "gsp", method: str = "auto") -> np.ndarray:
    """Sorted packed words of Sp or GSp_{2g}(F_l); the size is asserted against the formula."""
    n = _check(g, l)
    if method == "auto":
        method = "brute" if l ** (n * n) <= BRUTE_LIMIT else "closure"
    if method == "brute":
        if l ** (n * n) > BRUTE_LIMIT:
            raise CapacityError(f"brute force over {l}^{n * n} matrices is infeasible")
        words = _enumerate_g1(l, which) if g == 1 else _enumerate_g2_scan(l, which)
    elif method == "closure":
        words = closure(generators(g, l, which), g, l)
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    expected = group_order(g, l, which)
    if len(words) != expected:
        raise ConsistencyError(f"{which}_{n}(F_{l}): enumerated {len(words)}, expected {expected}")
    return words


# -- char-poly buckets and the density bounds --------------------------------------------


@dataclass
class GspCensus:
    g: int
    l: int
    order_sp: int
    order_gsp: int
    charpoly_buckets: Dict[tuple, int]
    class_count_sp: Optional[int] = None
    class_count_gsp: Optional[int] = None

    def __post_init__(self):
        if sum(self.charpoly_buckets.values()) != self.order_gsp:
            raise ConsistencyError("bucket counts do not sum to #GSp")

    def to_json(self, top: int = 5) -> dict:
        items = sorted(self.charpoly_buckets.items(), key=lambda kv: (-kv[1], kv[0]))
        counts = [c for _, c in items]
        fmt = lambda kv: {"mu_charpoly": list(kv[0]), "count": kv[1]}  # noqa: E731
        return {
            "schema": 1,
            "g": self.g,
            "l": self.l,
            "order_sp": self.order_sp,
            "order_gsp": self.order_gsp,
            "num_buckets": len(items),
            "bucket_min": min(counts),
            "bucket_max": max(counts),
            "top_buckets": [fmt(kv) for kv in items[:top]],
            "smallest_buckets": [fmt(kv) for kv in items[::-1][:top]],
            "class_count_sp": self.class_count_sp,
            "class_count_gsp": self.class_count_gsp,
        }


def bucket_key_shape_ok(key: tuple, g: int, l: int) -> bool:
    """(mu, c_1..c_2g) obeys c_{2g-i} = mu^{g-i} c_i (c_0 = 1)."""
    mu, c = key[0], (1,) + tuple(key[1:])
    return all((c[2 * g - i] - pow(mu, g - i, l) * c[i]) % l == 0 for i in range(g + 1))


def charpoly_buckets(words: np.ndarray, g: int, l: int) -> Dict[tuple, int]:
    n = 2 * g
    cps = charpolys(words, n, l)
    mus = _batch_mu(words, g, l)
    keys = np.concatenate([mus[:, None], cps], axis=1)
    uniq, counts = np.unique(keys, axis=0, return_counts=True)
    out = {tuple(int(v) for v in k): int(c) for k, c in zip(uniq, counts)}
    bad = [k for k in out if not bucket_key_shape_ok(k, g, l)]
    if bad:
        raise ConsistencyError(f"char polys violate the similitude functional equation: {bad[:3]}")
    return out


def density_bounds(g: int, l: int) -> Tuple[Fraction, Fraction]:
    e = 2 * g * g
    lower = Fraction(l**e, (l - 1) * (l + 1) ** (e + g))
    upper = Fraction(l**e, (l - 1) * (l - 1) ** (e + g))
    return lower, upper


def verify_charpoly_bounds(census: GspCensus) -> List[Tuple[tuple, Fraction]]:
    """Buckets whose density #C/#GSp leaves [lower, upper]; empty on success."""
    lower, upper = density_bounds(census.g, census.l)
    bad = []
    for key, count in census.charpoly_buckets.items():
        dens = Fraction(count, census.order_gsp)
        Q = dens - lower
        if not (0 <= Q <= upper - lower):
            bad.append((key, dens))
    return bad


# -- conjugacy classes ---------------------------------------------------------------------


def _inverse(m: np.ndarray, l: int) -> np.ndarray:
    n = m.shape[0]
    I = np.eye(n, dtype=np.int64)
    p = m.copy()
    prev = I
    while not np.array_equal(p, I):
        prev = p
        p = (p @ m) % l
    return prev if not np.array_equal(m, I) else I


def conjugacy_classes(words: np.ndarray, g: int, l: int, gens: Sequence[np.ndarray]) -> int:
    """Number of orbits of the element set under conjugation by ``gens``.

    Each generator s links x to s x s^{-1}; the orbits are the connected
    components.  ``words`` must be sorted and closed under those conjugations.
    """
    n = 2 * g
    N = len(words)
    rows, cols = [], []
    for s in gens:
        s_inv = _inverse(s, l)
        A = unpack(words, n)
        conj = pack((s @ A % l) @ s_inv % l, l)
        j = np.searchsorted(words, conj)
        if np.any(j >= N) or np.any(words[np.minimum(j, N - 1)] != conj):
            raise ConsistencyError("element set is not closed under conjugation")
        rows.append(np.arange(N))
        cols.append(j)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(N, N))
    ncomp, _ = connected_components(graph, directed=True, connection="weak")
    return int(ncomp)


def conjugacy_classes_canonical(words: np.ndarray, g: int, l: int) -> int:
    """Orbit count by canonical representatives: min over all h of h x h^{-1}."""
    n = 2 * g
    if len(words) > 5000:
        raise CapacityError("canonical-form hashing is quadratic; use conjugacy_classes")
    G = unpack(words, n)
    inv = np.stack([_inverse(h, l) for h in G])
    canon = set()
    for x in G:
        conj = pack(np.matmul(np.matmul(G, x) % l, inv) % l, l)
        canon.add(int(conj.min()))
    return len(canon)


def class_count(g: int, l: int, which: str = "sp", words: Optional[np.ndarray] = None) -> int:
    if words is None:
        words = enumerate_group(g, l, which)
    return conjugacy_classes(words, g, l, generators(g, l, which))


def class_count_interval(g: int, q: int) -> Tuple[int, float]:
    return q**g, 10.8 * q**g


def crt_class_count(g: int, moduli: Sequence[int], which: str = "gsp") -> int:
    """#classes of the group over Z/(prod l) as the product over the prime factors."""
    return math.prod(class_count(g, l, which) for l in moduli)


def gsp_census(g: int, l: int, classes: bool = True, method: str = "auto") -> GspCensus:
    gsp_words = enumerate_group(g, l, "gsp", method)
    mus = _batch_mu(gsp_words, g, l)
    sp_words = gsp_words[mus == 1]
    if len(sp_words) != group_order(g, l, "sp"):
        raise ConsistencyError("multiplicator kernel has the wrong size")
    census = GspCensus(
        g=g,
        l=l,
        order_sp=len(sp_words),
        order_gsp=len(gsp_words),
        charpoly_buckets=charpoly_buckets(gsp_words, g, l),
    )
    if classes:
        census.class_count_sp = conjugacy_classes(sp_words, g, l, generators(g, l, "sp"))
        census.class_count_gsp = conjugacy_classes(gsp_words, g, l, generators(g, l, "gsp"))
    return census


def closure_sample_check(words: np.ndarray, g: int, l: int, rng: np.random.Generator,
                         samples: int = 10**4) -> bool:
    """Random products M N stay inside the enumerated set."""
    i = rng.integers(0, len(words), samples)
    j = rng.integers(0, len(words), samples)
    prod = pack(np.matmul(unpack(words[i], 2 * g), unpack(words[j], 2 * g)) % l, l)
    return bool(np.all(np.isin(prod, words)))
