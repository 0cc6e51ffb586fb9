"""Walk through the Frobenius-field census for y^2 = x^5 - 3x^4 + 2x^3 + 1.

Run:  python3 demos/census_demo.py [X]      (default X = 3000, about 15 s)

Prints the first few ordinary simple primes with their real subfield and
gamma, then the census summary: every CM field seen so far occurs once.
"""

import sys
from collections import Counter

from frobcensus.census import field_census, max_pi_K, pigeonhole_bound, run_census, summary
from frobcensus.curves import LMFDB_3680_A
from frobcensus.frobenius import psi_bound


def main(X: int = 3000) -> None:
    rep = run_census(LMFDB_3680_A, X)
    print(f"curve f = {LMFDB_3680_A.f} (lowest degree first), disc = {LMFDB_3680_A.disc}")
    print(f"{'p':>5} {'t1':>4} {'a2':>5} {'Delta':>6} {'d0':>6} {'gamma':>8} {'sf(gamma)':>9}")
    for r in rep.ordinary_simple[:12]:
        print(f"{r.p:5d} {r.t1:4d} {r.a2:5d} {r.delta:6d} {r.d0:6d} {r.gamma:8d} {r.sf_gamma:9d}")

    s = summary(rep)
    print("\ncounts:", s["counts"])
    print(f"density of ordinary reduction: {rep.ordinary_density():.4f}")
    fc = field_census(rep)
    print(f"distinct real subfields #D0 = {len(fc.D0)}, distinct CM fields #D = {len(fc.D)}")
    print(f"max Pi(A, K) = {max_pi_K(rep)}, max Pi(A, F) = {s['max_pi_F']}")
    print(f"pigeonhole: #D >= {pigeonhole_bound(rep)}")

    # which real quadratic fields recur most often
    top = Counter(r.d0 for r in rep.ordinary_simple).most_common(5)
    print("most frequent real subfields:", ", ".join(f"Q(sqrt {d}) x{n}" for d, n in top))
    worst = max(rep.ordinary_simple, key=lambda r: r.gamma / psi_bound(2, r.p))
    print(f"largest gamma / (128 p^2): {worst.gamma / psi_bound(2, worst.p):.4f} at p = {worst.p}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3000)
