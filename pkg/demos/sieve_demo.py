"""The square sieve on census data, term by term.

Run:  python3 demos/sieve_demo.py

Sieves A = (d * Delta_p) for the smallest observed real subfield d, first
with z = X^(1/46) (tiny, so the prime interval gets widened) and then with a
few larger z to show how the four terms trade off.
"""

from fractions import Fraction

from frobcensus.census import pi_F, run_census
from frobcensus.curves import LMFDB_3680_A
from frobcensus.sieve import census_sieve, conic_count, sieve_sequence, quad_char_sum, sieve_primes, sieve_terms

X = 2000


def show(label, rep, primes):
    print(f"{label:>14}  P={list(primes)[:6]}{'...' if len(primes) > 6 else ''} "
          f"main={float(rep.term_main):8.2f} char={float(rep.term_char):6.0f} "
          f"ram={float(rep.term_ram1 + rep.term_ram2):6.2f}  bound={float(rep.bound):8.2f}  S={rep.s_exact}")


def main():
    rep = run_census(LMFDB_3680_A, X)
    d = min(rep.d0_multiplicities)
    print(f"X = {X}, d = {d}, #A = {rep.counts['ordinarysimple']}, Pi(A, Q(sqrt {d})) = {pi_F(rep, d)}")

    srep, P = census_sieve(rep, d, Fraction(1, 46))
    show(f"z={P.z:.3f}", srep, P.primes)
    print(f"{'':>14}  (interval widened {P.widened}x to ({P.lo:.2f}, {P.hi:.2f}])")

    A = sieve_sequence(rep, d)
    for z in (10, 30, 100):
        S = sieve_primes(z, exclude=2 * d * LMFDB_3680_A.disc)
        show(f"z={z}", sieve_terms(A, S.primes), S.primes)

    # the character-sum identity behind the conic argument
    l = 13
    print(f"\nmod {l}: sum_x (x^2 + 1 / l) = {quad_char_sum(1, 0, 1, l)}, "
          f"points on Y^2 = X^2 + Z^2: {conic_count(1, 0, 1, l)} = l + 1")


if __name__ == "__main__":
    main()
