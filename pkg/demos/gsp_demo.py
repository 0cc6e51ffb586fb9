"""Symplectic similitude groups over small fields.

Run:  python3 demos/gsp_demo.py

Enumerates GSp_4(F_3), buckets it by (multiplicator, char poly) and compares
every bucket density against the two-sided bound, then counts conjugacy
classes.  Finishes with the exponent table the sieve bounds rely on.
"""

import json

from frobcensus.asymptotics import exponent_table
from frobcensus.gsp import class_count, gsp_census, density_bounds, class_count_interval, verify_charpoly_bounds


def main():
    c = gsp_census(2, 3)
    lo, hi = density_bounds(2, 3)
    counts = sorted(c.charpoly_buckets.values())
    print(f"#Sp4(F3) = {c.order_sp}, #GSp4(F3) = {c.order_gsp}, {len(counts)} char-poly buckets")
    print(f"bucket sizes {counts[0]} .. {counts[-1]}; allowed {float(lo * c.order_gsp):.1f} .. {float(hi * c.order_gsp):.1f}")
    print(f"violations: {len(verify_charpoly_bounds(c))}")
    a, b = class_count_interval(2, 3)
    print(f"conjugacy classes: Sp4(F3) {c.class_count_sp} in [{a}, {b:g}], GSp4(F3) {c.class_count_gsp}")

    for l in (3, 5, 7, 11, 13):
        print(f"  SL2(F{l}): {class_count(1, l, 'sp')} classes (l + 4 = {l + 4})")

    print("\nexponent balancing at g = 2:")
    for row in exponent_table(2):
        theta = row["theta"] or f"z ~ (log X)^{row['z_log_power']}"
        print(f"  {row['regime']:>14}: {theta:<22} printed {json.dumps(row['printed_value'])} [{row['status']}]")


if __name__ == "__main__":
    main()
