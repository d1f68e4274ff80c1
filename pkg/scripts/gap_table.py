"""Tabulate the divisibility gap bound and Frobenius numbers for weight vectors.

    python scripts/gap_table.py 2,3 2,7 1,6,10,15 3,4,5
"""

from __future__ import annotations

import argparse

from wgraded.core import RingDescriptor, format_monomial
from wgraded.hilbert import frobenius_number, gap_bound, gap_witnesses


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("weights", nargs="*", default=["2,3", "2,7", "1,2,4", "2,3,5", "1,6,10,15", "3,4,5"])
    args = ap.parse_args()
    print(f"{'weights':<14}{'q':>5}{'G*':>6}{'frob':>6}  witness of degree G*+q")
    for spec in args.weights:
        R = RingDescriptor.from_weights(*map(int, spec.split(",")))
        q, G = R.lcm, gap_bound(R)
        try:
            frob = str(frobenius_number(R))
        except ValueError:
            frob = "-"
        wit = gap_witnesses(R, q, G + q) if G > 0 else []
        shown = format_monomial(wit[0], R.names) if wit else ""
        print(f"{spec:<14}{q:>5}{G:>6}{frob:>6}  {shown}")


if __name__ == "__main__":
    main()
