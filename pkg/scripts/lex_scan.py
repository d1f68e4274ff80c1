"""Scan random monomial ideals for lexifiability across weight vectors.

Prints, per ring and group order, how many sampled ideals were lexifiable,
not lexifiable, or undecided, plus the smallest non-lexifiable example found.

    python scripts/lex_scan.py --weights 2,3 1,2,4 2,2,3 --samples 200
"""

from __future__ import annotations

import argparse
import random
from collections import Counter

from wgraded.core import RingDescriptor, format_monomial
from wgraded.groebner import MonomialIdeal
from wgraded.lex import NotLexifiable, group_orders, lexify


def sample(R: RingDescriptor, rng: random.Random, max_exp: int, max_gens: int) -> MonomialIdeal:
    gens = [tuple(rng.randint(0, max_exp) for _ in range(R.nvars)) for _ in range(rng.randint(1, max_gens))]
    return MonomialIdeal.of(R, [g for g in gens if any(g)] or [R.var(0)])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weights", nargs="+", default=["2,3", "1,2,4", "2,2,3"])
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--max-exp", type=int, default=5)
    ap.add_argument("--max-gens", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    for spec in args.weights:
        R = RingDescriptor.from_weights(*map(int, spec.split(",")))
        ideals = [sample(R, rng, args.max_exp, args.max_gens) for _ in range(args.samples)]
        for prio in group_orders(R):
            tally, smallest = Counter(), None
            for I in ideals:
                out = lexify(I, priority=prio)
                tally[out.status] += 1
                if isinstance(out, NotLexifiable):
                    size = (I.max_degree(), len(I.generators))
                    if smallest is None or size < smallest[0]:
                        smallest = (size, I, out.degree)
            names = ">".join(R.names[v] for v in prio)
            print(f"({spec}) {names}: " + ", ".join(f"{k} {v}" for k, v in sorted(tally.items())))
            if smallest:
                _, I, e = smallest
                gens = ", ".join(format_monomial(g, R.names) for g in I.generators)
                print(f"    smallest failure: ({gens}) fails in degree {e}")


if __name__ == "__main__":
    main()
