"""Polarization of monomial ideals and complete polarization.

Complete polarization repeats three steps until nothing changes: polarize,
map the extended ring back onto the original one by generic forms of the
right weights, and take the lex initial ideal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Polynomial, RingDescriptor, TermOrder, lex_order, random_form, substitute
from .groebner import GenericityError, Ideal, MonomialIdeal, initial_ideal


@dataclass(frozen=True)
class Polarization:
    ideal: MonomialIdeal
    ring: RingDescriptor
    back: tuple[int, ...]  # new variable -> original variable

    def __iter__(self):
        return iter((self.ideal, self.ring, self.back))


def polarize(I: MonomialIdeal) -> Polarization:
    """Replace each X^t by a product of t distinct copies of X of the same weight."""
    R = I.ring
    n = R.nvars
    copies = [max([1] + [g[v] for g in I.generators]) for v in range(n)]
    start, back, names, pos = [], [], [], 0
    for v in range(n):
        start.append(pos)
        for c in range(copies[v]):
            back.append(v)
            names.append(R.names[v] if c == 0 else f"{R.names[v]}_{c}")
        pos += copies[v]
    groups = []
    for i, (q, _) in enumerate(R.groups):
        groups.append((q, sum(copies[v] for v in R.group_range(i))))
    S = RingDescriptor(tuple(groups), tuple(names))
    gens = []
    for g in I.generators:
        m = [0] * pos
        for v, a in enumerate(g):
            for c in range(a):
                m[start[v] + c] = 1
        gens.append(tuple(m))
    return Polarization(MonomialIdeal.of(S, gens), S, tuple(back))


def _cut_back(P: Polarization, R: RingDescriptor, rng: random.Random, bound: int) -> Ideal:
    """Image of the polarized ideal under a generic surjection onto R."""
    images = [random_form(R, P.ring.weights[u], rng, bound) for u in range(P.ring.nvars)]
    gens = [substitute(Polynomial.monomial(P.ring, m), images, target=R) for m in P.ideal.generators]
    return Ideal(R, tuple(gens))


def polarization_step(I: MonomialIdeal, rng: random.Random, order: TermOrder, bound: int) -> MonomialIdeal:
    P = polarize(I)
    return initial_ideal(_cut_back(P, I.ring, rng, bound), order)


def completely_polarize(I: MonomialIdeal, order: TermOrder | None = None, seed=0, trials: int = 2,
                        max_rounds: int = 50, bound: int = 10**6) -> MonomialIdeal:
    """Iterate polarization, generic cut-back and lex initial ideal to a fixed point.

    Each round is computed ``trials`` times with independent random forms;
    disagreement raises GenericityError.
    """
    order = order or lex_order()
    rng = random.Random(seed)
    J = I
    for _ in range(max_rounds):
        results = {polarization_step(J, rng, order, bound) for _ in range(max(1, trials))}
        if len(results) != 1:
            raise GenericityError("random cut-backs disagreed; try another seed")
        nxt = results.pop()
        if nxt == J:
            return J
        J = nxt
    raise RuntimeError(f"no fixed point after {max_rounds} rounds")
