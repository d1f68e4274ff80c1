"""Lexsegments, shadows, lexicographic ideals and lexifiability.

Lex orders are given by a variable priority (largest variable first); the
default is the flat order, where the lightest group comes first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Monomial, RingDescriptor, TermOrder, lex_order, mono_mul, monomials_of_degree, weighted_degree
from .groebner import Ideal, MonomialIdeal, initial_ideal
from .hilbert import gap_bound, hilbert_series, ring_hilbert_function


def _order(priority) -> TermOrder:
    return priority if isinstance(priority, TermOrder) else lex_order(priority)


def ordered_monomials(R: RingDescriptor, d: int, priority=None) -> list[Monomial]:
    """R_d in descending lex order."""
    return monomials_of_degree(R, d, _order(priority))


def lex_segment(R: RingDescriptor, d: int, k: int, priority=None) -> list[Monomial]:
    """The k largest monomials of degree d."""
    mons = ordered_monomials(R, d, priority)
    if not 0 <= k <= len(mons):
        raise ValueError(f"k={k} outside 0..{len(mons)} for degree {d}")
    return mons[:k]


def _common_degree(A: Iterable[Monomial], R: RingDescriptor) -> int | None:
    degs = {weighted_degree(m, R) for m in A}
    if len(degs) > 1:
        raise ValueError(f"monomials of mixed degrees {sorted(degs)}")
    return degs.pop() if degs else None


def is_lexsegment(A: Iterable[Monomial], R: RingDescriptor, priority=None) -> bool:
    A = set(A)
    d = _common_degree(A, R)
    if d is None:
        return True
    return set(ordered_monomials(R, d, priority)[: len(A)]) == A


def shadow(A: Iterable[Monomial], i: int, R: RingDescriptor) -> set[Monomial]:
    """{u*m : u in A, m in R_i}."""
    A = list(A)
    _common_degree(A, R)
    mons = monomials_of_degree(R, i)
    return {mono_mul(u, m) for u in A for m in mons}


def is_lexicographic_ideal(I: MonomialIdeal, priority=None) -> tuple[bool, int | None]:
    """Check that I_i is a lexsegment for i <= d + q + G*(w); by the finiteness
    criterion for lexicographic ideals this decides every degree.

    Returns (verdict, first failing degree).
    """
    R = I.ring
    if I.is_zero():
        return True, None
    top = I.max_degree() + R.lcm + gap_bound(R)
    for e in range(top + 1):
        comp = I.component(e)
        if comp and not is_lexsegment(comp, R, priority):
            return False, e
    return True, None


# --- lexify --------------------------------------------------------------------------

@dataclass(frozen=True)
class Lexifiable:
    ideal: MonomialIdeal

    status = "lexifiable"


@dataclass(frozen=True)
class NotLexifiable:
    """At ``degree`` the candidate must contain the shadow of its lower
    components, which needs a lexsegment of size ``h_candidate`` while
    H_I(degree) = ``h_ideal``.  ``shadow_size`` is the number of monomials in
    that shadow."""

    degree: int
    h_ideal: int
    h_candidate: int
    shadow_size: int

    status = "not-lexifiable"


@dataclass(frozen=True)
class Inconclusive:
    max_degree: int

    status = "inconclusive"


LexifyOutcome = Lexifiable | NotLexifiable | Inconclusive


def _as_monomial(I: Ideal | MonomialIdeal) -> MonomialIdeal:
    return I if isinstance(I, MonomialIdeal) else initial_ideal(I)


def lexify(I: Ideal | MonomialIdeal, max_degree: int | None = None, priority=None) -> LexifyOutcome:
    """Build the lexicographic candidate with the Hilbert function of I,
    degree by degree, and decide whether it is an ideal."""
    M = _as_monomial(I)
    R = M.ring
    order = _order(priority)
    q, G = R.lcm, gap_bound(R)
    if max_degree is None:
        max_degree = 4 * (M.max_degree() + q + G)
    hs = hilbert_series(M)
    quot = hs.coefficients(max_degree)
    full = ring_hilbert_function(R, max_degree)
    h = [a - b for a, b in zip(full, quot)]

    cache: dict[int, list[Monomial]] = {}

    def mons(e):
        if e not in cache:
            cache[e] = ordered_monomials(R, e, order)
        return cache[e]

    def component(e):
        return mons(e)[: h[e]] if e >= 0 else []

    key = order.key(R)
    weights = sorted(set(R.weights))
    gens: list[Monomial] = []
    last = 0
    e = 0
    while e <= max_degree:
        ms = mons(e)
        index = {m: k for k, m in enumerate(ms)}
        shad = set()
        for v, wv in enumerate(R.weights):
            xv = R.var(v)
            for u in component(e - wv):
                shad.add(mono_mul(u, xv))
        need = 1 + max((index[m] for m in shad), default=-1)
        if need > h[e]:
            return NotLexifiable(e, h[e], need, len(shad))
        new = [m for m in ms[: h[e]] if m not in shad]
        if new:
            gens.extend(new)
            last = e
        if gens and e >= last + q + G:
            L = MonomialIdeal.of(R, gens)
            hl = hilbert_series(L)
            if hl.numerator == hs.numerator:
                return Lexifiable(L)
            # the candidate agrees with L until their Hilbert functions part
            hq = hl.coefficients(max_degree)
            nxt = next((k for k in range(e + 1, max_degree + 1) if hq[k] != quot[k]), None)
            if nxt is None:
                break
            e = nxt
            continue
        if not gens and e >= q + G and all(x == 0 for x in h):
            return Lexifiable(MonomialIdeal.of(R, []))
        e += 1
    return Inconclusive(max_degree)


def group_orders(R: RingDescriptor) -> list[tuple[int, ...]]:
    """Variable priorities obtained by permuting the groups (within-group order kept)."""
    blocks = [list(R.group_range(i)) for i in range(R.ngroups)]
    return [tuple(v for b in perm for v in b) for perm in itertools.permutations(blocks)]


def lexify_all_orders(I: Ideal | MonomialIdeal, max_degree: int | None = None) -> dict:
    """lexify under every group permutation; keys are priority tuples."""
    M = _as_monomial(I)
    return {p: lexify(M, max_degree, p) for p in group_orders(M.ring)}


# --- two variables ------------------------------------------------------------------------

def _two_coprime(R: RingDescriptor) -> tuple[int, int]:
    if R.nvars != 2 or R.ngroups != 2:
        raise ValueError("needs two variables of distinct weights")
    q1, q2 = R.weights
    if math.gcd(q1, q2) != 1:
        raise ValueError("weights must be coprime")
    return q1, q2


def delta(d: int, R: RingDescriptor) -> tuple[int, int, bool]:
    """(delta, beta, divisible): delta = d + beta*q_2 is the least such number
    divisible by q_1.  When q_1 | d the flag is set and (d, 0) returned."""
    q1, q2 = _two_coprime(R)
    if d % q1 == 0:
        return d, 0, True
    for beta in range(1, q1):
        if (d + beta * q2) % q1 == 0:
            return d + beta * q2, beta, False
    raise AssertionError("unreachable for coprime weights")


def two_var_lex_test(I: MonomialIdeal) -> bool:
    """Lexicographic test for ideals in two variables whose components in the
    generator degrees are lexsegments."""
    R = I.ring
    q1, _ = _two_coprime(R)
    if I.is_zero():
        return True
    ds = sorted(set(I.degrees()))
    for d in ds:
        if not is_lexsegment(I.component(d), R):
            raise ValueError(f"component in degree {d} is not a lexsegment")
    if ds[0] % q1 == 0:
        return True
    deltas = [delta(d, R)[0] for d in ds if d % q1]
    bound = min(deltas)
    return any(d % q1 == 0 and d <= bound for d in ds[1:])
