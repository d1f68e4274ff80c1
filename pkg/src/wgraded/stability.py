"""Weighted strong stability, randomized T-fixedness, weight synthesis and the
depth formula for stable ideals."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from .core import (
    Elementary,
    GradedAutomorphism,
    Monomial,
    RingDescriptor,
    compose_sequence,
    format_monomial,
    mono_div,
    mono_mul,
    monomials_of_degree,
    random_automorphism,
)
from .groebner import Ideal, MonomialIdeal, buchberger, normal_form


@dataclass(frozen=True)
class Violation:
    """u is in I, but exchanging ``variable`` for ``replacement`` leaves I."""

    generator: Monomial
    variable: int
    replacement: Monomial
    missing: Monomial

    def describe(self, R: RingDescriptor) -> str:
        f = lambda m: format_monomial(m, R.names)
        return (f"{f(self.generator)}: {R.names[self.variable]} -> {f(self.replacement)} "
                f"gives {f(self.missing)} not in I")


@dataclass(frozen=True)
class StabilityResult:
    stable: bool
    certificate: Violation | None = None

    def __bool__(self):
        return self.stable


def lighter_monomials(R: RingDescriptor, i: int) -> list[Monomial]:
    """Monomials of degree q_i in the groups before group i (0-based)."""
    if i == 0:
        return []
    sub = R.restrict(i)
    pad = (0,) * (R.nvars - sub.nvars)
    return [m + pad for m in monomials_of_degree(sub, R.groups[i][0])]


def exchanges(R: RingDescriptor, u: Monomial):
    """Yield (variable, replacement, result) for every exchange applicable to u."""
    gof = R.group_of
    lighter = {}
    for v, a in enumerate(u):
        if not a:
            continue
        i = gof[v]
        base = mono_div(u, R.var(v))
        for h in R.group_range(i):
            if h >= v:
                break
            yield v, R.var(h), mono_mul(base, R.var(h))
        if i not in lighter:
            lighter[i] = lighter_monomials(R, i)
        for m in lighter[i]:
            yield v, m, mono_mul(base, m)


def is_strongly_stable(I: MonomialIdeal) -> StabilityResult:
    """Check every exchange on every minimal generator (enough, since the
    exchanges commute with multiplication by monomials)."""
    for u in I.generators:
        for v, rep, res in exchanges(I.ring, u):
            if not I.contains(res):
                return StabilityResult(False, Violation(u, v, rep, res))
    return StabilityResult(True)


def is_strongly_stable_bruteforce(I: MonomialIdeal, max_degree: int) -> bool:
    """Same test over all monomials of I up to ``max_degree``."""
    for d in range(max_degree + 1):
        for u in I.component(d):
            for _, _, res in exchanges(I.ring, u):
                if not I.contains(res):
                    return False
    return True


# --- T-fixedness ------------------------------------------------------------------

def elementary_shapes(R: RingDescriptor, rng: random.Random, bound: int = 10**6) -> list[Elementary]:
    """One instance of every elementary generator shape, with random coefficients."""

    def coeff():
        c = 0
        while c in (0, 1, -1):
            c = rng.randint(-bound, bound)
        return mpq(c)

    out = []
    for v in range(R.nvars):
        out.append(Elementary("delta", v, coeff()))
        i = R.group_of[v]
        for h in R.group_range(i):
            if h < v:
                out.append(Elementary("tau", v, coeff(), source=h))
        for m in lighter_monomials(R, i):
            out.append(Elementary("eta", v, coeff(), term=m))
    return out


def is_fixed_by(I: Ideal, phi: GradedAutomorphism) -> bool:
    """phi(I) == I; containment suffices because phi preserves Hilbert functions."""
    G = buchberger(I).elements
    return all(not normal_form(phi(g), G, buchberger(I).order) for g in I.generators)


def is_T_fixed(I: Ideal | MonomialIdeal, trials: int = 32, seed=0, bound: int = 10**6) -> bool:
    """Randomized test of phi(I) == I for phi in T.

    Every elementary generator shape (diagonal, elementary triangular,
    elementary nonlinear) is tried once with a random coefficient, followed
    by ``trials`` random upper triangular automorphisms.  A failure is a
    proof; success is probabilistic.
    """
    if isinstance(I, MonomialIdeal):
        I = I.to_ideal()
    R = I.ring
    rng = random.Random(seed)
    for e in elementary_shapes(R, rng, bound):
        if not is_fixed_by(I, e.automorphism(R)):
            return False
    shapes = elementary_shapes(R, rng, bound)
    for _ in range(trials):
        if rng.random() < 0.5 or not shapes:
            phi = random_automorphism(R, "upper_triangular", rng=rng, bound=bound)
        else:
            phi = compose_sequence(rng.sample(shapes, min(len(shapes), 3)), R)
        if not is_fixed_by(I, phi):
            return False
    return True


def is_diagonal_fixed(I: Ideal, seed=0, bound: int = 10**6) -> bool:
    """Fixedness under one random diagonal automorphism (holds iff I is monomial, generically)."""
    R = I.ring
    rng = random.Random(seed)
    phi = compose_sequence([Elementary("delta", v, mpq(rng.randint(2, bound))) for v in range(R.nvars)], R)
    return is_fixed_by(I, phi)


# --- weights and depth ---------------------------------------------------------------

def weights_making_stable(A: Iterable[Monomial], n: int | None = None) -> RingDescriptor:
    """Weights (n+1, ..., 2n): then 2 q_1 > q_n, so no exchange is ever possible."""
    A = list(A)
    if n is None:
        if not A:
            raise ValueError("cannot infer the number of variables from an empty set")
        n = len(A[0])
    return RingDescriptor.from_weights(*range(n + 1, 2 * n + 1))


def stable_depth(I: MonomialIdeal) -> int:
    """depth R/I for strongly stable I in a ring where q_i | q_{i+1}: the
    number of variables after the smallest one dividing a minimal generator."""
    R = I.ring
    if not R.satisfies_condition_multipli():
        raise ValueError("ring does not satisfy q_i | q_{i+1}")
    if I.is_unit():
        raise ValueError("R/I = 0 has no depth")
    if not is_strongly_stable(I):
        raise ValueError("ideal is not strongly stable")
    if I.is_zero():
        return R.nvars
    last = max(v for g in I.generators for v, a in enumerate(g) if a)
    return R.nvars - 1 - last
