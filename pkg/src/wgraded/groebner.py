"""Division, Buchberger's algorithm, initial and generic initial ideals,
colon/saturation, and weighted prime avoidance.

The engine works on sparse vectors ``{(component, monomial): coefficient}``
so ideals (one component) and submodules of free modules share the same
code.  Orders are given as key functions on terms returning flat int tuples.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .core import (
    Monomial,
    Polynomial,
    RingDescriptor,
    TermOrder,
    divides,
    mono_div,
    mono_gcd,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
    random_automorphism,
    weighted_degree,
)

Term = tuple[int, Monomial]
Vector = dict  # Term -> mpq
TermKey = Callable[[Term], tuple]


class GenericityError(RuntimeError):
    """Independent random choices disagreed; retry with another seed."""


# --- vector engine ---------------------------------------------------------------

def _neg(k: tuple) -> tuple:
    return tuple(-x for x in k)


def leading(vec: Vector, key: TermKey) -> Term:
    return max(vec, key=key)


class _Basis:
    """Monic vectors indexed by component for divisor lookup."""

    def __init__(self):
        self.items: list[tuple[Term, Vector]] = []
        self.by_comp: dict[int, list[int]] = {}

    def add(self, lt: Term, vec: Vector) -> int:
        idx = len(self.items)
        self.items.append((lt, vec))
        self.by_comp.setdefault(lt[0], []).append(idx)
        return idx

    def divisor(self, t: Term, active=None) -> int | None:
        for idx in self.by_comp.get(t[0], ()):
            if active is not None and idx not in active:
                continue
            if divides(self.items[idx][0][1], t[1]):
                return idx
        return None


def reduce_vector(f: Vector, basis: _Basis, key: TermKey, full: bool = True,
                  track: bool = False, active=None) -> tuple[Vector, dict]:
    """Divide ``f`` by the monic vectors in ``basis``.

    Returns (remainder, quotients) where quotients maps (basis index,
    monomial) to a coefficient.  With ``full`` every term is reduced,
    otherwise only the leading terms.
    """
    f = dict(f)
    heap = [(_neg(key(t)), t) for t in f]
    heapq.heapify(heap)
    rem: Vector = {}
    quot: dict = {}
    while heap:
        _, t = heapq.heappop(heap)
        c = f.get(t)
        if c is None:
            continue
        idx = basis.divisor(t, active)
        if idx is None:
            rem[t] = c
            del f[t]
            if not full:
                rem.update(f)
                return rem, quot
            continue
        del f[t]
        lt, g = basis.items[idx]
        q = mono_div(t[1], lt[1])
        if track:
            k = (idx, q)
            quot[k] = quot.get(k, 0) + c
        for (gc, gm), a in g.items():
            if gc == lt[0] and gm == lt[1]:
                continue
            s = (gc, mono_mul(q, gm))
            old = f.get(s)
            new = (old or 0) - c * a
            if new:
                if old is None:
                    heapq.heappush(heap, (_neg(key(s)), s))
                f[s] = new
            elif old is not None:
                del f[s]
    return rem, quot


def _monic(vec: Vector, key: TermKey) -> tuple[Term, Vector]:
    lt = leading(vec, key)
    c = vec[lt]
    if c == 1:
        return lt, vec
    inv = 1 / c
    return lt, {t: a * inv for t, a in vec.items()}


def _term_degree(t: Term, weights, shifts) -> int:
    return shifts[t[0]] + sum(a * b for a, b in zip(t[1], weights))


def groebner_vectors(gens: Iterable[Vector], key: TermKey, weights: Sequence[int],
                     shifts: Sequence[int] = (0,), max_degree: int | None = None,
                     reduced: bool = True) -> list[tuple[Term, Vector]]:
    """Buchberger's algorithm for homogeneous vectors, degree by degree.

    Input generators and S-pairs are processed in increasing degree (normal
    strategy).  Pairs are pruned by the chain criterion, and by the product
    criterion when there is a single component.
    """
    rank1 = len(shifts) == 1
    basis = _Basis()
    work: list = []  # (degree, tiebreak, kind, payload)
    counter = 0
    for g in gens:
        if g:
            t = next(iter(g))
            heapq.heappush(work, (_term_degree(t, weights, shifts), counter, 0, g))
            counter += 1
    pending: set[tuple[int, int]] = set()
    pair_lcm: dict[tuple[int, int], Monomial] = {}

    def add_element(vec):
        nonlocal counter
        lt, vec = _monic(vec, key)
        idx = basis.add(lt, vec)
        for j in basis.by_comp[lt[0]][:-1]:
            ltj = basis.items[j][0]
            lcm = mono_lcm(ltj[1], lt[1])
            if rank1 and mono_gcd(ltj[1], lt[1]) == (0,) * len(lcm):
                continue  # product criterion
            pair = (j, idx)
            pending.add(pair)
            pair_lcm[pair] = lcm
            heapq.heappush(work, (_term_degree((lt[0], lcm), weights, shifts), counter, 1, pair))
            counter += 1

    while work:
        deg, _, kind, payload = heapq.heappop(work)
        if max_degree is not None and deg > max_degree:
            break
        if kind == 0:
            rem, _ = reduce_vector(payload, basis, key)
            if rem:
                add_element(rem)
            continue
        i, j = payload
        pending.discard(payload)
        lcm = pair_lcm.pop(payload)
        comp = basis.items[i][0][0]
        chain = False
        for k in basis.by_comp[comp]:
            if k in (i, j) or not divides(basis.items[k][0][1], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        (lti, gi), (ltj, gj) = basis.items[i], basis.items[j]
        qi, qj = mono_div(lcm, lti[1]), mono_div(lcm, ltj[1])
        s: Vector = {}
        for (c, m), a in gi.items():
            s[(c, mono_mul(qi, m))] = a
        for (c, m), a in gj.items():
            t = (c, mono_mul(qj, m))
            v = s.get(t, 0) - a
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        if not s:
            continue
        rem, _ = reduce_vector(s, basis, key)
        if rem:
            add_element(rem)

    items = basis.items
    if not reduced:
        return list(items)
    # minimalize, then tail-reduce
    keep = []
    for idx, (lt, _) in enumerate(items):
        redundant = False
        for jdx, (lt2, _) in enumerate(items):
            if jdx == idx or lt2[0] != lt[0] or not divides(lt2[1], lt[1]):
                continue
            if lt2[1] != lt[1] or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append(idx)
    final = _Basis()
    for idx in keep:
        final.add(*items[idx])
    out = []
    for pos in range(len(final.items)):
        lt, vec = final.items[pos]
        tail = {t: a for t, a in vec.items() if t != lt}
        active = set(range(len(final.items))) - {pos}
        rem, _ = reduce_vector(tail, final, key, active=active)
        rem[lt] = mpq(1)
        out.append((lt, rem))
    out.sort(key=lambda it: key(it[0]), reverse=True)
    return out


# --- ideals -----------------------------------------------------------------------

def _poly_to_vec(f: Polynomial, comp: int = 0) -> Vector:
    return {(comp, m): c for m, c in f.terms.items()}


def _vec_to_poly(R: RingDescriptor, vec: Vector, comp: int = 0) -> Polynomial:
    return Polynomial._raw(R, {m: c for (k, m), c in vec.items() if k == comp})


def _ring_key(R: RingDescriptor, order: TermOrder) -> TermKey:
    k = order.key(R)
    return lambda t: k(t[1])


@dataclass(frozen=True)
class Ideal:
    """Homogeneous ideal given by generators (zero generators are dropped)."""

    ring: RingDescriptor
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        gens = tuple(g for g in self.generators if g)
        for g in gens:
            if g.ring != self.ring:
                raise ValueError("generator lives in another ring")
            if not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous (degrees {sorted(g.degrees())})")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, ring: RingDescriptor, gens: Iterable[Polynomial]) -> "Ideal":
        return cls(ring, tuple(gens))

    @classmethod
    def maximal(cls, ring: RingDescriptor) -> "Ideal":
        return cls(ring, tuple(Polynomial.variable(ring, v) for v in range(ring.nvars)))

    def groebner(self, order: TermOrder = TermOrder()) -> "GroebnerBasis":
        return buchberger(self, order)

    def contains(self, f: Polynomial, order: TermOrder = TermOrder()) -> bool:
        return not normal_form(f, self.groebner(order).elements, order)

    def contains_ideal(self, other: "Ideal", order: TermOrder = TermOrder()) -> bool:
        G = self.groebner(order).elements
        return all(not normal_form(g, G, order) for g in other.generators)

    def equals(self, other: "Ideal", order: TermOrder = TermOrder()) -> bool:
        return self.groebner(order).elements == other.groebner(order).elements

    def is_monomial(self) -> bool:
        return all(len(g.terms) == 1 for g in self.groebner().elements)

    def to_monomial_ideal(self) -> "MonomialIdeal":
        """Only valid when the ideal is monomial."""
        if not self.is_monomial():
            raise ValueError("ideal is not monomial")
        return MonomialIdeal(self.ring, tuple(next(iter(g.terms)) for g in self.generators))

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.generators + other.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal stored by its minimal generators (sorted, largest first)."""

    ring: RingDescriptor
    generators: tuple[Monomial, ...]

    def __post_init__(self):
        n = self.ring.nvars
        gens = []
        for g in self.generators:
            g = tuple(int(a) for a in g)
            if len(g) != n or any(a < 0 for a in g):
                raise ValueError(f"bad exponent vector {g}")
            gens.append(g)
        object.__setattr__(self, "generators", minimalize(gens))

    @classmethod
    def of(cls, ring: RingDescriptor, gens: Iterable[Monomial]) -> "MonomialIdeal":
        return cls(ring, tuple(gens))

    def contains(self, m: Monomial) -> bool:
        return any(divides(g, m) for g in self.generators)

    __contains__ = contains

    def is_unit(self) -> bool:
        return self.ring.one() in self.generators

    def is_zero(self) -> bool:
        return not self.generators

    def degrees(self) -> list[int]:
        return [weighted_degree(g, self.ring) for g in self.generators]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def component(self, d: int) -> list[Monomial]:
        """Monomials of I in degree d, largest (flat lex) first."""
        return [m for m in monomials_of_degree(self.ring, d) if self.contains(m)]

    def colon(self, m: Monomial) -> "MonomialIdeal":
        return MonomialIdeal(self.ring, tuple(mono_div(g, mono_gcd(g, m)) for g in self.generators))

    def saturate_by(self, m: Monomial) -> "MonomialIdeal":
        J = self
        while True:
            K = J.colon(m)
            if K == J:
                return J
            J = K

    def __add__(self, other) -> "MonomialIdeal":
        extra = other.generators if isinstance(other, MonomialIdeal) else tuple(other)
        return MonomialIdeal(self.ring, self.generators + tuple(extra))

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(self.ring, tuple(mono_mul(a, b) for a in self.generators for b in other.generators))

    def to_ideal(self) -> Ideal:
        return Ideal(self.ring, tuple(Polynomial.monomial(self.ring, g) for g in self.generators))

    def sorted_generators(self, order: TermOrder) -> list[Monomial]:
        return sorted(self.generators, key=order.key(self.ring), reverse=True)

    def __str__(self):
        from .core import format_monomial
        return "(" + ", ".join(format_monomial(g, self.ring.names) for g in self.generators) + ")"


def minimalize(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    """Minimal generators of the monomial ideal spanned by ``gens``."""
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out: list[Monomial] = []
    for g in gens:
        if not any(divides(h, g) for h in out):
            out.append(g)
    return tuple(sorted(out, reverse=True))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis: monic elements sorted by leading term, descending."""

    ring: RingDescriptor
    order: TermOrder
    elements: tuple[Polynomial, ...]

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def s_pairs_reduce_to_zero(self) -> bool:
        """Brute-force check of Buchberger's criterion on every pair."""
        key = self.order.key(self.ring)
        els = [g for g in self.elements]
        for a in range(len(els)):
            for b in range(a + 1, len(els)):
                s = s_polynomial(els[a], els[b], self.order)
                if normal_form(s, els, self.order):
                    return False
        return True

    def is_reduced(self) -> bool:
        lms = self.leading_monomials()
        for g, lm in zip(self.elements, lms):
            if g.terms[lm] != 1:
                return False
            for m in g.terms:
                if any(divides(o, m) for o in lms if o != lm):
                    return False
        return True


def s_polynomial(f: Polynomial, g: Polynomial, order: TermOrder) -> Polynomial:
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = mono_lcm(mf, mg)
    return f.mul_monomial(mono_div(lcm, mf), 1 / cf) - g.mul_monomial(mono_div(lcm, mg), 1 / cg)


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: TermOrder) -> Polynomial:
    """Fully reduced remainder of ``f`` on division by ``G``."""
    R = f.ring
    key = _ring_key(R, order)
    basis = _Basis()
    for g in G:
        if g:
            basis.add(*_monic(_poly_to_vec(g), key))
    rem, _ = reduce_vector(_poly_to_vec(f), basis, key)
    return _vec_to_poly(R, rem)


@lru_cache(maxsize=512)
def buchberger(I: Ideal, order: TermOrder = TermOrder(), max_degree: int | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of a homogeneous ideal (truncated at ``max_degree`` if given)."""
    R = I.ring
    key = _ring_key(R, order)
    out = groebner_vectors((_poly_to_vec(g) for g in I.generators), key, R.weights, (0,), max_degree)
    return GroebnerBasis(R, order, tuple(_vec_to_poly(R, v) for _, v in out))


def initial_ideal(I: Ideal | MonomialIdeal, order: TermOrder = TermOrder()) -> MonomialIdeal:
    if isinstance(I, MonomialIdeal):
        return I
    return MonomialIdeal(I.ring, tuple(buchberger(I, order).leading_monomials()))


def gin(I: Ideal | MonomialIdeal, order: TermOrder = TermOrder(), seed=0, trials: int = 2,
        bound: int = 10**6) -> MonomialIdeal:
    """Generic initial ideal, Monte Carlo: ``trials`` independent random
    automorphisms must give the same initial ideal."""
    if trials < 2:
        raise ValueError("need at least two trials to cross-check genericity")
    if isinstance(I, MonomialIdeal):
        I = I.to_ideal()
    rng = random.Random(seed)
    results = []
    for _ in range(trials):
        phi = random_automorphism(I.ring, "general", rng=rng, bound=bound)
        J = Ideal(I.ring, tuple(phi(g) for g in I.generators))
        results.append(initial_ideal(J, order))
    if any(r != results[0] for r in results[1:]):
        raise GenericityError("genericity failure, retry with new seed")
    return results[0]


# --- colon and saturation -------------------------------------------------------------

def _pot_key(R: RingDescriptor, order: TermOrder) -> TermKey:
    k = order.key(R)
    return lambda t: (-t[0],) + k(t[1])


def _as_ideal(I) -> Ideal:
    return I.to_ideal() if isinstance(I, MonomialIdeal) else I


def intersect(I: Ideal, J: Ideal, order: TermOrder = TermOrder()) -> Ideal:
    """I ∩ J from the second components of a position-over-term Gröbner basis
    of the module generated by (j, j) and (i, 0)."""
    I, J = _as_ideal(I), _as_ideal(J)
    R = I.ring
    if not I.generators or not J.generators:
        return Ideal(R, ())
    gens = [{**_poly_to_vec(j, 0), **_poly_to_vec(j, 1)} for j in J.generators]
    gens += [_poly_to_vec(i, 0) for i in I.generators]
    out = groebner_vectors(gens, _pot_key(R, order), R.weights, (0, 0))
    return Ideal(R, tuple(_vec_to_poly(R, v, 1) for lt, v in out if lt[0] == 1))


def colon_element(I: Ideal, f: Polynomial, order: TermOrder = TermOrder()) -> Ideal:
    """I : f."""
    I = _as_ideal(I)
    R = I.ring
    if not f:
        raise ValueError("colon by the zero polynomial")
    if not f.is_homogeneous():
        raise ValueError("f must be homogeneous")
    if not I.generators:
        return I
    d = f.degree()
    gens = [{**_poly_to_vec(f, 0), (1, R.one()): mpq(1)}]
    gens += [_poly_to_vec(g, 0) for g in I.generators]
    out = groebner_vectors(gens, _pot_key(R, order), R.weights, (0, d))
    return Ideal(R, tuple(_vec_to_poly(R, v, 1) for lt, v in out if lt[0] == 1))


def colon(I: Ideal, J: Ideal | Polynomial, order: TermOrder = TermOrder()) -> Ideal:
    """I : J for an ideal or a single polynomial."""
    I = _as_ideal(I)
    if isinstance(J, Polynomial):
        return colon_element(I, J, order)
    J = _as_ideal(J)
    if not J.generators:
        return Ideal(I.ring, (Polynomial.constant(I.ring, 1),))
    result = None
    for g in J.generators:
        K = colon_element(I, g, order)
        result = K if result is None else intersect(result, K, order)
    return result


def saturation(I: Ideal, J: Ideal | Polynomial, order: TermOrder = TermOrder(), max_steps: int = 200) -> Ideal:
    """I : J^∞, iterating colons until the ideal stops growing."""
    cur = _as_ideal(I)
    for _ in range(max_steps):
        nxt = colon(cur, J, order)
        if nxt.equals(cur, order):
            return Ideal(cur.ring, buchberger(cur, order).elements)
        cur = nxt
    raise RuntimeError("saturation did not stabilize")


def colon_and_saturation(I: Ideal, J: Ideal | Polynomial, order: TermOrder = TermOrder()) -> dict[str, Ideal]:
    """All four variants: 'colon' (I:J) and 'saturation' (I:J^∞)."""
    return {"colon": colon(I, J, order), "saturation": saturation(I, J, order)}


# --- weighted prime avoidance -------------------------------------------------------

def _outside(prime: MonomialIdeal, m: Monomial) -> bool:
    return not prime.contains(m)


def _check_primes(R: RingDescriptor, primes: Sequence[MonomialIdeal]):
    for P in primes:
        if all(P.contains(R.var(v)) for v in range(R.nvars)):
            raise ValueError(f"prime {P} contains every variable: no avoiding form exists")


def smallest_avoiding_degree(R: RingDescriptor, primes: Sequence[MonomialIdeal], limit: int | None = None) -> int | None:
    """Least d >= 1 with m_d not inside any single prime.

    Over an infinite field a vector space is not a finite union of proper
    subspaces, so this is the least degree admitting an avoiding form.
    """
    _check_primes(R, primes)
    limit = limit if limit is not None else R.lcm
    for d in range(1, limit + 1):
        mons = monomials_of_degree(R, d)
        if mons and all(any(_outside(P, m) for m in mons) for P in primes):
            return d
    return None


def find_avoiding_form(R: RingDescriptor, primes: Sequence[MonomialIdeal], seed=0,
                       bound: int = 10**6, max_tries: int = 100) -> Polynomial:
    """A form of degree q = lcm(weights) lying in none of the given monomial primes."""
    _check_primes(R, primes)
    q = R.lcm
    if not primes:
        v = 0
        return Polynomial.monomial(R, tuple((q // R.weights[0]) if k == v else 0 for k in range(R.nvars)))
    rng = random.Random(seed)
    mons = monomials_of_degree(R, q)
    for _ in range(max_tries):
        f = Polynomial(R, {m: rng.randint(-bound, bound) for m in mons})
        if f and all(any(_outside(P, m) for m in f.terms) for P in primes):
            return f
    raise RuntimeError("no avoiding form found; the primes may not be proper")
