"""Random inputs and hypothesis strategies shared by the test modules."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction

from hypothesis import strategies as st

from wgraded.core import Polynomial, RingDescriptor, monomials_of_degree
from wgraded.groebner import Ideal, MonomialIdeal

SMALL_WEIGHTS = [(1, 1), (1, 2), (2, 3), (1, 1, 2), (1, 2, 4), (2, 3, 5), (2, 2, 3), (1, 3), (2, 4, 5), (1, 1, 1)]
DIVISIBLE_WEIGHTS = [(1, 2), (1, 1, 2), (1, 2, 4), (2, 4, 8), (1, 3), (1, 1, 3)]


def ring(ws) -> RingDescriptor:
    return RingDescriptor.from_weights(*ws)


def random_monomial_ideal(R: RingDescriptor, rng: random.Random, max_exp: int = 4, max_gens: int = 4) -> MonomialIdeal:
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        m = tuple(rng.randint(0, max_exp) for _ in range(R.nvars))
        if any(m):
            gens.append(m)
    if not gens:
        gens = [R.var(0)]
    return MonomialIdeal.of(R, gens)


def sparse_form(R: RingDescriptor, d: int, rng: random.Random, terms: int) -> Polynomial:
    mons = monomials_of_degree(R, d)
    out = Polynomial.zero(R)
    for m in rng.sample(mons, min(terms, len(mons))):
        out = out + Polynomial.monomial(R, m, rng.choice([-3, -2, -1, 1, 2, 3]))
    return out


def random_ideal(R: RingDescriptor, rng: random.Random, max_mult: int = 6, max_gens: int = 4) -> Ideal:
    """Sparse homogeneous generators in degrees that are multiples of q_1."""
    s = R.weights[0]
    gens = []
    while not gens:
        for _ in range(rng.randint(1, max_gens)):
            g = sparse_form(R, s * rng.randint(1, max_mult), rng, rng.randint(1, 3))
            if g:
                gens.append(g)
    return Ideal(R, tuple(gens))


@st.composite
def monomial_ideals(draw, weights=SMALL_WEIGHTS, max_exp: int = 4, max_gens: int = 4):
    R = ring(draw(st.sampled_from(weights)))
    n = R.nvars
    mons = draw(st.lists(st.tuples(*[st.integers(0, max_exp)] * n).filter(any), min_size=1, max_size=max_gens))
    return MonomialIdeal.of(R, mons)


@st.composite
def ideals(draw, weights=SMALL_WEIGHTS, max_mult: int = 5, max_gens: int = 3):
    R = ring(draw(st.sampled_from(weights)))
    seed = draw(st.integers(0, 10**6))
    return random_ideal(R, random.Random(seed), max_mult, max_gens)


def span_dimension(polys) -> int:
    """Rank of a list of polynomials by Gaussian elimination over Q."""
    rows = [dict(p.terms) for p in polys if p]
    rank = 0
    pivots: dict = {}
    for r in rows:
        r = dict(r)
        while r:
            m = max(r)
            if m in pivots:
                piv = pivots[m]
                c = r[m]
                for k, v in piv.items():
                    nv = r.get(k, 0) - c * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            else:
                c = r[m]
                pivots[m] = {k: v / c for k, v in r.items()}
                rank += 1
                break
    return rank


def ideal_dimension(I, d: int) -> int:
    """dim_K I_d by spanning {m * g} for all generators g."""
    R = I.ring
    prods = []
    for g in I.generators:
        e = g.degree()
        for m in monomials_of_degree(R, d - e):
            prods.append(g.mul_monomial(m))
    return span_dimension(prods)


def _rank(rows):
    rows = [list(r) for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = Fraction(rows[r][col], p)
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def koszul_betti(I):
    """Graded Betti numbers of a monomial ideal from the upper Koszul
    simplicial complexes of the lcm lattice (independent of any resolution)."""
    R = I.ring
    gens = list(I.generators)
    n = R.nvars
    lcms = set()
    for r in range(1, len(gens) + 1):
        for sub in itertools.combinations(gens, r):
            lcms.add(tuple(max(c) for c in zip(*sub)))
    out = Counter()
    for m in lcms:
        faces = [F for k in range(n + 1) for F in itertools.combinations(range(n), k)
                 if all(m[v] >= 1 for v in F)
                 and I.contains(tuple(m[v] - (v in F) for v in range(n)))]
        by_dim = {}
        for F in faces:
            by_dim.setdefault(len(F) - 1, []).append(F)
        top = max(by_dim)

        def boundary_rank(k):
            # rank of the boundary map from k-faces to (k-1)-faces
            src, dst = by_dim.get(k, []), by_dim.get(k - 1, [])
            if not src or not dst:
                return 0
            index = {F: i for i, F in enumerate(dst)}
            rows = []
            for F in src:
                row = [0] * len(dst)
                for j in range(len(F)):
                    row[index[F[:j] + F[j + 1:]]] = (-1) ** j
                rows.append(row)
            return _rank(rows)

        for k in range(-1, top + 1):
            # reduced homology: the empty face sits in dimension -1
            h = len(by_dim.get(k, [])) - boundary_rank(k) - boundary_rank(k + 1)
            if h:
                deg = sum(a * w for a, w in zip(m, R.weights))
                out[(k + 1, deg)] += h
    return out
