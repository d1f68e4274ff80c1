from __future__ import annotations

import itertools
import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from helpers import SMALL_WEIGHTS, ring
from wgraded.core import (
    Elementary,
    GradedAutomorphism,
    Polynomial,
    RingDescriptor,
    TermOrder,
    compose_sequence,
    decompose_automorphism,
    monomials_of_degree,
    random_automorphism,
    random_form,
    weighted_degree,
)
from wgraded.hilbert import ring_hilbert_function


def P(R, terms):
    return Polynomial(R, {m: c for m, c in terms.items()})


# --- ring descriptors ---------------------------------------------------------------

def test_ring_derived_data():
    R = RingDescriptor(((2, 2), (3, 1)))
    assert R.weights == (2, 2, 3)
    assert R.nvars == 3 and R.lcm == 6
    assert R.group_of == (0, 0, 1)
    assert str(R) == "x:2,y:2,z:3"


def test_ring_rejects_unsorted_or_nonpositive():
    with pytest.raises(ValueError):
        RingDescriptor(((3, 1), (2, 1)))
    with pytest.raises(ValueError):
        RingDescriptor(((0, 1),))
    with pytest.raises(ValueError):
        RingDescriptor(((2, 0),))


def test_divisibility_chain_flag():
    assert ring((1, 2, 4)).satisfies_condition_multipli()
    assert ring((2, 4, 8)).satisfies_condition_multipli()
    assert not ring((2, 4, 5)).satisfies_condition_multipli()
    assert not ring((2, 3)).satisfies_condition_multipli()


def test_normalize_divides_by_gcd():
    assert ring((2, 4, 6)).normalize().weights == (1, 2, 3)
    assert ring((2, 3)).normalize().weights == (2, 3)


def test_restrict_prefix():
    R = ring((1, 1, 2, 4))
    assert R.restrict(1).weights == (1, 1)
    assert R.restrict(2).weights == (1, 1, 2)


# --- degrees and enumeration --------------------------------------------------------

def test_weighted_degree_examples():
    assert weighted_degree((2, 1), ring((2, 3))) == 7
    assert weighted_degree((1, 4, 2, 1), ring((1, 6, 10, 15))) == 60
    assert weighted_degree((0, 0), ring((2, 3))) == 0


def test_weighted_degree_length_mismatch():
    with pytest.raises(ValueError):
        weighted_degree((1, 2, 3), ring((2, 3)))


def test_monomials_of_degree_examples():
    assert monomials_of_degree(ring((2, 3)), 5) == [(1, 1)]
    assert monomials_of_degree(ring((2, 7)), 28) == [(14, 0), (7, 2), (0, 4)]
    assert monomials_of_degree(ring((2, 3)), 1) == []


@pytest.mark.parametrize("ws", SMALL_WEIGHTS)
def test_monomial_count_matches_ring_series(ws):
    R = ring(ws)
    counts = ring_hilbert_function(R, 60)
    for d in range(61):
        mons = monomials_of_degree(R, d)
        assert len(mons) == counts[d]
        assert len(set(mons)) == len(mons)
        assert all(weighted_degree(m, R) == d for m in mons)


# --- term orders --------------------------------------------------------------------

def test_compare_examples():
    R = ring((2, 3))
    assert TermOrder("wdeglex").compare((4, 0), (1, 2), R) == 1
    assert TermOrder("wdegrevlex").compare((3, 0), (0, 2), R) == 1
    assert TermOrder("lex").compare((1, 1), (1, 1), R) == 0


def _revlex_by_definition(a, b, weights, perm):
    da = sum(x * w for x, w in zip(a, weights))
    db = sum(x * w for x, w in zip(b, weights))
    if da != db:
        return (da > db) - (da < db)
    for v in reversed(perm):
        if a[v] != b[v]:
            return 1 if a[v] < b[v] else -1
    return 0


def test_revlex_agrees_with_definition_on_degree_six():
    R = ring((1, 2, 3))
    mons = monomials_of_degree(R, 6)
    for perm in itertools.permutations(range(3)):
        o = TermOrder("wdegrevlex", perm)
        for a, b in itertools.product(mons, repeat=2):
            assert o.compare(a, b, R) == _revlex_by_definition(a, b, R.weights, perm)


def test_pure_lex_alias():
    assert TermOrder("pure-lex").kind == "lex"
    with pytest.raises(ValueError):
        TermOrder("grevlex-ish")


@st.composite
def order_triples(draw):
    ws = draw(st.sampled_from(SMALL_WEIGHTS))
    R = ring(ws)
    kind = draw(st.sampled_from(["wdeglex", "wdegrevlex", "lex"]))
    perm = draw(st.permutations(range(R.nvars)))
    mono = st.tuples(*[st.integers(0, 5)] * R.nvars)
    return R, TermOrder(kind, tuple(perm)), draw(mono), draw(mono), draw(mono)


@given(order_triples())
def test_term_order_axioms(data):
    R, o, a, b, c = data
    ab, ba = o.compare(a, b, R), o.compare(b, a, R)
    assert ab == -ba
    assert (ab == 0) == (a == b)
    if ab >= 0 and o.compare(b, c, R) >= 0:
        assert o.compare(a, c, R) >= 0
    ac = tuple(x + y for x, y in zip(a, c))
    bc = tuple(x + y for x, y in zip(b, c))
    assert o.compare(ac, bc, R) == ab
    if o.kind != "lex":
        da, db = weighted_degree(a, R), weighted_degree(b, R)
        if da != db:
            assert ab == (1 if da > db else -1)


# --- polynomials ---------------------------------------------------------------------

def test_polynomial_canonical_form():
    R = ring((2, 3))
    x, y = Polynomial.variable(R, 0), Polynomial.variable(R, 1)
    f = x ** 3 + y ** 2 - x ** 3
    assert f == y ** 2
    assert all(c != 0 for c in f.terms.values())
    assert (x - x).is_zero()
    assert (x ** 3 + y ** 2).is_homogeneous() and (x ** 3 + y ** 2).degree() == 6
    assert not (x + y).is_homogeneous()


def test_polynomial_rational_coefficients():
    R = ring((1, 1))
    x, y = Polynomial.variable(R, 0), Polynomial.variable(R, 1)
    f = x.scale(mpq(3, 2)) * y
    assert f.terms[(1, 1)] == mpq(3, 2)
    assert f.to_str() == "3/2*x*y"


@given(st.sampled_from(SMALL_WEIGHTS), st.integers(0, 10**6))
def test_ring_axioms_on_random_forms(ws, seed):
    R = ring(ws)
    rng = random.Random(seed)
    f, g, h = (random_form(R, rng.randint(0, 8), rng, 5) for _ in range(3))
    assert (f + g) - g == f
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


# --- automorphisms -------------------------------------------------------------------

def test_tau_example():
    R = ring((2, 2, 3))
    tau = Elementary("tau", 1, mpq(7), source=0).automorphism(R)
    x, y = Polynomial.variable(R, 0), Polynomial.variable(R, 1)
    assert tau(x * y) == x * y + (x ** 2).scale(7)


def test_eta_example():
    R = ring((1, 2))
    eta = Elementary("eta", 1, mpq(1), term=(2, 0)).automorphism(R)
    x, y = Polynomial.variable(R, 0), Polynomial.variable(R, 1)
    assert eta(y) == y + x ** 2


def test_identity_acts_trivially():
    R = ring((1, 2, 4))
    f = random_form(R, 8, random.Random(1), 10)
    assert GradedAutomorphism.identity(R)(f) == f


def test_random_automorphism_two_three_is_diagonal():
    R = ring((2, 3))
    for seed in range(5):
        phi = random_automorphism(R, seed=seed)
        imgs = phi.images()
        assert list(imgs[0].terms) == [(1, 0)]
        assert list(imgs[1].terms) == [(0, 1)]


def test_random_automorphism_deterministic():
    R = ring((1, 1, 2))
    assert random_automorphism(R, seed=4) == random_automorphism(R, seed=4)
    assert random_automorphism(R, seed=4) != random_automorphism(R, seed=5)


def test_upper_triangular_mode():
    R = ring((1, 1, 1, 2, 2))
    for seed in range(5):
        assert random_automorphism(R, "upper_triangular", seed=seed).is_upper_triangular()


def test_singular_matrix_rejected():
    R = ring((1, 1))
    with pytest.raises(ValueError):
        GradedAutomorphism(R, [[[1, 2], [2, 4]]])


def test_psi_must_use_lighter_variables():
    R = ring((1, 2))
    bad = [Polynomial.zero(R), Polynomial.variable(R, 1)]
    with pytest.raises(ValueError):
        GradedAutomorphism(R, [[[1]], [[1]]], bad)


def test_decompose_identity_and_diagonal():
    R = ring((1, 1, 2))
    assert decompose_automorphism(GradedAutomorphism.identity(R)) == []
    D = GradedAutomorphism(R, [[[2, 0], [0, 3]], [[5]]])
    seq = decompose_automorphism(D)
    assert [e.kind for e in seq] == ["delta"] * 3
    assert compose_sequence(seq, R) == D


def test_decompose_one_two_example():
    R = ring((1, 2))
    x, y = Polynomial.variable(R, 0), Polynomial.variable(R, 1)
    phi = GradedAutomorphism.from_images(R, [x.scale(2), y.scale(3) + (x ** 2).scale(5)])
    seq = decompose_automorphism(phi)
    assert compose_sequence(seq, R) == phi
    for v in range(2):
        assert compose_sequence(seq, R).image(v) == phi.image(v)


def test_decompose_rejects_non_triangular():
    R = ring((1, 1))
    with pytest.raises(ValueError):
        decompose_automorphism(random_automorphism(R, seed=0))


@given(st.sampled_from(SMALL_WEIGHTS + [(1, 1, 2, 2), (1, 1, 1, 3)]), st.integers(0, 10**6))
def test_decompose_recomposes(ws, seed):
    R = ring(ws)
    phi = random_automorphism(R, "upper_triangular", seed=seed, bound=50)
    seq = decompose_automorphism(phi)
    assert all(e.kind in ("delta", "tau", "eta") for e in seq)
    assert compose_sequence(seq, R) == phi


@given(st.sampled_from(SMALL_WEIGHTS), st.integers(0, 10**6))
def test_automorphisms_preserve_degree_and_invert(ws, seed):
    R = ring(ws)
    rng = random.Random(seed)
    phi = random_automorphism(R, rng=rng, bound=30)
    d = rng.randint(0, 9)
    f = random_form(R, d, rng, 9)
    g = phi(f)
    if f:
        assert g.degrees() == {d}
    assert phi.inverse()(g) == f
    assert phi.compose(phi.inverse()) == GradedAutomorphism.identity(R)
