"""Hilbert functions and series, quasi-polynomials, the divisibility gap bound,
Frobenius numbers and generation-stabilization probes.

Univariate integer polynomials are coefficient lists, lowest degree first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from statistics import median_low
from typing import Sequence

from .core import Monomial, RingDescriptor, TermOrder, divides, mono_div, monomials_of_degree, weighted_degree
from .groebner import Ideal, MonomialIdeal, initial_ideal

# --- univariate helpers --------------------------------------------------------------


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_shift(a: Sequence[int], k: int) -> list[int]:
    return [0] * k + list(a) if a else []


def one_minus_t_power(k: int) -> list[int]:
    return [1] + [0] * (k - 1) + [-1] if k else []


def denominator(R: RingDescriptor) -> list[int]:
    """prod_i (1 - t^{q_i})^{l_i}."""
    out = [1]
    for q, l in R.groups:
        for _ in range(l):
            out = poly_mul(out, one_minus_t_power(q))
    return out


def ring_hilbert_function(R: RingDescriptor, upto: int) -> list[int]:
    """|R_d| for d = 0..upto, by counting partitions into the weights."""
    counts = [1] + [0] * upto
    for w in R.weights:
        for d in range(w, upto + 1):
            counts[d] += counts[d - w]
    return counts


# --- Hilbert series of monomial ideals ------------------------------------------------

@dataclass(frozen=True)
class HilbertSeries:
    """P(R/I, t) = numerator(t) / prod (1 - t^{q_i})^{l_i}."""

    ring: RingDescriptor
    numerator: tuple[int, ...]

    def coefficients(self, upto: int) -> list[int]:
        """H_{R/I}(d) for d = 0..upto."""
        base = ring_hilbert_function(self.ring, upto)
        out = [0] * (upto + 1)
        for k, c in enumerate(self.numerator):
            if c and k <= upto:
                for d in range(k, upto + 1):
                    out[d] += c * base[d - k]
        return out

    def __call__(self, d: int) -> int:
        return self.coefficients(d)[d] if d >= 0 else 0

    def pole_order(self) -> int:
        """Order of the pole at t = 1 after cancelling common factors."""
        num = list(self.numerator)
        if not num:
            return 0
        k = 0
        while sum(num) == 0:
            num = _divide_one_minus_t(num)
            k += 1
        return self.ring.nvars - k

    def __str__(self):
        num = ""
        for k, c in enumerate(self.numerator):
            if not c:
                continue
            mag = abs(c)
            term = str(mag) if k == 0 else ("" if mag == 1 else f"{mag}*") + ("t" if k == 1 else f"t^{k}")
            num += (" - " if c < 0 else " + ") + term if num else ("-" if c < 0 else "") + term
        den = "*".join(("(1-t)" if q == 1 else f"(1-t^{q})") + (f"^{l}" if l > 1 else "") for q, l in self.ring.groups)
        return f"({num or '0'}) / ({den})"


def _divide_one_minus_t(p: list[int]) -> list[int]:
    # p(t) = (1 - t) * s(t); s_k = sum_{i<=k} p_i
    out, acc = [], 0
    for c in p[:-1]:
        acc += c
        out.append(acc)
    if acc + p[-1] != 0:
        raise ValueError("not divisible by 1 - t")
    return _trim(out)


def _pairwise_coprime(gens) -> bool:
    seen = set()
    for g in gens:
        support = {v for v, a in enumerate(g) if a}
        if support & seen:
            return False
        seen |= support
    return True


def _minimal(gens) -> frozenset:
    gens = sorted(set(gens), key=sum)
    out: list = []
    for g in gens:
        if not any(divides(h, g) for h in out):
            out.append(g)
    return frozenset(out)


@lru_cache(maxsize=200_000)
def _numerator(gens: frozenset, weights: tuple[int, ...]) -> tuple[int, ...]:
    if not gens:
        return (1,)
    if any(not any(g) for g in gens):
        return ()
    deg = lambda m: sum(a * b for a, b in zip(m, weights))
    if _pairwise_coprime(gens):
        out = [1]
        for g in gens:
            out = poly_mul(out, one_minus_t_power(deg(g)))
        return tuple(out)
    n = len(weights)
    counts = [sum(1 for g in gens if g[v]) for v in range(n)]
    v = max(range(n), key=lambda u: (counts[u], -u))
    exps = [g[v] for g in gens if g[v] and any(a for u, a in enumerate(g) if u != v)]
    e = median_low(exps)
    pivot = tuple(e if u == v else 0 for u in range(n))
    plus = _minimal(list(gens) + [pivot])
    colon = _minimal(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens)
    left = _numerator(plus, weights)
    right = poly_shift(_numerator(colon, weights), deg(pivot))
    return tuple(poly_add(left, right))


def hilbert_series(I: MonomialIdeal | Ideal, order: TermOrder = TermOrder()) -> HilbertSeries:
    """Hilbert series of R/I via pivot splitting
    HS(R/I) = HS(R/(I + m)) + t^{deg m} HS(R/(I : m)) with m a variable power."""
    M = initial_ideal(I, order)
    return HilbertSeries(M.ring, _numerator(frozenset(M.generators), M.ring.weights))


def hilbert_function(I: MonomialIdeal | Ideal, d: int, quotient: bool = False,
                     order: TermOrder = TermOrder()) -> int:
    """dim_K I_d, or dim_K (R/I)_d with ``quotient=True``."""
    return hilbert_table(I, d, d, quotient, order)[d]


def hilbert_table(I: MonomialIdeal | Ideal, lo: int, hi: int, quotient: bool = False,
                  order: TermOrder = TermOrder()) -> dict[int, int]:
    if lo < 0 or hi < lo:
        raise ValueError("need 0 <= lo <= hi")
    hs = hilbert_series(I, order)
    q = hs.coefficients(hi)
    if quotient:
        return {d: q[d] for d in range(lo, hi + 1)}
    base = ring_hilbert_function(I.ring, hi)
    return {d: base[d] - q[d] for d in range(lo, hi + 1)}


def count_by_enumeration(I: MonomialIdeal, d: int) -> int:
    """dim I_d by listing R_d; the brute-force oracle for the series."""
    return sum(1 for m in monomials_of_degree(I.ring, d) if I.contains(m))


# --- quasi-polynomials ----------------------------------------------------------------

@dataclass(frozen=True)
class QuasiPolynomial:
    """H(l) = polys[l mod period](l) for l >= threshold.

    Each polynomial is a coefficient tuple, constant term first.
    """

    period: int
    polys: tuple[tuple[Fraction, ...], ...]
    threshold: int
    pole_order: int

    def __call__(self, l: int) -> Fraction:
        p = self.polys[l % self.period]
        return sum((c * l ** k for k, c in enumerate(p)), Fraction(0))

    def denominators_divide(self, bound: int | None = None) -> bool:
        """Every coefficient lies in (1/bound) Z, bound = q^{d-1} (d-1)! by default."""
        d = self.pole_order
        if bound is None:
            bound = self.period ** (d - 1) * math.factorial(d - 1) if d >= 1 else 1
        return all((c * bound).denominator == 1 for p in self.polys for c in p)


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients of the unique polynomial of degree < len(xs) through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for k in range(n):
            coeffs[k] += basis[k] * scale
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def quasi_polynomial(hs: HilbertSeries, max_retries: int = 8) -> QuasiPolynomial:
    """Extract p_0, ..., p_{q-1} by interpolation in each residue class,
    verify on 2q further values, then push the threshold as low as it goes."""
    R = hs.ring
    q = R.lcm
    d = hs.pole_order()
    num = list(hs.numerator)
    start = max(0, len(num) - 1 - sum(a * b for a, b in R.groups) + 1) if num else 0
    for _ in range(max_retries):
        top = start + (d + 2) * q + q
        H = hs.coefficients(top)
        polys = []
        for j in range(q):
            l0 = start + ((j - start) % q)
            xs = [l0 + k * q for k in range(d)]
            polys.append(_interpolate(xs, [H[x] for x in xs]) if d else ())
        qp = QuasiPolynomial(q, tuple(polys), start, d)
        if all(qp(l) == H[l] for l in range(start, start + (d + 2) * q)):
            break
        start += q
    else:
        raise RuntimeError("quasi-polynomial verification kept failing")
    t = start
    H = hs.coefficients(max(start, 1))
    while t > 0 and qp(t - 1) == H[t - 1]:
        t -= 1
    return QuasiPolynomial(q, qp.polys, t, d)


# --- divisibility gap ------------------------------------------------------------------

def _reachable(m: Monomial, weights, cap: int) -> int:
    """Bitmask of degrees <= cap of the divisors of m."""
    mask = (1 << (cap + 1)) - 1
    reach = 1
    for a, w in zip(m, weights):
        if a:
            acc = reach
            for k in range(1, a + 1):
                acc |= reach << (k * w)
            reach = acc & mask
    return reach


def has_divisor_of_degree(m: Monomial, R: RingDescriptor, d: int) -> bool:
    return bool(_reachable(m, R.weights, d) >> d & 1)


def divisor_of_degree(m: Monomial, R: RingDescriptor, d: int) -> Monomial | None:
    """Some divisor of m of weighted degree exactly d, or None."""
    w = R.weights
    n = len(m)
    # suffix reachability, then walk forward
    suffix = [0] * (n + 1)
    suffix[n] = 1
    mask = (1 << (d + 1)) - 1
    for v in range(n - 1, -1, -1):
        acc = suffix[v + 1]
        for k in range(1, m[v] + 1):
            acc |= suffix[v + 1] << (k * w[v])
        suffix[v] = acc & mask
    if not suffix[0] >> d & 1:
        return None
    out, left = [], d
    for v in range(n):
        for k in range(min(m[v], left // w[v]), -1, -1):
            if suffix[v + 1] >> (left - k * w[v]) & 1:
                out.append(k)
                left -= k * w[v]
                break
    return tuple(out)


def _box(R: RingDescriptor):
    q = R.lcm
    sizes = [q // w for w in R.weights]

    def rec(v):
        if v == len(sizes):
            yield ()
            return
        for a in range(sizes[v]):
            for tail in rec(v + 1):
                yield (a,) + tail
    return rec(0)


def gap_bound(R: RingDescriptor) -> int:
    """G*(w): least B >= 0 such that every monomial of degree n + q with
    n > B has a divisor of degree q.

    Monomials with some exponent a_v >= q/w_v have the pure-power divisor,
    so only the box a_v < q/w_v needs checking.
    """
    q = R.lcm
    w = R.weights
    worst = 0
    for m in _box(R):
        deg = sum(a * b for a, b in zip(m, w))
        if deg > q and not _reachable(m, w, q) >> q & 1:
            worst = max(worst, deg - q)
    return worst


def gap_witnesses(R: RingDescriptor, d: int, D: int) -> list[Monomial]:
    """Monomials of degree D with no divisor of degree d."""
    if d > D:
        raise ValueError("need d <= D")
    return [m for m in monomials_of_degree(R, D) if not has_divisor_of_degree(m, R, d)]


def peel(m: Monomial, R: RingDescriptor, h: int) -> list[Monomial] | None:
    """Split off h successive divisors of degree q; None if one is missing."""
    q = R.lcm
    out = []
    for _ in range(h):
        u = divisor_of_degree(m, R, q)
        if u is None:
            return None
        out.append(u)
        m = mono_div(m, u)
    return out


# --- Frobenius number ------------------------------------------------------------------

def frobenius_number(R: RingDescriptor) -> int:
    """Largest degree t with R_t = 0 (-1 when a weight equals 1)."""
    ws = sorted(set(R.weights))
    if math.gcd(*ws) != 1:
        raise ValueError("weights have a common factor: the Frobenius number is undefined")
    if ws[0] == 1:
        return -1
    bound = ws[0] * ws[-1]
    rep = [False] * (bound + 1)
    rep[0] = True
    for t in range(1, bound + 1):
        rep[t] = any(t >= w and rep[t - w] for w in ws)
    return max(t for t in range(bound + 1) if not rep[t])


# --- stabilization ---------------------------------------------------------------------

def stabilization_obstruction(I: MonomialIdeal, l: int, limit: int):
    """First (r, m) with l <= r <= limit and m in I_r but not in I_l R_{r-l};
    None when I_r = I_l R_{r-l} throughout."""
    low = I.component(l)
    for r in range(l, limit + 1):
        for m in monomials_of_degree(I.ring, r):
            if I.contains(m) and not any(divides(u, m) for u in low):
                return r, m
    return None


def stabilization_degree(I: MonomialIdeal, limit: int) -> int | None:
    """Least l with I_r = I_l R_{r-l} for all l <= r <= limit.

    Candidates stop at limit - q so every candidate is tested on at least one
    full period of degrees; otherwise l = limit would pass vacuously.
    """
    q = I.ring.lcm
    for l in range(0, max(limit - q, 0) + 1):
        if stabilization_obstruction(I, l, limit) is None:
            return l
    return None
