"""Weighted polynomial rings: descriptors, monomials, term orders, polynomials
and graded automorphisms.

Monomials are plain tuples of exponents.  Coefficients are ``gmpy2.mpq``
rationals.  Everything here is immutable after construction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

Monomial = tuple[int, ...]

_DEFAULT_NAMES = "xyztuvw"


def QQ(x) -> mpq:
    """Coerce ints, strings like '3/4', Fractions and mpqs to ``mpq``."""
    return mpq(x)


@dataclass(frozen=True)
class RingDescriptor:
    """The weighted ring (R, w): weight groups (q_i, l_i) with q_1 < ... < q_n."""

    groups: tuple[tuple[int, int], ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        groups = tuple((int(q), int(c)) for q, c in self.groups)
        object.__setattr__(self, "groups", groups)
        for q, c in groups:
            if q < 1 or c < 1:
                raise ValueError(f"weights and counts must be positive, got {(q, c)}")
        for (a, _), (b, _) in zip(groups, groups[1:]):
            if not a < b:
                raise ValueError("group weights must be strictly increasing")
        nvars = sum(c for _, c in groups)
        if not self.names:
            object.__setattr__(self, "names", default_names(groups))
        elif len(self.names) != nvars:
            raise ValueError("need one name per variable")

    @classmethod
    def from_weights(cls, *weights, names: Sequence[str] | None = None) -> "RingDescriptor":
        """Build from a flat weight list, e.g. ``from_weights(2, 2, 3)``.

        Weights must already be sorted increasingly.
        """
        if len(weights) == 1 and not isinstance(weights[0], int):
            weights = tuple(weights[0])
        groups: list[list[int]] = []
        for w in weights:
            if groups and groups[-1][0] == w:
                groups[-1][1] += 1
            else:
                groups.append([w, 1])
        return cls(tuple(map(tuple, groups)), tuple(names) if names else ())

    @property
    def weights(self) -> tuple[int, ...]:
        return _flat_weights(self.groups)

    @property
    def nvars(self) -> int:
        return sum(c for _, c in self.groups)

    @property
    def ngroups(self) -> int:
        return len(self.groups)

    @property
    def lcm(self) -> int:
        return reduce(math.lcm, (q for q, _ in self.groups), 1)

    @property
    def group_of(self) -> tuple[int, ...]:
        """Group index of every flat variable."""
        return tuple(i for i, (_, c) in enumerate(self.groups) for _ in range(c))

    def group_range(self, i: int) -> range:
        start = sum(c for _, c in self.groups[:i])
        return range(start, start + self.groups[i][1])

    def satisfies_condition_multipli(self) -> bool:
        """True iff every weight divides the next one."""
        qs = [q for q, _ in self.groups]
        return all(b % a == 0 for a, b in zip(qs, qs[1:]))

    def restrict(self, i: int) -> "RingDescriptor":
        """The prefix subring generated by the first ``i`` groups."""
        if not 1 <= i <= self.ngroups:
            raise ValueError("prefix must keep at least one group")
        n = sum(c for _, c in self.groups[:i])
        return RingDescriptor(self.groups[:i], self.names[:n])

    def normalize(self) -> "RingDescriptor":
        g = math.gcd(*(q for q, _ in self.groups))
        return RingDescriptor(tuple((q // g, c) for q, c in self.groups), self.names)

    def one(self) -> Monomial:
        return (0,) * self.nvars

    def var(self, v: int) -> Monomial:
        return tuple(1 if k == v else 0 for k in range(self.nvars))

    def __str__(self):
        return ",".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))


@lru_cache(maxsize=None)
def _flat_weights(groups) -> tuple[int, ...]:
    return tuple(q for q, c in groups for _ in range(c))


def default_names(groups) -> tuple[str, ...]:
    n = sum(c for _, c in groups)
    if n <= len(_DEFAULT_NAMES):
        return tuple(_DEFAULT_NAMES[:n])
    return tuple(f"x{i + 1}_{j + 1}" for i, (_, c) in enumerate(groups) for j in range(c))


# --- monomials -------------------------------------------------------------

def weighted_degree(m: Monomial, R: RingDescriptor) -> int:
    w = R.weights
    if len(m) != len(w):
        raise ValueError(f"monomial has {len(m)} exponents, ring has {len(w)} variables")
    return sum(a * b for a, b in zip(m, w))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


@lru_cache(maxsize=4096)
def _monomials_of_degree(weights: tuple[int, ...], d: int) -> tuple[Monomial, ...]:
    # lexicographically descending in the flat variable order
    if not weights:
        return ((),) if d == 0 else ()
    w, rest = weights[0], weights[1:]
    out = []
    for a in range(d // w, -1, -1):
        for tail in _monomials_of_degree(rest, d - a * w):
            out.append((a,) + tail)
    return tuple(out)


def monomials_of_degree(R: RingDescriptor, d: int, order: "TermOrder | None" = None) -> list[Monomial]:
    """All monomials of weighted degree ``d``, largest first."""
    if d < 0:
        return []
    mons = list(_monomials_of_degree(R.weights, d))
    if order is not None and order.priority is not None:
        key = order.key(R)
        mons.sort(key=key, reverse=True)
    return mons


# --- term orders -------------------------------------------------------------

ORDER_KINDS = ("wdeglex", "wdegrevlex", "lex")


@dataclass(frozen=True)
class TermOrder:
    """A monomial order on a weighted ring.

    ``priority`` lists variable indices from largest to smallest; ``None``
    means the flat order x_11 > x_12 > ... > x_nl_n.
    """

    kind: str = "wdegrevlex"
    priority: tuple[int, ...] | None = None

    def __post_init__(self):
        kind = {"pure-lex": "lex", "purelex": "lex"}.get(self.kind, self.kind)
        if kind not in ORDER_KINDS:
            raise ValueError(f"unknown term order {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.priority is not None:
            object.__setattr__(self, "priority", tuple(self.priority))

    def key(self, R: RingDescriptor) -> Callable[[Monomial], tuple]:
        """Sort key: a larger key means a larger monomial.  Keys are flat int tuples."""
        return _order_key(self.kind, self.priority, R.weights)

    def compare(self, m1: Monomial, m2: Monomial, R: RingDescriptor) -> int:
        k = self.key(R)
        a, b = k(m1), k(m2)
        return (a > b) - (a < b)


@lru_cache(maxsize=None)
def _order_key(kind, priority, weights):
    n = len(weights)
    perm = tuple(range(n)) if priority is None else priority
    if sorted(perm) != list(range(n)):
        raise ValueError("priority must be a permutation of the variables")
    rev = perm[::-1]
    if kind == "lex":
        return lambda m: tuple(m[v] for v in perm)
    if kind == "wdeglex":
        return lambda m: (sum(a * b for a, b in zip(m, weights)),) + tuple(m[v] for v in perm)
    return lambda m: (sum(a * b for a, b in zip(m, weights)),) + tuple(-m[v] for v in rev)


def compare(m1: Monomial, m2: Monomial, order: TermOrder, R: RingDescriptor) -> int:
    """-1, 0 or 1 as m1 is smaller than, equal to or greater than m2."""
    return order.compare(m1, m2, R)


def lex_order(priority: Sequence[int] | None = None) -> TermOrder:
    return TermOrder("lex", None if priority is None else tuple(priority))


# --- polynomials ---------------------------------------------------------------

class Polynomial:
    """Sparse polynomial with rational coefficients: ``{monomial: mpq}``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingDescriptor, terms=None):
        self.ring = ring
        clean = {}
        if terms:
            n = ring.nvars
            for m, c in (terms.items() if isinstance(terms, dict) else terms):
                m = tuple(m)
                if len(m) != n:
                    raise ValueError("exponent vector length does not match the ring")
                c = mpq(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
                    if not clean[m]:
                        del clean[m]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.ring, p.terms, p._hash = ring, terms, None
        return p

    @classmethod
    def monomial(cls, ring, m: Monomial, c=1) -> "Polynomial":
        return cls(ring, {tuple(m): c})

    @classmethod
    def variable(cls, ring, v: int) -> "Polynomial":
        return cls._raw(ring, {ring.var(v): mpq(1)})

    @classmethod
    def constant(cls, ring, c) -> "Polynomial":
        return cls(ring, {ring.one(): c})

    @classmethod
    def zero(cls, ring) -> "Polynomial":
        return cls._raw(ring, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def monomials(self) -> list[Monomial]:
        return list(self.terms)

    def degrees(self) -> set[int]:
        w = self.ring.weights
        return {sum(a * b for a, b in zip(m, w)) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Weighted degree; raises for inhomogeneous or zero polynomials."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("degree is defined only for nonzero homogeneous polynomials")
        return ds.pop()

    def leading_term(self, order: TermOrder) -> tuple[Monomial, mpq]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key(self.ring))
        return m, self.terms[m]

    def leading_monomial(self, order: TermOrder) -> Monomial:
        return self.leading_term(order)[0]

    def sorted_terms(self, order: TermOrder) -> list[tuple[Monomial, mpq]]:
        key = order.key(self.ring)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def monic(self, order: TermOrder) -> "Polynomial":
        _, c = self.leading_term(order)
        return self.scale(1 / c)

    def scale(self, c) -> "Polynomial":
        c = mpq(c)
        if not c:
            return Polynomial.zero(self.ring)
        return Polynomial._raw(self.ring, {m: a * c for m, a in self.terms.items()})

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        return Polynomial.constant(self.ring, other)

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, m: Monomial, c=1) -> "Polynomial":
        c = mpq(c)
        return Polynomial._raw(self.ring, {mono_mul(m, t): a * c for t, a in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, mpq)):
            return self == Polynomial.constant(self.ring, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def to_str(self, order: TermOrder | None = None) -> str:
        return format_polynomial(self, order or TermOrder("wdeglex"))

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    __str__ = to_str


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for a, n in zip(m, names):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts) if parts else "1"


def format_polynomial(f: Polynomial, order: TermOrder) -> str:
    """Canonical text: terms in descending order, e.g. ``x^3 - 3/2*x*y``."""
    if not f.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(f.sorted_terms(order)):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mon = format_monomial(m, f.ring.names)
        if mon == "1":
            body = str(c)
        elif c == 1:
            body = mon
        else:
            body = f"{c}*{mon}"
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def random_form(R: RingDescriptor, d: int, rng: random.Random, bound: int = 10**6,
                variables: Iterable[int] | None = None) -> Polynomial:
    """Random homogeneous form of degree ``d`` over the full monomial basis
    (optionally restricted to the given variables)."""
    allowed = None if variables is None else set(variables)
    terms = {}
    for m in monomials_of_degree(R, d):
        if allowed is not None and any(a and v not in allowed for v, a in enumerate(m)):
            continue
        c = 0
        while c == 0:
            c = rng.randint(-bound, bound)
        terms[m] = mpq(c)
    return Polynomial._raw(R, terms)


# --- graded automorphisms -------------------------------------------------------

def _det(matrix) -> mpq:
    a = [list(map(mpq, row)) for row in matrix]
    n = len(a)
    det = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


def _inverse(matrix) -> list[list[mpq]]:
    n = len(matrix)
    a = [list(map(mpq, row)) + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class GradedAutomorphism:
    """phi(X_ij) = sum_h A_i[h][j] X_ih + psi_ij.

    Column ``j`` of ``A_i`` holds the linear part of the image of X_ij, so the
    subgroup T (images involve only X_ih with h <= j) is exactly the set of
    automorphisms with every A_i upper triangular.  ``psi`` is indexed by flat
    variable and must be homogeneous of degree q_i in the earlier groups.
    """

    __slots__ = ("ring", "matrices", "psi", "_images")

    def __init__(self, ring: RingDescriptor, matrices, psi=None, validate: bool = True):
        self.ring = ring
        self.matrices = tuple(tuple(tuple(mpq(x) for x in row) for row in A) for A in matrices)
        if psi is None:
            psi = [Polynomial.zero(ring)] * ring.nvars
        self.psi = tuple(psi)
        self._images = None
        if validate:
            self.validate()

    def validate(self) -> None:
        R = self.ring
        if len(self.matrices) != R.ngroups or len(self.psi) != R.nvars:
            raise ValueError("automorphism data does not match the ring")
        gof = R.group_of
        for i, ((q, l), A) in enumerate(zip(R.groups, self.matrices)):
            if len(A) != l or any(len(row) != l for row in A):
                raise ValueError(f"A_{i + 1} must be {l}x{l}")
            if _det(A) == 0:
                raise ValueError(f"A_{i + 1} is singular: not an automorphism")
        for v, p in enumerate(self.psi):
            if p.ring != R:
                raise ValueError("psi lives in another ring")
            if not p:
                continue
            i = gof[v]
            if p.degrees() != {R.groups[i][0]}:
                raise ValueError(f"psi for variable {R.names[v]} must be homogeneous of degree {R.groups[i][0]}")
            for m in p.terms:
                if any(a and gof[u] >= i for u, a in enumerate(m)):
                    raise ValueError(f"psi for variable {R.names[v]} must only involve lighter variables")

    @classmethod
    def identity(cls, R: RingDescriptor) -> "GradedAutomorphism":
        mats = [[[int(a == b) for b in range(l)] for a in range(l)] for _, l in R.groups]
        return cls(R, mats, validate=False)

    @classmethod
    def from_images(cls, R: RingDescriptor, images: Sequence[Polynomial]) -> "GradedAutomorphism":
        """Split images into linear parts and nonlinear parts, then validate."""
        mats, psi = [], []
        for i, (q, l) in enumerate(R.groups):
            rng = R.group_range(i)
            A = [[mpq(0)] * l for _ in range(l)]
            for j, v in enumerate(rng):
                rest = {}
                for m, c in images[v].terms.items():
                    u = next((u for u in rng if m == R.var(u)), None)
                    if u is None:
                        rest[m] = c
                    else:
                        A[u - rng.start][j] = c
                psi.append(Polynomial._raw(R, rest))
            mats.append(A)
        return cls(R, mats, psi)

    def images(self) -> tuple[Polynomial, ...]:
        if self._images is None:
            R = self.ring
            imgs = []
            for i, A in enumerate(self.matrices):
                rng = R.group_range(i)
                for j, v in enumerate(rng):
                    terms = dict(self.psi[v].terms)
                    for h, u in enumerate(rng):
                        if A[h][j]:
                            terms[R.var(u)] = A[h][j]
                    imgs.append(Polynomial._raw(R, terms))
            self._images = tuple(imgs)
        return self._images

    def image(self, v: int) -> Polynomial:
        return self.images()[v]

    def apply(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ValueError("automorphism and polynomial live in different rings")
        return substitute(f, self.images())

    __call__ = apply

    def compose(self, other: "GradedAutomorphism") -> "GradedAutomorphism":
        """``self o other``: apply ``other`` first."""
        return GradedAutomorphism.from_images(self.ring, [self.apply(g) for g in other.images()])

    def inverse(self) -> "GradedAutomorphism":
        R = self.ring
        inv_images: list[Polynomial | None] = [None] * R.nvars
        for i, A in enumerate(self.matrices):
            B = _inverse(A)
            rng = R.group_range(i)
            # images of lighter variables are already known
            partial = list(inv_images)
            for u in range(R.nvars):
                if partial[u] is None:
                    partial[u] = Polynomial.variable(R, u)
            for j, v in enumerate(rng):
                lin = Polynomial.zero(R)
                corr = Polynomial.zero(R)
                for h, u in enumerate(rng):
                    if B[h][j]:
                        lin = lin + Polynomial.variable(R, u).scale(B[h][j])
                        corr = corr + self.psi[u].scale(B[h][j])
                inv_images[v] = lin - substitute(corr, partial)
        return GradedAutomorphism.from_images(R, inv_images)

    def is_upper_triangular(self) -> bool:
        return all(A[h][j] == 0 for A in self.matrices for j in range(len(A)) for h in range(j + 1, len(A)))

    def __eq__(self, other):
        if not isinstance(other, GradedAutomorphism):
            return NotImplemented
        return self.ring == other.ring and self.images() == other.images()

    def __hash__(self):
        return hash(self.images())

    def __repr__(self):
        parts = [f"{n} -> {img}" for n, img in zip(self.ring.names, self.images())]
        return "GradedAutomorphism(" + ", ".join(parts) + ")"


def substitute(f: Polynomial, images: Sequence[Polynomial], target: RingDescriptor | None = None) -> Polynomial:
    """Ring map sending variable ``v`` to ``images[v]`` (possibly into another ring)."""
    target = target or (images[0].ring if images else f.ring)
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(v, a):
        key = (v, a)
        if key not in powers:
            powers[key] = images[v] if a == 1 else power(v, a - 1) * images[v]
        return powers[key]

    out = Polynomial.zero(target)
    for m, c in f.terms.items():
        t = Polynomial.constant(target, c)
        for v, a in enumerate(m):
            if a:
                t = t * power(v, a)
        out = out + t
    return out


def random_automorphism(R: RingDescriptor, mode: str = "general", seed=None,
                        bound: int = 10**6, rng: random.Random | None = None) -> GradedAutomorphism:
    """Random graded automorphism with integer entries in [-bound, bound].

    Matrices are resampled until invertible; every psi_ij is a random form of
    degree q_i over the full monomial basis of the lighter groups (zero when
    that basis is empty).
    """
    if mode not in ("general", "upper_triangular"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng or random.Random(seed)

    def nonzero():
        c = 0
        while c == 0:
            c = rng.randint(-bound, bound)
        return c

    mats = []
    for q, l in R.groups:
        while True:
            if mode == "general":
                A = [[rng.randint(-bound, bound) for _ in range(l)] for _ in range(l)]
            else:
                A = [[nonzero() if h == j else (rng.randint(-bound, bound) if h < j else 0)
                      for j in range(l)] for h in range(l)]
            if _det(A):
                break
        mats.append(A)
    psi = []
    for i, (q, l) in enumerate(R.groups):
        lighter = [v for v in range(R.nvars) if R.group_of[v] < i]
        for _ in range(l):
            psi.append(random_form(R, q, rng, bound, lighter) if lighter else Polynomial.zero(R))
    return GradedAutomorphism(R, mats, psi, validate=False)


# --- elementary generators of T --------------------------------------------------

@dataclass(frozen=True)
class Elementary:
    """One generator of T.

    kind 'delta': X_v -> c X_v;  'tau': X_v -> X_v + c X_source (same group,
    source before v);  'eta': X_v -> X_v + c * term, term a monomial of degree
    q_i in the lighter groups.
    """

    kind: str
    variable: int
    coefficient: mpq
    source: int | None = None
    term: Monomial | None = None

    def automorphism(self, R: RingDescriptor) -> GradedAutomorphism:
        images = [Polynomial.variable(R, u) for u in range(R.nvars)]
        x = images[self.variable]
        c = mpq(self.coefficient)
        if self.kind == "delta":
            if not c:
                raise ValueError("diagonal factor must be nonzero")
            images[self.variable] = x.scale(c)
        elif self.kind == "tau":
            if self.source is None or R.group_of[self.source] != R.group_of[self.variable] \
                    or self.source >= self.variable:
                raise ValueError("tau needs an earlier variable of the same group")
            images[self.variable] = x + Polynomial.variable(R, self.source).scale(c)
        elif self.kind == "eta":
            images[self.variable] = x + Polynomial.monomial(R, self.term, c)
        else:
            raise ValueError(f"unknown elementary kind {self.kind!r}")
        return GradedAutomorphism.from_images(R, images)


def compose_sequence(seq: Sequence[Elementary | GradedAutomorphism], R: RingDescriptor) -> GradedAutomorphism:
    """seq[0] o seq[1] o ... o seq[-1]."""
    phi = GradedAutomorphism.identity(R)
    for e in reversed(seq):
        a = e.automorphism(R) if isinstance(e, Elementary) else e
        phi = a.compose(phi)
    return phi


def decompose_automorphism(phi: GradedAutomorphism) -> list[Elementary]:
    """Factor phi in T into diagonal, elementary triangular and elementary
    nonlinear generators, peeling off the last variable at each step.

    Composing the result left to right (``compose_sequence``) gives phi.
    """
    if not phi.is_upper_triangular():
        raise ValueError("automorphism is not in T (some A_i is not upper triangular)")
    R = phi.ring
    out: list[Elementary] = []
    for v in reversed(range(R.nvars)):
        i = R.group_of[v]
        rng = R.group_range(i)
        j = v - rng.start
        A = phi.matrices[i]
        a = A[j][j]
        step: list[Elementary] = []
        for m, c in sorted(phi.psi[v].terms.items(), reverse=True):
            step.append(Elementary("eta", v, c / a, term=m))
        for h in range(j):
            if A[h][j]:
                step.append(Elementary("tau", v, A[h][j] / a, source=rng.start + h))
        if a != 1:
            step.append(Elementary("delta", v, a))
        out.extend(step)
    return out
