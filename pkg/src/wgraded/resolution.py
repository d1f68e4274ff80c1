"""Graded free resolutions over weighted polynomial rings, Betti tables,
regularity and depth.

A resolution is built with Schreyer's algorithm (syzygies of a Gröbner basis
form a Gröbner basis for the induced order) and then pruned of unit entries.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from gmpy2 import mpq

from .core import Monomial, Polynomial, RingDescriptor, TermOrder, divides, mono_div, mono_lcm, mono_mul
from .groebner import Ideal, MonomialIdeal, _Basis, buchberger, colon, leading, reduce_vector


@dataclass
class FreeResolution:
    """0 <- I <- F_0 <- F_1 <- ... with F_i = sum R(-shift).

    ``generators[b]`` is the image of the b-th basis element of F_0 in R;
    ``differentials[i-1][b]`` maps row index -> entry for the b-th basis
    element of F_i (i >= 1).
    """

    ring: RingDescriptor
    shifts: list[list[int]]
    generators: list[Polynomial]
    differentials: list[list[dict[int, Polynomial]]]
    minimal: bool = False

    @property
    def length(self) -> int:
        """Length of the resolution of I (number of levels minus one)."""
        return len(self.shifts) - 1

    def projective_dimension(self, quotient: bool = True) -> int:
        """projdim of R/I (default) or of I."""
        if not self.shifts:
            return 0
        return len(self.shifts) if quotient else len(self.shifts) - 1

    def check_complex(self) -> bool:
        """d o d = 0 and every entry homogeneous of the right degree."""
        R = self.ring
        for b, g in enumerate(self.generators):
            if g and g.degrees() != {self.shifts[0][b]}:
                return False
        for i, cols in enumerate(self.differentials, start=1):
            for b, col in enumerate(cols):
                for a, p in col.items():
                    if p and p.degrees() != {self.shifts[i][b] - self.shifts[i - 1][a]}:
                        return False
                if i == 1:
                    img = Polynomial.zero(R)
                    for a, p in col.items():
                        img = img + p * self.generators[a]
                else:
                    img = {}
                    for a, p in col.items():
                        for r, e in self.differentials[i - 2][a].items():
                            img[r] = img.get(r, Polynomial.zero(R)) + p * e
                    img = any(v for v in img.values())
                if img:
                    return False
        return True

    def has_unit_entries(self) -> bool:
        return any(len(p.terms) == 1 and not any(next(iter(p.terms)))
                   for cols in self.differentials for col in cols for p in col.values())

    def betti(self, quotient: bool = False) -> "BettiTable":
        entries = Counter()
        offset = 0
        if quotient:
            entries[(0, 0)] = 1
            offset = 1
        for i, level in enumerate(self.shifts):
            for s in level:
                entries[(i + offset, s)] += 1
        return BettiTable(self.ring, dict(entries), "R/I" if quotient else "I")


@dataclass(frozen=True)
class BettiTable:
    """beta_{ij}: multiplicity of R(-j) in homological degree i."""

    ring: RingDescriptor
    entries: dict
    module: str = "I"

    def b(self, i: int) -> int | None:
        js = [j for (k, j), v in self.entries.items() if k == i and v]
        return max(js) if js else None

    def projective_dimension(self) -> int:
        return max((i for (i, _), v in self.entries.items() if v), default=-1)

    def triples(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items() if v)

    def shifts(self, i: int) -> list[int]:
        return sorted(j for (k, j), v in self.entries.items() if k == i for _ in range(v))

    def numerator(self) -> list[int]:
        """sum_i (-1)^i sum_j beta_ij t^j (for an R/I table this is the Hilbert series numerator)."""
        top = max((j for (_, j) in self.entries), default=0)
        out = [0] * (top + 1)
        for (i, j), v in self.entries.items():
            out[j] += (-1) ** i * v
        while out and out[-1] == 0:
            out.pop()
        return out


# --- Schreyer resolution ------------------------------------------------------------

def _poly_vec(g: Polynomial) -> dict:
    return {(0, m): c for m, c in g.terms.items()}


def _monic(vec, key):
    lt = leading(vec, key)
    c = vec[lt]
    return lt, ({t: a / c for t, a in vec.items()} if c != 1 else vec)


def schreyer_resolution(I: Ideal | MonomialIdeal, order: TermOrder = TermOrder()) -> FreeResolution:
    """Non-minimal resolution of I from iterated Schreyer syzygies."""
    if isinstance(I, MonomialIdeal):
        I = I.to_ideal()
    R = I.ring
    n = R.nvars
    w = R.weights
    okey = order.key(R)
    G = list(buchberger(I, order).elements)
    if not G:
        return FreeResolution(R, [], [], [], minimal=True)

    prev_key = lambda t: okey(t[1])
    prev_shift = [0]
    prev_total: list[Monomial] = [R.one()]
    prev_tail: list[tuple] = [()]

    elems = [_poly_vec(g) for g in G]
    shifts: list[list[int]] = []
    generators: list[Polynomial] = []
    diffs: list[list[dict[int, Polynomial]]] = []

    for level in range(n + 2):
        if not elems:
            break
        if level > n:
            raise RuntimeError("Schreyer resolution longer than the number of variables")
        pairs = [_monic(e, prev_key) for e in elems]
        support = [v for v in range(n) if any(lt[1][v] for lt, _ in pairs)]
        if support:
            v0 = support[0]
            pairs.sort(key=lambda p: -p[0][1][v0])
        lts = [lt for lt, _ in pairs]
        elems = [vec for _, vec in pairs]
        level_shift = [prev_shift[c] + sum(a * b for a, b in zip(m, w)) for c, m in lts]
        shifts.append(level_shift)
        if level == 0:
            generators = [Polynomial._raw(R, {m: c for (_, m), c in e.items()}) for e in elems]
        else:
            cols = []
            for e in elems:
                col: dict[int, dict] = {}
                for (r, m), c in e.items():
                    col.setdefault(r, {})[m] = c
                cols.append({r: Polynomial._raw(R, t) for r, t in col.items()})
            diffs.append(cols)

        total = [mono_mul(lt[1], prev_total[lt[0]]) for lt in lts]
        tail = [prev_tail[lt[0]] + (-c,) for c, lt in enumerate(lts)]
        key = (lambda total, tail: (lambda t: okey(mono_mul(t[1], total[t[0]])) + tail[t[0]]))(total, tail)

        basis = _Basis()
        for lt, e in zip(lts, elems):
            basis.add(lt, e)
        syz = []
        by_comp: dict[int, list[int]] = {}
        for idx, lt in enumerate(lts):
            by_comp.setdefault(lt[0], []).append(idx)
        for comp, idxs in by_comp.items():
            for pos, i in enumerate(idxs):
                cands = []
                for j in idxs[pos + 1:]:
                    lcm = mono_lcm(lts[i][1], lts[j][1])
                    cands.append((mono_div(lcm, lts[i][1]), j, lcm))
                cands.sort(key=lambda c: (sum(c[0]), c[1]))
                kept = []
                for mi, j, lcm in cands:
                    if not any(divides(k[0], mi) for k in kept):
                        kept.append((mi, j, lcm))
                for mi, j, lcm in kept:
                    mj = mono_div(lcm, lts[j][1])
                    s: dict = {}
                    for (c, m), a in elems[i].items():
                        s[(c, mono_mul(mi, m))] = a
                    for (c, m), a in elems[j].items():
                        t = (c, mono_mul(mj, m))
                        v = s.get(t, 0) - a
                        if v:
                            s[t] = v
                        else:
                            s.pop(t, None)
                    rem, quot = reduce_vector(s, basis, prev_key, track=True)
                    if rem:
                        raise RuntimeError("Schreyer step: S-vector did not reduce to zero")
                    vec = {(i, mi): mpq(1)}
                    vec[(j, mj)] = vec.get((j, mj), 0) - 1
                    for (k, m), a in quot.items():
                        t = (k, m)
                        v = vec.get(t, 0) - a
                        if v:
                            vec[t] = v
                        else:
                            vec.pop(t, None)
                    syz.append(vec)
        elems = syz
        prev_key, prev_shift, prev_total, prev_tail = key, level_shift, total, tail

    return FreeResolution(R, shifts, generators, diffs, minimal=False)


def minimalize_resolution(F: FreeResolution) -> FreeResolution:
    """Cancel unit entries until none are left."""
    R = F.ring
    nlev = len(F.shifts)
    alive = [list(range(len(s))) for s in F.shifts]
    gens = {b: g for b, g in enumerate(F.generators)}
    cols = [None] + [{b: dict(col) for b, col in enumerate(level)} for level in F.differentials]

    def find_unit():
        for k in range(1, nlev):
            for b, col in cols[k].items():
                sb = F.shifts[k][b]
                for a, p in col.items():
                    if F.shifts[k - 1][a] == sb and p:
                        return k, b, a
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        k, b, a = hit
        colb = cols[k][b]
        u = next(iter(colb[a].terms.values()))
        inv = 1 / u
        for c, col in cols[k].items():
            if c == b:
                continue
            p = col.get(a)
            if not p:
                continue
            f = p.scale(inv)
            for r, e in colb.items():
                new = col.get(r, Polynomial.zero(R)) - f * e
                if new:
                    col[r] = new
                else:
                    col.pop(r, None)
        del cols[k][b]
        alive[k].remove(b)
        alive[k - 1].remove(a)
        if k - 1 == 0:
            del gens[a]
        else:
            del cols[k - 1][a]
        if k + 1 < nlev:
            for col in cols[k + 1].values():
                col.pop(b, None)

    # renumber
    pos = [{old: new for new, old in enumerate(ids)} for ids in alive]
    shifts = [[F.shifts[k][b] for b in alive[k]] for k in range(nlev)]
    generators = [gens[b] for b in alive[0]] if nlev else []
    diffs = []
    for k in range(1, nlev):
        diffs.append([{pos[k - 1][a]: p for a, p in cols[k][b].items() if p} for b in alive[k]])
    while shifts and not shifts[-1]:
        shifts.pop()
        if diffs:
            diffs.pop()
    out = FreeResolution(R, shifts, generators, diffs, minimal=True)
    if out.length > R.nvars - 1:
        raise RuntimeError("minimal resolution longer than the syzygy theorem allows")
    return out


def free_resolution(I: Ideal | MonomialIdeal, minimalize: bool = True,
                    order: TermOrder = TermOrder()) -> FreeResolution:
    """Graded free resolution of I (minimal by default)."""
    F = schreyer_resolution(I, order)
    return minimalize_resolution(F) if minimalize else F


def betti(I: Ideal | MonomialIdeal, quotient: bool = False) -> BettiTable:
    return free_resolution(I).betti(quotient)


def regularity_from_betti(table: BettiTable) -> int:
    """max_i (b_i - i) - sum_j l_j (q_j - 1)."""
    corr = sum(l * (q - 1) for q, l in table.ring.groups)
    vals = [table.b(i) - i for i in range(table.projective_dimension() + 1) if table.b(i) is not None]
    if not vals:
        raise ValueError("regularity of the zero module is undefined")
    return max(vals) - corr


def regularity(I: Ideal | MonomialIdeal, quotient: bool = False) -> int:
    """Castelnuovo-Mumford regularity of I (or of R/I) from the Betti numbers."""
    return regularity_from_betti(betti(I, quotient))


def depth(I: Ideal | MonomialIdeal) -> int:
    """depth R/I = l - projdim R/I."""
    F = free_resolution(I)
    if F.generators and any(not any(m) for g in F.generators for m in g.terms):
        raise ValueError("R/I = 0 has no depth")
    return I.ring.nvars - F.projective_dimension(quotient=True)


def terminal_regular_sequence(I: Ideal | MonomialIdeal, order: TermOrder = TermOrder()) -> int:
    """Largest k such that the last k variables, taken from the last one
    backwards, form a regular sequence on R/I (checked by colons)."""
    J = I.to_ideal() if isinstance(I, MonomialIdeal) else I
    R = J.ring
    k = 0
    for v in reversed(range(R.nvars)):
        x = Polynomial.variable(R, v)
        if not colon(J, x, order).equals(J, order):
            break
        J = J + Ideal(R, (x,))
        k += 1
    return k
