"""Command line front end.

    python -m wgraded COMMAND RING [IDEAL] [options]

RING is ``name:weight`` pairs such as ``x:2,y:4,z:5``; IDEAL lists
generators separated by ``;`` or ``,`` (``@path`` reads it from a file).
Exit codes: 0 success, 1 negative verdict, 2 inconclusive, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .core import (
    Polynomial,
    RingDescriptor,
    TermOrder,
    decompose_automorphism,
    format_monomial,
    format_polynomial,
    GradedAutomorphism,
    lex_order,
)
from .groebner import GenericityError, Ideal, buchberger, gin, initial_ideal
from .hilbert import (
    frobenius_number,
    gap_bound,
    gap_witnesses,
    hilbert_series,
    hilbert_table,
    quasi_polynomial,
    stabilization_degree,
)
from .lex import Inconclusive, Lexifiable, NotLexifiable, group_orders, is_lexicographic_ideal, lexify
from .polarization import completely_polarize, polarize
from .resolution import betti, depth, regularity
from .stability import is_strongly_stable, is_T_fixed

EXIT_OK, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    """Malformed or unsupported input."""


class ParseError(InputError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position


# --- parsing ---------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()]))")


def parse_ring(spec: str) -> RingDescriptor:
    """``x:2,y:4,z:5`` (or bare weights ``2,4,5``); variables are grouped
    and sorted by weight, keeping their names and relative order."""
    items = [s for s in spec.split(",")]
    pairs = []
    pos = 0
    for item in items:
        body = item.strip()
        if ":" in body:
            name, _, w = body.partition(":")
            name, w = name.strip(), w.strip()
            if not _NAME.fullmatch(name):
                raise ParseError("bad variable name", pos, spec)
        else:
            name, w = None, body
        if not w.isdigit() or int(w) < 1:
            raise ParseError("weight must be a positive integer", pos, spec)
        pairs.append((name, int(w)))
        pos += len(item) + 1
    if not pairs:
        raise ParseError("empty ring", 0, spec)
    named = [n for n, _ in pairs if n is not None]
    if named and len(named) != len(pairs):
        raise ParseError("either name every variable or none", 0, spec)
    if len(set(named)) != len(named):
        raise InputError(f"duplicate variable names in {spec!r}")
    order = sorted(range(len(pairs)), key=lambda k: pairs[k][1])
    weights = [pairs[k][1] for k in order]
    names = [pairs[k][0] for k in order] if named else None
    return RingDescriptor.from_weights(*weights, names=names)


class _Parser:
    def __init__(self, text: str, R: RingDescriptor, offset: int = 0, full: str | None = None):
        self.text, self.R, self.offset = text, R, offset
        self.full = full if full is not None else text
        self.tokens = []
        i = 0
        while i < len(text):
            if text[i:].strip() == "":
                break
            m = _TOKEN.match(text, i)
            if not m:
                j = i + len(text[i:]) - len(text[i:].lstrip())
                raise ParseError(f"unexpected character {text[j]!r}", offset + j, self.full)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), offset + start))
            i = m.end()
        self.k = 0
        self.index = {n: v for v, n in enumerate(R.names)}

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else (None, None, self.offset + len(self.text))

    def take(self):
        tok = self.peek()
        self.k += 1
        return tok

    def fail(self, msg):
        raise ParseError(msg, self.peek()[2], self.full)

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.fail("empty generator")
        p = self.expr()
        if self.k != len(self.tokens):
            self.fail("unexpected token")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if any(any(m) for m in q.terms) or not q:
                    raise ParseError("can only divide by a nonzero constant", pos, self.full)
                p = p.scale(1 / next(iter(q.terms.values())))
        return p

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            p = self.unary()
            return -p if op == "-" else p
        return self.power()

    def power(self):
        p = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", pos, self.full)
            p = p ** int(val)
        return p

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.constant(self.R, int(val))
        if kind == "name":
            self.take()
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r}", pos, self.full)
            return Polynomial.variable(self.R, self.index[val])
        if val == "(":
            self.take()
            p = self.expr()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return p
        self.fail("expected a number, variable or '('")


def parse_polynomials(spec: str, R: RingDescriptor) -> list[Polynomial]:
    """Split on ';' or ',' and parse each piece."""
    out, start = [], 0
    for piece in re.split(r"[;,]", spec):
        if piece.strip():
            out.append(_Parser(piece, R, start, spec).parse())
        start += len(piece) + 1
    return out


def parse_ideal(spec: str, R: RingDescriptor) -> Ideal:
    gens = parse_polynomials(spec, R)
    for g in gens:
        if g and not g.is_homogeneous():
            degs = " vs ".join(map(str, sorted(g.degrees())))
            raise InputError(f"generator {format_polynomial(g, TermOrder())} is not homogeneous: degrees {degs}")
    return Ideal(R, tuple(g for g in gens if g))


def parse(ring_spec: str, ideal_spec: str) -> tuple[RingDescriptor, Ideal]:
    R = parse_ring(ring_spec)
    return R, parse_ideal(ideal_spec, R)


# --- output ------------------------------------------------------------------------

@dataclass
class Report:
    data: dict
    text: list[str]
    code: int = EXIT_OK


def _display_order(order: TermOrder) -> TermOrder:
    # generator lists are printed in descending lex order for the active variable priority
    return lex_order(order.priority)


def _monomials(I, order: TermOrder) -> list[str]:
    return [format_monomial(m, I.ring.names) for m in I.sorted_generators(_display_order(order))]


def _univariate(coeffs, var: str = "l") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            parts.append(_frac(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{_frac(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def _frac(x) -> str:
    x = Fraction(int(x.numerator), int(x.denominator)) if not isinstance(x, Fraction) else x
    return str(x)


def _order(args, R: RingDescriptor, kind: str | None = None) -> TermOrder:
    kind = kind or args.order
    if not args.var_order:
        return TermOrder(kind)
    names = [s.strip() for s in args.var_order.split(",") if s.strip()]
    index = {n: v for v, n in enumerate(R.names)}
    bad = [n for n in names if n not in index]
    if bad or sorted(names) != sorted(R.names):
        raise InputError(f"--var-order must list every variable once, got {args.var_order!r}")
    return TermOrder(kind, tuple(index[n] for n in names))


def _monomial_input(I: Ideal):
    if not I.is_monomial():
        raise InputError("this command needs a monomial ideal")
    return I.to_monomial_ideal()


# --- commands --------------------------------------------------------------------------

def cmd_hilbert(args, R, I):
    lo = args.lo if args.lo is not None else 0
    hi = args.hi if args.hi is not None else lo + 20
    table = hilbert_table(I, lo, hi, quotient=args.quotient)
    what = "H_{R/I}" if args.quotient else "H_I"
    return Report({"function": what, "table": {str(d): table[d] for d in range(lo, hi + 1)}},
                  [f"{what}({d}) = {table[d]}" for d in range(lo, hi + 1)])


def cmd_series(args, R, I):
    hs = hilbert_series(I)
    return Report({"numerator": list(hs.numerator), "denominator": [list(g) for g in R.groups]}, [str(hs)])


def cmd_quasipoly(args, R, I):
    qp = quasi_polynomial(hilbert_series(I))
    polys = [[_frac(c) for c in p] for p in qp.polys]
    text = [f"period {qp.period}, valid from {qp.threshold}"]
    for j, p in enumerate(polys):
        text.append(f"p_{j}(l) = {_univariate(qp.polys[j])}")
    return Report({"period": qp.period, "threshold": qp.threshold, "polynomials": polys,
                   "denominators_divide": qp.denominators_divide()}, text)


def cmd_gin(args, R, I):
    order = _order(args, R)
    J = gin(I, order, seed=args.seed, trials=args.trials)
    gens = _monomials(J, order)
    return Report({"generators": gens, "order": order.kind}, ["(" + ", ".join(gens) + ")"])


def cmd_initial(args, R, I):
    order = _order(args, R)
    gens = _monomials(initial_ideal(I, order), order)
    return Report({"generators": gens, "order": order.kind}, ["(" + ", ".join(gens) + ")"])


def cmd_groebner(args, R, I):
    order = _order(args, R)
    G = buchberger(I, order)
    key = _display_order(order).key(R)
    polys = sorted(G.elements, key=lambda g: key(g.leading_monomial(order)), reverse=True)
    out = [format_polynomial(g, order) for g in polys]
    return Report({"basis": out, "order": order.kind}, out)


def cmd_stable(args, R, I):
    M = _monomial_input(I)
    res = is_strongly_stable(M)
    cert = res.certificate.describe(R) if res.certificate else None
    return Report({"strongly_stable": res.stable, "certificate": cert},
                  ["strongly stable" if res.stable else f"not strongly stable: {cert}"],
                  EXIT_OK if res.stable else EXIT_NO)


def cmd_tfixed(args, R, I):
    ok = is_T_fixed(I, trials=args.trials, seed=args.seed)
    return Report({"T_fixed": ok}, ["T-fixed" if ok else "not T-fixed"], EXIT_OK if ok else EXIT_NO)


def cmd_depth(args, R, I):
    d = depth(I)
    return Report({"depth": d}, [f"depth R/I = {d}"])


def cmd_reg(args, R, I):
    r = regularity(I, quotient=args.quotient)
    what = "R/I" if args.quotient else "I"
    return Report({"regularity": r, "module": what}, [f"reg {what} = {r}"])


def cmd_betti(args, R, I):
    table = betti(I, quotient=args.quotient)
    triples = [list(t) for t in table.triples()]
    text = [f"module {table.module}"] + [f"beta_{i},{j} = {b}" for i, j, b in table.triples()]
    return Report({"module": table.module, "betti": triples}, text)


def cmd_islex(args, R, I):
    M = _monomial_input(I)
    ok, bad = is_lexicographic_ideal(M, _order(args, R, "lex"))
    text = "lexicographic" if ok else f"not lexicographic (degree {bad})"
    return Report({"lexicographic": ok, "failing_degree": bad}, [text], EXIT_OK if ok else EXIT_NO)


def _outcome(o, R, order):
    if isinstance(o, Lexifiable):
        gens = _monomials(o.ideal, order)
        return {"status": o.status, "generators": gens}, "lexifiable: (" + ", ".join(gens) + ")", EXIT_OK
    if isinstance(o, NotLexifiable):
        return ({"status": o.status, "degree": o.degree, "h_ideal": o.h_ideal,
                 "h_candidate": o.h_candidate, "shadow_size": o.shadow_size},
                f"not lexifiable: degree {o.degree}, H_I = {o.h_ideal}, candidate needs {o.h_candidate}",
                EXIT_NO)
    return {"status": o.status, "max_degree": o.max_degree}, f"inconclusive up to degree {o.max_degree}", EXIT_INCONCLUSIVE


def cmd_lexify(args, R, I):
    if args.all_orders:
        data, text, codes = {}, [], []
        for p in group_orders(R):
            order = lex_order(p)
            d, t, c = _outcome(lexify(I, args.max_degree, order), R, order)
            label = ">".join(R.names[v] for v in p)
            data[label] = d
            text.append(f"{label}: {t}")
            codes.append(c)
        code = EXIT_OK if EXIT_OK in codes else (EXIT_INCONCLUSIVE if EXIT_INCONCLUSIVE in codes else EXIT_NO)
        return Report({"orders": data}, text, code)
    order = _order(args, R, "lex")
    d, t, c = _outcome(lexify(I, args.max_degree, order), R, order)
    return Report(d, [t], c)


def cmd_polarize(args, R, I):
    M = _monomial_input(I)
    if args.once:
        P = polarize(M)
        order = TermOrder("lex")
        gens = _monomials(P.ideal, order)
        return Report({"ring": str(P.ring), "generators": gens,
                       "back": [R.names[v] for v in P.back]},
                      [f"ring {P.ring}", "(" + ", ".join(gens) + ")"])
    order = _order(args, R, "lex")
    J = completely_polarize(M, order, seed=args.seed, trials=args.trials)
    gens = _monomials(J, order)
    return Report({"generators": gens}, ["(" + ", ".join(gens) + ")"])


def cmd_gapbound(args, R, I):
    g = gap_bound(R)
    data, text = {"gap_bound": g}, [f"G*(w) = {g}"]
    if args.divisor_degree is not None and args.degree is not None:
        wit = [format_monomial(m, R.names) for m in gap_witnesses(R, args.divisor_degree, args.degree)]
        data["witnesses"] = wit
        text.append(f"degree {args.degree} monomials without a divisor of degree {args.divisor_degree}: "
                    + (", ".join(wit) or "none"))
    return Report(data, text)


def cmd_frobenius(args, R, I):
    f = frobenius_number(R)
    return Report({"frobenius": f}, [f"Frobenius number {f}"])


def cmd_decompose_aut(args, R, I):
    if args.ideal is None:
        raise InputError("give the images of the variables")
    images = parse_polynomials(_read(args.ideal), R)
    phi = GradedAutomorphism.from_images(R, images)
    out = []
    for e in decompose_automorphism(phi):
        c = _frac(Fraction(int(e.coefficient.numerator), int(e.coefficient.denominator)))
        x = R.names[e.variable]
        if e.kind == "delta":
            out.append(f"delta({x}; {c})")
        elif e.kind == "tau":
            out.append(f"tau({x}; {R.names[e.source]}; {c})")
        else:
            out.append(f"eta({x}; {format_monomial(e.term, R.names)}; {c})")
    return Report({"factors": out}, out or ["identity"])


def cmd_stabilization(args, R, I):
    M = _monomial_input(I)
    s = stabilization_degree(M, args.limit)
    if s is None:
        return Report({"stabilization_degree": None, "limit": args.limit},
                      [f"no stabilization degree up to {args.limit}"], EXIT_INCONCLUSIVE)
    return Report({"stabilization_degree": s, "limit": args.limit}, [f"stabilizes from degree {s}"])


COMMANDS = {
    "hilbert": cmd_hilbert, "series": cmd_series, "quasipoly": cmd_quasipoly, "gin": cmd_gin,
    "initial": cmd_initial, "groebner": cmd_groebner, "stable": cmd_stable, "tfixed": cmd_tfixed,
    "depth": cmd_depth, "reg": cmd_reg, "betti": cmd_betti, "islex": cmd_islex, "lexify": cmd_lexify,
    "polarize": cmd_polarize, "gapbound": cmd_gapbound, "frobenius": cmd_frobenius,
    "decompose-aut": cmd_decompose_aut, "stabilization": cmd_stabilization,
}
RING_ONLY = {"gapbound", "frobenius", "decompose-aut"}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="wgraded", description="Computations in weighted polynomial rings.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("ring", help="e.g. x:2,y:4,z:5")
    p.add_argument("ideal", nargs="?", help="generators separated by ';' or ',' (or @file)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", default="wdegrevlex", choices=["wdeglex", "wdegrevlex", "lex"])
    p.add_argument("--var-order", help="variables from largest to smallest, e.g. y,x")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--from", dest="lo", type=int)
    p.add_argument("--to", dest="hi", type=int)
    p.add_argument("--quotient", action="store_true", help="report R/I instead of I")
    p.add_argument("--all-orders", action="store_true", help="lexify under every group order")
    p.add_argument("--once", action="store_true", help="polarize once, without cutting back")
    p.add_argument("--limit", type=int, default=60, help="degree bound for stabilization")
    p.add_argument("--divisor-degree", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def _read(spec: str) -> str:
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            return fh.read()
    return spec


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        R = parse_ring(args.ring)
        I = None
        if args.command not in RING_ONLY:
            if args.ideal is None:
                raise InputError("missing ideal")
            I = parse_ideal(_read(args.ideal), R)
        rep = COMMANDS[args.command](args, R, I)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GenericityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        out.write(json.dumps({"command": args.command, "ring": str(R), "exit": rep.code, **rep.data},
                             sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(rep.text) + "\n")
    return rep.code


def main() -> None:
    sys.exit(run())
