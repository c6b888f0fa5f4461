"""Command-line interface: exact products, tables, rewriting, and suites.

Element syntax:   [sign][scalar] monomial { +|- [scalar] monomial }
  scalar   INT or INT/POSINT
  monomial [D or D^k] factors, each "v" (optionally v^k), "xiN", "delN";
           a factor-free term is a plain scalar
Word syntax:      right-nested products, e.g.  D^2(xi1.1(xi2.0(v)))
Polynomials over words combine word terms with the element term syntax.

All commands print deterministically; parse errors exit 2, verification
failures exit 1.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .cend import CendElement, brace, bracket, locality, nproduct
from .envelope import (
    AMBIENT_N,
    Report,
    axioms_suite,
    independence,
    proof_compositions,
    s2_order,
    s2_rules,
    vanishing_rules,
    verify_k_suite,
    verify_w_suite,
    virasoro_suite,
    eval_poly,
)
from .freeconf import (
    ConformalPolynomial,
    GeneratorOrder,
    NormalWord,
    RewriteRule,
    composition_intersection,
    reduce as word_reduce,
)
from .grassmann import indices_of, normal_order
from .wk import (
    EmbeddingId,
    GeneratorSymbol,
    V,
    generators,
    k_locality_table,
    locality_table,
    pd,
    phi2,
    subsets,
    xi,
)

# ---------------------------------------------------------------------------
# tokenizer and parsers

_TOKEN_RE = re.compile(r"(\d+)|(xi|del|v|D)|([+\-/^().,])|(\s+)|(.)")


def _tokenize(s: str) -> list[tuple[str, object]]:
    out: list[tuple[str, object]] = []
    for m in _TOKEN_RE.finditer(s):
        num, name, sym, ws, bad = m.groups()
        if ws:
            continue
        if bad:
            raise ValueError(f"unexpected character {bad!r}")
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("sym", sym))
    return out


class _Parser:
    def __init__(self, s: str):
        self.toks = _tokenize(s)
        self.i = 0

    def peek(self) -> tuple[str, object]:
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "")

    def take(self, kind: str | None = None, value: object = None):
        t, v = self.peek()
        if kind is not None and t != kind:
            raise ValueError(f"expected {kind}, found {v!r}" if t != "end" else f"unexpected end of input, expected {kind}")
        if value is not None and v != value:
            raise ValueError(f"expected {value!r}, found {v!r}")
        self.i += 1
        return v

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    def expect_end(self):
        if not self.at_end():
            raise ValueError(f"trailing input at {self.peek()[1]!r}")


def _parse_sign(p: _Parser, required: bool) -> int:
    t, v = p.peek()
    if t == "sym" and v in "+-":
        p.take()
        return -1 if v == "-" else 1
    if required:
        raise ValueError("expected + or - between terms")
    return 1


def _parse_scalar(p: _Parser) -> tuple[Fraction, bool]:
    t, _ = p.peek()
    if t != "num":
        return Fraction(1), False
    a = p.take("num")
    if p.peek() == ("sym", "/"):
        p.take()
        b = p.take("num")
        if b == 0:
            raise ValueError("zero denominator")
        return Fraction(a, b), True
    return Fraction(a), True


def _parse_gen(p: _Parser) -> GeneratorSymbol:
    name = p.take("name")
    if name == "v":
        return V
    if name in ("xi", "del"):
        idx = p.take("num")
        if idx < 1:
            raise ValueError(f"generator index must be positive, got {idx}")
        return xi(idx) if name == "xi" else pd(idx)
    raise ValueError(f"expected a generator, found {name!r}")


def parse_element(s: str) -> CendElement:
    p = _Parser(s)
    out = CendElement.zero()
    first = True
    while True:
        sign = _parse_sign(p, required=not first)
        coeff, has_scalar = _parse_scalar(p)
        dpow = 0
        vpow = 0
        word: list[tuple[str, int]] = []
        nfac = 0
        if p.peek() == ("name", "D"):
            p.take()
            dpow = 1
            if p.peek() == ("sym", "^"):
                p.take()
                dpow = p.take("num")
        while p.peek()[0] == "name" and p.peek()[1] != "D":
            g = _parse_gen(p)
            nfac += 1
            if g.kind == "v":
                k = 1
                if p.peek() == ("sym", "^"):
                    p.take()
                    k = p.take("num")
                vpow += k
            else:
                if p.peek() == ("sym", "^"):
                    raise ValueError("exponents are only allowed on v")
                word.append((g.kind, g.index))
        if nfac == 0 and dpow == 0 and not has_scalar:
            raise ValueError("expected a term")
        term = CendElement.from_an(normal_order(word), dpow, vpow).scale(coeff * sign)
        out = out + term
        if p.at_end():
            return out
        first = False


def format_element(x: CendElement) -> str:
    if x.is_zero():
        return "0"
    parts: list[str] = []
    for (d, xm, dm, v), c in x.items():
        mono: list[str] = []
        if d:
            mono.append("D" if d == 1 else f"D^{d}")
        mono.extend(f"xi{i}" for i in indices_of(xm))
        mono.extend(f"del{j}" for j in indices_of(dm))
        if v:
            mono.append("v" if v == 1 else f"v^{v}")
        body = " ".join(mono)
        mag = abs(c)
        if not body:
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag} {body}"
        if not parts:
            parts.append(piece if c > 0 else f"-{piece}")
        else:
            parts.append(f"+ {piece}" if c > 0 else f"- {piece}")
    return " ".join(parts)


def _parse_word_chain(p: _Parser) -> NormalWord:
    g = _parse_gen(p)
    if p.peek() == ("sym", "."):
        p.take()
        m = p.take("num")
        p.take("sym", "(")
        tail = _parse_word_chain(p)
        p.take("sym", ")")
        return NormalWord(0, (g,) + tail.letters, (m,) + tail.indices)
    return NormalWord(0, (g,), ())


def parse_word(s: str) -> NormalWord:
    p = _Parser(s)
    w = _parse_word_body(p)
    p.expect_end()
    return w


def _parse_word_body(p: _Parser) -> NormalWord:
    if p.peek() == ("name", "D"):
        p.take()
        p.take("sym", "^")
        t = p.take("num")
        p.take("sym", "(")
        inner = _parse_word_chain(p)
        p.take("sym", ")")
        return NormalWord(t, inner.letters, inner.indices)
    return _parse_word_chain(p)


def format_word(w: NormalWord) -> str:
    s = w.letters[-1].pretty()
    for a, m in zip(reversed(w.letters[:-1]), reversed(w.indices)):
        s = f"{a.pretty()}.{m}({s})"
    if w.dpow:
        s = f"D^{w.dpow}({s})"
    return s


def parse_polynomial(s: str) -> ConformalPolynomial:
    p = _Parser(s)
    out = ConformalPolynomial.zero()
    first = True
    while True:
        sign = _parse_sign(p, required=not first)
        coeff, _ = _parse_scalar(p)
        w = _parse_word_body(p)
        out = out + ConformalPolynomial.word(w, coeff * sign)
        if p.at_end():
            return out
        first = False


def format_poly(q: ConformalPolynomial) -> str:
    if q.is_zero():
        return "0"
    parts: list[str] = []
    key = lambda w: (len(w.letters), w.indices, w.letters, w.dpow)
    for w in sorted(q.terms, key=key, reverse=True):
        c = q.terms[w]
        mag = abs(c)
        piece = format_word(w) if mag == 1 else f"{mag} {format_word(w)}"
        if not parts:
            parts.append(piece if c > 0 else f"-{piece}")
        else:
            parts.append(f"+ {piece}" if c > 0 else f"- {piece}")
    return " ".join(parts)


def parse_rules(text: str, order: GeneratorOrder) -> list[RewriteRule]:
    """One relation per line; '#' starts a comment; D-bearing lines are
    rejected because rewriting substitutes only D-free leading words."""
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            poly = parse_polynomial(line)
            rules.append(RewriteRule.make(f"line{lineno}", poly, order))
        except ValueError as exc:
            raise ValueError(f"rules line {lineno}: {exc}")
    return rules


def parse_order(text: str) -> GeneratorOrder:
    letters = []
    for chunk in re.split(r"[,\s]+", text.strip()):
        if not chunk:
            continue
        p = _Parser(chunk)
        letters.append(_parse_gen(p))
        p.expect_end()
    if not letters:
        raise ValueError("empty generator order")
    return GeneratorOrder(letters)


# ---------------------------------------------------------------------------
# helpers shared by commands


def _check_rank(x: CendElement, rank: int | None):
    if rank is None:
        return
    top = 0
    for (_, xm, dm, _) in x.terms:
        if xm or dm:
            top = max(top, max(indices_of(xm), default=0), max(indices_of(dm), default=0))
    if top > rank:
        raise ValueError(f"element uses generator index {top}, beyond rank {rank}")


def _fmt_subset(I) -> str:
    return "{" + ",".join(str(i) for i in I) + "}"


def _print_gen_table(table, n: int):
    syms = generators(n)
    names = [g.pretty() for g in syms]
    width = max(len(s) for s in names) + 1
    print(" " * width + " ".join(f"{s:>{width}}" for s in names))
    for a in syms:
        row = " ".join(f"{table[(a, b)]:>{width}}" for b in syms)
        print(f"{a.pretty():>{width}}" + row)


def _print_subset_table(table, n: int):
    subs = subsets(n)
    names = [_fmt_subset(I) for I in subs]
    width = max(len(s) for s in names) + 1
    print(" " * width + " ".join(f"{s:>{width}}" for s in names))
    for I, name in zip(subs, names):
        row = " ".join(f"{table[(I, J)]:>{width}}" for J in subs)
        print(f"{name:>{width}}" + row)


def _emit_report(rep: Report, as_json: bool) -> int:
    if as_json:
        print(json.dumps(rep.to_json(), indent=2))
    else:
        for c in rep.checks:
            tail = f": {c.detail}" if c.detail else ""
            print(f"[{c.status.upper()}] {c.name}{tail}")
        where = f"n={rep.n}" + (f", map={rep.map}" if rep.map else "")
        print(f"suite {rep.suite} ({where}): {'PASSED' if rep.passed else 'FAILED'}")
    return 0 if rep.passed else 1


def _default_rules(n: int) -> list[RewriteRule]:
    return s2_rules(n) + vanishing_rules(n)


# ---------------------------------------------------------------------------
# subcommand implementations


def _cmd_product(args, op) -> int:
    x = parse_element(args.left)
    y = parse_element(args.right)
    _check_rank(x, args.rank)
    _check_rank(y, args.rank)
    print(format_element(op(x, args.n, y)))
    return 0


def _cmd_locality(args) -> int:
    if len(args.elements) == 2:
        x = parse_element(args.elements[0])
        y = parse_element(args.elements[1])
        print(locality(x, y))
        return 0
    if args.elements:
        raise ValueError("locality takes exactly two elements, or none for a table")
    if args.n is None or args.map is None:
        raise ValueError("table form needs --map and --n")
    e = EmbeddingId(args.map, args.n)
    _print_gen_table(locality_table(e), args.n)
    return 0


def _cmd_table(args) -> int:
    if args.which == "w":
        if args.n is None or args.map is None:
            raise ValueError("table w needs --map and --n")
        _print_gen_table(locality_table(EmbeddingId(args.map, args.n)), args.n)
    else:
        if args.n is None:
            raise ValueError("table k needs --n")
        _print_subset_table(k_locality_table(args.n, args.map or "phi1"), args.n)
    return 0


def _cmd_reduce(args) -> int:
    if args.n is None:
        raise ValueError("reduce needs --n")
    order = parse_order(args.order) if args.order else s2_order(args.n)
    if args.rules:
        with open(args.rules, encoding="utf-8") as fh:
            rules = parse_rules(fh.read(), order)
    else:
        rules = _default_rules(args.n)
    poly = parse_polynomial(args.polynomial)
    print(format_poly(word_reduce(poly, rules, AMBIENT_N, order)))
    return 0


def _cmd_indep(args) -> int:
    elems = [parse_element(s) for s in args.elements]
    rank, witness = independence(elems)
    if args.json:
        payload = {
            "rank": rank,
            "witness": None
            if witness is None
            else {str(k): str(c) for k, c in witness.items()},
        }
        print(json.dumps(payload, indent=2))
    elif witness is None:
        print(f"independent, rank {rank}")
    else:
        combo = " ".join(f"{'+' if c > 0 else '-'} {abs(c)}*e{k}" for k, c in witness.items())
        print(f"dependent at rank {rank}: {combo.lstrip('+ ')} = 0")
    return 0


def _cmd_verify(args) -> int:
    if args.suite == "w":
        if args.n is None:
            raise ValueError("verify w needs --n")
        rep = verify_w_suite(
            args.n,
            args.map or "phi2",
            args.tmax if args.tmax is not None else 1,
            args.len if args.len is not None else 3,
        )
    elif args.suite == "k":
        if args.n is None:
            raise ValueError("verify k needs --n")
        rep = verify_k_suite(args.n)
    elif args.suite == "vir":
        rep = virasoro_suite(
            args.tmax if args.tmax is not None else 3,
            args.len if args.len is not None else 3,
        )
    else:
        rep = axioms_suite(
            samples=args.samples if args.samples is not None else 200,
            seed=args.seed if args.seed is not None else 1,
        )
    return _emit_report(rep, args.json)


def _cmd_compose(args) -> int:
    if args.n is None:
        raise ValueError("compose needs --n")
    order = parse_order(args.order) if args.order else s2_order(args.n)
    e = phi2(args.n)
    rows = []
    ok = True
    for name, f, g, w in proof_compositions(args.n):
        comp = composition_intersection(f, g, w, AMBIENT_N, order)
        zero = eval_poly(comp, e).is_zero()
        ok = ok and zero
        rows.append((name, w, comp, zero))
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "name": name,
                        "word": format_word(w),
                        "composition": format_poly(comp),
                        "image_zero": zero,
                    }
                    for name, w, comp, zero in rows
                ],
                indent=2,
            )
        )
    else:
        for name, w, comp, zero in rows:
            print(f"{name} on {format_word(w)}:")
            print(f"  {format_poly(comp)}")
            print(f"  image under phi2: {'0' if zero else 'NONZERO'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cak", description="exact conformal-algebra toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for cmd, op in (("nprod", nproduct), ("brace", brace), ("bracket", bracket)):
        sp = sub.add_parser(cmd, help=f"{cmd} of two elements at an index")
        sp.add_argument("--rank", type=int, default=None, help="validate generator indices")
        sp.add_argument("-n", type=int, required=True, help="product index")
        sp.add_argument("left")
        sp.add_argument("right")
        sp.set_defaults(func=lambda a, op=op: _cmd_product(a, op))

    sp = sub.add_parser("locality", help="locality of two elements, or a generator table")
    sp.add_argument("--map", choices=("phi1", "phi2"), default=None)
    sp.add_argument("--n", "--rank", dest="n", type=int, default=None)
    sp.add_argument("elements", nargs="*")
    sp.set_defaults(func=_cmd_locality)

    sp = sub.add_parser("table", help="print a locality table")
    sp.add_argument("which", choices=("w", "k"))
    sp.add_argument("--map", choices=("phi1", "phi2"), default=None)
    sp.add_argument("--n", "--rank", dest="n", type=int, default=None)
    sp.set_defaults(func=_cmd_table)

    sp = sub.add_parser("reduce", help="rewrite a word polynomial to reduced form")
    sp.add_argument("--n", "--rank", dest="n", type=int, default=None)
    sp.add_argument("--rules", default=None, help="rule file, one relation per line")
    sp.add_argument("--order", default=None, help="ascending generator list")
    sp.add_argument("polynomial")
    sp.set_defaults(func=_cmd_reduce)

    sp = sub.add_parser("indep", help="rank and dependency witness of elements")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("elements", nargs="+")
    sp.set_defaults(func=_cmd_indep)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=("w", "k", "vir", "axioms"))
    sp.add_argument("--n", "--rank", dest="n", type=int, default=None)
    sp.add_argument("--map", choices=("phi1", "phi2"), default=None)
    sp.add_argument("--tmax", type=int, default=None)
    sp.add_argument("--len", type=int, default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("compose", help="overlap compositions of the rule system")
    sp.add_argument("--n", "--rank", dest="n", type=int, default=None)
    sp.add_argument("--order", default=None)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_compose)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
