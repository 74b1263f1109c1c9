"""The line-oriented ``.stx`` presentation format.

::

    ; Example: polynomial superalgebra
    scalar QQ
    gen x even
    gen theta odd

    delta2
      x -> x # x + theta # theta
      theta -> x # theta + theta # x

Blocks ``delta2``, ``delta3``, ``counit`` and ``cozero`` hold one
``<gen> -> <expr>`` line per generator name (inverse names included).  In an
expression ``+``/``-`` bind loosest, then the tensor separator ``#``, then
``*``; exponents may be negative for invertible generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..cotruss import CotrussPresentation
from ..errors import StxError, WellDefinednessError
from ..homs import GenHom, TensorTarget, check_well_defined
from ..superalg import EVEN, ODD, QQ, GF, Field, Generator, GeneratorSet, SuperPoly
from ..tensor import TensorElement

BLOCKS = {"delta2": 2, "delta3": 3, "counit": 0, "cozero": 0}

_TOKEN = re.compile(r"\s*(?:(?P<arrow>->)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*#^/()]))")


@dataclass(frozen=True)
class Tok:
    kind: str  # "num" | "name" | "op" | "arrow" | "end"
    text: str
    col: int  # 1-based


def tokenize(line: str, lineno: int) -> list[Tok]:
    code = line.split(";", 1)[0]
    out: list[Tok] = []
    pos = 0
    while pos < len(code):
        if code[pos:].strip() == "":
            break
        m = _TOKEN.match(code, pos)
        if not m:
            col = pos + len(code[pos:]) - len(code[pos:].lstrip()) + 1
            raise StxError(f"unexpected character {code[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        out.append(Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(Tok("end", "", len(code.rstrip()) + 1))
    return out


class _Expr:
    """Recursive-descent parser for one right-hand side."""

    def __init__(self, toks: list[Tok], i: int, lineno: int, gens: GeneratorSet, field: Field, arity: int):
        self.toks, self.i, self.line = toks, i, lineno
        self.gens, self.field, self.arity = gens, field, arity

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def err(self, msg: str, tok: Tok | None = None) -> StxError:
        tok = tok or self.cur
        return StxError(msg, self.line, tok.col)

    def eat(self, text: str) -> bool:
        if self.cur.kind in ("op", "arrow") and self.cur.text == text:
            self.i += 1
            return True
        return False

    def parse(self) -> TensorElement:
        out = self.tensor_sum()
        if self.cur.kind != "end":
            raise self.err(f"unexpected {self.cur.text!r}")
        return out

    def tensor_sum(self) -> TensorElement:
        total = TensorElement.zero(self.gens, self.field, self.arity)
        sign = 1
        if self.eat("-"):
            sign = -1
        else:
            self.eat("+")
        while True:
            total = total + self.tensor_term().scale(sign)
            if self.eat("+"):
                sign = 1
            elif self.eat("-"):
                sign = -1
            else:
                return total

    def tensor_term(self) -> TensorElement:
        start = self.cur
        factors = [self.product()]
        while self.eat("#"):
            factors.append(self.product())
        if self.arity == 0:
            if len(factors) != 1:
                raise self.err("scalar block expects a scalar, not a tensor", start)
            p = factors[0]
            if any(not m.is_unit for m in p.terms):
                raise self.err("scalar block expects a scalar, found generators", start)
            return TensorElement(self.gens, self.field, 0, {(): p.scalar_part()})
        if len(factors) != self.arity:
            raise self.err(f"term has {len(factors)} tensor factor(s), block needs {self.arity}", start)
        return TensorElement.pure(*factors)

    def product(self) -> SuperPoly:
        acc = self.atom()
        while self.eat("*"):
            acc = acc * self.atom()
        return acc

    def atom(self) -> SuperPoly:
        tok = self.cur
        if tok.kind == "num":
            self.i += 1
            value = Fraction(int(tok.text))
            if self.eat("/"):
                den = self.cur
                if den.kind != "num":
                    raise self.err("expected a denominator")
                self.i += 1
                if int(den.text) == 0:
                    raise self.err("zero denominator", den)
                value = value / int(den.text)
            try:
                c = self.field.coerce(value)
            except ArithmeticError as exc:
                raise self.err(str(exc), tok) from None
            return SuperPoly.constant(self.gens, self.field, c)
        if tok.kind == "name":
            self.i += 1
            power = 1
            if self.eat("^"):
                neg = self.eat("-")
                num = self.cur
                if num.kind != "num":
                    raise self.err("expected an integer exponent")
                self.i += 1
                power = -int(num.text) if neg else int(num.text)
            try:
                self.gens.locate(tok.text)
            except KeyError:
                raise self.err(f"unknown generator {tok.text!r}", tok) from None
            if power < 0:
                par, idx, sgn = self.gens.locate(tok.text)
                if par == ODD or not self.gens.even[idx].invertible:
                    raise self.err(f"negative power of non-invertible generator {tok.text!r}", tok)
            if self.gens.parity_of(tok.text) == ODD and power > 1:
                return SuperPoly(self.gens, self.field, {})
            return SuperPoly.gen(self.gens, self.field, tok.text, power)
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            inner = _Expr(self.toks, self.i, self.line, self.gens, self.field, 1)
            t = inner.tensor_sum()
            self.i = inner.i
            if not self.eat(")"):
                raise self.err("expected ')'")
            return t.to_poly()
        raise self.err("expected a number, a generator or '('" if tok.kind != "end" else "unexpected end of expression")


def _field(toks: list[Tok], lineno: int) -> Field:
    if len(toks) >= 2 and toks[1].text == "QQ" and toks[2].kind == "end":
        return QQ
    if len(toks) >= 3 and toks[1].text == "FP" and toks[2].kind == "num" and toks[3].kind == "end":
        try:
            return GF(int(toks[2].text))
        except ValueError as exc:
            raise StxError(str(exc), lineno, toks[2].col) from None
    col = toks[1].col if len(toks) > 1 else 1
    raise StxError("expected 'scalar QQ' or 'scalar FP <prime>'", lineno, col)


def _gen(toks: list[Tok], lineno: int) -> Generator:
    words = [t for t in toks if t.kind != "end"]
    if len(words) < 3 or words[1].kind != "name":
        raise StxError("expected 'gen <name> even [invertible <inverse>]' or 'gen <name> odd'", lineno, toks[-1].col)
    name, par = words[1].text, words[2]
    if par.text == "odd":
        if len(words) > 3:
            if words[3].text == "invertible":
                raise StxError(f"odd generator {name!r} cannot be invertible", lineno, words[3].col)
            raise StxError(f"unexpected {words[3].text!r}", lineno, words[3].col)
        return Generator(name, ODD)
    if par.text != "even":
        raise StxError(f"parity must be 'even' or 'odd', got {par.text!r}", lineno, par.col)
    if len(words) == 3:
        return Generator(name, EVEN)
    if words[3].text != "invertible" or len(words) != 5 or words[4].kind != "name":
        raise StxError("expected 'invertible <inverse name>'", lineno, words[3].col)
    return Generator(name, EVEN, words[4].text)


def parse_stx(text: str, name: str = "", field: Field | None = None) -> CotrussPresentation:
    """Parse ``.stx`` text; ``field`` overrides the declared scalars (coefficients are coerced)."""
    lines = [(n, tokenize(raw, n)) for n, raw in enumerate(text.splitlines(), 1)]
    declared: Field | None = None
    gens: list[Generator] = []
    names: dict[str, int] = {}
    body: list[tuple[int, list[Tok]]] = []
    in_body = False
    for n, toks in lines:
        head = toks[0]
        if head.kind == "end":
            continue
        if head.kind == "name" and head.text == "scalar" and toks[1].kind != "arrow":
            if in_body or declared is not None:
                raise StxError("'scalar' must appear once, before any block", n, head.col)
            declared = _field(toks, n)
        elif head.kind == "name" and head.text == "gen" and toks[1].kind != "arrow":
            if in_body:
                raise StxError("generators must be declared before the structure maps", n, head.col)
            g = _gen(toks, n)
            for nm in filter(None, (g.name, g.inverse)):
                if nm in names:
                    raise StxError(f"duplicate generator name {nm!r} (first declared on line {names[nm]})", n, head.col)
                names[nm] = n
            gens.append(g)
        else:
            in_body = True
            body.append((n, toks))
    gset = GeneratorSet(gens)
    fld = field or declared or QQ

    blocks: dict[str, dict[str, object]] = {}
    where: dict[tuple[str, str], int] = {}
    block_line: dict[str, int] = {}
    current: str | None = None
    for n, toks in body:
        head = toks[0]
        if head.kind == "name" and head.text in BLOCKS and toks[1].kind == "end":
            if head.text in blocks:
                raise StxError(f"block {head.text!r} appears twice (first on line {block_line[head.text]})", n, head.col)
            current = head.text
            blocks[current] = {}
            block_line[current] = n
            continue
        if head.kind != "name" or toks[1].kind != "arrow":
            raise StxError("expected '<gen> -> <expression>' or a block name", n, head.col)
        if current is None:
            raise StxError("image given outside a block", n, head.col)
        if head.text not in names:
            raise StxError(f"unknown generator {head.text!r}", n, head.col)
        if head.text in blocks[current]:
            raise StxError(f"second image for {head.text!r} in {current}", n, head.col)
        blocks[current][head.text] = _Expr(toks, 2, n, gset, fld, BLOCKS[current]).parse()
        where[(current, head.text)] = n

    for req in ("delta2", "delta3"):
        if req not in blocks:
            last = lines[-1][0] if lines else 1
            raise StxError(f"missing block {req!r}", last, 1)
    homs = {}
    for blk, imgs in blocks.items():
        missing = [nm for nm in gset.names() if nm not in imgs]
        if missing:
            raise StxError(f"{blk} gives no image for {', '.join(missing)}", block_line[blk], 1)
        h = GenHom(gset, fld, TensorTarget(gset, fld, BLOCKS[blk]), imgs)
        try:
            check_well_defined(h)
        except WellDefinednessError as exc:
            raise StxError(f"{blk} is not a superalgebra map: {exc}", where[(blk, exc.generator)], 1) from None
        homs[blk] = h
    return CotrussPresentation(
        gset, fld, homs["delta2"], homs["delta3"], homs.get("counit"), homs.get("cozero"), name=name
    )


def render_stx(P: CotrussPresentation) -> str:
    """Canonical text; ``parse_stx(render_stx(P)) == P``."""
    out = []
    if P.name:
        out.append(f"; {P.name}")
    out.append("scalar QQ" if not P.field.finite else f"scalar FP {P.field.p}")
    for g in P.gens:
        if g.parity == ODD:
            out.append(f"gen {g.name} odd")
        elif g.invertible:
            out.append(f"gen {g.name} even invertible {g.inverse}")
        else:
            out.append(f"gen {g.name} even")
    for blk, h in (("delta2", P.delta2), ("delta3", P.delta3), ("counit", P.counit), ("cozero", P.cozero)):
        if h is None:
            continue
        out.append("")
        out.append(blk)
        for nm in P.gens.names():
            out.append(f"  {nm} -> {render_element(h.images[nm])}")
    return "\n".join(out) + "\n"


def render_element(t: TensorElement) -> str:
    if t.arity == 0:
        return t.field.render(t.to_scalar())
    return str(t)


def parse_morphism(text: str, source: CotrussPresentation, target: CotrussPresentation) -> GenHom:
    """``<gen> -> <expr>`` lines giving ``phi: source -> target`` on every source name."""
    imgs: dict[str, TensorElement] = {}
    where: dict[str, int] = {}
    src = source.gens
    for n, raw in enumerate(text.splitlines(), 1):
        toks = tokenize(raw, n)
        if toks[0].kind == "end":
            continue
        head = toks[0]
        if head.kind != "name" or toks[1].kind != "arrow":
            raise StxError("expected '<gen> -> <expression>'", n, head.col)
        if head.text not in src.names():
            raise StxError(f"{head.text!r} is not a generator of the source", n, head.col)
        if head.text in imgs:
            raise StxError(f"second image for {head.text!r}", n, head.col)
        imgs[head.text] = _Expr(toks, 2, n, target.gens, target.field, 1).parse()
        where[head.text] = n
    missing = [nm for nm in src.names() if nm not in imgs]
    if missing:
        raise StxError(f"no image for {', '.join(missing)}", max(len(text.splitlines()), 1), 1)
    h = GenHom(src, source.field, TensorTarget(target.gens, target.field, 1), imgs)
    try:
        check_well_defined(h)
    except WellDefinednessError as exc:
        raise StxError(f"not a superalgebra map: {exc}", where[exc.generator], 1) from None
    return h


def render_morphism(phi: GenHom) -> str:
    return "".join(f"{nm} -> {phi.images[nm]}\n" for nm in phi.source.names())
