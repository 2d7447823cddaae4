"""Text formats: element expressions and field/ring descriptors.

Element grammar (a superset of the multiplicative form used in files)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] int)?
    atom   := int | name | "(" expr ")" | "(" expr ("," expr)+ ")"

Names are bound by the ring (``a``, ``z``, ``i``, ``t``, ``w``, ``~p3``).
Tuples build elements of product rings, one component per factor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import sympy

from .errors import ParseError
from .rings import (
    FiniteField,
    IntPolynomialRing,
    ModularIntegers,
    PrimeField,
    ProductRing,
    QuadraticField,
    RationalField,
    RationalFunctionField,
    Ring,
    RingElement,
    finite_field,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|(~?[A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("int", num))
        elif name is not None:
            tokens.append(("name", name))
        elif op in "+-*/^(),":
            tokens.append(("op", op))
        else:
            raise ParseError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return tokens


class _ElementParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'} at position {self.pos} in {self.text!r}")
        self.pos += 1
        return tok

    def expr(self, ring: Ring) -> RingElement:
        acc = self.term(ring)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term(ring)
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self, ring):
        acc = self.unary(ring)
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary(ring)
            acc = acc * rhs if op == "*" else acc / rhs
        return acc

    def unary(self, ring):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary(ring)
        return self.power(ring)

    def power(self, ring):
        base = self.atom(ring)
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            base = base ** (sign * int(val))
        return base

    def atom(self, ring):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return ring(int(val))
        if kind == "name":
            self.take()
            if val not in ring.names:
                raise ParseError(f"unknown name {val!r} for {ring.descriptor()}")
            return ring.gen(val)
        if (kind, val) == ("op", "("):
            self.take()
            if isinstance(ring, ProductRing):
                start = self.pos
                try:
                    first = self.expr(ring.factors[0])
                except ParseError:
                    first = None
                if first is not None and self.peek() == ("op", ","):
                    comps = [first]
                    for R in ring.factors[1:]:
                        self.take(",")
                        comps.append(self.expr(R))
                    self.take(")")
                    return ring.make(comps)
                self.pos = start
            inner = self.expr(ring)
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_element(ring: Ring, text: str) -> RingElement:
    p = _ElementParser(text)
    if not p.tokens:
        raise ParseError("empty element")
    try:
        value = p.expr(ring)
    except (ZeroDivisionError, ArithmeticError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"cannot evaluate {text!r}: {exc}") from exc
    if p.pos != len(p.tokens):
        raise ParseError(f"trailing input in {text!r}")
    return value


def format_element(x: RingElement) -> str:
    return x.ring.format(x.v)


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses and brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        parts.append(tail)
    return parts


# ---------------------------------------------------------------------------
# Ring and field descriptors
# ---------------------------------------------------------------------------


def parse_ring(desc: str) -> Ring:
    if " x " in desc:
        return ProductRing(tuple(parse_ring(part) for part in desc.split(" x ")))
    d = desc.strip().replace(" ", "")
    if d == "Q":
        return RationalField()
    m = re.fullmatch(r"(Q|GF(\d+))\(([A-Za-z])\)", d)
    if m:
        base = RationalField() if m.group(1) == "Q" else PrimeField(int(m.group(2)))
        return RationalFunctionField(base, m.group(3))
    m = re.fullmatch(r"GF(\d+)", d)
    if m:
        try:
            return finite_field(int(m.group(1)))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    m = re.fullmatch(r"Z/(\d+)", d)
    if m:
        return ModularIntegers(int(m.group(1)))
    m = re.fullmatch(r"Q\[([A-Za-z])\]/\((.+)\)", d)
    if m:
        var = m.group(1)
        x = sympy.Symbol(var)
        try:
            poly = sympy.Poly(sympy.sympify(m.group(2).replace("^", "**"), locals={var: x}), x)
        except (sympy.SympifyError, sympy.PolynomialError) as exc:
            raise ParseError(f"bad minimal polynomial in {desc!r}") from exc
        coeffs = poly.all_coeffs()
        if len(coeffs) != 3 or coeffs[0] != 1 or not all(c.is_integer for c in coeffs):
            raise ParseError(f"minimal polynomial must be monic quadratic with integer coefficients: {desc!r}")
        return QuadraticField(int(-coeffs[1]), int(-coeffs[2]), var)
    m = re.fullmatch(r"Z\[~p0\.\.~p(\d+)\]", d)
    if m:
        return IntPolynomialRing(int(m.group(1)) + 1)
    raise ParseError(f"unknown ring descriptor {desc!r}")


def parse_field(desc: str):
    """Parse ``<catalog name>``, ``product f1 f2 ...`` or ``custom ring=.. gens=..``."""
    from . import catalog
    from .fields import PartialField

    text = desc.strip()
    if text.startswith("field "):
        text = text[len("field ") :].strip()
    if text.startswith("product "):
        parts = text[len("product ") :].split()
        if len(parts) < 2:
            raise ParseError("a product needs at least two factors")
        return catalog.product(*(parse_field(p) for p in parts))
    if text.startswith("custom "):
        m = re.fullmatch(r"custom\s+ring=(.+?)\s+gens=(.*)", text)
        if not m:
            m = re.fullmatch(r"custom\s+ring=(.+?)\s*", text)
            if not m:
                raise ParseError(f"bad custom field descriptor {desc!r}")
            gens_text = ""
        else:
            gens_text = m.group(2)
        ring = parse_ring(m.group(1))
        gens = [parse_element(ring, g) for g in split_top_level(gens_text)] if gens_text.strip() else []
        return PartialField(ring, gens)
    try:
        return catalog.field(text)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"unknown field {desc!r}") from exc


# ---------------------------------------------------------------------------
# Matrix files
# ---------------------------------------------------------------------------


def emit_matrix(A) -> str:
    """``pmatrix`` / ``field`` / ``rows`` / ``cols`` header, then one ``row x: e | e`` line per row."""
    lines = ["pmatrix", f"field {A.field.descriptor()}", "rows " + " ".join(A.rows), "cols " + " ".join(A.cols)]
    for x, row in zip(A.rows, A.format_rows()):
        lines.append(f"row {x}: " + " | ".join(row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, *, check: bool = True):
    from .pmatrix import PMatrix

    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "pmatrix":
        raise ParseError("matrix file must start with 'pmatrix'")
    field = rows = cols = None
    body: dict[str, list[str]] = {}
    for ln in lines[1:]:
        head, _, rest = ln.partition(" ")
        if head == "field":
            field = parse_field(rest)
        elif head == "rows":
            rows = rest.split()
        elif head == "cols":
            cols = rest.split()
        elif head == "row":
            label, sep, ents = rest.partition(":")
            if not sep:
                raise ParseError(f"row line needs 'label:' in {ln!r}")
            label = label.strip()
            if label in body:
                raise ParseError(f"row {label} given twice")
            body[label] = [e.strip() for e in ents.split("|")]
        else:
            raise ParseError(f"unknown line {ln!r}")
    if field is None or rows is None or cols is None:
        raise ParseError("matrix file needs field, rows and cols lines")
    if set(body) != set(rows):
        raise ParseError("row lines do not match the rows header")
    data = []
    for x in rows:
        if len(body[x]) != len(cols):
            raise ParseError(f"row {x} has {len(body[x])} entries, expected {len(cols)}")
        data.append([parse_element(field.ring, e) for e in body[x]])
    return PMatrix(field, rows, cols, data, check=check)


# ---------------------------------------------------------------------------
# Lifting tables
# ---------------------------------------------------------------------------


def emit_lift_table(lf) -> str:
    return "".join(f"{p} -> {q}\n" for p, q in lf.describe())


def parse_lift_table(text: str, hom):
    """Lines ``<fundamental of the base> -> <element of the lifted field>``."""
    from .lift import LiftingFunction

    table = {}
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        if "->" not in ln:
            raise ParseError(f"bad lift-table line {ln!r}")
        p, _, q = ln.partition("->")
        table[parse_element(hom.target.ring, p.strip())] = parse_element(hom.source.ring, q.strip())
    return LiftingFunction.from_table(hom, table)
