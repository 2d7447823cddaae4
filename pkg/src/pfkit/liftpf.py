"""The lift partial field: its relation ideal over Z and hom checks by evaluation.

One indeterminate ~pK per fundamental element (K indexes fun(P) in sorted
order).  The ideal is generated by
  ~0, ~1 - 1, ~(-1) + 1 (when -1 is fundamental),
  ~p + ~q - 1 for p + q = 1, ~p*~q - 1 for pq = 1, ~p*~q*~r - 1 for pqr = 1.
The restricted variant keeps only triples with [[1,1,1],[1,p,q^-1]] a minor
of some matrix in the given set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from .errors import NonExhaustiveFun, ParseError
from .fields import PartialField
from .pmatrix import PMatrix
from .rings import IntPolynomialRing, RingElement

ITEMS = ("zero-one", "minus-one", "sum", "inverse", "triple")


@dataclass(frozen=True)
class IdealGenerator:
    item: str
    poly: RingElement
    support: tuple  # indices of the fundamental elements involved

    def format(self) -> str:
        return self.poly.ring.format(self.poly.v)


@dataclass
class LiftIdeal:
    source: PartialField
    fundamentals: tuple
    ring: IntPolynomialRing
    generators: list = dc_field(default_factory=list)
    restricted_to: int | None = None  # number of matrices in the restriction set

    def index(self, p) -> int:
        return self.fundamentals.index(self.source.ring(p))

    def symbol(self, p) -> str:
        return f"{self.ring.prefix}{self.index(p)}"

    def by_item(self, item: str) -> list[IdealGenerator]:
        return [g for g in self.generators if g.item == item]

    def triples(self) -> set[frozenset]:
        return {tuple(sorted(g.support)) for g in self.by_item("triple")}

    def legend(self) -> list[tuple[str, str]]:
        return [(f"{self.ring.prefix}{k}", self.source.format(p)) for k, p in enumerate(self.fundamentals)]


def realized_pairs(matrices: Iterable[PMatrix], depth: int | None = None) -> set[tuple]:
    """All (a, b) with [[1,1,1],[1,a,b]] a minor (up to labels) of some matrix."""
    out = set()
    for A in matrices:
        closure, _ = A.pivot_closure(depth)
        for M, _ in closure.values():
            for rs in itertools.combinations(M.rows, 2):
                for cs in itertools.combinations(M.cols, 3):
                    if any(M[x, y].is_zero() for x in rs for y in cs):
                        continue
                    for r0, r1 in (rs, rs[::-1]):
                        for c0, c1, c2 in itertools.permutations(cs):
                            base = M[r0, c0] / M[r1, c0]
                            a = base * M[r1, c1] / M[r0, c1]
                            b = base * M[r1, c2] / M[r0, c2]
                            out.add((a, b))
    return out


def generate(P: PartialField, restrict: Sequence[PMatrix] | None = None) -> LiftIdeal:
    fun = P.fundamentals()
    if not fun.exhaustive:
        raise NonExhaustiveFun(f"fun({P.descriptor()}) is only known inside a box")
    elems = tuple(fun.sorted())
    R = IntPolynomialRing(len(elems))
    idx = {p: k for k, p in enumerate(elems)}
    var = [R.variable(k) for k in range(len(elems))]
    one, zero = P.ring.one_element, P.ring.zero_element
    I = LiftIdeal(P, elems, R, restricted_to=None if restrict is None else len(restrict))
    add = I.generators.append

    add(IdealGenerator("zero-one", var[idx[zero]], (idx[zero],)))
    add(IdealGenerator("zero-one", var[idx[one]] - 1, (idx[one],)))
    minus = P.ring(-1)
    if minus in idx:
        add(IdealGenerator("minus-one", var[idx[minus]] + 1, (idx[minus],)))

    seen = set()
    for p in elems:
        q = one - p
        key = tuple(sorted((idx[p], idx[q])))
        if key not in seen:
            seen.add(key)
            add(IdealGenerator("sum", var[key[0]] + var[key[1]] - 1, key))

    seen = set()
    nonzero = [p for p in elems if not p.is_zero()]
    for p in nonzero:
        q = p.inverse()
        if q in idx:
            key = tuple(sorted((idx[p], idx[q])))
            if key not in seen:
                seen.add(key)
                add(IdealGenerator("inverse", var[key[0]] * var[key[1]] - 1, key))

    realized = realized_pairs(restrict) if restrict is not None else None
    accepted: dict[tuple, bool] = {}
    for p, q in itertools.product(nonzero, repeat=2):
        r = (p * q).inverse()
        if r not in idx:
            continue
        key = tuple(sorted((idx[p], idx[q], idx[r])))
        ok = realized is None or (p, q.inverse()) in realized
        accepted[key] = accepted.get(key, False) or ok
    for key in sorted(accepted):
        if accepted[key]:
            a, b, c = key
            add(IdealGenerator("triple", var[a] * var[b] * var[c] - 1, key))
    return I


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


@dataclass
class HomVerdict:
    holds: bool
    checked: int
    failure: dict | None = None


def canonical_assignment(I: LiftIdeal) -> dict[int, RingElement]:
    return {k: p for k, p in enumerate(I.fundamentals)}


def assignment_from_lift(I: LiftIdeal, lf) -> dict[int, RingElement]:
    """~p -> p^ for a lifting function whose base is the ideal's source."""
    return {k: lf.up(p) for k, p in enumerate(I.fundamentals)}


def check_hom_from_lift(I: LiftIdeal, candidate: PartialField, assignment: Mapping) -> HomVerdict:
    """Does ~p -> assignment[p] kill every generator (in the candidate's ring)?"""
    values = {}
    for k in range(len(I.fundamentals)):
        if k not in assignment:
            return HomVerdict(False, 0, {"kind": "unassigned", "symbol": f"{I.ring.prefix}{k}"})
        v = candidate.ring(assignment[k])
        if candidate.member(v) is None:
            return HomVerdict(False, 0, {"kind": "not-member", "symbol": f"{I.ring.prefix}{k}", "value": str(v)})
        values[k] = v
    for n, g in enumerate(I.generators):
        val = I.ring.evaluate(g.poly, values, candidate.ring)
        if not val.is_zero():
            return HomVerdict(
                False,
                n + 1,
                {"kind": "generator", "item": g.item, "generator": g.format(), "value": candidate.format(val)},
            )
    return HomVerdict(True, len(I.generators))


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def emit(I: LiftIdeal) -> str:
    lines = ["liftideal", f"field {I.source.descriptor()}"]
    if I.restricted_to is not None:
        lines.append(f"restricted {I.restricted_to}")
    for sym, text in I.legend():
        lines.append(f"legend {sym} = {text}")
    for g in I.generators:
        lines.append(f"gen {g.item}: {g.format()}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> LiftIdeal:
    from .formats import parse_element, parse_field

    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "liftideal":
        raise ParseError("ideal file must start with 'liftideal'")
    P = None
    restricted = None
    legend: list = []
    gens_text: list = []
    for ln in lines[1:]:
        head, _, rest = ln.partition(" ")
        if head == "field":
            P = parse_field(rest)
        elif head == "restricted":
            restricted = int(rest)
        elif head == "legend":
            sym, _, val = rest.partition("=")
            legend.append((sym.strip(), val.strip()))
        elif head == "gen":
            item, _, poly = rest.partition(":")
            if item.strip() not in ITEMS:
                raise ParseError(f"unknown generator item {item!r}")
            gens_text.append((item.strip(), poly.strip()))
        else:
            raise ParseError(f"unknown line {ln!r}")
    if P is None:
        raise ParseError("missing field line")
    R = IntPolynomialRing(len(legend))
    elems = []
    for k, (sym, val) in enumerate(legend):
        if sym != f"{R.prefix}{k}":
            raise ParseError(f"legend out of order at {sym}")
        elems.append(parse_element(P.ring, val))
    I = LiftIdeal(P, tuple(elems), R, restricted_to=restricted)
    for item, poly in gens_text:
        x = parse_element(R, poly)
        I.generators.append(IdealGenerator(item, x, tuple(sorted(R.variables(x)))))
    return I


def parse_assignment(text: str, I: LiftIdeal, candidate: PartialField) -> dict[int, RingElement]:
    """Lines ``~pK = <element>`` (or ``<fundamental> -> <element>``)."""
    from .formats import parse_element

    out = {}
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        if "->" in ln:
            src, _, val = ln.partition("->")
            k = I.index(parse_element(I.source.ring, src.strip()))
        elif "=" in ln:
            sym, _, val = ln.partition("=")
            sym = sym.strip()
            if not sym.startswith(I.ring.prefix):
                raise ParseError(f"bad symbol {sym!r}")
            k = int(sym[len(I.ring.prefix) :])
        else:
            raise ParseError(f"bad assignment line {ln!r}")
        out[k] = parse_element(candidate.ring, val.strip())
    return out


def emit_assignment(I: LiftIdeal, candidate: PartialField, assignment: Mapping) -> str:
    return "".join(f"{I.ring.prefix}{k} = {candidate.format(assignment[k])}\n" for k in sorted(assignment))


# ---------------------------------------------------------------------------
# Table rows: (lifted-from product, candidate lift, catalog hom candidate -> product)
# ---------------------------------------------------------------------------

TABLE_ROWS = (
    (("GF2", "GF3"), "U0", None),
    (("GF3", "GF4"), "S", "S->GF3xGF4"),
    (("GF3", "GF5"), "D", "D->GF3xGF5"),
    (("GF3", "GF7"), "Y", "Y->GF3xGF7"),
    (("GF3", "GF8"), "U1", "U1->GF3xGF8"),
    (("GF4", "GF5"), "G", "G->GF4xGF5"),
)


def table_row_assignment(factors: Sequence[str], candidate: str):
    """(ideal, candidate field, assignment) for one row of the lift table."""
    from .catalog import field, product
    from .lift import LiftingFunction
    from .morphism import Morphism, catalog_hom

    P = product(*factors)
    C = field(candidate)
    hom_name = next((h for f, c, h in TABLE_ROWS if tuple(f) == tuple(factors) and c == candidate), None)
    if hom_name is None:
        hom = Morphism(C, P, ()).verify()
    else:
        hom = catalog_hom(hom_name).verify()
    lf = LiftingFunction.from_hom(hom)
    I = generate(P)
    return I, C, assignment_from_lift(I, lf)
