import itertools

import pytest

from pfkit import catalog
from pfkit.errors import NonExhaustiveFun, ParseError, UndefinedSum
from pfkit.lift import LiftingFunction, check_equivalence_conditions
from pfkit.liftpf import (
    TABLE_ROWS,
    canonical_assignment,
    check_hom_from_lift,
    emit,
    emit_assignment,
    generate,
    parse,
    parse_assignment,
    table_row_assignment,
)
from pfkit.matroid import m8591_matrix
from pfkit.morphism import catalog_hom
from pfkit.pmatrix import PMatrix

PRODUCTS = [("GF2", "GF3"), ("GF3", "GF4"), ("GF3", "GF5"), ("GF3", "GF7"), ("GF3", "GF8"), ("GF4", "GF5")]


def brute_counts(P):
    """Generator counts from a scan of defined sums and products over the group."""
    R = P.ring
    one = R.one_element
    fun = [p for p in itertools.chain([R.zero_element], P.group_elements()) if P.member(one - p) is not None]
    nonzero = [p for p in fun if not p.is_zero()]
    sums = set()
    for p, q in itertools.product(fun, repeat=2):
        try:
            if P.add(p, q) == one:
                sums.add(frozenset([p, q]))
        except UndefinedSum:
            pass
    inverses = {frozenset([p, q]) for p, q in itertools.product(nonzero, repeat=2) if p * q == one}
    triples = {
        tuple(sorted((str(p), str(q), str(r))))
        for p, q, r in itertools.product(nonzero, repeat=3)
        if p * q * r == one
    }
    return {
        "zero-one": 2,
        "minus-one": 1 if R(-1) in fun else 0,
        "sum": len(sums),
        "inverse": len(inverses),
        "triple": len(triples),
    }


@pytest.mark.parametrize("factors", PRODUCTS)
def test_generator_counts(factors):
    P = catalog.product(*factors)
    I = generate(P)
    counts = {item: len(I.by_item(item)) for item in brute_counts(P)}
    assert counts == brute_counts(P)
    assert len(I.fundamentals) == len(P.fundamentals())


@pytest.mark.parametrize("factors", PRODUCTS)
def test_canonical_assignment_kills_ideal(factors):
    I = generate(catalog.product(*factors))
    assert check_hom_from_lift(I, I.source, canonical_assignment(I)).holds


@pytest.mark.parametrize("factors,candidate,hom_name", [r for r in TABLE_ROWS if r[2]])
def test_table_rows_bridge_to_equivalence(factors, candidate, hom_name):
    I, C, assignment = table_row_assignment(factors, candidate)
    assert check_hom_from_lift(I, C, assignment).holds
    hom = catalog_hom(hom_name).verify()
    assert hom.fun_restriction_bijective()
    assert check_equivalence_conditions(LiftingFunction.from_hom(hom)).passed


def test_wrong_assignment_fails():
    I, C, assignment = table_row_assignment(("GF3", "GF5"), "D")
    k = next(k for k, v in assignment.items() if v == C.ring(2))
    bad = dict(assignment)
    bad[k] = C.ring(-1)
    verdict = check_hom_from_lift(I, C, bad)
    assert not verdict.holds
    assert verdict.failure["kind"] == "generator"
    del bad[k]
    assert check_hom_from_lift(I, C, bad).failure["kind"] == "unassigned"


def test_restricted_ideal_is_a_subset():
    P4 = catalog.field("P4")
    a = P4.ring.gen("a")
    line = PMatrix.from_rows(P4, [[1, 1, 1], [1, a, a + 1]])
    full = generate(P4)
    small = generate(P4, [line])
    assert small.triples() < full.triples()
    assert len(small.by_item("sum")) == len(full.by_item("sum"))
    assert small.restricted_to == 1


def test_m8591_realizes_every_triple():
    P4 = catalog.field("P4")
    full = generate(P4)
    restricted = generate(P4, [m8591_matrix()])
    assert restricted.triples() == full.triples()


def test_ideal_text_round_trip():
    I = generate(catalog.product("GF3", "GF7"))
    J = parse(emit(I))
    assert J.source == I.source
    assert J.fundamentals == I.fundamentals
    assert [(g.item, g.poly) for g in J.generators] == [(g.item, g.poly) for g in I.generators]


def test_assignment_text_round_trip():
    I, C, assignment = table_row_assignment(("GF4", "GF5"), "G")
    text = emit_assignment(I, C, assignment)
    assert parse_assignment(text, I, C) == assignment
    arrows = "".join(f"{I.source.format(I.fundamentals[k])} -> {C.format(v)}\n" for k, v in assignment.items())
    assert parse_assignment(arrows, I, C) == assignment


def test_parse_errors():
    with pytest.raises(ParseError):
        parse("ideal\nfield D\n")
    with pytest.raises(ParseError):
        parse("liftideal\nfield D\nlegend ~p0 = 0\ngen bogus: ~p0\n")


def test_box_limited_field_rejected():
    with pytest.raises(NonExhaustiveFun):
        generate(catalog.field("U1m2"))
