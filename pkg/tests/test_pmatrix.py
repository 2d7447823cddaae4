import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import brute_valid, cofactor_det, element_pool, field_of, random_forest, random_square, random_valid_matrix
from pfkit import catalog
from pfkit.errors import NotACycle, NotAForest, UndefinedDeterminant, UndefinedEntry, ZeroPivot
from pfkit.matroid import m8591_matrix, matroid_from
from pfkit.pmatrix import PMatrix

FIELDS = ["D", "S", "GF7", "GF3xGF5"]


def seeds():
    return st.integers(0, 10**6)


@pytest.mark.parametrize("name", FIELDS)
def test_validate_matches_brute_force(name):
    F = field_of(name)
    pool = element_pool(name) + [F.ring.zero_element]

    @given(seeds())
    def check(seed):
        rng = random.Random(seed)
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        A = PMatrix(F, [f"r{i}" for i in range(m)], [f"c{j}" for j in range(n)],
                    [[rng.choice(pool) for _ in range(n)] for _ in range(m)], check=False)
        v = A.validate()
        assert v.valid == brute_valid(A)
        if not v.valid:
            d = A.ring_det(v.rows, v.cols)
            assert d == v.value and F.member(d) is None

    check()


@pytest.mark.parametrize("name", ["D", "S"])
def test_pivot_determinant_identity_all_pivots(name):
    rng = random.Random(29)
    for _ in range(25):
        A = random_square(rng, name, 4)
        d = A.det()
        for i, x in enumerate(A.rows):
            for j, y in enumerate(A.cols):
                if A[x, y].is_zero():
                    continue
                P = A.pivot(x, y)
                assert P.is_valid()
                rest = P.delete([x, y])
                assert d == (-1) ** (i + j) * A[x, y] * rest.det()


@pytest.mark.parametrize("name", FIELDS)
def test_pivot_is_an_involution(name):
    rng = random.Random(3)
    for _ in range(20):
        A = random_valid_matrix(rng, name, 3, 4)
        if A is None:
            continue
        for x, y in A.support_edges():
            assert A.pivot(x, y).pivot(y, x) == A


@pytest.mark.parametrize("name", FIELDS)
def test_support_graph_is_fundamental_graph(name):
    rng = random.Random(5)
    for _ in range(15):
        A = random_valid_matrix(rng, name, 3, 4)
        if A is None:
            continue
        M = matroid_from(A)
        G = M.fundamental_graph(A.rows)
        assert {frozenset(e) for e in G.edges} == {frozenset(e) for e in A.support_edges()}


@pytest.mark.parametrize("name", FIELDS)
def test_normalize_is_scaling(name):
    rng = random.Random(11)
    for _ in range(20):
        A = random_valid_matrix(rng, name, 3, 4)
        if A is None:
            continue
        forest = random_forest(rng, A)
        N, rs, cs = A.normalize_with_scales(forest)
        for x, y in forest:
            assert N[x, y].is_one()
        for x in A.rows:
            for y in A.cols:
                assert N[x, y] == rs[x] * A[x, y] * cs[y]
                assert A.field.member(rs[x]) is not None and A.field.member(cs[y]) is not None
        assert N.scaling_equivalent(A)
        assert N.canonical_key() == A.canonical_key()


def test_subdet_reports_undefined_intermediate():
    D = catalog.field("D")
    A = PMatrix.from_rows(D, [[1, 1], [1, -2]], check=False)
    with pytest.raises(UndefinedDeterminant):
        A.subdet()
    assert A.ring_det() == D.ring(-3)


def test_construction_checks_entries():
    with pytest.raises(UndefinedEntry):
        PMatrix.from_rows(catalog.field("D"), [[1, 3]])


def test_zero_pivot_rejected():
    A = PMatrix.from_rows(catalog.field("GF2"), [[1, 0], [1, 1]])
    with pytest.raises(ZeroPivot):
        A.pivot(A.rows[0], A.cols[1])


def test_forest_checks():
    A = PMatrix.from_rows(catalog.field("GF3"), [[1, 1], [1, 2]])
    r0, r1 = A.rows
    c0, c1 = A.cols
    with pytest.raises(NotAForest):
        A.normalize([(r0, c0), (r0, c1), (r1, c0), (r1, c1)])
    with pytest.raises(NotAForest):
        A.normalize([(r0, c0)])


def test_cycle_signature_on_a_square():
    D = catalog.field("D")
    A = PMatrix.from_rows(D, [[1, 1], [1, 2]])
    r0, r1 = A.rows
    c0, c1 = A.cols
    assert A.cycle_signature([r0, c0, r1, c1]) == D.ring(2)
    assert A.cycle_signature([r0, c1, r1, c0]) == D.ring(1) / 2
    with pytest.raises(NotACycle):
        A.cycle_signature([r0, c0, r1])


def test_cycle_signature_invariants():
    rng = random.Random(23)
    for _ in range(20):
        A = random_valid_matrix(rng, "GF3xGF5", 3, 4, zero_rate=0.3)
        if A is None:
            continue
        N = A.normalize(random_forest(rng, A))
        for cyc in A.induced_cycles():
            sigma = A.cycle_signature(cyc)
            back = (cyc[0],) + tuple(reversed(cyc[1:]))
            assert A.cycle_signature(back) == sigma.inverse()
            assert N.cycle_signature(cyc) == sigma


def test_induced_cycles_are_chordless():
    rng = random.Random(17)
    for _ in range(10):
        A = random_valid_matrix(rng, "GF3xGF5", 4, 5, zero_rate=0.4)
        if A is None:
            continue
        edges = set(A.support_edges())
        for cyc in A.induced_cycles():
            members = set(cyc)
            inside = {(x, y) for x, y in edges if x in members and y in members}
            assert len(inside) == len(cyc)


def test_pivot_closure_keys_are_bases():
    A = PMatrix.from_rows(catalog.field("GF2"), [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]])
    closure, exhausted = A.pivot_closure()
    assert exhausted
    assert set(closure) == matroid_from(A).basis_sets()
    for key, (M, path) in closure.items():
        assert frozenset(M.rows) == key
        B = A
        for x, y in path:
            B = B.pivot(x, y)
        assert B == M


def test_all_minors_agree_with_cofactor():
    rng = random.Random(2)
    A = random_valid_matrix(rng, "D", 3, 4)
    for R, C, d in A.all_minors():
        assert d == cofactor_det([[A.entries[i][j] for j in C] for i in R], A.field.ring)
    assert sum(1 for _ in A.all_minors()) == sum(
        len(list(itertools.combinations(range(3), k))) * len(list(itertools.combinations(range(4), k))) for k in (1, 2, 3)
    )


def test_cross_ratios():
    D = catalog.field("D")
    fun = set(D.fundamentals())
    ones = PMatrix.from_rows(D, [[1, 1, 1], [1, 1, 1]])
    assert ones.cross_ratios() == {D.ring(0), D.ring(1)}
    two = D.ring(2)
    A = PMatrix.from_rows(D, [[1, 1], [two, 1]])
    found = A.cross_ratios()
    p = two
    associates = {p, 1 - p, p.inverse(), (1 - p).inverse(), p / (p - 1), (p - 1) / p}
    assert associates <= found <= fun
    rng = random.Random(71)
    for _ in range(20):
        B = random_valid_matrix(rng, "D", 3, 3)
        if B is not None:
            assert B.cross_ratios() <= fun


def test_m8591_cross_ratios_contain_generator():
    A = m8591_matrix()
    a = A.field.ring.gen("a")
    crat = A.cross_ratios()
    assert a in crat
    assert crat <= set(A.field.fundamentals())
