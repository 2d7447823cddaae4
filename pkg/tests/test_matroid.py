import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import brute_bases, random_valid_matrix
from pfkit import catalog
from pfkit.errors import InvalidMatrix, NotABasis, OverlappingSets, TooLarge
from pfkit.matroid import (
    FANO_PATTERN,
    Matroid,
    basis_of,
    fano,
    m8591,
    matroid_from,
    minor_display,
    name_of,
    non_fano,
    uniform,
    wheel,
    wheel_matrix,
    whirl,
)
from pfkit.pmatrix import PMatrix


def brute_minor(bases: set[frozenset], ground, delete, contract) -> set[frozenset]:
    """Bases of M / contract \\ delete straight from the definitions."""
    rT = max(len(B & contract) for B in bases)
    contracted = {B - contract for B in bases if len(B & contract) == rT}
    reduced = {B - delete for B in contracted}
    top = max(len(B) for B in reduced)
    return {B for B in reduced if len(B) == top}


@pytest.mark.parametrize("name", ["D", "S", "GF7", "GF3xGF5"])
def test_matroid_from_matches_brute_force(name):
    rng = random.Random(13)
    for _ in range(15):
        A = random_valid_matrix(rng, name, rng.randint(1, 3), rng.randint(1, 4))
        if A is None:
            continue
        assert matroid_from(A).basis_sets() == brute_bases(A)


def test_matroid_from_rejects_invalid():
    A = PMatrix.from_rows(catalog.field("D"), [[1, 1], [1, -2]], check=False)
    with pytest.raises(InvalidMatrix):
        matroid_from(A)


def test_dual_bases_are_complements():
    for M in (fano(), non_fano(), uniform(2, 5), wheel(3)):
        E = frozenset(M.ground)
        assert M.dual().basis_sets() == {E - B for B in M.basis_sets()}
        assert M.dual().dual() == M


@given(st.data())
def test_minor_matches_definition(data):
    M = data.draw(st.sampled_from([fano(), non_fano(), wheel(3), uniform(3, 6)]))
    labels = list(M.ground)
    chosen = data.draw(st.lists(st.sampled_from(labels), unique=True, max_size=4))
    split = data.draw(st.integers(0, len(chosen)))
    delete, contract = frozenset(chosen[:split]), frozenset(chosen[split:])
    N = M.minor(delete, contract)
    assert N.basis_sets() == brute_minor(M.basis_sets(), M.ground, delete, contract)


def test_matrix_minor_represents_matroid_minor():
    rng = random.Random(8)
    for _ in range(10):
        A = random_valid_matrix(rng, "GF3xGF5", 3, 4)
        if A is None:
            continue
        M = matroid_from(A)
        labels = list(M.ground)
        rng.shuffle(labels)
        S, T = labels[:1], labels[1:3]
        try:
            B = minor_display(A, S, T)
        except NotABasis:
            continue
        assert matroid_from(B) == M.minor(S, T)


def test_overlapping_minor_sets():
    with pytest.raises(OverlappingSets):
        fano().minor(["1"], ["1"])


def test_basis_of_pivots_to_target():
    A = PMatrix.from_rows(catalog.field("GF2"), FANO_PATTERN)
    M = matroid_from(A)
    for B in M.basis_sets():
        P = basis_of(A, B)
        assert frozenset(P.rows) == B
        assert matroid_from(P) == M
    dependent = next(S for S in itertools.combinations(M.ground, 3) if frozenset(S) not in M.basis_sets())
    with pytest.raises(NotABasis):
        basis_of(A, dependent)


@given(st.permutations([str(k) for k in range(1, 8)]))
def test_relabelled_fano_is_isomorphic(perm):
    M = fano()
    N = M.relabel(dict(zip(M.ground, perm)))
    phi = M.isomorphism(N)
    assert phi is not None
    assert {frozenset(phi[e] for e in B) for B in M.basis_sets()} == N.basis_sets()


def test_fano_and_non_fano_differ():
    assert len(fano().bases) == 28
    assert len(non_fano().bases) == 29
    assert not fano().is_isomorphic(non_fano())


def test_isomorphism_cap():
    with pytest.raises(TooLarge):
        uniform(3, 12).isomorphism(uniform(3, 12))


def test_exchange_axiom_enforced():
    with pytest.raises(ValueError):
        Matroid("abcd", [{"a", "b"}, {"c", "d"}])
    Matroid("abcd", [{"a", "b"}, {"a", "c"}, {"b", "c"}])


@pytest.mark.parametrize("M", [fano(), wheel(3), uniform(2, 4), m8591()], ids=["F7", "W3", "U24", "M8591"])
def test_text_round_trip(M):
    assert Matroid.from_text(M.to_text()) == M


@pytest.mark.parametrize("n", [3, 4])
def test_wheels_and_whirls(n):
    W = wheel_matrix(n)
    assert matroid_from(W).basis_sets() == brute_bases(W)
    assert not wheel(n).is_isomorphic(whirl(n))
    assert len(whirl(n).bases) == len(wheel(n).bases) + 1


def test_names():
    assert name_of(uniform(2, 5)) == "U25"
    assert name_of(fano()) == "F7"
    assert name_of(non_fano().dual()) == "F7m*"
    assert name_of(wheel(3)) == "W3"
    assert name_of(uniform(1, 3)) is None


def test_connectivity_flags():
    A = PMatrix.from_rows(catalog.field("GF2"), [[1, 0], [0, 1]])
    flags = matroid_from(A).connectivity_flags(A.rows)
    assert not flags["connected"]
    F = PMatrix.from_rows(catalog.field("GF2"), FANO_PATTERN)
    assert matroid_from(F).connectivity_flags(F.rows)["connected"]


def test_rank_and_circuits():
    M = fano()
    assert M.rank_of(M.ground) == 3
    B = sorted(M.basis_sets(), key=sorted)[0]
    for y in set(M.ground) - B:
        C = M.fundamental_circuit(B, y)
        assert y in C and not M.is_independent(C)
        assert all(M.is_independent(C - {e}) for e in C)
    for k in range(4):
        for S in itertools.combinations(M.ground, k):
            assert M.rank_of(S) == max(len(set(S) & B2) for B2 in M.basis_sets())


def uniform_minor(M, r, n):
    """First minor of M whose bases are all r-subsets of an n-set, by exhaustive scan."""
    ground = list(M.ground)
    for keep in itertools.combinations(ground, n):
        spare = [e for e in ground if e not in keep]
        for mask in range(1 << len(spare)):
            contract = {e for k, e in enumerate(spare) if mask >> k & 1}
            N = M.minor(set(spare) - contract, contract)
            if N.rank == r and len(N.basis_sets()) == len(list(itertools.combinations(keep, r))):
                return N
    return None


@pytest.mark.parametrize("r", [2, 3])
def test_m8591_has_five_point_uniform_minor(r):
    N = uniform_minor(m8591(), r, 5)
    assert N is not None
    assert N.is_isomorphic(uniform(r, 5))
