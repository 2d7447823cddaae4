"""Brute-force oracles and random generators shared by the test modules."""

from __future__ import annotations

import itertools
import random

import networkx as nx

from pfkit import catalog
from pfkit.pmatrix import PMatrix


def cofactor_det(M, ring):
    """Plain Laplace expansion along the first row."""
    n = len(M)
    if n == 0:
        return ring.one_element
    total = ring.zero_element
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * cofactor_det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def brute_bases(A: PMatrix) -> set[frozenset]:
    """Bases of the matroid of [I | A], by determinant of every r-subset of columns."""
    ring = A.field.ring
    one, zero = ring.one_element, ring.zero_element
    r = len(A.rows)
    columns = {}
    for i, x in enumerate(A.rows):
        columns[x] = [one if k == i else zero for k in range(r)]
    for y in A.cols:
        columns[y] = [A[x, y] for x in A.rows]
    out = set()
    for B in itertools.combinations(A.labels, r):
        M = [[columns[b][i] for b in B] for i in range(r)]
        if not cofactor_det(M, ring).is_zero():
            out.add(frozenset(B))
    return out


def brute_valid(A: PMatrix) -> bool:
    F = A.field
    m, n = A.shape
    for k in range(1, min(m, n) + 1):
        for R in itertools.combinations(range(m), k):
            for C in itertools.combinations(range(n), k):
                d = cofactor_det([[A.entries[i][j] for j in C] for i in R], F.ring)
                if F.member(d) is None:
                    return False
    return True


def element_pool(name: str) -> list:
    """Nonzero members used to fill random matrices."""
    if name == "D":
        F = catalog.field("D")
        return [F.ring(s * 2**k) if k >= 0 else F.ring(s) / 2**-k for s in (1, -1) for k in range(-2, 3)]
    if name == "S":
        F = catalog.field("S")
        z = F.ring.gen("z")
        return [z**k for k in range(6)]
    return list(field_of(name).group_elements())


def field_of(name: str):
    """Catalog field, or a product written as ``GF3xGF5``."""
    return catalog.product(*name.split("x")) if "x" in name else catalog.field(name)


def random_valid_matrix(rng: random.Random, name: str, m: int, n: int, zero_rate: float = 0.25, tries: int = 40):
    """Grow a valid m x n matrix column by column; None if a column cannot be placed."""
    F = field_of(name)
    pool = element_pool(name)
    zero = F.ring.zero_element
    cols: list[list] = []
    for _ in range(n):
        for _ in range(tries):
            col = [zero if rng.random() < zero_rate else rng.choice(pool) for _ in range(m)]
            ents = [[c[i] for c in cols + [col]] for i in range(m)]
            A = PMatrix(F, [f"r{i}" for i in range(m)], [f"c{j}" for j in range(len(ents[0]))], ents, check=False)
            if A.is_valid():
                cols.append(col)
                break
        else:
            return None
    return PMatrix(F, [f"r{i}" for i in range(m)], [f"c{j}" for j in range(n)], [[c[i] for c in cols] for i in range(m)])


def random_square(rng: random.Random, name: str, n: int):
    while True:
        A = random_valid_matrix(rng, name, n, n)
        if A is not None:
            return A


def random_forest(rng: random.Random, A: PMatrix) -> list[tuple[str, str]]:
    """A uniformly weighted random spanning forest of the support graph, as row-column pairs."""
    G = A.graph()
    for u, v in G.edges:
        G[u][v]["weight"] = rng.random()
    rows = set(A.rows)
    return [(u, v) if u in rows else (v, u) for u, v, _ in nx.minimum_spanning_edges(G, data=True)]
