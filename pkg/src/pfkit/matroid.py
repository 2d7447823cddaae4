"""Matroids given by their bases, and the matroids of P-matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .errors import InvalidMatrix, NotABasis, OverlappingSets, ParseError, TooLarge
from .pmatrix import PMatrix

EXCHANGE_CHECK_CAP = 16
ISOMORPHISM_CAP = 10


class Matroid:
    """A matroid on an ordered ground set with bases stored as bitmasks."""

    def __init__(self, ground: Sequence[str], bases: Iterable, *, check: bool = True, provenance=None):
        self.ground = tuple(str(e) for e in ground)
        if len(set(self.ground)) != len(self.ground):
            raise OverlappingSets("duplicate ground-set labels")
        self._index = {e: k for k, e in enumerate(self.ground)}
        masks = set()
        for B in bases:
            masks.add(B if isinstance(B, int) else self._mask(B))
        if not masks:
            raise ValueError("a matroid needs at least one basis")
        ranks = {bin(b).count("1") for b in masks}
        if len(ranks) != 1:
            raise ValueError("bases have different sizes")
        self.rank = ranks.pop()
        self.bases = frozenset(masks)
        self.provenance = provenance
        if check and len(self.ground) <= EXCHANGE_CHECK_CAP:
            bad = self.exchange_violation()
            if bad is not None:
                raise ValueError(f"basis exchange fails for {bad}")

    # helpers -----------------------------------------------------------
    def _mask(self, labels: Iterable[str]) -> int:
        m = 0
        for e in labels:
            m |= 1 << self._index[str(e)]
        return m

    def _labels(self, mask: int) -> frozenset:
        return frozenset(e for k, e in enumerate(self.ground) if mask >> k & 1)

    def basis_sets(self) -> set[frozenset]:
        return {self._labels(b) for b in self.bases}

    def __len__(self):
        return len(self.ground)

    def __eq__(self, other):
        return isinstance(other, Matroid) and set(self.ground) == set(other.ground) and self.basis_sets() == other.basis_sets()

    def __hash__(self):
        return hash(frozenset(self.basis_sets()))

    def __repr__(self):
        return f"Matroid(rank={self.rank}, |E|={len(self.ground)}, bases={len(self.bases)})"

    def exchange_violation(self):
        for b1 in self.bases:
            for b2 in self.bases:
                diff1 = b1 & ~b2
                diff2 = b2 & ~b1
                k = 0
                while diff1 >> k:
                    if diff1 >> k & 1:
                        x = 1 << k
                        ok = False
                        j = 0
                        while diff2 >> j:
                            if diff2 >> j & 1 and ((b1 & ~x) | (1 << j)) in self.bases:
                                ok = True
                                break
                            j += 1
                        if not ok:
                            return (self._labels(b1), self._labels(b2), self.ground[k])
                    k += 1
        return None

    # queries -----------------------------------------------------------
    def is_basis(self, labels) -> bool:
        return self._mask(labels) in self.bases

    def is_independent(self, labels) -> bool:
        m = self._mask(labels)
        return any(b & m == m for b in self.bases)

    def rank_of(self, labels) -> int:
        m = self._mask(labels)
        return max(bin(b & m).count("1") for b in self.bases)

    def fundamental_circuit(self, basis, y) -> frozenset:
        B = self._mask(basis)
        if B not in self.bases:
            raise NotABasis(f"{sorted(basis)} is not a basis")
        yb = 1 << self._index[y]
        out = {y}
        for k, e in enumerate(self.ground):
            if B >> k & 1 and ((B & ~(1 << k)) | yb) in self.bases:
                out.add(e)
        return frozenset(out)

    def fundamental_graph(self, basis) -> nx.Graph:
        B = self._mask(basis)
        if B not in self.bases:
            raise NotABasis(f"{sorted(basis)} is not a basis")
        G = nx.Graph()
        inside = [e for k, e in enumerate(self.ground) if B >> k & 1]
        outside = [e for k, e in enumerate(self.ground) if not B >> k & 1]
        G.add_nodes_from(inside, side="basis")
        G.add_nodes_from(outside, side="cobasis")
        for x in inside:
            for y in outside:
                if ((B & ~(1 << self._index[x])) | (1 << self._index[y])) in self.bases:
                    G.add_edge(x, y)
        return G

    def connectivity_flags(self, basis) -> dict:
        G = self.fundamental_graph(basis)
        connected = nx.is_connected(G) if len(G) else True
        return {
            "connected": connected,
            "two_connected": connected and len(G) >= 3 and nx.is_biconnected(G),
        }

    def is_connected(self) -> bool:
        return self.connectivity_flags(self._labels(min(self.bases)))["connected"]

    # constructions -----------------------------------------------------
    def dual(self) -> "Matroid":
        full = (1 << len(self.ground)) - 1
        return Matroid(self.ground, [full & ~b for b in self.bases], check=False)

    def delete(self, S: Iterable[str]) -> "Matroid":
        S = set(S)
        keep = [e for e in self.ground if e not in S]
        smask = self._mask(S)
        reduced = {b & ~smask for b in self.bases}
        top = max(bin(b).count("1") for b in reduced)
        new_bases = [self._labels(b) for b in reduced if bin(b).count("1") == top]
        return Matroid(keep, new_bases, check=False)

    def contract(self, T: Iterable[str]) -> "Matroid":
        return self.dual().delete(T).dual()

    def minor(self, delete: Iterable[str] = (), contract: Iterable[str] = ()) -> "Matroid":
        S, T = set(delete), set(contract)
        if S & T:
            raise OverlappingSets(f"delete and contract overlap: {sorted(S & T)}")
        return self.contract(T).delete(S)

    def relabel(self, mapping: dict) -> "Matroid":
        return Matroid([mapping.get(e, e) for e in self.ground], self.bases, check=False)

    # isomorphism -------------------------------------------------------
    def _incidence_graph(self, use_bases: bool) -> nx.Graph:
        G = nx.Graph()
        for e in self.ground:
            G.add_node(("e", e), kind="e")
        blocks = self.bases if use_bases else self.nonbases()
        for k, b in enumerate(sorted(blocks)):
            G.add_node(("b", k), kind="b")
            for e in self._labels(b):
                G.add_edge(("e", e), ("b", k))
        return G

    def nonbases(self) -> set[int]:
        n = len(self.ground)
        out = set()
        for combo in itertools.combinations(range(n), self.rank):
            m = sum(1 << k for k in combo)
            if m not in self.bases:
                out.add(m)
        return out

    def isomorphism(self, other: "Matroid") -> dict | None:
        """A ground-set bijection carrying bases to bases, or None."""
        if max(len(self.ground), len(other.ground)) > ISOMORPHISM_CAP:
            raise TooLarge(f"isomorphism is limited to {ISOMORPHISM_CAP} elements")
        if len(self.ground) != len(other.ground) or self.rank != other.rank or len(self.bases) != len(other.bases):
            return None
        total = len(list(itertools.combinations(range(len(self.ground)), self.rank)))
        use_bases = len(self.bases) <= total - len(self.bases)
        G1, G2 = self._incidence_graph(use_bases), other._incidence_graph(use_bases)
        gm = GraphMatcher(G1, G2, node_match=lambda a, b: a["kind"] == b["kind"])
        for iso in gm.isomorphisms_iter():
            return {u[1]: v[1] for u, v in iso.items() if u[0] == "e"}
        return None

    def is_isomorphic(self, other: "Matroid") -> bool:
        return self.isomorphism(other) is not None

    # text --------------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"matroid r={self.rank} E={','.join(self.ground)}"]
        for b in sorted(self.bases, key=lambda b: [k for k in range(len(self.ground)) if b >> k & 1]):
            lines.append(" ".join(e for k, e in enumerate(self.ground) if b >> k & 1))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matroid":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("matroid"):
            raise ParseError("matroid text must start with 'matroid r=<rank> E=<labels>'")
        head = dict(part.split("=", 1) for part in lines[0].split()[1:])
        ground = [e for e in head.get("E", "").split(",") if e]
        rank = int(head["r"])
        bases = [ln.split() for ln in lines[1:]]
        if rank == 0 and not bases:
            bases = [[]]
        if any(len(b) != rank for b in bases):
            raise ParseError("basis size differs from the declared rank")
        try:
            return cls(ground, bases)
        except (KeyError, ValueError) as exc:
            raise ParseError(str(exc)) from exc


def matroid_from(A: PMatrix, check_valid: bool = True) -> Matroid:
    """M[I|A]: ground X ∪ Y, bases (X minus R) ∪ C for every nonzero minor A[R, C]."""
    if check_valid and not A.is_valid():
        v = A.validate()
        raise InvalidMatrix(f"not a P-matrix: det of rows {v.rows} / cols {v.cols} is {v.value}")
    ground = A.rows + A.cols
    m = len(A.rows)
    full_rows = (1 << m) - 1
    bases = {full_rows}
    for R, C, d in A.all_minors():
        if not d.is_zero():
            mask = full_rows
            for i in R:
                mask &= ~(1 << i)
            for j in C:
                mask |= 1 << (m + j)
            bases.add(mask)
    return Matroid(ground, bases, check=False, provenance=A)


def basis_of(A: PMatrix, rows: Iterable[str]) -> PMatrix:
    """Pivot A until its row labels are exactly ``rows`` (a basis of M[I|A])."""
    target = set(rows)
    while set(A.rows) != target:
        for x in A.rows:
            if x in target:
                continue
            y = next((y for y in A.cols if y in target and not A[x, y].is_zero()), None)
            if y is not None:
                A = A.pivot(x, y)
                break
        else:
            raise NotABasis(f"{sorted(target)} is not a basis")
    return A


def minor_display(A: PMatrix, delete: Iterable[str] = (), contract: Iterable[str] = ()) -> PMatrix:
    """A matrix A' ≈ A with contract ⊆ rows and delete ⊆ cols, minus those labels."""
    S, T = set(delete), set(contract)
    if S & T:
        raise OverlappingSets(f"delete and contract overlap: {sorted(S & T)}")
    M = matroid_from(A, check_valid=False)
    smask, tmask = M._mask(S), M._mask(T)
    choice = next((b for b in sorted(M.bases) if b & tmask == tmask and not b & smask), None)
    if choice is None:
        raise NotABasis("no basis contains the contracted set while avoiding the deleted set")
    B = basis_of(A, M._labels(choice))
    return B.delete(S | T)


# ---------------------------------------------------------------------------
# Named matroids
# ---------------------------------------------------------------------------

FANO_PATTERN = [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]]


def uniform(r: int, n: int) -> Matroid:
    ground = [str(k + 1) for k in range(n)]
    return Matroid(ground, itertools.combinations(ground, r), check=False)


def fano() -> Matroid:
    from .catalog import field

    return matroid_from(PMatrix.from_rows(field("GF2"), FANO_PATTERN))


def non_fano() -> Matroid:
    from .catalog import field

    return matroid_from(PMatrix.from_rows(field("D"), FANO_PATTERN))


def wheel_matrix(n: int, field=None, signature=None) -> PMatrix:
    """n x n cycle matrix whose support graph is a 2n-cycle with the given signature.

    The default (signature 1 over U0) gives a wheel; any other signature a whirl.
    """
    from .catalog import field as catalog_field

    F = field or catalog_field("U0")
    ring = F.ring
    rows = [f"x{k + 1}" for k in range(n)]
    cols = [f"y{k + 1}" for k in range(n)]
    ents = [[ring.zero_element] * n for _ in range(n)]
    for k in range(n):
        ents[k][k] = ring.one_element
        ents[k][(k + 1) % n] = ring.one_element
    A = PMatrix(F, rows, cols, ents)
    target = ring.one_element if signature is None else ring(signature)
    cycle = []
    for k in range(n):
        cycle += [rows[k], cols[(k + 1) % n]]
    current = A.cycle_signature(cycle)
    fix = target / current
    ents[n - 1][0] = ents[n - 1][0] * fix if n > 1 else fix
    return PMatrix(F, rows, cols, ents)


def wheel(n: int) -> Matroid:
    return matroid_from(wheel_matrix(n))


def whirl(n: int) -> Matroid:
    from .catalog import field

    U1 = field("U1")
    return matroid_from(wheel_matrix(n, U1, U1.ring.gen("a")))


def m8591_matrix() -> PMatrix:
    from .catalog import field

    P4 = field("P4")
    a = P4.ring.gen("a")
    rows = [[1, 1, 0, a, 1], [0, 1, 1, a, a**-1], [1, 0, a, a, 1], [0, 0, 1, 1, 0]]
    return PMatrix.from_rows(P4, rows)


def m8591() -> Matroid:
    return matroid_from(m8591_matrix())


NAMED = {
    "F7": fano,
    "F7m": non_fano,
    "U25": lambda: uniform(2, 5),
    "U35": lambda: uniform(3, 5),
    "U24": lambda: uniform(2, 4),
    "W3": lambda: wheel(3),
    "W3w": lambda: whirl(3),
    "M8591": m8591,
}


def name_of(M: Matroid) -> str | None:
    """Catalog name of a matroid isomorphic to M, trying duals too."""
    for name in ("F7", "F7m", "U25", "U35", "U24", "W3", "W3w"):
        N = NAMED[name]()
        if M.is_isomorphic(N):
            return name
        if len(M) == len(N) and M.is_isomorphic(N.dual()):
            return name + "*"
    return None
