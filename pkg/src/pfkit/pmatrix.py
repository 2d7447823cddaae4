"""Row/column-labelled matrices over a partial field.

Labels are strings; rows X and columns Y are disjoint.  Entries are ring
elements that are members of the partial field (or zero).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .errors import (
    DimensionMismatch,
    NonUnit,
    NotACycle,
    NotAForest,
    OverlappingSets,
    TooManyCycles,
    UndefinedDeterminant,
    UndefinedEntry,
    ZeroPivot,
)
from .fields import PartialField, assoc_closure
from .rings import Ring, RingElement

DEFAULT_VALIDATE_CAP = 24
CYCLE_CAP = 100_000


def ring_det(M: Sequence[Sequence[RingElement]], ring: Ring) -> RingElement:
    """Determinant by Laplace expansion over column subsets; valid in any commutative ring."""
    n = len(M)
    if n == 0:
        return ring.one_element
    if any(len(r) != n for r in M):
        raise DimensionMismatch("determinant of a non-square matrix")
    table = {0: ring.one_element}
    for i in range(n):
        nxt = {}
        for S, d in table.items():
            if d.is_zero():
                continue
            for j in range(n):
                if S >> j & 1 or M[i][j].is_zero():
                    continue
                sign = -1 if bin(S >> (j + 1)).count("1") % 2 else 1
                term = M[i][j] * d
                T = S | (1 << j)
                nxt[T] = nxt.get(T, ring.zero_element) + (term if sign > 0 else -term)
        table = nxt
    return table.get((1 << n) - 1, ring.zero_element)


@dataclass(frozen=True)
class Validity:
    valid: bool
    rows: tuple = ()
    cols: tuple = ()
    value: RingElement | None = None

    def __bool__(self):
        return self.valid


class PMatrix:
    """An X x Y matrix with entries in a partial field."""

    __slots__ = ("field", "rows", "cols", "entries", "_validity", "_row_index", "_col_index")

    def __init__(self, field: PartialField, rows: Sequence[str], cols: Sequence[str], entries, *, check: bool = True):
        self.field = field
        self.rows = tuple(str(r) for r in rows)
        self.cols = tuple(str(c) for c in cols)
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise OverlappingSets("duplicate labels")
        if set(self.rows) & set(self.cols):
            raise OverlappingSets(f"row and column labels overlap: {sorted(set(self.rows) & set(self.cols))}")
        ents = [[field.ring(e) for e in row] for row in entries]
        if len(ents) != len(self.rows) or any(len(r) != len(self.cols) for r in ents):
            raise DimensionMismatch(f"expected {len(self.rows)}x{len(self.cols)} entries")
        if check:
            for r, row in zip(self.rows, ents):
                for c, e in zip(self.cols, row):
                    if field.member(e) is None:
                        raise UndefinedEntry(r, c, e)
        self.entries = tuple(tuple(r) for r in ents)
        self._validity = None
        self._row_index = {r: i for i, r in enumerate(self.rows)}
        self._col_index = {c: j for j, c in enumerate(self.cols)}

    # construction ------------------------------------------------------
    @classmethod
    def from_rows(cls, field: PartialField, data, rows=None, cols=None, **kw) -> "PMatrix":
        data = [list(r) for r in data]
        m = len(data)
        n = len(data[0]) if m else 0
        rows = rows if rows is not None else [str(i + 1) for i in range(m)]
        cols = cols if cols is not None else [str(m + j + 1) for j in range(n)]
        return cls(field, rows, cols, data, **kw)

    def _new(self, rows, cols, entries, validity=None) -> "PMatrix":
        out = PMatrix(self.field, rows, cols, entries, check=False)
        out._validity = validity
        return out

    # access ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.rows + self.cols

    def __getitem__(self, key) -> RingElement:
        x, y = key
        return self.entries[self._row_index[x]][self._col_index[y]]

    def row_index(self, x) -> int:
        return self._row_index[x]

    def col_index(self, y) -> int:
        return self._col_index[y]

    def is_row(self, v) -> bool:
        return v in self._row_index

    def __eq__(self, other):
        return (
            isinstance(other, PMatrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"PMatrix({self.field.descriptor()}, {self.rows}, {self.cols}, {self.format_rows()})"

    def format_rows(self) -> list[list[str]]:
        return [[self.field.format(e) for e in row] for row in self.entries]

    def __str__(self):
        rows = self.format_rows()
        width = max([len(c) for c in self.cols] + [len(e) for r in rows for e in r] + [1])
        lw = max(len(r) for r in self.rows) if self.rows else 1
        head = " " * lw + " | " + " ".join(c.rjust(width) for c in self.cols)
        body = [r.rjust(lw) + " | " + " ".join(e.rjust(width) for e in row) for r, row in zip(self.rows, rows)]
        return "\n".join([head] + body)

    # determinants ------------------------------------------------------
    def submatrix(self, rows: Sequence[str], cols: Sequence[str]) -> "PMatrix":
        ri = [self._row_index[r] for r in rows]
        ci = [self._col_index[c] for c in cols]
        return self._new(rows, cols, [[self.entries[i][j] for j in ci] for i in ri])

    def ring_det(self, rows=None, cols=None) -> RingElement:
        """Ring value of the determinant of A[rows, cols] in the given label order."""
        rows = self.rows if rows is None else tuple(rows)
        cols = self.cols if cols is None else tuple(cols)
        if len(rows) != len(cols):
            raise DimensionMismatch(f"{len(rows)} rows vs {len(cols)} columns")
        ri = [self._row_index[r] for r in rows]
        ci = [self._col_index[c] for c in cols]
        return ring_det([[self.entries[i][j] for j in ci] for i in ri], self.field.ring)

    def subdet(self, rows=None, cols=None) -> RingElement:
        """Determinant by recursive pivoting, membership-checking every intermediate entry."""
        rows = self.rows if rows is None else tuple(rows)
        cols = self.cols if cols is None else tuple(cols)
        if len(rows) != len(cols):
            raise DimensionMismatch(f"{len(rows)} rows vs {len(cols)} columns")
        F = self.field
        ri = [self._row_index[r] for r in rows]
        ci = [self._col_index[c] for c in cols]
        M = [[self.entries[i][j] for j in ci] for i in ri]
        if len(M) <= 3:
            value = ring_det(M, F.ring)
        else:
            value = F.ring.one_element
            while M:
                j = next((k for k, e in enumerate(M[0]) if not e.is_zero()), None)
                if j is None:
                    value = F.ring.zero_element
                    break
                a = M[0][j]
                value = value * a if j % 2 == 0 else -(value * a)
                if F.member(value) is None:
                    raise UndefinedDeterminant(rows, cols, value)
                inv = a.inverse()
                nxt = []
                for row in M[1:]:
                    f = row[j] * inv
                    new = [row[k] - f * M[0][k] for k in range(len(row)) if k != j]
                    for e in new:
                        if F.member(e) is None:
                            raise UndefinedDeterminant(rows, cols, e)
                    nxt.append(new)
                M = nxt
        if F.member(value) is None:
            raise UndefinedDeterminant(rows, cols, value)
        return value

    def det(self) -> RingElement:
        return self.subdet()

    def all_minors(self, max_size: int | None = None) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], RingElement]]:
        """Yield (row indices, col indices, determinant) for every square submatrix.

        Computed level by level with Laplace expansion along the last row,
        reusing the previous level's values.
        """
        m, n = self.shape
        top = min(m, n) if max_size is None else min(m, n, max_size)
        E = self.entries
        ring = self.field.ring
        prev: dict = {((), ()): ring.one_element}
        for k in range(1, top + 1):
            cur = {}
            for R in itertools.combinations(range(m), k):
                last = R[-1]
                Rm = R[:-1]
                for C in itertools.combinations(range(n), k):
                    acc = ring.zero_element
                    for pos, j in enumerate(C):
                        e = E[last][j]
                        if e.is_zero():
                            continue
                        sub = prev.get((Rm, C[:pos] + C[pos + 1 :]))
                        if sub is None or sub.is_zero():
                            continue
                        term = e * sub
                        # entry sits at (k-1, pos): sign (-1)^(k-1+pos)
                        acc = acc + term if (k - 1 + pos) % 2 == 0 else acc - term
                    cur[(R, C)] = acc
                    yield R, C, acc
            prev = cur

    def validate(self, cap: int = DEFAULT_VALIDATE_CAP) -> Validity:
        if self._validity is not None:
            return self._validity
        if len(self.rows) + len(self.cols) > cap:
            from .errors import TooLarge

            raise TooLarge(f"{len(self.rows)}+{len(self.cols)} labels exceed the validation cap {cap}")
        result = Validity(True)
        for R, C, d in self.all_minors():
            if self.field.member(d) is None:
                result = Validity(False, tuple(self.rows[i] for i in R), tuple(self.cols[j] for j in C), d)
                break
        self._validity = result
        return result

    def is_valid(self) -> bool:
        return self.validate().valid

    # operations --------------------------------------------------------
    def pivot(self, x: str, y: str, *, check: bool = True) -> "PMatrix":
        """Pivot over the nonzero entry xy; labels x and y trade places."""
        i, j = self._row_index[x], self._col_index[y]
        a = self.entries[i][j]
        if a.is_zero():
            raise ZeroPivot(f"entry ({x}, {y}) is zero")
        inv = a.inverse()
        E = self.entries
        out = []
        for k, row in enumerate(E):
            if k == i:
                out.append([inv if l == j else inv * e for l, e in enumerate(row)])
            else:
                c = row[j]
                if c.is_zero():
                    out.append(list(row))
                    continue
                ci = c * inv
                new = []
                for l, e in enumerate(row):
                    if l == j:
                        new.append(-ci)
                    else:
                        new.append(e - ci * E[i][l])
                out.append(new)
        if check:
            F = self.field
            for k, row in enumerate(out):
                for l, e in enumerate(row):
                    if F.member(e) is None:
                        raise UndefinedEntry(self.rows[k] if k != i else y, self.cols[l] if l != j else x, e)
        rows = list(self.rows)
        cols = list(self.cols)
        rows[i], cols[j] = y, x
        return self._new(rows, cols, out)

    def scale_row(self, x: str, u) -> "PMatrix":
        u = self._unit(u)
        i = self._row_index[x]
        ents = [list(r) for r in self.entries]
        ents[i] = [u * e for e in ents[i]]
        return self._new(self.rows, self.cols, ents, self._validity)

    def scale_col(self, y: str, u) -> "PMatrix":
        u = self._unit(u)
        j = self._col_index[y]
        ents = [list(r) for r in self.entries]
        for r in ents:
            r[j] = u * r[j]
        return self._new(self.rows, self.cols, ents, self._validity)

    def _unit(self, u) -> RingElement:
        u = self.field.ring(u)
        w = self.field.member(u)
        if u.is_zero() or w is None:
            raise NonUnit(f"{u} is not a nonzero member of the partial field")
        return u

    def delete(self, labels: Iterable[str]) -> "PMatrix":
        """Remove rows and columns by label (the minor A - S)."""
        drop = set(labels)
        unknown = drop - set(self.labels)
        if unknown:
            raise KeyError(f"unknown labels {sorted(unknown)}")
        rows = [r for r in self.rows if r not in drop]
        cols = [c for c in self.cols if c not in drop]
        return self.submatrix(rows, cols)

    def permute(self, rows: Sequence[str], cols: Sequence[str]) -> "PMatrix":
        if sorted(rows) != sorted(self.rows) or sorted(cols) != sorted(self.cols):
            raise DimensionMismatch("permutation must use the same labels")
        out = self.submatrix(rows, cols)
        out._validity = self._validity
        return out

    def transpose(self) -> "PMatrix":
        ents = [[self.entries[i][j] for i in range(len(self.rows))] for j in range(len(self.cols))]
        return self._new(self.cols, self.rows, ents, self._validity)

    def relabel(self, mapping: dict) -> "PMatrix":
        return self._new(
            [mapping.get(r, r) for r in self.rows], [mapping.get(c, c) for c in self.cols], self.entries, self._validity
        )

    def map_entries(self, fn, field: PartialField) -> "PMatrix":
        out = PMatrix(field, self.rows, self.cols, [[fn(e) for e in row] for row in self.entries], check=False)
        return out

    # support graph -----------------------------------------------------
    def support_edges(self) -> list[tuple[str, str]]:
        return [(x, y) for i, x in enumerate(self.rows) for j, y in enumerate(self.cols) if not self.entries[i][j].is_zero()]

    def graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(self.rows, side="row")
        G.add_nodes_from(self.cols, side="col")
        G.add_edges_from(self.support_edges())
        return G

    def _neighbours(self, v) -> list[str]:
        if v in self._row_index:
            i = self._row_index[v]
            return [y for j, y in enumerate(self.cols) if not self.entries[i][j].is_zero()]
        j = self._col_index[v]
        return [x for i, x in enumerate(self.rows) if not self.entries[i][j].is_zero()]

    def spanning_forest(self, order: Sequence[str] | None = None) -> list[tuple[str, str]]:
        """BFS spanning forest; roots and neighbour order follow ``order`` (rows then columns)."""
        order = list(order) if order is not None else list(self.rows) + list(self.cols)
        rank = {v: k for k, v in enumerate(order)}
        seen = set()
        edges = []
        for root in order:
            if root in seen:
                continue
            seen.add(root)
            queue = deque([root])
            while queue:
                v = queue.popleft()
                for w in sorted(self._neighbours(v), key=rank.__getitem__):
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
                        edges.append((v, w) if v in self._row_index else (w, v))
        return edges

    def _check_forest(self, forest: Sequence[tuple[str, str]]):
        parent = {v: v for v in self.labels}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for x, y in forest:
            if x not in self._row_index or y not in self._col_index:
                raise NotAForest(f"edge {x}{y} is not a row-column pair")
            if self[x, y].is_zero():
                raise NotAForest(f"edge {x}{y} is not in the support graph")
            a, b = find(x), find(y)
            if a == b:
                raise NotAForest(f"edge {x}{y} closes a cycle")
            parent[a] = b
        components = nx.number_connected_components(self.graph())
        if len(forest) != len(self.labels) - components:
            raise NotAForest("forest does not span every component")

    def normalize(self, forest: Sequence[tuple[str, str]] | None = None) -> "PMatrix":
        """Scaling-equivalent matrix with entry 1 on every forest edge."""
        return self.normalize_with_scales(forest)[0]

    def normalize_with_scales(self, forest=None):
        forest = self.spanning_forest() if forest is None else list(forest)
        self._check_forest(forest)
        ring = self.field.ring
        adj: dict = {v: [] for v in self.labels}
        for x, y in forest:
            adj[x].append(y)
            adj[y].append(x)
        scale: dict = {}
        for root in list(self.rows) + list(self.cols):
            if root in scale:
                continue
            scale[root] = ring.one_element
            queue = deque([root])
            while queue:
                v = queue.popleft()
                for w in adj[v]:
                    if w in scale:
                        continue
                    if v in self._row_index:
                        scale[w] = (self[v, w] * scale[v]).inverse()
                    else:
                        scale[w] = (self[w, v] * scale[v]).inverse()
                    queue.append(w)
        ents = [
            [scale[x] * self.entries[i][j] * scale[y] for j, y in enumerate(self.cols)]
            for i, x in enumerate(self.rows)
        ]
        out = self._new(self.rows, self.cols, ents, self._validity)
        return out, {x: scale[x] for x in self.rows}, {y: scale[y] for y in self.cols}

    def scaling_equivalent(self, other: "PMatrix") -> bool:
        """Equal up to scaling rows and columns by nonzero members (labels must match as sets)."""
        if set(self.rows) != set(other.rows) or set(self.cols) != set(other.cols):
            return False
        other = other.permute(self.rows, self.cols)
        if set(self.support_edges()) != set(other.support_edges()):
            return False
        forest = self.spanning_forest()
        return self.normalize(forest).entries == other.normalize(forest).entries

    def canonical_key(self):
        """Label-sorted, forest-normalized entries: equal keys iff scaling-equivalent."""
        A = self.permute(sorted(self.rows), sorted(self.cols))
        N = A.normalize()
        return (A.rows, A.cols, tuple(tuple(e.v for e in r) for r in N.entries))

    # cycles ------------------------------------------------------------
    def cycle_signature(self, cycle: Sequence[str]) -> RingElement:
        """Signed product around a cycle (closing vertex optional)."""
        C = list(cycle)
        if len(C) > 1 and C[0] == C[-1]:
            C = C[:-1]
        if len(C) < 4 or len(C) % 2 or len(set(C)) != len(C):
            raise NotACycle(f"{cycle} is not a simple even cycle")
        ring = self.field.ring
        value = ring.one_element
        for k, v in enumerate(C):
            w = C[(k + 1) % len(C)]
            if v in self._row_index and w in self._col_index:
                e = self[v, w]
                if e.is_zero():
                    raise NotACycle(f"{v}{w} is not an edge")
                value = value * e
            elif v in self._col_index and w in self._row_index:
                e = self[w, v]
                if e.is_zero():
                    raise NotACycle(f"{w}{v} is not an edge")
                value = value / e
            else:
                raise NotACycle(f"{v}{w} does not alternate between rows and columns")
        return value if (len(C) // 2) % 2 == 0 else -value

    def induced_cycles(self, cap: int = CYCLE_CAP) -> list[tuple[str, ...]]:
        """All chordless cycles of the support graph, each starting at its first row."""
        order = {v: k for k, v in enumerate(self.rows + self.cols)}
        out = []
        for cyc in nx.chordless_cycles(self.graph()):
            if len(cyc) < 4:
                continue
            start = min((v for v in cyc if v in self._row_index), key=order.__getitem__)
            k = cyc.index(start)
            c = cyc[k:] + cyc[:k]
            if order[c[1]] > order[c[-1]]:
                c = [c[0]] + c[1:][::-1]
            out.append(tuple(c))
            if len(out) > cap:
                raise TooManyCycles(f"more than {cap} induced cycles")
        out.sort(key=lambda c: (len(c), [order[v] for v in c]))
        return out

    # closure -----------------------------------------------------------
    def pivot_closure(self, depth: int | None = None) -> tuple[dict, bool]:
        """Matrices reachable by pivots, one per row-label set.

        Returns (frozenset(rows) -> (matrix, pivot path), exhausted flag).
        """
        start = frozenset(self.rows)
        seen = {start: (self, ())}
        frontier = [start]
        level = 0
        while frontier and (depth is None or level < depth):
            nxt = []
            for key in frontier:
                A, path = seen[key]
                for x, y in A.support_edges():
                    k2 = (key - {x}) | {y}
                    if k2 in seen:
                        continue
                    seen[k2] = (A.pivot(x, y), path + ((x, y),))
                    nxt.append(k2)
            frontier = nxt
            level += 1
        exhausted = not frontier or all(
            ((k - {x}) | {y}) in seen for k in frontier for x, y in seen[k][0].support_edges()
        )
        return seen, exhausted

    def cross_ratios(self, depth: int | None = None) -> set[RingElement]:
        """Cross ratios of 2x2 minors over the pivot closure, closed under associates."""
        closure, _ = self.pivot_closure(depth)
        F = self.field
        found = set()
        for A, _ in closure.values():
            E = A.entries
            m, n = A.shape
            for i1, i2 in itertools.combinations(range(m), 2):
                for j1, j2 in itertools.combinations(range(n), 2):
                    a, b, c, d = E[i1][j1], E[i1][j2], E[i2][j1], E[i2][j2]
                    zeros = sum(x.is_zero() for x in (a, b, c, d))
                    if zeros == 0:
                        p = (b * c) / (a * d)
                        found.add(p)
                        found.add(p.inverse())
                    elif zeros == 1:
                        found.add(F.ring.zero_element)
        return assoc_closure(F, found)
