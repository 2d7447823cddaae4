"""Lifting P-matrices along a homomorphism phi: P^ -> P.

A lifting function sends fun(P) into P^.  A local lift of A is a P^-matrix
whose image is scaling-equivalent to A and whose induced-cycle signatures are
the lifts of those of A; a global lift stays local under every pivot.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import networkx as nx

from .errors import (
    ConditionFailed,
    DepthExceeded,
    NoLocalLift,
    NonExhaustiveFun,
    NotFundamental,
    ShapeMismatch,
    SourceMismatch,
)
from .fields import PartialField
from .morphism import Morphism
from .pmatrix import PMatrix
from .rings import RingElement

FULL_CLOSURE_LIMIT = 12
DEFAULT_PARTIAL_DEPTH = 3


def default_depth(A: PMatrix) -> int | None:
    """Closure depth: PFKIT_DEPTH if set, else full for small matrices, else 3."""
    env = os.environ.get("PFKIT_DEPTH")
    if env:
        return None if env.lower() in ("full", "none") else int(env)
    return None if len(A.rows) + len(A.cols) <= FULL_CLOSURE_LIMIT else DEFAULT_PARTIAL_DEPTH


# ---------------------------------------------------------------------------
# Lifting functions
# ---------------------------------------------------------------------------


@dataclass
class LiftingFunction:
    """p -> p^ on fun(base), a section of ``hom`` (lifted -> base)."""

    hom: Morphism
    table: dict

    @property
    def base(self) -> PartialField:
        return self.hom.target

    @property
    def lifted(self) -> PartialField:
        return self.hom.source

    @classmethod
    def from_hom(cls, hom: Morphism) -> "LiftingFunction":
        """The inverse of phi restricted to fundamentals (requires a bijection)."""
        ok, witness, inverse = hom.fun_restriction()
        if not ok:
            raise ValueError(f"phi is not bijective on fundamentals: {witness}")
        return cls(hom, inverse)

    @classmethod
    def from_table(cls, hom: Morphism, table: Mapping) -> "LiftingFunction":
        base, lifted = hom.target, hom.source
        return cls(hom, {base.ring(k): lifted.ring(v) for k, v in table.items()})

    def up(self, p) -> RingElement:
        p = self.base.ring(p)
        try:
            return self.table[p]
        except KeyError:
            raise NotFundamental(p) from None

    def __call__(self, p) -> RingElement:
        return self.up(p)

    def violations(self) -> list[dict]:
        """Failures of phi(p^) = p, p + q = 1 => p^ + q^ = 1, pq = 1 => p^ q^ = 1."""
        out = []
        one = self.base.ring.one_element
        lone = self.lifted.ring.one_element
        fun = self.base.fundamentals()
        for p in fun.sorted():
            if p not in self.table:
                out.append({"kind": "missing", "p": str(p)})
                continue
            if not self.hom(self.table[p]) == p:
                out.append({"kind": "section", "p": str(p), "image": str(self.hom(self.table[p]))})
        for p in fun.sorted():
            q = one - p
            if p in self.table and q in self.table and not (self.table[p] + self.table[q] == lone):
                out.append({"kind": "sum", "p": str(p), "q": str(q)})
            if not p.is_zero():
                r = p.inverse()
                if r in self.table and p in self.table and not (self.table[p] * self.table[r] == lone):
                    out.append({"kind": "inverse", "p": str(p), "q": str(r)})
        return out

    def is_lifting_function(self) -> bool:
        return not self.violations()

    def describe(self) -> list[tuple[str, str]]:
        return [(self.base.format(p), self.lifted.format(self.table[p])) for p in self.base.fundamentals().sorted() if p in self.table]


# ---------------------------------------------------------------------------
# Local lifts
# ---------------------------------------------------------------------------


def _signature(entries: dict, cycle: Sequence[str], rows: set, ring) -> RingElement:
    value = ring.one_element
    n = len(cycle)
    for k, v in enumerate(cycle):
        w = cycle[(k + 1) % n]
        value = value * entries[(v, w)] if v in rows else value / entries[(w, v)]
    return value if (n // 2) % 2 == 0 else -value


def local_lift_violation(Ahat: PMatrix, A: PMatrix, lf: LiftingFunction) -> dict | None:
    """The first failed local-lift condition of Ahat over A, or None."""
    if Ahat.field != lf.lifted:
        raise SourceMismatch(f"lift is over {Ahat.field.descriptor()}, expected {lf.lifted.descriptor()}")
    image = lf.hom.apply(Ahat)
    if not image.scaling_equivalent(A):
        return {"kind": "image", "condition": 1, "image": image.format_rows()}
    validity = Ahat.validate()
    if not validity.valid:
        return {
            "kind": "undefined-determinant",
            "condition": 2,
            "rows": list(validity.rows),
            "cols": list(validity.cols),
            "value": str(validity.value),
        }
    for C in A.induced_cycles():
        sigma = A.cycle_signature(C)
        expected = lf.up(sigma)
        got = Ahat.cycle_signature(C)
        if not got == expected:
            return {
                "kind": "cycle",
                "condition": 3,
                "cycle": list(C),
                "signature": A.field.format(sigma),
                "expected": lf.lifted.format(expected),
                "got": lf.lifted.format(got),
            }
    return None


def is_local_lift(Ahat: PMatrix, A: PMatrix, lf: LiftingFunction) -> bool:
    return local_lift_violation(Ahat, A, lf) is None


def build_local_lift(A: PMatrix, lf: LiftingFunction, forest: Sequence[tuple[str, str]] | None = None) -> PMatrix:
    """Construct the local lift of A (unique up to scaling), or raise NoLocalLift.

    Entries on the spanning forest are 1.  The remaining edges are fixed one at a
    time, always taking an edge whose shortest path in the fixed subgraph is
    shortest, so the closed cycle is induced and its lifted signature pins the entry.
    """
    if A.field != lf.base:
        raise SourceMismatch(f"matrix over {A.field.descriptor()}, lifting function for {lf.base.descriptor()}")
    forest = A.spanning_forest() if forest is None else list(forest)
    A._check_forest(forest)
    ring = lf.lifted.ring
    rows = set(A.rows)
    order = {v: k for k, v in enumerate(A.labels)}
    entries = {e: ring.one_element for e in forest}
    H = nx.Graph()
    H.add_nodes_from(A.labels)
    H.add_edges_from(forest)
    pending = sorted(set(A.support_edges()) - set(forest), key=lambda e: (order[e[0]], order[e[1]]))
    while pending:
        best = None
        for x, y in pending:
            path = nx.shortest_path(H, x, y)
            if best is None or len(path) < len(best[1]):
                best = ((x, y), path)
        (x, y), path = best
        cycle = [x, y] + path[-2:0:-1]
        sigma = A.cycle_signature(cycle)
        entries[(x, y)] = ring.one_element
        rest = _signature(entries, cycle, rows, ring)
        entries[(x, y)] = lf.up(sigma) / rest
        H.add_edge(x, y)
        pending.remove((x, y))
    ents = [[entries.get((x, y), ring.zero_element) for y in A.cols] for x in A.rows]
    Ahat = PMatrix(lf.lifted, A.rows, A.cols, ents, check=False)
    for (x, y), v in entries.items():
        if lf.lifted.member(v) is None:
            raise NoLocalLift(f"entry {x}{y} = {v} is not in {lf.lifted.descriptor()}", {"kind": "entry", "edge": [x, y]})
    bad = local_lift_violation(Ahat, A, lf)
    if bad is not None:
        raise NoLocalLift(f"no local lift: {bad['kind']} condition fails", bad)
    return Ahat


# ---------------------------------------------------------------------------
# Global lifts and certificates
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    minor: PMatrix
    kind: str  # "F7-form" or "U25-form"
    transposed: bool
    path: tuple
    witness: dict
    p: RingElement | None = None
    q: RingElement | None = None
    name: str | None = None


@dataclass
class LiftOutcome:
    status: str  # "global", "certificate" or "local-only"
    lifted: PMatrix | None = None
    certificate: Certificate | None = None
    path: tuple = ()
    witness: dict | None = None
    explored: int = 0
    exhausted: bool = True
    depth: int | None = None


def verify_global(Ahat: PMatrix, lf: LiftingFunction, depth: int | None = "default") -> LiftOutcome:
    """Check the local-lift conditions at every matrix of the pivot closure of Ahat."""
    if depth == "default":
        depth = default_depth(Ahat)
    closure, exhausted = Ahat.pivot_closure(depth)
    for key in sorted(closure, key=lambda k: (len(closure[k][1]), sorted(k))):
        B, path = closure[key]
        base = lf.hom.apply(B)
        for C in base.induced_cycles():
            sigma = base.cycle_signature(C)
            expected = lf.up(sigma)
            got = B.cycle_signature(C)
            if not got == expected:
                witness = {
                    "kind": "cycle",
                    "cycle": list(C),
                    "signature": base.field.format(sigma),
                    "expected": lf.lifted.format(expected),
                    "got": lf.lifted.format(got),
                    "pivots": [list(e) for e in path],
                }
                return LiftOutcome("local-only", Ahat, None, path, witness, len(closure), exhausted, depth)
    if not exhausted:
        raise DepthExceeded(f"pivot closure not exhausted within depth {depth}", len(closure))
    return LiftOutcome("global", Ahat, None, (), None, len(closure), True, depth)


FANO_FORM = ((0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1))


def _fano_form(B: PMatrix) -> PMatrix | None:
    """B permuted to the certificate pattern, if its support and scaling class match."""
    if B.shape != (3, 4):
        return None
    zero_col = {}
    for x in B.rows:
        zs = [y for y in B.cols if B[x, y].is_zero()]
        if len(zs) != 1:
            return None
        zero_col[x] = zs[0]
    if len(set(zero_col.values())) != 3:
        return None
    last = next(y for y in B.cols if y not in zero_col.values())
    cols = [zero_col[x] for x in B.rows] + [last]
    P = B.permute(B.rows, cols)
    ring = B.field.ring
    pattern = PMatrix(B.field, P.rows, P.cols, [[ring(v) for v in row] for row in FANO_FORM], check=False)
    return P if P.scaling_equivalent(pattern) else None


def _u25_form(B: PMatrix):
    """(normalized B, p, q) when B ~ [[1,1,1],[1,p,q]] with distinct p, q outside {0, 1}."""
    if B.shape != (2, 3) or any(e.is_zero() for row in B.entries for e in row):
        return None
    x0, x1 = B.rows
    y0, y1, y2 = B.cols
    N = B.normalize([(x0, y0), (x0, y1), (x0, y2), (x1, y0)])
    p, q = N[x1, y1], N[x1, y2]
    if p.is_one() or q.is_one() or p == q:
        return None
    return N, p, q


def certificate_search(A: PMatrix, lf: LiftingFunction, depth: int | None = "default") -> Certificate | None:
    """A minor in certificate form with no local lift, searched over the pivot closure."""
    from .matroid import matroid_from, name_of

    if depth == "default":
        depth = default_depth(A)
    closure, exhausted = A.pivot_closure(depth)
    seen = set()
    for key in sorted(closure, key=lambda k: (len(closure[k][1]), sorted(k))):
        M, path = closure[key]
        for transposed in (False, True):
            N = M.transpose() if transposed else M
            m, n = N.shape
            for rs in itertools.combinations(N.rows, 3):
                for cs in itertools.combinations(N.cols, 4):
                    F = _fano_form(N.submatrix(rs, cs))
                    if F is None:
                        continue
                    found = _no_local_lift(F, lf, seen)
                    if found is not None:
                        return Certificate(F, "F7-form", transposed, path, found, name=name_of(matroid_from(F, False)))
            for rs in itertools.combinations(N.rows, 2):
                for cs in itertools.combinations(N.cols, 3):
                    form = _u25_form(N.submatrix(rs, cs))
                    if form is None:
                        continue
                    U, p, q = form
                    found = _no_local_lift(U, lf, seen)
                    if found is not None:
                        return Certificate(U, "U25-form", transposed, path, found, p, q, name_of(matroid_from(U, False)))
    if not exhausted:
        raise DepthExceeded(f"no certificate within pivot depth {depth}", len(closure))
    return None


def _no_local_lift(B: PMatrix, lf: LiftingFunction, seen: set) -> dict | None:
    key = B.canonical_key()
    if key in seen:
        return None
    seen.add(key)
    try:
        build_local_lift(B, lf)
    except NoLocalLift as exc:
        return exc.witness or {"kind": "unknown"}
    return None


def lift(A: PMatrix, lf: LiftingFunction, depth: int | None = "default") -> LiftOutcome:
    """Global lift of A, or a certificate minor; LocalOnly if neither is found."""
    if depth == "default":
        depth = default_depth(A)
    try:
        Ahat = build_local_lift(A, lf)
    except NoLocalLift as exc:
        cert = certificate_search(A, lf, depth)
        if cert is not None:
            return LiftOutcome("certificate", None, cert, cert.path, exc.witness, depth=depth)
        return LiftOutcome("local-only", None, None, (), exc.witness, depth=depth)
    outcome = verify_global(Ahat, lf, depth)
    if outcome.status == "global":
        return outcome
    cert = certificate_search(A, lf, depth)
    if cert is not None:
        return LiftOutcome("certificate", Ahat, cert, cert.path, outcome.witness, outcome.explored, outcome.exhausted, depth)
    return outcome


# ---------------------------------------------------------------------------
# Equivalence conditions
# ---------------------------------------------------------------------------


@dataclass
class EquivalenceReport:
    base: str
    lifted: str
    conditions: list = dc_field(default_factory=list)
    triples: list = dc_field(default_factory=list)
    lifting_table: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["holds"] for c in self.conditions)

    @property
    def verdict(self) -> str:
        if self.passed:
            return f"{self.base}-representable <=> {self.lifted}-representable"
        bad = [c["index"] for c in self.conditions if not c["holds"]]
        return f"conditions {bad} fail; no equivalence claimed"


def check_equivalence_conditions(lf: LiftingFunction, strict: bool = True) -> EquivalenceReport:
    """Evaluate the three sufficient conditions for base/lifted representability to agree."""
    P, Q = lf.base, lf.lifted
    fun = P.fundamentals()
    if not fun.exhaustive:
        raise NonExhaustiveFun(f"fun({P.descriptor()}) is only known inside a box")
    report = EquivalenceReport(P.descriptor(), Q.descriptor(), lifting_table=lf.describe())
    two_p, two_q = P.ring(2), Q.ring(2)

    c1_applies = two_p.is_zero()
    c1 = not c1_applies or two_q.is_zero()
    report.conditions.append(
        {"index": 1, "statement": "1+1 = 0 in base implies 1+1 = 0 in lift", "applies": c1_applies, "holds": c1}
    )

    c2_applies = not two_p.is_zero() and P.member(two_p) is not None
    c2 = not c2_applies or (not two_q.is_zero() and Q.member(two_q) is not None)
    report.conditions.append(
        {
            "index": 2,
            "statement": "1+1 defined and nonzero in base implies the same in lift",
            "applies": c2_applies,
            "holds": c2,
        }
    )

    proper = [p for p in fun.sorted() if not p.is_zero()]
    first_bad = None
    one = Q.ring.one_element
    for p, q in itertools.product(proper, repeat=2):
        r = (p * q).inverse()
        if r not in fun:
            continue
        value = lf.up(p) * lf.up(q) * lf.up(r)
        ok = value == one
        report.triples.append((P.format(p), P.format(q), P.format(r), Q.format(value), ok))
        if not ok and first_bad is None:
            first_bad = (P.format(p), P.format(q), P.format(r))
    report.conditions.append(
        {
            "index": 3,
            "statement": "pqr = 1 in fun(base) implies p^ q^ r^ = 1",
            "applies": True,
            "holds": first_bad is None,
            "witness": list(first_bad) if first_bad else None,
        }
    )
    if strict:
        for c in report.conditions:
            if not c["holds"]:
                raise ConditionFailed(c["index"], c.get("witness"), report)
    return report


# ---------------------------------------------------------------------------
# 2-sums
# ---------------------------------------------------------------------------


def compose_2sum(A1hat: PMatrix, A2hat: PMatrix, lf: LiftingFunction | None = None) -> PMatrix:
    """Glue [[A1', a1], [0, 1]] and [[1, a2], [0, A2']] into [[A1', a1 a2], [0, A2']].

    The last row/column of A1hat and the first row/column of A2hat are the
    basepoint.  With ``lf`` the result is checked to be a local lift of its image.
    """
    m1, n1 = A1hat.shape
    m2, n2 = A2hat.shape
    if m1 < 1 or n1 < 1 or m2 < 1 or n2 < 1:
        raise ShapeMismatch("both summands need a basepoint row and column")
    if A1hat.field != A2hat.field:
        raise ShapeMismatch("summands over different partial fields")
    E1, E2 = A1hat.entries, A2hat.entries
    if not E1[-1][-1].is_one() or any(not e.is_zero() for e in E1[-1][:-1]):
        raise ShapeMismatch("the last row of the first summand must be [0 ... 0 1]")
    if not E2[0][0].is_one() or any(not E2[i][0].is_zero() for i in range(1, m2)):
        raise ShapeMismatch("the first column of the second summand must be [1 0 ... 0]^T")
    ring = A1hat.field.ring
    rows = A1hat.rows[:-1] + A2hat.rows[1:]
    cols = A1hat.cols[:-1] + A2hat.cols[1:]
    a1 = [E1[i][-1] for i in range(m1 - 1)]
    a2 = [E2[0][j] for j in range(1, n2)]
    ents = []
    for i in range(m1 - 1):
        ents.append(list(E1[i][:-1]) + [a1[i] * a2[j] for j in range(n2 - 1)])
    for i in range(1, m2):
        ents.append([ring.zero_element] * (n1 - 1) + list(E2[i][1:]))
    out = PMatrix(A1hat.field, rows, cols, ents)
    if lf is not None:
        bad = local_lift_violation(out, lf.hom.apply(out), lf)
        if bad is not None:
            raise NoLocalLift("2-sum is not a local lift", bad)
    return out
