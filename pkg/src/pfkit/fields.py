"""Partial fields as (ring, multiplicative generators) with membership oracles.

A partial field here is the group generated by ``S ∪ {-1}`` inside the units of
an exact ring, with 0 adjoined.  A sum is defined exactly when its ring value
lands back in the group or is zero.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from sympy.ntheory import factorint, discrete_log

from . import intlinalg
from .errors import NotFundamental, NotMember, UndefinedSum, UnsupportedOracle
from .rings import (
    FiniteField,
    ModularIntegers,
    PrimeField,
    ProductRing,
    QuadraticField,
    RationalField,
    RationalFunctionField,
    Ring,
    RingElement,
    poly_divmod,
)


class _ZeroMarker:
    """Membership answer for the ring zero (which has no factored form)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def __bool__(self):
        return True


ZERO = _ZeroMarker()


@dataclass(frozen=True)
class Witness:
    """``(-1)^sign * prod(generator_i ^ exponents_i)``."""

    sign: int
    exponents: tuple[int, ...]

    def l1(self) -> int:
        return sum(abs(e) for e in self.exponents)


@dataclass(frozen=True)
class PfElement:
    field: "PartialField"
    value: RingElement
    factored: Witness | None

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class FunPolicy:
    """How the fundamental set of an infinite group is searched."""

    box: int = 6
    exhaustive: bool = False
    reason: str = "bounded search; completeness not established"


@dataclass(frozen=True)
class FundamentalSet:
    field: "PartialField"
    elements: frozenset
    bound: int | None
    exhaustive: bool
    reason: str

    def __contains__(self, x):
        return x in self.elements

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.elements)

    def sorted(self) -> list[RingElement]:
        return sorted(self.elements, key=self.field.sort_key)

    def format(self) -> str:
        return "{" + ", ".join(self.field.format(p) for p in self.sorted()) + "}"


@dataclass
class SumChainReport:
    """Left-to-right evaluation of a sum, recording where definedness breaks."""

    terms: list[RingElement]
    partial_sums: list[RingElement]
    defined: list[bool]
    final: RingElement
    final_is_member: bool

    @property
    def first_undefined(self) -> int | None:
        for i, ok in enumerate(self.defined):
            if not ok:
                return i
        return None

    @property
    def divergence(self) -> bool:
        """An intermediate sum is undefined while the full ring value is in the group."""
        return self.first_undefined is not None and self.final_is_member

    def note(self) -> str:
        idx = self.first_undefined
        if idx is None:
            return "every partial sum is defined"
        shown = " + ".join(str(t) for t in self.terms[: idx + 2])
        msg = f"partial sum {shown} = {self.partial_sums[idx]} is undefined"
        if self.divergence:
            msg += (
                f"; ring-semantics divergence: the full sum {self.final} is in the group, "
                "so order-free ring semantics accept it while stepwise association rejects it"
            )
        return msg


# ---------------------------------------------------------------------------
# Finite groups by enumeration
# ---------------------------------------------------------------------------


def _enumerate_group(ring: Ring, gens: Sequence[RingElement], limit: int = 200_000):
    """BFS over the group generated by -1 and gens.

    Returns (witness table keyed by payload, list of Schreier relations).
    Relation vectors are indexed (sign, gen_1, ..., gen_m).
    """
    m = len(gens)
    steps = [(ring(-1).v, (1,) + (0,) * m)] + [
        (g.v, (0,) + tuple(int(i == j) for j in range(m))) for i, g in enumerate(gens)
    ]
    start = ring.one
    table = {start: (0,) * (m + 1)}
    order = deque([start])
    relations = set()
    while order:
        x = order.popleft()
        wx = table[x]
        for gv, e in steps:
            y = ring.mul(x, gv)
            wy_new = tuple(a + b for a, b in zip(wx, e))
            if y in table:
                rel = tuple(a - b for a, b in zip(wy_new, table[y]))
                if any(rel):
                    relations.add(rel)
            else:
                table[y] = wy_new
                order.append(y)
                if len(table) > limit:
                    raise UnsupportedOracle(f"group exceeds {limit} elements")
    return table, sorted(relations)


class EnumerationOracle:
    """Membership by exhaustive enumeration of a finite group."""

    finite = True

    def __init__(self, ring: Ring, gens: Sequence[RingElement]):
        self.ring = ring
        table, rels = _enumerate_group(ring, gens)
        self._table = {v: Witness(w[0] % 2, w[1:]) for v, w in table.items()}
        self._relations = rels

    def member(self, v: RingElement) -> Witness | None:
        return self._table.get(v.v)

    def relations(self):
        return list(self._relations)

    def elements(self) -> Iterator[RingElement]:
        return (RingElement(self.ring, v) for v in self._table)


# ---------------------------------------------------------------------------
# Log coordinates for infinite rings: torsion index (mod w) + free vector
# ---------------------------------------------------------------------------


class _RationalLog:
    torsion_order = 2

    def __init__(self, ring: RationalField, gens):
        primes = set()
        for g in gens:
            primes |= set(factorint(abs(g.v.numerator))) | set(factorint(g.v.denominator))
        self.primes = sorted(primes)

    @property
    def rank(self):
        return len(self.primes)

    def log_rational(self, q: Fraction):
        t = 0 if q > 0 else 1
        num, den = abs(q.numerator), q.denominator
        exps = []
        for p in self.primes:
            e = 0
            while num % p == 0:
                num //= p
                e += 1
            while den % p == 0:
                den //= p
                e -= 1
            exps.append(e)
        if num != 1 or den != 1:
            return None
        return t, exps

    def log(self, v: RingElement):
        return self.log_rational(v.v)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class _FunctionFieldLog:
    def __init__(self, ring: RationalFunctionField, gens):
        self.ring = ring
        K = ring.base
        polys = set()
        consts = []
        for g in gens:
            num, den = g.v
            for f, _ in ring._factor_poly(num) + ring._factor_poly(den):
                polys.add(f)
            consts.append(_to_fraction(num[-1]) if isinstance(K, RationalField) else num[-1])
        self.polys = sorted(polys, key=lambda f: (len(f), f))
        if isinstance(K, RationalField):
            self.const_log = _RationalLog(RationalField(), [RationalField()(c) for c in consts])
            self.torsion_order = 2
        else:
            self.const_log = None
            self.torsion_order = K.p - 1

    @property
    def rank(self):
        return len(self.polys) + (self.const_log.rank if self.const_log else 0)

    def log(self, v: RingElement):
        K = self.ring._coef
        num, den = v.v
        exps = []
        for f in self.polys:
            e = 0
            while len(num) >= len(f):
                q, r = poly_divmod(num, f, K)
                if r:
                    break
                num, e = q, e + 1
            while len(den) >= len(f):
                q, r = poly_divmod(den, f, K)
                if r:
                    break
                den, e = q, e - 1
            exps.append(e)
        if len(den) != 1 or len(num) != 1:
            return None
        c = num[0]
        if self.const_log is not None:
            res = self.const_log.log_rational(_to_fraction(c))
            if res is None:
                return None
            return res[0], exps + res[1]
        if K.p == 2:
            return 0, exps
        return int(discrete_log(K.p, c, K.primitive_root)), exps


class _QuadraticLog:
    def __init__(self, ring: QuadraticField, gens):
        ring._require_integers()
        self.ring = ring
        rational_primes = set()
        for g in gens:
            d = ring.integral_denominator(g.v)
            num = ring.mul(g.v, (Fraction(d), Fraction(0)))
            rational_primes |= set(factorint(d)) | set(factorint(abs(int(ring.norm(num)))))
        self.primes = [pi for p in sorted(rational_primes) if p > 1 for pi in ring.primes_above(p)]
        self.real = ring.disc > 0
        self.torsion_order = ring.torsion[1]

    @property
    def rank(self):
        return len(self.primes) + int(self.real)

    def log(self, v: RingElement):
        res = self.ring.valuations(v.v, self.primes)
        if res is None:
            return None
        exps, unit = res
        j, k = self.ring.unit_log(unit)
        return j, ([k] if self.real else []) + exps


def _log_system(ring: Ring, gens):
    if isinstance(ring, RationalField):
        return _RationalLog(ring, gens)
    if isinstance(ring, RationalFunctionField):
        return _FunctionFieldLog(ring, gens)
    if isinstance(ring, QuadraticField):
        return _QuadraticLog(ring, gens)
    raise UnsupportedOracle(f"no membership oracle for {ring.descriptor()}")


class LatticeOracle:
    """Membership by solving for exponents in the log lattice.

    Columns: -1, the generators, and one torsion-modulus column.
    Rows: torsion coordinate, then the free coordinates.
    """

    def __init__(self, ring: Ring, gens: Sequence[RingElement]):
        self.ring = ring
        self.gens = tuple(gens)
        self.logs = _log_system(ring, gens)
        w = self.logs.torsion_order
        cols = [self.logs.log(ring(-1))] + [self.logs.log(g) for g in gens]
        if any(c is None for c in cols):
            raise UnsupportedOracle("generator outside its own log basis")
        n_free = self.logs.rank
        self.matrix = [[c[0] % w for c in cols] + [w]]
        for r in range(n_free):
            self.matrix.append([c[1][r] for c in cols] + [0])
        self.ncols = len(cols) + 1
        free_rank = intlinalg.column_echelon(self.matrix[1:], self.ncols).rank if n_free else 0
        self.finite = free_rank == 0
        self._elements = None

    def member(self, v: RingElement) -> Witness | None:
        lv = self.logs.log(v)
        if lv is None:
            return None
        w = self.logs.torsion_order
        b = [lv[0] % w] + list(lv[1])
        x = intlinalg.solve(self.matrix, b, self.ncols)
        if x is None:
            return None
        return Witness(x[0] % 2, tuple(x[1:-1]))

    def relations(self):
        out = []
        for k in intlinalg.kernel(self.matrix, self.ncols):
            r = tuple(k[:-1])
            if any(r):
                out.append(r)
        return out

    def free_log(self, v: RingElement) -> tuple[int, ...] | None:
        lv = self.logs.log(v)
        return None if lv is None else tuple(lv[1])

    def elements(self):
        if not self.finite:
            raise UnsupportedOracle("group is infinite")
        if self._elements is None:
            table, _ = _enumerate_group(self.ring, self.gens)
            self._elements = [RingElement(self.ring, v) for v in table]
        return iter(self._elements)


class ProductOracle:
    """Componentwise membership for a direct product of partial fields.

    Generator layout: for each component, its embedded -1 then its generators.
    """

    def __init__(self, ring: ProductRing, components: Sequence["PartialField"]):
        self.ring = ring
        self.components = tuple(components)
        self.finite = all(c.is_group_finite() for c in components)

    def member(self, v: RingElement) -> Witness | None:
        exps: list[int] = []
        for i, comp in enumerate(self.components):
            w = comp.member(self.ring.component(v, i))
            if w is None or w is ZERO:
                return None
            exps.append(w.sign)
            exps.extend(w.exponents)
        return Witness(0, tuple(exps))

    def relations(self):
        sizes = [1 + len(c.generators) for c in self.components]
        total = sum(sizes)
        out = []
        offset = 0
        for comp, size in zip(self.components, sizes):
            for r in comp.relations():
                vec = [0] * (1 + total)
                vec[1 + offset : 1 + offset + size] = r
                out.append(tuple(vec))
            offset += size
        glob = [0] * (1 + total)
        glob[0] = 1
        offset = 0
        for size in sizes:
            glob[1 + offset] = 1
            offset += size
        out.append(tuple(glob))
        return out

    def elements(self):
        for combo in itertools.product(*(list(c.group_elements()) for c in self.components)):
            yield RingElement(self.ring, tuple(e.v for e in combo))


def default_oracle(ring: Ring, gens: Sequence[RingElement]):
    if ring.is_finite():
        return EnumerationOracle(ring, gens)
    return LatticeOracle(ring, gens)


# ---------------------------------------------------------------------------
# Partial fields
# ---------------------------------------------------------------------------


class PartialField:
    """The partial field generated by ``generators`` and -1 inside ``ring``."""

    def __init__(
        self,
        ring: Ring,
        generators: Iterable = (),
        name: str | None = None,
        *,
        fun_policy: FunPolicy | None = None,
        components: Sequence["PartialField"] | None = None,
        generator_names: Sequence[str] | None = None,
    ):
        self.ring = ring
        self.generators = tuple(ring(g) for g in generators)
        for g in self.generators:
            if not g.is_unit():
                raise NotMember(g, f"generator {g} is not a unit of {ring.descriptor()}")
        self.name = name
        self.fun_policy = fun_policy or FunPolicy()
        self.components = tuple(components) if components else None
        self.generator_names = tuple(generator_names) if generator_names else tuple(
            ring.format(g.v) for g in self.generators
        )
        self._oracle = None
        self._member_cache: dict = {}
        self._fun: FundamentalSet | None = None

    # identity ------------------------------------------------------------
    def _key(self):
        return (self.ring, tuple(g.v for g in self.generators))

    def __eq__(self, other):
        return isinstance(other, PartialField) and (self is other or self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def descriptor(self) -> str:
        if self.name:
            return self.name
        if self.components:
            return "product " + " ".join(c.descriptor() for c in self.components)
        gens = ",".join(self.format(g) for g in self.generators)
        return f"custom ring={self.ring.descriptor()} gens={gens}"

    def __repr__(self):
        return f"PartialField({self.descriptor()})"

    __str__ = descriptor

    # membership ----------------------------------------------------------
    @property
    def oracle(self):
        if self._oracle is None:
            if self.components:
                self._oracle = ProductOracle(self.ring, self.components)
            else:
                self._oracle = default_oracle(self.ring, self.generators)
        return self._oracle

    def __call__(self, x) -> RingElement:
        """Coerce into the ring and check membership."""
        v = self.ring(x)
        if self.member(v) is None:
            raise NotMember(v)
        return v

    def member(self, v) -> Witness | _ZeroMarker | None:
        if not isinstance(v, RingElement):
            v = self.ring(v)
        key = v.v
        if key in self._member_cache:
            return self._member_cache[key]
        if v.is_zero():
            res = ZERO
        elif self.components:
            res = self.oracle.member(v)
        elif not v.is_unit():
            res = None
        else:
            res = self.oracle.member(v)
        self._member_cache[key] = res
        return res

    def __contains__(self, v) -> bool:
        return self.member(v) is not None

    def element(self, x) -> PfElement:
        v = self.ring(x)
        w = self.member(v)
        if w is None:
            raise NotMember(v)
        return PfElement(self, v, None if w is ZERO else w)

    def evaluate(self, w: Witness) -> RingElement:
        gens = self.generators
        if self.components:
            gens = self._product_layout()
        out = self.ring(-1) ** w.sign
        for g, e in zip(gens, w.exponents):
            if e:
                out = out * g**e
        return out

    def _product_layout(self) -> list[RingElement]:
        gens = []
        for i, comp in enumerate(self.components):
            for g in [comp.ring(-1)] + list(comp.generators):
                parts = [c.ring.one_element for c in self.components]
                parts[i] = g
                gens.append(self.ring.make(parts))
        return gens

    @property
    def witness_generators(self) -> list[RingElement]:
        """The elements indexed by witness exponent vectors."""
        return self._product_layout() if self.components else list(self.generators)

    def relations(self) -> list[tuple[int, ...]]:
        """Integer vectors (sign, e_1, ...) whose witness value is 1."""
        return self.oracle.relations()

    def is_group_finite(self) -> bool:
        return self.oracle.finite

    def group_elements(self) -> Iterator[RingElement]:
        return self.oracle.elements()

    # arithmetic ----------------------------------------------------------
    def add(self, a, b) -> RingElement:
        s = self.ring(a) + self.ring(b)
        if self.member(s) is None:
            raise UndefinedSum(s)
        return s

    def sum_chain(self, terms: Sequence) -> SumChainReport:
        vals = [self.ring(t) for t in terms]
        partial = [vals[0]]
        for t in vals[1:]:
            partial.append(partial[-1] + t)
        defined = [self.member(p) is not None for p in partial[1:]]
        return SumChainReport(vals, partial[1:], defined, partial[-1], self.member(partial[-1]) is not None)

    def format(self, v: RingElement) -> str:
        return self.ring.format(v.v)

    def sort_key(self, v: RingElement):
        if v.is_zero():
            return (0,)
        if self.components:
            keys = [c.sort_key(self.ring.component(v, i)) for i, c in enumerate(self.components)]
            return (1, sum(k[1] for k in keys if len(k) > 1), tuple(keys))
        w = self.member(v)
        if w is None:
            return (2, str(v))
        return (1, w.l1(), w.sign, tuple(-e for e in w.exponents), str(v))

    # fundamentals --------------------------------------------------------
    def is_fundamental(self, p) -> bool:
        p = self.ring(p)
        return p in self and (self.ring.one_element - p) in self

    def fundamentals(self) -> FundamentalSet:
        if self._fun is None:
            self._fun = self._compute_fundamentals()
        return self._fun

    def _compute_fundamentals(self) -> FundamentalSet:
        one = self.ring.one_element
        zero = self.ring.zero_element
        if self.components:
            comp_funs = [c.fundamentals() for c in self.components]
            elems = {zero, one}
            proper = [[p for p in f.elements if not p.is_zero() and not p.is_one()] for f in comp_funs]
            for combo in itertools.product(*proper):
                elems.add(self.ring.make(combo))
            exhaustive = all(f.exhaustive for f in comp_funs)
            reason = "componentwise from " + "; ".join(f"{c.descriptor()}: {f.reason}" for c, f in zip(self.components, comp_funs))
            return FundamentalSet(self, frozenset(elems), None, exhaustive, reason)
        if self.is_group_finite():
            elems = {zero} | {p for p in self.group_elements() if (one - p) in self}
            return FundamentalSet(self, frozenset(elems), None, True, "finite group enumerated")
        box = self.fun_policy.box
        elems = {zero, one}
        powers = [[g**e for e in range(-box, box + 1)] for g in self.generators]
        for combo in itertools.product(*powers):
            base = one
            for x in combo:
                if not x.is_one():
                    base = base * x
            for p in (base, -base):
                if p not in elems and (one - p) in self:
                    elems.add(p)
        return FundamentalSet(self, frozenset(elems), box, self.fun_policy.exhaustive, self.fun_policy.reason)

    # constructions -------------------------------------------------------
    def sub(self, generators: Iterable, name: str | None = None) -> "PartialField":
        gens = [self.ring(g) for g in generators]
        for g in gens:
            if self.member(g) is None or g.is_zero():
                raise NotMember(g)
        return PartialField(self.ring, gens, name)


def assoc(field: PartialField, p) -> set[RingElement]:
    """The associates of a fundamental element."""
    p = field.ring(p)
    if not field.is_fundamental(p):
        raise NotFundamental(p)
    if p.is_zero() or p.is_one():
        return {field.ring.zero_element, field.ring.one_element}
    one = field.ring.one_element
    q = one - p
    return {p, q, one / q, p / (p - 1), (p - 1) / p, one / p}


def assoc_closure(field: PartialField, ps: Iterable) -> set[RingElement]:
    out: set[RingElement] = set()
    for p in ps:
        out |= assoc(field, p)
    return out


def direct_product(fields: Sequence[PartialField]) -> PartialField:
    """The partial field of tuples, nonzero in every coordinate or zero in all."""
    flat: list[PartialField] = []
    for f in fields:
        flat.extend(f.components if f.components else [f])
    if len(flat) < 2:
        raise ValueError("a product needs at least two factors")
    ring = ProductRing(tuple(f.ring for f in flat))
    gens = []
    for i, comp in enumerate(flat):
        for g in comp.generators:
            parts = [c.ring.one_element for c in flat]
            parts[i] = g
            gens.append(ring.make(parts))
    return PartialField(ring, gens, None, components=flat)
