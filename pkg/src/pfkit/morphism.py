"""Partial-field homomorphisms given by generator images."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import NonExhaustiveFun, NotAHomomorphism, NotMember, SourceMismatch
from .fields import ZERO, PartialField, direct_product
from .pmatrix import PMatrix
from .rings import QuadraticField, RationalFunctionField, RingElement


@dataclass
class Morphism:
    """phi: source -> target, fixed by the images of ``source.witness_generators``.

    Elements are mapped through their factored form
    (-1)^s * prod g_i^e_i  ->  (-1)^s * prod phi(g_i)^e_i.
    """

    source: PartialField
    target: PartialField
    images: tuple
    name: str | None = None
    nontrivial: bool = True
    verified: bool = False
    complete: bool = False
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.images = tuple(self.target.ring(x) for x in self.images)
        if self.nontrivial:
            if len(self.images) != len(self.source.witness_generators):
                raise ValueError("one image per source generator is required")
            for x in self.images:
                if x.is_zero() or self.target.member(x) is None:
                    raise NotMember(x, f"generator image {x} is not a unit of {self.target.descriptor()}")

    # construction --------------------------------------------------------
    @classmethod
    def from_function(cls, source, target, fn: Callable, name=None) -> "Morphism":
        return cls(source, target, tuple(fn(g) for g in source.witness_generators), name)

    @classmethod
    def from_assignment(cls, source: PartialField, target: PartialField, assignment: Mapping, name=None) -> "Morphism":
        """Images keyed by source elements, generator names or the ring variable.

        Generators without an explicit image are filled by substituting the
        variable's image (when given), by +-1, or, for finite groups, by
        walking the group generated by the assigned elements.
        """
        src_ring, tgt_ring = source.ring, target.ring
        var_image = None
        explicit: dict = {}
        for key, val in assignment.items():
            img = tgt_ring(val)
            if isinstance(key, str) and key in src_ring.names and key not in source.generator_names:
                var_image = img
                continue
            if isinstance(key, str) and key in source.generator_names and not _is_plain_gen(source, key):
                g = source.generators[source.generator_names.index(key)]
            else:
                g = src_ring(key)
            if isinstance(key, str) and key in src_ring.names:
                var_image = img
            explicit[g] = img
        images = []
        missing = []
        for g in source.witness_generators:
            if g in explicit:
                images.append(explicit[g])
            elif var_image is not None and _substitutable(src_ring):
                images.append(substitute(g, var_image))
            elif g.is_one():
                images.append(tgt_ring.one_element)
            elif (-g).is_one():
                images.append(-tgt_ring.one_element)
            else:
                images.append(None)
                missing.append(g)
        if missing:
            table = _walk(source, explicit, tgt_ring)
            if table is None:
                raise ValueError("missing images for " + ", ".join(str(g) for g in missing))
            for k, g in enumerate(source.witness_generators):
                if images[k] is None:
                    if g.v not in table:
                        raise ValueError(f"{g} is not generated by the assigned elements")
                    images[k] = table[g.v]
        return cls(source, target, tuple(images), name)

    @classmethod
    def trivial(cls, source, target) -> "Morphism":
        """The map sending everything to 0."""
        return cls(source, target, (), "trivial", nontrivial=False)

    @classmethod
    def identity(cls, F: PartialField) -> "Morphism":
        return cls(F, F, tuple(F.witness_generators), "id")

    # evaluation ----------------------------------------------------------
    def __call__(self, x) -> RingElement:
        v = self.source.ring(x)
        if not self.nontrivial:
            return self.target.ring.zero_element
        key = v.v
        if key in self._cache:
            return self._cache[key]
        w = self.source.member(v)
        if w is None:
            raise NotMember(v)
        if w is ZERO:
            out = self.target.ring.zero_element
        else:
            out = self.target.ring(-1) ** w.sign
            for img, e in zip(self.images, w.exponents):
                if e:
                    out = out * img**e
        self._cache[key] = out
        return out

    def apply(self, A: PMatrix) -> PMatrix:
        if A.field != self.source:
            raise SourceMismatch(f"matrix over {A.field.descriptor()}, morphism from {self.source.descriptor()}")
        if not self.nontrivial:
            raise ValueError("the trivial homomorphism does not preserve matroids")
        return A.map_entries(self, self.target)

    # verification --------------------------------------------------------
    def relation_violation(self):
        """A source relation whose image is not 1, or None."""
        for r in self.source.relations():
            if not self._relation_image(r).is_one():
                return r
        return None

    def sum_violation(self):
        """A fundamental p with phi(p) + phi(1 - p) != 1, or None."""
        one = self.target.ring.one_element
        fun = self.source.fundamentals()
        for p in fun.sorted():
            q = self.source.ring.one_element - p
            if not (self(p) + self(q) == one):
                return p, q
        return None

    def verify(self) -> "Morphism":
        if not self.nontrivial:
            self.verified = self.complete = True
            return self
        r = self.relation_violation()
        if r is not None:
            raise NotAHomomorphism(
                f"relation {r} of {self.source.descriptor()} maps to {self._relation_image(r)}, not 1",
                {"kind": "relation", "relation": list(r)},
            )
        bad = self.sum_violation()
        if bad is not None:
            p, q = bad
            got = self(p) + self(q)
            raise NotAHomomorphism(
                f"{p} + {q} = 1 but phi({p}) + phi({q}) = {self(p)} + {self(q)} = {got}",
                {"kind": "sum", "p": str(p), "q": str(q), "image_sum": str(got)},
            )
        self.verified = True
        self.complete = self.source.fundamentals().exhaustive
        return self

    def _relation_image(self, r):
        out = self.target.ring(-1) ** (r[0] % 2)
        for img, e in zip(self.images, r[1:]):
            if e:
                out = out * img**e
        return out

    def is_homomorphism(self) -> bool:
        try:
            self.verify()
        except NotAHomomorphism:
            return False
        return True

    # restriction to fundamentals ------------------------------------------
    def fun_restriction(self):
        """(bijective, witness, inverse table target -> source) on fundamentals."""
        fs, ft = self.source.fundamentals(), self.target.fundamentals()
        if not fs.exhaustive or not ft.exhaustive:
            bad = self.source if not fs.exhaustive else self.target
            raise NonExhaustiveFun(f"fun({bad.descriptor()}) is only known inside a box")
        inverse: dict = {}
        for p in fs.sorted():
            img = self(p)
            if img not in ft:
                return False, {"kind": "not-fundamental", "p": str(p), "image": str(img)}, None
            if img in inverse:
                return False, {"kind": "collision", "p": str(inverse[img]), "q": str(p), "image": str(img)}, None
            inverse[img] = p
        missed = [x for x in ft.sorted() if x not in inverse]
        if missed:
            return False, {"kind": "not-onto", "missed": [str(x) for x in missed]}, None
        return True, None, inverse

    def fun_restriction_bijective(self) -> bool:
        return self.fun_restriction()[0]

    def describe(self) -> str:
        gens = self.source.witness_generators
        parts = [f"{self.source.format(g)}={self.target.format(x)}" for g, x in zip(gens, self.images)]
        head = f"hom {self.source.descriptor()} -> {self.target.descriptor()}"
        return f"{head} : {', '.join(parts)}" if parts else head


def _is_plain_gen(source, key) -> bool:
    return key in source.ring.names


def _substitutable(ring) -> bool:
    return isinstance(ring, (RationalFunctionField, QuadraticField))


def substitute(x: RingElement, point: RingElement) -> RingElement:
    """Image of x under the ring map sending the generating variable to ``point``."""
    ring = x.ring
    R = point.ring
    if isinstance(ring, RationalFunctionField):
        return ring.evaluate(x, point)
    if isinstance(ring, QuadraticField):
        c0, c1 = x.v
        return R(Fraction(c0)) + R(Fraction(c1)) * point
    raise TypeError(f"no variable substitution for {ring.descriptor()}")


def _walk(source: PartialField, explicit: dict, tgt_ring, limit: int = 100_000):
    """Images of every element of the subgroup generated by -1 and ``explicit``."""
    src_ring = source.ring
    steps = [(src_ring(-1), tgt_ring(-1))] + list(explicit.items())
    table = {src_ring.one: tgt_ring.one_element}
    queue = deque([(src_ring.one_element, tgt_ring.one_element)])
    while queue:
        x, fx = queue.popleft()
        for g, img in steps:
            y = x * g
            if y.v not in table:
                if len(table) >= limit:
                    return None
                table[y.v] = fx * img
                queue.append((y, fx * img))
    return table


def tensor(*morphisms: Morphism) -> Morphism:
    """x -> (phi_1(x), ..., phi_k(x)) into the product of the targets."""
    if len(morphisms) < 2:
        raise ValueError("tensor needs at least two morphisms")
    src = morphisms[0].source
    for m in morphisms[1:]:
        if m.source != src:
            raise SourceMismatch(f"{m.source.descriptor()} differs from {src.descriptor()}")
    target = direct_product([m.target for m in morphisms])
    images = []
    for k in range(len(src.witness_generators)):
        parts = []
        for m in morphisms:
            x = m.images[k]
            if m.target.components:
                parts.extend(m.target.ring.component(x, i) for i in range(len(m.target.components)))
            else:
                parts.append(x)
        images.append(target.ring.make(parts))
    out = Morphism(src, target, tuple(images), "(" + " x ".join(m.name or "phi" for m in morphisms) + ")")
    if all(m.verified for m in morphisms):
        out.verify()
    return out


def projection(P: PartialField, i: int) -> Morphism:
    """The coordinate map of a product partial field."""
    if not P.components:
        raise ValueError(f"{P.descriptor()} is not a product")
    comp = P.components[i]
    return Morphism.from_function(P, comp, lambda g: P.ring.component(g, i), f"pi{i + 1}")


# ---------------------------------------------------------------------------
# Catalog homomorphisms
# ---------------------------------------------------------------------------


def _hom(src, tgt, assignment, name):
    from .catalog import field, product

    S = field(src) if isinstance(src, str) else src
    T = tgt if isinstance(tgt, PartialField) else (product(*tgt) if isinstance(tgt, tuple) else field(tgt))
    return Morphism.from_assignment(S, T, assignment, name)


def k2_search(target: PartialField | None = None) -> Morphism:
    """The first a -> (x, y) into GF(4) x H2 that is a homomorphism bijective on fundamentals."""
    from .catalog import field, product

    K2 = field("K2")
    T = target or product("GF4", "H2")
    proper = [p for p in T.fundamentals().sorted() if not p.is_zero() and not p.is_one()]
    for x in proper:
        try:
            m = Morphism.from_assignment(K2, T, {"a": x}, "psi")
        except NotMember:
            continue
        if m.is_homomorphism() and m.fun_restriction_bijective():
            return m
    raise NotAHomomorphism("no homomorphism K2 -> GF4 x H2 of the form a -> p found")


def catalog_homs() -> dict[str, Callable[[], Morphism]]:
    """Named homomorphisms, built lazily."""
    return {
        "D->GF3": lambda: _hom("D", "GF3", {"2": "-1"}, "phi3"),
        "D->GF5": lambda: _hom("D", "GF5", {"2": "2"}, "phi5"),
        "D->GF3xGF5": lambda: tensor(_hom("D", "GF3", {"2": "-1"}, "phi3").verify(), _hom("D", "GF5", {"2": "2"}, "phi5").verify()),
        "S->GF3xGF4": lambda: _hom("S", ("GF3", "GF4"), {"z": "(-1,w)"}, "phi"),
        "U1->GF3xGF4xGF5": lambda: _hom("U1", ("GF3", "GF4", "GF5"), {"a": "(-1,w,2)"}, "phi"),
        "U1->GF3xGF8": lambda: _hom("U1", ("GF3", "GF8"), {"a": "(-1,w)"}, "phi"),
        "U1->D(2)": lambda: _hom("U1", "D", {"a": "2"}, "phi"),
        "U1->D(-1)": lambda: _hom("U1", "D", {"a": "-1"}, "psi"),
        "Y->GF3xGF7": lambda: _hom("Y", ("GF3", "GF7"), {"2": "(-1,2)", "z": "(-1,3)"}, "phi"),
        "G->GF4xGF5": lambda: _hom("G", ("GF4", "GF5"), {"t": "(w,3)"}, "phi"),
        "H2->GF5xGF5": lambda: _hom("H2", ("GF5", "GF5"), {"i": "(2,3)"}, "phi"),
        "K2->GF4xH2": lambda: k2_search(),
        "P4->GF4": lambda: _hom("P4", "GF4", {"a": "w"}, "phi4"),
        "P4->GF5": lambda: _hom("P4", "GF5", {"a": "3"}, "phi5"),
        "P4->GF7": lambda: _hom("P4", "GF7", {"a": "3"}, "phi7"),
        "P4->GF8": lambda: _hom("P4", "GF8", {"a": "w"}, "phi8"),
        "GF2xGF7->U0": lambda: _hom(_gf2_gf7(), "U0", {"(1,3)": "-1"}, "phi"),
    }


def _gf2_gf7():
    from .catalog import product

    return product("GF2", "GF7")


def catalog_hom(name: str) -> Morphism:
    return catalog_homs()[name]()


def parse_hom(text: str) -> Morphism:
    """``hom <source> -> <target> [: g1=<elem>, g2=<elem>, ...]``."""
    from .errors import ParseError
    from .formats import parse_field, split_top_level

    body = text.strip()
    if body.startswith("hom "):
        body = body[4:]
    if "->" not in body:
        raise ParseError(f"bad hom descriptor {text!r}")
    head, _, images = body.partition(":")
    src_text, _, tgt_text = head.partition("->")
    src, tgt = parse_field(src_text.strip()), parse_field(tgt_text.strip())
    assignment = {}
    for part in split_top_level(images):
        if "=" not in part:
            raise ParseError(f"bad image {part!r}")
        k, _, v = part.partition("=")
        assignment[k.strip()] = v.strip()
    try:
        return Morphism.from_assignment(src, tgt, assignment)
    except (ValueError, NotMember) as exc:
        raise ParseError(str(exc)) from exc
