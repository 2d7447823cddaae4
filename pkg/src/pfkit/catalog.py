"""Named partial fields and the homomorphisms between them."""

from __future__ import annotations

import re
from functools import lru_cache

from .fields import FunPolicy, PartialField, direct_product
from .rings import (
    PrimeField,
    QuadraticField,
    RationalField,
    RationalFunctionField,
    finite_field,
)

QQ = RationalField()
QQ_A = RationalFunctionField(QQ, "a")
GF2_A = RationalFunctionField(PrimeField(2), "a")
ZETA_RING = QuadraticField(1, -1, "z")  # z^2 = z - 1
GAUSS_RING = QuadraticField(0, -1, "i")  # i^2 = -1
GOLDEN_RING = QuadraticField(1, 1, "t")  # t^2 = t + 1

_PAPER = "completeness of the box taken from the published classification"

CATALOG_NAMES = ("U0", "U1", "S", "D", "Y", "K2", "GE", "P4", "H2", "G", "U1m2")


def _build(name: str) -> PartialField:
    a = QQ_A.gen("a")
    if name == "U0":
        return PartialField(QQ, [], "U0")
    if name == "U1":
        return PartialField(
            QQ_A,
            [a, 1 - a],
            "U1",
            fun_policy=FunPolicy(1, True, "exponents bounded by the evaluations a -> 2 and a -> -1 into D"),
        )
    if name == "S":
        return PartialField(ZETA_RING, [ZETA_RING.gen("z")], "S")
    if name == "D":
        return PartialField(QQ, [2], "D", fun_policy=FunPolicy(6, True, _PAPER))
    if name == "Y":
        return PartialField(ZETA_RING, [2, ZETA_RING.gen("z")], "Y", fun_policy=FunPolicy(6, True, _PAPER))
    if name == "K2":
        return PartialField(
            QQ_A,
            [a, a - 1, a + 1],
            "K2",
            fun_policy=FunPolicy(
                3, True, "exponents bounded by the evaluations a -> +-t^(+-1) into G and a -> i into H2"
            ),
        )
    if name == "GE":
        return PartialField(QQ, [2, 3], "GE", fun_policy=FunPolicy(6, True, _PAPER + " (Gersonides)"))
    if name == "P4":
        return PartialField(QQ_A, [a, a - 1, a + 1, a - 2], "P4", fun_policy=FunPolicy(3, True, _PAPER))
    if name == "H2":
        i = GAUSS_RING.gen("i")
        return PartialField(GAUSS_RING, [i, 1 - i], "H2", fun_policy=FunPolicy(6, True, _PAPER))
    if name == "G":
        return PartialField(GOLDEN_RING, [GOLDEN_RING.gen("t")], "G", fun_policy=FunPolicy(6, True, _PAPER))
    if name == "U1m2":
        b = GF2_A.gen("a")
        return PartialField(
            GF2_A,
            [b, 1 + b],
            "U1m2",
            fun_policy=FunPolicy(6, False, "infinitely many fundamentals (a^(2^k)); truncated to the box"),
        )
    m = re.fullmatch(r"GF(\d+)", name)
    if m:
        return galois_field(int(m.group(1)))
    raise KeyError(name)


@lru_cache(maxsize=None)
def field(name: str) -> PartialField:
    """A catalog partial field by name (``U0``, ``D``, ``GF5``, ...)."""
    return _build(name)


def galois_field(q: int) -> PartialField:
    ring = finite_field(q)
    if isinstance(ring, PrimeField):
        gen = ring(ring.primitive_root)
    else:
        gen = next(x for x in ring.elements() if _is_primitive(x, q))
    return PartialField(ring, [gen], f"GF{q}")


def _is_primitive(x, q) -> bool:
    if x.is_zero():
        return False
    y, k = x, 1
    while not y.is_one():
        y, k = y * x, k + 1
    return k == q - 1


def product(*names_or_fields) -> PartialField:
    fields = [field(f) if isinstance(f, str) else f for f in names_or_fields]
    return direct_product(fields)
