"""Exact arithmetic for the ambient rings of partial fields.

Every ring is an immutable descriptor object.  Ring elements are
:class:`RingElement` instances pairing a descriptor with a canonical payload,
so equality of payloads is mathematical equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, isqrt
from typing import Iterable, Iterator, Mapping, Sequence

import sympy
from gmpy2 import mpq
from sympy.ntheory import factorint, isprime
from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import DescriptorMismatch, NonUnit, UnsupportedDescriptor


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class RingElement:
    """An element of a ring, stored as (descriptor, canonical payload)."""

    __slots__ = ("ring", "v")

    def __init__(self, ring: "Ring", v):
        self.ring = ring
        self.v = v

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise DescriptorMismatch(f"{self.ring.descriptor()} vs {other.ring.descriptor()}")
            return other
        return self.ring(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RingElement(self.ring, self.ring.add(self.v, o.v))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return RingElement(self.ring, self.ring.add(self.v, self.ring.neg(o.v)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RingElement(self.ring, self.ring.mul(self.v, o.v))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.v))

    def __truediv__(self, other):
        o = self._coerce(other)
        return RingElement(self.ring, self.ring.mul(self.v, self.ring.inv(o.v)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        return RingElement(self.ring, self.ring.pow(self.v, n))

    def inverse(self) -> "RingElement":
        return RingElement(self.ring, self.ring.inv(self.v))

    def is_zero(self) -> bool:
        return self.v == self.ring.zero

    def is_one(self) -> bool:
        return self.v == self.ring.one

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.v)

    def factor(self) -> "Factorization":
        return self.ring.factor(self)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.v == other.v and (self.ring is other.ring or self.ring == other.ring)
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == self.ring(other).v
            except (NonUnit, UnsupportedDescriptor, ZeroDivisionError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return self.ring.format(self.v)

    def __repr__(self):
        return f"<{self.ring.descriptor()}: {self.ring.format(self.v)}>"


@dataclass(frozen=True)
class Factorization:
    """``value = unit * prod(prime ** exp)`` with canonical primes."""

    unit: RingElement
    factors: tuple[tuple[RingElement, int], ...]

    def value(self) -> RingElement:
        out = self.unit
        for prime, e in self.factors:
            out = out * prime**e
        return out


# ---------------------------------------------------------------------------
# Ring base class
# ---------------------------------------------------------------------------


class Ring:
    """Common interface.  Subclasses implement payload-level operations."""

    characteristic: int = 0

    # payload hooks -------------------------------------------------------
    zero = None
    one = None

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        return self.mul(self.from_int(q.numerator), self.inv(self.from_int(q.denominator)))

    def format(self, a) -> str:
        raise NotImplementedError

    def descriptor(self) -> str:
        raise NotImplementedError

    @property
    def names(self) -> Mapping[str, object]:
        return {}

    def is_finite(self) -> bool:
        return False

    def elements(self) -> Iterator[RingElement]:
        raise UnsupportedDescriptor(f"{self.descriptor()} is not finite")

    def factor(self, x: RingElement) -> Factorization:
        raise UnsupportedDescriptor(f"factorization is not available in {self.descriptor()}")

    # derived -------------------------------------------------------------
    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def __call__(self, x) -> RingElement:
        if isinstance(x, RingElement):
            if x.ring != self:
                raise DescriptorMismatch(f"{x.ring.descriptor()} element used in {self.descriptor()}")
            return x
        if isinstance(x, bool):
            raise TypeError("booleans are not ring elements")
        if isinstance(x, int):
            return RingElement(self, self.from_int(x))
        if isinstance(x, Fraction):
            return RingElement(self, self.from_fraction(x))
        if isinstance(x, str):
            from .formats import parse_element

            return parse_element(self, x)
        raise TypeError(f"cannot coerce {x!r} into {self.descriptor()}")

    def element(self, payload) -> RingElement:
        return RingElement(self, payload)

    def gen(self, name: str) -> RingElement:
        return RingElement(self, self.names[name])

    @property
    def zero_element(self) -> RingElement:
        return RingElement(self, self.zero)

    @property
    def one_element(self) -> RingElement:
        return RingElement(self, self.one)

    def __str__(self):
        return self.descriptor()


def _fmt_rational(q: Fraction) -> str:
    """Rationals in the multiplicative element grammar: ``-3*8^-1``."""
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    num = abs(q.numerator)
    head = f"{num}*" if num != 1 else ""
    return f"{sign}{head}{q.denominator}^-1"


# ---------------------------------------------------------------------------
# Rationals and residue rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalField(Ring):
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise NonUnit("0 has no inverse")
        return 1 / a

    def is_unit(self, a):
        return a != 0

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def format(self, a):
        return _fmt_rational(a)

    def descriptor(self):
        return "Q"

    def factor(self, x):
        q = x.v
        if q == 0:
            raise ValueError("cannot factor zero")
        factors = {}
        for p, e in factorint(abs(q.numerator)).items():
            factors[p] = factors.get(p, 0) + e
        for p, e in factorint(q.denominator).items():
            factors[p] = factors.get(p, 0) - e
        unit = RingElement(self, Fraction(1 if q > 0 else -1))
        return Factorization(unit, tuple((RingElement(self, Fraction(p)), e) for p, e in sorted(factors.items())))


@dataclass(frozen=True)
class ModularIntegers(Ring):
    """The residue ring Z/nZ with payloads in [0, n)."""

    n: int
    zero = 0
    one = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("modulus must be at least 2")

    @property
    def characteristic(self):
        return self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def inv(self, a):
        if gcd(a, self.n) != 1:
            raise NonUnit(f"{a} is not invertible modulo {self.n}")
        return pow(a, -1, self.n)

    def is_unit(self, a):
        return gcd(a, self.n) == 1

    def from_int(self, n):
        return n % self.n

    def format(self, a):
        return str(a)

    def descriptor(self):
        return f"Z/{self.n}"

    def is_finite(self):
        return True

    def elements(self):
        return (RingElement(self, a) for a in range(self.n))

    def factor(self, x):
        if isprime(self.n):
            if x.v == 0:
                raise ValueError("cannot factor zero")
            return Factorization(x, ())
        raise UnsupportedDescriptor(f"Z/{self.n} is not a unique factorization domain")


@dataclass(frozen=True)
class PrimeField(ModularIntegers):
    """GF(p); identical arithmetic to Z/pZ but checked prime."""

    def __post_init__(self):
        if not isprime(self.n):
            raise ValueError(f"{self.n} is not prime")

    @property
    def p(self):
        return self.n

    def descriptor(self):
        return f"GF{self.n}"

    def factor(self, x):
        if x.v == 0:
            raise ValueError("cannot factor zero")
        return Factorization(x, ())

    @cached_property
    def primitive_root(self) -> int:
        return int(sympy.primitive_root(self.n)) if self.n > 2 else 1


# ---------------------------------------------------------------------------
# Univariate polynomials over a coefficient field (tuples, low degree first)
# ---------------------------------------------------------------------------


def _trim(c: list, zero) -> tuple:
    while c and c[-1] == zero:
        c.pop()
    return tuple(c)


def poly_add(a, b, K):
    n = max(len(a), len(b))
    out = [K.add(a[i] if i < len(a) else K.zero, b[i] if i < len(b) else K.zero) for i in range(n)]
    return _trim(out, K.zero)


def poly_neg(a, K):
    return tuple(K.neg(c) for c in a)


def poly_sub(a, b, K):
    return poly_add(a, poly_neg(b, K), K)


def poly_mul(a, b, K):
    if not a or not b:
        return ()
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == K.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = K.add(out[i + j], K.mul(x, y))
    return _trim(out, K.zero)


def poly_scale(a, c, K):
    return _trim([K.mul(x, c) for x in a], K.zero)


def poly_divmod(a, b, K):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    inv_lc = K.inv(b[-1])
    q = [K.zero] * max(len(a) - len(b) + 1, 0)
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        coef = K.mul(rem[-1], inv_lc)
        q[shift] = coef
        for i, y in enumerate(b):
            rem[shift + i] = K.add(rem[shift + i], K.neg(K.mul(coef, y)))
        rem = list(_trim(rem, K.zero))
    return _trim(q, K.zero), tuple(rem)


def poly_monic(a, K):
    if not a:
        return a
    return poly_scale(a, K.inv(a[-1]), K)


def poly_gcd(a, b, K):
    while b:
        a, b = b, poly_divmod(a, b, K)[1]
    return poly_monic(a, K)


def poly_format(a, var: str, fmt_coef) -> str:
    if not a:
        return "0"
    terms = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        s = fmt_coef(c)
        if s == "0":
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        neg = s.startswith("-")
        body = s[1:] if neg else s
        if mono:
            body = mono if body == "1" else f"{body}*{mono}"
        if not terms:
            terms.append(("-" if neg else "") + body)
        else:
            terms.append((" - " if neg else " + ") + body)
    return "".join(terms)


def _irreducible_monic(p: int, k: int) -> tuple:
    """Smallest monic irreducible polynomial of degree k over GF(p)."""
    K = PrimeField(p)
    for coeffs in itertools.product(range(p), repeat=k):
        f = tuple(coeffs) + (1,)
        if f[0] == 0:
            continue
        if all(poly_divmod(f, g, K)[1] for g in _monic_polys(p, 1, k // 2)):
            return f
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")


def _monic_polys(p: int, lo: int, hi: int):
    for d in range(lo, hi + 1):
        for coeffs in itertools.product(range(p), repeat=d):
            yield tuple(coeffs) + (1,)


# ---------------------------------------------------------------------------
# Finite fields GF(p^k), k >= 2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteField(Ring):
    """GF(p^k) as GF(p)[w]/(minpoly); payload is a k-tuple of residues."""

    p: int
    k: int
    minpoly: tuple
    var: str = "w"

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if len(self.minpoly) != self.k + 1 or self.minpoly[-1] != 1:
            raise ValueError("minpoly must be monic of degree k")

    @classmethod
    def of_order(cls, q: int, var: str = "w") -> "Ring":
        fac = factorint(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        ((p, k),) = fac.items()
        if k == 1:
            return PrimeField(p)
        return cls(p, k, _irreducible_monic(p, k), var)

    @property
    def characteristic(self):
        return self.p

    @property
    def order(self):
        return self.p**self.k

    @property
    def zero(self):
        return (0,) * self.k

    @property
    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        m = self.minpoly
        for d in range(len(prod) - 1, self.k - 1, -1):
            c = prod[d] % self.p
            if c:
                for i in range(self.k + 1):
                    prod[d - self.k + i] -= c * m[i]
        return tuple(x % self.p for x in prod[: self.k])

    def inv(self, a):
        if a == self.zero:
            raise NonUnit("0 has no inverse")
        return self.pow(a, self.order - 2)

    def is_unit(self, a):
        return a != self.zero

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    @property
    def names(self):
        return {self.var: (0, 1) + (0,) * (self.k - 2)}

    def format(self, a):
        return poly_format(_trim(list(a), 0), self.var, str)

    def descriptor(self):
        return f"GF{self.order}"

    def is_finite(self):
        return True

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield RingElement(self, tuple(reversed(coeffs)))

    def factor(self, x):
        if x.is_zero():
            raise ValueError("cannot factor zero")
        return Factorization(x, ())


def finite_field(q: int) -> Ring:
    return FiniteField.of_order(q)


class _MpqField(RationalField):
    """Rationals backed by gmpy2.mpq; internal coefficient field."""

    zero = mpq(0)
    one = mpq(1)

    def from_int(self, n):
        return mpq(n)

    def from_fraction(self, q):
        return mpq(q.numerator, q.denominator)

    def inv(self, a):
        if a == 0:
            raise NonUnit("0 has no inverse")
        return 1 / a

    def format(self, a):
        return _fmt_rational(Fraction(int(a.numerator), int(a.denominator)))


_MPQ = _MpqField()


# ---------------------------------------------------------------------------
# Rational function fields K(var) with K = Q or GF(p)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunctionField(Ring):
    """K(var): payload (num, den), coprime, den monic."""

    base: Ring
    var: str = "a"

    def __post_init__(self):
        if not isinstance(self.base, (RationalField, PrimeField)):
            raise UnsupportedDescriptor("rational functions are supported over Q and GF(p) only")

    @property
    def _coef(self) -> Ring:
        """Coefficient arithmetic; rationals use gmpy2 for speed."""
        return _MPQ if isinstance(self.base, RationalField) else self.base

    @property
    def characteristic(self):
        return self.base.characteristic

    @property
    def zero(self):
        return ((), (self._coef.one,))

    @property
    def one(self):
        return ((self._coef.one,), (self._coef.one,))

    def _make(self, num, den):
        K = self._coef
        if not den:
            raise NonUnit("zero denominator")
        if not num:
            return self.zero
        g = poly_gcd(num, den, K)
        if len(g) > 1:
            num = poly_divmod(num, g, K)[0]
            den = poly_divmod(den, g, K)[0]
        lc = den[-1]
        if lc != K.one:
            inv = K.inv(lc)
            num = poly_scale(num, inv, K)
            den = poly_scale(den, inv, K)
        return (num, den)

    def add(self, a, b):
        K = self._coef
        if a[1] == b[1]:
            return self._make(poly_add(a[0], b[0], K), a[1])
        return self._make(
            poly_add(poly_mul(a[0], b[1], K), poly_mul(b[0], a[1], K), K),
            poly_mul(a[1], b[1], K),
        )

    def neg(self, a):
        return (poly_neg(a[0], self.base), a[1])

    def mul(self, a, b):
        K = self._coef
        return self._make(poly_mul(a[0], b[0], K), poly_mul(a[1], b[1], K))

    def inv(self, a):
        if not a[0]:
            raise NonUnit("0 has no inverse")
        return self._make(a[1], a[0])

    def is_unit(self, a):
        return bool(a[0])

    def from_int(self, n):
        c = self._coef.from_int(n)
        return self._make((c,) if c != self._coef.zero else (), (self._coef.one,))

    def from_fraction(self, q):
        c = self._coef.from_fraction(q)
        return self._make((c,) if c != self._coef.zero else (), (self._coef.one,))

    def from_polys(self, num: Sequence, den: Sequence = None):
        K = self._coef
        num = _trim([K.from_int(c) if isinstance(c, int) else c for c in num], K.zero)
        den = _trim([K.from_int(c) if isinstance(c, int) else c for c in (den or (1,))], K.zero)
        return RingElement(self, self._make(num, den))

    @property
    def names(self):
        return {self.var: ((self._coef.zero, self._coef.one), (self._coef.one,))}

    def _fmt_poly(self, a):
        return poly_format(a, self.var, self._coef.format)

    def format(self, a):
        num, den = a
        ns = self._fmt_poly(num)
        if den == (self._coef.one,):
            return ns
        ds = self._fmt_poly(den)
        if len(num) > 1 and sum(1 for c in num if c != self._coef.zero) > 1:
            ns = f"({ns})"
        if sum(1 for c in den if c != self._coef.zero) > 1:
            ds = f"({ds})"
        elif den[-1] == self._coef.one and len(den) > 2:
            ds = f"({ds})"
        if ns in ("1", "-1"):
            return f"{ns[:-1]}{ds}^-1"
        return f"{ns}*{ds}^-1"

    def descriptor(self):
        return f"{self.base.descriptor()}({self.var})"

    def numerator(self, x: RingElement):
        return x.v[0]

    def denominator(self, x: RingElement):
        return x.v[1]

    def poly_element(self, poly) -> RingElement:
        return RingElement(self, self._make(tuple(poly), (self._coef.one,)))

    def _factor_poly(self, poly) -> list[tuple[tuple, int]]:
        """Monic irreducible factorization of a nonzero polynomial."""
        K = self._coef
        if len(poly) <= 1:
            return []
        x = sympy.Symbol("x")
        if isinstance(self.base, RationalField):
            sp = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(poly)], x, domain="QQ")
            _, facs = sp.factor_list()
            out = []
            for f, e in facs:
                coeffs = [mpq(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
                out.append((poly_monic(tuple(coeffs), K), e))
        else:
            sp = sympy.Poly([int(c) for c in reversed(poly)], x, modulus=K.p)
            _, facs = sp.factor_list()
            out = []
            for f, e in facs:
                coeffs = [int(c) % K.p for c in reversed(f.all_coeffs())]
                out.append((poly_monic(tuple(coeffs), K), e))
        return sorted(out, key=lambda fe: (len(fe[0]), fe[0]))

    def factor(self, x):
        if x.is_zero():
            raise ValueError("cannot factor zero")
        num, den = x.v
        K = self._coef
        unit = RingElement(self, self._make((num[-1],), (K.one,)))
        exps: dict[tuple, int] = {}
        for f, e in self._factor_poly(poly_monic(num, K)):
            exps[f] = exps.get(f, 0) + e
        for f, e in self._factor_poly(den):
            exps[f] = exps.get(f, 0) - e
        facs = tuple((self.poly_element(f), e) for f, e in sorted(exps.items(), key=lambda fe: (len(fe[0]), fe[0])) if e)
        return Factorization(unit, facs)

    def evaluate(self, x: RingElement, point: RingElement) -> RingElement:
        """Image of x under var -> point (a ring homomorphism where defined)."""
        R = point.ring

        def ev(poly):
            acc = R.zero_element
            for c in reversed(poly):
                if isinstance(self.base, RationalField):
                    c = Fraction(int(c.numerator), int(c.denominator))
                    coef = RingElement(R, R.from_fraction(c))
                else:
                    coef = RingElement(R, R.from_int(int(c)))
                acc = acc * point + coef
            return acc

        num, den = x.v
        d = ev(den)
        if not d.is_unit():
            raise NonUnit(f"denominator vanishes at {point}")
        return ev(num) / d


# ---------------------------------------------------------------------------
# Quadratic fields Q[x]/(x^2 - a x - b)
# ---------------------------------------------------------------------------

# Fundamental discriminants whose ring of integers Z[x] is norm-Euclidean.
_EUCLIDEAN_DISCRIMINANTS = {-3, -4, -7, -8, -11, 5, 8, 12, 13, 17, 21, 24, 28, 29}


def _is_fundamental_discriminant(d: int) -> bool:
    def squarefree(m):
        return all(e == 1 for e in factorint(abs(m)).values())

    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


@dataclass(frozen=True)
class QuadraticField(Ring):
    """Q[x]/(x^2 - a*x - b); payload (c0, c1) meaning c0 + c1*x."""

    a: int
    b: int
    var: str = "x"

    def __post_init__(self):
        d = self.disc
        if d >= 0 and isqrt(d) ** 2 == d:
            raise ValueError(f"x^2 - {self.a}x - {self.b} is reducible over Q")

    @property
    def disc(self) -> int:
        return self.a * self.a + 4 * self.b

    zero = (Fraction(0), Fraction(0))
    one = (Fraction(1), Fraction(0))

    def add(self, u, v):
        return (u[0] + v[0], u[1] + v[1])

    def neg(self, u):
        return (-u[0], -u[1])

    def mul(self, u, v):
        c0, c1 = u
        d0, d1 = v
        t = c1 * d1
        return (c0 * d0 + self.b * t, c0 * d1 + c1 * d0 + self.a * t)

    def norm(self, u) -> Fraction:
        c0, c1 = u
        return c0 * c0 + self.a * c0 * c1 - self.b * c1 * c1

    def conj(self, u):
        return (u[0] + self.a * u[1], -u[1])

    def inv(self, u):
        n = self.norm(u)
        if n == 0:
            raise NonUnit("0 has no inverse")
        c = self.conj(u)
        return (c[0] / n, c[1] / n)

    def is_unit(self, u):
        return u != self.zero

    def from_int(self, n):
        return (Fraction(n), Fraction(0))

    def from_fraction(self, q):
        return (Fraction(q), Fraction(0))

    @property
    def names(self):
        return {self.var: (Fraction(0), Fraction(1))}

    def format(self, u):
        c0, c1 = u
        if c1 == 0:
            return _fmt_rational(c0)
        s1 = _fmt_rational(c1)
        if s1 == "1":
            t1 = self.var
        elif s1 == "-1":
            t1 = "-" + self.var
        else:
            t1 = f"{s1}*{self.var}"
        if c0 == 0:
            return t1
        s0 = _fmt_rational(c0)
        if t1.startswith("-"):
            return f"{s0} - {t1[1:]}"
        return f"{s0} + {t1}"

    def descriptor(self):
        v = self.var
        a_part = "" if self.a == 0 else (f" - {v}" if self.a == 1 else (f" + {v}" if self.a == -1 else f" - {self.a}*{v}" if self.a > 0 else f" + {-self.a}*{v}"))
        b_part = "" if self.b == 0 else (f" - {self.b}" if self.b > 0 else f" + {-self.b}")
        return f"Q[{v}]/({v}^2{a_part}{b_part})"

    # -- ring of integers -------------------------------------------------
    def _require_integers(self):
        if not _is_fundamental_discriminant(self.disc) or self.disc not in _EUCLIDEAN_DISCRIMINANTS:
            raise UnsupportedDescriptor(
                f"factorization needs Z[{self.var}] to be a norm-Euclidean maximal order (discriminant {self.disc})"
            )

    @staticmethod
    def is_integral(u) -> bool:
        return u[0].denominator == 1 and u[1].denominator == 1

    def divides(self, d, u) -> bool:
        """Whether d divides u in Z[x] (both integral)."""
        return self.is_integral(self.mul(u, self.inv(d)))

    def _round_quotient(self, u, v):
        t = self.mul(u, self.inv(v))
        n_v = abs(self.norm(v))
        best = None
        for q0 in _near_ints(t[0]):
            for q1 in _near_ints(t[1]):
                q = (Fraction(q0), Fraction(q1))
                r = self.add(u, self.neg(self.mul(q, v)))
                n_r = abs(self.norm(r))
                if best is None or n_r < best[0]:
                    best = (n_r, q, r)
        if best[0] >= n_v:
            raise UnsupportedDescriptor("Euclidean step failed")
        return best[1], best[2]

    def int_gcd(self, u, v):
        while v != self.zero:
            _, r = self._round_quotient(u, v)
            u, v = v, r
        return u

    @cached_property
    def torsion(self) -> tuple[tuple, int]:
        """(generator, order) of the roots of unity in Z[x]."""
        if self.disc > 0:
            return ((Fraction(-1), Fraction(0)), 2)
        units = [
            (Fraction(c0), Fraction(c1))
            for c0 in range(-2, 3)
            for c1 in range(-2, 3)
            if self.norm((Fraction(c0), Fraction(c1))) == 1
        ]
        w = len(units)
        for u in units:
            if self._order(u, w) == w:
                return (u, w)
        raise AssertionError("unit group is not cyclic")

    def _order(self, u, bound):
        x = u
        for k in range(1, bound + 1):
            if x == self.one:
                return k
            x = self.mul(x, u)
        return None

    def _real_sign(self, u) -> int:
        """Sign of c0 + c1*x at the real root x = (a + sqrt(D))/2."""
        r = 2 * u[0] + self.a * u[1]
        s = u[1]
        # value = (r + s*sqrt(D)) / 2
        if r >= 0 and s >= 0:
            return 0 if r == 0 and s == 0 else 1
        if r <= 0 and s <= 0:
            return -1
        lhs, rhs = r * r, s * s * self.disc
        if r > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def _abs_gt_one(self, u) -> int:
        """Compare |u| with 1 in the real embedding: returns -1, 0, 1."""
        v = u if self._real_sign(u) > 0 else self.neg(u)
        d = self.add(v, self.neg(self.one))
        return self._real_sign(d)

    @cached_property
    def fundamental_unit(self):
        """The fundamental unit greater than 1 (real fields only)."""
        if self.disc < 0:
            return None
        self._require_integers()
        a, b = self.a, self.b
        for c1 in range(1, 10**6):
            found = []
            for sign in (1, -1):
                disc = a * a * c1 * c1 + 4 * (b * c1 * c1 + sign)
                if disc < 0:
                    continue
                s = isqrt(disc)
                if s * s != disc:
                    continue
                for num in (-a * c1 + s, -a * c1 - s):
                    if num % 2 == 0:
                        found.append((Fraction(num // 2), Fraction(c1)))
            above_one = [
                cand
                for u in found
                for cand in (u, self.neg(u), self.inv(u), self.neg(self.inv(u)))
                if self._abs_gt_one(cand) > 0 and self._real_sign(cand) > 0
            ]
            if above_one:
                best = above_one[0]
                for cand in above_one[1:]:
                    if self._real_sign(self.add(best, self.neg(cand))) > 0:
                        best = cand
                return best
        raise UnsupportedDescriptor("fundamental unit search failed")

    def unit_log(self, u) -> tuple[int, int]:
        """For a unit u return (j, k) with u = t^j * eps^k (k = 0 if imaginary)."""
        t, w = self.torsion
        k = 0
        if self.disc > 0:
            eps = self.fundamental_unit
            eps_inv = self.inv(eps)
            while True:
                c = self._abs_gt_one(u)
                if c == 0:
                    break
                if c > 0:
                    u, k = self.mul(u, eps_inv), k + 1
                else:
                    u, k = self.mul(u, eps), k - 1
        x = self.one
        for j in range(w):
            if x == u:
                return j, k
            x = self.mul(x, t)
        raise ValueError("not a unit")

    def is_integral_unit(self, u) -> bool:
        return self.is_integral(u) and abs(self.norm(u)) == 1

    def canonical_associate(self, u):
        t, w = self.torsion
        cands = []
        base = u
        if self.disc > 0:
            eps, eps_inv = self.fundamental_unit, self.inv(self.fundamental_unit)

            def size(z):
                return abs(z[0]) + abs(z[1])

            for step in (eps, eps_inv):
                while size(self.mul(base, step)) < size(base):
                    base = self.mul(base, step)
            cands = [base, self.mul(base, eps), self.mul(base, eps_inv)]
            m = min(size(z) for z in cands)
            cands = [z for z in cands if size(z) == m]
            cands = cands + [self.neg(z) for z in cands]
        else:
            x = base
            for _ in range(w):
                cands.append(x)
                x = self.mul(x, t)
        return max(cands, key=lambda z: (z[0], z[1]))

    def primes_above(self, p: int) -> list[tuple]:
        self._require_integers()
        a, b = self.a, self.b
        if p == 2:
            roots = [r for r in range(2) if (r * r - a * r - b) % 2 == 0]
        else:
            d = self.disc % p
            sq = sqrt_mod(d, p, all_roots=True) or []
            inv2 = pow(2, -1, p)
            roots = sorted({((a + s) * inv2) % p for s in sq})
        P = (Fraction(p), Fraction(0))
        if not roots:
            return [self.canonical_associate(P)]
        r = roots[0]
        pi = self.canonical_associate(self.int_gcd(P, (Fraction(-r), Fraction(1))))
        if self.disc % p == 0:
            return [pi]
        other = self.canonical_associate(self.conj(pi))
        return sorted({pi, other})

    def integral_denominator(self, u) -> int:
        return reduce(lambda x, y: x * y // gcd(x, y), (u[0].denominator, u[1].denominator), 1)

    def valuations(self, u, primes: Sequence[tuple]):
        """Split u = unit * prod(primes^e) if possible; returns (exps, unit) or None."""
        d = self.integral_denominator(u)
        num = self.mul(u, (Fraction(d), Fraction(0)))
        den = (Fraction(d), Fraction(0))
        exps = []
        for pi in primes:
            e = 0
            while self.divides(pi, num):
                num = self.mul(num, self.inv(pi))
                e += 1
            while self.divides(pi, den):
                den = self.mul(den, self.inv(pi))
                e -= 1
            exps.append(e)
        unit = self.mul(num, self.inv(den))
        if not self.is_integral_unit(unit):
            return None
        return exps, unit

    def factor(self, x):
        self._require_integers()
        u = x.v
        if u == self.zero:
            raise ValueError("cannot factor zero")
        d = self.integral_denominator(u)
        num = self.mul(u, (Fraction(d), Fraction(0)))
        ps = set(factorint(d)) | set(factorint(abs(int(self.norm(num)))))
        primes = [pi for p in sorted(ps) if p > 1 for pi in self.primes_above(p)]
        exps, unit = self.valuations(u, primes)
        facs = tuple((RingElement(self, pi), e) for pi, e in zip(primes, exps) if e)
        return Factorization(RingElement(self, unit), facs)


def _near_ints(q: Fraction) -> list[int]:
    f = q.numerator // q.denominator
    return [f - 1, f, f + 1, f + 2]


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductRing(Ring):
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("a product needs at least two factors")

    @property
    def zero(self):
        return tuple(R.zero for R in self.factors)

    @property
    def one(self):
        return tuple(R.one for R in self.factors)

    def add(self, a, b):
        return tuple(R.add(x, y) for R, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(R.neg(x) for R, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(R.mul(x, y) for R, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(R.inv(x) for R, x in zip(self.factors, a))

    def is_unit(self, a):
        return all(R.is_unit(x) for R, x in zip(self.factors, a))

    def from_int(self, n):
        return tuple(R.from_int(n) for R in self.factors)

    def from_fraction(self, q):
        return tuple(R.from_fraction(q) for R in self.factors)

    def format(self, a):
        return "(" + ",".join(R.format(x) for R, x in zip(self.factors, a)) + ")"

    def descriptor(self):
        return " x ".join(R.descriptor() for R in self.factors)

    def is_finite(self):
        return all(R.is_finite() for R in self.factors)

    def elements(self):
        for combo in itertools.product(*(list(R.elements()) for R in self.factors)):
            yield RingElement(self, tuple(e.v for e in combo))

    def make(self, components: Iterable) -> RingElement:
        comps = tuple(components)
        return RingElement(self, tuple(R(c).v for R, c in zip(self.factors, comps)))

    def component(self, x: RingElement, i: int) -> RingElement:
        return RingElement(self.factors[i], x.v[i])

    @property
    def characteristic(self):
        from math import lcm

        chars = [R.characteristic for R in self.factors]
        return 0 if 0 in chars else lcm(*chars)


# ---------------------------------------------------------------------------
# Integer polynomials in indexed indeterminates (construction + evaluation)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomialRing(Ring):
    """Z[~p0, ..., ~p(n-1)]; payload: sorted tuple of (monomial, coeff).

    A monomial is a sorted tuple of (variable index, exponent) pairs.
    """

    nvars: int
    prefix: str = "~p"
    zero = ()
    one = (((), 1),)

    @staticmethod
    def _norm(terms: dict):
        return tuple(sorted((m, c) for m, c in terms.items() if c))

    def add(self, a, b):
        acc = dict(a)
        for m, c in b:
            acc[m] = acc.get(m, 0) + c
        return self._norm(acc)

    def neg(self, a):
        return tuple((m, -c) for m, c in a)

    def mul(self, a, b):
        acc: dict = {}
        for m1, c1 in a:
            for m2, c2 in b:
                exps = dict(m1)
                for v, e in m2:
                    exps[v] = exps.get(v, 0) + e
                m = tuple(sorted(exps.items()))
                acc[m] = acc.get(m, 0) + c1 * c2
        return self._norm(acc)

    def inv(self, a):
        if a in (self.one, (((), -1),)):
            return a
        raise NonUnit("only +-1 are units of an integer polynomial ring")

    def is_unit(self, a):
        return a in (self.one, (((), -1),))

    def from_int(self, n):
        return self._norm({(): n})

    def from_fraction(self, q):
        if q.denominator != 1:
            raise NonUnit("non-integral constant")
        return self.from_int(q.numerator)

    def variable(self, i: int) -> RingElement:
        return RingElement(self, ((((i, 1),), 1),))

    @property
    def names(self):
        return {f"{self.prefix}{i}": ((((i, 1),), 1),) for i in range(self.nvars)}

    def format(self, a):
        if not a:
            return "0"
        out = []
        for m, c in sorted(a, key=lambda mc: (-sum(e for _, e in mc[0]), mc[0])):
            mono = "*".join(f"{self.prefix}{v}" + (f"^{e}" if e != 1 else "") for v, e in m)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def descriptor(self):
        return f"Z[{self.prefix}0..{self.prefix}{self.nvars - 1}]"

    def variables(self, x: RingElement) -> set[int]:
        return {v for m, _ in x.v for v, _ in m}

    def evaluate(self, x: RingElement, assignment: Mapping[int, RingElement], target: Ring) -> RingElement:
        total = target.zero_element
        for m, c in x.v:
            term = target(c)
            for v, e in m:
                term = term * assignment[v] ** e
            total = total + term
        return total
