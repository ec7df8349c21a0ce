"""
Ring Core - exact commutative rings with identity

Elements are plain immutable Python values in canonical form, so element
equality is equality of representations:

    Integers            int
    IntegersModN        int in [0, n)
    LocalizedIntegers   (numerator, exponent), value numerator / m**exponent
    QuadraticOrder      (x, y), value x + y*theta with theta**2 = -q
    QuotientRing        canonical residue of the base representation

Ring handles are frozen dataclasses and therefore hashable, which lets the
verdict caches key on (ring, entries).
"""
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from math import isqrt, prod
from typing import Any, ClassVar, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, TypeAdapter, ValidationError
from sympy import divisors, igcd, mod_inverse, primefactors
from sympy.core.intfunc import igcdex

from app.models.ring import (
    IntegersDescriptor,
    IntegersModNDescriptor,
    LocalizedIntegersDescriptor,
    QuadraticOrderDescriptor,
    QuotientRingDescriptor,
    RingDescriptor,
)
from app.services.errors import (
    InvariantViolation,
    PreconditionError,
    RingError,
    ZeroQuotientError,
)
from app.services.lattice import IntegerLattice
from app.utils.cache import cached_ring

logger = logging.getLogger(__name__)

Element = Any


@dataclass(frozen=True)
class Capabilities:
    """What a ring handle can do beyond arithmetic."""
    finite: bool
    bezout: bool
    divisor_enumeration: bool
    gcd: bool
    stable_range_bound: int


def _parse_int(raw: Any) -> int:
    if isinstance(raw, bool):
        raise RingError(f"Invalid integer element: {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        try:
            return int(raw.strip())
        except ValueError:
            raise RingError(f"Invalid integer element: {raw!r}")
    raise RingError(f"Invalid integer element: {raw!r}")


def _parse_pair(raw: Any) -> Tuple[int, int]:
    if isinstance(raw, (list, tuple)):
        if len(raw) != 2:
            raise RingError(f"Expected a pair, got {raw!r}")
        return _parse_int(raw[0]), _parse_int(raw[1])
    return _parse_int(raw), 0


def integer_bezout(xs: Sequence[int]) -> Tuple[List[int], int]:
    """(c, g) with sum c_i x_i = g = gcd(xs) >= 0, eliminating from left to right."""
    coefficients: List[int] = []
    g = 0
    for x in xs:
        u, v, g = (int(c) for c in igcdex(g, int(x)))
        coefficients = [c * u for c in coefficients] + [v]
    return coefficients, g


def integer_combination(target: int, xs: Sequence[int]) -> Optional[List[int]]:
    """Integers c with sum c_i x_i = target, or None."""
    coefficients, g = integer_bezout(xs)
    if g == 0:
        return [0] * len(xs) if target == 0 else None
    if target % g:
        return None
    k = target // g
    return [c * k for c in coefficients]


class Ring(ABC):
    """A concrete commutative ring with identity."""

    kind: ClassVar[str] = ""

    # ── Arithmetic ──

    @property
    @abstractmethod
    def capabilities(self) -> Capabilities:
        ...

    @abstractmethod
    def canonical(self, raw: Any) -> Element:
        """Canonical form of a raw representation."""

    @abstractmethod
    def from_int(self, k: int) -> Element:
        ...

    @abstractmethod
    def add(self, x: Element, y: Element) -> Element:
        ...

    @abstractmethod
    def neg(self, x: Element) -> Element:
        ...

    @abstractmethod
    def mul(self, x: Element, y: Element) -> Element:
        ...

    @property
    def zero(self) -> Element:
        return self.from_int(0)

    @property
    def one(self) -> Element:
        return self.from_int(1)

    def sub(self, x: Element, y: Element) -> Element:
        return self.add(x, self.neg(y))

    def is_zero(self, x: Element) -> bool:
        return x == self.zero

    def dot(self, xs: Sequence[Element], ys: Sequence[Element]) -> Element:
        total = self.zero
        for x, y in zip(xs, ys):
            total = self.add(total, self.mul(x, y))
        return total

    # ── Ideals and units ──

    @abstractmethod
    def ideal_combination(self, target: Element, xs: Sequence[Element]) -> Optional[List[Element]]:
        """Coefficients c with sum c_i x_i = target, or None when target is not in (xs)."""

    def bezout(self, xs: Sequence[Element]) -> Optional[List[Element]]:
        if not xs:
            raise PreconditionError("bezout needs a nonempty tuple")
        coefficients = self.ideal_combination(self.one, xs)
        if coefficients is not None and self.dot(coefficients, xs) != self.one:
            raise InvariantViolation(f"Bezout witness {coefficients} for {list(xs)} does not sum to 1")
        return coefficients

    def is_unimodular(self, xs: Sequence[Element]) -> bool:
        return self.bezout(xs) is not None

    def divide(self, x: Element, d: Element) -> Optional[Element]:
        """Some y with d*y = x, or None."""
        combination = self.ideal_combination(x, (d,))
        return None if combination is None else combination[0]

    def inverse(self, x: Element) -> Optional[Element]:
        return self.divide(self.one, x)

    def is_unit(self, x: Element) -> bool:
        return self.inverse(x) is not None

    def jacobson_contains(self, x: Element) -> bool:
        if not self.capabilities.finite:
            return self.is_zero(x)
        return all(self.is_unit(self.sub(self.one, self.mul(x, y))) for y in self.elements())

    def gcd(self, x: Element, y: Element) -> Element:
        raise RingError(f"gcd is not available over {self.format_ring()}")

    def divisors_up_to_units(self, x: Element) -> List[Element]:
        raise RingError(f"Divisor enumeration is not available over {self.format_ring()}")

    def integer_lift(self, xs: Sequence[Element]) -> Optional[Tuple[List[int], Element]]:
        """Integers n_i and a scale l with x_i = l * n_i, when the ring admits one."""
        return None

    # ── Quotients ──

    @abstractmethod
    def quotient(self, a: Element) -> "Ring":
        ...

    def reduce_into(self, target: "Ring", x: Element) -> Element:
        """Image of x under the quotient map into target."""
        return target.canonical(x)

    def lift_from(self, source: "Ring", y: Element) -> Element:
        """A fixed preimage of y under the quotient map from self onto source."""
        return self.canonical(y)

    # ── Enumeration ──

    @property
    def size(self) -> Optional[int]:
        return None

    def elements(self) -> Iterator[Element]:
        raise RingError(f"{self.format_ring()} is infinite; its elements cannot be enumerated")

    def units(self) -> List[Element]:
        return [x for x in self.elements() if self.is_unit(x)]

    def height(self, x: Element) -> int:
        return 0

    def shell(self, h: int) -> List[Element]:
        """Elements of height exactly h, in a fixed order."""
        if self.capabilities.finite:
            return list(self.elements()) if h == 0 else []
        raise NotImplementedError

    # ── Serialization ──

    @abstractmethod
    def parse(self, raw: Any) -> Element:
        ...

    def dump(self, x: Element) -> Any:
        return str(x)

    def format(self, x: Element) -> str:
        return str(x)

    @abstractmethod
    def descriptor(self) -> BaseModel:
        ...

    def format_ring(self) -> str:
        return json.dumps(self.descriptor().model_dump(mode="json"), sort_keys=True)


# ── Integers ──


@dataclass(frozen=True)
class Integers(Ring):
    kind: ClassVar[str] = "Z"

    @property
    def capabilities(self) -> Capabilities:
        return Capabilities(finite=False, bezout=True, divisor_enumeration=True, gcd=True, stable_range_bound=2)

    def canonical(self, raw: Any) -> int:
        return int(raw)

    def from_int(self, k: int) -> int:
        return int(k)

    def add(self, x: int, y: int) -> int:
        return x + y

    def neg(self, x: int) -> int:
        return -x

    def mul(self, x: int, y: int) -> int:
        return x * y

    def ideal_combination(self, target: int, xs: Sequence[int]) -> Optional[List[int]]:
        return integer_combination(target, xs)

    def inverse(self, x: int) -> Optional[int]:
        return x if x in (1, -1) else None

    def gcd(self, x: int, y: int) -> int:
        return int(igcd(x, y))

    def divisors_up_to_units(self, x: int) -> List[int]:
        if x == 0:
            raise PreconditionError("Divisors of zero are not enumerable")
        return [int(k) for k in divisors(abs(x))]

    def prime_divisors(self, x: int) -> List[int]:
        return [int(p) for p in primefactors(abs(x))] if x else []

    def residue_mod_prime(self, x: int, p: int) -> int:
        return x % p

    def integer_lift(self, xs: Sequence[int]) -> Tuple[List[int], int]:
        return list(xs), 1

    def quotient(self, a: int) -> Ring:
        if a == 0:
            raise PreconditionError("Quotient by zero is not finite")
        if abs(a) == 1:
            raise ZeroQuotientError(f"{a} is a unit; the quotient is the zero ring")
        return IntegersModN(abs(a))

    def height(self, x: int) -> int:
        return abs(x)

    def shell(self, h: int) -> List[int]:
        return [0] if h == 0 else [h, -h]

    def parse(self, raw: Any) -> int:
        return _parse_int(raw)

    def descriptor(self) -> IntegersDescriptor:
        return IntegersDescriptor()


# ── Residues modulo n ──


@dataclass(frozen=True)
class IntegersModN(Ring):
    n: int
    kind: ClassVar[str] = "Zmod"

    def __post_init__(self):
        if self.n < 2:
            raise RingError(f"IntegersModN needs n >= 2, got {self.n}")

    @property
    def capabilities(self) -> Capabilities:
        return Capabilities(finite=True, bezout=True, divisor_enumeration=False, gcd=False, stable_range_bound=1)

    def canonical(self, raw: Any) -> int:
        return int(raw) % self.n

    def from_int(self, k: int) -> int:
        return k % self.n

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def neg(self, x: int) -> int:
        return -x % self.n

    def mul(self, x: int, y: int) -> int:
        return x * y % self.n

    def ideal_combination(self, target: int, xs: Sequence[int]) -> Optional[List[int]]:
        combination = integer_combination(target, list(xs) + [self.n])
        if combination is None:
            return None
        return [c % self.n for c in combination[:len(xs)]]

    def inverse(self, x: int) -> Optional[int]:
        if igcd(x, self.n) != 1:
            return None
        return int(mod_inverse(x, self.n))

    @cached_property
    def radical(self) -> int:
        return prod(int(p) for p in primefactors(self.n))

    def jacobson_contains(self, x: int) -> bool:
        return x % self.radical == 0

    def integer_lift(self, xs: Sequence[int]) -> Tuple[List[int], int]:
        return list(xs), 1

    def quotient(self, a: int) -> Ring:
        g = int(igcd(a, self.n))
        if g == self.n:
            raise PreconditionError("Quotient by zero does not change the ring")
        if g == 1:
            raise ZeroQuotientError(f"{a} is a unit mod {self.n}; the quotient is the zero ring")
        return IntegersModN(g)

    def reduce_into(self, target: Ring, x: int) -> Element:
        return target.from_int(x)

    def lift_from(self, source: Ring, y: int) -> int:
        return int(y) % self.n

    @property
    def size(self) -> int:
        return self.n

    def elements(self) -> Iterator[int]:
        return iter(range(self.n))

    def parse(self, raw: Any) -> int:
        return _parse_int(raw) % self.n

    def descriptor(self) -> IntegersModNDescriptor:
        return IntegersModNDescriptor(n=self.n)


# ── Integers with m inverted ──


@dataclass(frozen=True)
class LocalizedIntegers(Ring):
    m: int
    kind: ClassVar[str] = "Zloc"

    def __post_init__(self):
        if self.m < 2:
            raise RingError(f"LocalizedIntegers needs m >= 2, got {self.m}")

    @property
    def capabilities(self) -> Capabilities:
        return Capabilities(finite=False, bezout=True, divisor_enumeration=False, gcd=True, stable_range_bound=2)

    @cached_property
    def inverted_primes(self) -> Tuple[int, ...]:
        return tuple(int(p) for p in primefactors(self.m))

    def split(self, k: int) -> Tuple[int, int]:
        """k = core * unit_part with unit_part > 0 built from the inverted primes."""
        core, unit_part = k, 1
        if k == 0:
            return 0, 1
        for p in self.inverted_primes:
            while core % p == 0:
                core //= p
                unit_part *= p
        return core, unit_part

    def _power_over(self, unit_part: int) -> int:
        """Smallest K with unit_part dividing m**K."""
        power, k = 1, 0
        while power % unit_part:
            power *= self.m
            k += 1
        return k

    def canonical(self, raw: Any) -> Tuple[int, int]:
        num, exp = (int(raw[0]), int(raw[1])) if isinstance(raw, tuple) else (int(raw), 0)
        if exp < 0:
            num, exp = num * self.m ** (-exp), 0
        if num == 0:
            return 0, 0
        while exp > 0 and num % self.m == 0:
            num //= self.m
            exp -= 1
        return num, exp

    def from_int(self, k: int) -> Tuple[int, int]:
        return int(k), 0

    def add(self, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        exp = max(x[1], y[1])
        num = x[0] * self.m ** (exp - x[1]) + y[0] * self.m ** (exp - y[1])
        return self.canonical((num, exp))

    def neg(self, x: Tuple[int, int]) -> Tuple[int, int]:
        return -x[0], x[1]

    def mul(self, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        return self.canonical((x[0] * y[0], x[1] + y[1]))

    def divide(self, x: Tuple[int, int], d: Tuple[int, int]) -> Optional[Tuple[int, int]]:
        if d[0] == 0:
            return (0, 0) if x[0] == 0 else None
        numerator = x[0] * self.m ** d[1]
        core, unit_part = self.split(d[0])
        if numerator % core:
            return None
        k = self._power_over(unit_part)
        return self.canonical(((numerator // core) * (self.m ** k // unit_part), x[1] + k))

    def ideal_combination(self, target, xs):
        numerators = [x[0] for x in xs]
        combination, g = integer_bezout(numerators)
        if g == 0:
            return [self.zero] * len(xs) if target == self.zero else None
        scale = self.divide(target, (g, 0))
        if scale is None:
            return None
        # c_i * m**e_i * x_i = c_i * numerator_i
        return [self.mul(self.canonical((c * self.m ** x[1], 0)), scale) for c, x in zip(combination, xs)]

    def inverse(self, x: Tuple[int, int]) -> Optional[Tuple[int, int]]:
        if x[0] == 0 or abs(self.split(x[0])[0]) != 1:
            return None
        return self.divide(self.one, x)

    def gcd(self, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        return int(igcd(abs(self.split(x[0])[0]), abs(self.split(y[0])[0]))), 0

    def prime_divisors(self, x: Tuple[int, int]) -> List[int]:
        core = abs(self.split(x[0])[0])
        return [int(p) for p in primefactors(core)] if core else []

    def residue_mod_prime(self, x: Tuple[int, int], p: int) -> int:
        return x[0] * int(mod_inverse(self.m ** x[1] % p, p)) % p if x[1] else x[0] % p

    def integer_lift(self, xs):
        top = max(x[1] for x in xs)
        return [x[0] * self.m ** (top - x[1]) for x in xs], self.canonical((1, top))

    def quotient(self, a: Tuple[int, int]) -> Ring:
        if a[0] == 0:
            raise PreconditionError("Quotient by zero is not finite")
        n = abs(self.split(a[0])[0])
        if n == 1:
            raise ZeroQuotientError(f"{self.format(a)} is a unit; the quotient is the zero ring")
        return IntegersModN(n)

    def reduce_into(self, target: Ring, x: Tuple[int, int]) -> Element:
        if not isinstance(target, IntegersModN):
            raise RingError("Localized integers only reduce into residue rings")
        n = target.n
        return x[0] * int(mod_inverse(self.m ** x[1] % n, n)) % n

    def lift_from(self, source: Ring, y: int) -> Tuple[int, int]:
        return int(y), 0

    def height(self, x: Tuple[int, int]) -> int:
        return abs(x[0])

    def shell(self, h: int) -> List[Tuple[int, int]]:
        return [(0, 0)] if h == 0 else [(h, 0), (-h, 0)]

    def parse(self, raw: Any) -> Tuple[int, int]:
        return self.canonical(_parse_pair(raw))

    def dump(self, x: Tuple[int, int]) -> List[str]:
        return [str(x[0]), str(x[1])]

    def format(self, x: Tuple[int, int]) -> str:
        return str(x[0]) if x[1] == 0 else f"{x[0]}/{self.m}^{x[1]}"

    def descriptor(self) -> LocalizedIntegersDescriptor:
        return LocalizedIntegersDescriptor(m=self.m)


# ── Quadratic orders Z[theta], theta^2 = -q ──


@dataclass(frozen=True)
class QuadraticOrder(Ring):
    q: int
    kind: ClassVar[str] = "Zquad"

    def __post_init__(self):
        if self.q < 1:
            raise RingError(f"QuadraticOrder needs q >= 1, got {self.q}")

    @property
    def capabilities(self) -> Capabilities:
        return Capabilities(finite=False, bezout=True, divisor_enumeration=True, gcd=False, stable_range_bound=2)

    @property
    def theta(self) -> Tuple[int, int]:
        return 0, 1

    @property
    def unit_group(self) -> Tuple[Tuple[int, int], ...]:
        if self.q == 1:
            return (1, 0), (-1, 0), (0, 1), (0, -1)
        return (1, 0), (-1, 0)

    def canonical(self, raw: Any) -> Tuple[int, int]:
        if isinstance(raw, tuple):
            return int(raw[0]), int(raw[1])
        return int(raw), 0

    def from_int(self, k: int) -> Tuple[int, int]:
        return int(k), 0

    def add(self, x, y):
        return x[0] + y[0], x[1] + y[1]

    def neg(self, x):
        return -x[0], -x[1]

    def mul(self, x, y):
        return x[0] * y[0] - self.q * x[1] * y[1], x[0] * y[1] + x[1] * y[0]

    def norm(self, x) -> int:
        return x[0] * x[0] + self.q * x[1] * x[1]

    def conjugate(self, x):
        return x[0], -x[1]

    def to_vector(self, x) -> Tuple[int, int]:
        return x

    def from_vector(self, v: Sequence[int]) -> Tuple[int, int]:
        return int(v[0]), int(v[1])

    def ideal_lattice(self, xs: Sequence[Tuple[int, int]]) -> IntegerLattice:
        """The Z-lattice of the ideal (xs), generated by x_i and theta*x_i."""
        generators = []
        for x in xs:
            generators.append(x)
            generators.append(self.mul(self.theta, x))
        return IntegerLattice(generators, 2)

    def ideal_combination(self, target, xs):
        combination = self.ideal_lattice(xs).express(target)
        if combination is None:
            return None
        # alpha * x + beta * (theta x) = (alpha + beta theta) x
        return [(combination[2 * i], combination[2 * i + 1]) for i in range(len(xs))]

    def divide(self, x, d):
        n = self.norm(d)
        if n == 0:
            return (0, 0) if x == (0, 0) else None
        p = self.mul(x, self.conjugate(d))
        if p[0] % n or p[1] % n:
            return None
        return p[0] // n, p[1] // n

    def inverse(self, x):
        return self.conjugate(x) if self.norm(x) == 1 else None

    def associate_representative(self, x) -> Tuple[int, int]:
        return max(self.mul(u, x) for u in self.unit_group)

    def divisors_up_to_units(self, x) -> List[Tuple[int, int]]:
        if x == (0, 0):
            raise PreconditionError("Divisors of zero are not enumerable")
        found = set()
        for k in divisors(self.norm(x)):
            k = int(k)
            v = 0
            while self.q * v * v <= k:
                rest = k - self.q * v * v
                u = isqrt(rest)
                if u * u == rest:
                    for candidate in ((u, v), (-u, v), (u, -v), (-u, -v)):
                        if self.divide(x, candidate) is not None:
                            found.add(self.associate_representative(candidate))
                v += 1
        return sorted(found, key=lambda d: (self.norm(d), d))

    def quotient(self, a) -> Ring:
        if a == (0, 0):
            raise PreconditionError("Quotient by zero is not finite")
        return QuotientRing(self, (a,))

    def height(self, x) -> int:
        return max(abs(x[0]), abs(x[1]))

    def shell(self, h: int) -> List[Tuple[int, int]]:
        if h == 0:
            return [(0, 0)]
        return [
            (x, y)
            for x in range(-h, h + 1)
            for y in range(-h, h + 1)
            if max(abs(x), abs(y)) == h
        ]

    def parse(self, raw: Any) -> Tuple[int, int]:
        return _parse_pair(raw)

    def dump(self, x) -> List[str]:
        return [str(x[0]), str(x[1])]

    def format(self, x) -> str:
        if x[1] == 0:
            return str(x[0])
        theta = "θ" if x[1] == 1 else ("-θ" if x[1] == -1 else f"{x[1]}θ")
        if x[0] == 0:
            return theta
        return f"{x[0]}{theta}" if theta.startswith("-") else f"{x[0]}+{theta}"

    def descriptor(self) -> QuadraticOrderDescriptor:
        return QuadraticOrderDescriptor(q=self.q)


# ── Finite quotients of Z and Z[theta] ──


@dataclass(frozen=True)
class QuotientRing(Ring):
    """
    base / (moduli). Residues are reduced against the Hermite basis of the
    ideal lattice, so every element has exactly one representation.
    """
    base: Ring
    moduli: Tuple[Element, ...]
    kind: ClassVar[str] = "Quot"

    def __post_init__(self):
        if not isinstance(self.base, (Integers, QuadraticOrder)):
            raise RingError("QuotientRing base must be Integers or QuadraticOrder")
        moduli = tuple(self.base.canonical(a) for a in self.moduli)
        if not moduli or self.base.is_zero(moduli[0]):
            raise PreconditionError("QuotientRing modulus must be nonzero")
        object.__setattr__(self, "moduli", moduli)
        if self.lattice.index() == 1:
            raise ZeroQuotientError("The moduli generate the unit ideal; the quotient is the zero ring")

    @property
    def capabilities(self) -> Capabilities:
        return Capabilities(finite=True, bezout=True, divisor_enumeration=False, gcd=False, stable_range_bound=1)

    def _to_vector(self, x) -> Tuple[int, ...]:
        return (x,) if isinstance(self.base, Integers) else x

    def _from_vector(self, v: Sequence[int]) -> Element:
        return int(v[0]) if isinstance(self.base, Integers) else (int(v[0]), int(v[1]))

    @cached_property
    def lattice(self) -> IntegerLattice:
        if isinstance(self.base, QuadraticOrder):
            return self.base.ideal_lattice(self.moduli)
        return IntegerLattice([(a,) for a in self.moduli], 1)

    def canonical(self, raw: Any) -> Element:
        return self._from_vector(self.lattice.reduce(self._to_vector(self.base.canonical(raw))))

    def from_int(self, k: int) -> Element:
        return self.canonical(self.base.from_int(k))

    def add(self, x, y):
        return self.canonical(self.base.add(x, y))

    def neg(self, x):
        return self.canonical(self.base.neg(x))

    def mul(self, x, y):
        return self.canonical(self.base.mul(x, y))

    def ideal_combination(self, target, xs):
        combination = self.base.ideal_combination(target, list(xs) + list(self.moduli))
        if combination is None:
            return None
        return [self.canonical(c) for c in combination[:len(xs)]]

    def integer_lift(self, xs):
        if isinstance(self.base, Integers):
            return list(xs), self.one
        return None

    def quotient(self, a) -> Ring:
        if self.is_zero(a):
            raise PreconditionError("Quotient by zero does not change the ring")
        return QuotientRing(self.base, self.moduli + (a,))

    @property
    def size(self) -> int:
        return self.lattice.index()

    def elements(self) -> Iterator[Element]:
        return (self._from_vector(v) for v in self.lattice.residues())

    def parse(self, raw: Any) -> Element:
        return self.canonical(self.base.parse(raw))

    def dump(self, x) -> Any:
        return self.base.dump(x)

    def format(self, x) -> str:
        return self.base.format(x)

    def descriptor(self) -> QuotientRingDescriptor:
        return QuotientRingDescriptor(
            base=self.base.descriptor(),
            modulus=self.base.dump(self.moduli[0]),
            extra_moduli=[self.base.dump(a) for a in self.moduli[1:]],
        )


# ── Construction ──

_descriptor_adapter = TypeAdapter(RingDescriptor)


def parse_descriptor(raw: Any) -> BaseModel:
    """Validate a descriptor given as a model, a dict or a JSON string."""
    if isinstance(raw, BaseModel):
        return raw
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as e:
            raise RingError(f"Malformed ring JSON: {e}")
    try:
        return _descriptor_adapter.validate_python(raw)
    except ValidationError as e:
        raise RingError(f"Invalid ring descriptor: {e.errors()[0]['msg']}")


@cached_ring
def _build_ring(descriptor: BaseModel) -> Ring:
    if isinstance(descriptor, IntegersDescriptor):
        return Integers()
    if isinstance(descriptor, IntegersModNDescriptor):
        return IntegersModN(descriptor.n)
    if isinstance(descriptor, LocalizedIntegersDescriptor):
        return LocalizedIntegers(descriptor.m)
    if isinstance(descriptor, QuadraticOrderDescriptor):
        return QuadraticOrder(descriptor.q)
    if isinstance(descriptor, QuotientRingDescriptor):
        base = _build_ring(descriptor.base)
        moduli = (base.parse(descriptor.modulus),) + tuple(base.parse(a) for a in descriptor.extra_moduli)
        return QuotientRing(base, moduli)
    raise RingError(f"Unsupported ring descriptor: {descriptor!r}")


def make_ring(descriptor: Any) -> Ring:
    """Ring handle for a descriptor (model, dict or JSON string)."""
    ring = _build_ring(parse_descriptor(descriptor))
    logger.debug("Ring handle %s ready", ring.format_ring())
    return ring


# ── Module-level operations ──


def is_unit(R: Ring, x: Element) -> bool:
    return R.is_unit(x)


def inverse(R: Ring, x: Element) -> Optional[Element]:
    return R.inverse(x)


def bezout(R: Ring, xs: Sequence[Element]) -> Optional[List[Element]]:
    """Coefficients c with sum c_i x_i = 1, or None if xs is not unimodular."""
    return R.bezout(xs)


def ideal_combination(R: Ring, target: Element, xs: Sequence[Element]) -> Optional[List[Element]]:
    return R.ideal_combination(target, xs)


def is_unimodular(R: Ring, xs: Sequence[Element]) -> bool:
    return R.is_unimodular(xs)


def jacobson_contains(R: Ring, x: Element) -> bool:
    return R.jacobson_contains(x)


def divisors_up_to_units(R: Ring, x: Element) -> List[Element]:
    return R.divisors_up_to_units(x)


def quotient_ring(R: Ring, a: Element) -> Ring:
    return R.quotient(a)


def enumerate_elements(R: Ring) -> Iterator[Element]:
    if not R.capabilities.finite:
        raise RingError(f"{R.format_ring()} is infinite; its elements cannot be enumerated")
    return R.elements()
