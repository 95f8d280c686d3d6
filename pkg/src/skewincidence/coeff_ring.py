"""Coefficient rings carrying a unital endomorphism.

A ``RingSpec`` describes an associative ring *R* with identity together
with an endomorphism sigma such that sigma(1) = 1. Elements are plain
hashable Python values stored in a canonical normal form, so two
elements are equal exactly when ``==`` says so.

Ring specs are usually built from the short DSL consumed by the
command line:

.. code-block:: python

    ring = parse_ring_spec("gf:2:2:frobenius")
    w = ring.element("w")
    w * w  # -> RingElement(w+1)

+--------------------------+-------------------------------------------+
| DSL                      | Ring                                      |
+==========================+===========================================+
| ``zmod:<n>``             | Z/n, identity endomorphism                |
| ``gf:<p>:<k>:frobenius`` | GF(p^k), sigma(x) = x^p                   |
| ``gf:<p>:<k>:identity``  | GF(p^k), identity endomorphism            |
| ``prodswap:<inner>``     | R0 x R0, sigma(a, b) = (b, a)             |
| ``prodproj:<inner>``     | R0 x R0, sigma(a, b) = (a, a)             |
| ``trunc:<n>:<m>:tsq``    | (Z/n)[t]/(t^m), sigma(t) = t^2            |
| ``zz``                   | the integers (infinite), identity         |
+--------------------------+-------------------------------------------+

Element literals: integers for ``zmod`` and ``zz``; polynomials in
``w`` (or ``ω``) for Galois fields, e.g. ``w+1`` or ``2w^2+1``;
polynomials in ``t`` for truncated rings; ``(a,b)`` for products.

"""

import functools
import itertools
import logging
import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Hashable, Iterator, Optional, Sequence

from . import exceptions

log = logging.getLogger(__name__)


# Galois fields are table driven, so keep them small
MAX_FIELD_ORDER = 256


class RingSpec(ABC):
    """An associative unital ring with a unital endomorphism sigma.

    Subclasses supply the arithmetic on canonical element values;
    everything that needs exhaustion (units by search, idempotents,
    the Jacobson radical, the center) is provided here for finite
    rings and refused for infinite ones.

    User-supplied rings should set *is_finite* and *is_commutative*
    (``None`` meaning unknown).

    """

    description: str
    is_finite: bool = True
    is_commutative: Optional[bool] = None
    zero: Hashable
    one: Hashable

    @abstractmethod
    def add(self, a, b):
        ...

    @abstractmethod
    def mul(self, a, b):
        ...

    @abstractmethod
    def neg(self, a):
        ...

    @abstractmethod
    def sigma(self, a):
        """Apply the endomorphism once."""
        ...

    @abstractmethod
    def contains(self, value) -> bool:
        """Whether *value* is a canonical element of this ring."""
        ...

    @abstractmethod
    def parse_element(self, text: str):
        ...

    @abstractmethod
    def format_element(self, a) -> str:
        ...

    def _iter_elements(self) -> Iterator:
        raise exceptions.UnsupportedQuery(f"Cannot enumerate {self}")

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def sigma_pow(self, k: int, a):
        """Apply sigma *k* times to *a* (sigma^0 is the identity)."""
        if k < 0:
            raise ValueError(f"Negative sigma exponent {k=}")
        for _ in range(k):
            a = self.sigma(a)
        return a

    def __eq__(self, other):
        return type(self) is type(other) and self.description == other.description

    def __hash__(self):
        return hash((type(self).__name__, self.description))

    def __repr__(self):
        return f"<{type(self).__name__} {self.description}>"

    def __str__(self):
        return self.description

    def element(self, value) -> "RingElement":
        """Wrap *value* (a canonical value or a literal string)."""
        if isinstance(value, str):
            value = self.parse_element(value)
        elif not self.contains(value):
            raise exceptions.RingMismatch(f"{value!r} is not an element of {self}")
        return RingElement(self, value)

    def require_finite(self, what: str):
        if not self.is_finite:
            raise exceptions.UnsupportedQuery(
                f"{what} needs an exhaustive search, but {self} is infinite."
            )

    # Enumeration
    @functools.cached_property
    def element_list(self) -> tuple:
        self.require_finite("Enumeration")
        elements = tuple(self._iter_elements())
        log.debug(f"Enumerated {len(elements)} elements of {self}")
        return elements

    def elements(self) -> tuple:
        """Every element exactly once, in a deterministic order."""
        return self.element_list

    @property
    def cardinality(self) -> int:
        return len(self.element_list)

    # Units
    @functools.cached_property
    def _inverse_table(self) -> dict:
        self.require_finite("Unit search")
        one = self.one
        elements = self.element_list
        table = {}
        for a in elements:
            for b in elements:
                if self.mul(a, b) == one and self.mul(b, a) == one:
                    table[a] = b
                    break
        return table

    def is_unit(self, a) -> bool:
        return a in self._inverse_table

    def inverse(self, a):
        """The two-sided inverse of *a*.

        Raises
        ======
        NotAUnit
          *a* has no two-sided inverse.
        """
        if not self.is_unit(a):
            raise exceptions.NotAUnit(
                f"{self.format_element(a)} is not a unit in {self}"
            )
        return self._inverse_table[a]

    def units(self) -> tuple:
        return tuple(a for a in self.elements() if self.is_unit(a))

    # Idempotents
    def is_idempotent(self, a) -> bool:
        return self.mul(a, a) == a

    @functools.cached_property
    def _idempotents(self) -> tuple:
        return tuple(a for a in self.elements() if self.is_idempotent(a))

    def idempotents(self) -> tuple:
        self.require_finite("Idempotent enumeration")
        return self._idempotents

    def is_primitive_idempotent(self, a) -> bool:
        """Whether *a* is a nonzero idempotent absorbing only 0 and itself."""
        self.require_finite("Primitivity")
        if a == self.zero or not self.is_idempotent(a):
            return False
        for f in self._idempotents:
            absorbed = self.mul(a, f) == f and self.mul(f, a) == f
            if absorbed and f not in (self.zero, a):
                return False
        return True

    def has_only_trivial_idempotents(self) -> bool:
        return set(self.idempotents()) <= {self.zero, self.one}

    # Jacobson radical
    @functools.cached_property
    def _radical(self) -> frozenset:
        self.require_finite("Jacobson radical")
        elements = self.element_list
        one = self.one

        def is_member(r):
            if self.is_commutative:
                products = (self.mul(a, r) for a in elements)
            else:
                products = (
                    self.mul(self.mul(a, r), b) for a in elements for b in elements
                )
            return all(self.is_unit(self.sub(one, ar)) for ar in products)

        radical = frozenset(r for r in elements if is_member(r))
        log.debug(f"Jacobson radical of {self} has {len(radical)} elements")
        return radical

    def is_jacobson_member(self, r) -> bool:
        """Whether 1 - a*r*b is a unit for every a, b in the ring."""
        return r in self._radical

    # Center
    def is_central(self, r) -> bool:
        if self.is_commutative:
            return True
        self.require_finite("Center membership")
        return all(self.mul(r, a) == self.mul(a, r) for a in self.element_list)

    @functools.cached_property
    def _center(self) -> tuple:
        return tuple(r for r in self.elements() if self.is_central(r))

    def central_elements(self) -> tuple:
        self.require_finite("Center enumeration")
        return self._center

    # The endomorphism
    def sigma_is_injective(self) -> bool:
        self.require_finite("Injectivity of sigma")
        images = {self.sigma(a) for a in self.element_list}
        return len(images) == len(self.element_list)

    @functools.cached_property
    def _sigma_inverse(self) -> dict:
        if not self.sigma_is_injective():
            raise exceptions.UnsupportedQuery(f"sigma is not an automorphism of {self}")
        return {self.sigma(a): a for a in self.element_list}

    def sigma_inverse_pow(self, k: int, a):
        """Apply the inverse of sigma *k* times (automorphisms only)."""
        for _ in range(k):
            a = self._sigma_inverse[a]
        return a

    def check_endomorphism(self) -> list[str]:
        """Exhaustively check that sigma is a unital ring endomorphism.

        Returns
        =======
        failures
          Human readable description of each violated law (empty when
          sigma is sound).
        """
        self.require_finite("Endomorphism check")
        failures = []
        fmt = self.format_element
        if self.sigma(self.one) != self.one:
            failures.append("sigma(1) != 1")
        for a, b in itertools.product(self.element_list, repeat=2):
            if self.sigma(self.add(a, b)) != self.add(self.sigma(a), self.sigma(b)):
                failures.append(f"sigma not additive at ({fmt(a)}, {fmt(b)})")
                break
        for a, b in itertools.product(self.element_list, repeat=2):
            if self.sigma(self.mul(a, b)) != self.mul(self.sigma(a), self.sigma(b)):
                failures.append(f"sigma not multiplicative at ({fmt(a)}, {fmt(b)})")
                break
        return failures

    def check_axioms(self) -> list[str]:
        """Exhaustively check the ring axioms.

        Returns
        =======
        failures
          Human readable description of each violated law (empty when
          the ring is sound).
        """
        self.require_finite("Axiom check")
        elements = self.element_list
        add, mul, fmt = self.add, self.mul, self.format_element
        zero, one = self.zero, self.one
        laws = {
            "additive identity": lambda a: add(a, zero) == a,
            "additive inverse": lambda a: add(a, self.neg(a)) == zero,
            "multiplicative identity": lambda a: mul(one, a) == a == mul(a, one),
            "canonical form": self.contains,
        }
        pair_laws = {
            "additive commutativity": lambda a, b: add(a, b) == add(b, a),
        }
        triple_laws = {
            "additive associativity": lambda a, b, c: add(add(a, b), c)
            == add(a, add(b, c)),
            "multiplicative associativity": lambda a, b, c: mul(mul(a, b), c)
            == mul(a, mul(b, c)),
            "left distributivity": lambda a, b, c: mul(a, add(b, c))
            == add(mul(a, b), mul(a, c)),
            "right distributivity": lambda a, b, c: mul(add(a, b), c)
            == add(mul(a, c), mul(b, c)),
        }
        failures = []
        for arity, group in [(1, laws), (2, pair_laws), (3, triple_laws)]:
            for name, law in group.items():
                for args in itertools.product(elements, repeat=arity):
                    if not law(*args):
                        shown = ", ".join(fmt(a) for a in args)
                        failures.append(f"{name} fails at ({shown})")
                        break
        return failures


class IntegersMod(RingSpec):
    """The integers modulo *n* with the identity endomorphism."""

    is_finite = True
    is_commutative = True
    zero = 0
    one = 1

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"Modulus must be at least 2, got {n}")
        self.n = n
        self.description = f"zmod:{n}"

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def sigma(self, a):
        return a

    def sigma_pow(self, k: int, a):
        return a

    def contains(self, value) -> bool:
        return type(value) is int and 0 <= value < self.n

    def _iter_elements(self):
        return iter(range(self.n))

    def is_unit(self, a) -> bool:
        return math.gcd(a, self.n) == 1

    def inverse(self, a):
        if not self.is_unit(a):
            raise exceptions.NotAUnit(f"{a} is not a unit in {self}")
        return pow(a, -1, self.n)

    def parse_element(self, text: str):
        return _parse_integer(text, self) % self.n

    def format_element(self, a) -> str:
        return str(a)


class Integers(RingSpec):
    """The ring of integers, an infinite ring with identity sigma.

    Exhaustive queries are refused; units are +1 and -1.

    """

    description = "zz"
    is_finite = False
    is_commutative = True
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def sigma(self, a):
        return a

    def sigma_pow(self, k: int, a):
        return a

    def contains(self, value) -> bool:
        return type(value) is int

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def inverse(self, a):
        if not self.is_unit(a):
            raise exceptions.NotAUnit(f"{a} is not a unit in {self}")
        return a

    def parse_element(self, text: str):
        return _parse_integer(text, self)

    def format_element(self, a) -> str:
        return str(a)


class GaloisField(RingSpec):
    """The finite field GF(p^k).

    Elements are integers in ``range(p**k)`` whose base-*p* digits are
    the coefficients of a polynomial in the generator ``w``, reduced
    modulo the first irreducible monic polynomial of degree *k*. For
    GF(4) that polynomial is w^2 + w + 1, so w*w == w + 1.

    Parameters
    ==========
    p
      The characteristic, a prime.
    k
      The degree of the extension.
    endomorphism
      "frobenius" for sigma(x) = x^p, or "identity".

    """

    is_finite = True
    is_commutative = True
    zero = 0
    one = 1

    def __init__(self, p: int, k: int, endomorphism: str = "frobenius"):
        if not _is_prime(p):
            raise ValueError(f"Characteristic {p} is not prime")
        if k < 1:
            raise ValueError(f"Degree must be positive, got {k}")
        if p**k > MAX_FIELD_ORDER:
            raise ValueError(f"GF({p}^{k}) exceeds {MAX_FIELD_ORDER} elements")
        if endomorphism not in ("frobenius", "identity"):
            raise ValueError(f"Unknown field endomorphism {endomorphism!r}")
        self.p = p
        self.k = k
        self.q = p**k
        self.endomorphism = endomorphism
        self.description = f"gf:{p}:{k}:{endomorphism}"
        self.modulus = _first_irreducible(p, k)
        log.debug(f"Using modulus {self.modulus} for GF({p}^{k})")
        # Full operation tables
        digits = [self._digits(a) for a in range(self.q)]
        self._add_table = [
            [self._from_digits([(x + y) % p for x, y in zip(da, db)]) for db in digits]
            for da in digits
        ]
        self._mul_table = [
            [self._from_digits(self._reduce(_poly_mul(da, db, p))) for db in digits]
            for da in digits
        ]
        self._neg_table = [self._from_digits([(-x) % p for x in da]) for da in digits]
        self._frobenius = [self._power(a, p) for a in range(self.q)]
        self._inv_table = [0] + [self._power(a, self.q - 2) for a in range(1, self.q)]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, digit = divmod(a, self.p)
            out.append(digit)
        return out

    def _from_digits(self, digits: Sequence[int]) -> int:
        return sum(d * self.p**e for e, d in enumerate(digits))

    def _reduce(self, poly: Sequence[int]) -> list[int]:
        remainder = _poly_rem(list(poly), self.modulus, self.p)
        return (remainder + [0] * self.k)[: self.k]

    def _power(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = self._mul_table[result][a]
        return result

    def add(self, a, b):
        return self._add_table[a][b]

    def mul(self, a, b):
        return self._mul_table[a][b]

    def neg(self, a):
        return self._neg_table[a]

    def sigma(self, a):
        if self.endomorphism == "identity":
            return a
        return self._frobenius[a]

    def contains(self, value) -> bool:
        return type(value) is int and 0 <= value < self.q

    def _iter_elements(self):
        return iter(range(self.q))

    def is_unit(self, a) -> bool:
        return a != 0

    def inverse(self, a):
        if a == 0:
            raise exceptions.NotAUnit(f"0 is not a unit in {self}")
        return self._inv_table[a]

    def parse_element(self, text: str):
        coeffs = _parse_polynomial(text, "w", self, aliases=("ω",))
        return self._from_digits(self._reduce(coeffs))

    def format_element(self, a) -> str:
        return _format_polynomial(self._digits(a), "w")


class ProductRing(RingSpec):
    """The product ring R0 x R0 with a coordinate-mixing endomorphism.

    *endomorphism* is "swap" for the automorphism (a, b) -> (b, a) or
    "proj" for the non-injective endomorphism (a, b) -> (a, a).

    """

    def __init__(self, inner: RingSpec, endomorphism: str = "swap"):
        if endomorphism not in ("swap", "proj"):
            raise ValueError(f"Unknown product endomorphism {endomorphism!r}")
        self.inner = inner
        self.endomorphism = endomorphism
        self.description = f"prod{endomorphism}:{inner.description}"
        self.is_finite = inner.is_finite
        self.is_commutative = inner.is_commutative
        self.zero = (inner.zero, inner.zero)
        self.one = (inner.one, inner.one)

    def add(self, a, b):
        return (self.inner.add(a[0], b[0]), self.inner.add(a[1], b[1]))

    def mul(self, a, b):
        return (self.inner.mul(a[0], b[0]), self.inner.mul(a[1], b[1]))

    def neg(self, a):
        return (self.inner.neg(a[0]), self.inner.neg(a[1]))

    def sigma(self, a):
        if self.endomorphism == "swap":
            return (a[1], a[0])
        return (a[0], a[0])

    def contains(self, value) -> bool:
        return (
            type(value) is tuple
            and len(value) == 2
            and all(self.inner.contains(v) for v in value)
        )

    def _iter_elements(self):
        return itertools.product(self.inner.elements(), repeat=2)

    def is_unit(self, a) -> bool:
        return self.inner.is_unit(a[0]) and self.inner.is_unit(a[1])

    def inverse(self, a):
        if not self.is_unit(a):
            raise exceptions.NotAUnit(
                f"{self.format_element(a)} is not a unit in {self}"
            )
        return (self.inner.inverse(a[0]), self.inner.inverse(a[1]))

    def parse_element(self, text: str):
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise exceptions.RingSpecSyntaxError(
                f"Expected '(a,b)' for an element of {self}, got {text!r}"
            )
        parts = split_top_level(body[1:-1], ",")
        if len(parts) != 2:
            raise exceptions.RingSpecSyntaxError(
                f"Expected two coordinates for {self}, got {text!r}"
            )
        return tuple(self.inner.parse_element(part) for part in parts)

    def format_element(self, a) -> str:
        return f"({self.inner.format_element(a[0])},{self.inner.format_element(a[1])})"


class TruncatedPolynomial(RingSpec):
    """The truncated polynomial ring (Z/n)[t]/(t^m).

    The endomorphism substitutes t -> t^2, which is well defined since
    (t^2)^m = 0. Elements are tuples of *m* coefficients, constant term
    first.

    """

    is_finite = True
    is_commutative = True

    def __init__(self, n: int, m: int):
        if n < 2 or m < 1:
            raise ValueError(f"Need n >= 2 and m >= 1, got {n=}, {m=}")
        self.n = n
        self.m = m
        self.description = f"trunc:{n}:{m}:tsq"
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)

    def add(self, a, b):
        return tuple((x + y) % self.n for x, y in zip(a, b))

    def mul(self, a, b):
        out = [0] * self.m
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j in range(self.m - i):
                out[i + j] += x * b[j]
        return tuple(c % self.n for c in out)

    def neg(self, a):
        return tuple((-x) % self.n for x in a)

    def sigma(self, a):
        out = [0] * self.m
        for i, x in enumerate(a):
            if 2 * i < self.m:
                out[2 * i] = x
        return tuple(out)

    def contains(self, value) -> bool:
        return (
            type(value) is tuple
            and len(value) == self.m
            and all(type(c) is int and 0 <= c < self.n for c in value)
        )

    def _iter_elements(self):
        return itertools.product(range(self.n), repeat=self.m)

    def is_unit(self, a) -> bool:
        return math.gcd(a[0], self.n) == 1

    def parse_element(self, text: str):
        coeffs = _parse_polynomial(text, "t", self)
        # t^m and higher vanish
        out = [c % self.n for c in coeffs[: self.m]]
        return tuple(out + [0] * (self.m - len(out)))

    def format_element(self, a) -> str:
        return _format_polynomial(a, "t")


@dataclass(frozen=True)
class RingElement:
    """A value bound to its ring, with operator overloading.

    Operators route through :py:func:`ring_arith`, so mixing elements of
    different rings raises ``RingMismatch``.

    """

    ring: RingSpec
    value: Hashable

    def __add__(self, other):
        return ring_arith("add", self, other)

    def __mul__(self, other):
        return ring_arith("mul", self, other)

    def __neg__(self):
        return ring_arith("neg", self)

    def __sub__(self, other):
        return ring_arith("add", self, ring_arith("neg", other))

    def __str__(self):
        return self.ring.format_element(self.value)


def ring_arith(op: str, a: RingElement, b: RingElement = None) -> RingElement:
    """Apply the ring operation *op* ("add", "mul" or unary "neg")."""
    ring = a.ring
    if op == "neg":
        return RingElement(ring, ring.neg(a.value))
    if op not in ("add", "mul"):
        raise ValueError(f"Unknown ring operation {op!r}")
    if b is None:
        raise ValueError(f"Ring operation {op!r} needs two operands")
    if b.ring != ring:
        raise exceptions.RingMismatch(f"Cannot {op} elements of {ring} and {b.ring}")
    func = ring.add if op == "add" else ring.mul
    return RingElement(ring, func(a.value, b.value))


def sigma_pow(k: int, r: RingElement) -> RingElement:
    return RingElement(r.ring, r.ring.sigma_pow(k, r.value))


def is_unit_ring(r: RingElement) -> bool:
    return r.ring.is_unit(r.value)


def ring_inverse(r: RingElement) -> RingElement:
    return RingElement(r.ring, r.ring.inverse(r.value))


def is_idempotent_ring(r: RingElement) -> bool:
    return r.ring.is_idempotent(r.value)


def is_primitive_idempotent_ring(r: RingElement) -> bool:
    return r.ring.is_primitive_idempotent(r.value)


def jacobson_member_ring(r: RingElement) -> bool:
    return r.ring.is_jacobson_member(r.value)


def center_member_ring(r: RingElement) -> bool:
    return r.ring.is_central(r.value)


def enumerate_elements(ring: RingSpec) -> list[RingElement]:
    return [RingElement(ring, a) for a in ring.elements()]


def parse_ring_spec(text: str) -> RingSpec:
    """Build a ring from its DSL string, e.g. ``"prodswap:zmod:3"``."""
    spec = text.strip()
    head, _, rest = spec.partition(":")
    try:
        if head == "zmod":
            return IntegersMod(int(rest))
        elif head == "gf":
            p, k, endomorphism = rest.split(":")
            return GaloisField(int(p), int(k), endomorphism=endomorphism)
        elif head in ("prodswap", "prodproj"):
            return ProductRing(parse_ring_spec(rest), endomorphism=head[4:])
        elif head == "trunc":
            n, m, substitution = rest.split(":")
            if substitution != "tsq":
                raise ValueError(f"Unknown substitution {substitution!r}")
            return TruncatedPolynomial(int(n), int(m))
        elif head == "zz" and rest == "":
            return Integers()
    except exceptions.ParseError:
        raise
    except ValueError as exc:
        raise exceptions.RingSpecSyntaxError(f"Invalid ring spec {text!r}: {exc}")
    raise exceptions.RingSpecSyntaxError(f"Unknown ring spec {text!r}")


# Literal parsing helpers

term_re = re.compile(
    r"^(?P<coeff>[+-]?\d*)\*?"  # Coefficient (optional)
    r"(?:(?P<var>[a-zA-Zω]+)(?:\^(?P<exp>\d+))?)?$"  # Variable power (optional)
)


def _parse_integer(text: str, ring: RingSpec) -> int:
    body = text.strip()
    while body.startswith("(") and body.endswith(")"):
        body = body[1:-1].strip()
    try:
        return int(body)
    except ValueError:
        raise exceptions.RingSpecSyntaxError(f"Invalid literal {text!r} for {ring}")


def _parse_polynomial(
    text: str, variable: str, ring: RingSpec, aliases: Sequence[str] = ()
) -> list[int]:
    """Parse a polynomial literal like ``2w^2+w+1`` into coefficients."""
    body = text.replace(" ", "")
    while body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    for alias in aliases:
        body = body.replace(alias, variable)
    if body == "":
        raise exceptions.RingSpecSyntaxError(f"Empty literal for {ring}")
    coeffs = {}
    # Split into signed terms, every character must land in a term
    terms = re.findall(r"[+-]?[^+-]+", body)
    if "".join(terms) != body:
        raise exceptions.RingSpecSyntaxError(f"Invalid literal {text!r} for {ring}")
    for term in terms:
        match = term_re.match(term)
        if match is None or match.group(0) in ("", "+", "-"):
            raise exceptions.RingSpecSyntaxError(f"Invalid literal {text!r} for {ring}")
        var = match.group("var")
        if var is not None and var != variable:
            raise exceptions.RingSpecSyntaxError(
                f"Unknown variable {var!r} in {text!r} for {ring}"
            )
        coeff = match.group("coeff")
        if coeff in ("", "+", "-"):
            if var is None:
                raise exceptions.RingSpecSyntaxError(
                    f"Invalid literal {text!r} for {ring}"
                )
            coeff += "1"
        if var is None:
            exp = 0
        else:
            exp = int(match.group("exp") or 1)
        coeffs[exp] = coeffs.get(exp, 0) + int(coeff)
    degree = max(coeffs)
    return [coeffs.get(e, 0) for e in range(degree + 1)]


def _format_polynomial(coeffs: Sequence[int], variable: str) -> str:
    terms = []
    for exp in reversed(range(len(coeffs))):
        c = coeffs[exp]
        if c == 0:
            continue
        if exp == 0:
            terms.append(str(c))
            continue
        power = variable if exp == 1 else f"{variable}^{exp}"
        terms.append(power if c == 1 else f"{c}{power}")
    return "+".join(terms) if terms else "0"


def split_top_level(text: str, separator: str) -> list[str]:
    """Split *text* on *separator* outside of parentheses and brackets."""
    parts, depth, current = [], 0, []
    for char in text:
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        if char == separator and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))
    return parts


# Polynomials over GF(p), coefficient lists with the constant term first


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_rem(a: list[int], modulus: Sequence[int], p: int) -> list[int]:
    """Remainder of *a* by the monic polynomial *modulus*."""
    a = [c % p for c in a]
    degree = len(modulus) - 1
    for top in reversed(range(degree, len(a))):
        factor = a[top]
        if factor == 0:
            continue
        for i, c in enumerate(modulus):
            a[top - degree + i] = (a[top - degree + i] - factor * c) % p
    return a[:degree]


def _monic_polynomials(p: int, degree: int) -> Iterator[list[int]]:
    """Monic polynomials of *degree*, by increasing base-p encoding."""
    for tail in itertools.product(range(p), repeat=degree):
        yield list(reversed(tail)) + [1]


@functools.cache
def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    for candidate in _monic_polynomials(p, k):
        divisors = (
            d for degree in range(1, k // 2 + 1) for d in _monic_polynomials(p, degree)
        )
        if not any(not any(_poly_rem(candidate, d, p)) for d in divisors):
            return tuple(candidate)
    raise ValueError(f"No irreducible polynomial of degree {k} over GF({p})")
