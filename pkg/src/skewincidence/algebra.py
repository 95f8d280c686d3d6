"""Elements and arithmetic of the skew incidence ring I(X, R, sigma).

An ``AlgebraContext`` binds a labeled poset *X* to a coefficient ring
*R*. A ``SkewElement`` is a function on the comparable pairs of *X*
stored sparsely: absent pairs are zero and zero coefficients are never
stored, so equality is plain coefficient equality.

The product is the twisted convolution

    (fg)(x_i, x_j) = sum over x_i <= x_k <= x_j of f(x_i, x_k) sigma^(k-i)(g(x_k, x_j))

where the exponent is the global label difference ``k - i``.

Element expressions (see :py:func:`format_element`) are sums of terms
like ``3*e[1,2]``, ``(w+1)*e[2]`` or ``1*delta``.

"""

import itertools
import logging
from types import MappingProxyType
from typing import Iterator, Mapping

import numpy as np

from . import exceptions
from .coeff_ring import RingSpec
from .poset import Poset

log = logging.getLogger(__name__)


DEFAULT_ENUMERATION_BOUND = 2**16
SIGMA_TABLE_LIMIT = 4096


class AlgebraContext:
    """The skew incidence ring of *poset* over *ring*.

    Parameters
    ==========
    poset
      The labeled poset X.
    ring
      The coefficient ring R with its endomorphism sigma.
    bound
      Largest algebra cardinality that may be enumerated.

    """

    def __init__(
        self, poset: Poset, ring: RingSpec, *, bound: int = DEFAULT_ENUMERATION_BOUND
    ):
        self.poset = poset
        self.ring = ring
        self.bound = bound
        self.pairs = poset.comparable_pairs
        self._pair_set = frozenset(self.pairs)
        # sigma^k for k < n, fixed at construction so readers never race
        self._sigma_tables = self._build_sigma_tables()

    def _build_sigma_tables(self):
        ring = self.ring
        if not ring.is_finite or ring.cardinality > SIGMA_TABLE_LIMIT:
            return None
        tables = [{a: a for a in ring.elements()}]
        for _ in range(1, max(self.poset.n, 1)):
            tables.append({a: ring.sigma(b) for a, b in tables[-1].items()})
        log.debug(f"Built {len(tables)} sigma power tables for {ring}")
        return tuple(tables)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraContext)
            and self.poset == other.poset
            and self.ring == other.ring
        )

    def __hash__(self):
        return hash((self.poset, self.ring))

    def __repr__(self):
        return f"<AlgebraContext {self.poset!r} over {self.ring}>"

    def twist(self, k: int, a):
        """sigma^k(a)."""
        if self._sigma_tables is not None:
            return self._sigma_tables[k][a]
        return self.ring.sigma_pow(k, a)

    def is_comparable(self, i: int, j: int) -> bool:
        return (i, j) in self._pair_set

    @property
    def cardinality(self) -> int:
        self.ring.require_finite("Algebra cardinality")
        return self.ring.cardinality ** len(self.pairs)

    # Constructors
    def zero(self) -> "SkewElement":
        return SkewElement(self, {})

    def delta(self) -> "SkewElement":
        return self.scalar_embed(self.ring.one)

    def scalar_embed(self, r) -> "SkewElement":
        """The diagonal-constant element r*delta."""
        return SkewElement(self, {(x, x): r for x in self.poset.elements})

    def basis_e(self, i: int, j: int = None) -> "SkewElement":
        """The spanning element e_ij (or e_i when *j* is omitted)."""
        j = i if j is None else j
        if not self.is_comparable(i, j):
            raise exceptions.UnsupportedPair((i, j))
        return SkewElement(self, {(i, j): self.ring.one})

    def element(self, coeffs: Mapping) -> "SkewElement":
        """Build an element from ``{(i, j): coefficient}`` with validation."""
        clean = {}
        for pair, value in coeffs.items():
            if not self.is_comparable(*pair):
                raise exceptions.UnsupportedPair(pair)
            if not self.ring.contains(value):
                raise exceptions.RingMismatch(
                    f"{value!r} is not an element of {self.ring}"
                )
            clean[pair] = value
        return SkewElement(self, clean)

    def enumerate(self) -> Iterator["SkewElement"]:
        """Every element exactly once, in lexicographic coefficient order.

        Raises
        ======
        UnsupportedQuery
          The ring is infinite or the algebra exceeds *bound*.
        """
        size = self.cardinality
        if size > self.bound:
            raise exceptions.UnsupportedQuery(
                f"Algebra has {size} elements, more than the bound {self.bound}"
            )
        for values in itertools.product(self.ring.elements(), repeat=len(self.pairs)):
            yield SkewElement(self, dict(zip(self.pairs, values)))

    def random_element(
        self, rng: np.random.Generator, *, unit: bool = False
    ) -> "SkewElement":
        """A uniformly random element, or a random unit if *unit*."""
        elements = self.ring.elements()
        units = self.ring.units() if unit else elements
        coeffs = {}
        for i, j in self.pairs:
            choices = units if i == j else elements
            coeffs[(i, j)] = choices[int(rng.integers(len(choices)))]
        return SkewElement(self, coeffs)

    def random_unit(self, rng: np.random.Generator) -> "SkewElement":
        return self.random_element(rng, unit=True)


class SkewElement:
    """An immutable element of I(X, R, sigma).

    ``f[i, j]`` reads the coefficient f(x_i, x_j), zero when absent.
    ``+``, ``-`` and ``*`` are the ring operations.

    """

    __slots__ = ("context", "coeffs", "_rows")

    def __init__(self, context: AlgebraContext, coeffs: dict):
        zero = context.ring.zero
        self.context = context
        self.coeffs = MappingProxyType({p: c for p, c in coeffs.items() if c != zero})
        self._rows = None

    def __getitem__(self, pair):
        return self.coeffs.get(pair, self.context.ring.zero)

    def __eq__(self, other):
        if not isinstance(other, SkewElement):
            return NotImplemented
        return self.context == other.context and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, neg(other))

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        return f"<SkewElement {format_element(self)}>"

    def __str__(self):
        return format_element(self)

    @property
    def rows(self) -> dict:
        """Nonzero coefficients grouped by row: ``{i: [(j, f(i, j)), ...]}``."""
        if self._rows is None:
            rows = {}
            for (i, j), c in self.coeffs.items():
                rows.setdefault(i, []).append((j, c))
            self._rows = rows
        return self._rows

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self.coeffs)

    def diagonal(self) -> list:
        """The diagonal coefficients f(x_1, x_1), ..., f(x_n, x_n)."""
        return [self[x, x] for x in self.context.poset.elements]


def _shared_context(f: SkewElement, g: SkewElement) -> AlgebraContext:
    if f.context is not g.context and f.context != g.context:
        raise exceptions.ContextMismatch(
            f"Elements of {f.context!r} and {g.context!r} do not interoperate"
        )
    return f.context


def delta(ctx: AlgebraContext) -> SkewElement:
    return ctx.delta()


def basis_e(ctx: AlgebraContext, i: int, j: int = None) -> SkewElement:
    return ctx.basis_e(i, j)


def scalar_embed(ctx: AlgebraContext, r) -> SkewElement:
    return ctx.scalar_embed(r)


def enumerate_algebra(ctx: AlgebraContext) -> Iterator[SkewElement]:
    return ctx.enumerate()


def add(f: SkewElement, g: SkewElement) -> SkewElement:
    ctx = _shared_context(f, g)
    ring_add = ctx.ring.add
    coeffs = dict(f.coeffs)
    for pair, c in g.coeffs.items():
        coeffs[pair] = ring_add(coeffs[pair], c) if pair in coeffs else c
    return SkewElement(ctx, coeffs)


def neg(f: SkewElement) -> SkewElement:
    ring_neg = f.context.ring.neg
    return SkewElement(f.context, {pair: ring_neg(c) for pair, c in f.coeffs.items()})


def sub(f: SkewElement, g: SkewElement) -> SkewElement:
    return add(f, neg(g))


def scale_left(r, f: SkewElement) -> SkewElement:
    """The left module action (r f)(x, y) = r f(x, y)."""
    ring_mul = f.context.ring.mul
    coeffs = {pair: ring_mul(r, c) for pair, c in f.coeffs.items()}
    return SkewElement(f.context, coeffs)


def multiply(f: SkewElement, g: SkewElement) -> SkewElement:
    """The twisted convolution product fg."""
    ctx = _shared_context(f, g)
    ring_add, ring_mul, twist = ctx.ring.add, ctx.ring.mul, ctx.twist
    rows = g.rows
    acc = {}
    for (i, k), a in f.coeffs.items():
        for j, b in rows.get(k, ()):
            term = ring_mul(a, twist(k - i, b))
            acc[i, j] = ring_add(acc[i, j], term) if (i, j) in acc else term
    return SkewElement(ctx, acc)


def untwisted_multiply(f: SkewElement, g: SkewElement) -> SkewElement:
    """The ordinary incidence product, ignoring sigma entirely."""
    ctx = _shared_context(f, g)
    ring = ctx.ring
    acc = {}
    for i, j in ctx.pairs:
        total = ring.zero
        for k in ctx.poset.interval(i, j).members:
            total = ring.add(total, ring.mul(f[i, k], g[k, j]))
        acc[i, j] = total
    return SkewElement(ctx, acc)


def untwist_transfer(f: SkewElement) -> SkewElement:
    """Map f in I(X, R) to h in I(X, R, sigma), h(x_i, x_j) = sigma^(1-i)(f(x_i, x_j)).

    Only defined when sigma is an automorphism; this map turns
    :py:func:`untwisted_multiply` into :py:func:`multiply`.

    """
    ring = f.context.ring
    return SkewElement(
        f.context,
        {(i, j): ring.sigma_inverse_pow(i - 1, c) for (i, j), c in f.coeffs.items()},
    )


def sandwich(f: SkewElement, x: int, y: int) -> SkewElement:
    """e_x f e_y, computed with two products."""
    ctx = f.context
    return multiply(multiply(ctx.basis_e(x), f), ctx.basis_e(y))


def _format_coefficient(ring: RingSpec, c) -> str:
    text = ring.format_element(c)
    if text.startswith("(") or ("+" not in text and "-" not in text[1:]):
        return text
    return f"({text})"


def _render_order(item) -> tuple:
    (i, j), _ = item
    return (i != j, i, j)


def format_element(f: SkewElement) -> str:
    """Render *f* in the element grammar.

    Diagonal terms come first by index, then off-diagonal terms in
    lexicographic order; the zero element renders as ``0``.

    """
    ring = f.context.ring
    terms = []
    for (i, j), c in sorted(f.coeffs.items(), key=_render_order):
        basis = f"e[{i}]" if i == j else f"e[{i},{j}]"
        terms.append(f"{_format_coefficient(ring, c)}*{basis}")
    return " + ".join(terms) if terms else "0"
