"""Isomorphisms between skew incidence rings.

A ring isomorphism phi: I(X, R, sigma) -> I(Y, S, tau) is described by
a :py:class:`RingIsoWitness`: the images of the spanning elements
e_ij and the images of enough scalars r*delta to generate R
additively. Since the product is biadditive and every element is a
sum of terms (r*delta) e_ij, these images determine phi completely
and checking them is enough to certify it.

Going one way, :py:func:`build_psi` turns an order isomorphism alpha
and a coefficient isomorphism phi with phi*sigma == tau*phi into the
ring isomorphism ``psi(f)(y_i, y_j) = phi(f(x_i, x_j))``.

Going the other way, :py:func:`recover_poset_map` reads the order
isomorphism back off a ring isomorphism, provided both coefficient
rings have no idempotents besides 0 and 1: each phi(e_x) is conjugate
to exactly one e_y, and alpha(x) = y.

"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Mapping, Optional, Sequence

from . import exceptions
from .algebra import AlgebraContext, SkewElement, scale_left
from .coeff_ring import GaloisField, ProductRing, RingElement, RingSpec
from .poset import Poset, is_order_isomorphism
from .structure import (
    DiagonalizationResult,
    center_enumerate,
    diagonalize_idempotent,
    invert_elem,
    is_idempotent_elem,
)

log = logging.getLogger(__name__)


# Coefficient ring maps


@dataclass(frozen=True)
class RingMap:
    """A map of coefficient rings, ``func`` acting on canonical values."""

    source: RingSpec
    target: RingSpec
    func: Callable = field(compare=False)
    name: str = "phi"

    def __call__(self, a):
        return self.func(a)

    @cached_property
    def table(self) -> dict:
        return {a: self.func(a) for a in self.source.elements()}

    def isomorphism_failure(self) -> Optional[str]:
        """Describe the first ring isomorphism law that fails, if any."""
        src, tgt = self.source, self.target
        src.require_finite("Checking a ring isomorphism")
        tgt.require_finite("Checking a ring isomorphism")
        table = self.table
        fmt = src.format_element
        for a, image in table.items():
            if not tgt.contains(image):
                return f"{self.name}({fmt(a)}) = {image!r} is not in {tgt}"
        if len(set(table.values())) != len(table) or len(table) != tgt.cardinality:
            return f"{self.name} is not a bijection from {src} onto {tgt}"
        if table[src.one] != tgt.one:
            return f"{self.name}(1) != 1"
        for a in table:
            for b in table:
                if table[src.add(a, b)] != tgt.add(table[a], table[b]):
                    return f"{self.name} is not additive at ({fmt(a)}, {fmt(b)})"
                if table[src.mul(a, b)] != tgt.mul(table[a], table[b]):
                    return f"{self.name} is not multiplicative at ({fmt(a)}, {fmt(b)})"
        return None

    def intertwining_failure(self) -> Optional[RingElement]:
        """The first r with phi(sigma(r)) != tau(phi(r)), or None."""
        for a, image in self.table.items():
            if self.table[self.source.sigma(a)] != self.target.sigma(image):
                return RingElement(self.source, a)
        return None

    def inverse(self) -> "RingMap":
        backward = {image: a for a, image in self.table.items()}
        if len(backward) != len(self.table):
            raise exceptions.NotAnIsomorphism(f"{self.name} is not injective")
        return RingMap(
            source=self.target,
            target=self.source,
            func=backward.__getitem__,
            name=f"{self.name}^-1",
        )


def identity_map(ring: RingSpec, target: Optional[RingSpec] = None) -> RingMap:
    return RingMap(ring, target or ring, func=lambda a: a, name="identity")


def frobenius_map(ring: RingSpec, target: Optional[RingSpec] = None) -> RingMap:
    """x -> x^p on a Galois field of characteristic p."""
    if not isinstance(ring, GaloisField):
        raise exceptions.RingMismatch(
            f"The Frobenius map needs a Galois field, not {ring}"
        )

    def frobenius(a):
        result = ring.one
        for _ in range(ring.p):
            result = ring.mul(result, a)
        return result

    return RingMap(ring, target or ring, func=frobenius, name="frobenius")


def swap_map(ring: RingSpec, target: Optional[RingSpec] = None) -> RingMap:
    """(a, b) -> (b, a) on a product ring."""
    if not isinstance(ring, ProductRing):
        raise exceptions.RingMismatch(f"The swap map needs a product ring, not {ring}")
    return RingMap(ring, target or ring, func=lambda a: (a[1], a[0]), name="swap")


ring_maps = {
    "identity": identity_map,
    "frobenius": frobenius_map,
    "swap": swap_map,
}


def ring_map_by_name(
    name: str, ring: RingSpec, target: Optional[RingSpec] = None
) -> RingMap:
    try:
        factory = ring_maps[name]
    except KeyError:
        raise ValueError(
            f"Unknown ring map {name!r}, expected one of {list(ring_maps)}"
        )
    return factory(ring, target)


# Witnesses


class RingIsoWitness:
    """A ring map I(X, R, sigma) -> I(Y, S, tau) given on generators.

    Parameters
    ==========
    source, target
      The two algebra contexts.
    basis_images
      ``{(i, j): phi(e_ij)}`` for every comparable pair of the source.
    scalar_images
      ``{r: phi(r*delta)}`` for enough r to generate R additively.
      The image of 1 is implied, since delta is the sum of the e_x.
    inverse_witness
      A witness for the inverse map, when it is known.
    target_labels
      ``target_labels[y - 1]`` is the caller's label for the target
      element y, when the target poset was relabeled.

    """

    def __init__(
        self,
        source: AlgebraContext,
        target: AlgebraContext,
        basis_images: Mapping[tuple[int, int], SkewElement],
        scalar_images: Mapping[Hashable, SkewElement] = None,
        *,
        inverse_witness: "RingIsoWitness" = None,
        target_labels: Optional[Sequence[int]] = None,
    ):
        self.source = source
        self.target = target
        missing = [pair for pair in source.pairs if pair not in basis_images]
        if missing:
            i, j = missing[0]
            raise exceptions.NotAnIsomorphism(f"Missing the image of e[{i},{j}]")
        extra = [pair for pair in basis_images if not source.is_comparable(*pair)]
        if extra:
            raise exceptions.UnsupportedPair(extra[0])
        images = list(basis_images.values()) + list((scalar_images or {}).values())
        for image in images:
            if image.context != target:
                raise exceptions.ContextMismatch(
                    f"Image {image} does not belong to {target!r}"
                )
        self.basis_images = dict(basis_images)
        self.scalar_images = dict(scalar_images or {})
        self.inverse_witness = inverse_witness
        if target_labels is None:
            target_labels = target.poset.elements
        if sorted(target_labels) != list(target.poset.elements):
            raise exceptions.NotAnIsomorphism(
                f"target_labels {list(target_labels)} is not a permutation of "
                f"1..{target.poset.n}"
            )
        self.target_labels = tuple(target_labels)

    def __repr__(self):
        return f"<RingIsoWitness {self.source!r} -> {self.target!r}>"

    @cached_property
    def unit_image(self) -> SkewElement:
        """phi(delta), the sum of the images of the e_x."""
        total = self.target.zero()
        for x in self.source.poset.elements:
            total = total + self.basis_images[x, x]
        return total

    @cached_property
    def scalar_table(self) -> dict:
        """phi(r*delta) for every r, closed up from the given images by addition.

        Raises
        ======
        NotAnIsomorphism
          Two sums of generators disagree, or the generators do not
          reach every element of R.
        """
        ring = self.source.ring
        ring.require_finite("Building the scalar table")
        table = {ring.zero: self.target.zero()}
        generators = dict(self.scalar_images)
        if ring.one in generators and generators[ring.one] != self.unit_image:
            raise exceptions.NotAnIsomorphism(
                f"Image of 1*delta is {generators[ring.one]}, "
                f"but the images of the e_x sum to {self.unit_image}"
            )
        generators[ring.one] = self.unit_image
        queue = deque(table.items())
        while queue:
            a, image = queue.popleft()
            for r, r_image in generators.items():
                total, total_image = ring.add(a, r), image + r_image
                if total not in table:
                    table[total] = total_image
                    queue.append((total, total_image))
                elif table[total] != total_image:
                    raise exceptions.NotAnIsomorphism(
                        "Scalar images are not additive at "
                        f"{ring.format_element(total)}"
                    )
        for r, r_image in generators.items():
            if table[r] != r_image:
                raise exceptions.NotAnIsomorphism(
                    f"Scalar images are not additive at {ring.format_element(r)}"
                )
        if len(table) != ring.cardinality:
            raise exceptions.NotAnIsomorphism(
                f"Scalar images only reach {len(table)} of {ring.cardinality} "
                f"elements of {ring}"
            )
        log.debug(f"Closed {len(generators)} scalar images up to {len(table)}")
        return table

    def apply(self, f: SkewElement) -> SkewElement:
        """phi(f) as the sum of phi(f_ij delta) phi(e_ij)."""
        if f.context != self.source:
            raise exceptions.ContextMismatch(f"{f} does not belong to {self.source!r}")
        table = self.scalar_table
        total = self.target.zero()
        for pair, c in f.coeffs.items():
            total = total + table[c] * self.basis_images[pair]
        return total

    def __call__(self, f: SkewElement) -> SkewElement:
        return self.apply(f)

    def spanning_set(self) -> list[SkewElement]:
        """Every r*e_ij with r nonzero."""
        return _spanning_set(self.source)

    def inverse(self) -> "RingIsoWitness":
        """The inverse witness, derived by enumeration when not stored.

        Raises
        ======
        NotAnIsomorphism
          The map is not a bijection.
        UnsupportedQuery
          The source algebra is beyond its enumeration bound.
        """
        if self.inverse_witness is not None:
            return self.inverse_witness
        preimages = {}
        for f in self.source.enumerate():
            image = self.apply(f)
            if image in preimages:
                raise exceptions.NotAnIsomorphism(
                    f"{preimages[image]} and {f} have the same image {image}"
                )
            preimages[image] = f
        target = self.target
        try:
            basis = {pair: preimages[target.basis_e(*pair)] for pair in target.pairs}
            scalars = {
                s: preimages[target.scalar_embed(s)] for s in target.ring.elements()
            }
        except KeyError as exc:
            raise exceptions.NotAnIsomorphism(f"{exc.args[0]} has no preimage")
        self.inverse_witness = RingIsoWitness(
            target, self.source, basis, scalars, inverse_witness=self
        )
        return self.inverse_witness

    def precompose_conjugation(self, u: SkewElement) -> "RingIsoWitness":
        """The witness for f -> phi(u f u^-1), where u is a unit of the source."""
        u_inverse = invert_elem(u)
        source = self.source
        basis = {
            pair: self.apply(u * source.basis_e(*pair) * u_inverse)
            for pair in source.pairs
        }
        scalars = {
            r: self.apply(u * source.scalar_embed(r) * u_inverse)
            for r in source.ring.elements()
        }
        inverse_witness = None
        if self.inverse_witness is not None:
            backward = self.inverse_witness
            target = self.target
            inverse_witness = RingIsoWitness(
                target,
                source,
                {
                    pair: u_inverse * backward.apply(target.basis_e(*pair)) * u
                    for pair in target.pairs
                },
                {
                    s: u_inverse * backward.apply(target.scalar_embed(s)) * u
                    for s in target.ring.elements()
                },
            )
        witness = RingIsoWitness(
            source,
            self.target,
            basis,
            scalars,
            inverse_witness=inverse_witness,
            target_labels=self.target_labels,
        )
        if inverse_witness is not None:
            inverse_witness.inverse_witness = witness
        return witness

    @classmethod
    def identity(cls, ctx: AlgebraContext) -> "RingIsoWitness":
        basis = {pair: ctx.basis_e(*pair) for pair in ctx.pairs}
        scalars = {r: ctx.scalar_embed(r) for r in ctx.ring.elements()}
        witness = cls(ctx, ctx, basis, scalars)
        witness.inverse_witness = witness
        return witness


def _spanning_set(ctx: AlgebraContext) -> list[SkewElement]:
    nonzero = [r for r in ctx.ring.elements() if r != ctx.ring.zero]
    return [scale_left(r, ctx.basis_e(*pair)) for pair in ctx.pairs for r in nonzero]


@dataclass(frozen=True)
class IsoCheck:
    """Outcome of :py:func:`verify_ring_iso`; falsy when a check failed."""

    ok: bool
    failure: Optional[str] = None

    def __bool__(self):
        return self.ok


def _iso_failure(w: RingIsoWitness) -> Optional[str]:
    source, target = w.source, w.target
    source.ring.require_finite("Verifying a ring isomorphism")
    target.ring.require_finite("Verifying a ring isomorphism")
    if source.cardinality != target.cardinality:
        return (
            f"Algebras have different sizes "
            f"({source.cardinality} and {target.cardinality})"
        )
    try:
        table = w.scalar_table
    except exceptions.NotAnIsomorphism as exc:
        return str(exc)
    if w.unit_image != target.delta():
        return f"delta maps to {w.unit_image}, not to delta"
    spanning = w.spanning_set()
    images = {s: w.apply(s) for s in spanning}
    for s in spanning:
        for t in spanning:
            if w.apply(s * t) != images[s] * images[t]:
                return f"Not multiplicative at ({s}) * ({t})"
    # Bijectivity
    if w.inverse_witness is not None:
        backward = w.inverse_witness
        for s in spanning:
            if backward.apply(images[s]) != s:
                return f"The inverse does not send {images[s]} back to {s}"
        for t in _spanning_set(target):
            if w.apply(backward.apply(t)) != t:
                return f"The inverse of {t} does not map back onto it"
    else:
        # An additive map between equal-sized groups is bijective when its kernel is 0
        for f in source.enumerate():
            if f and not w.apply(f):
                return f"The nonzero element {f} maps to 0"
    log.debug(f"Verified {w!r} on {len(spanning)} spanning elements")
    return None


def verify_ring_iso(w: RingIsoWitness) -> IsoCheck:
    """Certify that *w* describes a unital ring isomorphism.

    Checks, in order: equal cardinalities, additivity of the scalar
    images, delta -> delta, multiplicativity on every pair of spanning
    elements r*e_ij, and bijectivity (through the inverse witness when
    one is stored, otherwise by enumerating the source).

    """
    failure = _iso_failure(w)
    if failure is not None:
        log.info(f"Witness {w!r} failed: {failure}")
    return IsoCheck(ok=failure is None, failure=failure)


def build_psi(
    source: AlgebraContext, target_poset: Poset, alpha: Sequence[int], phi: RingMap
) -> RingIsoWitness:
    """The isomorphism psi(f)(y_i, y_j) = phi(f(x_i, x_j)).

    The target poset is relabeled so that y_i = alpha(x_i); the
    returned witness lives on the relabeled target, and its
    ``target_labels`` translate back to the labels of *target_poset*.

    Raises
    ======
    HypothesisViolation
      *alpha* is not an order isomorphism or *phi* is not a ring
      isomorphism.
    IntertwiningFailure
      phi(sigma(r)) != tau(phi(r)) for some r, carried as ``element``.
    """
    alpha = tuple(alpha)
    if not is_order_isomorphism(source.poset, target_poset, alpha):
        raise exceptions.HypothesisViolation(
            f"{alpha} is not an order isomorphism {source.poset!r} -> {target_poset!r}"
        )
    if phi.source != source.ring:
        raise exceptions.RingMismatch(
            f"{phi.name} starts at {phi.source}, not at {source.ring}"
        )
    failure = phi.isomorphism_failure()
    if failure is not None:
        raise exceptions.HypothesisViolation(failure)
    bad = phi.intertwining_failure()
    if bad is not None:
        raise exceptions.IntertwiningFailure(
            f"{phi.name} does not intertwine the endomorphisms at {bad}", element=bad
        )
    new_labels = [0] * len(alpha)
    for i, image in enumerate(alpha, start=1):
        new_labels[image - 1] = i
    relabeled = target_poset.relabel(new_labels)
    if new_labels != list(target_poset.elements):
        log.info(f"Relabeled the target poset by {new_labels}")
    target = AlgebraContext(relabeled, phi.target, bound=source.bound)
    phi_inverse = phi.inverse()
    forward = RingIsoWitness(
        source,
        target,
        {pair: target.basis_e(*pair) for pair in source.pairs},
        {r: target.scalar_embed(phi(r)) for r in source.ring.elements()},
        target_labels=alpha,
    )
    backward = RingIsoWitness(
        target,
        source,
        {pair: source.basis_e(*pair) for pair in target.pairs},
        {s: source.scalar_embed(phi_inverse(s)) for s in target.ring.elements()},
        inverse_witness=forward,
    )
    forward.inverse_witness = backward
    log.info(f"Built psi from alpha={alpha} and {phi.name}")
    return forward


def comparable_pair_witness(
    ctx: AlgebraContext, x: int, y: int
) -> Optional[SkewElement]:
    """e_xy when x <= y (then e_x e_xy e_y = e_xy is nonzero), else None."""
    if ctx.poset.leq(x, y):
        return ctx.basis_e(x, y)
    return None


@dataclass(frozen=True)
class PosetMapResult:
    """The order isomorphism read off a ring isomorphism.

    ``alpha[x - 1]`` is the image of x in the caller's target labels,
    ``None`` where exploratory recovery could not place x.
    ``certificates[x]`` diagonalizes phi(e_x) onto e_alpha(x).

    """

    alpha: tuple
    certificates: dict[int, DiagonalizationResult]
    exploratory: bool = False
    violations: list[str] = field(default_factory=list)


def recover_poset_map(
    w: RingIsoWitness, *, exploratory: bool = False
) -> PosetMapResult:
    """Recover alpha: X -> Y from a ring isomorphism.

    Each phi(e_x) is diagonalized; with only trivial idempotents in the
    target ring the diagonal has a single nonzero entry, equal to 1,
    and its position is alpha(x).

    With *exploratory*, the trivial-idempotent hypothesis is skipped
    and failed steps are collected in ``violations`` instead of raised.

    Raises
    ======
    HypothesisViolation
      A coefficient ring has nontrivial idempotents (unless
      *exploratory*).
    NotAnIsomorphism
      *w* does not pass :py:func:`verify_ring_iso`.
    TheoremViolation
      A recovery step failed under the hypotheses.
    """
    source, target = w.source, w.target
    if not exploratory:
        for ctx in (source, target):
            if not ctx.ring.has_only_trivial_idempotents():
                raise exceptions.HypothesisViolation(
                    f"{ctx.ring} has idempotents other than 0 and 1; "
                    f"the poset cannot be recovered"
                )
    check = verify_ring_iso(w)
    if not check:
        raise exceptions.NotAnIsomorphism(check.failure)
    violations = []

    def violation(msg):
        if not exploratory:
            log.critical(msg)
            raise exceptions.TheoremViolation(msg)
        log.warning(f"Exploratory recovery: {msg}")
        violations.append(msg)

    one, zero = target.ring.one, target.ring.zero
    alpha, certificates = {}, {}
    for x in source.poset.elements:
        image = w.apply(source.basis_e(x))
        if not is_idempotent_elem(image):
            violation(f"phi(e[{x}]) = {image} is not idempotent")
            continue
        result = diagonalize_idempotent(image)
        positions = [
            (y, c)
            for y, c in zip(target.poset.elements, result.diagonal.diagonal())
            if c != zero
        ]
        if len(positions) != 1 or positions[0][1] != one:
            violation(
                f"phi(e[{x}]) is conjugate to {result.diagonal}, not to a single e_y"
            )
            continue
        alpha[x] = positions[0][0]
        certificates[x] = result
        log.debug(f"x{x} -> y{alpha[x]}")
    if len(set(alpha.values())) != len(alpha):
        violation(f"Recovered map {alpha} is not injective")
    for x, y in source.pairs:
        if x in alpha and y in alpha:
            if comparable_pair_witness(target, alpha[x], alpha[y]) is None:
                violation(f"x{x} <= x{y} but y{alpha[x]} is not below y{alpha[y]}")
    for x in alpha:
        for y in alpha:
            below = comparable_pair_witness(source, x, y) is not None
            if not below and target.poset.leq(alpha[x], alpha[y]):
                violation(f"y{alpha[x]} <= y{alpha[y]} but x{x} is not below x{y}")
    labels = w.target_labels
    mapped = tuple(
        labels[alpha[x] - 1] if x in alpha else None for x in source.poset.elements
    )
    log.info(f"Recovered alpha = {mapped}")
    return PosetMapResult(
        alpha=mapped,
        certificates=certificates,
        exploratory=exploratory,
        violations=violations,
    )


def scalar_restriction(w: RingIsoWitness) -> Optional[RingMap]:
    """The ring isomorphism R -> S that *w* induces when phi(R delta) = S delta.

    Returns ``None`` when some phi(r*delta) is not a scalar element.

    """
    target = w.target
    values = {}
    for r, image in w.scalar_table.items():
        scalar = image[1, 1]
        if image != target.scalar_embed(scalar):
            return None
        values[r] = scalar
    restricted = RingMap(
        w.source.ring, target.ring, func=values.__getitem__, name="phi|R"
    )
    failure = restricted.isomorphism_failure()
    if failure is not None:
        msg = f"Restriction of {w!r} to scalars is not an isomorphism: {failure}"
        log.critical(msg)
        raise exceptions.TheoremViolation(msg)
    return restricted


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism invariants of an algebra.

    Equal fingerprints prove nothing; different fingerprints prove the
    algebras are not isomorphic.

    """

    ring: str
    total: int
    units: int
    idempotents: int
    center: int
    radical: int

    def as_dict(self) -> dict:
        return {
            "ring": self.ring,
            "total": self.total,
            "units": self.units,
            "idempotents": self.idempotents,
            "center": self.center,
            "radical": self.radical,
        }


def fingerprint(ctx: AlgebraContext) -> Fingerprint:
    """Count the units, idempotents, central and radical elements of *ctx*.

    Units and the radical are counted from the diagonal criteria;
    idempotents are enumerated.

    Raises
    ======
    UnsupportedQuery
      The ring is infinite or the algebra exceeds its bound.
    """
    ring = ctx.ring
    total = ctx.cardinality
    n = ctx.poset.n
    off_diagonal = ring.cardinality ** (len(ctx.pairs) - n)
    radical_size = sum(1 for r in ring.elements() if ring.is_jacobson_member(r))
    idempotent_count = sum(1 for f in ctx.enumerate() if is_idempotent_elem(f))
    return Fingerprint(
        ring=ring.description,
        total=total,
        units=len(ring.units()) ** n * off_diagonal,
        idempotents=idempotent_count,
        center=len(center_enumerate(ctx)),
        radical=radical_size**n * off_diagonal,
    )
