"""Structural procedures on skew incidence rings.

Every test here is a criterion read off the diagonal or the poset
structure, so none of them needs to search the algebra:

- units: all diagonal coefficients are units of R
- Jacobson radical: all diagonal coefficients lie in J(R)
- idempotents: conjugate to their diagonal part
- primitive idempotents: conjugate to a*e_x with a primitive in R
- center: diagonal, central coefficients, and
  f(x_i, x_i) = sigma^(j-i)(f(x_j, x_j)) whenever x_i <= x_j

The brute-force counterparts live in :py:mod:`skewincidence.oracles`.

"""

import itertools
import logging
from dataclasses import dataclass
from typing import Hashable, Iterator

from . import exceptions
from .algebra import AlgebraContext, SkewElement
from .poset import Poset

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagonalizationResult:
    """An idempotent f written as ``conjugator_inverse * diagonal * conjugator``."""

    conjugator: SkewElement
    diagonal: SkewElement
    conjugator_inverse: SkewElement


@dataclass(frozen=True)
class PrimitiveLocation:
    """Where a primitive idempotent sits: conjugate to ``coefficient * e_index``.

    *canonical* is false when the ring is neither commutative nor free
    of nontrivial idempotents, in which case *coefficient* is only one
    representative.

    """

    index: int
    coefficient: Hashable
    canonical: bool


def _theorem_violation(msg: str):
    log.critical(msg)
    raise exceptions.TheoremViolation(msg)


def _recursion_order(poset: Poset) -> list[tuple[int, int]]:
    """Comparable pairs by increasing interval length, then (i, j)."""
    return sorted(
        poset.comparable_pairs, key=lambda pair: (poset.interval_length(*pair), pair)
    )


def is_unit_elem(f: SkewElement) -> bool:
    ring = f.context.ring
    return all(ring.is_unit(c) for c in f.diagonal())


def _require_unit(f: SkewElement):
    ring = f.context.ring
    for x, c in zip(f.context.poset.elements, f.diagonal()):
        if not ring.is_unit(c):
            raise exceptions.NotAUnit(f"not a unit at x{x}", index=x)


def _check_inverse(f: SkewElement, g: SkewElement, which: str):
    identity = f.context.delta()
    if f * g != identity or g * f != identity:
        _theorem_violation(f"The {which} of {f} is not a two-sided inverse: {g}")


def invert_elem(f: SkewElement, *, check: bool = True) -> SkewElement:
    """The two-sided inverse of *f*, built by the right-inverse recursion.

    g(x_i, x_i) = f(x_i, x_i)^-1, and for x_i < x_j

        g(x_i, x_j) = -f(x_i, x_i)^-1 * sum over x_i < x_k <= x_j
                      of f(x_i, x_k) sigma^(k-i)(g(x_k, x_j))

    evaluated by increasing interval length.

    Raises
    ======
    NotAUnit
      Some diagonal coefficient is not a unit; ``index`` names it.
    """
    _require_unit(f)
    ctx = f.context
    ring, poset = ctx.ring, ctx.poset
    g = {}
    for i, j in _recursion_order(poset):
        if i == j:
            g[i, i] = ring.inverse(f[i, i])
            continue
        total = ring.zero
        for k in poset.interval(i, j).members[1:]:
            a = f[i, k]
            if a != ring.zero:
                total = ring.add(total, ring.mul(a, ctx.twist(k - i, g[k, j])))
        g[i, j] = ring.neg(ring.mul(ring.inverse(f[i, i]), total))
    inverse = SkewElement(ctx, g)
    if check:
        _check_inverse(f, inverse, "right-inverse recursion")
    return inverse


def left_inverse_elem(f: SkewElement, *, check: bool = True) -> SkewElement:
    """The inverse of *f*, built by the dual (left-inverse) recursion.

    h(x_i, x_i) = f(x_i, x_i)^-1, and for x_i < x_j

        h(x_i, x_j) = -[sum over x_i <= x_k < x_j
                        of h(x_i, x_k) sigma^(k-i)(f(x_k, x_j))]
                      * sigma^(j-i)(f(x_j, x_j))^-1

    """
    _require_unit(f)
    ctx = f.context
    ring, poset = ctx.ring, ctx.poset
    h = {}
    for i, j in _recursion_order(poset):
        if i == j:
            h[i, i] = ring.inverse(f[i, i])
            continue
        total = ring.zero
        for k in poset.interval(i, j).members[:-1]:
            b = f[k, j]
            if b != ring.zero:
                total = ring.add(total, ring.mul(h[i, k], ctx.twist(k - i, b)))
        pivot = ring.inverse(ctx.twist(j - i, f[j, j]))
        h[i, j] = ring.mul(ring.neg(total), pivot)
    inverse = SkewElement(ctx, h)
    if check:
        _check_inverse(f, inverse, "left-inverse recursion")
    return inverse


def jacobson_member_elem(f: SkewElement) -> bool:
    """Whether *f* lies in the Jacobson radical.

    Only the diagonal is constrained; off-diagonal coefficients are
    arbitrary.

    """
    ring = f.context.ring
    return all(ring.is_jacobson_member(c) for c in f.diagonal())


def is_idempotent_elem(f: SkewElement) -> bool:
    return f * f == f


def diagonal_part(f: SkewElement) -> SkewElement:
    diagonal = {(i, j): c for (i, j), c in f.coeffs.items() if i == j}
    return SkewElement(f.context, diagonal)


def diagonalize_idempotent(f: SkewElement) -> DiagonalizationResult:
    """Conjugate the idempotent *f* onto its diagonal part e.

    With g = f - e and h = delta + (2e - delta) g, h has ones on the
    diagonal, hf = eh and therefore f = h^-1 e h.

    Raises
    ======
    NotIdempotent
      *f* is not idempotent.
    """
    if not is_idempotent_elem(f):
        raise exceptions.NotIdempotent(f"{f} is not idempotent")
    ctx = f.context
    identity = ctx.delta()
    e = diagonal_part(f)
    g = f - e
    h = identity + (e + e - identity) * g
    if any(c != ctx.ring.one for c in h.diagonal()):
        _theorem_violation(f"Conjugator {h} for {f} does not have a unit diagonal")
    h_inverse = invert_elem(h)
    if h * f != e * h or h_inverse * e * h != f:
        _theorem_violation(f"Conjugator {h} does not diagonalize {f}")
    log.debug(f"Diagonalized {f} to {e} with conjugator {h}")
    return DiagonalizationResult(conjugator=h, diagonal=e, conjugator_inverse=h_inverse)


def _primitive_position(f: SkewElement):
    ring = f.context.ring
    ring.require_finite("Primitivity")
    result = diagonalize_idempotent(f)
    nonzero = [
        (x, c)
        for x, c in zip(f.context.poset.elements, result.diagonal.diagonal())
        if c != ring.zero
    ]
    if len(nonzero) == 1 and ring.is_primitive_idempotent(nonzero[0][1]):
        return nonzero[0]
    return None


def is_primitive_idempotent_elem(f: SkewElement) -> bool:
    """Whether the idempotent *f* is primitive.

    Raises
    ======
    NotIdempotent
      *f* is not idempotent.
    UnsupportedQuery
      The coefficient ring is infinite.
    """
    return _primitive_position(f) is not None


def locate(f: SkewElement) -> PrimitiveLocation:
    """The unique x (and a coefficient a) with f conjugate to a*e_x."""
    position = _primitive_position(f)
    if position is None:
        raise exceptions.HypothesisViolation(f"{f} is not a primitive idempotent")
    ring = f.context.ring
    x, a = position
    canonical = bool(ring.is_commutative) or ring.has_only_trivial_idempotents()
    return PrimitiveLocation(index=x, coefficient=a, canonical=canonical)


def center_member_elem(f: SkewElement) -> bool:
    """Whether *f* is central, by the diagonal/center/twist criterion."""
    ctx = f.context
    ring = ctx.ring
    if not f.is_diagonal():
        return False
    if not all(ring.is_central(c) for c in f.diagonal()):
        return False
    return all(f[i, i] == ctx.twist(j - i, f[j, j]) for i, j in ctx.pairs)


def _component_solutions(
    ctx: AlgebraContext, component: tuple[int, ...], central: tuple
) -> Iterator[dict]:
    # Walk down the labels: anything with an assigned upper neighbour is forced
    poset = ctx.poset
    central_set = set(central)
    order = sorted(component, reverse=True)

    def extend(position: int, assignment: dict):
        if position == len(order):
            yield dict(assignment)
            return
        x = order[position]
        uppers = [y for y in assignment if poset.lt(x, y)]
        if uppers:
            forced = {ctx.twist(y - x, assignment[y]) for y in uppers}
            candidates = []
            if len(forced) == 1:
                candidates = [c for c in forced if c in central_set]
        else:
            candidates = central
        for value in candidates:
            assignment[x] = value
            yield from extend(position + 1, assignment)
            del assignment[x]

    yield from extend(0, {})


def center_enumerate(ctx: AlgebraContext) -> list[SkewElement]:
    """Every central element, solved one connected component at a time.

    Raises
    ======
    UnsupportedQuery
      The coefficient ring is infinite.
    """
    central = ctx.ring.central_elements()
    per_component = [
        list(_component_solutions(ctx, component, central))
        for component in ctx.poset.connected_components()
    ]
    results = []
    for combination in itertools.product(*per_component):
        coeffs = {}
        for assignment in combination:
            coeffs.update({(x, x): value for x, value in assignment.items()})
        results.append(SkewElement(ctx, coeffs))
    log.info(f"Center of {ctx!r} has {len(results)} elements")
    return results


def component_center_check(f: SkewElement) -> bool:
    """Check sigma^i(f(x_i, x_i)) == sigma^j(f(x_j, x_j)) within each component.

    Raises
    ======
    HypothesisViolation
      *f* is not central.
    TheoremViolation
      The equality fails for a central element.
    """
    if not center_member_elem(f):
        raise exceptions.HypothesisViolation(f"{f} is not central")
    ring = f.context.ring
    for component in f.context.poset.connected_components():
        values = {ring.sigma_pow(x, f[x, x]) for x in component}
        if len(values) > 1:
            _theorem_violation(
                f"Central element {f} is not sigma-constant on component {component}"
            )
    return True
