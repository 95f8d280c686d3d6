"""Brute-force definitions of the structural predicates.

These quantify over the whole algebra (or over a product of it with
itself), so they only run within the enumeration bound of the
context. They exist to cross-check :py:mod:`skewincidence.structure`,
which answers the same questions from the diagonal alone.

"""

import logging
from typing import Optional, Sequence

from .algebra import AlgebraContext, SkewElement, sandwich

log = logging.getLogger(__name__)


def units_by_search(ctx: AlgebraContext) -> dict[SkewElement, SkewElement]:
    """Map every unit to its inverse, found by trying every candidate."""
    elements = list(ctx.enumerate())
    identity = ctx.delta()
    units = {}
    for f in elements:
        if f in units:
            continue
        for g in elements:
            if f * g == identity and g * f == identity:
                units[f] = g
                units[g] = f
                break
    log.info(f"Found {len(units)} units of {ctx!r} by search")
    return units


def radical_by_definition(ctx: AlgebraContext) -> set[SkewElement]:
    """Every f with delta - g f h a unit for all g, h."""
    elements = list(ctx.enumerate())
    units = units_by_search(ctx)
    identity = ctx.delta()
    radical = set()
    for f in elements:
        member = True
        for g in elements:
            gf = g * f
            if not gf:
                continue
            if any(identity - gf * h not in units for h in elements):
                member = False
                break
        if member:
            radical.add(f)
    log.info(f"Jacobson radical of {ctx!r} has {len(radical)} elements")
    return radical


def idempotents(ctx: AlgebraContext) -> list[SkewElement]:
    return [f for f in ctx.enumerate() if f * f == f]


def is_primitive_by_definition(
    f: SkewElement, candidates: Optional[Sequence[SkewElement]] = None
) -> bool:
    """Whether f is a nonzero idempotent with ef == fe == e only for e in {0, f}."""
    if not f or f * f != f:
        return False
    if candidates is None:
        candidates = idempotents(f.context)
    for e in candidates:
        if e and e != f and e * f == e and f * e == e:
            return False
    return True


def centralizer(ctx: AlgebraContext) -> list[SkewElement]:
    """Every element commuting with the whole algebra."""
    elements = list(ctx.enumerate())
    central = [f for f in elements if all(f * g == g * f for g in elements)]
    log.info(f"Centralizer of {ctx!r} has {len(central)} elements")
    return central


def sandwich_nonzero(ctx: AlgebraContext, x: int, y: int) -> bool:
    """Whether e_x f e_y is nonzero for some f in the algebra."""
    return any(sandwich(f, x, y) for f in ctx.enumerate())


def conjugate_diagonal_forms(
    f: SkewElement, units: Optional[dict] = None
) -> set[SkewElement]:
    """Every diagonal element of the form u f u^-1 with u a unit."""
    if units is None:
        units = units_by_search(f.context)
    forms = set()
    for u, u_inverse in units.items():
        conjugate = u * f * u_inverse
        if conjugate.is_diagonal():
            forms.add(conjugate)
    return forms
