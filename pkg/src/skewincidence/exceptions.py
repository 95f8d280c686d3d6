class SkewIncidenceError(Exception):
    """Base class for errors raised by skewincidence."""

    ...


class DomainError(SkewIncidenceError):
    """The request is well-formed but mathematically not admissible."""

    ...


class RingMismatch(DomainError, TypeError):
    """Operands belong to different coefficient rings."""

    ...


class ContextMismatch(DomainError, TypeError):
    """Skew elements come from different (poset, ring) contexts."""

    ...


class NotAUnit(DomainError, ArithmeticError):
    """The element has no two-sided inverse.

    *index* is the first diagonal position whose coefficient is not a
    unit, or ``None`` when the failure is at the ring level.

    """

    def __init__(self, msg: str, index: int = None):
        super().__init__(msg)
        self.index = index


class UnsupportedQuery(DomainError):
    """The query cannot be answered for this ring or size."""

    ...


class UnsupportedPair(DomainError, KeyError):
    """The index pair is not comparable in the poset."""

    def __init__(self, pair: tuple[int, int]):
        super().__init__(pair)
        self.pair = pair

    def __str__(self):
        i, j = self.pair
        return f"x{i} is not below x{j}"


class NotAPoset(DomainError, ValueError):
    """The relation is not a partial order.

    *cycle* lists the (i, j) edges of an offending cycle, if known.

    """

    def __init__(self, msg: str, cycle: list = None):
        super().__init__(msg)
        self.cycle = cycle or []


class NotIdempotent(DomainError):
    """The element does not satisfy f*f == f."""

    ...


class HypothesisViolation(DomainError):
    """A precondition of a structural result does not hold."""

    ...


class IntertwiningFailure(HypothesisViolation):
    """The ring map does not satisfy phi(sigma(r)) == tau(phi(r)).

    *element* is a ring element witnessing the failure.

    """

    def __init__(self, msg: str, element=None):
        super().__init__(msg)
        self.element = element


class NotAnIsomorphism(DomainError):
    """A witness map failed one of the ring isomorphism checks."""

    ...


class TheoremViolation(DomainError):
    """An internal invariant that must always hold was found broken."""

    ...


class ParseError(SkewIncidenceError, ValueError):
    """Input text could not be parsed.

    *line* is the 1-based line number of the offending input, if known.

    """

    def __init__(self, msg: str, line: int = None):
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)
        self.line = line


class RingSpecSyntaxError(ParseError):
    """Malformed ring specification string or element literal."""

    ...


class PosetSyntaxError(ParseError):
    """Malformed poset file."""

    ...


class ElementSyntaxError(ParseError):
    """Malformed skew element expression."""

    ...


class SupportError(ParseError):
    """An element expression puts a coefficient on an incomparable pair."""

    ...


class WitnessSyntaxError(ParseError):
    """Malformed witness file."""

    ...
