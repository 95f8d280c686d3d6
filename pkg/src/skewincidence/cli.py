"""Command line front-end for skew incidence rings.

Each verb runs one library operation::

    $ skew-incidence invert --poset chain2.txt --ring zmod:2 --elem "delta + e[1,2]"
    1*e[1] + 1*e[2] + 1*e[1,2]

``--format structured`` emits a flat YAML document instead, with the
inputs echoed. Exit codes are 0 on success, 1 when the request is
mathematically inadmissible (a non-unit, a failed hypothesis) and 2
when the input cannot be parsed.

"""

import argparse
import logging
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from . import exceptions
from .algebra import DEFAULT_ENUMERATION_BOUND, AlgebraContext, SkewElement
from .coeff_ring import RingSpec, parse_ring_spec, split_top_level
from .isomorphism import (
    RingIsoWitness,
    build_psi,
    fingerprint,
    recover_poset_map,
    ring_map_by_name,
    verify_ring_iso,
)
from .poset import Poset, poset_from_covers
from .structure import (
    center_enumerate,
    center_member_elem,
    component_center_check,
    diagonalize_idempotent,
    invert_elem,
    is_idempotent_elem,
    jacobson_member_elem,
    left_inverse_elem,
    locate,
)

log = logging.getLogger(__name__)


VERBS = (
    "mul",
    "invert",
    "radical-test",
    "idempotent-test",
    "diagonalize",
    "primitive-test",
    "center",
    "center-enum",
    "fingerprint",
    "build-psi",
    "recover",
    "verify-witness",
    "check-axioms",
)

FORMATS = ("text", "structured")


@dataclass
class Command:
    """One invocation of the command line tool."""

    verb: str
    poset: Optional[str] = None
    ring: Optional[str] = None
    elements: list[str] = field(default_factory=list)
    witness: Optional[str] = None
    output_format: str = "text"
    bound: int = DEFAULT_ENUMERATION_BOUND
    target_poset: Optional[str] = None
    target_ring: Optional[str] = None
    alpha: Optional[str] = None
    phi: str = "identity"
    exploratory: bool = False


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    output: str


# Parsers

elements_re = re.compile(r"^elements\s+(?P<n>\d+)$")
cover_re = re.compile(r"^(?P<lo>\d+)\s*<\s*(?P<hi>\d+)$")
basis_re = re.compile(r"^e\[\s*(?P<i>\d+)\s*(?:,\s*(?P<j>\d+)\s*)?\]$")
image_re = re.compile(r"^(?P<lhs>e\[[^\]]*\]|r\((?P<literal>.*)\))\s*->\s*(?P<rhs>.+)$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_poset(text: str) -> Poset:
    """Parse the poset text format.

    The first content line is ``elements <n>``; each further line is a
    relation ``i < j``. Everything after ``#`` is ignored.

    Raises
    ======
    PosetSyntaxError
      A line is malformed, out of range, or closes a cycle.
    """
    n = None
    covers, sources = [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if n is None:
            match = elements_re.match(line)
            if match is None:
                raise exceptions.PosetSyntaxError(
                    f"Expected 'elements <n>', got {line!r}", line=lineno
                )
            n = int(match.group("n"))
            continue
        match = cover_re.match(line)
        if match is None:
            raise exceptions.PosetSyntaxError(
                f"Expected a relation 'i < j', got {line!r}", line=lineno
            )
        pair = (int(match.group("lo")), int(match.group("hi")))
        if not all(1 <= k <= n for k in pair) or pair[0] == pair[1]:
            raise exceptions.PosetSyntaxError(
                f"Invalid relation {pair[0]} < {pair[1]} for {n} elements", line=lineno
            )
        covers.append(pair)
        sources.setdefault(pair, lineno)
    if n is None:
        raise exceptions.PosetSyntaxError("Missing 'elements <n>' line")
    try:
        return poset_from_covers(n, covers)
    except exceptions.NotAPoset as exc:
        lines = [sources[edge] for edge in exc.cycle if edge in sources]
        raise exceptions.PosetSyntaxError(str(exc), line=max(lines, default=None))


def _parse_basis(text: str, ctx: AlgebraContext) -> tuple[int, int]:
    match = basis_re.match(text.strip())
    if match is None:
        raise exceptions.ElementSyntaxError(f"Invalid basis element {text!r}")
    i = int(match.group("i"))
    j = int(match.group("j") or i)
    if not ctx.is_comparable(i, j):
        raise exceptions.SupportError(f"x{i} is not below x{j}")
    return (i, j)


def _top_level_star(text: str) -> int:
    depth = 0
    position = -1
    for index, char in enumerate(text):
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        elif char == "*" and depth == 0:
            position = index
    return position


def parse_element(text: str, ctx: AlgebraContext) -> SkewElement:
    """Parse an element expression like ``(w+1)*e[1] + 1*e[1,2] + 2*delta``.

    Terms are joined by ``+``; a term without a coefficient has
    coefficient 1. Compound coefficient literals go in parentheses.

    Raises
    ======
    ElementSyntaxError
      A term or coefficient literal is malformed.
    SupportError
      A term sits on an incomparable pair.
    """
    ring = ctx.ring
    total = ctx.zero()
    body = text.strip()
    if not body:
        raise exceptions.ElementSyntaxError("Empty element expression")
    for term in split_top_level(body, "+"):
        term = term.strip()
        if not term:
            raise exceptions.ElementSyntaxError(f"Empty term in {text!r}")
        if term == "0":
            continue
        star = _top_level_star(term)
        if star < 0:
            coeff_text, basis_text = None, term
        else:
            coeff_text, basis_text = term[:star].strip(), term[star + 1 :].strip()
        try:
            coeff = ring.one if coeff_text is None else ring.parse_element(coeff_text)
        except exceptions.RingSpecSyntaxError as exc:
            raise exceptions.ElementSyntaxError(str(exc))
        if basis_text == "delta":
            total = total + ctx.scalar_embed(coeff)
        else:
            pair = _parse_basis(basis_text, ctx)
            total = total + SkewElement(ctx, {pair: coeff})
    return total


def _read_poset(source, base_dir: Path) -> Poset:
    """A poset given as a list of lines, inline text or a path."""
    if isinstance(source, list):
        return parse_poset("\n".join(str(line) for line in source))
    if not isinstance(source, str):
        raise exceptions.WitnessSyntaxError(f"Invalid poset entry {source!r}")
    if "\n" in source or source.strip().startswith("elements"):
        return parse_poset(source)
    return parse_poset((base_dir / source).read_text())


def parse_witness(
    text: str, base_dir: Path = Path("."), bound: int = DEFAULT_ENUMERATION_BOUND
) -> RingIsoWitness:
    """Parse a witness file: a YAML header, a ``---`` line, then image lines.

    The header names ``source_poset`` and ``target_poset`` (a path
    relative to *base_dir*, inline text, or a list of lines),
    ``source_ring`` and ``target_ring`` (ring spec strings) and
    optionally ``target_labels``. Image lines read
    ``e[i,j] -> <element>`` or ``r(<literal>) -> <element>``.

    """
    lines = text.splitlines()
    try:
        separator = next(i for i, line in enumerate(lines) if line.strip() == "---")
    except StopIteration:
        raise exceptions.WitnessSyntaxError("Missing '---' after the header")
    try:
        header = yaml.safe_load("\n".join(lines[:separator])) or {}
    except yaml.YAMLError as exc:
        raise exceptions.WitnessSyntaxError(f"Invalid header: {exc}")
    if not isinstance(header, dict):
        raise exceptions.WitnessSyntaxError("The header must be a mapping")
    required = ("source_poset", "source_ring", "target_poset", "target_ring")
    missing = [key for key in required if key not in header]
    if missing:
        raise exceptions.WitnessSyntaxError(f"Header is missing {', '.join(missing)}")
    source = AlgebraContext(
        _read_poset(header["source_poset"], base_dir),
        parse_ring_spec(str(header["source_ring"])),
        bound=bound,
    )
    target = AlgebraContext(
        _read_poset(header["target_poset"], base_dir),
        parse_ring_spec(str(header["target_ring"])),
        bound=bound,
    )
    basis, scalars = {}, {}
    for lineno, raw in enumerate(lines[separator + 1 :], start=separator + 2):
        line = _strip_comment(raw)
        if not line:
            continue
        match = image_re.match(line)
        if match is None:
            raise exceptions.WitnessSyntaxError(
                f"Expected 'e[i,j] -> ...' or 'r(...) -> ...', got {line!r}",
                line=lineno,
            )
        try:
            image = parse_element(match.group("rhs"), target)
            if match.group("literal") is not None:
                key = source.ring.parse_element(match.group("literal"))
                images = scalars
            else:
                key = _parse_basis(match.group("lhs"), source)
                images = basis
        except exceptions.ParseError as exc:
            raise type(exc)(str(exc), line=lineno)
        if key in images:
            raise exceptions.WitnessSyntaxError(
                f"Duplicate image for {match.group('lhs')}", line=lineno
            )
        images[key] = image
    for i, j in source.pairs:
        if (i, j) not in basis:
            raise exceptions.WitnessSyntaxError(f"Missing the image of e[{i},{j}]")
    labels = header.get("target_labels")
    if labels is not None:
        is_ints = isinstance(labels, list) and all(isinstance(y, int) for y in labels)
        if not is_ints or sorted(labels) != list(target.poset.elements):
            raise exceptions.WitnessSyntaxError(
                f"target_labels must be a permutation of 1..{target.poset.n}, "
                f"got {labels!r}"
            )
    return RingIsoWitness(
        source,
        target,
        basis,
        scalars,
        target_labels=labels,
    )


def _poset_lines(poset: Poset) -> list[str]:
    return poset.to_text().splitlines()


def format_witness(w: RingIsoWitness) -> str:
    """Render *w* as a self-contained witness file with inline posets."""
    header = {
        "source_poset": _poset_lines(w.source.poset),
        "source_ring": w.source.ring.description,
        "target_poset": _poset_lines(w.target.poset),
        "target_ring": w.target.ring.description,
    }
    if w.target_labels != tuple(w.target.poset.elements):
        header["target_labels"] = list(w.target_labels)
    lines = [yaml.safe_dump(header, sort_keys=False).rstrip(), "---"]
    for i, j in w.source.pairs:
        lines.append(f"e[{i},{j}] -> {w.basis_images[i, j]}")
    ring = w.source.ring
    table = w.scalar_table
    for r in ring.elements():
        if r not in (ring.zero, ring.one):
            lines.append(f"r({ring.format_element(r)}) -> {table[r]}")
    return "\n".join(lines) + "\n"


def _parse_alpha(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise exceptions.ParseError(f"Invalid --alpha {text!r}, expected e.g. '2,1'")


# Verbs


class Session:
    """Lazily loaded inputs of a single command."""

    def __init__(self, command: Command):
        self.command = command

    def ring(self) -> RingSpec:
        if self.command.ring is None:
            raise exceptions.ParseError(f"{self.command.verb} needs --ring")
        return parse_ring_spec(self.command.ring)

    def context(self) -> AlgebraContext:
        if self.command.poset is None:
            raise exceptions.ParseError(f"{self.command.verb} needs --poset")
        poset = parse_poset(Path(self.command.poset).read_text())
        return AlgebraContext(poset, self.ring(), bound=self.command.bound)

    def elements(self, ctx: AlgebraContext, count: Optional[int] = None) -> list:
        exprs = self.command.elements
        if not exprs or (count is not None and len(exprs) != count):
            wanted = "at least one" if count is None else str(count)
            raise exceptions.ParseError(
                f"{self.command.verb} needs {wanted} --elem, got {len(exprs)}"
            )
        return [parse_element(expr, ctx) for expr in exprs]

    def witness(self) -> RingIsoWitness:
        if self.command.witness is None:
            raise exceptions.ParseError(f"{self.command.verb} needs --witness")
        path = Path(self.command.witness)
        return parse_witness(
            path.read_text(), base_dir=path.parent, bound=self.command.bound
        )


def _per_element(session, test) -> tuple[dict, str]:
    ctx = session.context()
    results, lines = {}, []
    for index, f in enumerate(session.elements(ctx), start=1):
        outcome = test(f)
        results[f"result_{index}"] = outcome
        lines.append(f"{f}: {str(outcome).lower()}")
    return results, "\n".join(lines)


def do_mul(session) -> tuple[dict, str]:
    ctx = session.context()
    factors = session.elements(ctx)
    product = factors[0]
    for f in factors[1:]:
        product = product * f
    return {"result": str(product)}, str(product)


def do_invert(session) -> tuple[dict, str]:
    (f,) = session.elements(session.context(), count=1)
    inverse = invert_elem(f)
    if left_inverse_elem(f) != inverse:
        msg = f"The two inversion recursions disagree on {f}"
        log.critical(msg)
        raise exceptions.TheoremViolation(msg)
    return {"result": str(inverse)}, str(inverse)


def do_radical_test(session):
    return _per_element(session, jacobson_member_elem)


def do_idempotent_test(session):
    return _per_element(session, is_idempotent_elem)


def do_diagonalize(session) -> tuple[dict, str]:
    (f,) = session.elements(session.context(), count=1)
    result = diagonalize_idempotent(f)
    results = {
        "conjugator": str(result.conjugator),
        "diagonal": str(result.diagonal),
        "conjugator_inverse": str(result.conjugator_inverse),
    }
    return results, "\n".join(f"{key}: {value}" for key, value in results.items())


def do_primitive_test(session) -> tuple[dict, str]:
    ctx = session.context()
    results, lines = {}, []
    for index, f in enumerate(session.elements(ctx), start=1):
        try:
            location = locate(f)
        except exceptions.HypothesisViolation:
            results[f"result_{index}"] = False
            lines.append(f"{f}: false")
            continue
        coefficient = ctx.ring.format_element(location.coefficient)
        results[f"result_{index}"] = True
        results[f"index_{index}"] = location.index
        results[f"coefficient_{index}"] = coefficient
        results[f"canonical_{index}"] = location.canonical
        note = "" if location.canonical else ", representative"
        lines.append(f"{f}: true (x{location.index}, {coefficient}{note})")
    return results, "\n".join(lines)


def _central_and_checked(f: SkewElement) -> bool:
    return center_member_elem(f) and component_center_check(f)


def do_center(session):
    return _per_element(session, _central_and_checked)


def do_center_enum(session) -> tuple[dict, str]:
    center = [str(f) for f in center_enumerate(session.context())]
    text = "\n".join(center + [f"count={len(center)}"])
    return {"count": len(center), "elements": center}, text


def do_fingerprint(session) -> tuple[dict, str]:
    result = fingerprint(session.context())
    text = (
        f"units={result.units} idempotents={result.idempotents} "
        f"center={result.center} radical={result.radical} total={result.total}"
    )
    return result.as_dict(), text


def do_build_psi(session) -> tuple[dict, str]:
    command = session.command
    source = session.context()
    if command.target_poset is None:
        raise exceptions.ParseError("build-psi needs --target-poset")
    target_poset = parse_poset(Path(command.target_poset).read_text())
    target_ring = parse_ring_spec(command.target_ring or command.ring)
    if command.alpha is None:
        alpha = tuple(source.poset.elements)
    else:
        alpha = _parse_alpha(command.alpha)
    try:
        phi = ring_map_by_name(command.phi, source.ring, target_ring)
    except ValueError as exc:
        raise exceptions.ParseError(str(exc))
    witness = build_psi(source, target_poset, alpha, phi)
    text = format_witness(witness)
    return {"witness": text}, text.rstrip("\n")


def do_recover(session) -> tuple[dict, str]:
    witness = session.witness()
    result = recover_poset_map(witness, exploratory=session.command.exploratory)
    alpha = ",".join("?" if y is None else str(y) for y in result.alpha)
    results = {
        "alpha": alpha,
        "exploratory": result.exploratory,
        "violations": list(result.violations),
    }
    lines = [f"alpha={alpha}"] + [f"violation: {v}" for v in result.violations]
    return results, "\n".join(lines)


def do_verify_witness(session) -> tuple[dict, str]:
    check = verify_ring_iso(session.witness())
    if not check:
        raise exceptions.NotAnIsomorphism(check.failure)
    return {"result": True}, "ok"


def do_check_axioms(session) -> tuple[dict, str]:
    ring = session.ring()
    failures = ring.check_axioms() + ring.check_endomorphism()
    if failures:
        raise exceptions.HypothesisViolation(f"{ring}: " + "; ".join(failures))
    return {"result": True}, "ok"


handlers = {
    "mul": do_mul,
    "invert": do_invert,
    "radical-test": do_radical_test,
    "idempotent-test": do_idempotent_test,
    "diagonalize": do_diagonalize,
    "primitive-test": do_primitive_test,
    "center": do_center,
    "center-enum": do_center_enum,
    "fingerprint": do_fingerprint,
    "build-psi": do_build_psi,
    "recover": do_recover,
    "verify-witness": do_verify_witness,
    "check-axioms": do_check_axioms,
}


def _echo(command: Command) -> dict:
    echoed = {"verb": command.verb}
    for key in ("poset", "ring", "witness", "target_poset", "target_ring", "alpha"):
        value = getattr(command, key)
        if value is not None:
            echoed[key] = value
    for index, expr in enumerate(command.elements, start=1):
        echoed[f"elem_{index}"] = expr
    return echoed


def run(command: Command) -> CommandResult:
    """Execute *command* and render its output.

    Never raises for bad input: parse errors give exit code 2 and
    domain errors exit code 1, with the message as the output.

    """
    if command.verb not in handlers:
        return CommandResult(2, f"Unknown verb {command.verb!r}")
    if command.output_format not in FORMATS:
        return CommandResult(2, f"Unknown format {command.output_format!r}")
    try:
        results, text = handlers[command.verb](Session(command))
    except exceptions.ParseError as exc:
        log.debug(f"Parse error in {command.verb}: {exc}")
        return CommandResult(2, str(exc))
    except (OSError, UnicodeDecodeError) as exc:
        return CommandResult(2, f"Cannot read input: {exc}")
    except exceptions.DomainError as exc:
        log.debug(f"Domain error in {command.verb}: {exc}")
        return CommandResult(1, str(exc))
    if command.output_format == "structured":
        document = {**_echo(command), **results}
        return CommandResult(0, yaml.safe_dump(document, sort_keys=False).rstrip("\n"))
    return CommandResult(0, text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skew-incidence", description="Compute in skew incidence rings."
    )
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--poset", help="Poset file for the algebra.")
    parser.add_argument("--ring", help="Coefficient ring, e.g. 'gf:2:2:frobenius'.")
    parser.add_argument(
        "--elem",
        dest="elements",
        action="append",
        default=[],
        help="Element expression (repeatable).",
    )
    parser.add_argument("--witness", help="Ring isomorphism witness file.")
    parser.add_argument(
        "--format", dest="output_format", choices=FORMATS, default="text"
    )
    parser.add_argument(
        "--bound",
        type=int,
        default=DEFAULT_ENUMERATION_BOUND,
        help="Largest algebra that may be enumerated.",
    )
    parser.add_argument("--target-poset", help="Target poset file for build-psi.")
    parser.add_argument("--target-ring", help="Target ring spec (default: --ring).")
    parser.add_argument("--alpha", help="Images of x_1..x_n, e.g. '2,1'.")
    parser.add_argument(
        "--phi",
        default="identity",
        help="Coefficient map: identity, frobenius or swap.",
    )
    parser.add_argument(
        "--exploratory",
        action="store_true",
        help="Recover even without the trivial idempotent hypothesis.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    verbose = args.pop("verbose")
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr
    )
    result = run(Command(**args))
    stream = sys.stdout if result.exit_code == 0 else sys.stderr
    print(result.output, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
