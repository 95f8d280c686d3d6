from pathlib import Path

import pytest
import yaml

from skewincidence import cli, exceptions, oracles
from skewincidence.algebra import AlgebraContext
from skewincidence.cli import Command, parse_element, parse_poset, parse_witness, run
from skewincidence.coeff_ring import parse_ring_spec
from skewincidence.poset import poset_from_covers


@pytest.fixture
def write_poset(tmp_path):
    def write(text, name="poset.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


@pytest.fixture
def chain2_file(write_poset):
    return write_poset("# a two element chain\nelements 2\n1 < 2  # the only cover\n")


@pytest.fixture
def antichain2_file(write_poset):
    return write_poset("elements 2\n", name="antichain.txt")


@pytest.fixture
def ctx_gf4():
    chain2 = poset_from_covers(2, [(1, 2)])
    return AlgebraContext(chain2, parse_ring_spec("gf:2:2:frobenius"))


# Poset files


def test_parse_poset():
    p = parse_poset("elements 3\n1 < 3\n2 < 3\n")
    assert p == poset_from_covers(3, [(1, 3), (2, 3)])
    assert parse_poset("elements 1").n == 1


@pytest.mark.parametrize(
    "text,line",
    [
        ("elements x\n", 1),
        ("\nelements 2\n1 < 3\n", 3),
        ("elements 2\n1 < 1\n", 2),
        ("elements 2\n1 <= 2\n", 2),
        ("elements 3\n1 < 2\n3 < 1\n2 < 3\n", 4),
    ],
)
def test_parse_poset_errors(text, line):
    with pytest.raises(exceptions.PosetSyntaxError) as excinfo:
        parse_poset(text)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"line {line}: ")


def test_parse_poset_missing_header():
    with pytest.raises(exceptions.PosetSyntaxError):
        parse_poset("# nothing here\n")


# Element expressions


def test_parse_element(ctx_gf4):
    ring = ctx_gf4.ring
    f = parse_element("(w+1)*e[1] + 1*e[1,2]", ctx_gf4)
    assert f == ctx_gf4.element({(1, 1): ring.parse_element("w+1"), (1, 2): 1})
    assert parse_element("delta", ctx_gf4) == ctx_gf4.delta()
    assert parse_element("w*delta", ctx_gf4) == ctx_gf4.scalar_embed(2)
    assert parse_element("e[ 1 , 2 ]", ctx_gf4) == ctx_gf4.basis_e(1, 2)
    assert parse_element("0", ctx_gf4) == ctx_gf4.zero()
    # Repeated terms add up
    assert parse_element("e[1] + e[1]", ctx_gf4) == ctx_gf4.zero()


def test_parse_element_round_trip(ctx_gf4):
    for f in ctx_gf4.enumerate():
        assert parse_element(str(f), ctx_gf4) == f


@pytest.mark.parametrize(
    "text,error",
    [
        ("", exceptions.ElementSyntaxError),
        ("e[1] +", exceptions.ElementSyntaxError),
        ("3*e[1", exceptions.ElementSyntaxError),
        ("q*e[1]", exceptions.ElementSyntaxError),
        ("(w+)*e[1]", exceptions.ElementSyntaxError),
        ("(--w)*e[1]", exceptions.ElementSyntaxError),
        ("(w++1)*e[1]", exceptions.ElementSyntaxError),
        ("(1-)*e[1]", exceptions.ElementSyntaxError),
        ("e[2,1]", exceptions.SupportError),
    ],
)
def test_parse_element_errors(ctx_gf4, text, error):
    with pytest.raises(error):
        parse_element(text, ctx_gf4)


def test_support_error_message(ctx_gf4):
    with pytest.raises(exceptions.SupportError) as excinfo:
        parse_element("e[2,1]", ctx_gf4)
    assert str(excinfo.value) == "x2 is not below x1"


# Verbs


def test_invert(chain2_file):
    result = run(
        Command("invert", poset=chain2_file, ring="zmod:2", elements=["delta + e[1,2]"])
    )
    assert result == cli.CommandResult(0, "1*e[1] + 1*e[2] + 1*e[1,2]")


def test_invert_non_unit(antichain2_file):
    result = run(
        Command(
            "invert", poset=antichain2_file, ring="zmod:4", elements=["2*e[1] + e[2]"]
        )
    )
    assert result.exit_code == 1
    assert result.output == "not a unit at x1"


def test_mul_twists(chain2_file):
    result = run(
        Command(
            "mul",
            poset=chain2_file,
            ring="gf:2:2:frobenius",
            elements=["e[1,2]", "w*e[2]"],
        )
    )
    assert result.output == "(w+1)*e[1,2]"


def test_cycle_is_a_parse_error(write_poset):
    path = write_poset("elements 3\n1 < 2\n2 < 3\n3 < 1\n")
    result = run(Command("invert", poset=path, ring="zmod:2", elements=["delta"]))
    assert result.exit_code == 2
    assert "line 4" in result.output


def test_support_error_exit_code(chain2_file):
    result = run(
        Command("invert", poset=chain2_file, ring="zmod:2", elements=["e[2,1]"])
    )
    assert result.exit_code == 2
    assert "x2 is not below x1" in result.output


@pytest.mark.parametrize(
    "command",
    [
        Command("frobnicate"),
        Command("mul", output_format="json"),
        Command("mul", ring="zmod:2"),
        Command("check-axioms"),
        Command("check-axioms", ring="zmod:1"),
        Command("invert", poset="/nonexistent/poset.txt", ring="zmod:2"),
    ],
)
def test_parse_failures_exit_2(command):
    assert run(command).exit_code == 2


def test_undecodable_poset_file(tmp_path):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"elements 2\n1 < 2 # \xff\xfe\n")
    result = run(Command("invert", poset=str(path), ring="zmod:2", elements=["delta"]))
    assert result.exit_code == 2
    assert result.output.startswith("Cannot read input")


def test_elem_count_is_checked(chain2_file):
    result = run(
        Command("invert", poset=chain2_file, ring="zmod:2", elements=["delta", "0"])
    )
    assert result.exit_code == 2


def test_per_element_tests(chain2_file):
    command = Command(
        "radical-test",
        poset=chain2_file,
        ring="zmod:4",
        elements=["2*e[1] + e[1,2]", "delta"],
    )
    assert run(command).output == "2*e[1] + 1*e[1,2]: true\n1*e[1] + 1*e[2]: false"
    command.verb = "idempotent-test"
    command.elements = ["e[1] + e[1,2]", "e[1,2]"]
    assert run(command).output == "1*e[1] + 1*e[1,2]: true\n1*e[1,2]: false"


def test_diagonalize(chain2_file):
    result = run(
        Command(
            "diagonalize", poset=chain2_file, ring="zmod:2", elements=["e[1] + e[1,2]"]
        )
    )
    assert result.output.splitlines() == [
        "conjugator: 1*e[1] + 1*e[2] + 1*e[1,2]",
        "diagonal: 1*e[1]",
        "conjugator_inverse: 1*e[1] + 1*e[2] + 1*e[1,2]",
    ]
    result = run(
        Command("diagonalize", poset=chain2_file, ring="zmod:2", elements=["e[1,2]"])
    )
    assert result.exit_code == 1


def test_primitive_test(chain2_file):
    result = run(
        Command(
            "primitive-test",
            poset=chain2_file,
            ring="zmod:2",
            elements=["e[1]", "delta", "e[2] + e[1,2]"],
        )
    )
    assert result.output.splitlines() == [
        "1*e[1]: true (x1, 1)",
        "1*e[1] + 1*e[2]: false",
        "1*e[2] + 1*e[1,2]: true (x2, 1)",
    ]


def test_center(chain2_file):
    result = run(
        Command(
            "center",
            poset=chain2_file,
            ring="gf:2:2:frobenius",
            elements=["(w+1)*e[1] + w*e[2]", "delta", "e[1,2]"],
        )
    )
    assert result.output.splitlines() == [
        "(w+1)*e[1] + w*e[2]: true",
        "1*e[1] + 1*e[2]: true",
        "1*e[1,2]: false",
    ]


def test_center_enum(chain2_file):
    result = run(Command("center-enum", poset=chain2_file, ring="gf:2:2:frobenius"))
    lines = result.output.splitlines()
    assert lines[-1] == "count=4"
    assert "0" in lines
    assert "1*e[1] + 1*e[2]" in lines


def test_fingerprint(chain2_file):
    result = run(Command("fingerprint", poset=chain2_file, ring="zmod:2"))
    assert result.output == "units=2 idempotents=6 center=2 radical=2 total=8"


def test_fingerprint_chain3(write_poset):
    path = write_poset("elements 3\n1 < 2\n2 < 3\n", name="chain3.txt")
    ctx = AlgebraContext(parse_poset(Path(path).read_text()), parse_ring_spec("zmod:2"))
    idempotents = len(oracles.idempotents(ctx))
    result = run(Command("fingerprint", poset=path, ring="zmod:2"))
    assert result.output == (
        f"units=8 idempotents={idempotents} center=2 radical=8 total=64"
    )


def test_fingerprint_bound(chain2_file):
    result = run(Command("fingerprint", poset=chain2_file, ring="zmod:8", bound=100))
    assert result.exit_code == 1


def test_structured_output(chain2_file):
    result = run(
        Command(
            "radical-test",
            poset=chain2_file,
            ring="zmod:4",
            elements=["2*e[2]", "e[2]"],
            output_format="structured",
        )
    )
    document = yaml.safe_load(result.output)
    assert document == {
        "verb": "radical-test",
        "poset": chain2_file,
        "ring": "zmod:4",
        "elem_1": "2*e[2]",
        "elem_2": "e[2]",
        "result_1": True,
        "result_2": False,
    }


def test_check_axioms():
    assert run(Command("check-axioms", ring="trunc:2:3:tsq")) == cli.CommandResult(
        0, "ok"
    )


# Witnesses


def test_build_psi_then_verify_and_recover(tmp_path, antichain2_file):
    result = run(
        Command(
            "build-psi",
            poset=antichain2_file,
            ring="gf:2:2:frobenius",
            target_poset=antichain2_file,
            alpha="2,1",
            phi="frobenius",
        )
    )
    assert result.exit_code == 0, result.output
    witness_file = tmp_path / "psi.witness"
    witness_file.write_text(result.output + "\n")
    verified = run(Command("verify-witness", witness=str(witness_file)))
    assert verified == cli.CommandResult(0, "ok")
    recovered = run(Command("recover", witness=str(witness_file)))
    assert recovered == cli.CommandResult(0, "alpha=2,1")


def test_build_psi_rejects_non_iso(chain2_file, antichain2_file):
    result = run(
        Command(
            "build-psi",
            poset=chain2_file,
            ring="zmod:2",
            target_poset=antichain2_file,
        )
    )
    assert result.exit_code == 1


def test_build_psi_unknown_phi(chain2_file):
    result = run(
        Command(
            "build-psi",
            poset=chain2_file,
            ring="zmod:2",
            target_poset=chain2_file,
            phi="conjugate",
        )
    )
    assert result.exit_code == 2


witness_header = """\
source_poset: poset.txt
source_ring: zmod:2
target_poset: [elements 2, 1 < 2]
target_ring: zmod:2
---
"""


def test_parse_witness(tmp_path, write_poset):
    write_poset("elements 2\n1 < 2\n")
    text = witness_header + "e[1,1] -> e[1]\ne[2,2] -> e[2]\ne[1,2] -> e[1,2]\n"
    w = parse_witness(text, base_dir=tmp_path)
    assert w.source == w.target
    assert all(w.apply(f) == f for f in w.source.enumerate())


def test_non_unital_witness_fails(tmp_path, write_poset):
    write_poset("elements 2\n1 < 2\n")
    path = tmp_path / "bad.witness"
    path.write_text(witness_header + "e[1,1] -> e[1]\ne[2,2] -> e[1]\ne[1,2] -> 0\n")
    result = run(Command("verify-witness", witness=str(path)))
    assert result.exit_code == 1


@pytest.mark.parametrize(
    "body,line",
    [
        ("e[1,1] -> e[1]\ne[1,1] -> e[1]\n", 7),
        ("e[1,1] -> e[1]\ne[2,1] -> e[1]\n", 7),
        ("e[1,1] => e[1]\n", 6),
        ("r(q) -> delta\n", 6),
        ("e[1,1] -> e[3]\n", 6),
        ("e[1,1] -> e[1]\ne[2,2] -> e[2]\n", None),
    ],
)
def test_witness_errors(tmp_path, write_poset, body, line):
    write_poset("elements 2\n1 < 2\n")
    with pytest.raises(exceptions.ParseError) as excinfo:
        parse_witness(witness_header + body, base_dir=tmp_path)
    assert excinfo.value.line == line


@pytest.mark.parametrize(
    "labels", ["[1]", "[1, 1]", "[2, 3]", "[1, 2, 3]", "[a, b]", "2"]
)
def test_witness_target_labels_must_permute(tmp_path, write_poset, labels):
    write_poset("elements 2\n1 < 2\n")
    header = witness_header.replace("---", f"target_labels: {labels}\n---")
    body = "e[1,1] -> e[1]\ne[2,2] -> e[2]\ne[1,2] -> e[1,2]\n"
    with pytest.raises(exceptions.WitnessSyntaxError):
        parse_witness(header + body, base_dir=tmp_path)


def test_recover_bad_target_labels(tmp_path):
    path = tmp_path / "short.witness"
    path.write_text(
        "source_poset: [elements 2]\n"
        "source_ring: zmod:2\n"
        "target_poset: [elements 2]\n"
        "target_ring: zmod:2\n"
        "target_labels: [1]\n"
        "---\n"
        "e[1,1] -> e[1]\n"
        "e[2,2] -> e[2]\n"
    )
    result = run(Command("recover", witness=str(path)))
    assert result.exit_code == 2
    assert "target_labels" in result.output


def test_witness_needs_separator():
    with pytest.raises(exceptions.WitnessSyntaxError):
        parse_witness("source_ring: zmod:2\n")


def test_recover_exploratory(tmp_path, chain2_file):
    text = run(
        Command(
            "build-psi",
            poset=chain2_file,
            ring="prodswap:zmod:2",
            target_poset=chain2_file,
            phi="swap",
        )
    ).output
    path = tmp_path / "swap.witness"
    path.write_text(text)
    refused = run(Command("recover", witness=str(path)))
    assert refused.exit_code == 1
    explored = run(Command("recover", witness=str(path), exploratory=True))
    assert explored == cli.CommandResult(0, "alpha=1,2")


# Entry point


def test_main(capsys, chain2_file):
    code = cli.main(
        ["invert", "--poset", chain2_file, "--ring", "zmod:2", "--elem", "delta"]
    )
    assert code == 0
    assert capsys.readouterr().out == "1*e[1] + 1*e[2]\n"


def test_main_failure(capsys, chain2_file):
    code = cli.main(["invert", "--poset", chain2_file, "--ring", "zmod:2"])
    assert code == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err == "invert needs 1 --elem, got 0\n"


def test_main_rejects_unknown_verb():
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])
