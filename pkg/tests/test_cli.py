import io
import json

import pytest

from bezivin import __version__, oracle
from bezivin.cli import main
from bezivin.parser import NOT_UNIT_PRODUCT, from_str

CATALAN = "1/((1-3*x1)*(1-x2)) - 1/((1-x1)*(1-2*x2)) - 1/((1-x1)*(1-x2))"

FACTORIAL = {
    "d": 1,
    "k": 1,
    "recursions": {"1": [{"a": [0], "q": ["1"]}, {"a": [1], "q": ["0", "-1"]}]},
    "initial": [{"n": [0], "c": "1"}],
}

EDGE = {
    "d": 1,
    "k": 1,
    "recursions": {"1": [{"a": [0], "q": ["1"]}, {"a": [1], "q": ["-1"]}]},
    "initial": [{"n": [0], "c": "1"}],
}

PASCAL = {
    "d": 2,
    "k": 1,
    "recursions": {
        "1": [{"a": [0, 0], "q": ["1"]}, {"a": [1, 0], "q": ["-1"]}, {"a": [0, 1], "q": ["-1"]}],
        "2": [{"a": [0, 0], "q": ["1"]}, {"a": [1, 0], "q": ["-1"]}, {"a": [0, 1], "q": ["-1"]}],
    },
    "sections": [{"axis": axis, "value": 0, "system": EDGE} for axis in (1, 2)],
}


def geometric_system(a, b):
    return {
        "d": 2,
        "k": 1,
        "recursions": {
            "1": [{"a": [0, 0], "q": ["1"]}, {"a": [1, 0], "q": [str(-a)]}],
            "2": [{"a": [0, 0], "q": ["1"]}, {"a": [0, 1], "q": [str(-b)]}],
        },
        "initial": [{"n": [0, 0], "c": "1"}],
    }


@pytest.fixture
def system_file(tmp_path):
    def write(data):
        path = tmp_path / "system.json"
        path.write_text(json.dumps(data))
        return f"@{path}"

    return write


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert capsys.readouterr().out.strip() == f"bezivin {__version__}"


def test_missing_command(capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_expand_text(capsys):
    code, out, _ = run(capsys, "--bound", "3", "expand", "1/(1-2*x1)")
    assert code == 0
    assert out.splitlines() == ["   0  1", "   1  2", "   2  4", "   3  8"]


def test_expand_table(capsys):
    code, out, _ = run(capsys, "--bound", "2", "expand", "1/((1-x1)*(1-x2)*(1-x1*x2))")
    assert code == 0
    assert out.splitlines() == [" 1 1 1", " 1 2", " 1"]


def test_expand_json(capsys):
    code, out, _ = run(capsys, "--json", "--bound", "2", "expand", "1/(1+1/2*x1)")
    assert code == 0
    assert json.loads(out) == [
        {"n": [0], "c": "1"},
        {"n": [1], "c": "-1/2"},
        {"n": [2], "c": "1/4"},
    ]


def test_expression_from_file(capsys, tmp_path):
    path = tmp_path / "expr.txt"
    path.write_text("1/(1-2*x1)\n")
    code, out, _ = run(capsys, "--bound", "1", "expand", f"@{path}")
    assert code == 0
    assert out.splitlines() == ["   0  1", "   1  2"]


def test_expression_file_missing(capsys, tmp_path):
    path = tmp_path / "absent.txt"
    code, out, err = run(capsys, "expand", f"@{path}")
    assert code == 2
    assert out == ""
    assert err.startswith(f"error: cannot read {path}")


def test_prec_malformed_system(capsys, tmp_path):
    path = tmp_path / "system.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "prec", "eval", f"@{path}", "--point", "1")
    assert code == 2
    assert err.startswith("error: malformed JSON")


def test_expression_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("1/(1-3*x1)"))
    code, out, _ = run(capsys, "--bound", "1", "expand", "-")
    assert code == 0
    assert out.splitlines() == ["   0  1", "   1  3"]


def test_parse_error(capsys):
    code, out, err = run(capsys, "expand", "1/(1-x1-x2)")
    assert code == 2
    assert out == ""
    assert err.startswith(NOT_UNIT_PRODUCT)
    assert err.rstrip().endswith("^")


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "1/((1-2*x1)*(1-3*x1))")
    assert code == 0
    assert sorted(out.splitlines()) == ["-2/(1-2*x1)", "3/(1-3*x1)"]


def test_decompose_json(capsys):
    code, out, _ = run(capsys, "--json", "decompose", "1/((1-2*x1)*(1-3*x1))")
    assert code == 0
    terms = json.loads(out)
    assert len(terms) == 2
    assert all(t["independent_verified"] for t in terms)


def test_decompose_split_budget(capsys, monkeypatch):
    monkeypatch.setenv("BEZIVIN_SPLIT_BUDGET", "0")
    code, _, err = run(capsys, "decompose", "1/((1-2*x1)*(1-3*x1))")
    assert code == 3
    assert err.startswith("error: ")


def test_coeff_form(capsys):
    code, out, _ = run(capsys, "--json", "coeff-form", "1/(1-2*x1) + 1/(1+2*x1)")
    assert code == 0
    data = json.loads(out)
    assert data["semantics"] == "partition"
    assert data["pieces"] == [
        {
            "set": {"offset": [0], "periods": [[2]]},
            "terms": [{"B": [{"mono": [0], "c": "2"}], "beta": ["4"]}],
        }
    ]


@pytest.mark.parametrize(
    "group, first_line, expected_code",
    [
        ("-1,2,3", "bezivin(3)", 0),
        ("2,3", "constants_outside_group", 1),
    ],
)
def test_certify_catalan(capsys, group, first_line, expected_code):
    code, out, _ = run(capsys, f"--group={group}", "certify", CATALAN)
    assert code == expected_code
    assert out.splitlines()[0] == first_line


def test_certify_json(capsys):
    code, out, _ = run(capsys, "--json", "--group=-1,2,3", "certify", CATALAN, "--r", "3")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "bezivin"
    assert data["l_max"] == 3
    assert all(data["attestations"].values())
    assert data["group"] == {"kind": "bezivin", "r": 3, "within_r": True}


def test_certify_not_bezivin(capsys):
    text = (
        "1/(1-2*x1*x2) + 1/(1-3*x1*x2) + x2/((1-3*x1*x2)^2*(1-5*x2))"
        " + x1/((1-x1)*(1-x1*x2))"
    )
    code, out, _ = run(capsys, "--group=2,3,5", "certify", text)
    assert code == 1
    assert out.splitlines()[:2] == ["not_bezivin", "witness piece: 0,1 ; 1,1 ; 0,1"]


def test_certify_polya_without_verification(capsys):
    code, out, _ = run(
        capsys, "--no-exact-verify", "--group=2,3", "certify", "1/((1-2*x1)*(1-3*x2))"
    )
    assert code == 0
    assert out.strip() == "polya"


def test_certify_needs_group(capsys):
    code, _, err = run(capsys, "certify", CATALAN)
    assert code == 2
    assert "--group" in err


def test_hadamard_product(capsys):
    code, out, _ = run(
        capsys, "--json", "--bound", "3", "hadamard", "product", "1/(1-2*x1)", "1/(1-3*x1)"
    )
    assert code == 0
    assert [item["c"] for item in json.loads(out)] == ["1", "6", "36", "216"]


def test_hadamard_product_needs_other(capsys):
    code, _, err = run(capsys, "hadamard", "product", "1/(1-2*x1)")
    assert code == 2
    assert "second expression" in err


def test_hadamard_subinverse(capsys):
    code, out, _ = run(capsys, "--bound", "2", "hadamard", "subinverse", "(1+x1)/(1-2*x1)")
    assert code == 0
    assert out.splitlines() == ["   0  1", "   1  1/3", "   2  1/6"]


def test_hadamard_subinverse_closed_form(capsys):
    code, out, _ = run(
        capsys, "hadamard", "subinverse", "--closed-form", "1/((1-2*x1)*(1-3*x2))"
    )
    assert code == 0
    result = oracle.expand_rational(from_str(out.strip()).terms, 8)
    expected = oracle.expand_rational(from_str("1/((1-1/2*x1)*(1-1/3*x2))").terms, 8)
    assert oracle.compare(result, expected) is None


def test_restrict(capsys):
    code, out, _ = run(capsys, "--json", "restrict", "2/((1-3*x1)*(1-x2))", "1,0 ; 2,0 ; 0,1")
    assert code == 0
    assert json.loads(out) == {
        "c0": "6",
        "u0": [1, 0],
        "factors": [{"c": "9", "e": [2, 0]}, {"c": "1", "e": [0, 1]}],
    }


def test_restrict_rejects(capsys):
    code, _, err = run(capsys, "restrict", "(1+x1)/(1-3*x1)", "0 ; 2")
    assert code == 2
    assert "monomial numerator" in err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("member", "0,0 ; 1,1 ; 0,1", "--point", "2,3"), "(2, 1)"),
        (("member", "0,0 ; 1,1 ; 0,1", "--point", "3,2"), "None"),
        (("overlap", "0 ; 2", "1 ; 2"), "r=1 witness=[0]"),
        (("overlap", "0 ; 2", "0 ; 3", "1 ; 2"), "r=2 witness=[0, 1]"),
    ],
)
def test_sets(capsys, argv, expected):
    code, out, _ = run(capsys, "sets", *argv)
    assert code == 0
    assert out.strip() == expected


def test_sets_intersect(capsys):
    code, out, _ = run(capsys, "--json", "sets", "intersect", "0 ; 2", "0 ; 3")
    assert code == 0
    data = json.loads(out)
    assert data["components"] == [{"offset": [0], "periods": [[6]]}]


@pytest.mark.parametrize(
    "argv",
    [
        ("sets", "intersect", "0 ; 2"),
        ("sets", "member", "0 ; 2"),
        ("sets", "member", "0 ; 2", "--point", "a"),
    ],
)
def test_sets_rejects(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error: ")


def test_prec_eval(capsys, system_file):
    code, out, _ = run(capsys, "prec", "eval", system_file(FACTORIAL), "--point", "5")
    assert code == 0
    assert out.strip() == "120"


@pytest.mark.parametrize("axis", ["1", "2"])
def test_prec_eval_axis(capsys, system_file, axis):
    code, out, _ = run(
        capsys, "prec", "eval", system_file(PASCAL), "--point", "3,2", "--axis", axis
    )
    assert code == 0
    assert out.strip() == "10"


def test_prec_check(capsys, system_file):
    expr = "1/((1-2*x1)*(1-3*x2))"
    code, out, _ = run(
        capsys, "--bound", "6", "prec", "check", system_file(geometric_system(2, 3)), "--expr", expr
    )
    assert (code, out.strip()) == (0, "ok")
    code, out, _ = run(
        capsys, "--bound", "6", "prec", "check", system_file(geometric_system(2, 4)), "--expr", expr
    )
    assert (code, out.strip()) == (1, "violated: recursion 2 at [1, 1]")


def test_prec_check_needs_expr(capsys, system_file):
    code, _, err = run(capsys, "prec", "check", system_file(geometric_system(2, 3)))
    assert code == 2
    assert "--expr" in err


@pytest.mark.parametrize(
    "strips, expected_code, expected",
    [
        ("6", 0, "vanishes on the orthant [6]"),
        ("3", 1, "hypothesis fails at [3]"),
    ],
)
def test_prec_vanish(capsys, system_file, strips, expected_code, expected):
    system = {
        "d": 1,
        "k": 1,
        "recursions": {"1": [{"a": [0], "q": ["0", "1"]}, {"a": [1], "q": ["-5", "1"]}]},
    }
    code, out, _ = run(
        capsys,
        "--bound",
        "10",
        "prec",
        "vanish",
        system_file(system),
        "--expr",
        "(1 + 4*x1 + 6*x1^2 + 4*x1^3 + x1^4)",
        "--c",
        "6",
        "--strips",
        strips,
    )
    assert code == expected_code
    assert out.strip() == expected


@pytest.mark.parametrize(
    "other, expected_code, expected",
    [
        ("1/((1-x1)*(1-x1))", 0, "equal"),
        ("1/(1-2*x1)", 1, "first mismatch at [2]: 3 vs 4"),
        ("1/(1-3*x1)", 1, "first mismatch at [1]: 2 vs 3"),
    ],
)
def test_oracle_compare(capsys, other, expected_code, expected):
    code, out, _ = run(capsys, "--bound", "4", "oracle-compare", "1/(1-x1)^2", other)
    assert code == expected_code
    assert out.strip() == expected


def test_scan(capsys):
    code, out, _ = run(capsys, "--bound", "6", "scan", CATALAN)
    assert code == 0
    assert out.splitlines() == ["[1, 1]", "[2, 3]"]
