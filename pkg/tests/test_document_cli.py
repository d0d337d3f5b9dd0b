import json
import random

import pytest
from flint import fmpq, fmpq_poly
from hypothesis import given
from hypothesis import strategies as st

from signsample import document
from signsample.cli import main
from signsample.errors import ParseError
from signsample.resolution import GeometricResolution
from signsample.sampler import SamplePointSet, SamplerConfig, run
from signsample.signs import STRICT, SignCondition, expand_equalities, list_conditions
from signsample.slp import parse_system

X2 = ["x1", "x2"]
U = fmpq_poly([0, 1])
big = st.builds(lambda p, q: fmpq(p, q), st.integers(-10 ** 60, 10 ** 60), st.integers(1, 10 ** 40))


def same(a, b):
    return (a.n, a.mode, a.seed, a.change_of_variables, a.point) == (b.n, b.mode, b.seed, b.change_of_variables, b.point) \
        and a.resolutions == b.resolutions \
        and [r.provenance for r in a.resolutions] == [r.provenance for r in b.resolutions]


@pytest.mark.parametrize("mode", ["regular", "closed", "single"])
def test_round_trip_sampler_output(mode):
    fam = parse_system(["x1^2 + x2^2 - 1"], X2)
    pts = run(fam, cfg=SamplerConfig(mode=mode, seed=2))
    conds = list_conditions(pts, fam, "closed" if mode == "closed" else STRICT)
    text = document.dumps(pts, conds)
    back, back_conds = document.loads(text)
    assert same(pts, back)
    assert [(c.kind, c.signs, c.witnesses, c.derived) for c in conds] == \
        [(c.kind, c.signs, c.witnesses, c.derived) for c in back_conds]
    assert document.dumps(back, back_conds) == text


@given(st.lists(big, min_size=2, max_size=5), big)
def test_round_trip_big_rationals(coeffs, c):
    q = fmpq_poly(coeffs + [1])
    res = GeometricResolution(q, fmpq_poly([c if c != 0 else 1]), [fmpq_poly(coeffs), fmpq_poly(coeffs[::-1])],
                              {"kind": "critical", "level": 1, "subset": [1]})
    pts = SamplePointSet(2, "regular", 0, [[c, 1], [0, 1]], [c, -c], [res])
    back, conds = document.loads(document.dumps(pts))
    assert same(pts, back) and conds is None


def test_empty_set_document():
    pts = SamplePointSet(2, "regular", 0, [[1, 0], [0, 1]], [0, 0], [])
    text = document.dumps(pts, [])
    back, conds = document.loads(text)
    assert back.resolutions == [] and conds == []
    assert json.loads(text)["format"] == document.FORMAT


def test_document_layout_is_stable():
    pts = SamplePointSet(1, "regular", 3, [[2]], [fmpq(1, 2)],
                         [GeometricResolution.from_parametrization(U ** 2 - 2, [U], {"kind": "line", "poly": 1})])
    conds = expand_equalities([SignCondition(STRICT, (0,), [(0, 0)])])
    assert document.dumps(pts, conds) == FIXED


FIXED = """{
  "format": "signsample-certificate/1",
  "mode": "regular",
  "seed": 3,
  "n": 1,
  "change_of_variables": [["2"]],
  "point": ["1/2"],
  "resolutions": [
    {
      "provenance": {
        "kind": "line",
        "poly": 1
      },
      "q": ["-2", "0", "1"],
      "qtilde": ["1"],
      "w": [["0", "1"]]
    }
  ],
  "conditions": {
    "kind": "strict",
    "list": [
      {
        "signs": "-",
        "witnessed": false,
        "derived": true,
        "witnesses": []
      },
      {
        "signs": "0",
        "witnessed": true,
        "derived": false,
        "witnesses": [[0, 0]]
      },
      {
        "signs": "+",
        "witnessed": false,
        "derived": true,
        "witnesses": []
      }
    ]
  }
}
"""


@pytest.mark.parametrize("text", ["", "[]", "{\"format\": \"other\"}", "{\"format\": \"signsample-certificate/1\"}", "{"])
def test_loads_rejects_malformed(text):
    with pytest.raises(ParseError):
        document.loads(text)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_circle_document(capsys):
    code, out, _ = run_cli(capsys, "x1^2 + x2^2 - 1", "--seed", "1")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["resolutions"]) >= 3
    assert [c["signs"] for c in doc["conditions"]["list"]] == ["-", "0", "+"]
    assert doc["input"] == {"variables": ["x1", "x2"], "polynomials": ["x1^2 + x2^2 - 1"]}


def test_cli_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run_cli(capsys, "x1^2 + x2^2 - 1", "x1*x2 - 1/4", "--seed", "5", "-o", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_list_and_sigma(capsys):
    code, out, _ = run_cli(capsys, "x1^2 + x2^2 - 1", "x1 - x2", "--sigma", "=*", "--list-conditions")
    lines = [line.split("\t")[0] for line in out.splitlines()]
    assert code == 0 and lines and all(line.startswith("0") for line in lines)
    assert set(lines) == {"0-", "00", "0+"}


def test_cli_file_and_verify(capsys, tmp_path):
    src = tmp_path / "family.txt"
    src.write_text("# two circles\nx^2 + y^2 - 1\n(x - 1)^2 + y^2 - 1  # shifted\n")
    code, out, _ = run_cli(capsys, "-f", str(src), "--vars", "x,y", "--verify")
    assert code == 0
    doc = json.loads(out)
    assert doc["verification"]["agree"] is True
    assert len(doc["conditions"]["list"]) == 9


def test_cli_closed_mode(capsys):
    code, out, _ = run_cli(capsys, "x1^2 + x2^2", "--mode", "closed", "--list-conditions", "--degrees", "2")
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == ["<=", "=", ">="]


def test_cli_parse_error_position(capsys):
    code, _, err = run_cli(capsys, "x1^2 + * x2")
    assert code == 1
    assert "offset 7" in err and "seed 0" in err


@pytest.mark.parametrize("argv", [[], ["x1", "--mode", "nope"], ["x1", "--sigma", "<<"], ["x1", "x2", "--mode", "single"],
                                  ["x1", "--file", "/nonexistent/file"], ["x1", "--degrees", "a"]])
def test_cli_input_errors(capsys, argv):
    assert run_cli(capsys, *argv)[0] == 1


def test_cli_bad_randomness(capsys):
    # with a zero coefficient bound every change of variables is singular
    code, _, err = run_cli(capsys, "x1^2 + x2^2 - 1", "--bound", "0", "--seed", "9")
    assert code == 2 and "seed 9" in err


def test_readme_example_is_current(capsys):
    from pathlib import Path

    readme = Path(__file__).resolve().parent.parent / "README.md"
    block = readme.read_text().split("```json\n")[1].split("```")[0]
    code, out, _ = run_cli(capsys, "x^2 + y^2 - 1", "--seed", "1", "--bound", "3")
    assert code == 0 and out == block
