import json

import pytest

from bitorsion.cli import main
from bitorsion.errors import SchemaError
from bitorsion.serialize import (
    load_circle_model,
    load_graded_complex,
    load_knot,
    load_morse_system,
    write_rows_csv,
)


@pytest.fixture
def two_term(tmp_path):
    doc = {"dims": [1, 1], "differentials": [[[[3.0, 0.0]]]]}
    path = tmp_path / "two_term_a3.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def trefoil(tmp_path):
    doc = {"generators": ["a", "b", "c"], "relators": ["a b A C", "b c B A"]}
    path = tmp_path / "trefoil.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def circle(tmp_path):
    doc = {
        "L": 6.283185307179586,
        "lambda": [2.0, 0.0],
        "phi": {"kind": "zero"},
        "f": {"kind": "cos", "wells": 1},
        "N": 128,
        "T": 5.0,
    }
    path = tmp_path / "circle.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def morse(tmp_path):
    doc = {
        "rank": 1,
        "points": [{"id": "m0", "index": 0}, {"id": "M0", "index": 1}],
        "instantons": [
            {"from": "M0", "to": "m0", "sign": -1, "holonomy": [[[1, 0]]]},
            {"from": "M0", "to": "m0", "sign": 1, "holonomy": [[[3, 0]]]},
        ],
        "forms": {"m0": [[[1, 0]]], "M0": [[[1, 0]]]},
    }
    path = tmp_path / "morse.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestLoaders:
    def test_complex_roundtrip(self, two_term):
        complex_, structure, h = load_graded_complex(two_term)
        assert complex_.dims == (1, 1)
        assert complex_.differential(0)[0, 0] == 3.0
        assert h is None

    def test_morse_loads(self, morse):
        ms, forms = load_morse_system(morse)
        assert ms.rank == 1 and len(ms.instantons) == 2

    def test_knot_loads(self, trefoil):
        pres = load_knot(trefoil)
        assert pres.generators == ("a", "b", "c")

    def test_circle_loads(self, circle):
        model, extras = load_circle_model(circle)
        assert model.holonomy == 2.0
        assert extras["N"] == 128

    def test_schema_error_fields(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"dims": [1, 1], "differentials": [[["oops"]]]}))
        with pytest.raises(SchemaError):
            load_graded_complex(str(bad))


class TestCommands:
    def test_torsion_finite(self, two_term, capsys):
        assert main(["torsion", "finite", two_term]) == 0
        out = capsys.readouterr().out
        assert "0.111111111111" in out

    def test_torsion_morse(self, morse, capsys):
        assert main(["torsion", "morse", morse]) == 0
        assert "0.25" in capsys.readouterr().out

    def test_torsion_turaev(self, morse, capsys):
        assert main(["torsion", "turaev", morse, "--euler", "M0=1"]) == 0
        assert "2.25" in capsys.readouterr().out

    def test_alexander(self, trefoil, capsys):
        assert main(["alexander", trefoil]) == 0
        assert "t^2 - t + 1" in capsys.readouterr().out

    def test_spectral_bz(self, circle, capsys):
        assert main(["spectral", circle, "--op", "bz"]) == 0
        assert "ok" in capsys.readouterr().out

    def test_spectral_witten(self, circle, capsys):
        assert main(["spectral", circle, "--op", "witten", "--T", "5", "--grid", "128"]) == 0
        assert "(1, 1)" in capsys.readouterr().out

    def test_spectral_zetadet(self, circle, capsys):
        assert main(["spectral", circle, "--op", "zetadet"]) == 0
        assert "0.5" in capsys.readouterr().out

    def test_missing_file_is_schema_error(self, capsys):
        assert main(["torsion", "finite", "/nonexistent/x.json"]) == 2

    def test_numerical_failure_exit_code(self, tmp_path):
        doc = {"L": 6.283185307179586, "lambda": [1.0, 0.0], "f": {"kind": "cos", "wells": 1}}
        path = tmp_path / "lam1.json"
        path.write_text(json.dumps(doc))
        # holonomy 1 is non-acyclic: bz refuses with a numerical-failure exit
        assert main(["spectral", str(path), "--op", "bz"]) == 1

    def test_csv_determinism(self, circle, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["--out", str(out1), "spectral", circle, "--op", "zetadet"]) == 0
        assert main(["--out", str(out2), "spectral", circle, "--op", "zetadet"]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestCsvWriter:
    def test_complex_columns_split(self):
        text = write_rows_csv([["exp", "p", 1.5 + 2.5j, 0.125, True]],
                              ["experiment", "params", "value_re", "value_im", "tol", "pass"])
        lines = text.strip().split("\n")
        assert lines[1] == "exp,p,1.5,2.5,0.125,True"
