import json

import pytest

from pfkit import catalog
from pfkit.cli import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, SCHEMA, main
from pfkit.formats import emit_matrix
from pfkit.liftpf import emit_assignment, generate, table_row_assignment
from pfkit.matroid import FANO_PATTERN
from pfkit.pmatrix import PMatrix


def write_matrix(path, field, rows, check=True):
    path.write_text(emit_matrix(PMatrix.from_rows(field, rows, check=check)))
    return str(path)


@pytest.fixture
def fano_gf2(tmp_path):
    return write_matrix(tmp_path / "fano.txt", catalog.field("GF2"), FANO_PATTERN)


@pytest.fixture
def fano_gf35(tmp_path):
    return write_matrix(tmp_path / "fano35.txt", catalog.product("GF3", "GF5"), FANO_PATTERN)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def leaves(value):
    if isinstance(value, dict):
        for v in value.values():
            yield from leaves(v)
    elif isinstance(value, list):
        for v in value:
            yield from leaves(v)
    else:
        yield value


def test_check_valid_and_invalid(capsys, tmp_path, fano_gf2):
    code, report = run_json(capsys, "check", fano_gf2)
    assert code == EXIT_OK and report["status"] == "valid" and report["schema"] == SCHEMA
    bad = write_matrix(tmp_path / "bad.txt", catalog.field("D"), [[1, 1], [1, -2]], check=False)
    code, report = run_json(capsys, "check", bad)
    assert code == EXIT_NEGATIVE and report["status"] == "invalid" and report["witness"]["determinant"] == "-3"


def test_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "missing.txt"))
    assert code == EXIT_USAGE and err.startswith("pfkit: error")
    assert run(capsys, "fun", "NOPE")[0] == EXIT_USAGE
    junk = tmp_path / "junk.txt"
    junk.write_text("not a matrix\n")
    assert run(capsys, "check", str(junk))[0] == EXIT_USAGE


def test_fun_text(capsys):
    code, out, _ = run(capsys, "fun", "D")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "{0, 1, -1, 2, 2^-1} exhaustive"


def test_matroid_export(capsys, tmp_path, fano_gf2):
    target = tmp_path / "fano.matroid"
    code, report = run_json(capsys, "matroid", fano_gf2, "--export", str(target))
    assert code == EXIT_OK and report["name"] == "F7" and report["bases"] == 28
    assert target.exists()


def test_lift_outcomes(capsys, fano_gf2, fano_gf35):
    code, report = run_json(capsys, "lift", fano_gf2, "--hom", "hom U0 -> GF2")
    assert code == EXIT_NEGATIVE and report["status"] == "certificate"
    assert report["certificate"]["kind"] == "F7-form"
    code, report = run_json(capsys, "lift", fano_gf35, "--hom", "D->GF3xGF5", "--target", "D")
    assert code == EXIT_OK and report["status"] == "global"
    assert report["conditions"]["verdict"]


def test_target_mismatch(capsys, fano_gf35):
    assert run(capsys, "lift", fano_gf35, "--hom", "D->GF3xGF5", "--target", "S")[0] == EXIT_USAGE


def test_depth_exceeded(capsys, fano_gf35):
    code, report = run_json(capsys, "lift", fano_gf35, "--hom", "D->GF3xGF5", "--depth", "0")
    assert code == EXIT_NEGATIVE and report["status"] == "depth-exceeded"


def test_certify(capsys, fano_gf2, fano_gf35):
    assert run_json(capsys, "certify", fano_gf2, "--hom", "hom U0 -> GF2")[1]["status"] == "certificate"
    code, report = run_json(capsys, "certify", fano_gf35, "--hom", "D->GF3xGF5")
    assert code == EXIT_OK and report["status"] == "none"


def test_liftpf_round_trip(capsys, tmp_path):
    ideal = tmp_path / "ideal.txt"
    code, report = run_json(capsys, "liftpf", "product GF3 GF5", "--emit-ideal", str(ideal))
    assert code == EXIT_OK and report["generators"] == len(generate(catalog.product("GF3", "GF5")).generators)
    I, C, assignment = table_row_assignment(("GF3", "GF5"), "D")
    good = tmp_path / "good.txt"
    good.write_text(emit_assignment(I, C, assignment))
    code, report = run_json(capsys, "liftpf-check", str(ideal), "--into", "D", "--assign", str(good))
    assert code == EXIT_OK and report["status"] == "passes"
    k = next(k for k, v in assignment.items() if v == C.ring(2))
    bad = tmp_path / "bad.txt"
    bad.write_text(emit_assignment(I, C, {**assignment, k: C.ring(-1)}))
    code, report = run_json(capsys, "liftpf-check", str(ideal), "--into", "D", "--assign", str(bad))
    assert code == EXIT_NEGATIVE and report["status"] == "fails"
    assert run(capsys, "liftpf-check", str(ideal), "--into", "D", "--assign", "canonical")[0] == EXIT_USAGE
    code, report = run_json(capsys, "liftpf-check", str(ideal), "--into", "product GF3 GF5", "--assign", "canonical")
    assert code == EXIT_OK


def test_verify_catalog(capsys):
    code, out, _ = run(capsys, "verify-catalog")
    assert code == EXIT_OK
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert lines and all(l.startswith("PASS") for l in lines)


def test_output_and_seed(capsys, tmp_path, fano_gf2):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", fano_gf2, "--format", "json", "--seed", "9", "-o", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["seed"] == 9


@pytest.mark.parametrize(
    "argv",
    [["fun", "GF7"], ["fields"], ["liftpf", "product GF2 GF3"]],
    ids=["fun", "fields", "liftpf"],
)
def test_text_shows_every_json_value(capsys, argv):
    _, report = run_json(capsys, *argv)
    _, text, _ = run(capsys, *argv)
    for v in leaves(report):
        if isinstance(v, (str, int)) and not isinstance(v, bool):
            assert str(v) in text, v


def test_lift_text_shows_every_json_value(capsys, fano_gf2):
    _, report = run_json(capsys, "lift", fano_gf2, "--hom", "hom U0 -> GF2")
    _, text, _ = run(capsys, "lift", fano_gf2, "--hom", "hom U0 -> GF2")
    for v in leaves(report):
        if isinstance(v, (str, int)) and not isinstance(v, bool):
            assert str(v) in text, v
