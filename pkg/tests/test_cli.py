import json
import os

import pytest

from excol import fixtures, model
from excol.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_height_json_payload(capsys):
    code, out, _ = run(capsys, "height", "beilinson_p1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ph"] == 0
    assert payload["he_lo"] == 0 and payload["he_hi"] == 0
    assert payload["nhh"] == {"0": 1, "1": 3}


def test_json_output_is_byte_identical(capsys):
    first = run(capsys, "report", "beauville_I0", "--json", "--hoh", "1,0,0,6,9")
    second = run(capsys, "report", "beauville_I0", "--json", "--hoh", "1,0,0,6,9")
    assert first == second
    assert first[0] == 0


def test_validate_all_fixtures(capsys):
    for name in fixtures.fixture_list():
        code, out, _ = run(capsys, "validate", name)
        assert code == 0, (name, out)


def test_fixture_list(capsys):
    code, out, _ = run(capsys, "fixture", "--list")
    assert code == 0
    names = out.split()
    assert names == fixtures.fixture_list()
    assert {"burniat", "beauville_I0", "beauville_I1", "point"} <= set(names)


def test_fixture_emission_parses(capsys):
    code, out, _ = run(capsys, "fixture", "beilinson_p1")
    assert code == 0
    spec = model.parse(out)
    assert spec.n == 2


def test_unknown_fixture_is_format_error(capsys):
    code, _, err = run(capsys, "fixture", "no_such_thing")
    assert code == 2 and "unknown fixture" in err


def test_missing_input_file(capsys):
    code, _, err = run(capsys, "height", "/nonexistent/path.json")
    assert code == 2 and "no such input" in err


def test_malformed_document_is_format_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{]", encoding="utf-8")
    code, _, _ = run(capsys, "height", str(path))
    assert code == 2


def test_backwards_ext_is_format_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "n": 2, "dim_x": 0,
        "ext": [{"src": 2, "dst": 1, "deg": 0, "dim": 1}],
    }), encoding="utf-8")
    code, _, err = run(capsys, "height", str(path))
    assert code == 2 and "bad collection document" in err


def test_engine_precondition_is_exit_one(capsys):
    # a qualitative-only table has no first page
    code, _, err = run(capsys, "e1", "burniat")
    assert code == 1 and "exact" in err


def test_bad_max_page(capsys):
    code, _, _ = run(capsys, "ss", "point", "--max-page", "0")
    assert code == 2


def test_bad_hoh_list(capsys):
    code, _, _ = run(capsys, "report", "point", "--hoh", "1,x")
    assert code == 2


def test_validation_failure_exit_code(tmp_path, capsys):
    doc = fixtures.fixture_document("beilinson_p1")
    # a status contradicting the exact dims is a validation failure
    doc["qualitative"] = {"statuses": [
        {"src": 1, "dst": 2, "deg": 0, "status": "ZERO"}]}
    path = tmp_path / "conflicted.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1
    assert "FAIL" in out


def test_env_fixture_directory(tmp_path, capsys, monkeypatch):
    target = tmp_path / "corpus"
    fixtures.write_all(str(target))
    monkeypatch.setenv("EXCOL_FIXTURES", str(target))
    code, out, _ = run(capsys, "height", "fixtures/beilinson_p1", "--json")
    assert code == 0
    assert json.loads(out)["nhh"] == {"0": 1, "1": 3}


def test_shipped_fixture_files_match_registry():
    root = os.path.join(os.path.dirname(__file__), "..", "fixtures")
    for name in fixtures.fixture_list():
        path = os.path.join(root, f"{name}.json")
        assert os.path.isfile(path), f"missing shipped fixture {path}"
        with open(path, encoding="utf-8") as fh:
            on_disk = fh.read()
        assert on_disk == model.serialize(fixtures.fixture_spec(name))


def test_ss_text_grid(capsys):
    code, out, _ = run(capsys, "ss", "beilinson_p1")
    assert code == 0
    assert "page 1" in out and "stabilizes at page 2" in out


def test_field_override(capsys):
    code, out, _ = run(capsys, "height", "beilinson_p2", "--field", "F1009", "--json")
    assert code == 0
    assert json.loads(out)["nhh"] == {"0": 1, "1": 8, "2": 10}


def test_fullness_commands(capsys):
    code, out, _ = run(capsys, "fullness", "beilinson_p1")
    assert code == 0 and out.startswith("FULL")
    code, out, _ = run(capsys, "fullness", "burniat")
    assert code == 0 and out.startswith("NOT_FULL")
    code, out, _ = run(capsys, "fullness", "beauville_I1")
    assert code == 0 and out.startswith("NOT_FULL")


def test_pseudoheight_anticanonical_flag(capsys):
    code, out, _ = run(capsys, "pseudoheight", "godeaux", "--anticanonical")
    assert code == 0
    assert out.splitlines()[0] == "anticanonical pseudoheight: 1"
    assert "(2, 3)" in out


def test_all_unknown_qualitative_document(tmp_path, capsys):
    # nothing known: unbounded pseudoheight interval, no crash anywhere
    path = tmp_path / "unknown.json"
    path.write_text(json.dumps({
        "n": 2, "dim_x": 1,
        "qualitative": {"statuses": []},
    }), encoding="utf-8")
    code, out, _ = run(capsys, "height", str(path), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ph_ac_lower"] == "-inf"
    assert payload["he_hi"] == "inf"
    code, out, _ = run(capsys, "report", str(path))
    assert code == 0 and "[-inf, inf]" in out


def test_degenerate_spec_warns_about_vanishing(tmp_path, capsys):
    path = tmp_path / "no_twists.json"
    path.write_text(json.dumps({
        "n": 2, "dim_x": 0,
        "ext": [{"src": 1, "dst": 2, "deg": 0, "dim": 1}],
    }), encoding="utf-8")
    code, out, _ = run(capsys, "height", str(path))
    assert code == 0
    assert "warning" in out and "fullness" in out
    code, out, _ = run(capsys, "fullness", str(path))
    assert code == 0 and out.startswith("INCONCLUSIVE")
