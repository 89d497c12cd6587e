import json

import pytest

from momkit.cli import main
from momkit.corpus import resolve


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "fig8.tri")
    assert code == 0
    assert out.strip() == "2 tets, 2 edge classes, boundary genus 1"


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", "fig8.tri", "--json")
    data = json.loads(out)
    assert code == 0 and data["valid"] and data["boundary_genera"] == [1]


def test_unreadable_inputs_exit_2(capsys, tmp_path):
    assert run(capsys, "validate", str(tmp_path / "nope.tri"))[0] == 2
    bad = tmp_path / "bad.tri"
    bad.write_text("tets two\n")
    assert run(capsys, "validate", str(bad))[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_invalid_triangulation_exits_1(capsys, tmp_path):
    p = tmp_path / "open.tri"
    p.write_text("tets 1\nglue 0.3 0.0 perm=123\n")
    assert run(capsys, "validate", str(p))[0] == 1


def test_enumerate_maximal(capsys):
    code, out, _ = run(capsys, "enumerate", "fig8.tri", "--maximal")
    assert code == 0
    assert out.strip().splitlines()[-1] == "6 structures"


def test_remove_reports_rules(capsys):
    code, out, _ = run(capsys, "remove", "fig8.tri")
    assert code == 0
    assert out.splitlines()[:2] == ["remove face 0 rule a", "remove face 1 rule c"]


def test_simplify_replay_is_byte_identical(capsys, tmp_path):
    trace, end = tmp_path / "t.trace", tmp_path / "end.surf"
    code, _, _ = run(capsys, "simplify", "torus24.surf", "--trace-out", str(trace), "--end-out", str(end))
    assert code == 0
    replay_end = tmp_path / "replayed.surf"
    code, _, _ = run(capsys, "replay", "surface", "torus24.surf", str(trace), "--end-out", str(replay_end))
    assert code == 0
    assert replay_end.read_bytes() == end.read_bytes()


def test_relate_then_replay(capsys, tmp_path):
    trace, end = tmp_path / "r.trace", tmp_path / "end.struct"
    code, _, _ = run(capsys, "relate", "fig8_full.struct", "fig8_annular.struct", "--trace-out", str(trace))
    assert code == 0
    code, _, _ = run(capsys, "replay", "structure", "fig8_full.struct", str(trace), "--end-out", str(end))
    assert code == 0
    assert "keep-faces 0 1" in end.read_text()


def test_fill(capsys):
    code, out, _ = run(capsys, "fill", "torus24.surf", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["cap"] == 3


def test_fill_rejects_bad_meridian(capsys):
    assert run(capsys, "fill", "torus24.surf", "--meridian", "1 2")[0] == 1


def test_assemble(capsys):
    assert run(capsys, "assemble", "fig8_full.struct")[0] == 0
    code, _, err = run(capsys, "assemble", "fig8_annular.struct")
    assert code == 1 and "not full" in err


def test_verify_connectivity(capsys):
    code, out, _ = run(capsys, "verify-connectivity", "fig8.tri")
    assert code == 0 and "1 component" in out
    code, out, _ = run(capsys, "verify-connectivity", "--max-size", "2", "--minimal")
    assert code == 0 and out.strip().endswith("0 disconnected")


def test_fixture_lookup_falls_back_to_bundled():
    assert resolve("fig8.tri").exists()
