import json
from pathlib import Path

import pytest

from unfold_synth.automaton import automaton_from_json
from unfold_synth.cli import main
from unfold_synth.encoding import encoding_from_json
from unfold_synth.partitions import sequence_from_json, validate_sequence

from .conftest import FIXTURES

TOLLBOOTH = str(FIXTURES / "tollbooth.json")
CONSCIOUS = str(FIXTURES / "conscious_labels.json")
HIERARCHICAL = str(FIXTURES / "hierarchical_labels.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys):
    code, out, _ = run_cli(capsys, "validate", "--fsa", TOLLBOOTH)
    assert code == 0
    assert json.loads(out) == {"violations": []}


def test_validate_bad_fsa(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"states": ["a"], "next": {"a": "zzz"}}))
    code, out, _ = run_cli(capsys, "validate", "--fsa", str(bad))
    assert code == 1
    assert json.loads(out)["violations"]


def test_encode_with_labels(capsys):
    code, out, _ = run_cli(capsys, "encode", "--fsa", TOLLBOOTH, "--labels", CONSCIOUS)
    assert code == 0
    assert encoding_from_json(json.loads(out)).labels["B"] == "110"


def test_encode_random_with_pin(capsys):
    code, out, _ = run_cli(
        capsys, "encode", "--fsa", TOLLBOOTH, "--random", "--seed", "9",
        "--fix", "A=000",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["labels"]["A"] == "000"
    code2, out2, _ = run_cli(
        capsys, "encode", "--fsa", TOLLBOOTH, "--random", "--seed", "9",
        "--fix", "A=000",
    )
    assert out2 == out


def test_unfold_emits_valid_sequence_and_encoding(tmp_path, capsys):
    seq_path = tmp_path / "seq.json"
    code, out, _ = run_cli(
        capsys, "unfold", "--fsa", TOLLBOOTH, "--sequence", str(seq_path)
    )
    assert code == 0
    a = automaton_from_json(Path(TOLLBOOTH).read_text())
    ns = sequence_from_json(json.loads(seq_path.read_text()), a)
    assert validate_sequence(ns, a).ok
    e = encoding_from_json(json.loads(out))
    assert e.labels == json.loads(Path(HIERARCHICAL).read_text())["labels"]


def test_synth_and_simulate_and_verify(tmp_path, capsys):
    net_path = tmp_path / "net.json"
    code, _, _ = run_cli(
        capsys, "synth", "--fsa", TOLLBOOTH, "--labels", HIERARCHICAL,
        "--basis", "nand", "--out", str(net_path),
    )
    assert code == 0
    doc = json.loads(net_path.read_text())
    assert all(g["op"] == "NAND" for g in doc["gates"])

    code, out, _ = run_cli(
        capsys, "simulate", "--netlist", str(net_path), "--start", "000",
        "--steps", "8",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t=0 Q1Q2Q3=000"
    assert lines[1] == "t=1 Q1Q2Q3=100"
    assert lines[8] == "t=8 Q1Q2Q3=000"

    code, out, _ = run_cli(
        capsys, "verify", "--fsa", TOLLBOOTH, "--labels", HIERARCHICAL,
        "--netlist", str(net_path),
    )
    assert code == 0
    assert json.loads(out) == {"mismatches": []}


def test_phi_on_tpm_file(tmp_path, capsys):
    tpm_path = tmp_path / "tpm.json"
    code, out, _ = run_cli(
        capsys, "phi", "--fsa", TOLLBOOTH, "--labels", HIERARCHICAL,
        "--tpm-out", str(tpm_path),
    )
    assert code == 0
    report = json.loads(out)
    assert all(entry["phi"] == 0.0 for entry in report["states"].values())
    code, out2, _ = run_cli(capsys, "phi", "--tpm", str(tpm_path))
    assert code == 0
    assert json.loads(out2) == report


def test_pipeline_report_is_byte_identical(tmp_path, capsys):
    argv = [
        "pipeline", "--fsa", TOLLBOOTH, "--labels", HIERARCHICAL, "--phi",
    ]
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    assert out1.encode() == out2.encode()
    report = json.loads(out1)
    assert report["feed_forward"] is True
    assert report["verified"] is True
    assert all(e["phi"] == 0.0 for e in report["phi"]["states"].values())


def test_pipeline_unfold_writes_artifacts(tmp_path, capsys):
    art = tmp_path / "artifacts"
    code, out, _ = run_cli(
        capsys, "pipeline", "--fsa", TOLLBOOTH, "--unfold", "--artifacts", str(art),
    )
    assert code == 0
    report = json.loads(out)
    assert sorted(report["artifacts"]) == [
        "dependencies.dot",
        "encoding.json",
        "netlist.json",
        "sequence.json",
    ]
    for rel in report["artifacts"].values():
        assert Path(rel).exists()


def test_synth_dot_export(tmp_path, capsys):
    dot = tmp_path / "circuit.dot"
    code, _, _ = run_cli(
        capsys, "synth", "--fsa", TOLLBOOTH, "--labels", CONSCIOUS,
        "--dot", str(dot),
    )
    assert code == 0
    assert dot.read_text().startswith("digraph")


def test_pipeline_requires_an_encoding_choice(capsys):
    code, _, err = run_cli(capsys, "pipeline", "--fsa", TOLLBOOTH)
    assert code == 2
    assert "unfold" in err


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["synth", "--fsa", TOLLBOOTH])
    assert exc.value.code == 2


def test_missing_file_exits_two(capsys):
    code, _, err = run_cli(capsys, "validate", "--fsa", "/nonexistent.json")
    assert code == 2
    assert "error" in err
