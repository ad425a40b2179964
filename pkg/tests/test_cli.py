import json
import os

import pytest

from gdiff.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")


def path(name):
    return os.path.join(DATA, name)


def test_run_basic_corpus_exits_zero(capsys):
    assert main(["run", path("c3_basic.json")]) == 0
    out = capsys.readouterr().out
    assert out.endswith("pass\n")
    assert "FAIL" not in out


def test_run_complex_corpus_exits_zero(capsys):
    assert main(["run", path("c6_complex.json")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("backend=complex")
    assert out.endswith("pass\n")


def test_failed_expectation_exits_one(capsys):
    assert main(["run", path("failing.json")]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and out.endswith("fail\n")


def test_unknown_key_exits_two(capsys):
    assert main(["run", path("unknown_key.json")]) == 2
    assert "unknown keys" in capsys.readouterr().err


def test_corrupted_connection_exits_two(capsys):
    assert main(["run", path("corrupted_connection.json")]) == 2
    err = capsys.readouterr().err
    assert "error" in err


def test_missing_file_exits_two(capsys):
    assert main(["run", path("no_such_file.json")]) == 2


def test_validate_subcommand(capsys):
    assert main(["validate", path("c3_basic.json")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("valid:")
    assert "tasks=16" in out


def test_validate_rejects_bad_file(capsys):
    assert main(["validate", path("unknown_key.json")]) == 2


def test_structured_format_is_json(capsys):
    assert main(["run", path("c3_basic.json"), "--format", "structured"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["pass"] is True
    assert len(report["tasks"]) == 16
    assert all(entry["ok"] for entry in report["tasks"])


def test_output_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main(["run", path("c3_basic.json"), "--format", "structured",
                 "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    report = json.loads(target.read_text())
    assert report["pass"] is True


def test_reports_are_byte_identical_for_fixed_seed(tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.json"
        assert main(["run", path("c3_basic.json"), "--seed", "0",
                     "--format", "structured", "--output", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_text_reports_also_deterministic(tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.txt"
        assert main(["run", path("c6_complex.json"), "--seed", "3",
                     "--output", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_backend_override_flag(capsys):
    assert main(["run", path("c3_basic.json"), "--backend", "complex",
                 "--epsilon", "1e-8"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("backend=complex")


def test_seed_recorded_in_report(capsys):
    assert main(["run", path("c3_basic.json"), "--seed", "7",
                 "--format", "structured"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["seed"] == 7


def test_console_script_installed():
    import subprocess
    proc = subprocess.run(["gdiff", "run", path("c3_basic.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.endswith("pass\n")
