import json
import subprocess
import sys
from pathlib import Path

import pytest

from centering.cli import main

from tests.synthetic import target_count_corpus

FIXTURES = Path(__file__).parent / "fixtures"
EX1 = str(FIXTURES / "example1.json")
SYN = str(FIXTURES / "synthetic_corpus.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_synthetic_fixture_is_current():
    same = json.loads(Path(SYN).read_text(encoding="utf-8")) == target_count_corpus()
    assert same, "regenerate the fixture from tests/synthetic.py"


def test_analyze_example1(capsys):
    code, out, _ = run(capsys, "analyze", EX1)
    assert code == 0
    doc = json.loads(out)
    by_id = {u["id"]: u for u in doc["units"]}
    assert [by_id[u]["transition"] for u in ("u2", "u5", "u8", "u11")] == [
        "continue", "retain", "smooth_shift", "rough_shift",
    ]
    assert by_id["u0"]["cb"] == "?"


def test_validate_unregistered(capsys):
    code, out, err = run(capsys, "validate", str(FIXTURES / "unregistered.json"))
    assert code == 1
    assert "e9" in err and "invalid" in out


def test_validate_clean(capsys):
    code, out, _ = run(capsys, "validate", EX1)
    assert code == 0 and ": ok" in out


def test_analyze_unregistered_fails(capsys):
    code, _, err = run(capsys, "analyze", str(FIXTURES / "unregistered.json"))
    assert code == 1 and "e9" in err


def test_report_synthetic(capsys):
    code, out, _ = run(capsys, "report", SYN)
    assert code == 0
    for value in ("chi2=33.760", "chi2=21.402", "chi2=9.204", "chi2=10.910"):
        assert value in out


def test_report_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "report", SYN, "--out", str(a))
    run(capsys, "report", SYN, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_analyze_then_report(capsys, tmp_path):
    analysis = tmp_path / "analysis.json"
    assert run(capsys, "analyze", SYN, "--out", str(analysis))[0] == 0
    _, direct, _ = run(capsys, "report", SYN)
    _, stored, _ = run(capsys, "report", str(analysis))
    assert direct == stored


@pytest.mark.parametrize("fmt, marker", [("csv", "section,row,column,value"), ("md", "## ")])
def test_report_formats(capsys, fmt, marker):
    code, out, _ = run(capsys, "report", SYN, "--format", fmt)
    assert code == 0 and marker in out


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate", EX1])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["report", EX1, "--format", "xml"])
    assert info.value.code == 2


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", str(tmp_path / "nope.json"))
    assert code == 1 and "nope.json" in err


def test_felicity_table(capsys):
    code, out, _ = run(capsys, "felicity", str(FIXTURES / "irais.json"), "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "input,unit,mention,kind,detail"


def test_segment_initial_none(capsys):
    _, out, _ = run(capsys, "analyze", EX1, "--segment-initial", "none")
    doc = json.loads(out)
    assert doc["convention"] == "none"
    assert {u["id"]: u["transition"] for u in doc["units"]}["u1"] == "none"


def test_resolve(capsys, tmp_path):
    d = json.loads(Path(EX1).read_text())
    mention = d["segments"][0]["sentences"][1]["clauses"][0]["mentions"][0]
    mention["entity"] = None
    mention["gender"] = "m"
    src = tmp_path / "open.json"
    src.write_text(json.dumps(d))
    code, out, _ = run(capsys, "resolve", str(src))
    assert code == 0
    doc = json.loads(out)
    assert doc["unresolvable"] == []
    assert [r["entity"] for r in doc["resolution"]] == ["john"]


def test_stdin_and_module_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "centering", "analyze", "-"],
        input=Path(EX1).read_bytes(),
        capture_output=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["format"]
