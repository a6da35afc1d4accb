"""Command line behaviour: exit codes, formats, round trips."""

import csv
import json
import math

import pytest

from growthlab.cli import main, thread_budget
from growthlab.conditions import check_mg
from growthlab.sequences import BlockSequence, build_nq


@pytest.fixture()
def seq_file(tmp_path):
    path = tmp_path / "seq.json"
    main(["build", "--family", "nq", "--A", "3", "--jmax", "8",
          "--out", str(path)])
    return path


def test_build_prints_checkpoint_rows(capsys):
    code = main(["build", "--family", "nq", "--A", "3", "--jmax", "8"])
    out = capsys.readouterr().out
    assert code == 0
    rows = [line for line in out.splitlines()
            if line.strip() and line.split()[0].isdigit()]
    assert len(rows) == 8
    assert rows[0].split()[:3] == ["1", "1", "8"]


def test_build_rejects_shallow_staircase(capsys):
    code = main(["build", "--family", "nq", "--A", "2"])
    err = capsys.readouterr().err
    assert code == 2
    assert "A must exceed 2" in err


def test_build_gevrey(capsys):
    code = main(["build", "--family", "gevrey", "--s", "2"])
    assert code == 0
    assert "gevrey" in capsys.readouterr().out


def test_build_csv_format(capsys):
    code = main(["build", "--family", "nq", "--A", "3", "--jmax", "4",
                 "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0][:3] == ["level", "ladder_start", "ladder_end"]
    assert len(rows) == 5


def test_build_round_trip_matches_in_memory(seq_file, capsys):
    record = json.loads(seq_file.read_text())
    loaded = BlockSequence.from_json_dict(record)
    direct = build_nq(3.0, 8)
    v_loaded, sup_loaded = check_mg(loaded)
    v_direct, sup_direct = check_mg(direct)
    assert v_loaded.state == v_direct.state
    assert sup_loaded == pytest.approx(sup_direct, rel=1.0e-15)
    code = main(["check", "--condition", "mg", str(seq_file)])
    assert code == 0
    assert "holds" in capsys.readouterr().out


def test_check_json_output(seq_file, capsys):
    code = main(["check", "--condition", "nq", "--format", "json",
                 str(seq_file)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["state"] == "holds"
    assert set(doc) == {"condition", "state", "witness", "window",
                        "statistics"}


def test_check_beta3_small_multiplier_fails(seq_file, capsys):
    code = main(["check", "--condition", "beta3", "--Q", "2",
                 str(seq_file)])
    assert code == 1
    assert "fails" in capsys.readouterr().out


def test_check_weight_conditions(capsys):
    assert main(["check", "--condition", "om1", "power:2"]) == 0
    assert main(["check", "--condition", "subadd", "--q", "1.5",
                 "power:0.5"]) == 1
    out = capsys.readouterr().out
    assert "witness" in out
    assert main(["check", "--condition", "om7", "logpow:2"]) == 0
    assert main(["check", "--condition", "omnq", "power:1"]) == 1


def test_check_sequence_condition_needs_file(capsys):
    code = main(["check", "--condition", "mg", "power:2"])
    assert code == 2
    assert "sequence file" in capsys.readouterr().err


def test_check_falsifier_on_staircase(seq_file, capsys):
    code = main(["check", "--condition", "falsify",
                 "assoc:" + str(seq_file)])
    assert code == 1
    assert "fails" in capsys.readouterr().out


def test_scan_gamma_text_and_json(capsys):
    assert main(["scan-gamma", "--weight", "power:0.5"]) == 0
    out = capsys.readouterr().out
    assert "[0.49" in out
    assert main(["scan-gamma", "--weight", "logpow:2"]) == 0
    assert "+inf" in capsys.readouterr().out
    assert main(["scan-gamma", "--weight", "power:1", "--format",
                 "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"gamma_lower", "gamma_upper", "sentinel",
                        "K_witnesses", "window", "margin"}
    assert doc["gamma_upper"] == pytest.approx(1.0, rel=0.05)


def test_scan_gamma_inconclusive_exit(capsys):
    code = main(["scan-gamma", "--weight", "power:1", "--tmin", "1e3",
                 "--tmax", "1e5"])
    assert code == 2
    assert "inconclusive" in capsys.readouterr().out


def test_verify_subcommand(capsys):
    assert main(["verify", "lemma-bounds"]) == 0
    out = capsys.readouterr().out
    assert "PASS lemma-bounds" in out
    assert main(["verify", "claims-a-e", "--A", "2.5", "--jmax", "4",
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pass"] is True
    assert doc["inputs"]["A"] == 2.5


def test_verify_rejects_unknown_scenario():
    with pytest.raises(SystemExit):
        main(["verify", "not-a-scenario"])


def test_sample_writes_delimited_values(tmp_path):
    out = tmp_path / "vals.csv"
    code = main(["sample", "--weight", "power:2", "--tmin", "1",
                 "--tmax", "1e6", "--samples", "13", "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["t", "omega_t"]
    assert len(rows) == 14
    for t_text, v_text in rows[1:]:
        assert float(v_text) == pytest.approx(
            math.sqrt(float(t_text)), rel=1.0e-12)


def test_report_bundle(tmp_path, capsys):
    out_dir = tmp_path / "rpt"
    code = main(["report", "--out-dir", str(out_dir), "--no-figures"])
    text = capsys.readouterr().out
    assert code == 0
    assert "6/6 scenarios passed" in text
    doc = json.loads((out_dir / "report.json").read_text())
    assert [entry["scenario"] for entry in doc] == [
        "claims-a-e", "step-v-nonequiv", "main-thm-family", "qa-cases",
        "lemma-bounds", "kappa-remark"]
    rows = list(csv.reader((out_dir / "report.csv").read_text()
                           .splitlines()))
    assert rows[0] == ["scenario", "description", "expected", "observed",
                       "residual", "pass"]
    assert len(rows) > 100
    assert all(row[5] == "pass" for row in rows[1:])


def test_thread_budget(monkeypatch):
    monkeypatch.delenv("GROWTHLAB_THREADS", raising=False)
    assert thread_budget() == 1
    monkeypatch.setenv("GROWTHLAB_THREADS", "4")
    assert thread_budget() == 4
    monkeypatch.setenv("GROWTHLAB_THREADS", "junk")
    assert thread_budget() == 1
    monkeypatch.setenv("GROWTHLAB_THREADS", "-2")
    assert thread_budget() == 1
