import json

import pytest

from easywishart.cli import main, read_config
from easywishart.easy_maps import load_matrix
from easywishart.tables import MomentTable
from easywishart.wishart import ConvergenceReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- partitions

@pytest.mark.parametrize("argv,count", [
    (["2", "2", "--even"], 4),
    (["2", "2"], 15),
    (["0", "3"], 5),
    (["4", "4", "--even", "--symmetric"], 59),
])
def test_partition_listing_counts(capsys, argv, count):
    code, out, _ = run(capsys, "partitions", *argv)
    assert code == 0
    assert out.strip().splitlines()[-1] == f"{count} partitions"


def test_partition_listing_formats(capsys):
    code, out, _ = run(capsys, "partitions", "2", "2", "--even", "--format", "json")
    rows = json.loads(out)
    crossing = [r for r in rows if not r["noncrossing"]]
    assert len(crossing) == 1 and crossing[0]["signature"] == -1 and crossing[0]["eligible"]
    code, out, _ = run(capsys, "partitions", "2", "2", "--noncrossing", "--format", "csv")
    assert out.splitlines()[0].startswith("partition,") and len(out.splitlines()) == 15


def test_partition_guard(capsys):
    code, _, err = run(capsys, "partitions", "9", "9")
    assert code == 2 and "error" in err


# ------------------------------------------------------------------ classify

def test_classify_pretty_and_json(capsys):
    code, out, _ = run(capsys, "classify", "abab/cdcd")
    assert code == 0 and "eligible: True" in out and out.count("component symmetric-block") == 4
    code, out, _ = run(capsys, "classify", "ab/ba", "--format", "json")
    assert json.loads(out)["signature"] == -1


def test_classify_bad_literal(capsys):
    assert run(capsys, "classify", "ab/c?")[0] == 2


# ---------------------------------------------------------------------- choi

def test_choi_print_and_dump(capsys, tmp_path):
    code, out, _ = run(capsys, "choi", "--pi", "ab/ba", "--N", "2")
    assert code == 0 and out.splitlines()[1] == "0 0 1 0"
    path = tmp_path / "flip.bin"
    code, _, _ = run(capsys, "choi", "--map", "transpose", "--n", "2", "--out", str(path),
                     "--matrix-format", "bin")
    assert code == 0 and load_matrix(path, "bin")[1, 2] == 1


# ---------------------------------------------------------------- check-mult

@pytest.mark.parametrize("argv,code", [
    (["--pi", "ab/ba", "--N", "2", "--pmax", "4"], 0),
    (["--pi", "aaaa/aaaa", "--N", "2", "--pmax", "2"], 1),
    (["--map", "trace-unit", "--n", "3", "--pmax", "3"], 0),
    (["--map", "nonsense", "--n", "2"], 2),
    ([], 2),
])
def test_check_mult_exit_codes(capsys, argv, code):
    assert run(capsys, "check-mult", *argv)[0] == code


def test_check_mult_json_witness(capsys):
    code, out, _ = run(capsys, "check-mult", "--pi", "aaaa/aaaa", "--pmax", "2", "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["failures"][0]["left"] == "0.03125,0.0"


# ------------------------------------------------------------------- predict

def test_predict_identity_map(capsys):
    code, out, _ = run(capsys, "predict", "--pi", "ab/ab", "--N", "2", "--m", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert MomentTable.from_dict(data["limit_w_tilde"]).plain() == pytest.approx([1, 2, 5, 14])
    assert data["multiplicative"] and data["eligible"]


def test_predict_bessel(capsys):
    code, out, _ = run(capsys, "predict", "--map", "bessel", "--n", "2", "--m", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[lines.index("# limit moments of W~") + 1] == "plain: 0, 1, 0, 3"


def test_predict_twisted_crossing_equals_untwisted(capsys):
    _, twisted, _ = run(capsys, "predict", "--pi", "ab/ba", "--N", "3", "--twisted", "--format", "json")
    _, plain, _ = run(capsys, "predict", "--pi", "ab/ba", "--N", "3", "--format", "json")
    twisted, plain = json.loads(twisted), json.loads(plain)
    assert twisted["matches_untwisted"] is True
    assert twisted["limit_m_w_tilde"] == plain["limit_m_w_tilde"]


def test_predict_require_eligible(capsys):
    code, _, err = run(capsys, "predict", "--pi", "aaaa/aaaa", "--pmax", "2", "--require-eligible")
    assert code == 2 and "easy case" in err


def test_predict_csv(capsys):
    code, out, _ = run(capsys, "predict", "--pi", "aa/bb", "--N", "2", "--pmax", "2", "--format", "csv")
    assert out.splitlines()[0] == "quantity,word,re,im"
    assert "limit_m_w_tilde,11," in out


# ------------------------------------------------------------------ simulate

def test_simulate_transpose_with_assert(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--map", "transpose", "--n", "2", "--m", "1",
                       "--d-values", "5,30", "--trials", "60", "--p-max", "3",
                       "--words", "1,11,111", "--assert", "--out-dir", str(tmp_path), "--name", "tr")
    assert code == 0
    report = ConvergenceReport.from_csv((tmp_path / "tr.csv").read_text())
    assert report.d_values == [5, 30] and report.all_within()
    summary = json.loads((tmp_path / "tr.json").read_text())
    assert summary["statistic"] == "m*W~" and summary["within_tolerance"]


def test_simulate_bessel_mismatch(capsys, tmp_path):
    cfg = tmp_path / "bessel.cfg"
    cfg.write_text("map = bessel\nn = 2\nm = 2\nd = 30\ntrials = 60\nwords = 1, 11, 1111, 1*1*\nscale = w\n")
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--assert", "--assert-mismatch",
                       "--out-dir", str(tmp_path))
    assert code == 0 and "['1*1*']" in out
    summary = json.loads((tmp_path / "simulation.json").read_text())
    assert summary["reference_mismatch"]["1*1*"]["gap_in_se"] >= 5
    assert summary["reference_mismatch"]["11"]["gap_in_se"] < 5


def test_simulate_is_reproducible(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("EASYWISHART_OUTPUT_DIR", str(tmp_path / "env"))
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"pi": "ab/ba", "N": 2, "d": 4, "trials": 5, "seed": 3, "words": ["1", "11"]}))
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 0
    first = (tmp_path / "env" / "simulation.csv").read_bytes()
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 0
    assert (tmp_path / "env" / "simulation.csv").read_bytes() == first


def test_simulate_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("map = transpose\ncolour = red\n")
    assert run(capsys, "simulate", "--config", str(bad))[0] == 2
    assert run(capsys, "simulate", "--map", "nope", "--n", "2", "--out-dir", str(tmp_path))[0] == 2
    assert run(capsys, "simulate", "--out-dir", str(tmp_path))[0] == 2


def test_read_config_types(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("d = 10\nseed = 7\nwords = 1,1*\npi = ab/ba\n")
    assert read_config(path) == {"d": 10, "seed": 7, "words": "1,1*", "pi": "ab/ba"}


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "--help")[0] == 0
