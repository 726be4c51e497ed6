import csv
import json

import numpy as np
import pytest

from srakit import PoissonModel, model_sra, read_record, write_record
from srakit.cli import main


@pytest.fixture(scope="module")
def paper_record(tmp_path_factory):
    path = tmp_path_factory.mktemp("rec") / "paper.txt"
    assert main(["simulate", "--out", str(path)]) == 0
    return path


def _csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_simulate_defaults(paper_record):
    lines = paper_record.read_text().splitlines()
    assert lines[0].startswith("#")
    assert len(lines) == 100_001
    assert read_record(paper_record).values.min() >= 24e-6


def test_simulate_seeded_and_repeatable(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert main(["simulate", "--n", "500", "--seed", "7", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--n", "0", "--out", "x.txt"],
        ["simulate", "--rate", "-5", "--out", "x.txt"],
        ["stability", "--input", "x.txt", "--grid", "10:5:1"],
        ["fit", "--input", "x.txt", "--binning", "bogus"],
        ["nosuchcommand"],
    ],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_report_needs_exactly_one_source(tmp_path, paper_record):
    assert main(["report", "--out-dir", str(tmp_path)]) == 2
    assert main(["report", "--simulate", "--input", str(paper_record), "--out-dir", str(tmp_path)]) == 2


def test_missing_input_exits_1(tmp_path):
    assert main(["fit", "--input", str(tmp_path / "nope.txt")]) == 1


def test_stability_defaults(paper_record, tmp_path):
    assert main(["stability", "--input", str(paper_record), "--out-dir", str(tmp_path)]) == 0
    rows = _csv(tmp_path / "stability.csv")
    assert [int(r["N"]) for r in rows] == list(range(20, 1001, 20))
    assert all(float(r["eps_sra"]) >= 0 and float(r["eps_hist"]) >= 0 for r in rows)
    doc = json.loads((tmp_path / "stability.json").read_text())
    assert doc["schema"] == "sra-kit/1"
    assert doc["eps_ratio"] > 1


def test_stability_skips_infeasible(tmp_path, rng):
    rec = tmp_path / "small.txt"
    write_record(rng.exponential(1.0, 100), rec)
    out = tmp_path / "out"
    assert main(["stability", "--input", str(rec), "--q", "2", "--grid", "20,40,60", "--out-dir", str(out)]) == 0
    assert [int(r["N"]) for r in _csv(out / "stability.csv")] == [20, 40]
    assert main(["stability", "--input", str(rec), "--q", "10", "--grid", "20,40", "--out-dir", str(out)]) == 1


def test_fit_noiseless(tmp_path, capsys):
    m = PoissonModel(2.0)
    tail = model_sra(m, 200, np.arange(2, 201))
    rec = tmp_path / "noiseless.txt"
    write_record(np.concatenate([[tail[0] + 0.5], tail]), rec)
    assert main(["fit", "--input", str(rec), "--method", "sra-ls", "--normalize", "none"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["r2_sra"] - 1) < 1e-9
    assert doc["rate"] == pytest.approx(2.0, rel=1e-9)
    for key in ("schema", "config", "fit", "r2_hist", "residual_ratio", "n_bins"):
        assert key in doc


def test_fit_fixed_rate(paper_record, capsys):
    assert main(["fit", "--input", str(paper_record), "--rate", "5000", "--dead-time", "24e-6", "--first", "1000"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["fit"]["method"] == "fixed"
    assert doc["rate"] == pytest.approx(5000.0)
    assert doc["config"]["n_intervals"] == 1000


def test_report_end_to_end(paper_record, tmp_path):
    out = tmp_path / "r1"
    assert main(["report", "--input", str(paper_record), "--dead-time", "24e-6", "--out-dir", str(out)]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["schema"] == "sra-kit/1"
    assert doc["dominance"] is True
    assert doc["eps_ratio"] > 1
    s, h = doc["eps_sra_at_1000"], doc["eps_hist_at_1000"]
    assert doc["eps_ratio"] == pytest.approx(h / s, rel=1e-12)
    curve = _csv(out / "stability.csv")
    assert float(curve[-1]["eps_sra"]) == s
    assert len(_csv(out / "hist_sturges.csv")) == 11
    assert len(_csv(out / "hist_mann-wald.csv")) == 60
    assert len(_csv(out / "sra_fit.csv")) == 1000
    assert "timings_ms" not in doc


def test_report_is_deterministic(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        argv = ["report", "--simulate", "--n", "20000", "--q", "20", "--grid", "100:1000:100", "--out-dir", str(out)]
        assert main(argv) == 0
        outs.append({p.name: p.read_bytes() for p in out.iterdir()})
    assert outs[0] == outs[1]


def test_report_timings_flag(tmp_path):
    out = tmp_path / "t"
    argv = ["report", "--simulate", "--n", "5000", "--q", "5", "--grid", "200:1000:200", "--timings", "--out-dir", str(out)]
    assert main(argv) == 0
    assert "timings_ms" in json.loads((out / "report.json").read_text())


def test_report_insufficient_data(tmp_path, rng):
    rec = tmp_path / "small.txt"
    write_record(rng.exponential(1.0, 500), rec)
    assert main(["report", "--input", str(rec), "--out-dir", str(tmp_path / "r")]) == 1
    assert not (tmp_path / "r" / "report.json").exists()
