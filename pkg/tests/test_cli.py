"""CLI verb tests (in-process)."""

import json

import pytest

from conftest import scenario_doc
from vgd import cli


def write_scenario(tmp_path, **overrides):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario_doc(**overrides)))
    return path


class TestRun:
    def test_writes_outputs(self, tmp_path, capsys):
        scn = write_scenario(tmp_path)
        out = tmp_path / "out"
        assert cli.main(["run", "--scenario", str(scn), "--out", str(out)]) == 0
        for name in ("events.jsonl", "announcements.jsonl", "metrics.json"):
            assert (out / name).exists()
        assert "test-scenario" in capsys.readouterr().out

    def test_shipped_scenario_by_name_with_reports(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = cli.main(["run", "--scenario", "deviation_walk", "--mode", "gps",
                         "--out", str(out)])
        assert code == 0
        assert (out / "deviation.csv").exists()
        assert "GPS_ONLY" in capsys.readouterr().out

    def test_unknown_scenario_raises(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            cli.main(["run", "--scenario", "no-such-thing", "--out", str(tmp_path)])


class TestReport:
    def test_recomputes_from_saved_log(self, tmp_path, capsys):
        out = tmp_path / "out"
        cli.main(["run", "--scenario", "deviation_walk", "--out", str(out)])
        capsys.readouterr()
        code = cli.main(["report", "--log", str(out / "events.jsonl"),
                         "--scenario", "deviation_walk"])
        assert code == 0
        text = capsys.readouterr().out
        assert "Distance deviation report" in text
        assert '"complete"' in text


class TestValidate:
    def test_valid_scenario(self, tmp_path, capsys):
        scn = write_scenario(tmp_path)
        assert cli.main(["validate", "--scenario", str(scn)]) == 0
        assert "scenario ok" in capsys.readouterr().out

    def test_invalid_scenario_fails(self, tmp_path, capsys):
        doc = scenario_doc(fix_interval_s=0.01)
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        assert cli.main(["validate", "--scenario", str(path)]) == 1
        assert "INVALID" in capsys.readouterr().err

    def test_corpus_and_plan(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.json"
        corpus.write_text(json.dumps(scenario_doc()["corpus"]))
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps(scenario_doc()["timing_plan"]))
        code = cli.main(["validate", "--corpus", str(corpus), "--plan", str(plan)])
        assert code == 0
        out = capsys.readouterr().out
        assert "corpus ok" in out
        assert "timing plan ok" in out

    def test_nothing_to_validate(self, capsys):
        assert cli.main(["validate"]) == 1
