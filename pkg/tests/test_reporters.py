#!/usr/bin/env python3
"""
Unit Tests for summaries and reporters

Metric files are written by hand so every expected number is known.
"""

import json
import unittest
from unittest.mock import patch

import pytest

from tools.lib.config_loader import canonical_json
from tools.lib.experiment.summary import find_metric_files, load_run, summarize
from tools.lib.models.config_models import RunConfig
from tools.lib.reporters import (
    CSVReporter,
    MetricsWriter,
    format_summary_table,
    load_run_record,
    print_run_summary,
    print_summary_table,
    read_metrics,
    save_run_record,
)


def write_run(root, config, finals):
    """Write a run directory whose evaluations end at finals[-1]."""
    directory = root / "runs" / config.run_id
    directory.mkdir(parents=True)
    (directory / "config.json").write_text(canonical_json(config))
    writer = MetricsWriter(directory / "metrics.jsonl")
    for i, value in enumerate(finals):
        writer({"episode": 4 * (i + 1), "eval_mean_reward": value, "eval_stderr": 0.5})
    return writer.path


@pytest.fixture
def runs(tmp_path):
    """Three DRE seeds and two p2p seeds of CN-3 ac-dist."""
    dre = RunConfig(scenario="cn", agents=3, reward_setting="ac-dist", estimator="dre")
    p2p = dre.model_copy(update={"estimator": "p2p"})
    files = [
        write_run(tmp_path, dre.model_copy(update={"seed": 0}), [-40.0, -10.0]),
        write_run(tmp_path, dre.model_copy(update={"seed": 1}), [-40.0, -12.0]),
        write_run(tmp_path, dre.model_copy(update={"seed": 2}), [-40.0, -14.0]),
        write_run(tmp_path, p2p.model_copy(update={"seed": 0}), [-30.0]),
        write_run(tmp_path, p2p.model_copy(update={"seed": 1}), [-20.0]),
    ]
    return tmp_path, files


class TestSummary:
    """Cross-run summaries"""

    def test_find_metric_files(self, runs):
        """Test every run directory is found"""
        root, files = runs
        assert find_metric_files(root) == sorted(files)
        assert find_metric_files(root / "runs" / "absent") == []

    def test_load_run(self, runs):
        """Test a run loads its snapshot and final evaluation"""
        _, files = runs
        config, final = load_run(files[0])
        assert config.estimator == "dre" and config.seed == 0
        assert final == {"episode": 8, "final_mean": -10.0, "final_stderr": 0.5}

    def test_pooled_mean_and_stderr(self, runs):
        """Test seeds pool under one label with mean and standard error"""
        _, files = runs
        rows = {row.estimator: row for row in summarize(files)}
        assert rows["dre"].seeds == 3
        assert rows["dre"].mean == pytest.approx(-12.0)
        assert rows["dre"].stderr == pytest.approx(2.0 / 3**0.5)
        assert rows["p2p"].mean == pytest.approx(-25.0)
        assert rows["p2p"].stderr == pytest.approx(5.0)

    def test_normalized_within_cell(self, runs):
        """Test the better configuration scores omega"""
        _, files = runs
        rows = {row.estimator: row for row in summarize(files)}
        assert rows["dre"].normalized == pytest.approx(10.0)
        assert rows["p2p"].normalized == pytest.approx(0.0)

    def test_single_row_cell_is_unscored(self, runs):
        """Test a lone configuration keeps normalized None"""
        _, files = runs
        (row,) = summarize(files[:3])
        assert row.normalized is None
        assert row.label == "cn-3-dre-ss-ss-ac-dist"

    def test_failed_run_skipped(self, runs):
        """Test a stream without evaluations is left out of the summary"""
        root, files = runs
        failed = RunConfig(scenario="cn", agents=3, reward_setting="ac-dist", estimator="dre", seed=9)
        empty = write_run(root, failed, [])
        rows = {row.estimator: row for row in summarize(files + [empty])}
        assert rows["dre"].seeds == 3

    def test_run_without_snapshot_skipped(self, runs):
        """Test a run directory missing config.json is left out of the summary"""
        root, files = runs
        partial = RunConfig(scenario="cn", agents=3, reward_setting="ac-dist", estimator="dre", seed=8)
        stream = write_run(root, partial, [-5.0])
        (stream.parent / "config.json").unlink()
        rows = {row.estimator: row for row in summarize(files + [stream])}
        assert rows["dre"].seeds == 3
        assert rows["dre"].mean == pytest.approx(-12.0)


class TestCSVReporter:
    """Summary CSV files"""

    def test_write_and_read(self, runs, tmp_path):
        """Test rows survive a write and read"""
        _, files = runs
        rows = summarize(files)
        path = CSVReporter.write_summary_csv(tmp_path / "out" / "summary.csv", rows)

        table = CSVReporter.read_summary_csv(path)
        assert [r["estimator"] for r in table] == ["dre", "p2p"]
        assert float(table[0]["mean"]) == rows[0].mean
        assert table[0]["agents"] == "3"
        assert table[0]["seeds"] == "3"

    def test_empty_normalized(self, runs, tmp_path):
        """Test an unscored row writes an empty cell"""
        _, files = runs
        path = CSVReporter.write_summary_csv(tmp_path / "summary.csv", summarize(files[3:]))
        assert CSVReporter.read_summary_csv(path)[0]["normalized"] == ""


class TestJSONReporter(unittest.TestCase):
    """Metric streams and run records"""

    @pytest.fixture(autouse=True)
    def _tmp(self, tmp_path):
        self.tmp_path = tmp_path

    def test_metrics_writer_sorted_lines(self):
        """Test one sorted-key JSON object per line"""
        writer = MetricsWriter(self.tmp_path / "m" / "metrics.jsonl")
        writer({"episode": 1, "critic_loss": None})
        writer.write({"episode": 2, "actor_objective": 0.25})

        lines = writer.path.read_text().splitlines()
        self.assertEqual(lines[0], '{"critic_loss": null, "episode": 1}')
        self.assertEqual(writer.count, 2)
        self.assertEqual(read_metrics(writer.path)[1]["actor_objective"], 0.25)

    def test_metrics_writer_truncates(self):
        """Test reopening a stream starts it over"""
        path = self.tmp_path / "metrics.jsonl"
        MetricsWriter(path)({"episode": 1})
        MetricsWriter(path)
        self.assertEqual(read_metrics(path), [])

    def test_run_record_round_trip(self):
        """Test a run record saves and loads"""
        record = {"run_id": "cn-3-dre-ss-ss-dete-s0", "status": "ok", "final_mean": -3.5}
        path = save_run_record(self.tmp_path / "runs" / "record.json", record)
        self.assertEqual(load_run_record(path), record)


class TestConsoleReporter(unittest.TestCase):
    """Console tables"""

    @pytest.fixture(autouse=True)
    def _runs(self, runs):
        self.files = runs[1]

    def test_format_summary_table(self):
        """Test the table groups rows under their cell"""
        table = format_summary_table(summarize(self.files))
        self.assertIn("🔍 cn | N=3 | ac-dist", table)
        self.assertIn("dre", table)
        self.assertIn("-12.00", table)
        self.assertIn("score=10.00", table)
        self.assertIn("seeds=2", table)

    @patch("tools.lib.reporters.console_reporter.logger")
    def test_print_summary_table_empty(self, mock_logger):
        """Test an empty summary only warns"""
        print_summary_table([])
        mock_logger.warning.assert_called_once()
        mock_logger.info.assert_not_called()

    @patch("tools.lib.reporters.console_reporter.logger")
    def test_print_run_summary(self, mock_logger):
        """Test the final evaluation of one run is logged"""
        print_run_summary("cn-3-dre-ss-ss-dete", 1, {"final_mean": -7.25, "final_stderr": 0.5, "episode": 8})
        logged = " ".join(call.args[0] for call in mock_logger.info.call_args_list)
        self.assertIn("seed 1", logged)
        self.assertIn("-7.25 ± 0.50", logged)
        self.assertIn("episode 8", logged)


if __name__ == "__main__":
    unittest.main()
