import json

import pandas as pd
import pytest
from loguru import logger

from main import build_parser, collect_overrides, dispatch

SMALL = ["--steps", "2000", "--trials", "3"]


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("LAB_OUTPUT_DIR", raising=False)
    yield tmp_path
    logger.remove()


def run(*args):
    return dispatch(list(args))


class TestJsonCommands:
    def test_classify_lambda(self, workdir, capsys):
        assert run("classify-lambda", "--re", "0", "--im", "0.5", "--output", str(workdir / "out")) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["class"] == "Discrete"
        assert (payload["m"], payload["n"]) == (4, 4)
        assert payload["oracle"]["passed"] is True
        assert (workdir / "out" / "lambda_class.json").exists()
        assert (workdir / "out" / "manifest.json").exists()

    def test_classify_lambda_outside_disc(self, workdir, capsys):
        assert run("classify-lambda", "--re", "0", "--im", "2", "--output", str(workdir)) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["scale_sign"] == -1
        assert payload["class"] == "Discrete"

    def test_linearize(self, workdir, capsys):
        assert run("linearize", "--map", "f0", "--order", "12", "--output", str(workdir)) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["phi"][1][0] == pytest.approx(-0.5, abs=1e-12)
        assert len(payload["residual_f1"]) == 12
        assert payload["residual_f1"][1] != [0.0, 0.0]

    def test_linearize_f1(self, workdir, capsys):
        assert run("linearize", "--map", "f1", "--order", "6", "--output", str(workdir)) == 0
        payload = json.loads(capsys.readouterr().out)
        assert all(abs(complex(*c)) < 1e-10 for c in payload["residual_f1"])


class TestExitCodes:
    def test_no_command(self):
        assert run() == 2

    def test_missing_config(self, workdir):
        assert run("occupation", "--config", str(workdir / "absent.json")) == 2

    def test_invalid_config(self, workdir):
        path = workdir / "bad.json"
        path.write_text(json.dumps({"run": {"n_steps": -5}}))
        assert run("simulate", "--config", str(path)) == 2

    def test_real_lambda_coverage_needs_force(self, workdir):
        assert run("coverage", "--re", "0.5", "--im", "0", "--output", str(workdir / "a")) == 3
        assert not (workdir / "a" / "coverage.csv").exists()
        assert run("coverage", "--re", "0.5", "--im", "0", "--force", "--output", str(workdir / "b")) == 0
        hypothesis = json.loads((workdir / "b" / "hypothesis_report.json").read_text())
        assert hypothesis["dense_orbits_applies"] is False

    def test_low_p0_occupation(self, workdir):
        assert run("occupation", "--p0", "0.4", *SMALL, "--output", str(workdir)) == 3

    def test_degenerate_start_is_a_runtime_error(self, workdir):
        path = workdir / "start.json"
        path.write_text(json.dumps({"run": {"z0": [0.0, 0.0]}}))
        assert run("occupation", "--config", str(path), *SMALL, "--output", str(workdir)) == 4


class TestArtifacts:
    def test_curve(self, workdir):
        assert run("curve", "--re", "0.5", "--im", "0", "--output", str(workdir)) == 0
        frame = pd.read_csv(workdir / "curve.csv")
        assert len(frame) == 1440
        assert frame.loc[0, "theta"] == 0.0
        assert frame.loc[0, "abs"] == 1.0
        summary = json.loads((workdir / "curve_summary.json").read_text())
        assert summary["crossings"] <= 3

    def test_occupation_rows(self, workdir):
        assert run("occupation", "--steps", "2000", "--trials", "20", "--output", str(workdir)) == 0
        frame = pd.read_csv(workdir / "occupation.csv")
        assert frame["trial"].tolist() == list(range(20))
        manifest = json.loads((workdir / "manifest.json").read_text())
        files = {entry["file"] for entry in manifest["artifacts"]}
        assert {"occupation.csv", "occupation_summary.json", "resolved_config.json"} <= files

    def test_simulate_trace(self, workdir):
        assert run("simulate", "--steps", "500", "--output", str(workdir)) == 0
        frame = pd.read_csv(workdir / "trace.csv")
        assert frame["step"].tolist() == list(range(500))

    def test_sojourn(self, workdir):
        assert run("sojourn", *SMALL, "--output", str(workdir)) == 0
        summary = json.loads((workdir / "sojourn_summary.json").read_text())
        assert summary["identity_exact"] is True
        assert len(pd.read_csv(workdir / "sojourn_trials.csv")) == 3
        assert list(pd.read_csv(workdir / "sojourn.csv").columns) == ["k", "T_2k-1", "T_2k", "eta_k", "xi_k"]

    def test_kac(self, workdir):
        path = workdir / "kac.json"
        path.write_text(json.dumps({"run": {"cap": 10000, "samples": 20}}))
        assert run("kac", "--config", str(path), "--output", str(workdir)) == 0
        frame = pd.read_csv(workdir / "kac.csv")
        assert len(frame) == 20
        assert (frame["return_time"] <= 10000).all()
        summary = json.loads((workdir / "kac_summary.json").read_text())
        assert sorted(summary["tail_scaling"]["fractions"]) == ["10", "11", "12", "13", "8", "9"]

    def test_invariants_check(self, workdir):
        assert run("invariants-check", "--re", "0", "--im", "0.5", "--output", str(workdir)) == 0
        frame = pd.read_csv(workdir / "invariants.csv")
        assert len(frame) == 11
        assert not frame["invariant"].any()

    def test_probe_nonnormal(self, workdir):
        assert run("probe-nonnormal", "--output", str(workdir)) == 0
        frame = pd.read_csv(workdir / "nonnormal.csv")
        assert pd.isna(frame.loc[0, "symbol"])
        assert (frame["ratio"] > 0).all()

    def test_mobius_preset(self, workdir):
        assert run("mobius", *SMALL, "--output", str(workdir)) == 0
        assert len(pd.read_csv(workdir / "occupation.csv")) == 3
        assert (workdir / "histogram.csv").exists()
        config = json.loads((workdir / "resolved_config.json").read_text())
        assert config["system"]["family"] == "mobius"

    def test_logistic_runs_both_probabilities(self, workdir):
        assert run("logistic", *SMALL, "--output", str(workdir)) == 0
        frame = pd.read_csv(workdir / "logistic_occupation.csv")
        assert sorted(frame["p_g2"].unique().round(6).tolist()) == [0.4, 0.6]
        assert len(frame) == 6

    def test_csv_only(self, workdir):
        path = workdir / "formats.json"
        path.write_text(json.dumps({"output": {"formats": ["csv"]}}))
        assert run("curve", "--config", str(path), "--output", str(workdir)) == 0
        assert not (workdir / "curve_summary.json").exists()
        assert (workdir / "resolved_config.json").exists()


class TestDeterminism:
    def test_repeated_runs_are_byte_identical(self, workdir):
        for name in ("a", "b"):
            assert run("occupation", *SMALL, "--seed", "5", "--output", str(workdir / name)) == 0
        assert (workdir / "a" / "occupation.csv").read_bytes() == (workdir / "b" / "occupation.csv").read_bytes()

    def test_worker_count_does_not_change_results(self, workdir):
        assert run("sojourn", *SMALL, "--threads", "1", "--output", str(workdir / "one")) == 0
        assert run("sojourn", *SMALL, "--threads", "3", "--output", str(workdir / "three")) == 0
        for name in ("sojourn.csv", "sojourn_trials.csv"):
            assert (workdir / "one" / name).read_bytes() == (workdir / "three" / name).read_bytes()


class TestParser:
    def test_samples_route_by_command(self):
        parser = build_parser()
        assert collect_overrides(parser.parse_args(["curve", "--samples", "720"])) == {
            "probe": {"curve_samples": 720}
        }
        assert collect_overrides(parser.parse_args(["kac", "--samples", "50"])) == {"run": {"samples": 50}}

    def test_unset_flags_are_not_overrides(self):
        assert collect_overrides(build_parser().parse_args(["simulate"])) == {}
