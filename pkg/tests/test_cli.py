"""Batch driver: suites, reports, config handling, exit codes."""

import json
import os
import subprocess
import sys

import pytest

from weyllab.cli import (
    ConfigError,
    SuiteConfig,
    compute_lens_tau,
    compute_theta,
    invariant_basis,
    main,
    run_suite,
    write_report,
)
from weyllab.liealg import build_sl

FAST = SuiteConfig(
    algebras=("sl2",),
    root_systems=("A1", "A2"),
    max_degree=4,
    series_order=4,
    framings=(1, -1),
    mc_samples=10**4,
)


def failures(report):
    return [c for c in report.checks if not c.get("equal", c.get("within", True))]


class TestConfig:
    def test_defaults_validate(self):
        SuiteConfig().validate()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"max_degree": 3},
            {"max_degree": 0},
            {"series_order": -1},
            {"framings": (0,)},
            {"framings": ()},
            {"algebras": ("sl7",)},
            {"root_systems": ("E8",)},
            {"mc_samples": 10},
            {"mc_fhbar": 0.5},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            SuiteConfig(**kwargs).validate()

    def test_invariant_basis_grid_contract(self):
        labels = [name for name, _ in invariant_basis(build_sl(3), 6)]
        assert set(labels) == {"1", "C", "C3", "C^2", "C*C3", "C^3", "C3^2"}


class TestRunSuite:
    def test_exact_suites_pass(self):
        report = run_suite(FAST, suites=("hcrf", "dhd", "reduce", "wu", "oe", "theta"))
        assert report.overall_pass
        assert not failures(report)
        suites = {c["suite"] for c in report.checks}
        assert suites == {"hcrf", "dhd", "reduce", "wu", "oe", "theta"}

    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            run_suite(FAST, suites=("nope",))

    def test_dhd_grid_contract(self):
        config = SuiteConfig(
            algebras=("sl3",), root_systems=("A2",), max_degree=6,
            series_order=4, framings=(1,), mc_samples=10**4,
        )
        report = run_suite(config, suites=("dhd",))
        inputs = {
            c["input"] for c in report.checks
            if c["identity"] == "iterated_laplacian_reduction"
        }
        assert inputs == {"1", "C", "C^2", "C^3", "C3^2"}

    def test_tampered_constant_fails_and_names_reduce(self):
        report = run_suite(FAST, suites=("reduce",), tamper_c=True)
        assert not report.overall_pass
        first = failures(report)[0]
        assert first["suite"] == "reduce"
        assert first["identity"] == "reduce_identity"

    def test_mc_suite(self):
        report = run_suite(FAST, suites=("mc",))
        assert report.overall_pass
        for check in report.checks:
            assert {"estimate", "stderr", "samples", "seed"} <= set(check)

    def test_report_determinism_modulo_timings(self):
        a = run_suite(FAST, suites=("theta", "hcrf")).to_json_dict()
        b = run_suite(FAST, suites=("theta", "hcrf")).to_json_dict()
        a.pop("timings")
        b.pop("timings")
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestReportFile:
    def test_atomic_write_and_schema(self, tmp_path):
        report = run_suite(FAST, suites=("theta",))
        path = tmp_path / "report.json"
        write_report(report, str(path))
        payload = json.loads(path.read_text())
        assert payload["schema_version"] == 1
        assert payload["tool"]["name"] == "weyllab"
        assert payload["overall_pass"] is True
        assert payload["config"]["algebras"] == ["sl2"]
        assert not [f for f in os.listdir(tmp_path) if f.startswith(".weyllab-report-")]


class TestPrinters:
    def test_lens_units(self):
        assert compute_lens_tau("A1", 1, 10) == "1"
        assert compute_lens_tau("A1", -1, 10) == "1"

    def test_lens_two_constant_term(self):
        text = compute_lens_tau("A1", 2, 10)
        assert text.startswith("1 ")
        assert "h^2" in text

    def test_theta_values(self):
        assert compute_theta("sl2") == (12, 12)
        assert compute_theta("sl3") == (48, 48)
        flipped, closed = compute_theta("sl2", flip=True)
        assert (flipped, closed) == (-12, 12)


class TestMain:
    def test_verify_pass(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main([
            "verify", "--suite", "theta", "--suite", "hcrf",
            "--algebras", "sl2", "--root-systems", "A1",
            "--max-degree", "4", "--output", str(out),
        ])
        assert code == 0
        assert json.loads(out.read_text())["overall_pass"] is True
        assert "PASS" in capsys.readouterr().out

    def test_verify_tamper_fails(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main([
            "verify", "--suite", "reduce", "--algebras", "sl2",
            "--max-degree", "4", "--framings", "1",
            "--output", str(out), "--tamper-c",
        ])
        assert code == 1
        payload = json.loads(out.read_text())
        assert payload["overall_pass"] is False

    def test_bad_config_value(self, capsys):
        code = main(["verify", "--max-degree", "3"])
        assert code == 2
        assert "config error" in capsys.readouterr().err

    def test_toml_config_and_flag_override(self, tmp_path):
        cfg = tmp_path / "weyllab.toml"
        cfg.write_text(
            'algebras = ["sl2"]\nroot_systems = ["A1"]\nmax_degree = 4\n'
            'series_order = 4\nframings = [1]\nmc_samples = 10000\n'
        )
        out = tmp_path / "r.json"
        code = main([
            "verify", "--suite", "theta", "--config", str(cfg), "--output", str(out),
        ])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["config"]["max_degree"] == 4

    def test_unknown_toml_key(self, tmp_path, capsys):
        cfg = tmp_path / "weyllab.toml"
        cfg.write_text("banana = 1\n")
        assert main(["verify", "--config", str(cfg)]) == 2

    def test_env_var_config(self, tmp_path, monkeypatch):
        cfg = tmp_path / "weyllab.toml"
        cfg.write_text('algebras = ["sl2"]\nroot_systems = ["A1"]\nmax_degree = 4\n')
        out = tmp_path / "r.json"
        monkeypatch.setenv("WEYLLAB_CONFIG", str(cfg))
        code = main(["verify", "--suite", "theta", "--output", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["config"]["max_degree"] == 4

    def test_tau_lens_stdout(self, capsys):
        assert main(["tau-lens", "-p", "1", "--algebra", "A1", "--order", "10"]) == 0
        assert capsys.readouterr().out.strip() == "1"

    def test_theta_stdout(self, capsys):
        assert main(["theta", "--algebra", "sl2"]) == 0
        assert capsys.readouterr().out.split() == ["12", "12"]

    def test_theta_flip_mismatch(self, capsys):
        assert main(["theta", "--algebra", "sl2", "--flip-vertex"]) == 1
        assert capsys.readouterr().out.split() == ["-12", "12"]

    def test_console_script(self):
        result = subprocess.run(
            [sys.executable, "-m", "weyllab.cli", "theta", "--algebra", "sl3"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert result.stdout.split() == ["48", "48"]
