"""Tests for the configuration layer, the processors and the command line."""

import csv
import pathlib

import msgspec
import pytest

from posteriorlip import cli
from posteriorlip import errors
from posteriorlip import processors
from posteriorlip.abc import config as run_config


def write_config(tmp_path: pathlib.Path, text: str) -> pathlib.Path:
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadConfig:
    def test_defaults(self):
        """Verify no file means every default."""
        config = cli.load_config(None)
        assert config.command == "certify"
        assert config.seed == 0
        assert config.model.name == "gaussian_location"
        assert config.output.format == "json"

    def test_overrides(self, tmp_path):
        """Verify command-line flags win over the file."""
        path = write_config(tmp_path, 'seed = 3\n[output]\nformat = "csv"\n')
        args = cli.build_parser().parse_args(
            ["verify", "--seed", "7", "--out", "elsewhere", "--route", "expfam"]
        )
        config = cli.load_config(path, args)
        assert config.command == "verify"
        assert config.seed == 7
        assert config.output.dir == "elsewhere"
        assert config.output.format == "csv"
        assert config.certificate.route == "expfam"

    def test_model_override_drops_params(self, tmp_path):
        """Verify switching the model discards parameters of the old one."""
        path = write_config(tmp_path, '[model]\nname = "wiener_j"\nparams = { j = 8 }\n')
        args = cli.build_parser().parse_args(["certify", "--model", "pareto_1d"])
        config = cli.load_config(path, args)
        assert config.model.name == "pareto_1d"
        assert config.model.params == {}

    def test_negative_seed(self):
        """Verify a negative seed is a configuration error."""
        args = cli.build_parser().parse_args(["certify", "--seed", "-1"])
        with pytest.raises(errors.ConfigError) as info:
            cli.load_config(None, args)
        assert info.value.key == "seed"

    def test_unknown_key(self, tmp_path):
        """Verify unknown keys are reported with their path."""
        path = write_config(tmp_path, "[sweep]\npairs = 10\n")
        with pytest.raises(errors.ConfigError) as info:
            cli.load_config(path)
        assert info.value.key == "sweep"

    def test_wrong_type(self, tmp_path):
        """Verify type errors are reported with their path."""
        path = write_config(tmp_path, '[sweep]\nn_pairs = "many"\n')
        with pytest.raises(errors.ConfigError) as info:
            cli.load_config(path)
        assert info.value.key == "sweep.n_pairs"

    def test_syntax_error(self, tmp_path):
        """Verify TOML syntax errors carry the line number."""
        path = write_config(tmp_path, "seed = 1\nseed = = 2\n")
        with pytest.raises(errors.ConfigError) as info:
            cli.load_config(path)
        assert info.value.line == 2

    def test_missing_file(self, tmp_path):
        """Verify unreadable files are configuration errors."""
        with pytest.raises(errors.ConfigError):
            cli.load_config(tmp_path / "absent.toml")


class TestProcessors:
    def test_route_alias(self):
        """Verify ``expfam`` names the exponential-family route."""
        assert processors.resolve_route("expfam") == "prop32_expfam"
        with pytest.raises(errors.ConfigError):
            processors.resolve_route("thm99")

    def test_lookups_fail_early(self):
        """Verify bad names fail when the processor is built."""
        config = run_config.RunConfig(model=run_config.ModelSection(name="cauchy"))
        with pytest.raises(errors.ConfigError) as info:
            processors.build_processor(config)
        assert info.value.key == "model.name"

    def test_unknown_catalogue_measure(self):
        """Verify the Poincaré processor checks its measure names."""
        config = run_config.RunConfig(
            command="poincare", poincare=run_config.PoincareSection(measures=["cauchy"])
        )
        with pytest.raises(errors.ConfigError):
            processors.build_processor(config)

    def test_wiener_has_no_route(self):
        """Verify certify refuses kernels without a certificate route."""
        config = run_config.RunConfig(model=run_config.ModelSection(name="wiener_j"))
        with pytest.raises(errors.ConfigError):
            processors.build_processor(config)

    def test_certify(self):
        """Verify the certificate carries the run seed."""
        config = run_config.RunConfig(seed=4)
        outcome = processors.build_processor(config).run()
        assert outcome.status == "info"
        assert outcome.payload.certificate.lipschitz == pytest.approx(0.5, abs=1e-8)
        assert outcome.payload.certificate.seed == 4


class TestEnvelope:
    def test_digest_ignores_timestamp(self):
        """Verify equal runs share a report digest."""
        config = run_config.RunConfig()
        outcome = processors.build_processor(config).run()
        first = cli.build_envelope(config, outcome, "2026-01-01T00:00:00+00:00")
        second = cli.build_envelope(config, outcome, "2026-06-01T00:00:00+00:00")
        assert first.report_digest == second.report_digest
        assert first.timestamp != second.timestamp
        assert first.payload.certificate.timestamp == first.timestamp

    def test_config_digest(self):
        """Verify the config digest changes with the seed."""
        assert cli.config_digest(run_config.RunConfig(seed=1)) != cli.config_digest(
            run_config.RunConfig(seed=2)
        )

    def test_certificate_rows(self):
        """Verify one CSV row per certificate component."""
        outcome = processors.build_processor(run_config.RunConfig()).run()
        header, rows = cli.csv_table(outcome.payload)
        assert header == ["schema_version", "route", "metric", "L", "component", "value"]
        assert len(rows) == max(1, len(outcome.payload.certificate.components))
        assert all(row[0] == cli.SCHEMA_VERSION for row in rows)


class TestMain:
    def test_certify_json(self, tmp_path):
        """Verify the exponential-family certificate L = 1/2 is written."""
        code = cli.main(
            ["certify", "--model", "gaussian_location", "--route", "expfam", "--out", str(tmp_path)]
        )
        assert code == cli.EXIT_OK
        envelope = msgspec.json.decode((tmp_path / "certify.json").read_bytes())
        assert envelope["status"] == "info"
        assert envelope["payload"]["certificate"]["L"] == pytest.approx(0.5, abs=1e-8)

    def test_verify_both_formats(self, tmp_path):
        """Verify a passing sweep exits 0 and writes JSON and CSV."""
        path = write_config(tmp_path, "[sweep]\nn_pairs = 10\n")
        code = cli.main(["verify", "--config", str(path), "--out", str(tmp_path / "out"), "--format", "both"])
        assert code == cli.EXIT_OK
        with (tmp_path / "out" / "verify.csv").open(encoding="utf-8") as stream:
            rows = list(csv.reader(stream))
        assert rows[0] == ["schema_version", "pair", "x1", "x2", "input_distance", "distance", "ratio"]
        assert len(rows) == 11
        assert (tmp_path / "out" / "verify.json").exists()

    def test_failed_check(self, tmp_path):
        """Verify a failed check exits 2 and still writes its report."""
        path = write_config(tmp_path, "[wiener]\nj_values = [4, 32]\nn_pairs = 2\ntolerance = 0.0\n")
        code = cli.main(["wiener", "--config", str(path), "--out", str(tmp_path)])
        assert code == cli.EXIT_VIOLATION
        envelope = msgspec.json.decode((tmp_path / "wiener.json").read_bytes())
        assert envelope["status"] == "fail"

    def test_unknown_model(self, tmp_path):
        """Verify configuration errors exit 1 without writing."""
        out = tmp_path / "out"
        assert cli.main(["certify", "--model", "cauchy", "--out", str(out)]) == cli.EXIT_ERROR
        assert not out.exists()

    def test_deterministic(self, tmp_path):
        """Verify equal seeds give equal report digests."""
        path = write_config(tmp_path, "[sweep]\nn_pairs = 4\n")
        digests = []
        for _ in range(2):
            cli.main(["verify", "--config", str(path), "--seed", "5", "--out", str(tmp_path / "out")])
            envelope = msgspec.json.decode((tmp_path / "out" / "verify.json").read_bytes())
            digests.append(envelope["report_digest"])
        assert digests[0] == digests[1]

    def test_output_path_is_a_file(self, tmp_path, caplog):
        """Verify an unwritable output directory exits 1 with a logged error."""
        blocker = tmp_path / "taken"
        blocker.write_text("", encoding="utf-8")
        assert cli.main(["certify", "--out", str(blocker)]) == cli.EXIT_ERROR
        assert "cannot write reports" in caplog.text
        assert blocker.read_text(encoding="utf-8") == ""
