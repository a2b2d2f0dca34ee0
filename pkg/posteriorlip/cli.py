"""
🖥️ Command Line.
===================

``posteriorlip <command> [--config FILE] [--seed N] [--out DIR] [--format F]``

Loads a TOML `RunConfig`, applies the command-line overrides, runs the
processor of the subcommand and writes a `ReportEnvelope` as JSON, CSV or
both. Nothing is written unless the run succeeds.

Exit codes: 0 when the run passes or only informs, 2 when a certificate or
uniformity check fails, 1 on configuration and numerical errors.

📦 Functions
--------------
- `build_parser`: The argument parser.
- `load_config`: Decode the TOML file and apply overrides.
- `config_digest`, `build_envelope`: Provenance of a report.
- `csv_table`: Versioned CSV columns and rows of a payload.
- `write_atomic`: Temporary file plus rename.
- `run`, `main`: Entry points.
"""

import argparse
import csv
import datetime
import hashlib
import io
import logging
import os
import pathlib
import re
import tempfile
import typing

import msgspec

import posteriorlip
import posteriorlip.abc.config
import posteriorlip.abc.reports
import posteriorlip.errors
import posteriorlip.processors

logger = logging.getLogger(__name__)

RunConfig = posteriorlip.abc.config.RunConfig
ReportEnvelope = posteriorlip.abc.reports.ReportEnvelope
Payload = posteriorlip.abc.reports.Payload
SCHEMA_VERSION = posteriorlip.abc.reports.SCHEMA_VERSION

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2

_LINE = re.compile(r"line (\d+)")
_PATH = re.compile(r"`\$\.([^`]*)`")
_VERBOSITY = (logging.WARNING, logging.INFO, logging.DEBUG)


def build_parser() -> argparse.ArgumentParser:
    """The ``posteriorlip`` argument parser."""
    parser = argparse.ArgumentParser(
        prog="posteriorlip",
        description="Lipschitz certificates of posterior kernels and their numerical checks.",
    )
    parser.add_argument("command", choices=typing.get_args(posteriorlip.abc.config.Command))
    parser.add_argument("--config", type=pathlib.Path, help="TOML run configuration")
    parser.add_argument("--seed", type=int, help="master seed (overrides the config)")
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument(
        "--format",
        choices=typing.get_args(posteriorlip.abc.config.OutputFormat),
        help="report format (overrides the config)",
    )
    parser.add_argument("--model", help="registered model name")
    parser.add_argument("--prior", help="catalogue prior name")
    parser.add_argument("--route", help="certificate route tag")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {posteriorlip.__version__}"
    )
    return parser


def _decode(raw: bytes) -> RunConfig:
    try:
        return msgspec.toml.decode(raw, type=RunConfig)
    except msgspec.ValidationError as exc:
        path = _PATH.search(str(exc))
        raise posteriorlip.errors.ConfigError(
            str(exc), key=path.group(1) if path else None
        ) from exc
    except msgspec.DecodeError as exc:
        line = _LINE.search(str(exc))
        raise posteriorlip.errors.ConfigError(
            f"malformed TOML: {exc}", line=int(line.group(1)) if line else None
        ) from exc


def load_config(path: pathlib.Path | None, args: argparse.Namespace | None = None) -> RunConfig:
    """
    Decode ``path`` and apply the overrides in ``args``.

    Parameters
    ----------
    path : pathlib.Path | None
        TOML file; all defaults when ``None``.
    args : argparse.Namespace | None, optional
        Parsed command line.

    Returns
    -------
    RunConfig
        The effective configuration.

    Raises
    ------
    posteriorlip.errors.ConfigError
        On unreadable files, TOML syntax errors (with the line) and schema
        errors (with the key path).
    """
    if path is None:
        config = RunConfig()
    else:
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise posteriorlip.errors.ConfigError(f"cannot read {path}: {exc}") from exc
        config = _decode(raw)
    if args is None:
        return config
    config = msgspec.structs.replace(config, command=args.command)
    if args.seed is not None:
        if args.seed < 0:
            raise posteriorlip.errors.ConfigError("seed must be nonnegative", key="seed")
        config = msgspec.structs.replace(config, seed=args.seed)
    if args.out is not None or args.format is not None:
        output = config.output
        config = msgspec.structs.replace(
            config,
            output=msgspec.structs.replace(
                output, dir=args.out or output.dir, format=args.format or output.format
            ),
        )
    if args.model is not None and args.model != config.model.name:
        config = msgspec.structs.replace(
            config, model=posteriorlip.abc.config.ModelSection(name=args.model)
        )
    if args.prior is not None and args.prior != config.prior.name:
        config = msgspec.structs.replace(
            config, prior=posteriorlip.abc.config.PriorSection(name=args.prior)
        )
    if args.route is not None:
        config = msgspec.structs.replace(
            config, certificate=msgspec.structs.replace(config.certificate, route=args.route)
        )
    return config


def config_digest(config: RunConfig) -> str:
    """SHA-256 of the canonical JSON encoding of ``config``."""
    return hashlib.sha256(msgspec.json.encode(config)).hexdigest()


def _stamp(payload: Payload, timestamp: str) -> Payload:
    if isinstance(payload, posteriorlip.abc.reports.CertificateReport):
        certificate = msgspec.structs.replace(payload.certificate, timestamp=timestamp)
        return posteriorlip.abc.reports.CertificateReport(certificate)
    return payload


def build_envelope(
    config: RunConfig,
    outcome: posteriorlip.processors.Outcome,
    timestamp: str | None = None,
) -> ReportEnvelope:
    """
    Wrap an outcome with its provenance.

    The report digest covers everything except the timestamps, so equal
    configurations and seeds give equal digests.
    """
    bare = ReportEnvelope(
        schema_version=SCHEMA_VERSION,
        command=config.command,
        status=outcome.status,
        config_digest=config_digest(config),
        seed=config.seed,
        payload=_stamp(outcome.payload, ""),
    )
    digest = hashlib.sha256(msgspec.json.encode(bare)).hexdigest()
    when = timestamp or datetime.datetime.now(datetime.UTC).isoformat(timespec="seconds")
    return msgspec.structs.replace(
        bare, payload=_stamp(outcome.payload, when), timestamp=when, report_digest=digest
    )


def _point(values: list[float]) -> str:
    return ";".join(repr(value) for value in values)


def csv_table(payload: Payload) -> tuple[list[str], list[list[typing.Any]]]:
    """
    Column names and rows of ``payload``; the first column is the schema version.

    One row per certificate component, sampled pair, (n, replication), cell
    count, skeleton size or (measure, bound).
    """
    version = SCHEMA_VERSION
    match payload:
        case posteriorlip.abc.reports.CertificateReport(certificate=cert):
            header = ["schema_version", "route", "metric", "L", "component", "value"]
            rows = [
                [version, cert.route, cert.metric, cert.lipschitz, name, value]
                for name, value in sorted(cert.components.items())
            ] or [[version, cert.route, cert.metric, cert.lipschitz, "", ""]]
        case posteriorlip.abc.reports.RatioSweepReport():
            header = ["schema_version", "pair", "x1", "x2", "input_distance", "distance", "ratio"]
            rows = [
                [version, index, _point(pair.x1), _point(pair.x2), pair.input_distance, pair.distance, pair.ratio]
                for index, pair in enumerate(payload.pairs)
            ]
        case posteriorlip.abc.reports.ContractionReport():
            header = ["schema_version", "n", "replication", "w1", "eps_hat", "eps_star", "c_tilde"]
            rows = []
            for index, n in enumerate(payload.n_values):
                eps_star = payload.eps_star[index] if payload.eps_star else ""
                c_tilde = payload.c_tilde[index] if payload.c_tilde else ""
                rows.extend(
                    [version, n, replication, value, payload.eps_hat[index], eps_star, c_tilde]
                    for replication, value in enumerate(payload.samples[index])
                )
        case posteriorlip.abc.reports.RenyiSweepReport():
            header = ["schema_version", "k_cells", "epsilon", "max_error", "bound", "passed"]
            rows = [
                [version, r.k_cells, r.epsilon, r.max_error, "" if r.bound is None else r.bound, "" if r.passed is None else r.passed]
                for r in payload.reports
            ]
        case posteriorlip.abc.reports.WienerReport():
            header = ["schema_version", "j", "coordinate_constant", "path_constant"]
            rows = [
                [version, j, coordinate, path]
                for j, coordinate, path in zip(
                    payload.j_values, payload.coordinate_constants, payload.path_constants, strict=True
                )
            ]
        case posteriorlip.abc.reports.PoincareSweepReport():
            header = ["schema_version", "measure", "criterion", "bound", "oracle", "margin"]
            rows = [
                [version, report.measure, bound.criterion, bound.value, report.oracle, bound.value - report.oracle]
                for report in payload.reports
                for bound in report.bounds
            ]
        case _:
            raise posteriorlip.errors.InvalidInput(f"no CSV layout for {type(payload).__name__}")
    return header, rows


def write_atomic(path: pathlib.Path, data: bytes) -> None:
    """Write ``data`` to a temporary file next to ``path`` and rename it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "wb") as stream:
            stream.write(data)
            stream.flush()
            os.fsync(stream.fileno())
        os.replace(temporary, path)
    except BaseException:
        pathlib.Path(temporary).unlink(missing_ok=True)
        raise
    logger.debug("wrote %s (%d bytes)", path, len(data))


def write_reports(config: RunConfig, envelope: ReportEnvelope) -> list[pathlib.Path]:
    """Write the envelope in the configured formats; returns the paths written."""
    directory = pathlib.Path(config.output.dir)
    written: list[pathlib.Path] = []
    if config.output.format in ("json", "both"):
        target = directory / f"{config.command}.json"
        write_atomic(target, msgspec.json.format(msgspec.json.encode(envelope), indent=2) + b"\n")
        written.append(target)
    if config.output.format in ("csv", "both"):
        header, rows = csv_table(envelope.payload)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        target = directory / f"{config.command}.csv"
        write_atomic(target, buffer.getvalue().encode())
        written.append(target)
    return written


def run(config: RunConfig) -> int:
    """
    Run one configured command and write its reports.

    Returns
    -------
    int
        0 on pass or info, 2 on a failed check.

    Raises
    ------
    posteriorlip.errors.PosteriorLipError
        Validation and numerical errors; nothing is written in that case.
    """
    processor = posteriorlip.processors.build_processor(config)
    outcome = processor.run()
    envelope = build_envelope(config, outcome)
    for path in write_reports(config, envelope):
        logger.info("report written to %s", path)
    if outcome.status == "fail":
        logger.warning("%s failed its check (report digest %s)", config.command, envelope.report_digest)
        return EXIT_VIOLATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Console entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=_VERBOSITY[min(args.verbose, len(_VERBOSITY) - 1)],
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(load_config(args.config, args))
    except posteriorlip.errors.ConfigError as exc:
        logger.error("configuration error: %s", exc)
    except posteriorlip.errors.PosteriorLipError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
    except OSError as exc:
        logger.error("cannot write reports: %s", exc)
    return EXIT_ERROR
