"""
🧾 Report Models.
====================

msgspec definitions of what the experiment harnesses and the command line
produce. Every report is a tagged struct so that a `ReportEnvelope` can carry
any of them.

📦 Classes
--------------
- `RatioPair`: One data pair of a Lipschitz ratio sweep.
- `RatioSweepReport`: Empirical ratios against a certificate.
- `ContractionReport`: Monte Carlo posterior contraction rates.
- `RenyiReport`, `RenyiSweepReport`: Cell-average approximation errors.
- `WienerReport`: Per-j constants of the Brownian skeleton kernels.
- `PoincareReport`, `PoincareSweepReport`: Bounds against the spectral oracle.
- `ReportEnvelope`: Provenance wrapper written to disk.
"""

import msgspec

import posteriorlip.abc.objects

SCHEMA_VERSION = 1


class RatioPair(msgspec.Struct, frozen=True):
    """
    Distance between two posteriors and between their data points.

    Attributes
    ----------
    x1, x2 : list[float]
        The data points.
    distance : float
        Distance between π(·|x₁) and π(·|x₂).
    input_distance : float
        Euclidean |x₁ - x₂|.
    ratio : float
        ``distance / input_distance``.
    """

    x1: list[float]
    x2: list[float]
    distance: float
    input_distance: float
    ratio: float


class RatioSweepReport(msgspec.Struct, frozen=True, tag="ratio_sweep"):
    """
    Seeded sweep of Lipschitz ratios.

    Attributes
    ----------
    pairs : list[RatioPair]
        Every sampled pair.
    max_ratio, median_ratio : float
        Summary of the ratios.
    metric : str
        Metric on the posterior side.
    certificate : LipschitzCertificate | None
        The certificate checked, if any.
    passed : bool | None
        Whether ``max_ratio ≤ L(1 + tolerance)``; ``None`` without a certificate.
    offending : RatioPair | None
        The worst pair when the check failed.
    tolerance : float
        Relative numerical slack τ.
    seed : int
        Master seed of the pairs.
    """

    pairs: list[RatioPair]
    max_ratio: float
    median_ratio: float
    metric: str
    certificate: posteriorlip.abc.objects.LipschitzCertificate | None
    passed: bool | None
    offending: RatioPair | None
    tolerance: float
    seed: int


class ContractionReport(msgspec.Struct, frozen=True, tag="contraction"):
    """
    Monte Carlo estimates of the contraction rate ε_n = E W1(π_n(·|ξ), δ_θ₀).

    Attributes
    ----------
    n_values : list[int]
        Sample sizes.
    eps_hat : list[float]
        Averages over the kept replications.
    samples : list[list[float]]
        Per n, the W1 value of every kept replication.
    slope, intercept : float
        Least-squares fit of log ε̂_n on log n.
    replications : int
        Replications requested per n.
    discarded : int
        Replications dropped for vanishing evidence.
    eps_star : list[float]
        Deterministic KL contraction term per n (empty when not available).
    c_tilde : list[float]
        n·𝒞²[π_n] per n (empty unless requested).
    theta0 : float
        True parameter.
    seed : int
        Master seed.
    """

    n_values: list[int]
    eps_hat: list[float]
    samples: list[list[float]]
    slope: float
    intercept: float
    replications: int
    discarded: int
    eps_star: list[float]
    c_tilde: list[float]
    theta0: float
    seed: int


class RenyiReport(msgspec.Struct, frozen=True, tag="renyi"):
    """
    Error of the cell-average approximation for one partition.

    Attributes
    ----------
    epsilon : float
        Cell width.
    k_cells : int
        Number of cells.
    max_error : float
        max over probes of W1(π(·|x), π_ε(·|x)).
    bound : float | None
        L·ε when a certificate is available.
    passed : bool | None
        Whether ``max_error ≤ bound``.
    """

    epsilon: float
    k_cells: int
    max_error: float
    bound: float | None = None
    passed: bool | None = None


class RenyiSweepReport(msgspec.Struct, frozen=True, tag="renyi_sweep"):
    """
    Cell-average errors over several partitions.

    Attributes
    ----------
    reports : list[RenyiReport]
        One report per k.
    halving_ratios : list[float]
        error(k)/error(2k) for every k whose double was also run.
    certificate : LipschitzCertificate | None
        Certificate behind the bounds.
    passed : bool | None
        Whether every report passed.
    """

    reports: list[RenyiReport]
    halving_ratios: list[float]
    certificate: posteriorlip.abc.objects.LipschitzCertificate | None
    passed: bool | None


class WienerReport(msgspec.Struct, frozen=True, tag="wiener"):
    """
    Per-j Lipschitz constants of the skeleton kernels.

    Attributes
    ----------
    j_values : list[int]
        Skeleton sizes.
    coordinate_constants : list[float]
        max over pairs of W2(π′_j(x₁), π′_j(x₂))/|x₁ - x₂|.
    path_constants : list[float]
        The same after the 1/√j-Lipschitz map to path space.
    spread : float
        (max - min)/min of the coordinate constants.
    passed : bool
        Whether the spread is at most the tolerance.
    seed : int
        Seed of the pairs.
    """

    j_values: list[int]
    coordinate_constants: list[float]
    path_constants: list[float]
    spread: float
    passed: bool
    seed: int


class PoincareReport(msgspec.Struct, frozen=True, tag="poincare"):
    """
    Every applicable bound for one measure next to the oracle value.

    Attributes
    ----------
    measure : str
        Name of the measure.
    oracle : float
        Spectral oracle value.
    bounds : list[PoincareBound]
        The bounds checked.
    passed : bool
        Whether every bound is at least ``oracle - tolerance``.
    bole : BoLeCheck | None
        The Glivenko-Cantelli speed integral of the measure.
    """

    measure: str
    oracle: float
    bounds: list[posteriorlip.abc.objects.PoincareBound]
    passed: bool
    bole: posteriorlip.abc.objects.BoLeCheck | None = None


class PoincareSweepReport(msgspec.Struct, frozen=True, tag="poincare_sweep"):
    """Poincaré reports over a catalogue of measures."""

    reports: list[PoincareReport]
    passed: bool


class CertificateReport(msgspec.Struct, frozen=True, tag="certificate"):
    """A certificate as a report payload."""

    certificate: posteriorlip.abc.objects.LipschitzCertificate


Payload = (
    CertificateReport
    | RatioSweepReport
    | ContractionReport
    | RenyiSweepReport
    | WienerReport
    | PoincareSweepReport
)


class ReportEnvelope(msgspec.Struct, frozen=True):
    """
    Provenance wrapper around a report.

    Attributes
    ----------
    schema_version : int
        Version of the report layout.
    command : str
        Subcommand that produced the report.
    status : str
        ``"pass"``, ``"fail"`` or ``"info"``.
    config_digest : str
        SHA-256 of the effective configuration.
    seed : int
        Master seed.
    timestamp : str
        ISO-8601 creation time; excluded from `report_digest`.
    report_digest : str
        SHA-256 of the envelope encoded with an empty timestamp and digest.
    payload : Payload
        The report itself.
    """

    schema_version: int
    command: str
    status: str
    config_digest: str
    seed: int
    payload: Payload
    timestamp: str = ""
    report_digest: str = ""
