"""
⚙️ Run Configuration.
========================

The TOML schema of a command-line run, decoded with `msgspec.toml`. Every
section has defaults, so an empty file (or no file at all) is a valid
configuration.

📦 Classes
--------------
- `ModelSection`, `PriorSection`: Registry names and parameters.
- `CertificateSection`: Route and its options.
- `SweepSection`, `ContractionSection`, `RenyiSection`, `WienerSection`,
  `PoincareSection`: Experiment settings.
- `OutputSection`: Where and how reports are written.
- `RunConfig`: The whole file.

Examples
--------
>>> import msgspec
>>> config = msgspec.toml.decode(b'command = "verify"\\n[sweep]\\nn_pairs = 20', type=RunConfig)
>>> (config.command, config.sweep.n_pairs, config.seed)
('verify', 20, 0)
"""

import typing

import msgspec

Command = typing.Literal["certify", "verify", "contraction", "renyi", "wiener", "poincare"]
OutputFormat = typing.Literal["json", "csv", "both"]


class ModelSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Registered kernel name and its constructor parameters."""

    name: str = "gaussian_location"
    params: dict[str, typing.Any] = msgspec.field(default_factory=dict)


class PriorSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Catalogue prior name and its parameters; ignored by ``wiener_j``."""

    name: str = "gaussian"
    params: dict[str, float] = msgspec.field(default_factory=dict)


class CertificateSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """
    Certificate route and options.

    Attributes
    ----------
    route : str
        Route tag; ``expfam`` is accepted for ``prop32_expfam``.
    box : list[tuple[float, float]] | None
        x-box, the kernel's default when omitted.
    grid : int | None
        Grid points per axis, the route's default when omitted.
    criterion : str | None
        Posterior Poincaré criterion for the generic W2 routes.
    p : float | None
        Integrability exponent for the W1 and Sobolev routes.
    s_p : float
        Sobolev constant 𝒮_p(Θ).
    n : int
        Observations for ``exch_n``.
    form : str
        ``"sufficient"`` or ``"mle"`` for ``exch_n``.
    sharp : bool
        Sharp m-sample norm for the Pareto routes.
    fallback : bool
        Bobkov fallback of the exponential-family route.
    """

    route: str = "prop32_expfam"
    box: list[tuple[float, float]] | None = None
    grid: int | None = None
    criterion: str | None = None
    p: float | None = None
    s_p: float = 1.0
    n: int = 1
    form: typing.Literal["sufficient", "mle"] = "sufficient"
    sharp: bool = False
    fallback: bool = False


class SweepSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Ratio sweep: pair count, metric override and slack."""

    n_pairs: int = 100
    metric: typing.Literal["tv", "w1", "w2"] | None = None
    tolerance: float = 1e-2


class ContractionSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Contraction experiment settings."""

    theta0: float = 0.0
    n_values: list[int] = msgspec.field(default_factory=lambda: [10, 30, 100, 300, 1000])
    replications: int = 50
    scaling: bool = False


class RenyiSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Cell-average approximation settings."""

    box: tuple[float, float] = (-2.0, 2.0)
    k_values: list[int] = msgspec.field(default_factory=lambda: [4, 8, 16])
    probes_per_cell: int = 8
    cell_nodes: int = 32


class WienerSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Skeleton sizes, pair count and spread tolerance."""

    j_values: list[int] = msgspec.field(default_factory=lambda: [4, 8, 16, 32])
    n_pairs: int = 50
    tolerance: float = 0.2


class PoincareSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Catalogue measures to check and the oracle grid."""

    measures: list[str] = msgspec.field(
        default_factory=lambda: [
            "standard_normal",
            "uniform_01",
            "truncated_exponential",
            "gaussian_posterior_-2",
            "gaussian_posterior_0",
            "gaussian_posterior_2",
        ]
    )
    grid: int = 2000
    tolerance: float = 1e-3


class OutputSection(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Output directory and format."""

    dir: str = "reports"
    format: OutputFormat = "json"


class RunConfig(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """
    One command-line run.

    Attributes
    ----------
    command : Command
        Subcommand to run.
    seed : int
        Master seed of every random stream.
    """

    command: Command = "certify"
    seed: int = 0
    model: ModelSection = msgspec.field(default_factory=ModelSection)
    prior: PriorSection = msgspec.field(default_factory=PriorSection)
    certificate: CertificateSection = msgspec.field(default_factory=CertificateSection)
    sweep: SweepSection = msgspec.field(default_factory=SweepSection)
    contraction: ContractionSection = msgspec.field(default_factory=ContractionSection)
    renyi: RenyiSection = msgspec.field(default_factory=RenyiSection)
    wiener: WienerSection = msgspec.field(default_factory=WienerSection)
    poincare: PoincareSection = msgspec.field(default_factory=PoincareSection)
    output: OutputSection = msgspec.field(default_factory=OutputSection)
