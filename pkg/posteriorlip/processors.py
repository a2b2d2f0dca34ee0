"""
🚀 Command Processors.
=========================

Turns a validated `RunConfig` into a report payload and a status. Each
subcommand has its own processor; every registry lookup happens when the
processor is built, so a bad configuration fails before anything runs or is
written.

📦 Classes
--------------
- `Outcome`: Payload plus ``"pass"``, ``"fail"`` or ``"info"``.
- `Processor`: Abstract base holding the config and the lookups.
- `CertifyProcessor`, `VerifyProcessor`, `ContractionProcessor`,
  `RenyiProcessor`, `WienerProcessor`, `PoincareProcessor`: One per
  subcommand.

📦 Functions
--------------
- `resolve_route`: Route tag with aliases expanded.
- `build_processor`: Processor for ``config.command``.
"""

import abc
import logging
import typing

import msgspec

import posteriorlip.abc.config
import posteriorlip.abc.objects
import posteriorlip.abc.reports
import posteriorlip.bounds
import posteriorlip.errors
import posteriorlip.experiments
import posteriorlip.features.priors
import posteriorlip.models

logger = logging.getLogger(__name__)

RunConfig = posteriorlip.abc.config.RunConfig
LipschitzCertificate = posteriorlip.abc.objects.LipschitzCertificate
PosteriorKernel = posteriorlip.models.PosteriorKernel
Status = typing.Literal["pass", "fail", "info"]

ROUTE_ALIASES: dict[str, str] = {"expfam": "prop32_expfam"}


class Outcome(msgspec.Struct, frozen=True):
    """Result of one processor run."""

    payload: posteriorlip.abc.reports.Payload
    status: Status


def _status(passed: bool | None) -> Status:
    if passed is None:
        return "info"
    return "pass" if passed else "fail"


def resolve_route(route: str) -> str:
    """
    Expand aliases and check the route tag.

    Raises
    ------
    posteriorlip.errors.ConfigError
        For unknown routes.
    """
    tag = ROUTE_ALIASES.get(route, route)
    if tag not in posteriorlip.abc.objects.ROUTE_METRICS:
        raise posteriorlip.errors.ConfigError(f"unknown route {route!r}", key="certificate.route")
    return tag


class Processor(abc.ABC):
    """
    Base of the subcommand processors.

    Attributes
    ----------
    config : RunConfig
        The effective configuration.
    """

    __slots__: tuple[str, ...] = ("config",)

    def __init__(self, config: RunConfig) -> None:
        self.config: RunConfig = config
        self.validate()

    def validate(self) -> None:
        """Resolve every name the run needs; the default checks nothing."""
        return None

    @abc.abstractmethod
    def run(self) -> Outcome:
        """Execute the subcommand."""
        ...

    def prior(self) -> posteriorlip.features.priors.Prior | posteriorlip.features.priors.Prior2D:
        """The configured prior."""
        section = self.config.prior
        if section.name not in posteriorlip.features.priors.PRIORS:
            raise posteriorlip.errors.ConfigError(f"unknown prior {section.name!r}", key="prior.name")
        try:
            return posteriorlip.features.priors.build_prior(section.name, section.params)
        except posteriorlip.errors.InvalidInput as exc:
            raise posteriorlip.errors.ConfigError(exc.message, key="prior.params") from exc

    def kernel(self) -> posteriorlip.models.Kernel:
        """The configured kernel."""
        section = self.config.model
        if section.name not in posteriorlip.models.KERNEL_NAMES:
            raise posteriorlip.errors.ConfigError(f"unknown model {section.name!r}", key="model.name")
        prior = None if section.name == "wiener_j" else self.prior()
        try:
            return posteriorlip.models.build_kernel(section.name, section.params, prior)
        except posteriorlip.errors.InvalidInput as exc:
            raise posteriorlip.errors.ConfigError(exc.message, key="model.params") from exc

    def posterior_kernel(self) -> PosteriorKernel:
        """The configured kernel, which must have a one-dimensional parameter."""
        kernel = self.kernel()
        if not isinstance(kernel, PosteriorKernel):
            raise posteriorlip.errors.ConfigError(
                f"model {self.config.model.name!r} has no certificate route", key="model.name"
            )
        return kernel

    def criterion(self) -> str | None:
        """The configured posterior Poincaré criterion."""
        criterion = self.config.certificate.criterion
        if criterion is not None and criterion not in posteriorlip.bounds.POSTERIOR_CRITERIA:
            raise posteriorlip.errors.ConfigError(
                f"unknown criterion {criterion!r}", key="certificate.criterion"
            )
        return criterion

    def certificate(self, kernel: PosteriorKernel) -> LipschitzCertificate:
        """Certificate of ``kernel`` by the configured route, stamped with the seed."""
        section = self.config.certificate
        certificate = posteriorlip.bounds.certify(
            kernel,
            resolve_route(section.route),
            box=section.box,
            grid=section.grid,
            criterion=self.criterion(),
            p=section.p,
            s_p=section.s_p,
            n=section.n,
            form=section.form,
            sharp=section.sharp,
            fallback=section.fallback,
        )
        return msgspec.structs.replace(certificate, seed=self.config.seed)


class CertifyProcessor(Processor):
    """``certify``: compute one certificate."""

    __slots__: tuple[str, ...] = ()

    @typing.override
    def validate(self) -> None:
        self.posterior_kernel()
        resolve_route(self.config.certificate.route)
        self.criterion()

    @typing.override
    def run(self) -> Outcome:
        certificate = self.certificate(self.posterior_kernel())
        logger.info("certificate L=%.10g by %s", certificate.lipschitz, certificate.route)
        return Outcome(posteriorlip.abc.reports.CertificateReport(certificate), "info")


class VerifyProcessor(Processor):
    """
    ``verify``: ratio sweep against the certificate.

    Kernels without a certificate route (the Wiener skeletons and the grid
    posteriors) are swept without one and reported as ``info``.
    """

    __slots__: tuple[str, ...] = ()

    @typing.override
    def validate(self) -> None:
        if isinstance(self.kernel(), PosteriorKernel):
            resolve_route(self.config.certificate.route)
            self.criterion()

    @typing.override
    def run(self) -> Outcome:
        kernel = self.kernel()
        certificate = self.certificate(kernel) if isinstance(kernel, PosteriorKernel) else None
        sweep = self.config.sweep
        report = posteriorlip.experiments.ratio_sweep(
            kernel,
            certificate,
            n_pairs=sweep.n_pairs,
            seed=self.config.seed,
            metric=sweep.metric,
            box=self.config.certificate.box,
            tolerance=sweep.tolerance,
        )
        return Outcome(report, _status(report.passed))


class ContractionProcessor(Processor):
    """``contraction``: Monte Carlo contraction rates."""

    __slots__: tuple[str, ...] = ()

    @typing.override
    def validate(self) -> None:
        self.posterior_kernel()

    @typing.override
    def run(self) -> Outcome:
        kernel = self.posterior_kernel()
        section = self.config.contraction
        report = posteriorlip.experiments.contraction_experiment(
            kernel.model,
            kernel.prior,
            section.theta0,
            section.n_values,
            replications=section.replications,
            seed=self.config.seed,
            scaling=section.scaling,
        )
        return Outcome(report, "info")


class RenyiProcessor(Processor):
    """``renyi``: cell-average errors against L·ε."""

    __slots__: tuple[str, ...] = ()

    @typing.override
    def validate(self) -> None:
        kernel = self.posterior_kernel()
        if kernel.data_dim != 1:
            raise posteriorlip.errors.ConfigError(
                "cell averages need one-dimensional data", key="model.name"
            )
        resolve_route(self.config.certificate.route)
        self.criterion()

    @typing.override
    def run(self) -> Outcome:
        kernel = self.posterior_kernel()
        certificate: LipschitzCertificate | None = self.certificate(kernel)
        if certificate is not None and certificate.metric == "tv":
            logger.warning("a total-variation certificate does not bound W1; reporting errors only")
            certificate = None
        section = self.config.renyi
        report = posteriorlip.experiments.renyi_sweep(
            kernel,
            section.box,
            section.k_values,
            certificate,
            probes_per_cell=section.probes_per_cell,
            cell_nodes=section.cell_nodes,
        )
        return Outcome(report, _status(report.passed))


class WienerProcessor(Processor):
    """``wiener``: uniformity of the skeleton constants in j."""

    __slots__: tuple[str, ...] = ()

    @typing.override
    def run(self) -> Outcome:
        section = self.config.wiener
        report = posteriorlip.experiments.wiener_uniformity(
            section.j_values,
            n_pairs=section.n_pairs,
            seed=self.config.seed,
            tolerance=section.tolerance,
        )
        return Outcome(report, _status(report.passed))


class PoincareProcessor(Processor):
    """``poincare``: every applicable bound against the spectral oracle."""

    __slots__: tuple[str, ...] = ()

    @typing.override
    def validate(self) -> None:
        for name in self.config.poincare.measures:
            try:
                posteriorlip.experiments.poincare_catalogue(name)
            except posteriorlip.errors.InvalidInput as exc:
                raise posteriorlip.errors.ConfigError(exc.message, key="poincare.measures") from exc

    @typing.override
    def run(self) -> Outcome:
        section = self.config.poincare
        reports: list[posteriorlip.abc.reports.PoincareReport] = []
        for name in section.measures:
            measure, bounds = posteriorlip.experiments.poincare_catalogue(name)
            reports.append(
                posteriorlip.experiments.poincare_soundness(
                    measure, bounds, name, section.grid, section.tolerance
                )
            )
        passed = all(report.passed for report in reports)
        return Outcome(posteriorlip.abc.reports.PoincareSweepReport(reports, passed), _status(passed))


PROCESSORS: dict[str, type[Processor]] = {
    "certify": CertifyProcessor,
    "verify": VerifyProcessor,
    "contraction": ContractionProcessor,
    "renyi": RenyiProcessor,
    "wiener": WienerProcessor,
    "poincare": PoincareProcessor,
}


def build_processor(config: RunConfig) -> Processor:
    """
    The validated processor for ``config.command``.

    Raises
    ------
    posteriorlip.errors.ConfigError
        If a name in the configuration does not resolve.
    """
    return PROCESSORS[config.command](config)
