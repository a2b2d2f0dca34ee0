"""
🧩 ABC Package Initialization.
=================================

Data models, report structs, the run configuration and the kernel protocol.

📦 Exports
--------------
- `Interval`, `PoincareBound`, `LipschitzCertificate`, ...: Domain structs.
- `RatioSweepReport`, `ContractionReport`, ...: Report structs.
- `RunConfig`: Command-line configuration.
- `KernelProtocol`: Structural type of kernels.
"""

from . import config
from . import objects
from . import protocols
from . import reports

RunConfig = config.RunConfig
BoLeCheck = objects.BoLeCheck
FisherValues = objects.FisherValues
FrancesiParams = objects.FrancesiParams
Interval = objects.Interval
LipschitzCertificate = objects.LipschitzCertificate
PlanEntry = objects.PlanEntry
PoincareBound = objects.PoincareBound
QuadratureResult = objects.QuadratureResult
QuadratureSpec = objects.QuadratureSpec
SupDomain = objects.SupDomain
TransportPlanResult = objects.TransportPlanResult
KernelProtocol = protocols.KernelProtocol
CertificateReport = reports.CertificateReport
ContractionReport = reports.ContractionReport
PoincareReport = reports.PoincareReport
PoincareSweepReport = reports.PoincareSweepReport
RatioPair = reports.RatioPair
RatioSweepReport = reports.RatioSweepReport
RenyiReport = reports.RenyiReport
RenyiSweepReport = reports.RenyiSweepReport
ReportEnvelope = reports.ReportEnvelope
WienerReport = reports.WienerReport

__all__ = [
    "BoLeCheck",
    "CertificateReport",
    "ContractionReport",
    "FisherValues",
    "FrancesiParams",
    "Interval",
    "KernelProtocol",
    "LipschitzCertificate",
    "PlanEntry",
    "PoincareBound",
    "PoincareReport",
    "PoincareSweepReport",
    "QuadratureResult",
    "QuadratureSpec",
    "RatioPair",
    "RatioSweepReport",
    "RenyiReport",
    "RenyiSweepReport",
    "ReportEnvelope",
    "RunConfig",
    "SupDomain",
    "TransportPlanResult",
    "WienerReport",
]
