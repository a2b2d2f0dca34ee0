"""
📦 posteriorlip.
==================

Lipschitz certificates of Bayesian posterior kernels x ↦ π(·|x) in total
variation, W1 and W2, with the numerics to compute them and the experiments
that check them.

✨ Highlights
-----------------
- 📐 Certificates: closed forms for exponential families and Pareto models,
  grid suprema for the generic routes.
- 🌀 Poincaré constants: Bakry-Émery, Payne-Weinberger, Bobkov, Muckenhoupt,
  Holley-Stroock and a spectral oracle.
- 🚚 Transport: W1, W2 and TV between posteriors of every shape.
- 🔬 Experiments: ratio sweeps, contraction rates, cell averages.

📝 License
--------------
MIT License.
"""

import posteriorlip.abc.objects
import posteriorlip.abc.reports
import posteriorlip.bounds
import posteriorlip.errors
import posteriorlip.measures
import posteriorlip.models

__version__ = "0.1.0"

BoLeCheck = posteriorlip.abc.objects.BoLeCheck
FisherValues = posteriorlip.abc.objects.FisherValues
Interval = posteriorlip.abc.objects.Interval
LipschitzCertificate = posteriorlip.abc.objects.LipschitzCertificate
PoincareBound = posteriorlip.abc.objects.PoincareBound
ReportEnvelope = posteriorlip.abc.reports.ReportEnvelope
certify = posteriorlip.bounds.certify
PosteriorLipError = posteriorlip.errors.PosteriorLipError
ConfigError = posteriorlip.errors.ConfigError
Distribution1D = posteriorlip.measures.Distribution1D
EmpiricalMeasure = posteriorlip.measures.EmpiricalMeasure
GaussianVec = posteriorlip.measures.GaussianVec
GridMeasure = posteriorlip.measures.GridMeasure
ExchangeableKernel = posteriorlip.models.ExchangeableKernel
GridPosteriorKernel = posteriorlip.models.GridPosteriorKernel
PosteriorKernel = posteriorlip.models.PosteriorKernel
WienerKernel = posteriorlip.models.WienerKernel
build_kernel = posteriorlip.models.build_kernel
posterior = posteriorlip.models.posterior

__all__ = [
    "BoLeCheck",
    "ConfigError",
    "Distribution1D",
    "EmpiricalMeasure",
    "ExchangeableKernel",
    "FisherValues",
    "GaussianVec",
    "GridMeasure",
    "GridPosteriorKernel",
    "Interval",
    "LipschitzCertificate",
    "PoincareBound",
    "PosteriorKernel",
    "PosteriorLipError",
    "ReportEnvelope",
    "WienerKernel",
    "build_kernel",
    "certify",
    "posterior",
]
