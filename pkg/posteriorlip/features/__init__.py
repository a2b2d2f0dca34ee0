"""
🧩 Model Families.
=====================

Statistical models and priors that the posterior kernels are built from.

✨ Module Structure
-----------------------
- 🏗️ Mixin Base: The abstract `StatModel` contract.
- 📈 Exponential: Exponential-family models Φ(x, θ) = T(x)·θ - M(θ).
- ✂️ Pareto: Truncated models whose posterior support moves with x.
- 🎯 Priors: Prior laws with their potentials and curvature bounds.
"""
