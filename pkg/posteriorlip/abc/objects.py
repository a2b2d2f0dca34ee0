"""
📦 Data Models (msgspec Structs).
====================================

msgspec definitions for the values exchanged between the numerical modules:
intervals, quadrature settings, Poincaré bounds, Lipschitz certificates and
transport results.

✨ Features
--------------
- 🛡️ Validation: invariants are checked in `__post_init__`, so they also hold
  for objects decoded from JSON or TOML.
- 🧊 Immutability: value objects are frozen and hashable.

📦 Classes
--------------
- `Interval`: Open interval with possibly infinite endpoints.
- `QuadratureSpec`: Tolerances and subdivision budget for adaptive quadrature.
- `QuadratureResult`: Value and error estimate of an integral.
- `PoincareBound`: Tagged upper bound on a Poincaré constant.
- `SupDomain`: Record of the x-box and grid an esssup was taken over.
- `LipschitzCertificate`: Constant, metric and route of a Lipschitz bound.
- `FisherValues`: Fisher functionals of a kernel at one data point.
- `PlanEntry`: One nonzero entry of a transport plan.
- `TransportPlanResult`: Cost and optional plan of a transport problem.
- `FrancesiParams`: Parameters of the 1/n scaling Poincaré bounds.
- `BoLeCheck`: Outcome of the Glivenko-Cantelli speed integral.
"""

import math
import typing

import msgspec

import posteriorlip.errors

POINCARE_CRITERIA: frozenset[str] = frozenset(
    {
        "payne_weinberger",
        "log_concave_diam",
        "bakry_emery",
        "bobkov",
        "holley_stroock",
        "muckenhoupt_1d",
        "francesi_1",
        "francesi_2",
        "francesi_3",
        "oracle",
    }
)

ROUTE_METRICS: dict[str, frozenset[str]] = {
    "thm21_i": frozenset({"tv"}),
    "thm21_ii": frozenset({"w1"}),
    "thm21_iii": frozenset({"w2"}),
    "thm21_iv": frozenset({"w2"}),
    "cor31": frozenset({"w2"}),
    "prop32_expfam": frozenset({"w2"}),
    "pareto_cq": frozenset({"w2"}),
    "pareto_msample": frozenset({"w2"}),
    "pareto_hfunction": frozenset({"w2"}),
    "exch_n": frozenset({"w2"}),
    "maintrace_1d": frozenset({"w2"}),
}

SOLVER_TAGS: frozenset[str] = frozenset(
    {"exact_lp", "sinkhorn", "quantile", "gaussian_closed_form", "tv_density"}
)


class Interval(msgspec.Struct, frozen=True):
    """
    Open interval (lo, hi) of the real line.

    Attributes
    ----------
    lo : float
        Left endpoint, possibly ``-inf``.
    hi : float
        Right endpoint, possibly ``+inf``.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi) or not self.lo < self.hi:
            raise posteriorlip.errors.InvalidInput(
                f"interval requires lo < hi, got ({self.lo}, {self.hi})"
            )

    @property
    def width(self) -> float:
        """Length of the interval (``inf`` when unbounded)."""
        return self.hi - self.lo

    @property
    def bounded(self) -> bool:
        """Whether both endpoints are finite."""
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, value: float) -> bool:
        """Whether ``lo < value < hi``."""
        return self.lo < value < self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        """Intersection with another interval, ``None`` when empty."""
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if not lo < hi:
            return None
        return Interval(lo, hi)


class QuadratureSpec(msgspec.Struct, frozen=True):
    """
    Accuracy request for `posteriorlip.numerics.integrate`.

    Attributes
    ----------
    abs_tol : float
        Absolute error target.
    rel_tol : float
        Relative error target.
    max_subdivisions : int
        Upper bound on adaptive subintervals.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise posteriorlip.errors.InvalidInput("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise posteriorlip.errors.InvalidInput("max_subdivisions must be at least 1")


class QuadratureResult(msgspec.Struct, frozen=True):
    """Value of an integral together with the solver's error estimate."""

    value: float
    error: float
    subdivisions: int


class PoincareBound(msgspec.Struct, frozen=True):
    """
    Upper bound on the Poincaré constant C_q of a measure.

    Attributes
    ----------
    value : float
        The bound, finite and positive.
    order_q : float
        Order q of the inequality.
    criterion : str
        Name of the criterion that produced the bound.
    inputs_digest : str
        Human-readable record of the inputs, e.g. ``"diam=1"``.
    components : dict[str, float]
        Intermediate quantities (D⁺, D⁻, thresholds, sups).
    """

    value: float
    criterion: str
    inputs_digest: str
    order_q: float = 2.0
    components: dict[str, float] = msgspec.field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.value) and self.value > 0):
            raise posteriorlip.errors.InvalidInput(
                f"Poincaré bound must be finite and positive, got {self.value}"
            )
        if self.criterion not in POINCARE_CRITERIA:
            raise posteriorlip.errors.InvalidInput(
                f"unknown Poincaré criterion {self.criterion!r}"
            )
        if self.order_q < 1:
            raise posteriorlip.errors.InvalidInput("order_q must be at least 1")


class SupDomain(msgspec.Struct, frozen=True):
    """
    Where an essential supremum over the data space was approximated.

    Attributes
    ----------
    box : list[tuple[float, float]]
        One (lo, hi) pair per data coordinate.
    grid : int
        Grid points per axis.
    argmax : list[float]
        Data point at which the maximum was attained after refinement.
    refined : bool
        Whether local refinement improved on the grid maximum.
    """

    box: list[tuple[float, float]]
    grid: int
    argmax: list[float] = msgspec.field(default_factory=list)
    refined: bool = False


class LipschitzCertificate(msgspec.Struct, frozen=True):
    """
    A certified Lipschitz constant of the map x ↦ π(·|x).

    Attributes
    ----------
    lipschitz : float
        The constant L (serialised as ``"L"``).
    metric : str
        ``"tv"``, ``"w1"`` or ``"w2"``.
    route : str
        Which bound produced L.
    sup_domain : SupDomain | None
        Box and grid for grid-based routes, ``None`` for closed forms.
    components : dict[str, float]
        Intermediate quantities (K, C, J, alpha, ...).
    notes : dict[str, str]
        Textual choices recorded with the certificate (criterion, norm).
    timestamp : str
        ISO-8601 creation time, filled in by the CLI.
    seed : int | None
        Seed of the run that produced the certificate.
    """

    lipschitz: float = msgspec.field(name="L")
    metric: str
    route: str
    sup_domain: SupDomain | None = None
    components: dict[str, float] = msgspec.field(default_factory=dict)
    notes: dict[str, str] = msgspec.field(default_factory=dict)
    timestamp: str = ""
    seed: int | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lipschitz) and self.lipschitz >= 0):
            raise posteriorlip.errors.InvalidInput(
                f"Lipschitz constant must be finite and nonnegative, got {self.lipschitz}"
            )
        allowed = ROUTE_METRICS.get(self.route)
        if allowed is None:
            raise posteriorlip.errors.InvalidInput(f"unknown route {self.route!r}")
        if self.metric not in allowed:
            raise posteriorlip.errors.InvalidInput(
                f"route {self.route!r} cannot certify metric {self.metric!r}"
            )

    @property
    def box(self) -> list[tuple[float, float]] | None:
        """The x-box of the certificate, if it was computed on one."""
        return None if self.sup_domain is None else self.sup_domain.box


class FisherValues(msgspec.Struct, frozen=True):
    """
    Fisher functionals of g(x, ·).

    Attributes
    ----------
    j_pi : float | None
        Fisher functional relative to the prior, ``None`` when the support
        moves with x.
    j1 : float
        Data-direction functional of the extended density.
    j2 : float
        Parameter-direction functional of the extended density.
    """

    j_pi: float | None
    j1: float
    j2: float

    def __post_init__(self) -> None:
        for name in ("j_pi", "j1", "j2"):
            value = typing.cast("float | None", getattr(self, name))
            if value is None and name == "j_pi":
                continue
            if value is None or not (math.isfinite(value) and value >= 0):
                raise posteriorlip.errors.InvalidInput(
                    f"{name} must be finite and nonnegative, got {value}"
                )


class PlanEntry(msgspec.Struct, frozen=True, array_like=True):
    """Mass moved from source atom ``row`` to target atom ``col``."""

    row: int
    col: int
    mass: float


class TransportPlanResult(msgspec.Struct, frozen=True):
    """
    Result of a transport computation.

    Attributes
    ----------
    cost : float
        The transport distance W_p (already raised to the power 1/p).
    solver_tag : str
        One of ``exact_lp``, ``sinkhorn``, ``quantile``,
        ``gaussian_closed_form``, ``tv_density``.
    plan : list[PlanEntry] | None
        Nonzero plan entries, when a plan was computed.
    shape : tuple[int, int] | None
        Dimensions of the dense plan.
    components : dict[str, float]
        Solver diagnostics (raw cost, epsilon, debiasing terms).
    """

    cost: float
    solver_tag: str
    plan: list[PlanEntry] | None = None
    shape: tuple[int, int] | None = None
    components: dict[str, float] = msgspec.field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.solver_tag not in SOLVER_TAGS:
            raise posteriorlip.errors.InvalidInput(
                f"unknown solver tag {self.solver_tag!r}"
            )
        if not self.cost >= 0:
            raise posteriorlip.errors.InvalidInput(
                f"transport cost must be nonnegative, got {self.cost}"
            )


class FrancesiParams(msgspec.Struct, frozen=True):
    """
    Inputs of the 1/n scaling bounds for posteriors e^{-nV - U}.

    Attributes
    ----------
    alpha : float
        Curvature of V (Hess V ≥ alpha, globally or on B_R).
    h : float
        Curvature of U (Hess U ≥ h), possibly negative.
    c : float | None
        Growth constant of ∇V·θ outside B_R.
    ell : float | None
        Growth constant of ∇U·θ outside B_R.
    radius : float | None
        Radius R of the ball B_R.
    c1 : float | None
        Constant with |∇V|² ≥ 2c1 + c2[ΔV + ∇V·∇U]₊ outside B_R.
    c2 : float | None
        Companion constant of c1 in the same growth condition.
    dim : int
        Parameter dimension d.
    v_r : float | None
        sup over B_R of |∇V|.
    u_r : float | None
        sup over B_R of |∇U|.
    v_r_star : float | None
        sup over B_R of |ΔV|.
    w_r : float | None
        sup over B_R of |∇U||∇V|.
    omega_r : float | None
        sup over B_R of V minus inf over ℝᵈ of V.
    c_r : float | None
        Poincaré-type constant of the ball, required by the second bound.
    """

    alpha: float
    h: float = 0.0
    c: float | None = None
    ell: float | None = None
    radius: float | None = None
    c1: float | None = None
    c2: float | None = None
    dim: int = 1
    v_r: float | None = None
    u_r: float | None = None
    v_r_star: float | None = None
    w_r: float | None = None
    omega_r: float | None = None
    c_r: float | None = None


class BoLeCheck(msgspec.Struct, frozen=True):
    """
    Value of ∫F(1-F)/f, or a divergence flag.

    Attributes
    ----------
    value : float | None
        The integral when it converges.
    divergent : bool
        Whether the integral was judged divergent.
    tail_exponent : float | None
        Smallest tail decay exponent of the integrand found on an unbounded
        end (``None`` when the support is bounded).
    """

    value: float | None
    divergent: bool
    tail_exponent: float | None = None
