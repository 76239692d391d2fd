"""Closed-form optima of the bound proxy across tuning regimes.

Two constant conventions appear and every result labels which one it uses
in its ``objective`` field:

* the fixed-momentum and fixed-batch optima minimize simplifications of the
  compact proxy written in (c1, c2, c3) ("folded" smoothness weights);
* the joint optimum minimizes the exact token-form bound, keeping the
  separate 7/2 and 2 smoothness weights, through a cubic stationarity
  condition in the momentum complement.

Reported optima are exact back-substitutions, not asymptotic constants;
the leading-order momentum asymptote is reported separately for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NumericalError
from .proxy import (
    MOMENTUM_SMOOTHNESS_WEIGHT,
    SMOOTHNESS_WEIGHT,
    BoundConstants,
    Budget,
    _require,
)
from .schedules import PowerLawSchedule

__all__ = [
    "FixedMomentumOptimum",
    "FixedBatchOptimum",
    "JointOptimum",
    "CubicCoefficients",
    "BatchPathPlan",
    "effective_constants",
    "optimal_fixed_momentum_steps",
    "optimal_fixed_momentum_tokens",
    "optimal_fixed_batch",
    "optimal_joint",
    "momentum_cubic",
    "solve_momentum_cubic",
    "asymptotic_momentum",
    "asymptotic_momentum_terms",
    "bound_eta_star",
    "bound_eta_minimized",
    "batch_star_given_momentum",
    "momentum_gap_ratio",
    "tuned_risk_prefactor",
    "capped_batch_noise_floor",
    "batch_growth_plan",
]


def effective_constants(c: BoundConstants, alpha: float) -> tuple[float, float]:
    """(c2_eff, c3_eff) of the large-horizon proxy once momentum is fixed."""
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    return c.c2 * math.sqrt(alpha), c.c3 * (1.0 + 1.0 / alpha)


@dataclass(frozen=True)
class FixedMomentumOptimum:
    """Tuned step size (and optionally batch) at a fixed momentum complement."""

    eta_star: float
    risk_star: float
    regime: str  # "steps" | "tokens-fixed-batch" | "tokens-joint-batch"
    b_star: float | None = None
    clamped: bool = False
    objective: str = "risk_large_horizon"


def optimal_fixed_momentum_steps(
    c: BoundConstants, alpha: float, b: float, k: float
) -> FixedMomentumOptimum:
    """Step-budget optimum: eta* = sqrt(c1 / (c3_eff K)), independent of b.

    The batch enters only through the noise floor of the value, so larger
    batches always improve the bound at a fixed step count.
    """
    _require(k >= 1, f"k must be >= 1, got {k}")
    _require(b >= 1, f"b must be >= 1, got {b}")
    c2e, c3e = effective_constants(c, alpha)
    eta = math.sqrt(c.c1 / (c3e * k))
    risk = 2.0 * math.sqrt(c.c1 * c3e / k) + c2e / math.sqrt(b)
    return FixedMomentumOptimum(eta_star=eta, risk_star=risk, regime="steps")


def optimal_fixed_momentum_tokens(
    c: BoundConstants, alpha: float, t: float, b: float | None = None
) -> FixedMomentumOptimum:
    """Token-budget optimum at fixed momentum.

    With ``b`` given, tunes eta alone: eta* = sqrt(c1 b / (c3_eff T)).
    Otherwise tunes (eta, b) jointly:

        b*    = c2_eff / (2 sqrt(c1 c3_eff)) * sqrt(T)
        eta*  = c1^(1/4) c2_eff^(1/2) / (sqrt(2) c3_eff^(3/4)) * T^(-1/4)
        risk* = 2 sqrt(2) (c1 c3_eff)^(1/4) c2_eff^(1/2) * T^(-1/4)

    Below the budget where b* crosses 1 the batch is clamped to 1 with a
    flag; the returned eta/risk are then the fixed-batch values at b = 1.
    """
    _require(t >= 1, f"t must be >= 1, got {t}")
    c2e, c3e = effective_constants(c, alpha)

    def fixed_b(batch: float, clamped: bool, regime: str) -> FixedMomentumOptimum:
        eta = math.sqrt(c.c1 * batch / (c3e * t))
        risk = 2.0 * math.sqrt(c.c1 * c3e * batch / t) + c2e / math.sqrt(batch)
        return FixedMomentumOptimum(
            eta_star=eta, risk_star=risk, regime=regime, b_star=batch, clamped=clamped
        )

    if b is not None:
        _require(b >= 1, f"b must be >= 1, got {b}")
        return fixed_b(b, clamped=False, regime="tokens-fixed-batch")

    b_star = c2e / (2.0 * math.sqrt(c.c1 * c3e)) * math.sqrt(t)
    if b_star < 1.0:
        return fixed_b(1.0, clamped=True, regime="tokens-joint-batch")
    eta = c.c1**0.25 * math.sqrt(c2e) / (math.sqrt(2.0) * c3e**0.75) * t**-0.25
    risk = 2.0 * math.sqrt(2.0) * (c.c1 * c3e) ** 0.25 * math.sqrt(c2e) * t**-0.25
    return FixedMomentumOptimum(
        eta_star=eta, risk_star=risk, regime="tokens-joint-batch", b_star=b_star
    )


@dataclass(frozen=True)
class FixedBatchOptimum:
    """Jointly tuned (momentum, step size) at a fixed batch size.

    The optimum comes from a leading proxy that drops the burn-in and plain
    smoothness terms; ``burn_in_ratio`` and ``smoothness_ratio`` report the
    dropped terms relative to the optimum value so callers can check they
    really are lower order at their budget.
    """

    alpha_star: float
    eta_star: float
    risk_star: float
    clamped: bool
    burn_in_ratio: float
    smoothness_ratio: float
    objective: str


def optimal_fixed_batch(
    c: BoundConstants, b: float, budget: Budget, coefficients: str = "folded"
) -> FixedBatchOptimum:
    """Large-horizon optimum at fixed batch size.

        alpha* = (2 sqrt(c1 S) / c2) * sqrt(b / K)
        eta*   = sqrt(2) c1^(3/4) / (c2^(1/2) S^(1/4)) * b^(1/4) / K^(3/4)
        min    = 2 sqrt(2) c2^(1/2) (c1 S)^(1/4) * (b K)^(-1/4)

    where S is the eta/alpha smoothness weight: c3 for the folded proxy,
    2 L for the exact bound (``coefficients="exact"``, used to cross-check
    the joint regime).  alpha* is clamped to 1 with a flag when the formula
    exceeds it, including the noiseless c2 = 0 case.
    """
    _require(b >= 1, f"b must be >= 1, got {b}")
    if coefficients == "folded":
        s_weight = c.c3
        dropped_smooth = c.c3  # the c3 * eta part of c3 * eta * (1 + 1/alpha)
        objective = "folded-leading-proxy"
    elif coefficients == "exact":
        s_weight = MOMENTUM_SMOOTHNESS_WEIGHT * c.smoothness
        dropped_smooth = SMOOTHNESS_WEIGHT * c.smoothness
        objective = "exact-leading-proxy"
    else:
        raise DomainError(f"coefficients must be 'folded' or 'exact', got {coefficients!r}")
    k = budget.steps_for(b)

    if c.c2 > 0:
        alpha_raw = (2.0 * math.sqrt(c.c1 * s_weight) / c.c2) * math.sqrt(b / k)
    else:
        alpha_raw = math.inf
    clamped = alpha_raw > 1.0
    alpha = min(alpha_raw, 1.0)
    eta = math.sqrt(c.c1 * alpha / (s_weight * k))
    risk = 2.0 * math.sqrt(c.c1 * s_weight / (alpha * k)) + c.c2 * math.sqrt(alpha / b)
    burn = c.c2 / (alpha * math.sqrt(b) * k)
    return FixedBatchOptimum(
        alpha_star=alpha,
        eta_star=eta,
        risk_star=risk,
        clamped=clamped,
        burn_in_ratio=burn / risk,
        smoothness_ratio=dropped_smooth * eta / risk,
        objective=objective,
    )


@dataclass(frozen=True)
class CubicCoefficients:
    """Stationarity cubic a3 * x^3 - a1 * x - a0 for the joint momentum optimum.

    All three coefficients are positive magnitudes, so the polynomial is
    negative at 0 and has exactly one positive root.
    """

    a3: float
    a1: float
    a0: float

    def __post_init__(self) -> None:
        _require(self.a3 > 0, f"a3 must be > 0, got {self.a3}")
        _require(self.a1 > 0, f"a1 must be > 0, got {self.a1}")
        _require(self.a0 > 0, f"a0 must be > 0, got {self.a0}")

    def evaluate(self, x: float) -> float:
        return (self.a3 * x * x - self.a1) * x - self.a0

    def derivative(self, x: float) -> float:
        return 3.0 * self.a3 * x * x - self.a1


def momentum_cubic(c: BoundConstants, t: float) -> CubicCoefficients:
    """Cubic whose positive root is the jointly optimal momentum complement."""
    _require(t >= 1, f"t must be >= 1, got {t}")
    _require(c.rho_sigma > 0, "joint tuning needs a positive noise scale")
    rs2 = c.rho_sigma**2
    return CubicCoefficients(
        a3=SMOOTHNESS_WEIGHT**2 * c.delta0 * c.smoothness * t,
        a1=SMOOTHNESS_WEIGHT * rs2,
        a0=2.0 * rs2,
    )


def solve_momentum_cubic(cubic: CubicCoefficients) -> tuple[float, float]:
    """Unique positive root of the cubic and its a3-normalized residual.

    Bisection on a bracket that provably straddles the root (the polynomial
    is negative at half the cube-root lower bound and positive at twice the
    larger of the two single-term roots), then a few Newton polish steps.
    """
    a3, a1, a0 = cubic.a3, cubic.a1, cubic.a0
    lo = (a0 / a3) ** (1.0 / 3.0) / 2.0
    hi = 2.0 * max((a0 / a3) ** (1.0 / 3.0), math.sqrt(a1 / a3))
    if not (cubic.evaluate(lo) < 0 and cubic.evaluate(hi) > 0):
        raise NumericalError(
            f"cubic bracket [{lo}, {hi}] does not straddle the root"
        )
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        if cubic.evaluate(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        slope = cubic.derivative(x)
        if slope <= 0:
            break
        step = cubic.evaluate(x) / slope
        candidate = x - step
        if not lo <= candidate <= hi:
            break
        x = candidate
    return x, abs(cubic.evaluate(x)) / a3


def asymptotic_momentum_terms(c: BoundConstants) -> tuple[float, float]:
    """(u0, u1) of the expansion alpha* = u0 T^(-1/3) + u1 T^(-2/3) + ..."""
    _require(c.rho_sigma > 0, "asymptotic momentum needs a positive noise scale")
    big_a = SMOOTHNESS_WEIGHT**2 * c.delta0 * c.smoothness
    big_b = SMOOTHNESS_WEIGHT * c.rho_sigma**2
    big_c = 2.0 * c.rho_sigma**2
    u0 = (big_c / big_a) ** (1.0 / 3.0)
    u1 = big_b / (3.0 * big_a ** (2.0 / 3.0) * big_c ** (1.0 / 3.0))
    return u0, u1


def asymptotic_momentum(c: BoundConstants, t: float) -> float:
    """Two-term large-budget approximation of the joint momentum optimum."""
    u0, u1 = asymptotic_momentum_terms(c)
    return u0 * t ** (-1.0 / 3.0) + u1 * t ** (-2.0 / 3.0)


def bound_eta_star(c: BoundConstants, alpha: float, b: float, t: float) -> float:
    """Step size minimizing the exact token bound at fixed (alpha, b)."""
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    weight = c.smoothness * (SMOOTHNESS_WEIGHT + MOMENTUM_SMOOTHNESS_WEIGHT / alpha)
    return math.sqrt(b * c.delta0 / (t * weight))


def bound_eta_minimized(c: BoundConstants, alpha: float, b: float, t: float) -> float:
    """Exact token bound after the one-dimensional eta minimization.

    The eta part is a / eta + w * eta whose minimum is 2 sqrt(a w); the
    burn-in and noise-floor terms ride along unchanged.
    """
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    weight = c.smoothness * (SMOOTHNESS_WEIGHT + MOMENTUM_SMOOTHNESS_WEIGHT / alpha)
    return (
        2.0 * math.sqrt(b * c.delta0 * weight / t)
        + c.c2 * math.sqrt(b) / (alpha * t)
        + c.c2 * math.sqrt(alpha / b)
    )


def batch_star_given_momentum(c: BoundConstants, alpha: float, t: float) -> float:
    """Batch size minimizing the eta-tuned exact bound at fixed momentum.

    With s = sqrt(b) the value is A(alpha) s + B(alpha) / s, minimized at
    b = B / A; unclamped, so the result may fall below 1 at small budgets.
    """
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    weight = c.smoothness * (SMOOTHNESS_WEIGHT + MOMENTUM_SMOOTHNESS_WEIGHT / alpha)
    a_coeff = 2.0 * math.sqrt(c.delta0 * weight / t) + c.c2 / (alpha * t)
    b_coeff = c.c2 * math.sqrt(alpha)
    return b_coeff / a_coeff


@dataclass(frozen=True)
class JointOptimum:
    """Jointly tuned (eta, alpha, b) at a token budget on the exact bound.

    ``alpha_root`` is the raw cubic root; ``alpha_star`` is the value after
    clamping into (0, 1].  ``asymptotic_alpha`` is the two-term expansion,
    reported alongside the exact back-substituted optimum because the
    landscape in b is flat enough that hidden constants matter.
    """

    alpha_star: float
    b_star: float
    eta_star: float
    k_star: float
    risk_star: float
    cubic: CubicCoefficients
    alpha_root: float
    cubic_residual: float
    asymptotic_alpha: float
    alpha_clamped: bool
    b_clamped: bool
    objective: str = "bound_tokens"


def optimal_joint(c: BoundConstants, t: float) -> JointOptimum:
    """Exact joint optimum: cubic root for alpha, then back-substitution.

    b*(alpha) never exceeds alpha^(3/2) * T, so K* = T / b* >= 1 holds
    automatically; b* below 1 is clamped with a flag (small-budget phase
    where the optimal batch size is 1).
    """
    cubic = momentum_cubic(c, t)
    root, residual = solve_momentum_cubic(cubic)
    alpha_clamped = root > 1.0
    alpha = min(root, 1.0)
    b_raw = batch_star_given_momentum(c, alpha, t)
    b_clamped = b_raw < 1.0
    b = max(b_raw, 1.0)
    eta = bound_eta_star(c, alpha, b, t)
    risk = bound_eta_minimized(c, alpha, b, t)
    return JointOptimum(
        alpha_star=alpha,
        b_star=b,
        eta_star=eta,
        k_star=t / b,
        risk_star=risk,
        cubic=cubic,
        alpha_root=root,
        cubic_residual=residual,
        asymptotic_alpha=asymptotic_momentum(c, t),
        alpha_clamped=alpha_clamped,
        b_clamped=b_clamped,
    )


def momentum_gap_ratio(alpha: float) -> float:
    """Rate-constant penalty of keeping momentum fixed, relative to alpha -> 0.

    The tuned-batch token optimum carries a (1 + alpha)^(1/4) factor, so the
    most that momentum re-tuning can buy is 2^(1/4) ~ 1.19.
    """
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    return (1.0 + alpha) ** 0.25


def tuned_risk_prefactor(c: BoundConstants, alpha: float) -> float:
    """T^(-1/4) coefficient of the batch-and-eta tuned proxy at fixed momentum."""
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    return (
        2.0
        * math.sqrt(2.0)
        * (c.c1 * c.c3) ** 0.25
        * math.sqrt(c.c2)
        * (1.0 + alpha) ** 0.25
    )


def capped_batch_noise_floor(c: BoundConstants, alpha: float, b_max: float) -> float:
    """Non-vanishing floor c2 sqrt(alpha) / sqrt(b_max) under a batch cap.

    With momentum fixed and the batch capped, tuning eta alone cannot beat
    this level no matter the budget; letting alpha shrink with T removes it.
    """
    _require(0 < alpha <= 1, f"alpha must be in (0, 1], got {alpha}")
    _require(b_max >= 1, f"b_max must be >= 1, got {b_max}")
    return c.c2 * math.sqrt(alpha) / math.sqrt(b_max)


@dataclass(frozen=True)
class BatchPathPlan:
    """Schedule and achievable rate for a prescribed batch-growth exponent."""

    phi: float
    schedule: PowerLawSchedule
    rate_exponent: float
    regime: str  # "near-optimal" | "iteration-limited"


def batch_growth_plan(phi: float) -> BatchPathPlan:
    """Best (gamma, delta) schedule for batch growth b ~ T^phi, phi in [0, 1).

    Up to phi = 1/2 the momentum-matched schedule alpha ~ b(T)/sqrt(T),
    eta ~ b(T)/T^(3/4) keeps the full T^(-1/4) rate.  Faster batch growth
    caps the rate at T^(-(1-phi)/2) with constant momentum.
    """
    if not 0.0 <= phi < 1.0:
        raise DomainError(f"phi must be in [0, 1), got {phi}")
    if phi <= 0.5:
        schedule = PowerLawSchedule(b_exp=phi, alpha_exp=0.5 - phi, eta_exp=0.75 - phi)
        return BatchPathPlan(
            phi=phi, schedule=schedule, rate_exponent=0.25, regime="near-optimal"
        )
    ceiling = (1.0 - phi) / 2.0
    schedule = PowerLawSchedule(b_exp=phi, alpha_exp=0.0, eta_exp=ceiling)
    return BatchPathPlan(
        phi=phi, schedule=schedule, rate_exponent=ceiling, regime="iteration-limited"
    )
