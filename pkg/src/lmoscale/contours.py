"""Iso-performance analysis: level sets of the step-size-tuned bound in (b, K).

Once the step size is tuned at each (batch, step count), the bound value
collapses to three terms with constants c_det, c_burn, c_floor.  Setting it
equal to a target reveals a minimum step count, a minimum batch size, and an
intermediate region where step count and sqrt(batch) trade off along a
hyperbola.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .proxy import (
    MOMENTUM_SMOOTHNESS_WEIGHT,
    SMOOTHNESS_WEIGHT,
    BoundConstants,
    _require,
)

__all__ = ["ContourConstants", "LevelPoint", "LevelSet", "tuned_bound", "level_set"]


@dataclass(frozen=True)
class ContourConstants:
    """Bound constants plus a pinned momentum complement.

    Derived read-only constants of the eta-tuned bound:
        c_det   = 2 sqrt(delta0 L (7/2 + 2/alpha))   deterministic part
        c_burn  = c2 / alpha                          burn-in part
        c_floor = c2 sqrt(alpha)                      noise floor
    """

    constants: BoundConstants
    alpha: float

    def __post_init__(self) -> None:
        _require(0 < self.alpha <= 1, f"alpha must be in (0, 1], got {self.alpha}")

    @property
    def c_det(self) -> float:
        c = self.constants
        weight = SMOOTHNESS_WEIGHT + MOMENTUM_SMOOTHNESS_WEIGHT / self.alpha
        return 2.0 * math.sqrt(c.delta0 * c.smoothness * weight)

    @property
    def c_burn(self) -> float:
        return self.constants.c2 / self.alpha

    @property
    def c_floor(self) -> float:
        return self.constants.c2 * math.sqrt(self.alpha)

    def k_min(self, target: float) -> float:
        """Step count needed even with unbounded batch: (c_det / target)^2."""
        _require(target > 0, f"target must be > 0, got {target}")
        return (self.c_det / target) ** 2

    def b_min(self, target: float) -> float:
        """Batch needed even with unbounded steps: (c_floor / target)^2."""
        _require(target > 0, f"target must be > 0, got {target}")
        return (self.c_floor / target) ** 2


def tuned_bound(cc: ContourConstants, b: float, k: float, eta_floor: float | None = None) -> float:
    """Step-size-tuned bound value at (batch, steps).

    Equals the exact token bound minimized over eta at T = b * k; strictly
    decreasing in both arguments.  An optional step-size floor models a
    lower-bounded search grid: when the unconstrained minimizer falls below
    the floor, the deterministic part is evaluated at the floor instead.
    """
    _require(b >= 1, f"b must be >= 1, got {b}")
    _require(k >= 1, f"k must be >= 1, got {k}")
    c = cc.constants
    weight = c.smoothness * (SMOOTHNESS_WEIGHT + MOMENTUM_SMOOTHNESS_WEIGHT / cc.alpha)
    if eta_floor is None:
        det = cc.c_det / math.sqrt(k)
    else:
        _require(eta_floor > 0, f"eta_floor must be > 0, got {eta_floor}")
        eta = max(math.sqrt(c.delta0 / (k * weight)), eta_floor)
        det = c.delta0 / (eta * k) + weight * eta
    return det + cc.c_burn / (k * math.sqrt(b)) + cc.c_floor / math.sqrt(b)


@dataclass(frozen=True)
class LevelPoint:
    """One (k, b) sample on the contour, with the term split at that point."""

    k: float
    b: float
    regime: str  # "iteration-limited" | "intermediate" | "batch-limited"
    det_fraction: float
    burn_fraction: float
    floor_fraction: float


@dataclass(frozen=True)
class LevelSet:
    """Sampled contour of the tuned bound at one target level."""

    target: float
    k_min: float
    b_min: float
    k0: float
    points: tuple[LevelPoint, ...]
    hyperbola_residual: float


def level_set(
    cc: ContourConstants,
    target: float,
    k_grid,
    eta_floor: float | None = None,
) -> LevelSet:
    """Solve tuned_bound(b, k) = target for b at each step count.

    The tuned bound is strictly decreasing in b, so bisection in log b is
    exact; 80 halvings pin the batch to machine precision.  Step counts at
    which the contour is unreachable (k below the iteration minimum, or the
    whole b >= 1 range already below the target) are skipped; an entirely
    empty contour raises.

    ``k0`` is the geometric mean of the solved step counts, the
    representative scale of the shifted-hyperbola approximation
    (c sqrt(K) - c_det)(c sqrt(b) - c_floor - c_burn/K0) ~ const;
    ``hyperbola_residual`` is the largest relative deviation of that form
    over the sampled points.
    """
    _require(target > 0, f"target must be > 0, got {target}")
    points: list[LevelPoint] = []

    def value(b: float, k: float) -> float:
        return tuned_bound(cc, b, k, eta_floor)

    for k in np.asarray(k_grid, dtype=float):
        k = float(k)
        if k < 1:
            continue
        if value(1.0, k) < target:
            continue  # contour sits below the b >= 1 boundary at this k
        lo_log, hi_log = 0.0, math.log(4.0)
        # expand until the bound drops below the target; fails when even
        # huge batches cannot reach it (k at or below the iteration minimum)
        feasible = False
        while hi_log <= 700.0:
            if value(math.exp(hi_log), k) < target:
                feasible = True
                break
            lo_log = hi_log
            hi_log *= 2.0
        if not feasible:
            continue
        for _ in range(80):
            mid = 0.5 * (lo_log + hi_log)
            if value(math.exp(mid), k) < target:
                hi_log = mid
            else:
                lo_log = mid
        b = math.exp(0.5 * (lo_log + hi_log))
        det = value(b, k) - cc.c_burn / (k * math.sqrt(b)) - cc.c_floor / math.sqrt(b)
        burn = cc.c_burn / (k * math.sqrt(b))
        floor = cc.c_floor / math.sqrt(b)
        total = det + burn + floor
        fractions = {
            "iteration-limited": det / total,
            "intermediate": burn / total,
            "batch-limited": floor / total,
        }
        regime = max(fractions, key=lambda name: fractions[name])
        points.append(
            LevelPoint(
                k=k,
                b=b,
                regime=regime,
                det_fraction=det / total,
                burn_fraction=burn / total,
                floor_fraction=floor / total,
            )
        )
    if not points:
        raise InfeasibleError(
            f"target {target} is unreachable on the given step-count grid"
        )
    k0 = math.exp(sum(math.log(p.k) for p in points) / len(points))
    rhs0 = cc.c_det * (cc.c_floor + cc.c_burn / k0)
    residual = 0.0
    for p in points:
        lhs = (target * math.sqrt(p.k) - cc.c_det) * (
            target * math.sqrt(p.b) - (cc.c_floor + cc.c_burn / p.k)
        )
        residual = max(residual, abs(lhs - rhs0) / rhs0)
    return LevelSet(
        target=target,
        k_min=cc.k_min(target),
        b_min=cc.b_min(target),
        k0=k0,
        points=tuple(points),
        hyperbola_residual=residual,
    )
