"""Brute-force verification sweeps over log-uniform hyperparameter grids.

The sweep is the numerical oracle for the closed forms: it evaluates a
token-form objective on an outer-product grid of (batch, step size,
momentum complement), takes a constrained argmin per budget, and fits power
laws to the per-budget optima.  Results are deterministic and independent
of evaluation order; ties break toward the smallest batch, then the
smallest step size, then the largest momentum complement.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleError
from .proxy import MOMENTUM_SMOOTHNESS_WEIGHT, SMOOTHNESS_WEIGHT, BoundConstants, _require

__all__ = [
    "GridSpec",
    "Constraint",
    "SweepRecord",
    "SweepResult",
    "FitResult",
    "sweep",
    "fit_power_law",
    "detect_burn_in",
    "fit_sweep_exponents",
]

OBJECTIVES = ("risk_tokens", "bound_tokens")


@dataclass(frozen=True)
class GridSpec:
    """Log-uniform grid ranges, endpoints included.

    Defaults are the wide verification grid: eta in (1e-15, 1e4), b in
    (1, 1e15), alpha in (1e-10, 1), T in (1e2, 1e22), 100 points per axis.
    ``t_points`` overrides the budget-axis count alone.
    """

    eta_range: tuple[float, float] = (1e-15, 1e4)
    alpha_range: tuple[float, float] = (1e-10, 1.0)
    b_range: tuple[float, float] = (1.0, 1e15)
    t_range: tuple[float, float] = (1e2, 1e22)
    points_per_axis: int = 100
    t_points: int | None = None

    def __post_init__(self) -> None:
        for name, (lo, hi) in (
            ("eta_range", self.eta_range),
            ("alpha_range", self.alpha_range),
            ("b_range", self.b_range),
        ):
            _require(lo > 0, f"{name} lower bound must be > 0, got {lo}")
            _require(lo < hi, f"{name} must have lo < hi, got ({lo}, {hi})")
        _require(self.t_range[0] > 0, f"t_range lower bound must be > 0, got {self.t_range[0]}")
        _require(self.t_range[0] <= self.t_range[1], "t_range must have lo <= hi")
        _require(self.alpha_range[1] <= 1.0, "alpha_range upper bound must be <= 1")
        _require(self.b_range[0] >= 1.0, "b_range lower bound must be >= 1")
        _require(self.points_per_axis >= 2, "points_per_axis must be >= 2")
        if self.t_points is not None:
            _require(self.t_points >= 1, "t_points must be >= 1")

    def eta_axis(self) -> np.ndarray:
        return _log_axis(*self.eta_range, self.points_per_axis)

    def alpha_axis(self) -> np.ndarray:
        return _log_axis(*self.alpha_range, self.points_per_axis)

    def b_axis(self) -> np.ndarray:
        return _log_axis(*self.b_range, self.points_per_axis)

    def t_axis(self) -> np.ndarray:
        return _log_axis(*self.t_range, self.t_points or self.points_per_axis)

    def max_log_step(self, constraint: "Constraint") -> float:
        """Largest per-step log spacing among the axes left free by the constraint."""
        steps = []
        if constraint.fixed_eta is None:
            steps.append(self._step(self.eta_range, self.points_per_axis))
        if constraint.fixed_alpha is None:
            steps.append(self._step(self.alpha_range, self.points_per_axis))
        if constraint.fixed_b is None:
            steps.append(self._step(self.b_range, self.points_per_axis))
        return max(steps) if steps else 0.0

    @staticmethod
    def _step(rng: tuple[float, float], n: int) -> float:
        return math.log(rng[1] / rng[0]) / (n - 1)


def _log_axis(lo: float, hi: float, n: int) -> np.ndarray:
    if n == 1:
        return np.array([lo])
    return np.logspace(math.log10(lo), math.log10(hi), n)


@dataclass(frozen=True)
class Constraint:
    """Axes pinned or capped during a sweep.  Fields may be combined."""

    fixed_eta: float | None = None
    fixed_alpha: float | None = None
    fixed_b: float | None = None
    b_cap: float | None = None

    def __post_init__(self) -> None:
        if self.fixed_alpha is not None:
            _require(0 < self.fixed_alpha <= 1, f"fixed alpha must be in (0, 1], got {self.fixed_alpha}")
        if self.fixed_eta is not None:
            _require(self.fixed_eta > 0, f"fixed eta must be > 0, got {self.fixed_eta}")
        if self.fixed_b is not None:
            _require(self.fixed_b >= 1, f"fixed b must be >= 1, got {self.fixed_b}")
        if self.b_cap is not None:
            _require(self.b_cap >= 1, f"b_cap must be >= 1, got {self.b_cap}")
            _require(self.fixed_b is None, "fixed_b and b_cap are mutually exclusive")

    @classmethod
    def free(cls) -> "Constraint":
        return cls()

    @classmethod
    def fix_alpha(cls, alpha: float) -> "Constraint":
        return cls(fixed_alpha=alpha)

    @classmethod
    def fix_b(cls, b: float) -> "Constraint":
        return cls(fixed_b=b)

    @classmethod
    def fix_eta(cls, eta: float) -> "Constraint":
        return cls(fixed_eta=eta)

    @classmethod
    def cap_b(cls, b_max: float) -> "Constraint":
        return cls(b_cap=b_max)

    @property
    def tag(self) -> str:
        fixed = [
            name
            for name, value in (
                ("eta", self.fixed_eta),
                ("alpha", self.fixed_alpha),
                ("b", self.fixed_b),
            )
            if value is not None
        ]
        if not fixed and self.b_cap is None:
            return "free"
        if len(fixed) == 1 and self.b_cap is None:
            return f"fixed-{fixed[0]}"
        if not fixed and self.b_cap is not None:
            return "capped-b"
        return "composite"


@dataclass(frozen=True)
class SweepRecord:
    """Constrained argmin of the objective at one budget."""

    t: float
    eta: float
    alpha: float
    b: float
    risk: float
    at_edge: tuple[str, ...] = ()


@dataclass(frozen=True)
class SweepResult:
    records: tuple[SweepRecord, ...]
    constraint: Constraint
    objective: str
    spec: GridSpec

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def _objective_uv(
    c: BoundConstants, objective: str, b: np.ndarray, eta: np.ndarray, alpha: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Split the token-form objective as value(t) = u / t + v on the grid cube.

    Both objectives decompose into a budget-divided part (descent plus
    burn-in) and a budget-free part (noise floor plus smoothness), which
    lets the per-budget loop reuse the two cubes.  Magnitudes at the wide
    default grid corners stay around 1e30, far from float64 overflow.
    """
    bb = b[:, None, None]
    ee = eta[None, :, None]
    aa = alpha[None, None, :]
    sqrt_b = np.sqrt(bb)
    burn = c.c2 * sqrt_b / aa
    floor = c.c2 * np.sqrt(aa) / sqrt_b
    if objective == "risk_tokens":
        u = c.c1 * bb / ee + burn
        v = floor + c.c3 * ee * (1.0 + 1.0 / aa)
    elif objective == "bound_tokens":
        u = c.delta0 * bb / ee + burn
        v = floor + c.smoothness * ee * (SMOOTHNESS_WEIGHT + MOMENTUM_SMOOTHNESS_WEIGHT / aa)
    else:
        raise DomainError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    return u, v


def sweep(
    c: BoundConstants,
    spec: GridSpec = GridSpec(),
    constraint: Constraint = Constraint(),
    objective: str = "risk_tokens",
    threads: int = 1,
) -> SweepResult:
    """Per-budget argmin of the objective over the constrained grid.

    Budgets whose feasible set is empty (every allowed batch exceeds the
    budget) are skipped; if no budget is feasible at all the sweep raises.
    The argmin index is taken in (b asc, eta asc, alpha desc) order, which
    realizes the documented tie-breaking.
    """
    eta = np.array([constraint.fixed_eta]) if constraint.fixed_eta is not None else spec.eta_axis()
    alpha = (
        np.array([constraint.fixed_alpha])
        if constraint.fixed_alpha is not None
        else spec.alpha_axis()
    )
    b = np.array([constraint.fixed_b]) if constraint.fixed_b is not None else spec.b_axis()
    if constraint.b_cap is not None:
        b = b[b <= constraint.b_cap]
        if b.size == 0:
            raise InfeasibleError(f"no grid batch size satisfies the cap {constraint.b_cap}")
    alpha_desc = alpha[::-1].copy()

    u, v = _objective_uv(c, objective, b, eta, alpha_desc)
    free_axes = (
        constraint.fixed_b is None,
        constraint.fixed_eta is None,
        constraint.fixed_alpha is None,
    )

    def best_at(t: float) -> SweepRecord | None:
        m = int(np.searchsorted(b, t, side="right"))
        if m == 0:
            return None
        values = u[:m] / t + v[:m]
        flat = int(np.argmin(values))
        i_b, i_e, i_a = np.unravel_index(flat, values.shape)
        edges = []
        if free_axes[0]:
            if i_b == 0:
                edges.append("b-lo")
            if i_b == m - 1:
                edges.append("b-hi")
        if free_axes[1]:
            if i_e == 0:
                edges.append("eta-lo")
            if i_e == eta.size - 1:
                edges.append("eta-hi")
        if free_axes[2]:
            if i_a == alpha_desc.size - 1:
                edges.append("alpha-lo")
            if i_a == 0:
                edges.append("alpha-hi")
        return SweepRecord(
            t=float(t),
            eta=float(eta[i_e]),
            alpha=float(alpha_desc[i_a]),
            b=float(b[i_b]),
            risk=float(values[i_b, i_e, i_a]),
            at_edge=tuple(edges),
        )

    t_axis = spec.t_axis()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            maybe = list(pool.map(best_at, t_axis))
    else:
        maybe = [best_at(t) for t in t_axis]
    records = tuple(r for r in maybe if r is not None)
    if not records:
        raise InfeasibleError("empty feasible set: every allowed batch exceeds every budget")
    return SweepResult(records=records, constraint=constraint, objective=objective, spec=spec)


@dataclass(frozen=True)
class FitResult:
    """Least-squares power law y = coefficient * x^exponent on log-log pairs."""

    exponent: float
    coefficient: float
    r_squared: float
    window: tuple[float, float]
    n_points: int


def fit_power_law(xs, ys, window: tuple[float, float] | None = None) -> FitResult:
    """Ordinary least squares through (ln x, ln y), restricted to a window."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise DomainError(f"xs and ys must match, got {xs.shape} vs {ys.shape}")
    if window is not None:
        mask = (xs >= window[0]) & (xs <= window[1])
        xs, ys = xs[mask], ys[mask]
    if xs.size < 5:
        raise DomainError(f"need at least 5 in-window points, got {xs.size}")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("power-law fits need strictly positive data")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-20 else 0.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    actual_window = (float(xs.min()), float(xs.max())) if window is None else window
    return FitResult(
        exponent=float(slope),
        coefficient=float(math.exp(intercept)),
        r_squared=r2,
        window=actual_window,
        n_points=int(xs.size),
    )


def detect_burn_in(result: SweepResult) -> float | None:
    """Smallest budget past which the best batch stays above 1.

    Meaningful for sweeps with momentum pinned; returns None when the best
    batch never leaves 1 within the sweep range.
    """
    bs = result.column("b")
    ts = result.column("t")
    above = bs > 1.0
    if not above[-1]:
        return None
    idx = int(np.where(~above)[0][-1] + 1) if not above.all() else 0
    return float(ts[idx])


def fit_sweep_exponents(
    result: SweepResult,
    window: tuple[float, float] | None = None,
    decades: float = 2.0,
) -> dict[str, FitResult]:
    """Power-law fits of best risk/eta/b/alpha against the budget.

    Records whose argmin sits on a grid edge are excluded (they are clamped
    by the grid, not genuine optima; this also removes the small-budget
    phase where the best batch is pinned at 1).  The default window keeps
    the top ``decades`` decades of the remaining budgets.
    """
    clean = [r for r in result.records if not r.at_edge]
    if not clean:
        raise InfeasibleError("no sweep records free of grid-edge clamping")
    ts = np.array([r.t for r in clean])
    if window is None:
        hi = float(ts.max())
        window = (hi / 10.0**decades, hi)
    fits: dict[str, FitResult] = {}
    fits["risk"] = fit_power_law(ts, [r.risk for r in clean], window)
    if result.constraint.fixed_eta is None:
        fits["eta"] = fit_power_law(ts, [r.eta for r in clean], window)
    if result.constraint.fixed_b is None:
        fits["b"] = fit_power_law(ts, [r.b for r in clean], window)
    if result.constraint.fixed_alpha is None:
        fits["alpha"] = fit_power_law(ts, [r.alpha for r in clean], window)
    return fits
