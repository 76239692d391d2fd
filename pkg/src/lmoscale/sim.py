"""Desk-scale stochastic optimizer laboratory.

Runs the norm-constrained momentum method (normalized descent, sign
descent, or orthogonalized descent, depending on the chosen norm) on
synthetic objectives with controllable initial suboptimality, smoothness,
and gradient noise, to confirm the proxy's qualitative predictions.
A plain gradient-step mode (``update="sgd"``) serves as the baseline.

Everything is deterministic given the seed: replicate streams derive from
(master seed, grid-point index, replicate index), and assembly never
depends on execution order.  Batch sizes are integers here, unlike in the
proxy; ``integer_batch`` rounds proxy-derived values at this boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .proxy import _require

__all__ = [
    "NormKind",
    "ObjectiveSpec",
    "LmoConfig",
    "SimRun",
    "SimPoint",
    "SimSweepResult",
    "dual_norm",
    "lmo_direction",
    "polar_factor",
    "momentum_update",
    "integer_batch",
    "run",
    "sweep_sim",
]


class NormKind(Enum):
    EUCLIDEAN = "euclidean"  # normalized descent; dual norm l2
    MAX = "max"              # sign descent; dual norm l1
    SPECTRAL = "spectral"    # orthogonalized descent; dual norm nuclear


def integer_batch(b: float) -> int:
    """Round a real-valued batch size to the nearest integer >= 1."""
    return max(1, round(b))


def momentum_update(m: np.ndarray, g: np.ndarray, alpha: float) -> np.ndarray:
    """One momentum step: keep (1 - alpha) of the buffer, blend in alpha of g."""
    return (1.0 - alpha) * m + alpha * g


def dual_norm(v: np.ndarray, norm: NormKind) -> float:
    v = np.asarray(v, dtype=float)
    if norm is NormKind.EUCLIDEAN:
        return float(np.sqrt(np.sum(v * v)))
    if norm is NormKind.MAX:
        return float(np.sum(np.abs(v)))
    if v.ndim != 2:
        raise DomainError(f"spectral dual norm needs a matrix, got ndim={v.ndim}")
    return float(np.linalg.svd(v, compute_uv=False).sum())


def _spectral_norm_estimate(x: np.ndarray, iters: int = 24) -> float:
    v = np.full(x.shape[1], 1.0 / math.sqrt(x.shape[1]))
    for _ in range(iters):
        w = x.T @ (x @ v)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return float(np.linalg.norm(x))
        v = w / nw
    return float(np.linalg.norm(x @ v))


def polar_factor(m: np.ndarray, iterations: int = 5, fallback_tol: float = 1e-4) -> np.ndarray:
    """Orthogonal polar factor of a matrix.

    Fifth-degree fixed-point iteration X (15 I - 10 G + 3 G^2) / 8 with
    G = X^T X, after rescaling by a power-iteration estimate of the
    spectral norm so all singular values start in (0, ~1].  The update
    converges cubically once near the factor; iterates whose residual
    ||G - I||_F still exceeds ``fallback_tol`` after the fixed iteration
    count (ill-conditioned inputs) fall back to the exact decomposition.
    Converged iterates are polished to a near-machine residual so the
    result tracks the exact factor to much better than the fallback
    threshold.  A zero matrix maps to the zero matrix.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise DomainError(f"polar factor needs a matrix, got ndim={m.ndim}")
    if not np.any(m):
        return np.zeros_like(m)
    transposed = m.shape[0] < m.shape[1]
    x = m.T if transposed else m
    eye = np.eye(x.shape[1])

    def step(y: np.ndarray) -> np.ndarray:
        g = y.T @ y
        return y @ (15.0 * eye - 10.0 * g + 3.0 * (g @ g)) / 8.0

    with np.errstate(over="ignore", invalid="ignore"):
        x = x / (1.02 * _spectral_norm_estimate(x))
        for _ in range(iterations):
            x = step(x)
        resid = float(np.linalg.norm(x.T @ x - eye))
        if not math.isfinite(resid) or resid > fallback_tol:
            u, _, vt = np.linalg.svd(m, full_matrices=False)
            return u @ vt
        polish = 0
        while resid > 1e-11 and polish < 3:
            x = step(x)
            resid = float(np.linalg.norm(x.T @ x - eye))
            polish += 1
    return x.T if transposed else x


def lmo_direction(m: np.ndarray, norm: NormKind) -> np.ndarray:
    """Unit-norm direction minimizing the inner product with m.

    Satisfies <m, d> = -dual_norm(m) with ||d|| = 1 in the chosen norm.
    A zero buffer returns the zero direction (the minimizer set is the
    whole ball; zero is the fixed representative, and sign(0) = 0
    coordinate-wise for the max norm).
    """
    m = np.asarray(m, dtype=float)
    if norm is NormKind.EUCLIDEAN:
        scale = float(np.sqrt(np.sum(m * m)))
        return -m / scale if scale > 0 else np.zeros_like(m)
    if norm is NormKind.MAX:
        return -np.sign(m)
    return -polar_factor(m)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Synthetic objective with a known minimizer.

    ``noisy-quadratic`` is 0.5 * sum(spectrum * x^2) started from
    x0_scale * ones; ``matrix-least-squares`` is 0.5 * ||A X - Y||_F^2 on a
    dims-shaped matrix variable with data drawn deterministically from
    data_seed and started from zero.  Per-sample gradient noise has scale
    noise_sigma; a mini-batch of size b averages it down to noise_sigma /
    sqrt(b) per coordinate (or the slower b^(1/p - 1) law under the
    heavy-tailed demo generator, noise_kind="stable").
    """

    kind: str = "noisy-quadratic"
    noise_sigma: float = 0.0
    spectrum: tuple[float, ...] | None = None
    dims: tuple[int, int] | None = None
    x0_scale: float = 1.0
    data_seed: int = 0
    noise_kind: str = "gaussian"
    stable_alpha: float | None = None

    def __post_init__(self) -> None:
        _require(self.noise_sigma >= 0, f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.kind == "noisy-quadratic":
            _require(self.spectrum is not None and len(self.spectrum) > 0,
                     "noisy-quadratic needs a spectrum")
            _require(all(s > 0 for s in self.spectrum), "spectrum entries must be > 0")
        elif self.kind == "matrix-least-squares":
            _require(self.dims is not None and len(self.dims) == 2
                     and all(d >= 1 for d in self.dims),
                     "matrix-least-squares needs dims=(rows, cols)")
        else:
            raise DomainError(f"unknown objective kind {self.kind!r}")
        if self.noise_kind == "stable":
            _require(self.stable_alpha is not None and 1.0 < self.stable_alpha <= 2.0,
                     "stable noise needs stable_alpha in (1, 2]")
        elif self.noise_kind != "gaussian":
            raise DomainError(f"unknown noise kind {self.noise_kind!r}")


class _Objective:
    """Built objective: broadcastable gradient, scalar value, known constants."""

    def __init__(self, spec: ObjectiveSpec):
        self.spec = spec
        if spec.kind == "noisy-quadratic":
            self.lam = np.asarray(spec.spectrum, dtype=float)
            self.x0 = np.full(self.lam.shape, spec.x0_scale)
            self.smoothness = float(self.lam.max())
        else:
            rows, cols = spec.dims
            rng = np.random.default_rng(spec.data_seed)
            self.a = rng.standard_normal((2 * rows, rows)) / math.sqrt(rows)
            x_true = rng.standard_normal((rows, cols))
            self.y = self.a @ x_true
            self.x0 = np.zeros((rows, cols))
            self.smoothness = float(np.linalg.svd(self.a, compute_uv=False).max() ** 2)
        self.delta0 = self.value(self.x0)

    @property
    def var_axes(self) -> tuple[int, ...]:
        return tuple(range(-self.x0.ndim, 0))

    def grad(self, x: np.ndarray) -> np.ndarray:
        if self.spec.kind == "noisy-quadratic":
            return self.lam * x
        return np.swapaxes(self.a, -1, -2) @ (self.a @ x - self.y)

    def value(self, x: np.ndarray) -> float:
        if self.spec.kind == "noisy-quadratic":
            return float(0.5 * np.sum(self.lam * x * x, axis=self.var_axes))
        resid = self.a @ x - self.y
        return float(0.5 * np.sum(resid * resid, axis=self.var_axes))


def _noise_factory(spec: ObjectiveSpec, batch: int):
    if spec.noise_sigma == 0.0:
        return None
    if spec.noise_kind == "gaussian":
        scale = spec.noise_sigma / math.sqrt(batch)
        return lambda gen, shape: scale * gen.standard_normal(shape)
    a = spec.stable_alpha
    scale = spec.noise_sigma / batch ** (1.0 - 1.0 / a)

    def draw(gen, shape):
        v = gen.uniform(-np.pi / 2, np.pi / 2, shape)
        w = gen.exponential(1.0, shape)
        return scale * (np.sin(a * v) / np.cos(v) ** (1.0 / a)
                        * (np.cos((1.0 - a) * v) / w) ** ((1.0 - a) / a))

    return draw


@dataclass(frozen=True)
class LmoConfig:
    """One simulator run: geometry, hyperparameters, horizon, seeding.

    ``init`` picks the momentum start: "matched" draws a batch-sized
    stochastic gradient at x0 (so its error shrinks like 1/sqrt(b)),
    "zero" starts empty, "custom" uses init_value (flattened, row-major).
    ``update="sgd"`` replaces the normalized step by a plain gradient step
    and is the comparison baseline.
    """

    norm: NormKind
    eta: float
    alpha: float
    batch: int
    steps: int
    seed: int
    init: str = "matched"
    init_value: tuple[float, ...] | None = None
    update: str = "lmo"

    def __post_init__(self) -> None:
        _require(self.eta > 0, f"eta must be > 0, got {self.eta}")
        _require(0 < self.alpha <= 1, f"alpha must be in (0, 1], got {self.alpha}")
        _require(isinstance(self.batch, int) and self.batch >= 1,
                 f"batch must be an integer >= 1, got {self.batch!r}")
        _require(self.steps >= 1, f"steps must be >= 1, got {self.steps}")
        _require(self.init in ("matched", "zero", "custom"), f"unknown init {self.init!r}")
        if self.init == "custom":
            _require(self.init_value is not None, "custom init needs init_value")
        _require(self.update in ("lmo", "sgd"), f"unknown update {self.update!r}")


@dataclass(eq=False)
class SimRun:
    """Trajectory summary of one run.

    ``grad_norms[k]`` is the dual norm of the true gradient after step
    k + 1; ``running_min`` is its running minimum, the per-run estimate of
    the quantity the bound controls (a lower-biased estimate, since the
    bound controls a minimum of expectations, not an expectation of
    minima).
    """

    grad_norms: np.ndarray
    running_min: np.ndarray
    min_grad_norm: float
    final_value: float
    final_grad_norm: float
    aborted: bool
    config: LmoConfig


def _batched_directions(m: np.ndarray, norm: NormKind, var_ndim: int) -> np.ndarray:
    if norm is NormKind.EUCLIDEAN:
        axes = tuple(range(-var_ndim, 0))
        scale = np.sqrt(np.sum(m * m, axis=axes, keepdims=True))
        return np.where(scale > 0, -m / np.where(scale > 0, scale, 1.0), 0.0)
    if norm is NormKind.MAX:
        return -np.sign(m)
    out = np.empty_like(m)
    for idx in np.ndindex(m.shape[:2]):
        out[idx] = lmo_direction(m[idx], NormKind.SPECTRAL)
    return out


def _batched_dual_norms(g: np.ndarray, norm: NormKind, var_ndim: int) -> np.ndarray:
    axes = tuple(range(-var_ndim, 0))
    if norm is NormKind.EUCLIDEAN:
        return np.sqrt(np.sum(g * g, axis=axes))
    if norm is NormKind.MAX:
        return np.sum(np.abs(g), axis=axes)
    return np.linalg.svd(g, compute_uv=False).sum(axis=-1)


def _run_batch(
    obj: _Objective,
    norm: NormKind,
    update: str,
    etas: np.ndarray,
    alpha: float,
    batch: int,
    steps: int,
    seed_seqs,
    init: str,
    init_value=None,
    record: bool = False,
    chunk: int = 512,
):
    """Simulate a group of runs sharing noise across the step-size axis.

    Returns (best (H, R), aborted (H, R), trace (steps,) or None, final
    iterates (H, R, *var)); the trace is recorded only for a single run
    (H = R = 1).
    """
    var_shape = obj.x0.shape
    var_ndim = obj.x0.ndim
    h, r = len(etas), len(seed_seqs)
    gens = [np.random.default_rng(s) for s in seed_seqs]
    noise = _noise_factory(obj.spec, batch)

    x = np.broadcast_to(obj.x0, (h, r) + var_shape).copy()
    eta_col = np.asarray(etas, dtype=float).reshape((h, 1) + (1,) * var_ndim)
    if init == "matched":
        g0 = obj.grad(obj.x0)
        if noise is not None:
            n0 = np.stack([noise(gen, var_shape) for gen in gens])
        else:
            n0 = np.zeros((r,) + var_shape)
        m = np.broadcast_to(g0 + n0, (h, r) + var_shape).copy()
    elif init == "zero":
        m = np.zeros((h, r) + var_shape)
    else:
        m0 = np.asarray(init_value, dtype=float).reshape(var_shape)
        m = np.broadcast_to(m0, (h, r) + var_shape).copy()

    best = np.full((h, r), np.inf)
    aborted = np.zeros((h, r), dtype=bool)
    trace = np.empty(steps) if record else None
    done = 0
    with np.errstate(over="ignore", invalid="ignore"):
        g_true = np.broadcast_to(obj.grad(obj.x0), (h, r) + var_shape)
        while done < steps:
            n = min(chunk, steps - done)
            if noise is not None:
                draws = np.stack([noise(gen, (n,) + var_shape) for gen in gens], axis=1)
            else:
                draws = None
            for i in range(n):
                g = g_true if draws is None else g_true + draws[i]
                m = momentum_update(m, g, alpha)
                if update == "lmo":
                    x = x + eta_col * _batched_directions(m, norm, var_ndim)
                else:
                    x = x - eta_col * m
                g_true = obj.grad(x)
                norms = _batched_dual_norms(g_true, norm, var_ndim)
                bad = ~np.isfinite(norms)
                if bad.any():
                    aborted |= bad
                    norms = np.where(bad, np.inf, norms)
                np.minimum(best, norms, out=best)
                if record:
                    trace[done + i] = norms[0, 0]
            done += n
    return best, aborted, trace, x


def run(spec: ObjectiveSpec, cfg: LmoConfig) -> SimRun:
    """One seeded run; bit-identical output for identical (spec, cfg)."""
    obj = _Objective(spec)
    best, aborted, trace, x = _run_batch(
        obj,
        cfg.norm,
        cfg.update,
        np.array([cfg.eta]),
        cfg.alpha,
        cfg.batch,
        cfg.steps,
        [np.random.SeedSequence(cfg.seed)],
        cfg.init,
        cfg.init_value,
        record=True,
    )
    return SimRun(
        grad_norms=trace,
        running_min=np.minimum.accumulate(trace),
        min_grad_norm=float(best[0, 0]),
        final_value=obj.value(x[0, 0]),
        final_grad_norm=float(trace[-1]),
        aborted=bool(aborted[0, 0]),
        config=cfg,
    )


@dataclass(frozen=True)
class SimPoint:
    """Replicate-averaged metric at one sweep point.

    ``metric`` is the mean over replicates of each run's minimum dual
    gradient norm; infinite when every replicate aborted.
    """

    t: float
    eta: float
    alpha: float
    b: int
    steps: int
    metric: float
    replicates: int


@dataclass(frozen=True)
class SimSweepResult:
    """All evaluated points plus the per-budget argmin records."""

    points: tuple[SimPoint, ...]
    best: tuple[SimPoint, ...]


def sweep_sim(
    spec: ObjectiveSpec,
    norm: NormKind,
    eta_grid,
    alpha_grid,
    b_grid,
    t_grid,
    replicates: int,
    seed: int,
    update: str = "lmo",
    init: str = "matched",
) -> SimSweepResult:
    """Empirical sweep: argmin of the replicate-averaged metric per budget.

    Step counts are round(t / b), at least 1.  Runs at one (budget, batch,
    momentum) point share their noise streams across the step-size axis
    (common random numbers), with replicate generators derived from
    (seed, budget index, batch index, momentum index, replicate).
    Ties break toward the smallest batch, then the smallest step size,
    then the largest momentum complement.
    """
    _require(replicates >= 1, f"replicates must be >= 1, got {replicates}")
    obj = _Objective(spec)
    etas = np.sort(np.asarray(eta_grid, dtype=float))
    alphas = np.sort(np.asarray(alpha_grid, dtype=float))
    batches = sorted(integer_batch(b) for b in np.asarray(b_grid, dtype=float))
    points: list[SimPoint] = []
    for ti, t in enumerate(np.asarray(t_grid, dtype=float)):
        for bi, b in enumerate(batches):
            steps = max(1, round(t / b))
            for ai, alpha in enumerate(alphas):
                seqs = np.random.SeedSequence([seed, ti, bi, ai]).spawn(replicates)
                best, _, _, _ = _run_batch(
                    obj, norm, update, etas, float(alpha), b, steps, seqs, init
                )
                metrics = best.mean(axis=1)
                for ei, eta in enumerate(etas):
                    points.append(
                        SimPoint(
                            t=float(t),
                            eta=float(eta),
                            alpha=float(alpha),
                            b=b,
                            steps=steps,
                            metric=float(metrics[ei]),
                            replicates=replicates,
                        )
                    )
    best_records = []
    for t in np.asarray(t_grid, dtype=float):
        group = [p for p in points if p.t == float(t)]
        best_records.append(min(group, key=lambda p: (p.metric, p.b, p.eta, -p.alpha)))
    return SimSweepResult(points=tuple(points), best=tuple(best_records))
