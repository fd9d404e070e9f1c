"""Monte Carlo harness: replicated data-driven estimation and eMISE.

Replication ``j`` of an experiment draws its randomness from
``numpy.random.SeedSequence([spec.seed, j])``, so results do not depend
on how replications are distributed over worker processes.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import distributions as D
from .empirical import empirical_mellin, mx_hat, mx_tilde, sigma_hat_sq, threshold_mask
from .estimators import estimate
from .mellin_core import (DEFAULT_T_MAX, DEFAULT_T_STEP, TGrid, WeightFn, make_tgrid,
                          trapezoid_weights)
from .selection import PenaltyConfig, select_known, select_unknown


@dataclass(frozen=True)
class ExperimentSpec:
    """One cell of the simulation study.

    ``m=None`` means the error density is known and its exact Mellin
    transform is used in place of an estimate.
    """

    target: D.DistSpec
    error: D.DistSpec
    n: int
    m: Optional[int] = None
    c: float = 0.5
    a: float = 0.0
    kappa: float = 0.3
    N: int = 500
    x_points: np.ndarray = field(default_factory=lambda: np.linspace(0.01, 8.0, 400),
                                 compare=False)
    seed: int = 0
    t_max: float = DEFAULT_T_MAX
    t_step: float = DEFAULT_T_STEP
    survival: bool = False
    k_step: float = DEFAULT_T_STEP
    ise_refine: int = 4
    name: str = "custom"

    def __post_init__(self):
        if self.ise_refine < 1:
            raise ValueError("ise_refine must be at least 1")
        if self.n < 1 or self.N < 1 or (self.m is not None and self.m < 1):
            raise ValueError("sample sizes and replication count must be at least 1")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if self.survival and not self.c > 1:
            raise ValueError("survival estimation requires c > 1")
        x = np.asarray(self.x_points, dtype=float)
        if x.ndim != 1 or x.size < 2 or np.any(x <= 0) or np.any(np.diff(x) <= 0):
            raise ValueError("x_points must be an increasing grid of positive values")
        object.__setattr__(self, "x_points", x)

    @property
    def known_error(self) -> bool:
        return self.m is None

    @property
    def grid(self) -> TGrid:
        return make_tgrid(self.t_max, self.t_step)

    def truth(self, x=None) -> np.ndarray:
        x = self.x_points if x is None else x
        return self.target.sf(x) if self.survival else self.target.pdf(x)

    def ise_points(self) -> np.ndarray:
        """``x_points`` with ``ise_refine - 1`` equispaced points inserted in every gap.

        The estimates grow like ``x^(-c)`` towards 0 and a 400-point
        trapezoid rule under-resolves that end; the refined grid keeps the
        ISE within a fraction of a percent of a dense-grid reference.
        Every ``ise_refine``-th point is an original ``x_points`` entry.
        """
        x, r = self.x_points, self.ise_refine
        if r == 1:
            return x
        inner = x[:-1, None] + np.diff(x)[:, None] * (np.arange(r) / r)
        return np.append(inner.ravel(), x[-1])

    def loss_weight(self, x=None) -> np.ndarray:
        """Trapezoid weights times the ``x^(2c-1)`` (density) or ``x^(2c-3)`` (survival) factor."""
        x = self.x_points if x is None else x
        power = 2 * self.c - 3 if self.survival else 2 * self.c - 1
        return trapezoid_weights(x) * x ** power


@dataclass(frozen=True)
class Replication:
    ise: float
    curve: np.ndarray
    k_hat: float


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    per_replication_ise: np.ndarray
    k_hats: np.ndarray
    curves: np.ndarray
    truth: np.ndarray

    @property
    def emise(self) -> float:
        return float(np.mean(self.per_replication_ise))

    @property
    def stderr(self) -> float:
        ise = self.per_replication_ise
        if ise.size < 2:
            return float("nan")
        return float(np.std(ise, ddof=1) / np.sqrt(ise.size))

    @property
    def median_curve(self) -> np.ndarray:
        return np.median(self.curves, axis=0)

    @property
    def k_hat_histogram(self) -> dict[float, int]:
        ks, counts = np.unique(self.k_hats, return_counts=True)
        return {k.item(): int(c) for k, c in zip(ks, counts)}


def replication_seed(spec: ExperimentSpec, j: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([spec.seed, j])


def fit_replication(spec: ExperimentSpec, rep_seed, grid: TGrid | None = None):
    """Draw one data set and return ``(mx, selection)``: the transform estimate and the cut-off choice."""
    grid = grid or spec.grid
    rng = np.random.default_rng(rep_seed)
    y = spec.target.draw(rng, spec.n) * spec.error.draw(rng, spec.n)
    c = spec.c
    v = WeightFn(grid, c, spec.a)
    mY = empirical_mellin(y, c, grid)
    s2 = sigma_hat_sq(y, c)

    if spec.known_error:
        mU = D.analytic_mellin_fn(spec.error, c, grid)
        sel = select_known(mY, mU, v, c, spec.n, PenaltyConfig("known", spec.kappa), s2,
                           spec.k_step)
        mx = mx_tilde(mY, mU)
    else:
        u = spec.error.draw(rng, spec.m)
        mU_hat = empirical_mellin(u, c, grid)
        mask = threshold_mask(mU_hat, spec.m, spec.n)
        sel = select_unknown(mY, mU_hat, mask, v, c, spec.n, spec.m,
                             PenaltyConfig("unknown", spec.kappa), s2, spec.k_step)
        mx = mx_hat(mY, mU_hat, mask)
    return mx, sel


def run_replication(spec: ExperimentSpec, rep_seed, grid: TGrid | None = None) -> Replication:
    """Draw data, select ``k_hat`` and return the integrated squared error."""
    mx, sel = fit_replication(spec, rep_seed, grid)
    x = spec.ise_points()
    dense = estimate(mx, sel.k_hat, spec.c, x, survival=spec.survival,
                     known=spec.known_error).values
    err = dense - spec.truth(x)
    ise = float(np.sum(err * err * spec.loss_weight(x)))
    return Replication(ise, dense[::spec.ise_refine].copy(), sel.k_hat)


def _run_block(spec: ExperimentSpec, indices) -> list[Replication]:
    grid = spec.grid
    return [run_replication(spec, replication_seed(spec, j), grid) for j in indices]


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> ExperimentReport:
    """Run ``spec.N`` replications, optionally over ``jobs`` worker processes.

    Results are collected in replication order, so serial and parallel
    runs produce identical reports.
    """
    indices = list(range(spec.N))
    if jobs <= 1:
        reps = _run_block(spec, indices)
    else:
        blocks = [indices[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_block, [spec] * len(blocks), blocks))
        by_index = {}
        for block, res in zip(blocks, results):
            by_index.update(zip(block, res))
        reps = [by_index[j] for j in indices]
    return ExperimentReport(
        spec=spec,
        per_replication_ise=np.array([r.ise for r in reps]),
        k_hats=np.array([r.k_hat for r in reps]),
        curves=np.vstack([r.curve for r in reps]),
        truth=spec.truth(),
    )


GAMMA = D.Gamma(1, 3)
WEIBULL = D.Weibull(1, 3)
BETA = D.Beta(10, 5)
LOGNORMAL = D.LogNormal(0, 1)
PARETO = D.Pareto(1, 1)

# reported eMISE values for each preset
REFERENCE_EMISE = {
    "fig1": 0.00575, "fig2": 0.00458, "fig3": 0.00449, "fig4": 0.00299,
    "fig5": 0.00184, "fig6": 0.0241, "fig7": 0.129, "fig8": 0.00179,
}


def preset(name: str, **overrides) -> ExperimentSpec:
    """The simulation-study configurations ``fig1`` ... ``fig8``."""
    base = dict(error=PARETO, c=0.5, a=0.0, N=500, name=name)
    table = {
        "fig1": dict(target=GAMMA, n=1000, m=100, kappa=0.3),
        "fig2": dict(target=GAMMA, n=1000, m=1000, kappa=0.3),
        "fig3": dict(target=GAMMA, n=1000, m=4000, kappa=0.3),
        "fig4": dict(target=GAMMA, n=1000, m=None, kappa=0.6),
        "fig5": dict(target=GAMMA, n=2000, m=2000, kappa=0.3),
        "fig6": dict(target=WEIBULL, n=2000, m=2000, kappa=0.3),
        "fig7": dict(target=BETA, n=2000, m=2000, kappa=0.3,
                     x_points=np.linspace(0.001, 1.2, 400)),
        "fig8": dict(target=LOGNORMAL, n=2000, m=2000, kappa=0.3),
    }
    try:
        cfg = table[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(table)}") from None
    spec = ExperimentSpec(**{**base, **cfg})
    return replace(spec, **overrides) if overrides else spec


PRESETS = tuple(REFERENCE_EMISE)
