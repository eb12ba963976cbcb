"""Monte-Carlo comparison of the solvers over random Rayleigh channels.

Every trial draws its channel from its own generator, seeded from
``(seed, trial_index)`` through ``numpy.random.SeedSequence`` feeding PCG64.
A trial is therefore reproducible on its own, independent of how many
trials run or in which order, which lets trials fan out over processes
without changing the output.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import ChannelInstance, CoefficientSet
from .quantize import apq_solve, eapq_solve
from .search import algorithm1_optimize, exhaustive_search

SOLVERS = {
    "alg1": algorithm1_optimize,
    "apq": apq_solve,
    "eapq": eapq_solve,
    "exhaustive": exhaustive_search,
}


@dataclass(frozen=True)
class ChannelModelConfig:
    n_elements: int
    direct_power: float = 1.0
    element_power: float = 1.0
    rician_kappa: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_elements < 0:
            raise ValueError("n_elements must be >= 0")
        if self.direct_power < 0 or self.element_power < 0:
            raise ValueError("powers must be non-negative")
        if self.rician_kappa < 0:
            raise ValueError("rician_kappa must be non-negative")


class TrialError(RuntimeError):
    def __init__(self, trial: int, algorithm: str, cause: Exception):
        self.trial = trial
        self.algorithm = algorithm
        super().__init__(f"trial {trial} ({algorithm}): {cause}")


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial_index])))


def generate_channel(config: ChannelModelConfig, trial_index: int) -> ChannelInstance:
    """Draw one channel realization: Rayleigh magnitudes, uniform phases."""
    if config.rician_kappa > 0:
        raise NotImplementedError("only kappa = 0 (no line-of-sight component) is supported")
    rng = trial_rng(config.seed, trial_index)
    N = config.n_elements
    # magnitude of a circular complex Gaussian with E|h|^2 = power
    mags = rng.rayleigh(scale=1.0, size=N + 1) * np.sqrt(0.5)
    angles = rng.uniform(-np.pi, np.pi, size=N + 1)
    beta0 = mags[0] * math.sqrt(config.direct_power)
    betas = mags[1:] * math.sqrt(config.element_power)
    return ChannelInstance(beta0, angles[0], betas, angles[1:])


@dataclass
class ExperimentResult:
    """Per-trial metrics, one array of length ``trials`` per algorithm."""

    algorithms: tuple[str, ...]
    power: dict[str, np.ndarray]
    snr_boost: dict[str, np.ndarray]
    normalized_power: dict[str, np.ndarray]
    steps: dict[str, np.ndarray]
    meta: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return len(next(iter(self.power.values()))) if self.power else 0

    def records(self):
        """Rows ``(trial, algorithm, power, snr_boost, normalized_power, steps)``."""
        for t in range(self.trials):
            for a in self.algorithms:
                yield (
                    t,
                    a,
                    float(self.power[a][t]),
                    float(self.snr_boost[a][t]),
                    float(self.normalized_power[a][t]),
                    int(self.steps[a][t]),
                )

    def aggregate(self, algorithm, percentiles=(1.0, 50.0), cdf_grid=None, metric="snr_boost"):
        values = getattr(self, metric)[algorithm]
        out = {
            "algorithm": algorithm,
            "metric": metric,
            "mean": float(np.mean(values)),
            "mean_power": float(np.mean(self.power[algorithm])),
            "mean_normalized_power": float(np.mean(self.normalized_power[algorithm])),
            "percentiles": {float(p): percentile(values, p) for p in percentiles},
        }
        if cdf_grid is not None:
            out["cdf"] = cdf(values, cdf_grid)
        return out


def _run_trials(args):
    config, ws, algorithms, trial_ids, budget = args
    n = len(trial_ids)
    cols = {a: np.empty((4, n)) for a in algorithms}
    for i, t in enumerate(trial_ids):
        ch = generate_channel(config, t)
        ideal = (ch.beta0 + float(ch.betas.sum())) ** 2
        for a in algorithms:
            try:
                if a == "exhaustive" and budget is not None:
                    sol = exhaustive_search(ch, ws, budget=budget)
                else:
                    sol = SOLVERS[a](ch, ws)
            except Exception as exc:  # noqa: BLE001 - re-raised with the trial attached
                raise TrialError(int(t), a, exc) from exc
            boost = np.nan if sol.snr_boost is None else sol.snr_boost
            norm = sol.power / ideal if ideal > 0 else np.nan
            cols[a][:, i] = (sol.power, boost, norm, sol.steps)
    return cols


def run_monte_carlo(
    config: ChannelModelConfig,
    ws: CoefficientSet,
    algorithms,
    trials: int,
    *,
    workers: int = 1,
    budget: int | None = None,
) -> ExperimentResult:
    """Run every algorithm on the same channel realization in each trial."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    algorithms = tuple(algorithms)
    unknown = [a for a in algorithms if a not in SOLVERS]
    if unknown:
        raise ValueError(f"unknown algorithms {unknown}; choose from {sorted(SOLVERS)}")

    ids = np.arange(trials)
    if workers > 1 and trials > 1:
        chunks = np.array_split(ids, min(workers * 4, trials))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_trials, [(config, ws, algorithms, c, budget) for c in chunks]))
        cols = {a: np.concatenate([p[a] for p in parts], axis=1) for a in algorithms}
    else:
        cols = _run_trials((config, ws, algorithms, ids, budget))

    return ExperimentResult(
        algorithms=algorithms,
        power={a: cols[a][0] for a in algorithms},
        snr_boost={a: cols[a][1] for a in algorithms},
        normalized_power={a: cols[a][2] for a in algorithms},
        steps={a: cols[a][3].astype(int) for a in algorithms},
    )


def cdf(values, grid) -> np.ndarray:
    """Empirical CDF of ``values`` evaluated at the sorted ``grid`` points."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        return np.zeros(len(grid))
    return np.searchsorted(v, np.asarray(grid, dtype=float), side="right") / v.size


def percentile(values, p: float) -> float:
    """Nearest-rank percentile: the ``ceil(p/100 * n)``-th smallest value."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("percentile of an empty sample")
    if not 0 < p < 100:
        raise ValueError(f"p must lie in (0, 100), got {p}")
    rank = max(1, math.ceil(p * v.size / 100.0))
    return float(v[rank - 1])
