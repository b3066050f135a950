"""Seeded Monte Carlo trials over node counts, aggregated per (topology, n).

Seeding
-------
The cloud for trial ``t`` at node count ``n`` is drawn from a Philox
generator keyed by ``numpy.random.SeedSequence(master_seed, spawn_key=(n, t))``.
The topology kind is deliberately *not* part of the key, so every kind sees
the same clouds for a given master seed (paired comparisons), and any single
trial can be reproduced in isolation.
"""

from __future__ import annotations

import enum
import os
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .graph import (
    DegreeStats,
    NeighborRanking,
    PointCloud,
    UndirectedGraph,
    degree_stats,
    is_connected,
    pairwise_rankings,
    sample_uniform_points,
)
from .topology import (
    REMOVAL_RULES,
    TopologyParams,
    build_composite,
    build_rgg,
    build_symmetric_kj,
    build_symmetric_knn,
    critical_radius,
)

THREADS_ENV = "KJNN_THREADS"


class TopologyKind(str, enum.Enum):
    SYM_KNN = "sym-knn"
    KJ_NN = "kj-nn"
    RGG = "rgg"
    KJ_NN_RGG = "kj-nn-rgg"

    def __str__(self):
        return self.value

    @property
    def uses_j(self) -> bool:
        return self in (TopologyKind.KJ_NN, TopologyKind.KJ_NN_RGG)

    @property
    def uses_radius(self) -> bool:
        return self in (TopologyKind.RGG, TopologyKind.KJ_NN_RGG)


@dataclass(frozen=True)
class ExperimentConfig:
    """One topology family swept over node counts.

    ``r`` fixes the radius for the radius-based kinds; when it is ``None`` the
    radius comes from :func:`critical_radius` with ``(n, k, sigma)``.
    """

    kind: TopologyKind
    k: int
    j: int = 1
    n_values: tuple[int, ...] = tuple(range(100, 1001, 100))
    trials: int = 100
    master_seed: int = 0
    sigma: float = 3.0
    r: float | None = None
    removal: str = "per-node"

    def __post_init__(self):
        object.__setattr__(self, "kind", TopologyKind(self.kind))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.n_values:
            raise ValueError("n_values must not be empty")
        if min(self.n_values) < 2:
            raise ValueError("every node count must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.kind.uses_j:
            TopologyParams(self.k, self.j)
        if self.r is not None and not self.r > 0:
            raise ValueError(f"fixed radius must be positive, got {self.r}")
        if self.kind.uses_radius and self.r is None and min(self.n_values) < 3:
            raise ValueError("the radius formula needs n >= 3; pass a fixed radius instead")
        if self.removal not in REMOVAL_RULES:
            raise ValueError(f"unknown removal rule {self.removal!r}")

    @property
    def params(self) -> TopologyParams:
        return TopologyParams(self.k, self.j)

    def radius_for(self, n: int) -> float | None:
        if not self.kind.uses_radius:
            return None
        if self.r is not None:
            return self.r
        return critical_radius(n, self.k, self.sigma).r_n


@dataclass(frozen=True)
class TrialResult:
    n: int
    trial_index: int
    connected: bool
    degree_stats: DegreeStats
    edge_count: int
    radius_used: float | None


@dataclass(frozen=True)
class AggregateResult:
    kind: TopologyKind
    k: int | None
    j: int | None
    n: int
    trials: int
    master_seed: int
    connectivity_probability: float
    mean_degree: float
    mean_min_degree: float
    mean_max_degree: float
    radius: float | None = None
    degree_histogram: dict[int, float] = field(default_factory=dict)


def trial_rng(master_seed: int, n: int, trial_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(n, trial_index))
    return np.random.Generator(np.random.Philox(seq))


def trial_cloud(master_seed: int, n: int, trial_index: int) -> PointCloud:
    return sample_uniform_points(n, trial_rng(master_seed, n, trial_index))


def build_topology(
    config: ExperimentConfig, cloud: PointCloud, ranking: NeighborRanking | None = None
) -> tuple[UndirectedGraph, float | None]:
    """Build the configured topology on ``cloud``; returns the graph and the radius used."""
    if ranking is None and config.kind is not TopologyKind.RGG:
        ranking = pairwise_rankings(cloud)
    r = config.radius_for(cloud.n)
    kind = config.kind
    if kind is TopologyKind.SYM_KNN:
        g = build_symmetric_knn(ranking, config.k)
    elif kind is TopologyKind.KJ_NN:
        g = build_symmetric_kj(ranking, config.params, config.removal)
    elif kind is TopologyKind.RGG:
        g = build_rgg(cloud, r)
    else:
        g = build_composite(cloud, ranking, config.params, r, config.removal)
    return g, r


def _measure(config, cloud, ranking, n, trial_index) -> TrialResult:
    g, r = build_topology(config, cloud, ranking)
    return TrialResult(
        n=n,
        trial_index=trial_index,
        connected=is_connected(g),
        degree_stats=degree_stats(g),
        edge_count=g.num_edges,
        radius_used=r,
    )


def run_trial(config: ExperimentConfig, n: int, trial_index: int) -> TrialResult:
    if n not in config.n_values:
        raise ValueError(f"n={n} is not part of the configured sweep")
    if not 0 <= trial_index < config.trials:
        raise ValueError(f"trial_index {trial_index} outside [0, {config.trials})")
    cloud = trial_cloud(config.master_seed, n, trial_index)
    ranking = None if config.kind is TopologyKind.RGG else pairwise_rankings(cloud)
    return _measure(config, cloud, ranking, n, trial_index)


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit value, else ``$KJNN_THREADS`` (0 = all cores), else 1."""
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "1") or 1)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def _paired_trial(configs, n, trial_index) -> list[TrialResult]:
    lead = configs[0]
    cloud = trial_cloud(lead.master_seed, n, trial_index)
    ranking = None
    if any(c.kind is not TopologyKind.RGG for c in configs):
        ranking = pairwise_rankings(cloud)
    return [_measure(c, cloud, ranking, n, trial_index) for c in configs]


def aggregate(config: ExperimentConfig, n: int, results: Sequence[TrialResult]) -> AggregateResult:
    """Fold trial results (ordered by trial index) into per-n means."""
    trials = len(results)
    hist: dict[int, float] = {}
    for res in results:
        for d, p in res.degree_stats.histogram.items():
            hist[d] = hist.get(d, 0.0) + p
    hist = {d: hist[d] / trials for d in sorted(hist)}
    radii = [res.radius_used for res in results if res.radius_used is not None]
    kind = config.kind
    fixed_rgg = kind is TopologyKind.RGG and config.r is not None
    return AggregateResult(
        kind=kind,
        k=None if fixed_rgg else config.k,
        j=config.j if kind.uses_j else None,
        n=n,
        trials=trials,
        master_seed=config.master_seed,
        connectivity_probability=sum(res.connected for res in results) / trials,
        mean_degree=float(np.mean([res.degree_stats.mean for res in results])),
        mean_min_degree=float(np.mean([res.degree_stats.min for res in results])),
        mean_max_degree=float(np.mean([res.degree_stats.max for res in results])),
        radius=float(np.mean(radii)) if radii else None,
        degree_histogram=hist,
    )


def run_trials_paired(
    configs: Sequence[ExperimentConfig], workers: int | None = None
) -> list[dict[int, list[TrialResult]]]:
    """Run several configs on shared clouds.

    Each cloud is sampled and ranked once, then every topology is built on it.
    All configs must agree on ``n_values``, ``trials`` and ``master_seed``.
    Returns, per config, a mapping ``n -> trial results`` ordered by trial index.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("need at least one config")
    lead = configs[0]
    for c in configs[1:]:
        if (c.n_values, c.trials, c.master_seed) != (lead.n_values, lead.trials, lead.master_seed):
            raise ValueError("paired configs must share n_values, trials and master_seed")

    tasks = [(n, t) for n in lead.n_values for t in range(lead.trials)]
    workers = resolve_workers(workers)
    if workers == 1:
        rows = [_paired_trial(configs, n, t) for n, t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda task: _paired_trial(configs, *task), tasks))

    out: list[dict[int, list[TrialResult]]] = [{n: [] for n in lead.n_values} for _ in configs]
    for (n, _), row in zip(tasks, rows):
        for per_config, res in zip(out, row):
            per_config[n].append(res)
    return out


def run_paired(
    configs: Sequence[ExperimentConfig], workers: int | None = None
) -> list[list[AggregateResult]]:
    trial_sets = run_trials_paired(configs, workers)
    return [
        [aggregate(config, n, by_n[n]) for n in config.n_values]
        for config, by_n in zip(configs, trial_sets)
    ]


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> list[AggregateResult]:
    """One AggregateResult per node count, in ``config.n_values`` order."""
    return run_paired([config], workers)[0]


def degree_distribution(config: ExperimentConfig, n: int, workers: int | None = None) -> dict[int, float]:
    if n not in config.n_values:
        raise ValueError(f"n={n} is not part of the configured sweep")
    single = replace(config, n_values=(n,))
    return run_experiment(single, workers)[0].degree_histogram


def link_gain(base: AggregateResult, reduced: AggregateResult) -> float:
    """Links saved per node: ``(base degree - reduced degree) / 2``, the c in ``c * n``."""
    if base.n != reduced.n:
        raise ValueError(f"cannot compare aggregates at n={base.n} and n={reduced.n}")
    return (base.mean_degree - reduced.mean_degree) / 2


def sweep_mean(results: Sequence[AggregateResult], attr: str = "mean_degree") -> float:
    """Average of a per-n statistic across the sweep."""
    return float(np.mean([getattr(r, attr) for r in results]))
