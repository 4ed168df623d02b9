"""Experiment designs: seeded ensembles, damage protocols, and parameter
sweeps with asymptotic summaries.

Every random draw flows from the master seed through documented splitting:
replicate k derives its sub-seeds from numpy SeedSequence entropy tuples
(master_seed, k, purpose), where purpose 0 covers point placement, 1 the
initial states, and 2 the damage target.  When point sets are not shared
across beta values, the point purpose additionally folds in the beta value
scaled to an integer.  Results are therefore independent of execution
order.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .engine import run, parse_rule
from .geometry import (PointSet, SkeletonConfig, SkeletonGraph, DegreeStats,
                       build_beta_skeleton, degree_stats, generate_points)
from .memory import MemoryModel
from .metrics import (ObservableSeries, asymptotic, changing_rate,
                      cross_distance, damage_series, density_series)

__all__ = [
    "ExperimentConfig",
    "SingleRunResult",
    "ExperimentResult",
    "SweepRow",
    "derive_seed",
    "run_single",
    "run_ensemble",
    "sweep",
    "PURPOSE_POINTS",
    "PURPOSE_INIT",
    "PURPOSE_DAMAGE",
]

PURPOSE_POINTS = 0
PURPOSE_INIT = 1
PURPOSE_DAMAGE = 2


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 1000
    beta: float = 1.0
    rule: str = "parity"
    memory: MemoryModel = field(default_factory=lambda: MemoryModel("ahistoric"))
    t_max: int = 100
    n_seeds: int = 11
    init: tuple = ("random_half",)
    damage: tuple | None = None           # None | ("node", id) | ("random",)
    master_seed: int = 1
    share_points_across_beta: bool = True
    asymptotic_k: int = 10

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        parse_rule(self.rule)
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")
        if self.n_seeds < 1:
            raise ValueError("n_seeds must be at least 1")
        kind = self.init[0]
        if kind == "single_active":
            if not 0 <= self.init[1] < self.n:
                raise ValueError("single_active node id out of range")
        elif kind == "explicit":
            bits = np.asarray(self.init[1], dtype=np.uint8)
            if bits.shape != (self.n,) or (bits > 1).any():
                raise ValueError("explicit init must list n binary states")
        elif kind != "random_half":
            raise ValueError(f"unknown init spec: {self.init!r}")
        if self.damage is not None:
            if self.damage[0] == "node":
                if not 0 <= self.damage[1] < self.n:
                    raise ValueError("damage node id out of range")
            elif self.damage[0] != "random":
                raise ValueError(f"unknown damage spec: {self.damage!r}")
        if self.asymptotic_k < 1:
            raise ValueError("asymptotic_k must be positive")


def derive_seed(master_seed: int, k: int, purpose: int,
                beta: float | None = None) -> int:
    """Deterministic sub-seed for replicate k and the given purpose."""
    entropy = [int(master_seed), int(k), int(purpose)]
    if beta is not None:
        entropy.append(int(round(beta * 10 ** 9)))
    ss = np.random.SeedSequence(tuple(entropy))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class SingleRunResult:
    replicate: int
    point_seed: int
    graph_stats: DegreeStats
    series: dict                      # name -> ObservableSeries
    asymptotics: dict                 # name -> float
    damaged_node: int | None = None
    trajectory: object = None         # reference Trajectory, on request


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: list

    def ensemble_asymptotic(self, name: str) -> float:
        vals = [r.asymptotics[name] for r in self.runs if name in r.asymptotics]
        if not vals:
            raise KeyError(f"no runs recorded observable {name!r}")
        return float(np.mean(vals))

    def mean_degree(self) -> float:
        return float(np.mean([r.graph_stats.mean for r in self.runs]))


def _initial_state(config: ExperimentConfig, k: int) -> np.ndarray:
    kind = config.init[0]
    if kind == "random_half":
        rng = np.random.default_rng(
            derive_seed(config.master_seed, k, PURPOSE_INIT))
        return rng.integers(0, 2, config.n).astype(np.uint8)
    if kind == "single_active":
        s = np.zeros(config.n, dtype=np.uint8)
        s[config.init[1]] = 1
        return s
    return np.asarray(config.init[1], dtype=np.uint8).copy()


def _damage_node(config: ExperimentConfig, k: int) -> int:
    if config.damage[0] == "node":
        return config.damage[1]
    rng = np.random.default_rng(
        derive_seed(config.master_seed, k, PURPOSE_DAMAGE))
    return int(rng.integers(0, config.n))


def realize_graph(config: ExperimentConfig, k: int):
    """Points and skeleton for replicate k of this configuration."""
    beta_entropy = None if config.share_points_across_beta else config.beta
    point_seed = derive_seed(config.master_seed, k, PURPOSE_POINTS,
                             beta=beta_entropy)
    points = generate_points(config.n, point_seed)
    graph = build_beta_skeleton(points, SkeletonConfig(beta=config.beta))
    return points, graph, point_seed


def run_single(config: ExperimentConfig, k: int, prebuilt=None,
               keep_trajectory: bool = False) -> SingleRunResult:
    """One replicate: realize the graph, run the configured trajectory, and
    attach damage / memoryless-twin series when applicable.

    prebuilt may carry (points, graph, point_seed) so sweeps can reuse the
    realized graph across parameter values.
    """
    if prebuilt is None:
        points, graph, point_seed = realize_graph(config, k)
    else:
        points, graph, point_seed = prebuilt
    rule = parse_rule(config.rule)
    init = _initial_state(config, k)
    traj = run(graph, init, rule, config.memory, config.t_max)

    series = {
        "density": density_series(traj),
        "changing_rate": changing_rate(traj),
    }
    damaged = None
    if config.damage is not None:
        damaged = _damage_node(config, k)
        flipped = init.copy()
        flipped[damaged] ^= 1
        pert = run(graph, flipped, rule, config.memory, config.t_max)
        series["damage"] = damage_series(traj, pert)
    if config.memory.kind != "ahistoric":
        twin = run(graph, init, rule, MemoryModel("ahistoric"), config.t_max)
        series["cross_distance"] = cross_distance(traj, twin)

    k_asy = config.asymptotic_k
    asymptotics = {name: asymptotic(s, k_asy) for name, s in series.items()
                   if len(s.values) >= k_asy}
    return SingleRunResult(replicate=k, point_seed=point_seed,
                           graph_stats=degree_stats(graph), series=series,
                           asymptotics=asymptotics, damaged_node=damaged,
                           trajectory=traj if keep_trajectory else None)


def run_ensemble(config: ExperimentConfig) -> ExperimentResult:
    """n_seeds independent replicates, deterministic in the master seed."""
    runs = [run_single(config, k) for k in range(config.n_seeds)]
    return ExperimentResult(config=config, runs=runs)


@dataclass(frozen=True)
class SweepRow:
    beta: float
    parameter: str
    value: float
    asymptotic_changing_rate: float
    asymptotic_damage: float | None
    mean_degree: float


def sweep(template: ExperimentConfig, parameter: str, values,
          betas=None) -> list:
    """Run an ensemble per (beta, parameter value) and record ensemble-mean
    asymptotic changing rate and damage.

    parameter is "tau" (majority memory of that length) or "alpha".  A
    template without a damage spec gets the default single-node flip at
    node 0, since the sweep reports damage alongside the changing rate.
    """
    if parameter not in ("tau", "alpha"):
        raise ValueError("sweep parameter must be 'tau' or 'alpha'")
    values = list(values)
    if not values:
        raise ValueError("empty sweep range")
    betas = [template.beta] if betas is None else list(betas)
    damage = template.damage if template.damage is not None else ("node", 0)

    rows = []
    for beta in betas:
        base = replace(template, beta=beta, damage=damage)
        # graphs and initial states do not depend on the swept parameter,
        # so realize them once per replicate
        prebuilt = [realize_graph(base, k) for k in range(base.n_seeds)]
        for v in values:
            if parameter == "tau":
                mem = MemoryModel("tau_majority", tau=int(v))
            else:
                mem = MemoryModel("alpha", alpha=float(v))
            cfg = replace(base, memory=mem)
            runs = [run_single(cfg, k, prebuilt=prebuilt[k])
                    for k in range(cfg.n_seeds)]
            res = ExperimentResult(config=cfg, runs=runs)
            rows.append(SweepRow(
                beta=beta,
                parameter=parameter,
                value=float(v),
                asymptotic_changing_rate=res.ensemble_asymptotic("changing_rate"),
                asymptotic_damage=res.ensemble_asymptotic("damage"),
                mean_degree=res.mean_degree(),
            ))
    return rows
