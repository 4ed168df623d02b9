"""Simulation of binary automata with memory on lune-based beta-skeleton
graphs over random planar point sets."""

from .engine import (MajorityNeutral, Parity, StateVector, TotalisticTable,
                     Trajectory, TraitVector, adjacency_csr, parse_rule, run,
                     step)
from .experiments import (ExperimentConfig, ExperimentResult, SingleRunResult,
                          SweepRow, derive_seed, run_ensemble, run_single,
                          sweep)
from .geometry import (DegreeStats, PointSet, SkeletonConfig, SkeletonGraph,
                       brute_force_skeleton, build_beta_skeleton, degree_stats,
                       generate_points, lune_membership)
from .memory import (MemoryModel, critical_alpha, make_memory_state,
                     memory_update, parse_memory_model)
from .metrics import (ObservableSeries, asymptotic, changing_rate,
                      cross_distance, damage_series, density, density_series)

__version__ = "0.1.0"

__all__ = [
    "PointSet", "SkeletonConfig", "SkeletonGraph", "DegreeStats",
    "generate_points", "build_beta_skeleton", "brute_force_skeleton",
    "lune_membership", "degree_stats",
    "MemoryModel", "parse_memory_model", "make_memory_state", "memory_update",
    "critical_alpha",
    "Parity", "MajorityNeutral", "TotalisticTable", "parse_rule",
    "StateVector", "TraitVector", "Trajectory", "adjacency_csr", "step", "run",
    "ObservableSeries", "density", "density_series", "changing_rate",
    "damage_series", "cross_distance", "asymptotic",
    "ExperimentConfig", "SingleRunResult", "ExperimentResult", "SweepRow",
    "derive_seed", "run_single", "run_ensemble", "sweep",
    "__version__",
]
