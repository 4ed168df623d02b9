"""Observables over trajectories: density, changing rate, damage spreading,
historic-vs-memoryless distance, and asymptotic levels.

All observables are computed on the state vectors sigma, not on traits, and
every series value lies in [0, 1].  The changing rate is undefined at the
first step, so its series starts at T = 2.
"""

from dataclasses import dataclass

import numpy as np

from .engine import Trajectory

__all__ = [
    "ObservableSeries",
    "density",
    "density_series",
    "changing_rate",
    "damage_series",
    "cross_distance",
    "asymptotic",
]


@dataclass(frozen=True)
class ObservableSeries:
    """values[k] is the observable at step T = t_start + k."""

    name: str
    values: np.ndarray
    t_start: int = 1

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if len(v) and (v.min() < 0.0 or v.max() > 1.0):
            raise ValueError("observable values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    def window(self, t_lo: int, t_hi: int) -> np.ndarray:
        """Values for steps T in [t_lo, t_hi], inclusive."""
        if t_lo < self.t_start or t_hi > self.t_start + len(self.values) - 1:
            raise ValueError("window outside the recorded range")
        return self.values[t_lo - self.t_start:t_hi - self.t_start + 1]


def _states_of(x):
    if isinstance(x, Trajectory):
        return x.states
    return np.ascontiguousarray(getattr(x, "sigma", x), dtype=np.uint8)


def density(states) -> float:
    """Fraction of nodes in state 1 for a single state vector."""
    s = np.ascontiguousarray(getattr(states, "sigma", states), dtype=np.uint8)
    return float(s.mean())


def density_series(trajectory: Trajectory) -> ObservableSeries:
    return ObservableSeries(name="density",
                            values=trajectory.states.mean(axis=1),
                            t_start=1)


def changing_rate(trajectory: Trajectory) -> ObservableSeries:
    """Relative Hamming distance between consecutive state patterns; the
    value at step T compares T against T - 1."""
    st = _states_of(trajectory)
    if st.shape[0] < 2:
        raise ValueError("changing rate needs at least 2 recorded steps")
    vals = (st[1:] != st[:-1]).mean(axis=1)
    return ObservableSeries(name="changing_rate", values=vals, t_start=2)


def _check_comparable(a: Trajectory, b: Trajectory, same_memory: bool):
    if a.states.shape != b.states.shape:
        raise ValueError("trajectories have different shapes")
    if a.graph.n != b.graph.n or not np.array_equal(a.graph.edges, b.graph.edges):
        raise ValueError("trajectories ran on different graphs")
    if a.rule_name != b.rule_name:
        raise ValueError("trajectories used different rules")
    if same_memory and a.memory != b.memory:
        raise ValueError("trajectories used different memory models")


def damage_series(reference: Trajectory, perturbed: Trajectory) -> ObservableSeries:
    """Per-step relative Hamming distance between a reference run and a run
    whose initial configuration was perturbed."""
    _check_comparable(reference, perturbed, same_memory=True)
    vals = (reference.states != perturbed.states).mean(axis=1)
    return ObservableSeries(name="damage", values=vals, t_start=1)


def cross_distance(historic: Trajectory, ahistoric: Trajectory) -> ObservableSeries:
    """Per-step relative Hamming distance between two runs from the same
    initial state under different memory models."""
    _check_comparable(historic, ahistoric, same_memory=False)
    if not np.array_equal(historic.states[0], ahistoric.states[0]):
        raise ValueError("cross distance requires identical initial states")
    vals = (historic.states != ahistoric.states).mean(axis=1)
    return ObservableSeries(name="cross_distance", values=vals, t_start=1)


def asymptotic(series: ObservableSeries, k: int = 10) -> float:
    """Mean of the final k values of the series."""
    if k < 1:
        raise ValueError("k must be positive")
    if len(series.values) < k:
        raise ValueError("series shorter than the asymptotic window")
    return float(series.values[-k:].mean())
