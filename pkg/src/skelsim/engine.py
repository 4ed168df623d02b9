"""Synchronous evolution of binary automata on skeleton graphs.

Each step first folds the current states into every node's memory to obtain
the trait vector, then applies the transition rule to the neighbor sums of
those traits.  The sum never includes the node itself.  Rules:

- parity: next state is the mod-2 sum of neighbor traits (an isolated node
  goes to 0);
- majority with neutral ties: 1 if the neighbor traits hold a strict
  majority of ones, 0 on a strict majority of zeros, and the node keeps its
  current state on a tie (so an isolated node never changes);
- an explicit totalistic table indexed by (neighbor sum, degree, current
  state), which can encode both of the above.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .geometry import SkeletonGraph
from .memory import MemoryModel, make_memory_state

__all__ = [
    "Parity",
    "MajorityNeutral",
    "TotalisticTable",
    "parse_rule",
    "StateVector",
    "TraitVector",
    "Trajectory",
    "adjacency_csr",
    "step",
    "run",
]


class Parity:
    name = "parity"

    def apply(self, nbr_sum, degrees, current):
        return (nbr_sum & 1).astype(np.uint8)


class MajorityNeutral:
    name = "majority"

    def apply(self, nbr_sum, degrees, current):
        return np.where(2 * nbr_sum > degrees, 1,
                        np.where(2 * nbr_sum < degrees, 0, current)).astype(np.uint8)


class TotalisticTable:
    """next = table[neighbor_sum, degree, current_state]."""

    name = "table"

    def __init__(self, table):
        t = np.asarray(table, dtype=np.uint8)
        if t.ndim != 3 or t.shape[2] != 2 or (t > 1).any():
            raise ValueError("table must be (max_sum+1, max_degree+1, 2) binary")
        self.table = t

    @classmethod
    def from_function(cls, fn, max_degree):
        t = np.zeros((max_degree + 1, max_degree + 1, 2), dtype=np.uint8)
        for s in range(max_degree + 1):
            for k in range(max_degree + 1):
                for cur in (0, 1):
                    t[s, k, cur] = 1 if fn(s, k, cur) else 0
        return cls(t)

    @classmethod
    def parity(cls, max_degree):
        return cls.from_function(lambda s, k, cur: s % 2 == 1, max_degree)

    @classmethod
    def majority_neutral(cls, max_degree):
        return cls.from_function(
            lambda s, k, cur: 1 if 2 * s > k else (0 if 2 * s < k else cur),
            max_degree)

    def apply(self, nbr_sum, degrees, current):
        return self.table[nbr_sum, degrees, current]


def parse_rule(text: str):
    t = text.strip()
    if t == "parity":
        return Parity()
    if t == "majority":
        return MajorityNeutral()
    raise ValueError(f"unknown rule: {text!r}")


@dataclass(frozen=True)
class StateVector:
    sigma: np.ndarray
    step_index: int = 1

    def __post_init__(self):
        s = np.ascontiguousarray(self.sigma, dtype=np.uint8)
        if s.ndim != 1 or (s > 1).any():
            raise ValueError("sigma must be a flat binary vector")
        if self.step_index < 1:
            raise ValueError("step_index starts at 1")
        object.__setattr__(self, "sigma", s)


@dataclass(frozen=True)
class TraitVector:
    s: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.s, dtype=np.uint8)
        if v.ndim != 1 or (v > 1).any():
            raise ValueError("traits must be a flat binary vector")
        object.__setattr__(self, "s", v)


@dataclass
class Trajectory:
    """states[t] is the configuration at step T = t+1; traits[t] is the
    trait vector derived from history up to that same step, so
    states[t+1] = rule(traits[t]) for every recorded t."""

    graph: SkeletonGraph
    rule_name: str
    memory: MemoryModel
    states: np.ndarray          # (t_max, n) uint8
    traits: np.ndarray          # (t_max, n) uint8
    initial: np.ndarray = field(default=None)

    @property
    def t_max(self) -> int:
        return self.states.shape[0]

    @property
    def n(self) -> int:
        return self.states.shape[1]


def adjacency_csr(graph: SkeletonGraph) -> sp.csr_matrix:
    e = graph.edges
    if not len(e):
        return sp.csr_matrix((graph.n, graph.n), dtype=np.int64)
    i = np.concatenate([e[:, 0], e[:, 1]])
    j = np.concatenate([e[:, 1], e[:, 0]])
    data = np.ones(len(i), dtype=np.int64)
    return sp.csr_matrix((data, (i, j)), shape=(graph.n, graph.n))


def step(graph: SkeletonGraph, traits, current, rule, adjacency=None):
    """One synchronous transition from the given trait vector.

    traits and current may be raw arrays or StateVector-like objects with a
    .sigma attribute.  The optional precomputed adjacency avoids rebuilding
    the sparse matrix in hot loops.
    """
    tr = np.ascontiguousarray(getattr(traits, "s", getattr(traits, "sigma", traits)),
                              dtype=np.uint8)
    cur = np.ascontiguousarray(getattr(current, "sigma", current), dtype=np.uint8)
    if tr.shape != (graph.n,) or cur.shape != (graph.n,):
        raise ValueError("vector length does not match graph size")
    adj = adjacency_csr(graph) if adjacency is None else adjacency
    nbr_sum = adj @ tr.astype(np.int64)
    return rule.apply(nbr_sum, graph.degrees, cur)


def run(graph: SkeletonGraph, initial, rule, memory: MemoryModel,
        t_max: int) -> Trajectory:
    """Evolve the automaton for t_max recorded steps (T = 1 .. t_max).

    T = 1 is the initial configuration.  Per step: fold current states into
    memory, read traits, then apply the rule synchronously.  Fully
    deterministic.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    init = np.ascontiguousarray(getattr(initial, "sigma", initial), dtype=np.uint8)
    if init.shape != (graph.n,):
        raise ValueError("initial state length does not match graph size")
    if (init > 1).any():
        raise ValueError("states must be binary")

    n = graph.n
    adj = adjacency_csr(graph)
    degrees = graph.degrees
    mem = make_memory_state(memory, n)
    states = np.empty((t_max, n), dtype=np.uint8)
    traits = np.empty((t_max, n), dtype=np.uint8)
    states[0] = init
    sigma = init.copy()
    for t in range(t_max):
        tr = mem.update(sigma)
        traits[t] = tr
        if t + 1 < t_max:
            nbr_sum = adj @ tr.astype(np.int64)
            sigma = rule.apply(nbr_sum, degrees, sigma)
            states[t + 1] = sigma
    return Trajectory(graph=graph, rule_name=rule.name, memory=memory,
                      states=states, traits=traits, initial=init.copy())
