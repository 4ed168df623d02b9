"""Plain-text serialization: graph files, CSV series, manifests.

All real numbers print with 17 significant digits so files round-trip at
full double precision and reruns of an identical config are byte-identical.
Every CSV starts with a `# config_hash=<sha256>` comment line tying the
file to the effective config that produced it.
"""

import json

import numpy as np

from .geometry import PointSet, SkeletonGraph

__all__ = [
    "fmt17",
    "graph_to_text",
    "graph_from_text",
    "series_csv",
    "trajectory_csv",
    "states_csv",
    "summary_csv",
    "sweep_csv",
    "manifest_json",
]


def fmt17(x) -> str:
    return f"{float(x):.17g}"


def graph_to_text(points: PointSet, graph: SkeletonGraph, beta: float) -> str:
    """Header `n beta seed`, n point lines `id x y`, edge lines `i j`."""
    if graph.n != len(points.coords):
        raise ValueError("point set and graph disagree on n")
    seed = -1 if points.seed is None else int(points.seed)
    lines = [f"{graph.n} {fmt17(beta)} {seed}"]
    for i, (x, y) in enumerate(points.coords):
        lines.append(f"{i} {fmt17(x)} {fmt17(y)}")
    for i, j in graph.edges.tolist():
        lines.append(f"{i} {j}")
    return "\n".join(lines) + "\n"


def graph_from_text(text: str):
    """Inverse of graph_to_text: (PointSet, SkeletonGraph, beta)."""
    rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not rows:
        raise ValueError("empty graph file")
    head = rows[0].split()
    if len(head) != 3:
        raise ValueError(f"bad graph header {rows[0]!r}")
    n, beta, seed = int(head[0]), float(head[1]), int(head[2])
    if len(rows) < 1 + n:
        raise ValueError("graph file truncated before point list")
    coords = np.empty((n, 2), dtype=np.float64)
    for k, row in enumerate(rows[1:1 + n]):
        f = row.split()
        if len(f) != 3 or int(f[0]) != k:
            raise ValueError(f"bad point line {row!r}")
        coords[k] = (float(f[1]), float(f[2]))
    edges = []
    for row in rows[1 + n:]:
        f = row.split()
        if len(f) != 2:
            raise ValueError(f"bad edge line {row!r}")
        edges.append((int(f[0]), int(f[1])))
    points = PointSet(coords=coords, seed=None if seed < 0 else seed)
    graph = SkeletonGraph(n=n, edges=np.array(edges, dtype=np.int64).reshape(-1, 2))
    return points, graph, beta


def _head(config_hash: str, columns: str) -> list:
    return [f"# config_hash={config_hash}", columns]


def series_csv(series, config_hash: str) -> str:
    lines = _head(config_hash, "T,value")
    t = series.t_start
    for k, v in enumerate(series.values):
        lines.append(f"{t + k},{fmt17(v)}")
    return "\n".join(lines) + "\n"


def trajectory_csv(traj, config_hash: str) -> str:
    """One row per step T; the changing rate is undefined at T=1 and the
    field is left empty there."""
    from .metrics import changing_rate, density_series

    dens = density_series(traj).values
    lines = _head(config_hash, "T,density,changing_rate")
    if traj.t_max >= 2:
        cr = changing_rate(traj).values
    else:
        cr = np.empty(0)
    for t in range(1, traj.t_max + 1):
        c = fmt17(cr[t - 2]) if t >= 2 else ""
        lines.append(f"{t},{fmt17(dens[t - 1])},{c}")
    return "\n".join(lines) + "\n"


def states_csv(traj, config_hash: str) -> str:
    """Long-format dump: T,node_id,sigma,trait for every node and step."""
    lines = _head(config_hash, "T,node_id,sigma,trait")
    for t in range(1, traj.t_max + 1):
        sig = traj.states[t - 1]
        tr = traj.traits[t - 1]
        for i in range(traj.n):
            lines.append(f"{t},{i},{int(sig[i])},{int(tr[i])}")
    return "\n".join(lines) + "\n"


def summary_csv(rows, config_hash: str) -> str:
    """rows: (seed, beta, memory_label, observable, value) tuples."""
    lines = _head(config_hash, "seed,beta,memory,observable,asymptotic_value")
    for seed, beta, memory, observable, value in rows:
        lines.append(f"{seed},{fmt17(beta)},{memory},{observable},"
                     f"{fmt17(value)}")
    return "\n".join(lines) + "\n"


def sweep_csv(rows, config_hash: str) -> str:
    lines = _head(config_hash,
                  "beta,parameter,value,asymptotic_changing_rate,"
                  "asymptotic_damage")
    for r in rows:
        val = fmt17(r.value) if r.parameter == "alpha" else str(int(r.value))
        dmg = "" if r.asymptotic_damage is None else fmt17(r.asymptotic_damage)
        lines.append(f"{fmt17(r.beta)},{r.parameter},{val},"
                     f"{fmt17(r.asymptotic_changing_rate)},{dmg}")
    return "\n".join(lines) + "\n"


def manifest_json(config_hash: str, file_names) -> str:
    doc = {
        "config_hash": config_hash,
        "files": [{"name": name, "config_hash": config_hash}
                  for name in sorted(file_names)],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
