"""HTTP service exposing the simulation pipeline.

Endpoints accept a config (text plus key=value overrides) and return the
produced files as payloads; the caller decides where to write them.  The
service itself never touches the filesystem, so it can run in-process
behind the CLI or standalone under uvicorn.
"""

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import fileio
from .config import (ConfigError, apply_overrides, build_experiment_config,
                     canonical_text, config_hash, parse_config_text)
from .experiments import ExperimentConfig, run_single, sweep
from .geometry import (SkeletonConfig, build_beta_skeleton, degree_stats,
                       generate_points)

__all__ = ["app"]


class ConfigPayload(BaseModel):
    config_text: str = ""
    overrides: list[str] = Field(default_factory=list)


class FilePayload(BaseModel):
    name: str
    content: str


class FilesResponse(BaseModel):
    config_hash: str
    files: list[FilePayload]


class BuildGraphRequest(BaseModel):
    n: int
    beta: float
    seed: int = 0


class BuildGraphResponse(BaseModel):
    file: FilePayload
    n: int
    edge_count: int
    mean_degree: float
    min_degree: int
    max_degree: int


class RunRequest(BaseModel):
    config: ConfigPayload
    replicate: int = 0
    dump_states: bool = False


class EnsembleRequest(BaseModel):
    config: ConfigPayload


class SweepRequest(BaseModel):
    config: ConfigPayload


class ValidateResponse(BaseModel):
    ok: bool
    config_hash: str = ""
    normalized: str = ""
    errors: list[str] = Field(default_factory=list)


app = FastAPI(title="skelsim")


def _effective(payload: ConfigPayload):
    """Parse + override + validate, mapping config faults to HTTP 400."""
    try:
        mapping = parse_config_text(payload.config_text)
        mapping = apply_overrides(mapping, payload.overrides)
        cfg, betas, sweep_spec = build_experiment_config(mapping)
    except ConfigError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return mapping, cfg, betas, sweep_spec


def _single_run_files(cfg: ExperimentConfig, replicate: int, chash: str,
                      dump_states: bool, prefix: str = "") -> list:
    if not 0 <= replicate < cfg.n_seeds:
        raise HTTPException(status_code=400,
                            detail=f"replicate must be in [0, {cfg.n_seeds})")
    res = run_single(cfg, replicate, keep_trajectory=True)
    files = [FilePayload(name=f"{prefix}trajectory.csv",
                         content=fileio.trajectory_csv(res.trajectory, chash))]
    for name in ("damage", "cross_distance"):
        if name in res.series:
            files.append(FilePayload(
                name=f"{prefix}{name}.csv",
                content=fileio.series_csv(res.series[name], chash)))
    if dump_states:
        files.append(FilePayload(name=f"{prefix}states.csv",
                                 content=fileio.states_csv(res.trajectory,
                                                           chash)))
    return files


@app.get("/health")
def health():
    return {"ok": True}


@app.post("/build-graph", response_model=BuildGraphResponse)
def build_graph(req: BuildGraphRequest):
    if req.n < 1 or not req.beta > 0:
        raise HTTPException(status_code=400,
                            detail="need n >= 1 and beta > 0")
    points = generate_points(req.n, req.seed)
    graph = build_beta_skeleton(points, SkeletonConfig(beta=req.beta))
    stats = degree_stats(graph)
    text = fileio.graph_to_text(points, graph, req.beta)
    return BuildGraphResponse(
        file=FilePayload(name="graph.txt", content=text),
        n=graph.n, edge_count=graph.m, mean_degree=stats.mean,
        min_degree=stats.min, max_degree=stats.max)


@app.post("/run", response_model=FilesResponse)
def run_endpoint(req: RunRequest):
    mapping, cfg, _, _ = _effective(req.config)
    chash = config_hash(mapping)
    files = _single_run_files(cfg, req.replicate, chash, req.dump_states)
    return FilesResponse(config_hash=chash, files=files)


@app.post("/damage", response_model=FilesResponse)
def damage_endpoint(req: RunRequest):
    """Single run with the damage protocol forced on.

    A config without a damage spec gets the default single flip at node 0.
    """
    mapping, cfg, _, _ = _effective(req.config)
    if cfg.damage is None:
        mapping = apply_overrides(mapping, ["damage = node:0"])
        cfg, _, _ = build_experiment_config(mapping)
    chash = config_hash(mapping)
    files = _single_run_files(cfg, req.replicate, chash, req.dump_states)
    return FilesResponse(config_hash=chash, files=files)


@app.post("/ensemble", response_model=FilesResponse)
def ensemble_endpoint(req: EnsembleRequest):
    mapping, cfg, _, _ = _effective(req.config)
    chash = config_hash(mapping)
    width = max(2, len(str(cfg.n_seeds - 1)))
    files = []
    summary_rows = []
    for k in range(cfg.n_seeds):
        res = run_single(cfg, k, keep_trajectory=True)
        tag = f"run_{k:0{width}d}_"
        files.append(FilePayload(
            name=f"{tag}trajectory.csv",
            content=fileio.trajectory_csv(res.trajectory, chash)))
        for name in ("damage", "cross_distance"):
            if name in res.series:
                files.append(FilePayload(
                    name=f"{tag}{name}.csv",
                    content=fileio.series_csv(res.series[name], chash)))
        for name in sorted(res.asymptotics):
            summary_rows.append((k, cfg.beta, cfg.memory.label(), name,
                                 res.asymptotics[name]))
    files.append(FilePayload(name="summary.csv",
                             content=fileio.summary_csv(summary_rows, chash)))
    names = [f.name for f in files] + ["manifest.json"]
    files.append(FilePayload(name="manifest.json",
                             content=fileio.manifest_json(chash, names)))
    return FilesResponse(config_hash=chash, files=files)


@app.post("/sweep", response_model=FilesResponse)
def sweep_endpoint(req: SweepRequest):
    mapping, cfg, betas, sweep_spec = _effective(req.config)
    if sweep_spec is None:
        raise HTTPException(status_code=400,
                            detail="config has no sweep = tau:... or "
                                   "alpha:... line")
    chash = config_hash(mapping)
    parameter, values = sweep_spec
    try:
        rows = sweep(cfg, parameter, values, betas=betas)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    files = [FilePayload(name="sweep.csv",
                         content=fileio.sweep_csv(rows, chash))]
    names = [f.name for f in files] + ["manifest.json"]
    files.append(FilePayload(name="manifest.json",
                             content=fileio.manifest_json(chash, names)))
    return FilesResponse(config_hash=chash, files=files)


@app.post("/validate", response_model=ValidateResponse)
def validate_endpoint(payload: ConfigPayload):
    try:
        mapping = parse_config_text(payload.config_text)
        mapping = apply_overrides(mapping, payload.overrides)
        build_experiment_config(mapping)
    except ConfigError as exc:
        return ValidateResponse(ok=False, errors=[str(exc)])
    return ValidateResponse(ok=True, config_hash=config_hash(mapping),
                            normalized=canonical_text(mapping))
