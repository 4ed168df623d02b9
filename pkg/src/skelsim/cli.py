"""Command-line front end.

Every subcommand is a thin client of the HTTP service: by default the app
is mounted in-process (no socket), and --server http://host:port sends the
same requests to a remote instance instead.  The service returns file
payloads; this process is the single writer of actual files.
"""

import argparse
import asyncio
import pathlib
import sys

import httpx


class CliError(Exception):
    pass


def _read_config(path) -> str:
    if path is None:
        return ""
    p = pathlib.Path(path)
    if not p.is_file():
        raise CliError(f"config file not found: {p}")
    return p.read_text()


async def _post(server, route: str, payload: dict) -> dict:
    if server:
        client = httpx.AsyncClient(base_url=server, timeout=None)
    else:
        from .service import app
        client = httpx.AsyncClient(transport=httpx.ASGITransport(app=app),
                                   base_url="http://skelsim", timeout=None)
    try:
        async with client:
            resp = await client.post(route, json=payload)
    except httpx.HTTPError as exc:
        raise CliError(f"request to {route} failed: {exc}") from None
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise CliError(f"{route} returned {resp.status_code}: {detail}")
    return resp.json()


def _call(server, route, payload) -> dict:
    return asyncio.run(_post(server, route, payload))


def _config_payload(args) -> dict:
    return {"config_text": _read_config(args.config),
            "overrides": args.override or []}


def _write_files(out_dir, files) -> None:
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for f in files:
        path = out / f["name"]
        path.write_text(f["content"])
        print(f"wrote {path}")


def _cmd_build_graph(args) -> int:
    doc = _call(args.server, "/build-graph",
                {"n": args.n, "beta": args.beta, "seed": args.seed})
    out = pathlib.Path(args.out)
    if out.parent != pathlib.Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(doc["file"]["content"])
    print(f"wrote {out}")
    print(f"n={doc['n']} edges={doc['edge_count']} "
          f"mean_degree={doc['mean_degree']:.4f} "
          f"degree_range=[{doc['min_degree']},{doc['max_degree']}]")
    return 0


def _cmd_run(args, route: str) -> int:
    payload = {"config": _config_payload(args),
               "replicate": args.replicate,
               "dump_states": args.dump_states}
    doc = _call(args.server, route, payload)
    _write_files(args.out, doc["files"])
    print(f"config_hash={doc['config_hash']}")
    return 0


def _cmd_batch(args, route: str) -> int:
    doc = _call(args.server, route, {"config": _config_payload(args)})
    _write_files(args.out, doc["files"])
    print(f"config_hash={doc['config_hash']}")
    return 0


def _cmd_validate(args) -> int:
    doc = _call(args.server, "/validate", _config_payload(args))
    if not doc["ok"]:
        for err in doc["errors"]:
            print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"config_hash={doc['config_hash']}")
    sys.stdout.write(doc["normalized"])
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_config_opts(p) -> None:
    p.add_argument("--config", help="config file (flat key=value lines)")
    p.add_argument("--override", action="append", metavar="KEY=VALUE",
                   help="override a config key; repeatable")
    p.add_argument("--out", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skelsim",
        description="beta-skeleton automata with memory: build graphs, run "
                    "simulations, ensembles, and parameter sweeps")
    parser.add_argument("--server", metavar="URL",
                        help="send requests to a running service instead of "
                             "the in-process app")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("build-graph", help="construct one skeleton graph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--beta", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="graph.txt", help="output graph file")

    for name, hlp in (("run", "single simulation (replicate of an ensemble)"),
                      ("damage", "single simulation with a damage pair")):
        p = sub.add_parser(name, help=hlp)
        _add_config_opts(p)
        p.add_argument("--replicate", type=int, default=0,
                       help="which ensemble replicate to run")
        p.add_argument("--dump-states", action="store_true",
                       help="also emit the long-format state dump")

    e = sub.add_parser("ensemble", help="run all replicates, emit summary")
    _add_config_opts(e)

    s = sub.add_parser("sweep", help="parameter sweep over tau or alpha")
    _add_config_opts(s)

    v = sub.add_parser("validate", help="check a config without running")
    v.add_argument("--config", help="config file (flat key=value lines)")
    v.add_argument("--override", action="append", metavar="KEY=VALUE")

    srv = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "build-graph":
            return _cmd_build_graph(args)
        if args.command == "run":
            return _cmd_run(args, "/run")
        if args.command == "damage":
            return _cmd_run(args, "/damage")
        if args.command == "ensemble":
            return _cmd_batch(args, "/ensemble")
        if args.command == "sweep":
            return _cmd_batch(args, "/sweep")
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_serve(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
