"""Flat key=value experiment configs.

Grammar, one setting per line:

    # comment lines and blanks are ignored
    key = value

Recognized keys (all optional, defaults in parentheses):

    n                        node count (1000)
    beta                     skeleton beta (1.0)
    betas                    comma list of betas, sweeps only (falls back to beta)
    rule                     parity | majority (parity)
    memory                   ahistoric | majority:<tau> | majority:full |
                             alpha:<value> | parity3 (ahistoric)
    init                     random_half | single_active:<id> |
                             explicit:<bit string> (random_half)
    damage                   none | node:<id> | random (none)
    t_max                    steps per trajectory (100)
    n_seeds                  ensemble size (11)
    master_seed              root of all randomness (1)
    share_points_across_beta true | false (true)
    asymptotic_k             tail length for asymptotic means (10)
    sweep                    tau:<values> | alpha:<values>, where values are
                             comma-separated numbers or a..b..step ranges,
                             e.g. sweep = tau:1..99..2,100

Unknown keys are errors.  Overrides are key=value strings applied after
file parsing under the same validation.  The canonical form materializes
every key (defaults included), sorts lines, and prints floats with 17
significant digits; its sha256 is the config hash stamped into outputs.
"""

import hashlib

from .experiments import ExperimentConfig
from .memory import parse_memory_model

__all__ = [
    "KNOWN_KEYS",
    "parse_config_text",
    "apply_overrides",
    "build_experiment_config",
    "canonical_text",
    "config_hash",
]

KNOWN_KEYS = frozenset({
    "n", "beta", "betas", "rule", "memory", "init", "damage",
    "t_max", "n_seeds", "master_seed", "share_points_across_beta",
    "asymptotic_k", "sweep",
})

_DEFAULTS = {
    "n": "1000",
    "beta": "1",
    "rule": "parity",
    "memory": "ahistoric",
    "init": "random_half",
    "damage": "none",
    "t_max": "100",
    "n_seeds": "11",
    "master_seed": "1",
    "share_points_across_beta": "true",
    "asymptotic_k": "10",
}


class ConfigError(ValueError):
    pass


def _split_assignment(line: str, where: str) -> tuple:
    if "=" not in line:
        raise ConfigError(f"{where}: expected key=value, got {line!r}")
    key, _, value = line.partition("=")
    key = key.strip()
    value = value.strip()
    if key not in KNOWN_KEYS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    if not value:
        raise ConfigError(f"{where}: empty value for {key!r}")
    return key, value


def parse_config_text(text: str) -> dict:
    """Raw key -> value-string mapping. Later lines win."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = _split_assignment(line, f"line {lineno}")
        out[key] = value
    return out


def apply_overrides(mapping: dict, overrides) -> dict:
    out = dict(mapping)
    for item in overrides or ():
        key, value = _split_assignment(item.strip(), f"override {item!r}")
        out[key] = value
    return out


def _parse_bool(value: str, key: str) -> bool:
    v = value.lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise ConfigError(f"{key} must be true or false, got {value!r}")


def _parse_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def _parse_float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}") from None


def _parse_values(text: str, key: str, as_int: bool) -> list:
    """Comma list where each item is a number or an a..b..step range."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ConfigError(f"{key}: empty item in value list {text!r}")
        if ".." in item:
            parts = item.split("..")
            if len(parts) not in (2, 3):
                raise ConfigError(f"{key}: bad range {item!r}")
            if not as_int:
                raise ConfigError(f"{key}: ranges are integer-only, "
                                  f"got {item!r}")
            lo = _parse_int(parts[0], key)
            hi = _parse_int(parts[1], key)
            step = _parse_int(parts[2], key) if len(parts) == 3 else 1
            if step < 1 or hi < lo:
                raise ConfigError(f"{key}: bad range {item!r}")
            out.extend(range(lo, hi + 1, step))
        else:
            out.append(_parse_int(item, key) if as_int
                       else _parse_float(item, key))
    return out


def _parse_init(value: str):
    if value == "random_half":
        return ("random_half",)
    if value.startswith("single_active:"):
        return ("single_active",
                _parse_int(value[len("single_active:"):], "init"))
    if value.startswith("explicit:"):
        bits = value[len("explicit:"):].strip()
        if bits and set(bits) <= {"0", "1"}:
            return ("explicit", tuple(int(b) for b in bits))
        raise ConfigError(f"explicit init must be a 0/1 string, got {bits!r}")
    raise ConfigError(f"unknown init spec {value!r}")


def _parse_damage(value: str):
    if value == "none":
        return None
    if value == "random":
        return ("random",)
    if value.startswith("node:"):
        return ("node", _parse_int(value[len("node:"):], "damage"))
    raise ConfigError(f"unknown damage spec {value!r}")


def _parse_sweep(value: str):
    param, sep, rest = value.partition(":")
    param = param.strip()
    if not sep or param not in ("tau", "alpha"):
        raise ConfigError(f"sweep must be tau:<values> or alpha:<values>, "
                          f"got {value!r}")
    values = _parse_values(rest, "sweep", as_int=(param == "tau"))
    if not values:
        raise ConfigError("sweep has no values")
    return param, values


def build_experiment_config(mapping: dict):
    """Validated (ExperimentConfig, betas, sweep_or_None) triple.

    betas is the list the sweep iterates; non-sweep commands use
    config.beta directly.
    """
    m = dict(_DEFAULTS)
    m.update(mapping)
    n = _parse_int(m["n"], "n")
    beta = _parse_float(m["beta"], "beta")
    if "betas" in m:
        betas = _parse_values(m["betas"], "betas", as_int=False)
    else:
        betas = [beta]
    try:
        memory = parse_memory_model(m["memory"])
        cfg = ExperimentConfig(
            n=n,
            beta=beta,
            rule=m["rule"],
            memory=memory,
            t_max=_parse_int(m["t_max"], "t_max"),
            n_seeds=_parse_int(m["n_seeds"], "n_seeds"),
            init=_parse_init(m["init"]),
            damage=_parse_damage(m["damage"]),
            master_seed=_parse_int(m["master_seed"], "master_seed"),
            share_points_across_beta=_parse_bool(
                m["share_points_across_beta"], "share_points_across_beta"),
            asymptotic_k=_parse_int(m["asymptotic_k"], "asymptotic_k"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    sweep_spec = _parse_sweep(m["sweep"]) if "sweep" in m else None
    for b in betas:
        if not b > 0:
            raise ConfigError(f"betas entries must be positive, got {b}")
    return cfg, betas, sweep_spec


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def canonical_text(mapping: dict) -> str:
    """Every key materialized, values normalized, lines sorted.

    Two configs that produce the same effective experiment hash alike,
    regardless of comments, ordering, or spelled-out defaults.
    """
    cfg, betas, sweep_spec = build_experiment_config(mapping)
    init = cfg.init
    if init[0] == "random_half":
        init_s = "random_half"
    elif init[0] == "single_active":
        init_s = f"single_active:{init[1]}"
    else:
        init_s = "explicit:" + "".join(str(b) for b in init[1])
    if cfg.damage is None:
        damage_s = "none"
    elif cfg.damage[0] == "random":
        damage_s = "random"
    else:
        damage_s = f"node:{cfg.damage[1]}"
    lines = {
        "n": _fmt(cfg.n),
        "beta": _fmt(float(cfg.beta)),
        "betas": ",".join(_fmt(float(b)) for b in betas),
        "rule": cfg.rule,
        "memory": cfg.memory.label(),
        "init": init_s,
        "damage": damage_s,
        "t_max": _fmt(cfg.t_max),
        "n_seeds": _fmt(cfg.n_seeds),
        "master_seed": _fmt(cfg.master_seed),
        "share_points_across_beta": _fmt(cfg.share_points_across_beta),
        "asymptotic_k": _fmt(cfg.asymptotic_k),
    }
    if sweep_spec is not None:
        param, values = sweep_spec
        joined = ",".join(_fmt(v if param == "alpha" else int(v))
                          for v in values)
        lines["sweep"] = f"{param}:{joined}"
    return "".join(f"{k} = {lines[k]}\n" for k in sorted(lines))


def config_hash(mapping: dict) -> str:
    return hashlib.sha256(canonical_text(mapping).encode()).hexdigest()
