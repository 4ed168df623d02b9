"""Tests for the config grammar, config hashing, and file serialization."""

import json

import numpy as np
import pytest

from skelsim.config import (ConfigError, apply_overrides,
                            build_experiment_config, canonical_text,
                            config_hash, parse_config_text)
from skelsim.engine import Parity, run
from skelsim.fileio import (graph_from_text, graph_to_text, manifest_json,
                            series_csv, states_csv, summary_csv, sweep_csv,
                            trajectory_csv)
from skelsim.geometry import SkeletonConfig, build_beta_skeleton, \
    generate_points
from skelsim.memory import MemoryModel
from skelsim.metrics import ObservableSeries


class TestGrammar:
    def test_comments_blanks_and_spacing(self):
        m = parse_config_text("""
        # full line comment
        n = 20   # trailing comment

        beta=1.5
        """)
        assert m == {"n": "20", "beta": "1.5"}

    def test_later_lines_win(self):
        m = parse_config_text("n = 5\nn = 9\n")
        assert m["n"] == "9"

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("frobnicate = yes\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="key=value"):
            parse_config_text("just words\n")

    def test_empty_value(self):
        with pytest.raises(ConfigError, match="empty value"):
            parse_config_text("n =\n")

    def test_overrides_apply_after_file(self):
        m = apply_overrides({"n": "5"}, ["n=7", "beta=2.0"])
        assert m == {"n": "7", "beta": "2.0"}

    def test_override_validation(self):
        with pytest.raises(ConfigError):
            apply_overrides({}, ["bogus=1"])


class TestBuildExperiment:
    def test_defaults(self):
        cfg, betas, sw = build_experiment_config({})
        assert cfg.n == 1000 and cfg.beta == 1.0 and cfg.n_seeds == 11
        assert cfg.t_max == 100 and cfg.memory.kind == "ahistoric"
        assert cfg.damage is None and betas == [1.0] and sw is None

    def test_full_parse(self):
        m = parse_config_text(
            "n=30\nbeta=2\nrule=majority\nmemory=alpha:0.7\n"
            "init=single_active:3\ndamage=node:4\nt_max=50\nn_seeds=2\n"
            "master_seed=11\nshare_points_across_beta=false\n"
            "asymptotic_k=5\nsweep=tau:1..5..2\nbetas=0.9,2\n")
        cfg, betas, sw = build_experiment_config(m)
        assert cfg.rule == "majority"
        assert cfg.memory == MemoryModel("alpha", alpha=0.7)
        assert cfg.init == ("single_active", 3)
        assert cfg.damage == ("node", 4)
        assert cfg.share_points_across_beta is False
        assert betas == [0.9, 2.0]
        assert sw == ("tau", [1, 3, 5])

    def test_range_with_extra_values(self):
        _, _, sw = build_experiment_config(
            {"sweep": "tau:1..9..2,50,100"})
        assert sw == ("tau", [1, 3, 5, 7, 9, 50, 100])

    def test_alpha_sweep_floats(self):
        _, _, sw = build_experiment_config({"sweep": "alpha:0.1,0.5,1"})
        assert sw == ("alpha", [0.1, 0.5, 1.0])

    def test_rejected_values(self):
        for bad in ({"n": "x"}, {"beta": "-1"}, {"memory": "majority:0"},
                    {"init": "explicit:2"}, {"damage": "node:-2"},
                    {"sweep": "alpha:0.1..0.5"}, {"sweep": "tau:9..1"},
                    {"betas": "1,0"}, {"share_points_across_beta": "maybe"}):
            with pytest.raises(ConfigError):
                build_experiment_config(bad)


class TestConfigHash:
    def test_invariant_to_spelling(self):
        a = config_hash(parse_config_text("n = 100\nbeta = 2.0\n"))
        b = config_hash(parse_config_text("# hi\nbeta=2\nn=100\nrule=parity\n"))
        assert a == b

    def test_sensitive_to_content(self):
        a = config_hash({"n": "100"})
        b = config_hash({"n": "101"})
        assert a != b

    def test_canonical_text_is_sorted_and_total(self):
        text = canonical_text({"memory": "majority:9"})
        lines = [ln for ln in text.splitlines() if ln]
        assert lines == sorted(lines)
        keys = {ln.split(" = ")[0] for ln in lines}
        assert {"n", "beta", "betas", "rule", "memory", "init", "damage",
                "t_max", "n_seeds", "master_seed",
                "share_points_across_beta", "asymptotic_k"} <= keys

    def test_canonical_text_reparses_to_same_hash(self):
        m = parse_config_text("memory=alpha:0.6\nsweep=tau:1..5..2\n")
        h = config_hash(m)
        again = parse_config_text(canonical_text(m))
        assert config_hash(again) == h


class TestGraphFile:
    def test_roundtrip_exact(self):
        pts = generate_points(25, 3)
        g = build_beta_skeleton(pts, SkeletonConfig(beta=0.9))
        text = graph_to_text(pts, g, 0.9)
        p2, g2, beta = graph_from_text(text)
        assert beta == 0.9
        assert p2.seed == 3
        assert np.array_equal(p2.coords, pts.coords)
        assert np.array_equal(g2.edges, g.edges)
        assert graph_to_text(p2, g2, beta) == text

    def test_unseeded_points_roundtrip(self):
        pts = generate_points(5, 1)
        bare = type(pts)(coords=pts.coords, seed=None)
        g = build_beta_skeleton(bare, SkeletonConfig(beta=1.0))
        text = graph_to_text(bare, g, 1.0)
        assert text.splitlines()[0].endswith(" -1")
        p2, _, _ = graph_from_text(text)
        assert p2.seed is None

    def test_malformed_files(self):
        for bad in ("", "1 2\n", "2 1.0 0\n0 0.1 0.2\n", "1 1.0 0\n7 0.1 0.2\n"):
            with pytest.raises(ValueError):
                graph_from_text(bad)


class TestCsvEmitters:
    def test_series_csv(self):
        s = ObservableSeries(name="damage", values=np.array([0.25, 0.5]),
                             t_start=2)
        text = series_csv(s, "abc123")
        assert text.splitlines() == ["# config_hash=abc123", "T,value",
                                     "2,0.25", "3,0.5"]

    def test_trajectory_csv_blank_rate_at_first_step(self):
        pts = generate_points(10, 0)
        g = build_beta_skeleton(pts, SkeletonConfig(beta=1.0))
        traj = run(g, np.zeros(10, dtype=np.uint8), Parity(),
                   MemoryModel("ahistoric"), 3)
        lines = trajectory_csv(traj, "h").splitlines()
        assert lines[1] == "T,density,changing_rate"
        assert lines[2] == "1,0,"
        assert lines[3].startswith("2,0,0")

    def test_states_csv_layout(self):
        pts = generate_points(4, 0)
        g = build_beta_skeleton(pts, SkeletonConfig(beta=1.0))
        init = np.array([1, 0, 0, 1], dtype=np.uint8)
        traj = run(g, init, Parity(), MemoryModel("ahistoric"), 2)
        lines = states_csv(traj, "h").splitlines()
        assert lines[1] == "T,node_id,sigma,trait"
        assert lines[2] == "1,0,1,1"
        assert len(lines) == 2 + 2 * 4

    def test_summary_and_sweep_csv(self):
        text = summary_csv([(0, 1.0, "majority:3", "damage", 0.5)], "h")
        assert text.splitlines()[-1] == "0,1,majority:3,damage,0.5"
        from skelsim.experiments import SweepRow
        row = SweepRow(beta=2.0, parameter="tau", value=19,
                       asymptotic_changing_rate=0.05,
                       asymptotic_damage=0.125, mean_degree=2.5)
        text = sweep_csv([row], "h")
        assert text.splitlines()[-1] == "2,tau,19,0.050000000000000003,0.125"

    def test_manifest_lists_files_sorted(self):
        doc = json.loads(manifest_json("hash", ["b.csv", "a.csv"]))
        assert [f["name"] for f in doc["files"]] == ["a.csv", "b.csv"]
        assert doc["config_hash"] == "hash"
