import pytest

from gridrd.config import Config, ConfigError, dump_config, load_config, parse_config
from gridrd.registry import TopologySpec
from gridrd.simkern import LatencyModel


class TestParse:
    def test_empty_text_gives_calibrated_defaults(self):
        cfg = parse_config("")
        assert cfg == Config()
        assert cfg.latency.t_reg == 0.06006
        assert cfg.latency.t_user == 0.06006
        assert cfg.latency.t_ws == 1.890
        assert cfg.latency.t_registry == 1.716
        assert cfg.latency.t_hop == 0.5
        assert cfg.ttl == 3600.0
        assert cfg.latency.jitter_enabled

    def test_comments_and_blanks_ignored(self):
        cfg = parse_config("# a comment\n\nt_ws = 2.0  # trailing\n")
        assert cfg.latency.t_ws == 2.0

    def test_negative_latency_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("t_ws = -1")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config("t_sw = 1.0")

    def test_unparseable_value_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("t_ws = fast")
        with pytest.raises(ConfigError):
            parse_config("jitter_enabled = maybe")
        with pytest.raises(ConfigError):
            parse_config("just some words")

    def test_ttl_must_be_positive(self):
        with pytest.raises(ConfigError):
            parse_config("ttl = 0")

    def test_topology_shapes(self):
        cfg = parse_config("topology.depth = 3\ntopology.branching = 2\n")
        assert cfg.topology == TopologySpec(depth=3, branching=2)
        cfg = parse_config("topology.zones = grid, ca.grid, us.grid\n")
        assert cfg.topology == TopologySpec(zones=("grid", "ca.grid", "us.grid"))
        with pytest.raises(ConfigError):
            parse_config("topology.depth = 2\ntopology.zones = a\n")

    def test_cache_capacity(self):
        assert parse_config("cache_capacity = none").cache_capacity is None
        assert parse_config("cache_capacity = 5").cache_capacity == 5
        with pytest.raises(ConfigError):
            parse_config("cache_capacity = -1")

    def test_policy_view(self):
        cfg = parse_config("ttl = 60\nsummary_pruning = false\n")
        assert cfg.policy.ttl == 60.0
        assert not cfg.policy.summary_pruning


class TestRoundTrip:
    @pytest.mark.parametrize(
        "cfg",
        [
            Config(),
            Config(latency=LatencyModel(t_ws=2.25, jitter_enabled=False), ttl=12.5),
            Config(topology=TopologySpec(depth=4, branching=3), cache_capacity=7),
            Config(topology=TopologySpec(zones=("grid", "ca.grid"))),
        ],
    )
    def test_dump_then_parse_is_identity(self, cfg):
        assert parse_config(dump_config(cfg)) == cfg

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("t_hop = 0.25\n", encoding="utf-8")
        assert load_config(path).latency.t_hop == 0.25

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.cfg")
