import pytest

from cva6perf.config import (DEFAULT_FUS, PRESETS, ConfigError, PipelineConfig, load_config,
                             override, parse_config)


def test_defaults():
    cfg = PipelineConfig()
    assert (cfg.issue_width, cfg.commit_width, cfg.scoreboard_depth) == (1, 1, 8)
    assert cfg.mispredict_penalty == 6
    assert cfg.unit("mul0").latency == 2 and cfg.unit("mul0").stages == 2
    assert cfg.max_latency == 3


def test_single_issue_preset_is_default():
    assert load_config("single_issue") == PipelineConfig()


def test_superscalar_preset():
    cfg = load_config("superscalar")
    assert (cfg.issue_width, cfg.commit_width, cfg.speculative_sb) == (2, 2, True)
    assert cfg.unit("alu1").wb_port == 2


@pytest.mark.parametrize("name", PRESETS)
def test_to_text_round_trip(name):
    cfg = load_config(name)
    assert parse_config(cfg.to_text()) == cfg


def test_parse_units_replace_defaults():
    cfg = parse_config("""
issue_width = 2   # inline comment
[fu.alu0]
class = alu
[fu.mul0]
class = mul
latency = 3
""")
    assert cfg.issue_width == 2
    assert [u.name for u in cfg.fu_table] == ["alu0", "mul0"]
    assert cfg.unit("mul0").latency == 3


@pytest.mark.parametrize("text, match", [
    ("issue_width = 0", "issue_width"),
    ("scoreboard_depth = 7", "even"),
    ("bht_entries = 100", "power of two"),
    ("renaming = yes", "true or false"),
    ("issue_width = two", "integer"),
    ("frobnicate = 1", "unknown global key"),
    ("[fu.a]\nlatency = 2", "missing 'class'"),
    ("[fu.a]\nclass = alu\n[fu.a]\nclass = alu", "duplicate"),
    ("[fu.a]\nclass = alu\ncolour = red", "unknown fu.a key"),
    ("[fu.a]\nclass = fpu", "class"),
    ("[fu a]", "section"),
    ("issue_width 2", "key = value"),
    ("wb_ports = 2\n[fu.a]\nclass = alu\nwb_port = 2", "not declared"),
])
def test_parse_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_error_line_number():
    with pytest.raises(ConfigError) as info:
        parse_config("issue_width = 1\n\nrenaming = maybe\n")
    assert info.value.lineno == 3


def test_override():
    cfg = override(PipelineConfig(), "issue_width", "2")
    assert cfg.issue_width == 2
    cfg = override(cfg, "fu.mul0.latency", "4")
    assert cfg.unit("mul0").latency == 4
    assert PipelineConfig().fu_table == DEFAULT_FUS
    with pytest.raises(ConfigError):
        override(cfg, "fu.nope.latency", "1")
    with pytest.raises(ConfigError):
        override(cfg, "latency", "1")


def test_load_config_path(tmp_path):
    path = tmp_path / "x.cfg"
    path.write_text("commit_width = 2\n")
    assert load_config(path).commit_width == 2
    assert load_config(None) == PipelineConfig()
