from pathlib import Path

import pytest

from ctxlex.config import ENV_VAR, ConfigError, PipelineConfig, load_config, parse_config_text, write_config


def test_parse_values_and_comments():
    vals = parse_config_text("# profile\nfreq = 10\npmi=0.005  # inline\n\ndiscriminators = of phone, phone has\n")
    assert vals == {"freq": 10, "pmi": 0.005, "discriminators": ("of phone", "phone has")}


@pytest.mark.parametrize("text,match", [("freq = 1\nfreq = 2", "duplicate"), ("colour = red", "unknown"),
                                        ("freq = ten", "freq"), ("freq = 2.5", "freq"), ("just words", "key = value")])
def test_parse_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config_text(text)


def test_defaults_mirror_mp3_profile():
    cfg = PipelineConfig()
    assert (cfg.freq, cfg.pmi, cfg.cor) == (10, 0.005, 0.05)
    h = cfg.hyperparams
    assert (h.lambda1, h.lambda2, h.lambda3, h.lambda4, h.delta, h.max_iters) == (1, 1, 1, 1, 0.01, 100)


def test_relative_paths_follow_config_file(tmp_path, monkeypatch):
    d = tmp_path / "proj"
    d.mkdir()
    (d / "c.cfg").write_text("corpus = data/c.jsonl\noutput = out\n")
    monkeypatch.chdir(tmp_path)
    cfg = load_config(d / "c.cfg")
    assert cfg.path("corpus") == d.resolve() / "data" / "c.jsonl"
    assert cfg.out_dir == d.resolve() / "out"
    # command-line paths are relative to the working directory instead
    cfg = load_config(d / "c.cfg", {"output": "elsewhere"})
    assert cfg.out_dir == tmp_path.resolve() / "elsewhere"


def test_overrides_win_and_validate(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("lambda3 = 1\nfreq = 4\n")
    cfg = load_config(p, {"lambda3": "0", "freq": None})
    assert cfg.lambda3 == 0.0 and cfg.freq == 4
    with pytest.raises(ConfigError):
        load_config(p, {"cor": "-1"})
    with pytest.raises(ConfigError):
        load_config(p, {"profile": "french"})
    with pytest.raises(ConfigError):
        load_config(p, {"lambda1": "0", "lambda2": "0", "lambda3": "0", "lambda4": "0"})


def test_env_var_default(tmp_path, monkeypatch):
    p = tmp_path / "c.cfg"
    p.write_text("freq = 3\n")
    monkeypatch.setenv(ENV_VAR, str(p))
    assert load_config().freq == 3
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "missing.cfg"))
    with pytest.raises(ConfigError, match="not found"):
        load_config()


def test_require(tmp_path):
    cfg = load_config(None, {"corpus": str(tmp_path / "nope.jsonl")})
    with pytest.raises(ConfigError, match="corpus"):
        cfg.require("corpus")
    with pytest.raises(ConfigError, match="gold"):
        cfg.require("gold")


def test_write_config_roundtrip(tmp_path):
    cfg = PipelineConfig(corpus="c.jsonl", discriminators=("of phone", "phone has"), lambda2=2.0, base_dir=str(tmp_path))
    write_config(cfg, tmp_path / "c.cfg")
    assert load_config(tmp_path / "c.cfg") == cfg


@pytest.mark.parametrize("name", ["mp3.cfg", "phone.cfg", "restaurant.cfg"])
def test_shipped_profiles_parse(name):
    path = Path(__file__).resolve().parents[1] / "profiles" / name
    cfg = load_config(path)
    assert cfg.discriminators
    if name == "mp3.cfg":
        assert (cfg.freq, cfg.pmi, cfg.cor) == (10, 0.005, 0.05)
