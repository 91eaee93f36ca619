import pytest

from srta_sim.config import SEED_ENV, ConfigError, ScenarioConfig, load, parse


def test_defaults():
    cfg = ScenarioConfig()
    assert (cfg.width, cfg.delta_t, cfg.protocol, cfg.format) == (128, 10, "srta", "json")


def test_parse_file_with_comments_and_aliases():
    text = "# scenario\nprotocol = improved\ndelta-t = 4  # ticks\nw = 64\nseed = 0x10\n"
    assert parse(text) == {"protocol": "improved", "delta_t": 4, "width": 64, "seed": 16}


@pytest.mark.parametrize("text", ["nonsense", "colour = red", "seed = twelve"])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse(text)


@pytest.mark.parametrize("kw", [dict(width=7), dict(delta_t=-1), dict(protocol="x"),
                                dict(trials=0), dict(format="xml"), dict(n_tags=0),
                                dict(hash_algorithm="nope")])
def test_validation(kw):
    with pytest.raises(ConfigError):
        ScenarioConfig(**kw)


def test_precedence(tmp_path, monkeypatch):
    path = tmp_path / "s.cfg"
    path.write_text("seed = 5\ntrials = 7\n")
    monkeypatch.setenv(SEED_ENV, "3")
    assert load().seed == 3
    assert load(path).seed == 5
    cfg = load(path, seed=9, trials=None)
    assert (cfg.seed, cfg.trials) == (9, 7)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load(tmp_path / "absent.cfg")
