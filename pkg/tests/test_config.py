import pytest

from bundlebench.config import DEFAULT_TAU, RunConfig, build_config, load_config_file, parse_tau
from bundlebench.errors import ConfigError


def test_defaults():
    cfg = build_config({})
    assert cfg.algebra == "A1"
    assert cfg.j is None
    assert cfg.tau == DEFAULT_TAU
    assert cfg.tol("rll") == 1e-8


def test_parse_tau():
    assert parse_tau("0.2, 1.1") == complex(0.2, 1.1)
    for bad in ("1.5", "a,b", "1,2,3"):
        with pytest.raises(ConfigError):
            parse_tau(bad)


def test_flags_override_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# sweep settings\n"
        "algebra = A3\n"
        "class = 2\n"
        "seed = 11   # trailing comment\n"
        "tol-rll = 1e-7\n"
        "tau = 0.1, 1.2\n",
        encoding="utf-8",
    )
    cfg = build_config({"seed": 3, "algebra": None}, path)
    assert cfg.algebra == "A3"
    assert cfg.j == 2
    assert cfg.seed == 3
    assert cfg.tau == complex(0.1, 1.2)
    assert cfg.tol("rll") == 1e-7
    assert cfg.tol("cybe") == 1e-8


def test_class_default_in_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("class = default\n", encoding="utf-8")
    assert load_config_file(path) == {"class": None}


@pytest.mark.parametrize("text", ["colour = red\n", "tol_bogus = 1\n", "seed = seven\n", "algebra A3\n"])
def test_bad_config_lines(tmp_path, text):
    path = tmp_path / "run.conf"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config_file(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        build_config({}, tmp_path / "absent.conf")


@pytest.mark.parametrize("kw", [
    {"tau": complex(0.0, 0.05)},
    {"samples": 0},
    {"j": -1},
    {"tolerances": {"rll": 0.0}},
])
def test_validation(kw):
    with pytest.raises(ConfigError):
        RunConfig(**kw).validate()


def test_to_dict_is_plain():
    d = RunConfig(algebra="D5", j=1).to_dict()
    assert d["class"] == 1
    assert d["tau"] == [0.3, 1.5]
    assert list(d["tolerances"]) == sorted(d["tolerances"])
