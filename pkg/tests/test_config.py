"""Configuration file, defaults, and the ROSA_KB override."""

import json
from pathlib import Path

import pytest

from rosa.config import Config, load_config
from rosa.errors import IoError, ParseError
from rosa.matching import MatchLimits, pair


def test_defaults():
    cfg = load_config(path=None, env={})
    assert cfg.kb_path == Path("kb.rosa.json")
    assert cfg.listen_address == "127.0.0.1:8765"
    assert cfg.default_policy is None
    assert cfg.match_limits == MatchLimits()
    assert cfg.static_dir is None
    assert cfg.host_port() == ("127.0.0.1", 8765)


def test_full_file(tmp_path):
    path = tmp_path / "rosa.config.json"
    path.write_text(json.dumps({
        "kb_path": "base/ferme.rosa.json",
        "listen_address": "0.0.0.0:9000",
        "default_policy": {"threshold": 0.75,
                           "allowed_pairs": [["amande", "champ"]],
                           "forbidden_pairs": []},
        "match_limits": {"max_mappings": 8, "max_cases": 12},
        "static_dir": "ui/dist",
    }))
    cfg = load_config(path, env={})
    assert cfg.kb_path == Path("base/ferme.rosa.json")
    assert cfg.host_port() == ("0.0.0.0", 9000)
    assert cfg.default_policy.threshold == 0.75
    assert pair("champ", "amande") in cfg.default_policy.allowed_pairs
    assert cfg.match_limits == MatchLimits(max_mappings=8, max_cases=12)
    assert cfg.static_dir == Path("ui/dist")


def test_env_overrides_file(tmp_path):
    path = tmp_path / "rosa.config.json"
    path.write_text(json.dumps({"kb_path": "from_file.rosa.json"}))
    cfg = load_config(path, env={"ROSA_KB": "/elsewhere/kb.rosa.json"})
    assert cfg.kb_path == Path("/elsewhere/kb.rosa.json")
    cfg2 = load_config(None, env={"ROSA_KB": "/elsewhere/kb.rosa.json"})
    assert cfg2.kb_path == Path("/elsewhere/kb.rosa.json")


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(IoError):
        load_config(tmp_path / "absent.json", env={})
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ParseError):
        load_config(bad, env={})
    arr = tmp_path / "arr.json"
    arr.write_text("[]")
    with pytest.raises(ParseError):
        load_config(arr, env={})


@pytest.mark.parametrize("doc", [
    {"default_policy": {"threshold": "haut"}},
    {"default_policy": {"threshold": 1.5}},
    {"default_policy": {"allowed_pairs": [["seul"]]}},
    {"default_policy": []},
    {"match_limits": {"max_mappings": 0}},
    {"match_limits": "beaucoup"},
])
def test_bad_values_are_refused(tmp_path, doc):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError):
        load_config(path, env={})


def test_bad_listen_address_caught_on_use():
    cfg = Config(listen_address="pas-un-port")
    with pytest.raises(ParseError):
        cfg.host_port()


def test_unknown_fields_are_refused(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"kb_path": "kb.rosa.json",
                                "listen": "127.0.0.1:9"}))
    with pytest.raises(ParseError, match="unknown field.*listen"):
        load_config(path, env={})
