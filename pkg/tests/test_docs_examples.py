"""The committed docs stay in lockstep with the code that generates them."""

import json
from pathlib import Path

import jsonschema
import pytest

from rosa.fixtures import desk_kb, minimal_kb
from rosa.reports import dumps_report, match_report
from rosa.storage import dumps_kb, load_kb

DOCS = Path(__file__).parent.parent / "docs"
GOLDEN = Path(__file__).parent / "golden"


def test_desk_example_is_current():
    committed = (DOCS / "examples" / "desk.rosa.json").read_text("utf-8")
    assert committed == dumps_kb(desk_kb())


def test_minimal_example_is_current():
    committed = (DOCS / "examples" / "minimal.rosa.json").read_text("utf-8")
    assert committed == dumps_kb(minimal_kb())


@pytest.mark.parametrize("name", ["desk.rosa.json", "minimal.rosa.json"])
def test_examples_load_strictly(name):
    kb = load_kb(DOCS / "examples" / name)
    assert kb.cases


@pytest.mark.parametrize("name", ["desk.rosa.json", "minimal.rosa.json"])
def test_examples_validate_against_schema(name):
    schema = json.loads((DOCS / "kb.schema.json").read_text("utf-8"))
    doc = json.loads((DOCS / "examples" / name).read_text("utf-8"))
    jsonschema.validate(doc, schema,
                        cls=jsonschema.validators.Draft202012Validator)


def test_schema_catches_shape_errors():
    schema = json.loads((DOCS / "kb.schema.json").read_text("utf-8"))
    doc = json.loads((DOCS / "examples" / "minimal.rosa.json").read_text("utf-8"))
    doc["policy"]["threshold"] = 1.5
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema,
                            cls=jsonschema.validators.Draft202012Validator)


def test_golden_match_report_is_current():
    committed = (GOLDEN / "match_f7.json").read_text("utf-8")
    assert committed == dumps_report(match_report(desk_kb(), "f7"))


def test_format_doc_names_every_top_level_key():
    text = (DOCS / "kb_file_format.md").read_text("utf-8")
    for key in json.loads((DOCS / "examples" / "minimal.rosa.json")
                          .read_text("utf-8")):
        assert f"`{key}`" in text, key


UI_FIXTURES = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures"


def _ui_client():
    from fastapi.testclient import TestClient

    from rosa.api import KbStore, create_app

    store = KbStore(Path("unused.rosa.json"), desk_kb())
    return TestClient(create_app(store))


def _canonical(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def test_ui_match_fixture_equals_golden():
    assert (UI_FIXTURES / "match_f7.json").read_bytes() == \
        (GOLDEN / "match_f7.json").read_bytes()


def test_ui_kb_fixture_is_current():
    committed = (UI_FIXTURES / "kb.json").read_text("utf-8")
    assert committed == _canonical(_ui_client().get("/api/kb").json())


@pytest.mark.parametrize("graph_id", ["f1", "f5", "f7"])
def test_ui_graph_fixtures_are_current(graph_id):
    committed = (UI_FIXTURES / f"graph_{graph_id}.json").read_text("utf-8")
    live = _ui_client().get(f"/api/graphs/{graph_id}").json()
    assert committed == _canonical(live)
