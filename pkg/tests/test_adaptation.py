"""Substitutional adaptation and the accept/reject review ratchet."""

from fractions import Fraction

import pytest

from rosa.adaptation import Decision, ReviewVerdict, adapt, record_review
from rosa.cases import CaseStatus, render_explanation
from rosa.errors import (
    IllegalTransitionError,
    InvalidMappingError,
    StaleVersionError,
    UnknownCaseError,
    UnknownGraphError,
    UnknownMatchError,
)
from rosa.matching import Mapping, MatchResult, retrieve


def result_for(kb, case_id, target_id, mapping):
    return MatchResult(case_id, target_id, mapping, Fraction(0), {})


def identity_mapping(kb, case_id):
    return Mapping(tuple((v, v) for v in kb.case(case_id).vertex_set))


F7_MAPPING = Mapping((("e_prairie", "e7_prairie"), ("e_cereales", "e7_cereales"),
                      ("e_ruisseau", "e7_rui1"), ("r_isole", "r7_isole")))


def test_identity_adaptation_reproduces_rendered_text(desk):
    m = identity_mapping(desk, "c_fig2")
    adapted = adapt(desk, result_for(desk, "c_fig2", "f1", m))
    assert adapted.text == render_explanation(desk, desk.case("c_fig2"))
    assert adapted.unresolved == ()
    assert adapted.case_id == "c_fig2"
    assert adapted.mapping == m


def test_adaptation_changes_exactly_the_placeholder_spans(desk):
    template = desk.case("c_fig2").explanation
    adapted = adapt(desk, result_for(desk, "c_fig2", "f7", F7_MAPPING))
    # rebuild by hand from the template and the target labels
    expected = (template
                .replace("{v:e_prairie}", "prairie")
                .replace("{v:e_cereales}", "céréales")
                .replace("{v:e_ruisseau}", "ruisseau"))
    assert adapted.text == expected
    assert "{v:" not in adapted.text


def test_partial_mapping_keeps_spans_and_reports_them(desk):
    partial = Mapping((("e_prairie", "e7_prairie"),))
    adapted = adapt(desk, result_for(desk, "c_fig2", "f7", partial))
    assert "{v:e_cereales}" in adapted.text
    assert "{v:e_ruisseau}" in adapted.text
    assert "prairie" in adapted.text
    assert adapted.unresolved == ("e_cereales", "e_ruisseau")


def test_placeholder_free_explanation_passes_through(desk):
    kb, case = desk.add_case("f2", {"e_parc"}, "aucun renvoi ici")
    adapted = adapt(kb, result_for(kb, case.id, "f2",
                                   identity_mapping(kb, case.id)))
    assert adapted.text == "aucun renvoi ici"
    assert adapted.unresolved == ()


def test_adapt_rejects_unknown_references(desk):
    m = identity_mapping(desk, "c_fig2")
    with pytest.raises(UnknownCaseError):
        adapt(desk, result_for(desk, "ghost", "f1", m))
    with pytest.raises(UnknownGraphError):
        adapt(desk, result_for(desk, "c_fig2", "ghost", m))
    with pytest.raises(InvalidMappingError):
        adapt(desk, result_for(desk, "c_fig2", "f7",
                               Mapping((("e_prairie", "nowhere"),))))


def test_verdict_coerces_decision_and_guards_edited_text(desk):
    match = result_for(desk, "c_fig2", "f7", F7_MAPPING)
    v = ReviewVerdict(match, "accept", edited_text="texte")
    assert v.decision is Decision.ACCEPT
    with pytest.raises(ValueError):
        ReviewVerdict(match, "reject", edited_text="texte")
    with pytest.raises(ValueError):
        ReviewVerdict(match, "maybe")


def test_reject_only_argues(desk):
    match = result_for(desk, "c_fig2", "f7", F7_MAPPING)
    verdict = ReviewVerdict(match, Decision.REJECT, note="pas la même logique",
                            reviewer="jeanne", timestamp="2026-01-01T00:00:00Z")
    kb, created = record_review(desk, verdict)
    assert created is None
    assert kb.version == desk.version + 1
    assert set(kb.cases) == set(desk.cases)
    assert kb.case("c_fig2").status is desk.case("c_fig2").status
    note = kb.case("c_fig2").notes[-1]
    assert note == ("[2026-01-01T00:00:00Z] jeanne: appariement vers f7 "
                    "rejeté: pas la même logique")


def test_reject_without_note_still_leaves_a_trace(desk):
    kb, _ = record_review(desk, ReviewVerdict(
        result_for(desk, "c_fig2", "f7", F7_MAPPING), Decision.REJECT))
    assert "rejeté" in kb.case("c_fig2").notes[-1]


def test_accept_creates_target_case_and_promotes_source(desk):
    match = result_for(desk, "c_fig2", "f7", F7_MAPPING)
    kb, created = record_review(desk, ReviewVerdict(
        match, Decision.ACCEPT, reviewer="jeanne",
        timestamp="2026-01-01T00:00:00Z", expected_version=desk.version))
    assert created is not None
    assert created.graph_id == "f7"
    # the closure pulls the second stream of r7_isole in as well
    assert created.vertex_set == frozenset(
        {"r7_isole", "e7_prairie", "e7_cereales", "e7_rui1", "e7_rui2"})
    assert created.status is CaseStatus.DRAFT
    assert "adapté du cas c_fig2 sur f7" in created.notes[0]
    assert kb.case("c_fig2").status is CaseStatus.VALIDATED
    assert "nouveau cas " + created.id in kb.case("c_fig2").notes[-1]
    assert kb.version > desk.version


def test_accept_takes_the_adapted_text_by_default(desk):
    kb, created = record_review(desk, ReviewVerdict(
        result_for(desk, "c_fig2", "f7", F7_MAPPING), Decision.ACCEPT))
    adapted = adapt(desk, result_for(desk, "c_fig2", "f7", F7_MAPPING))
    assert created.explanation == adapted.text


def test_accept_prefers_the_reviewers_rewrite(desk):
    kb, created = record_review(desk, ReviewVerdict(
        result_for(desk, "c_fig2", "f7", F7_MAPPING), Decision.ACCEPT,
        edited_text="la prairie isole les céréales du ruisseau"))
    assert created.explanation == "la prairie isole les céréales du ruisseau"


def test_accepted_case_wins_the_next_retrieval(desk):
    kb, created = record_review(desk, ReviewVerdict(
        result_for(desk, "c_fig2", "f7", F7_MAPPING), Decision.ACCEPT))
    results = retrieve(kb, kb.graph("f7"))
    assert results[0].case_id == created.id
    assert results[0].score == Fraction(1)
    # the old source still embeds perfectly but covers fewer vertices
    assert results[1].case_id == "c_fig2"
    assert results[1].score == Fraction(1)


def test_accept_on_validated_source_skips_repromotion(desk):
    kb1, _ = record_review(desk, ReviewVerdict(
        result_for(desk, "c_fig2", "f7", F7_MAPPING), Decision.ACCEPT))
    assert kb1.case("c_fig2").status is CaseStatus.VALIDATED
    kb2, again = record_review(kb1, ReviewVerdict(
        result_for(kb1, "c_fig2", "f7", F7_MAPPING), Decision.ACCEPT))
    assert kb2.case("c_fig2").status is CaseStatus.VALIDATED
    assert again.id != "case-001" or again.id not in desk.cases


def test_accept_on_rejected_source_is_refused(desk):
    m = identity_mapping(desk, "c_amande_parc")
    with pytest.raises(IllegalTransitionError):
        record_review(desk, ReviewVerdict(
            result_for(desk, "c_amande_parc", "f3", m), Decision.ACCEPT))


def test_stale_verdict_is_refused(desk):
    match = result_for(desk, "c_fig2", "f7", F7_MAPPING)
    with pytest.raises(StaleVersionError):
        record_review(desk, ReviewVerdict(match, Decision.ACCEPT,
                                          expected_version=desk.version + 7))
    # None means "no pin": applies to whatever version is current
    kb, _ = record_review(desk, ReviewVerdict(match, Decision.ACCEPT,
                                              expected_version=None))
    assert kb.version > desk.version


def test_review_refuses_unknown_and_partial_matches(desk):
    m = F7_MAPPING
    with pytest.raises(UnknownMatchError):
        record_review(desk, ReviewVerdict(
            result_for(desk, "ghost", "f7", m), Decision.ACCEPT))
    with pytest.raises(UnknownMatchError):
        record_review(desk, ReviewVerdict(
            result_for(desk, "c_fig2", "ghost", m), Decision.ACCEPT))
    with pytest.raises(InvalidMappingError):
        record_review(desk, ReviewVerdict(
            result_for(desk, "c_fig2", "f7",
                       Mapping((("e_prairie", "e7_prairie"),))),
            Decision.ACCEPT))


def test_review_refuses_role_breaking_mapping(desk):
    crossed = Mapping((("e_prairie", "e7_cereales"),
                       ("e_cereales", "e7_prairie"),
                       ("e_ruisseau", "e7_rui1"), ("r_isole", "r7_isole")))
    with pytest.raises(InvalidMappingError):
        record_review(desk, ReviewVerdict(
            result_for(desk, "c_fig2", "f7", crossed), Decision.ACCEPT))


def test_default_timestamp_is_utc_iso(desk):
    kb, _ = record_review(desk, ReviewVerdict(
        result_for(desk, "c_fig2", "f7", F7_MAPPING), Decision.REJECT))
    note = kb.case("c_fig2").notes[-1]
    assert note.startswith("[20")
    assert "T" in note.split("]")[0] and note.split("]")[0].endswith("Z")
