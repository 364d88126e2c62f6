import re

import pytest

from nyayakit.model import NirnayaPhase, TarkaPhase
from nyayakit.parser import parse_trace
from nyayakit.validator import (
    ValidatorConfig,
    check_tarka_tautology,
    check_universal_rule,
    quality_score,
    validate,
)


def report_of(text, **config):
    return validate(parse_trace(text), ValidatorConfig(**config))


def test_d1_valid(d1):
    report = report_of(d1)
    assert report.valid and report.violations == ()
    assert report.phase_bitmap == (True,) * 6
    assert report.syllogism_count == 1


def test_d1_valid_but_zero_quality(d1):
    # schema validity and phase quality are separate gates
    report = report_of(d1)
    assert report.valid and report.quality_score == 0


def test_d3_invalid(d3):
    report = report_of(d3)
    assert not report.valid
    assert report.codes[0] == "missing_section"
    assert report.violations[0].phase == "hetvabhasa"


def test_bare_udaharana_flagged(d1):
    text = re.sub(
        r"(\*\*Udaharana \(Universal \+ Example\)\*\*:).*?(?=\*\*Upanaya)",
        r"\1 For instance, John sits in seat 5.\n",
        d1,
        flags=re.S,
    )
    report = report_of(text)
    assert report.codes == ("udaharana_no_universal_rule",)
    assert report.violations[0].index == 1


@pytest.mark.parametrize(
    "text, lenient, strict",
    [
        ("Wherever a person cannot have an item, they must have one of the remaining items.", True, False),
        ("Wherever a direct constraint assigns entity E to position P, there E occupies P.", True, True),
        ("For instance, John sits in seat 5.", False, False),
        ("WHEREVER smoke rises, there is fire.", True, True),
    ],
)
def test_universal_rule(text, lenient, strict):
    assert check_universal_rule(text, "lenient") is lenient
    assert check_universal_rule(text, "strict") is strict


def test_strict_mode_rejects_d1(d1):
    assert report_of(d1, universal_rule="strict").codes == ("udaharana_no_universal_rule",)


def test_tarka_meaningful_for_d1(d1):
    trace = parse_trace(d1).trace
    assert check_tarka_tautology(trace.tarka, trace.nirnaya) == "meaningful"


def test_tarka_identity_is_tautological():
    conclusion = "Therefore, Alice has the fish."
    tarka = TarkaPhase(hypothesis=conclusion)
    nirnaya = NirnayaPhase(final_answer=conclusion)
    assert check_tarka_tautology(tarka, nirnaya) == "tautological"


def test_tarka_opposite_cue():
    tarka = TarkaPhase(hypothesis="Assume the opposite of the conclusion")
    nirnaya = NirnayaPhase(final_answer="Assume the conclusion")
    assert check_tarka_tautology(tarka, nirnaya) == "meaningful"


def test_ground_truth_document_scores_ten(ground_truth_doc):
    report = report_of(ground_truth_doc, corpus_mode=True)
    assert report.valid
    assert report.syllogism_count >= 2
    assert report.quality_score == 10


def test_three_fallacies_score_seven(ground_truth_doc):
    text = ground_truth_doc.replace("  sadhyasama: none_detected\n", "").replace("  kalaatita: none_detected\n", "")
    report = report_of(text)
    assert report.codes == ("hetvabhasa_incomplete",)
    assert report.violations[0].count == 3
    assert quality_score(parse_trace(text).trace) == 7


def test_two_fallacies_score_zero(ground_truth_doc):
    text = ground_truth_doc
    for name in ("viruddha", "sadhyasama", "kalaatita"):
        text = text.replace(f"  {name}: none_detected\n", "")
    assert quality_score(parse_trace(text).trace) == 0


def test_fallacy_set_selection(d1, ground_truth_doc):
    assert report_of(d1, fallacy_set="alternate").valid
    assert report_of(d1, fallacy_set="canonical").codes == ("hetvabhasa_incomplete",)
    assert report_of(ground_truth_doc, fallacy_set="canonical").valid


def test_none_pramana_counts_as_present(d1):
    text = re.sub(
        r"(### Pratyaksha \(Direct Perception\)\n).*?(?=\n### Anumana)",
        r"\1- None\n",
        d1,
        flags=re.S,
    )
    report = report_of(text)
    assert report.valid
    assert quality_score(parse_trace(text).trace) == 0


def test_missing_pramana_kind(d1):
    text = re.sub(r"### Upamana.*?(?=### Shabda)", "", d1, flags=re.S)
    report = report_of(text)
    assert report.codes == ("pramana_type_missing",)
    assert report.violations[0].value == "upamana"


def test_leading_text_strict_mode(d3):
    assert "leading_text" in report_of(d3, require_leading_samshaya=True).codes
    assert "leading_text" not in report_of(d3).codes


def test_corpus_mode_requires_frontmatter(d1):
    codes = report_of(d1, corpus_mode=True).codes
    assert codes == ("frontmatter_missing_field",) * 3


def test_valid_implies_full_bitmap(ground_truth_doc, d1, d3, d5):
    for text in (ground_truth_doc, d1, d3, d5):
        report = report_of(text)
        if report.valid:
            assert all(report.phase_bitmap) and report.syllogism_count >= 1
            assert report.violations == ()
