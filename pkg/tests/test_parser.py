import pytest

from nyayakit.parser import (
    ParseFailure,
    classify_failures,
    merge_histograms,
    parse_frontmatter,
    parse_trace,
    split_sections,
)

from conftest import FIXTURES, corpus_text


def test_frontmatter_fields():
    front, rest, failures = parse_frontmatter(corpus_text("d1"))
    assert front.id == "d1"
    assert front.problem_type == "constraint_satisfaction"
    assert front.ground_truth.startswith("Alice has the fish")
    assert front.z3_verifiable is True
    assert rest.lstrip().startswith("# Problem")
    assert failures == []


def test_frontmatter_of_corpus_document(ground_truth_doc):
    front, _, _ = parse_frontmatter(ground_truth_doc, corpus_mode=True)
    assert front.id == "pramana-001"


def test_frontmatter_absent():
    text = "# Problem\nNo header here.\n"
    front, rest, failures = parse_frontmatter(text)
    assert front is None and rest == text and failures == []


def test_frontmatter_missing_ground_truth_in_corpus_mode():
    text = "---\nid: x\nproblem_type: boolean_sat\n---\n# Problem\n"
    _, _, failures = parse_frontmatter(text, corpus_mode=True)
    assert failures == [ParseFailure("frontmatter_missing_field", field="ground_truth")]


def test_frontmatter_unclosed():
    _, _, failures = parse_frontmatter("---\nid: x\n")
    assert [f.code for f in failures] == ["malformed_frontmatter"]


def test_split_sections_d1(d1):
    leading, sections = split_sections(d1)
    assert leading.strip() == ""
    assert [name for name, _ in sections] == [
        "Samshaya", "Pramana", "Pancha Avayava", "Tarka", "Hetvabhasa", "Nirnaya",
    ]


def test_split_sections_d3(d3):
    _, sections = split_sections(d3)
    names = [name for name, _ in sections]
    # the output is cut off inside Tarka, so Nirnaya is absent as well
    assert names == ["Samshaya", "Pramana", "Pancha Avayava", "Tarka"]


def test_split_sections_no_headers():
    leading, sections = split_sections("just prose\nmore prose\n")
    assert sections == [] and "just prose" in leading


def test_header_gloss_ignored():
    _, a = split_sections("## Pramana (Sources of Knowledge)\nx\n")
    _, b = split_sections("## Pramana (Evidence Sources)\nx\n")
    assert a[0][0] == b[0][0] == "Pramana"


def test_parse_d1(d1):
    parsed = parse_trace(d1)
    assert parsed.parse_ok
    assert len(parsed.trace.syllogisms) == 1
    assert parsed.trace.hetvabhasa.checked_count("alternate") == 5
    assert parsed.trace.hetvabhasa.checked_count("canonical") < 5


def test_parse_d5(d5):
    failures = parse_trace(d5).failures
    assert ParseFailure("invalid_doubt_type", phase="samshaya", value="vipratipatti_samshaya") in failures
    assert "Invalid doubt type: vipratipatti_samshaya" in [f.message for f in failures]


def test_parse_d3(d3):
    failures = parse_trace(d3).failures
    assert [(f.code, f.phase) for f in failures] == [
        ("missing_section", "hetvabhasa"),
        ("missing_section", "nirnaya"),
    ]
    assert failures[0].message == "Missing required section: Hetvabhasa"


def test_member_labels_stripped(d1):
    s = parse_trace(d1).trace.syllogisms[0]
    assert s.pratijna.startswith("Alice has the fish")
    assert "Thesis" not in s.pratijna and "**" not in s.pratijna


def test_parse_is_deterministic(d1):
    assert parse_trace(d1) == parse_trace(d1)


def test_answer_label_alias(d1):
    parsed = parse_trace(d1.replace("**Final Answer**", "**Answer**"))
    assert parsed.parse_ok
    assert parsed.trace.nirnaya.final_answer.startswith("Alice has the fish")


def _stage(name):
    return [parse_trace(p.read_text(encoding="utf-8")) for p in sorted((FIXTURES / name / "outputs").glob("*.md"))]


def test_stage1_primary_histogram():
    hist = classify_failures(_stage("stage1"))
    nonzero = {k: v for k, v in hist.items() if v}
    assert nonzero == {
        "missing_hetvabhasa": 2,
        "missing_nirnaya": 1,
        "missing_justification": 1,
        "invalid_doubt_type": 2,
    }


def test_empty_histogram_all_zero():
    hist = classify_failures([])
    assert hist and set(hist.values()) == {0}


def test_combined_stages_match_aggregate_table():
    merged = merge_histograms([classify_failures(_stage("stage0")), classify_failures(_stage("stage1"))])
    six = {k: merged[k] for k in (
        "missing_hetvabhasa", "missing_nirnaya", "missing_justification",
        "invalid_doubt_type", "missing_pancha_avayava", "missing_syllogism",
    )}
    assert six == {
        "missing_hetvabhasa": 2,
        "missing_nirnaya": 1,
        "missing_justification": 1,
        "invalid_doubt_type": 2,
        "missing_pancha_avayava": 1,
        "missing_syllogism": 1,
    }


def test_all_mode_counts_every_failure(d3):
    parsed = parse_trace(d3)
    assert classify_failures([parsed], mode="primary")["missing_nirnaya"] == 0
    assert classify_failures([parsed], mode="all")["missing_nirnaya"] == 1


@pytest.mark.parametrize("failure", [
    ParseFailure("missing_section", phase="tarka"),
    ParseFailure("incomplete_syllogism", index=2, members=("hetu",)),
])
def test_failure_dict_round_trip(failure):
    assert ParseFailure.from_dict(failure.to_dict()) == failure
