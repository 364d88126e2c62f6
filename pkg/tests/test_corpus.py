import json
import shutil

import pytest
from hypothesis import given, strategies as st

from nyayakit.corpus import (
    CorpusError,
    SplitMix64,
    TrainingInstance,
    corpus_stats,
    dedup,
    dumps_jsonl,
    load_corpus,
    read_jsonl,
    split_corpus,
    split_sizes,
    to_jsonl,
    write_jsonl,
)
from nyayakit.model import Frontmatter, PROBLEM_TYPES
from nyayakit.parser import parse_trace

from conftest import FIXTURES

CORPUS = FIXTURES / "corpus"


def synthetic(n, prefix="syn"):
    return [
        TrainingInstance(instruction=f"problem {i}", output=f"## Samshaya\nbody {i}\n", id=f"{prefix}-{i:03d}")
        for i in range(n)
    ]


def test_to_jsonl_fixture_corpus():
    instances = to_jsonl(CORPUS)
    ids = [i.id for i in instances]
    assert len(instances) == 6 and ids == sorted(ids)
    first = instances[0]
    assert first.id == "pramana-001"
    assert first.instruction == (
        "Alice, Bob, and Carol each have exactly one pet: a cat, a dog, or a fish. "
        "Each pet belongs to exactly one person.\n\n"
        "**Constraints**:\n"
        "1. Alice does not have the cat.\n"
        "2. Bob has the dog.\n"
        "3. Carol does not have the fish.\n\n"
        "**Question**: Who has which pet?"
    )
    assert first.output.startswith("## Samshaya")
    assert first.output.rstrip().endswith("**Confidence**: High")
    assert all(i.input == "" for i in instances)


def test_jsonl_lines_have_three_keys():
    lines = dumps_jsonl(to_jsonl(CORPUS)).splitlines()
    assert len(lines) == 6
    assert all(list(json.loads(line)) == ["instruction", "input", "output"] for line in lines)


def test_jsonl_round_trip_parses(tmp_path):
    path = tmp_path / "all.jsonl"
    write_jsonl(to_jsonl(CORPUS), path)
    for inst in read_jsonl(path):
        assert parse_trace(inst.output).parse_ok


def test_jsonl_bytes_stable(tmp_path):
    write_jsonl(to_jsonl(CORPUS), tmp_path / "a.jsonl")
    write_jsonl(to_jsonl(CORPUS), tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_missing_ground_truth_rejected(tmp_path):
    text = (CORPUS / "test-001.md").read_text()
    (tmp_path / "bad.md").write_text(text.replace("ground_truth:", "truth_hint:"))
    shutil.copy(CORPUS / "test-002.md", tmp_path)
    with pytest.raises(CorpusError) as info:
        to_jsonl(tmp_path)
    assert list(info.value.problems) == [str(tmp_path / "bad.md")]
    assert "frontmatter_missing_field" in info.value.problems[str(tmp_path / "bad.md")]


def test_empty_directory(tmp_path):
    assert to_jsonl(tmp_path) == []
    assert load_corpus(tmp_path) == []


@pytest.mark.parametrize("kwargs", [dict(input="x"), dict(output="no header")])
def test_instance_invariants(kwargs):
    base = dict(instruction="p", output="## Samshaya\n", input="")
    with pytest.raises(ValueError):
        TrainingInstance(**{**base, **kwargs})


def test_read_jsonl_reports_line(tmp_path):
    path = tmp_path / "x.jsonl"
    path.write_text('{"instruction": "p", "input": "", "output": "## Samshaya\\n"}\n{"instruction": 1}\n')
    with pytest.raises(ValueError, match=":2:"):
        read_jsonl(path)


@pytest.mark.parametrize("n, train, val", [(55, 44, 11), (20, 16, 4), (1, 1, 0), (10, 8, 2)])
def test_split_sizes(n, train, val):
    assert split_sizes(n) == (train, val)
    a, b = split_corpus(synthetic(n))
    assert (len(a), len(b)) == (train, val)


def test_split_empty_rejected():
    with pytest.raises(ValueError):
        split_corpus([])


def test_splitmix_reference_values():
    # first outputs for seed 0 of the published generator
    rng = SplitMix64(0)
    assert [rng.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


# regression freeze: a change here means every published split moves
FROZEN_VAL = [
    "syn-002", "syn-012", "syn-016", "syn-017", "syn-019", "syn-020",
    "syn-042", "syn-046", "syn-052", "syn-053", "syn-054",
]


def test_split_frozen_membership():
    _, val = split_corpus(synthetic(55))
    assert sorted(i.id for i in val) == FROZEN_VAL


@given(st.permutations(synthetic(55)))
def test_split_independent_of_order(items):
    reference = split_corpus(synthetic(55))
    assert split_corpus(list(items)) == reference


@given(st.integers(1, 60), st.floats(0, 1), st.integers(0, 2**64 - 1))
def test_split_partitions(n, ratio, seed):
    items = synthetic(n)
    train, val = split_corpus(items, ratio, seed)
    assert sorted(train + val, key=lambda i: i.id) == items
    assert len(val) == split_sizes(n, ratio)[1]


def test_dedup_duplicate_file():
    items = synthetic(3)
    copy = TrainingInstance(items[1].instruction, items[1].output, id="syn-999")
    kept, dropped = dedup(items + [copy])
    assert kept == items
    assert [(d.id, d.reason) for d in dropped] == [("syn-999", "duplicate of syn-001")]


def test_dedup_distinct_and_whitespace():
    items = synthetic(4)
    assert dedup(items) == (items, [])
    spaced = TrainingInstance("problem   0", "## Samshaya\n  body 0", id="syn-100")
    assert len(dedup(items + [spaced])[1]) == 1


def test_dedup_needs_both_fields():
    a = TrainingInstance("first", "## Samshaya\nsame\n", id="a")
    b = TrainingInstance("second", "## Samshaya\nsame\n", id="b")
    assert dedup([a, b]) == ([a, b], [])


def test_dedup_jsonl_names_lines(tmp_path):
    items = synthetic(2)
    path = tmp_path / "d.jsonl"
    write_jsonl(items + [items[0]], path)
    _, dropped = dedup(read_jsonl(path))
    assert [d.reason for d in dropped] == ["duplicate of d.jsonl:1"]
    assert dropped[0].id == "d.jsonl:3"


def test_stats_uniform():
    fronts = [Frontmatter(id=f"p{i}", problem_type=t, ground_truth="x") for t in PROBLEM_TYPES for i in range(4)]
    stats = corpus_stats(fronts)
    assert stats["n"] == 20
    assert set(stats["problem_type"].values()) == {4}


def test_stats_negative_examples():
    fronts = [Frontmatter(id=str(i), problem_type="boolean_sat", ground_truth="x", negative_example=i < 5) for i in range(8)]
    assert corpus_stats(fronts)["negative_example"] == {"true": 5, "false": 3, "unset": 0}


def test_stats_empty():
    stats = corpus_stats([])
    assert stats["n"] == 0
    for key in ("problem_type", "difficulty", "negative_example", "z3_verifiable"):
        assert set(stats[key].values()) == {0}


def test_stats_fixture_corpus():
    stats = corpus_stats(load_corpus(CORPUS))
    assert stats["n"] == 6
    assert stats["z3_verifiable"]["true"] == 6
