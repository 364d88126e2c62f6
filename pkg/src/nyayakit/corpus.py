"""Corpus loading, trace rendering and dataset tooling (JSONL, split, dedup, stats)."""

from __future__ import annotations

import hashlib
import json
import os
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import yaml

from .harness import Example
from .logic import load_problem
from .model import (
    DIFFICULTIES,
    PHASES,
    PROBLEM_TYPES,
    Frontmatter,
    HetvabhasaPhase,
    NirnayaPhase,
    NyayaTrace,
    PramanaPhase,
    SamshayaPhase,
    Syllogism,
    TarkaPhase,
    title_of,
)
from .parser import ParsedDocument, ParseFailure, parse_trace
from .validator import ValidationReport, ValidatorConfig, validate

HEADINGS = {
    "samshaya": "Samshaya (Doubt Analysis)",
    "pramana": "Pramana (Sources of Knowledge)",
    "pancha_avayava": "Pancha Avayava (5-Member Syllogism)",
    "tarka": "Tarka (Counterfactual Reasoning)",
    "hetvabhasa": "Hetvabhasa (Fallacy Check)",
    "nirnaya": "Nirnaya (Ascertainment)",
}
PRAMANA_HEADINGS = {
    "pratyaksha": "Pratyaksha (Direct Perception)",
    "anumana": "Anumana (Inference)",
    "upamana": "Upamana (Comparison)",
    "shabda": "Shabda (Testimony)",
}
MEMBER_LABELS = {
    "pratijna": "Pratijna (Thesis)",
    "hetu": "Hetu (Reason)",
    "udaharana": "Udaharana (Universal + Example)",
    "upanaya": "Upanaya (Application)",
    "nigamana": "Nigamana (Conclusion)",
}


class CorpusError(ValueError):
    """One or more corpus files failed to load; ``problems`` maps path to codes."""

    def __init__(self, problems: dict[str, list[str]]):
        self.problems = problems
        lines = [f"{path}: {', '.join(codes)}" for path, codes in sorted(problems.items())]
        super().__init__("invalid corpus files:\n" + "\n".join(lines))


# ---------------------------------------------------------------- rendering

def _fields(pairs: Iterable[tuple[str, str]]) -> list[str]:
    out = []
    for label, value in pairs:
        if value:
            out.append(f"**{label}**: {value}")
    return out


def _block(parts: list[str], notes: str = "") -> str:
    chunks = [p for p in parts if p]
    if notes:
        chunks.append(notes)
    return "\n\n".join(chunks)


def _samshaya(phase: SamshayaPhase) -> str:
    doubt = title_of(str(phase.doubt_type)) if phase.doubt_type is not None else ""
    return _block(_fields([("Doubt Type", doubt), ("Justification", phase.justification)]), phase.notes)


def _pramana(phase: PramanaPhase) -> str:
    parts = [phase.notes] if phase.notes else []
    for kind, block in phase.blocks.items():
        parts.append(f"### {PRAMANA_HEADINGS[kind]}\n{block.content}".rstrip())
    return "\n\n".join(parts)


def _syllogisms(syllogisms: Sequence[Syllogism], notes: str) -> str:
    parts = [notes] if notes else []
    for index, s in enumerate(syllogisms, start=1):
        head = f"### Syllogism {index}: {s.topic}" if s.topic else f"### Syllogism {index}"
        body = _block(_fields((MEMBER_LABELS[m], s.member(m)) for m in MEMBER_LABELS), s.notes)
        parts.append(f"{head}\n\n{body}".rstrip())
    return "\n\n".join(parts)


def _tarka(phase: TarkaPhase) -> str:
    names = ("test",) if phase.form == "single_test" else ("hypothesis", "consequence", "analysis", "resolution", "test")
    return _block(_fields((name.capitalize(), getattr(phase, name)) for name in names), phase.notes)


def _hetvabhasa(phase: HetvabhasaPhase) -> str:
    if phase.syntax == "yaml":
        lines = ["```yaml", "fallacy_checks:"]
        lines += [f"  {name}: {text}".rstrip() for name, text in phase.checks.items()]
        if phase.reasoning:
            lines.append(f"reasoning: {phase.reasoning}")
        lines.append("```")
        return _block(["\n".join(lines)], phase.notes)
    lines = [f"- Check for {title_of(name)}: {text}".rstrip() for name, text in phase.checks.items()]
    parts = ["\n".join(lines)]
    if phase.reasoning:
        parts.append(f"**Reasoning**: {phase.reasoning}")
    return _block(parts, phase.notes)


def _nirnaya(phase: NirnayaPhase) -> str:
    return _block(
        _fields(
            [
                ("Status", phase.status_text),
                ("Final Answer", phase.final_answer),
                ("Justification", phase.justification),
                ("Confidence", phase.confidence_text),
            ]
        ),
        phase.notes,
    )


def render_trace(trace: NyayaTrace) -> str:
    """Markdown for a trace; parsing the result gives back an equal trace."""
    parts = [trace.leading_text] if trace.leading_text else []
    for phase in PHASES:
        value = getattr(trace, phase)
        if value is None:
            continue
        if phase == "pancha_avayava":
            body = _syllogisms(value, trace.pancha_avayava_notes)
        else:
            body = {
                "samshaya": _samshaya,
                "pramana": _pramana,
                "tarka": _tarka,
                "hetvabhasa": _hetvabhasa,
                "nirnaya": _nirnaya,
            }[phase](value)
        parts.append(f"## {HEADINGS[phase]}\n\n{body}".rstrip())
    return "\n\n".join(parts) + "\n"


def render_frontmatter(front: Frontmatter) -> str:
    data: dict = {"id": front.id, "problem_type": front.problem_type}
    if front.difficulty:
        data["difficulty"] = front.difficulty
    data["ground_truth"] = front.ground_truth
    metadata = dict(front.metadata)
    for key in ("z3_verifiable", "negative_example"):
        if getattr(front, key) is not None:
            metadata[key] = getattr(front, key)
    if metadata:
        data["metadata"] = metadata
    return "---\n" + yaml.safe_dump(data, sort_keys=False, allow_unicode=True) + "---\n"


def render_document(parsed: ParsedDocument) -> str:
    parts = []
    if parsed.frontmatter is not None:
        parts.append(render_frontmatter(parsed.frontmatter))
    if parsed.problem_statement:
        parts.append(f"# Problem\n\n{parsed.problem_statement}\n")
    parts.append(render_trace(parsed.trace))
    return "\n".join(parts)


# ---------------------------------------------------------------- loading

@dataclass(frozen=True)
class CorpusDocument:
    path: Path
    text: str
    parsed: ParsedDocument
    report: ValidationReport

    @property
    def id(self) -> str:
        front = self.parsed.frontmatter
        return front.id if front and front.id else self.path.stem

    @property
    def trace_text(self) -> str:
        """Source text from the Samshaya header to the end of the document."""
        match = re.search(r"^##[ \t]+Samshaya\b", self.text, re.MULTILINE)
        return self.text[match.start():].strip() + "\n" if match else ""


def sidecar_path(path: str | os.PathLike) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.problem.json")


def read_document(path: str | os.PathLike, config: ValidatorConfig = ValidatorConfig(corpus_mode=True)) -> CorpusDocument:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    parsed = parse_trace(text, corpus_mode=config.corpus_mode)
    return CorpusDocument(path, text, parsed, validate(parsed, config))


def _markdown_files(directory: str | os.PathLike) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    return [p for p in root.glob("*.md") if p.is_file()]


def load_corpus(
    directory: str | os.PathLike,
    config: ValidatorConfig = ValidatorConfig(corpus_mode=True),
    require_valid: bool = True,
    workers: int = 4,
) -> list[CorpusDocument]:
    """Parse every ``*.md`` file in a directory, sorted by id.

    With ``require_valid`` any invalid file raises CorpusError listing every
    offending file, so nothing is returned partially.
    """
    paths = _markdown_files(directory)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        docs = list(pool.map(lambda p: read_document(p, config), paths))
    docs.sort(key=lambda d: (d.id, d.path.name))
    if require_valid:
        problems = {str(d.path): list(d.report.codes) for d in docs if not d.report.valid}
        if problems:
            raise CorpusError(problems)
    return docs


def load_examples(directory: str | os.PathLike) -> list[Example]:
    """Problem files for evaluation: frontmatter, "# Problem" text, optional problem sidecar.

    Only the frontmatter has to be complete; no trace is expected.
    """
    examples = []
    problems: dict[str, list[str]] = {}
    for path in _markdown_files(directory):
        parsed = parse_trace(path.read_text(encoding="utf-8"), corpus_mode=True)
        bad = [f.code for f in parsed.failures if f.code in ("frontmatter_missing_field", "malformed_frontmatter")]
        if bad:
            problems[str(path)] = bad
            continue
        sidecar = sidecar_path(path)
        problem = load_problem(sidecar) if sidecar.is_file() else None
        examples.append(Example(parsed.frontmatter.id, parsed.problem_statement, parsed.frontmatter, problem))
    if problems:
        raise CorpusError(problems)
    return sorted(examples, key=lambda e: e.id)


# ---------------------------------------------------------------- JSONL

@dataclass(frozen=True)
class TrainingInstance:
    instruction: str
    output: str
    input: str = ""
    id: str = ""
    # where the instance was read from, e.g. "train.jsonl:7"; not part of equality
    source: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.input != "":
            raise ValueError("input must be the empty string")
        if not self.output.lstrip().startswith("## Samshaya"):
            raise ValueError("output must begin with '## Samshaya'")
        if not self.id:
            object.__setattr__(self, "id", dedup_key(self))

    def to_json(self) -> str:
        return json.dumps(
            {"instruction": self.instruction, "input": self.input, "output": self.output}, ensure_ascii=False
        )


def to_jsonl(directory: str | os.PathLike, config: ValidatorConfig = ValidatorConfig(corpus_mode=True)) -> list[TrainingInstance]:
    """One instance per valid corpus file, in id order."""
    return [
        TrainingInstance(instruction=doc.parsed.problem_statement, output=doc.trace_text, id=doc.id)
        for doc in load_corpus(directory, config)
    ]


def dumps_jsonl(instances: Iterable[TrainingInstance]) -> str:
    return "".join(inst.to_json() + "\n" for inst in instances)


def write_jsonl(instances: Iterable[TrainingInstance], path: str | os.PathLike) -> None:
    Path(path).write_bytes(dumps_jsonl(instances).encode("utf-8"))


def read_jsonl(path: str | os.PathLike) -> list[TrainingInstance]:
    """Instances from a JSONL file; each gets its content hash as id."""
    out = []
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            out.append(
                TrainingInstance(
                    instruction=data["instruction"],
                    input=data.get("input", ""),
                    output=data["output"],
                    source=f"{Path(path).name}:{number}",
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}:{number}: {exc}") from exc
    return out


# ---------------------------------------------------------------- split

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)


def split_sizes(n: int, ratio: float = 0.8) -> tuple[int, int]:
    """(train, val) with val = (1 - ratio) * n rounded half up."""
    if not 0 <= ratio <= 1:
        raise ValueError("ratio must lie in [0, 1]")
    # a small epsilon keeps 0.2 * 55 = 10.999... from rounding the wrong way
    val = int((1 - ratio) * n + 0.5 + 1e-9)
    return n - val, val


def split_corpus(instances: Sequence, ratio: float = 0.8, seed: int = 42) -> tuple[list, list]:
    """Deterministic train/val split over id-sorted input."""
    items = sorted(instances, key=lambda x: x.id)
    if not items:
        raise ValueError("cannot split an empty corpus")
    rng = SplitMix64(seed)
    for i in range(len(items) - 1, 0, -1):
        j = rng.next() % (i + 1)
        items[i], items[j] = items[j], items[i]
    train_n, _ = split_sizes(len(items), ratio)
    return items[:train_n], items[train_n:]


# ---------------------------------------------------------------- dedup

def dedup_key(instance) -> str:
    text = " ".join(instance.instruction.split()) + "\n" + " ".join(instance.output.split())
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Dropped:
    id: str
    kept: str
    key: str

    @property
    def reason(self) -> str:
        return f"duplicate of {self.kept}"


def _label(inst) -> str:
    return getattr(inst, "source", "") or inst.id


def dedup(instances: Iterable) -> tuple[list, list[Dropped]]:
    """Drop repeats of the same content, keeping the first by sorted id.

    Dropped entries name instances by source line when they have one,
    since JSONL instances are identified by their content hash.
    """
    kept: list = []
    dropped: list[Dropped] = []
    seen: dict[str, str] = {}
    # sort is stable, so equal ids keep their input order
    for inst in sorted(instances, key=lambda x: x.id):
        key = dedup_key(inst)
        if key in seen:
            dropped.append(Dropped(_label(inst), seen[key], key))
        else:
            seen[key] = _label(inst)
            kept.append(inst)
    return kept, dropped


# ---------------------------------------------------------------- stats

def _flag_counts(values: Iterable[bool | None]) -> dict[str, int]:
    counts = Counter("unset" if v is None else str(v).lower() for v in values)
    return {k: counts.get(k, 0) for k in ("true", "false", "unset")}


def corpus_stats(items: Iterable) -> dict:
    """Counts by problem type, difficulty and the two boolean flags.

    Accepts CorpusDocuments, ParsedDocuments, Examples or Frontmatters.
    """
    fronts = []
    for item in items:
        front = item
        if isinstance(item, CorpusDocument):
            front = item.parsed.frontmatter
        elif isinstance(item, (ParsedDocument, Example)):
            front = item.frontmatter
        fronts.append(front or Frontmatter())

    def histogram(values: Iterable[str], canonical: Sequence[str]) -> dict[str, int]:
        counts = Counter(values)
        out = {k: counts.pop(k, 0) for k in canonical}
        out.update(sorted(counts.items()))
        return out

    return {
        "n": len(fronts),
        "problem_type": histogram((f.problem_type or "unset" for f in fronts), PROBLEM_TYPES),
        "difficulty": histogram((f.difficulty or "unset" for f in fronts), DIFFICULTIES),
        "negative_example": _flag_counts(f.negative_example for f in fronts),
        "z3_verifiable": _flag_counts(f.z3_verifiable for f in fronts),
    }


__all__ = [
    "CorpusDocument",
    "CorpusError",
    "Dropped",
    "ParseFailure",
    "SplitMix64",
    "TrainingInstance",
    "corpus_stats",
    "dedup",
    "dedup_key",
    "dumps_jsonl",
    "load_corpus",
    "load_examples",
    "read_document",
    "read_jsonl",
    "render_document",
    "render_trace",
    "split_corpus",
    "split_sizes",
    "to_jsonl",
    "write_jsonl",
]
