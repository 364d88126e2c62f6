"""Markdown trace parser and parse-failure taxonomy.

A document is optional YAML frontmatter, an optional ``# Problem`` block
and a sequence of ``## `` phase sections. Parsing never raises on bad
input: every structural problem is collected as a :class:`ParseFailure`.
"""

from __future__ import annotations

import datetime as _dt
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import yaml

from .model import (
    ANUMANA_SUBTYPES,
    FALLACY_KINDS,
    PHASE_TITLES,
    PHASES,
    PRAMANA_KINDS,
    SYLLOGISM_MEMBERS,
    Frontmatter,
    HetvabhasaPhase,
    Invalid,
    NirnayaPhase,
    NyayaTrace,
    PramanaBlock,
    PramanaPhase,
    SamshayaPhase,
    Syllogism,
    TarkaPhase,
    normalize_enum_token,
    parse_doubt_type,
)

REQUIRED_FRONTMATTER = ("id", "problem_type", "ground_truth")

CATEGORIES = (
    "missing_hetvabhasa",
    "missing_nirnaya",
    "missing_justification",
    "missing_required_field",
    "invalid_doubt_type",
    "missing_pancha_avayava",
    "missing_syllogism",
    "other",
)


@dataclass(frozen=True)
class ParseFailure:
    """One structural or semantic problem found in a document.

    ``code`` names the taxonomy entry; the remaining fields carry its
    arguments. Validator-level codes use the same shape.
    """

    code: str
    phase: str | None = None
    field: str | None = None
    value: str | None = None
    index: int | None = None
    members: tuple[str, ...] = ()
    count: int | None = None

    @property
    def message(self) -> str:
        title = PHASE_TITLES.get(self.phase or "", self.phase)
        code = self.code
        if code == "missing_section":
            return f"Missing required section: {title}"
        if code == "missing_required_field":
            return f"Missing required field: {self.field}"
        if code == "invalid_doubt_type":
            return f"Invalid doubt type: {self.value}"
        if code == "missing_syllogism":
            return "Pancha Avayava missing syllogism"
        if code == "incomplete_syllogism":
            return f"Syllogism {self.index} missing members: {', '.join(self.members)}"
        if code == "section_order_violation":
            return "Sections out of canonical order"
        if code == "frontmatter_missing_field":
            return f"Missing frontmatter field: {self.field}"
        if code == "malformed_frontmatter":
            return f"Malformed frontmatter: {self.value}"
        if code == "pramana_type_missing":
            return f"Missing Pramana type: {title_or(self.value)}"
        if code == "udaharana_no_universal_rule":
            return f"Udaharana of syllogism {self.index} lacks a universal rule"
        if code == "hetvabhasa_incomplete":
            return f"Hetvabhasa checks {self.count} of 5 fallacy types"
        if code == "tarka_tautological":
            return "Tarka hypothesis restates the conclusion"
        if code == "leading_text":
            return 'Response does not start with "## Samshaya"'
        return code

    @property
    def label(self) -> str:
        """Short row label in the style of the per-example error tables."""
        title = PHASE_TITLES.get(self.phase or "", self.phase)
        if self.code == "missing_section":
            return f"Missing {title}"
        if self.code == "missing_required_field":
            return f"Missing {title} {self.field}"
        if self.code == "invalid_doubt_type":
            return "Invalid doubt type"
        if self.code in ("missing_syllogism", "incomplete_syllogism"):
            return "Invalid Pancha Avayava structure"
        return self.message

    @property
    def category(self) -> str:
        if self.code == "missing_section":
            return {
                "hetvabhasa": "missing_hetvabhasa",
                "nirnaya": "missing_nirnaya",
                "pancha_avayava": "missing_pancha_avayava",
            }.get(self.phase or "", "other")
        if self.code == "missing_required_field":
            if self.field == "Justification":
                return "missing_justification"
            return "missing_required_field"
        if self.code in ("invalid_doubt_type", "missing_syllogism"):
            return self.code
        return "other"

    def to_dict(self) -> dict:
        out: dict = {"code": self.code}
        for name in ("phase", "field", "value", "index", "count"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        if self.members:
            out["members"] = list(self.members)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "ParseFailure":
        return cls(
            code=data["code"],
            phase=data.get("phase"),
            field=data.get("field"),
            value=data.get("value"),
            index=data.get("index"),
            members=tuple(data.get("members", ())),
            count=data.get("count"),
        )


def title_or(key: str | None) -> str:
    return (key or "").capitalize()


@dataclass(frozen=True)
class ParsedDocument:
    frontmatter: Frontmatter | None
    problem_statement: str
    trace: NyayaTrace
    failures: tuple[ParseFailure, ...]
    phase_order: tuple[str, ...] = field(default=())

    @property
    def parse_ok(self) -> bool:
        return not self.failures


# ---------------------------------------------------------------- frontmatter

def _plain(value):
    if isinstance(value, (_dt.date, _dt.datetime)):
        return value.isoformat()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_plain(v) for v in value]
    return value


def _flag(value) -> bool | None:
    if value is None or isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "yes", "1"):
        return True
    if text in ("false", "no", "0"):
        return False
    return None


def parse_frontmatter(
    text: str, corpus_mode: bool = False
) -> tuple[Frontmatter | None, str, list[ParseFailure]]:
    """Split a leading ``---`` block from ``text``.

    Returns the frontmatter (or None), the remaining text and any failures.
    Missing mandatory keys are only reported in corpus mode.
    """
    lines = text.splitlines(keepends=True)
    if not lines or lines[0].strip() != "---":
        missing = [ParseFailure("frontmatter_missing_field", field=k) for k in REQUIRED_FRONTMATTER]
        return None, text, missing if corpus_mode else []
    for end in range(1, len(lines)):
        if lines[end].strip() == "---":
            break
    else:
        return None, text, [ParseFailure("malformed_frontmatter", value="no closing delimiter")]
    block = "".join(lines[1:end])
    remainder = "".join(lines[end + 1:])
    try:
        data = yaml.safe_load(block) if block.strip() else {}
    except yaml.YAMLError as exc:
        detail = str(exc).splitlines()[0]
        return None, remainder, [ParseFailure("malformed_frontmatter", value=detail)]
    if not isinstance(data, dict):
        return None, remainder, [ParseFailure("malformed_frontmatter", value="not a key/value block")]
    data = _plain(data)
    nested = data.pop("metadata", None)
    nested = nested if isinstance(nested, dict) else {}
    known = ("id", "problem_type", "ground_truth", "difficulty", "z3_verifiable", "negative_example")
    extras = {k: v for k, v in data.items() if k not in known}
    metadata = {**extras, **nested}

    def text_of(key: str) -> str:
        value = data.get(key)
        return "" if value is None else str(value).strip()

    front = Frontmatter(
        id=text_of("id"),
        problem_type=text_of("problem_type"),
        ground_truth=text_of("ground_truth"),
        difficulty=text_of("difficulty") or None,
        z3_verifiable=_flag(data.get("z3_verifiable", nested.get("z3_verifiable"))),
        negative_example=_flag(data.get("negative_example", nested.get("negative_example"))),
        metadata=metadata,
    )
    failures = []
    if corpus_mode:
        failures = [
            ParseFailure("frontmatter_missing_field", field=key)
            for key in REQUIRED_FRONTMATTER
            if not getattr(front, key)
        ]
    return front, remainder, failures


# ---------------------------------------------------------------- sections

_HR = re.compile(r"^\s*(?:-{3,}|\*{3,}|_{3,})\s*$")
_FENCE = re.compile(r"^\s*(```|~~~)")
_PROBLEM = re.compile(r"^#\s+Problem\b.*$", re.IGNORECASE | re.MULTILINE)


def _header_name(raw: str) -> str:
    name = raw.split("(", 1)[0]
    return name.replace("*", "").strip()


def phase_key(name: str) -> str | None:
    key = normalize_enum_token(name)
    return key if key in PHASES else None


def _split(text: str, marker: str) -> tuple[list[str], list[tuple[str, list[str]]]]:
    """Split lines on headers starting with ``marker``, outside fences.

    Horizontal rules outside fences are dropped.
    """
    lead: list[str] = []
    sections: list[tuple[str, list[str]]] = []
    in_fence = False
    for line in text.splitlines():
        if _FENCE.match(line):
            in_fence = not in_fence
        elif not in_fence:
            if line.startswith(marker):
                sections.append((line[len(marker):], []))
                continue
            if _HR.match(line):
                continue
        (sections[-1][1] if sections else lead).append(line)
    return lead, sections


def split_sections(text: str) -> tuple[str, list[tuple[str, str]]]:
    """Split a post-frontmatter body on ``## `` headers.

    Returns ``(leading_text, [(header_name, body), ...])``. Header names
    drop any parenthetical gloss, so "Pramana (Evidence Sources)" becomes
    "Pramana".
    """
    lead, sections = _split(text, "## ")
    return (
        "\n".join(lead).strip(),
        [(_header_name(head), "\n".join(body).strip()) for head, body in sections],
    )


# ---------------------------------------------------------------- fields

_LABEL = re.compile(
    r"^\s*(?:[-*+]\s+)?(?:\*\*)?\s*(?P<label>[A-Za-z][A-Za-z _-]*?)\s*(?:\([^)]*\))?\s*"
    r"(?:\*\*)?\s*:(?:\*\*)?\s*(?P<rest>.*)$"
)


def _label_of(line: str, allowed: Iterable[str]) -> tuple[str, str] | None:
    match = _LABEL.match(line)
    if not match:
        return None
    key = normalize_enum_token(match.group("label"))
    if key not in allowed:
        return None
    return key, match.group("rest").strip()


def _collect_fields(body: str, allowed: tuple[str, ...]) -> tuple[dict[str, str], str]:
    """Read ``**Label**: text`` fields.

    A field runs until a blank line or the next recognised label. Lines
    outside any field are returned as notes. The first occurrence of a
    label wins; repeats become notes.
    """
    values: dict[str, list[str]] = {}
    notes: list[str] = []
    current: list[str] | None = None
    for line in body.splitlines():
        if not line.strip():
            current = None
            continue
        hit = _label_of(line, allowed)
        if hit and hit[0] not in values:
            current = values[hit[0]] = [hit[1]] if hit[1] else []
        elif current is not None:
            current.append(line.strip())
        else:
            notes.append(line.rstrip())
    return {k: "\n".join(v).strip() for k, v in values.items()}, "\n".join(notes).strip()


def _subsections(body: str) -> tuple[str, list[tuple[str, str]]]:
    lead, parts = _split(body, "### ")
    return (
        "\n".join(lead).strip(),
        [(head.strip(), "\n".join(lines).strip()) for head, lines in parts],
    )


# ---------------------------------------------------------------- phases

def _parse_samshaya(body: str) -> SamshayaPhase:
    values, notes = _collect_fields(body, ("doubt_type", "justification"))
    return SamshayaPhase(
        doubt_type=parse_doubt_type(values.get("doubt_type", "")),
        justification=values.get("justification", ""),
        notes=notes,
    )


_SUBTYPE = re.compile(r"\b(" + "|".join(ANUMANA_SUBTYPES) + r")\b", re.IGNORECASE)


def _parse_pramana(body: str) -> PramanaPhase:
    lead, parts = _subsections(body)
    blocks: dict[str, PramanaBlock] = {}
    notes = [lead] if lead else []
    for head, content in parts:
        kind = normalize_enum_token(_header_name(head))
        if kind in PRAMANA_KINDS and kind not in blocks:
            subtypes = ()
            if kind == "anumana":
                subtypes = tuple(m.lower() for m in _SUBTYPE.findall(content))
            blocks[kind] = PramanaBlock(content=content, subtypes=subtypes)
        else:
            notes.append(f"### {head}\n{content}".strip())
    return PramanaPhase(blocks=blocks, notes="\n\n".join(notes))


_SYLLOGISM = re.compile(r"^Syllogism\b\s*\d*\s*[:.\-]?\s*(?P<topic>.*)$", re.IGNORECASE)


def _parse_pancha_avayava(body: str) -> tuple[tuple[Syllogism, ...], str]:
    lead, parts = _subsections(body)
    syllogisms = []
    notes = [lead] if lead else []
    for head, content in parts:
        match = _SYLLOGISM.match(head.replace("*", "").strip())
        if not match:
            notes.append(f"### {head}\n{content}".strip())
            continue
        values, extra = _collect_fields(content, SYLLOGISM_MEMBERS)
        syllogisms.append(Syllogism(topic=match.group("topic").strip(), notes=extra, **values))
    return tuple(syllogisms), "\n\n".join(notes)


def _parse_tarka(body: str) -> TarkaPhase:
    names = ("hypothesis", "consequence", "analysis", "resolution", "test")
    values, notes = _collect_fields(body, names)
    four = any(name in values for name in names[:4])
    form = "single_test" if "test" in values and not four else "four_field"
    return TarkaPhase(form=form, notes=notes, **values)


_YAML_HEAD = re.compile(r"^\s*fallacy_checks\s*:\s*$", re.IGNORECASE)
_REASONING = re.compile(r"^\s*(?:\*\*)?reasoning(?:\*\*)?\s*:(?:\*\*)?\s*(?P<text>.*)$", re.IGNORECASE)
_CHECK = re.compile(
    r"^\s*(?:[-*+]\s+)?(?:\*\*)?\s*(?:check\s+for\s+)?(?P<name>[A-Za-z][A-Za-z _-]*?)\s*"
    r"(?:\([^)]*\))?\s*(?:\*\*)?\s*:(?:\*\*)?\s*(?P<text>.*)$",
    re.IGNORECASE,
)
_SLASH_LIST = re.compile(r"^\s*(?:[-*+]\s+)?(?:check(?:\s+for)?\s*:?)?\s*(?P<names>.+)$", re.IGNORECASE)


def _parse_hetvabhasa(body: str) -> HetvabhasaPhase:
    checks: dict[str, str] = {}
    notes: list[str] = []
    reasoning = ""
    syntax = "check_lines"
    for line in body.splitlines():
        if not line.strip() or _FENCE.match(line):
            continue
        if _YAML_HEAD.match(line):
            syntax = "yaml"
            continue
        match = _REASONING.match(line)
        if match and not reasoning:
            reasoning = match.group("text").strip().strip('"')
            continue
        match = _CHECK.match(line)
        if match:
            name = normalize_enum_token(match.group("name"))
            if name in FALLACY_KINDS:
                checks.setdefault(name, match.group("text").strip())
                continue
        match = _SLASH_LIST.match(line)
        if match:
            names = [normalize_enum_token(n) for n in re.split(r"[/,]", match.group("names"))]
            names = [n for n in names if n]
            if names and all(n in FALLACY_KINDS for n in names):
                for name in names:
                    checks.setdefault(name, "")
                continue
        notes.append(line.rstrip())
    return HetvabhasaPhase(checks=checks, reasoning=reasoning, syntax=syntax, notes="\n".join(notes))


def _parse_nirnaya(body: str) -> NirnayaPhase:
    names = ("status", "final_answer", "answer", "justification", "confidence")
    values, notes = _collect_fields(body, names)
    return NirnayaPhase(
        final_answer=values.get("final_answer") or values.get("answer", ""),
        justification=values.get("justification", ""),
        status_text=values.get("status", ""),
        confidence_text=values.get("confidence", ""),
        notes=notes,
    )


# ---------------------------------------------------------------- documents

def parse_trace(text: str, corpus_mode: bool = False) -> ParsedDocument:
    """Parse a full document into frontmatter, problem and trace.

    Failures are listed in canonical phase order; within a phase an absent
    section is reported before any field problem.
    """
    text = text.replace("\r\n", "\n").lstrip("﻿")
    front, body, failures = parse_frontmatter(text, corpus_mode)
    leading, sections = split_sections(body)

    problem = ""
    match = _PROBLEM.search(leading)
    if match:
        problem = leading[match.end():].strip()
        leading = leading[: match.start()].strip()

    bodies: dict[str, str] = {}
    order: list[str] = []
    for name, section_body in sections:
        key = phase_key(name)
        if key and key not in bodies:
            bodies[key] = section_body
            order.append(key)

    pa_notes = ""
    syllogisms = None
    if "pancha_avayava" in bodies:
        syllogisms, pa_notes = _parse_pancha_avayava(bodies["pancha_avayava"])
    trace = NyayaTrace(
        samshaya=_parse_samshaya(bodies["samshaya"]) if "samshaya" in bodies else None,
        pramana=_parse_pramana(bodies["pramana"]) if "pramana" in bodies else None,
        pancha_avayava=syllogisms,
        tarka=_parse_tarka(bodies["tarka"]) if "tarka" in bodies else None,
        hetvabhasa=_parse_hetvabhasa(bodies["hetvabhasa"]) if "hetvabhasa" in bodies else None,
        nirnaya=_parse_nirnaya(bodies["nirnaya"]) if "nirnaya" in bodies else None,
        leading_text=leading,
        pancha_avayava_notes=pa_notes,
    )
    failures = list(failures) + _structural_failures(trace)
    if order != sorted(order, key=PHASES.index):
        failures.append(ParseFailure("section_order_violation"))
    return ParsedDocument(front, problem, trace, tuple(failures), tuple(order))


def _structural_failures(trace: NyayaTrace) -> list[ParseFailure]:
    out: list[ParseFailure] = []
    for phase in PHASES:
        value = getattr(trace, phase)
        if value is None:
            out.append(ParseFailure("missing_section", phase=phase))
            continue
        if phase == "samshaya":
            if value.doubt_type is None:
                out.append(ParseFailure("missing_required_field", phase=phase, field="Doubt Type"))
            elif isinstance(value.doubt_type, Invalid):
                out.append(ParseFailure("invalid_doubt_type", phase=phase, value=value.doubt_type.key))
            if not value.justification:
                out.append(ParseFailure("missing_required_field", phase=phase, field="Justification"))
        elif phase == "pancha_avayava":
            if not value:
                out.append(ParseFailure("missing_syllogism", phase=phase))
            for index, syllogism in enumerate(value, start=1):
                if not syllogism.complete:
                    out.append(
                        ParseFailure(
                            "incomplete_syllogism",
                            phase=phase,
                            index=index,
                            members=syllogism.missing_members,
                        )
                    )
        elif phase == "tarka":
            if value.form == "four_field" and not value.analysis:
                out.append(ParseFailure("missing_required_field", phase=phase, field="Analysis"))
        elif phase == "nirnaya":
            if not value.final_answer:
                out.append(ParseFailure("missing_required_field", phase=phase, field="Final Answer"))
            if not value.justification:
                out.append(ParseFailure("missing_required_field", phase=phase, field="Justification"))
    return out


def parse_ok(text: str) -> bool:
    return parse_trace(text).parse_ok


# ---------------------------------------------------------------- taxonomy

def _failure_lists(items) -> list[list[ParseFailure]]:
    lists = []
    for item in items:
        if isinstance(item, ParseFailure):
            lists.append([item])
        elif hasattr(item, "failures"):
            lists.append(list(item.failures))
        elif hasattr(item, "violations"):
            lists.append(list(item.violations))
        else:
            lists.append(list(item))
    return lists


def classify_failures(items: Iterable, mode: str = "primary") -> dict[str, int]:
    """Histogram of taxonomy categories.

    ``items`` holds one entry per document: a ParsedDocument, a report with
    ``violations``, or a plain list of failures. In ``primary`` mode only
    the first failure of each document is counted.
    """
    if mode not in ("primary", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    counts = Counter({name: 0 for name in CATEGORIES})
    for failures in _failure_lists(items):
        chosen = failures[:1] if mode == "primary" else failures
        for failure in chosen:
            counts[failure.category] += 1
    return dict(counts)


def merge_histograms(histograms: Iterable[Mapping[str, int]], how: str = "max") -> dict[str, int]:
    """Combine per-run histograms by per-category ``max`` or ``sum``."""
    merged = {name: 0 for name in CATEGORIES}
    for hist in histograms:
        for name, count in hist.items():
            merged[name] = max(merged.get(name, 0), count) if how == "max" else merged.get(name, 0) + count
    return merged


__all__ = [
    "CATEGORIES",
    "ParseFailure",
    "ParsedDocument",
    "classify_failures",
    "merge_histograms",
    "parse_frontmatter",
    "parse_ok",
    "parse_trace",
    "split_sections",
]
