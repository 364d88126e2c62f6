"""Single-edit mutations of valid traces, each aimed at one violation code."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path

from nyayakit.model import FALLACY_KINDS, PRAMANA_KINDS, SYLLOGISM_MEMBERS
from nyayakit.parser import parse_trace, phase_key
from nyayakit.validator import validate

ROOT = Path(__file__).resolve().parent.parent / "fixtures"
KINDS = (
    "delete_section",
    "swap_sections",
    "corrupt_doubt",
    "corrupt_fallacy",
    "rename_pramana",
    "delete_member",
    "drop_universal_rule",
)


@dataclass(frozen=True)
class Mutation:
    source: str
    kind: str
    detail: str
    text: str
    expected: str
    phase: str | None = None
    value: str | None = None


def valid_fixtures() -> dict[str, str]:
    """Every fixture trace that passes the default validator."""
    out = {}
    for path in sorted(ROOT.rglob("*.md")):
        text = path.read_text(encoding="utf-8")
        if validate(parse_trace(text)).valid:
            out[str(path.relative_to(ROOT))] = text
    return out


def _chunks(text: str) -> tuple[str, list[tuple[str, str]]]:
    """Split into (prefix, [(phase, chunk)]) where chunks begin at '## ' lines."""
    starts = [m.start() for m in re.finditer(r"^## ", text, re.M)]
    prefix = text[: starts[0]]
    chunks = []
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else len(text)
        chunk = text[start:end]
        header = chunk.split("\n", 1)[0][3:]
        chunks.append((phase_key(header.split("(")[0].strip()), chunk))
    return prefix, chunks


def _ensure_newline(chunk: str) -> str:
    return chunk if chunk.endswith("\n") else chunk + "\n"


def _section(text: str, phase: str) -> tuple[int, int]:
    _, chunks = _chunks(text)
    offset = len(_chunks(text)[0])
    for key, chunk in chunks:
        if key == phase:
            return offset, offset + len(chunk)
        offset += len(chunk)
    raise KeyError(phase)


def _bogus(rng: random.Random) -> str:
    word = "".join(rng.choice("bcdfgklmnprstvz") + rng.choice("aeiou") for _ in range(rng.randint(2, 4)))
    return word.capitalize()


def delete_section(text: str, rng: random.Random) -> Mutation:
    prefix, chunks = _chunks(text)
    i = rng.randrange(len(chunks))
    phase = chunks[i][0]
    rest = [_ensure_newline(c) for j, (_, c) in enumerate(chunks) if j != i]
    return Mutation("", "delete_section", phase, prefix + "".join(rest), "missing_section", phase=phase)


def swap_sections(text: str, rng: random.Random) -> Mutation:
    prefix, chunks = _chunks(text)
    i, j = sorted(rng.sample(range(len(chunks)), 2))
    body = [_ensure_newline(c) for _, c in chunks]
    body[i], body[j] = body[j], body[i]
    detail = f"{chunks[i][0]}<->{chunks[j][0]}"
    return Mutation("", "swap_sections", detail, prefix + "".join(body), "section_order_violation")


# the value may wrap, so it runs to the next label, blank line or rule
_DOUBT = re.compile(
    r"^(\*\*Doubt Type\*\*:|\*\*Doubt Type:\*\*)[ \t]*(.*?)\n(?=[ \t]*\*\*|[ \t]*\n|---|#)",
    re.M | re.I | re.S,
)


def corrupt_doubt(text: str, rng: random.Random) -> Mutation:
    token = f"{_bogus(rng)} {_bogus(rng)}"
    m = _DOUBT.search(text)
    new = text[: m.start(2)] + token + text[m.end(2) :]
    key = "_".join(token.lower().split())
    return Mutation("", "corrupt_doubt", token, new, "invalid_doubt_type", phase="samshaya", value=key)


def corrupt_fallacy(text: str, rng: random.Random) -> Mutation:
    start, end = _section(text, "hetvabhasa")
    block = text[start:end]
    present = [n for n in FALLACY_KINDS if re.search(n, block, re.I)]
    name = rng.choice(present)
    block = re.sub(name, _bogus(rng).lower(), block, flags=re.I)
    return Mutation("", "corrupt_fallacy", name, text[:start] + block + text[end:], "hetvabhasa_incomplete")


def rename_pramana(text: str, rng: random.Random) -> Mutation:
    kind = rng.choice(PRAMANA_KINDS)
    pattern = re.compile(rf"^(###\s+){kind}\b", re.M | re.I)
    new = pattern.sub(lambda m: m.group(1) + _bogus(rng), text, count=1)
    return Mutation("", "rename_pramana", kind, new, "pramana_type_missing", value=kind)


def _member_spans(text: str) -> list[tuple[int, int, str]]:
    """(start, end, member) spans of member fields inside Pancha Avayava."""
    start, end = _section(text, "pancha_avayava")
    block = text[start:end]
    label = re.compile(r"^[ \t]*(?:[-*+][ \t]+)?\*\*([A-Za-z]+)", re.M)
    stop = re.compile(r"^[ \t]*(?:[-*+][ \t]+)?\*\*|^#|^---|^[ \t]*$", re.M)
    spans = []
    for m in label.finditer(block):
        name = m.group(1).lower()
        if name not in SYLLOGISM_MEMBERS:
            continue
        line_end = block.find("\n", m.start())
        line_end = len(block) if line_end < 0 else line_end + 1
        nxt = stop.search(block, line_end)
        stop_at = nxt.start() if nxt else len(block)
        spans.append((start + m.start(), start + stop_at, name))
    return spans


def delete_member(text: str, rng: random.Random) -> Mutation:
    a, b, name = rng.choice(_member_spans(text))
    return Mutation("", "delete_member", name, text[:a] + text[b:], "incomplete_syllogism")


def drop_universal_rule(text: str, rng: random.Random) -> Mutation:
    spans = [s for s in _member_spans(text) if s[2] == "udaharana"]
    a, b, _ = rng.choice(spans)
    field = text[a:b]
    head = re.match(r"[^:]*:(?:\*\*)?", field).group(0)
    new = text[:a] + head + " For instance, the first case settles it.\n" + text[b:]
    return Mutation("", "drop_universal_rule", "udaharana", new, "udaharana_no_universal_rule")


MUTATORS = {
    "delete_section": delete_section,
    "swap_sections": swap_sections,
    "corrupt_doubt": corrupt_doubt,
    "corrupt_fallacy": corrupt_fallacy,
    "rename_pramana": rename_pramana,
    "delete_member": delete_member,
    "drop_universal_rule": drop_universal_rule,
}


def mutate(name: str, text: str, kind: str, rng: random.Random) -> Mutation:
    m = MUTATORS[kind](text, rng)
    return Mutation(name, m.kind, m.detail, m.text, m.expected, m.phase, m.value)


def random_mutations(count: int, seed: int = 0) -> list[Mutation]:
    fixtures = valid_fixtures()
    names = sorted(fixtures)
    rng = random.Random(seed)
    out = []
    for i in range(count):
        kind = KINDS[i % len(KINDS)]
        name = rng.choice(names)
        out.append(mutate(name, fixtures[name], kind, rng))
    return out


def check(m: Mutation, config=None) -> tuple[bool, tuple[str, ...]]:
    """Whether ``m`` yields exactly its targeted code, and the codes seen."""
    report = validate(parse_trace(m.text)) if config is None else validate(parse_trace(m.text), config)
    codes = report.codes
    if report.valid or set(codes) != {m.expected}:
        return False, codes
    hit = [v for v in report.violations if v.code == m.expected]
    if m.expected == "missing_section":
        return [v.phase for v in hit] == [m.phase], codes
    if m.expected == "invalid_doubt_type":
        return [v.value for v in hit] == [m.value], codes
    if m.expected == "pramana_type_missing":
        return [v.value for v in hit] == [m.value], codes
    return len(hit) == 1, codes

