"""Answer extraction, token-overlap matching, corpus metrics and reward."""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

DEFAULT_THRESHOLD = 0.8

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def normalize_text(text: str) -> str:
    """Lowercase, map non-alphanumerics to spaces, collapse whitespace."""
    return " ".join(_NON_ALNUM.sub(" ", text.lower()).split())


def token_set(text: str) -> frozenset[str]:
    return frozenset(normalize_text(text).split())


def similarity(answer: str, ground_truth: str) -> float:
    """Share of ground-truth tokens that also occur in the answer."""
    truth = token_set(ground_truth)
    if not truth:
        return 0.0
    return len(truth & token_set(answer)) / len(truth)


# ---------------------------------------------------------------- extraction

_LABEL_LINE = r"^\s*(?:[-*+]\s+)?(?:\*\*)?\s*(?:{names})\s*(?:\*\*)?\s*:(?:\*\*)?\s*(?P<rest>.*)$"
_FINAL = re.compile(_LABEL_LINE.format(names=r"final\s+answer|answer"), re.IGNORECASE)
_NIRNAYA = re.compile(_LABEL_LINE.format(names=r"nirnaya"), re.IGNORECASE)
_ANY_LABEL = re.compile(r"^\s*(?:[-*+]\s+)?\*\*[^*]+\*\*\s*:|^\s*(?:[-*+]\s+)?\*\*[^*]+:\*\*")
_RULE = re.compile(r"^\s*(?:-{3,}|\*{3,}|_{3,}|```.*|~~~.*)\s*$")


def _strip_markers(text: str) -> str:
    return " ".join(text.replace("**", "").split()).strip()


def _labelled(lines: list[str], pattern: re.Pattern) -> str | None:
    for i, line in enumerate(lines):
        match = pattern.match(line)
        if not match:
            continue
        parts = [match.group("rest")]
        for follow in lines[i + 1:]:
            if not follow.strip() or follow.lstrip().startswith("#"):
                break
            if _ANY_LABEL.match(follow) or _RULE.match(follow):
                break
            parts.append(follow)
        return _strip_markers(" ".join(parts))
    return None


def extract_answer(output: str) -> tuple[str, str]:
    """Pull the committed answer out of raw model output.

    Tries a "Final Answer" (or "Answer") label, then a "Nirnaya" label, then
    falls back to the last non-empty line that is not a header. Returns
    ``(answer, method)``.
    """
    lines = output.replace("\r\n", "\n").splitlines()
    found = _labelled(lines, _FINAL)
    if found is not None:
        return found, "final_answer_label"
    found = _labelled(lines, _NIRNAYA)
    if found is not None:
        return found, "nirnaya_label"
    for line in reversed(lines):
        if line.strip() and not line.lstrip().startswith("#") and not _RULE.match(line):
            text = _strip_markers(line)
            text = re.sub(r"^(?:[-*+]\s+)?[A-Za-z][A-Za-z ]*?:\s+", "", text) if _ANY_LABEL.match(line) else text
            return text, "last_line"
    return "", "last_line"


@dataclass(frozen=True)
class MatchResult:
    extracted_answer: str
    method: str
    exact: bool
    normalized: bool
    similarity: float
    semantic_match: bool
    threshold: float = DEFAULT_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "extracted_answer": self.extracted_answer,
            "method": self.method,
            "exact": self.exact,
            "normalized": self.normalized,
            "similarity": self.similarity,
            "semantic_match": self.semantic_match,
        }


def match_answer(output: str, ground_truth: str, threshold: float = DEFAULT_THRESHOLD) -> MatchResult:
    answer, method = extract_answer(output)
    score = similarity(answer, ground_truth)
    return MatchResult(
        extracted_answer=answer,
        method=method,
        exact=answer.strip() == ground_truth.strip(),
        normalized=normalize_text(answer) == normalize_text(ground_truth),
        similarity=score,
        semantic_match=score >= threshold,
        threshold=threshold,
    )


# ---------------------------------------------------------------- intervals

def wilson_interval(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clipped to [0, 1]."""
    if n <= 0:
        raise ValueError("wilson_interval needs n >= 1")
    if not 0 <= successes <= n:
        raise ValueError(f"successes must lie in [0, {n}], got {successes}")
    p = successes / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    lo, hi = center - half, center + half
    # exact endpoints at the boundaries avoid 1e-17 residue
    if successes == 0:
        lo = 0.0
    if successes == n:
        hi = 1.0
    return max(0.0, lo), min(1.0, hi)


def interaction_effect(grid: Mapping[tuple[str, str], float]) -> float:
    """Difference-in-differences of a 2x2 (format x temperature) grid.

    Keys are ``(format, temp)`` with format in {"on", "off"} and temp in
    {"lo", "hi"}. A positive value means raising temperature helps more
    with format prompting than without it.
    """
    cells = [(f, t) for f in ("on", "off") for t in ("lo", "hi")]
    missing = [cell for cell in cells if cell not in grid]
    if missing:
        raise ValueError(f"grid is missing cells: {missing}")
    return (grid["on", "hi"] - grid["on", "lo"]) - (grid["off", "hi"] - grid["off", "lo"])


def grid_from_rates(on_lo: float, on_hi: float, off_lo: float, off_hi: float) -> dict:
    return {("on", "lo"): on_lo, ("on", "hi"): on_hi, ("off", "lo"): off_lo, ("off", "hi"): off_hi}


# ---------------------------------------------------------------- reward

@dataclass(frozen=True)
class RewardWeights:
    w_format: float = 0.3
    w_semantic: float = 0.25
    w_pramana: float = 0.2
    w_tarka: float = 0.15
    w_consistency: float = 0.1

    def __post_init__(self) -> None:
        if any(w < 0 for w in self.as_tuple()):
            raise ValueError("reward weights must be non-negative")
        if not math.isclose(sum(self.as_tuple()), 1.0, abs_tol=1e-12):
            raise ValueError(f"reward weights sum to {sum(self.as_tuple())}, not 1")

    def as_tuple(self) -> tuple[float, ...]:
        return (self.w_format, self.w_semantic, self.w_pramana, self.w_tarka, self.w_consistency)


def _scale(name: str, value: float) -> float:
    if isinstance(value, bool) or not 1 <= value <= 5:
        raise ValueError(f"{name} must lie on the 1-5 scale, got {value!r}")
    return (value - 1) / 4


def composite_reward(
    format_ok: bool,
    semantic_ok: bool,
    pramana_score: float,
    tarka_score: float,
    consistent: bool,
    weights: RewardWeights = RewardWeights(),
) -> float:
    """Weighted reward in [0, 1]; 1-5 scales contribute (s - 1) / 4."""
    parts = (
        float(bool(format_ok)),
        float(bool(semantic_ok)),
        _scale("pramana_score", pramana_score),
        _scale("tarka_score", tarka_score),
        float(bool(consistent)),
    )
    return sum(w * r for w, r in zip(weights.as_tuple(), parts))


# ---------------------------------------------------------------- aggregation

@dataclass(frozen=True)
class EvalSummary:
    n: int
    format_rate: float
    parse_rate: float
    semantic_rate: float
    ci_format: tuple[float, float]
    ci_semantic: tuple[float, float]
    avg_output_length: float
    failure_histogram: dict
    semantic_over_parsed: float | None = None
    semantic_unknown: int = 0
    per_condition: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "format_rate": self.format_rate,
            "parse_rate": self.parse_rate,
            "semantic_rate": self.semantic_rate,
            "ci_format": list(self.ci_format),
            "ci_semantic": list(self.ci_semantic),
            "avg_output_length": self.avg_output_length,
            "failure_histogram": dict(self.failure_histogram),
            "semantic_over_parsed": self.semantic_over_parsed,
            "semantic_unknown": self.semantic_unknown,
            "per_condition": {k: dict(v) for k, v in self.per_condition.items()},
        }


def _row_of(record):
    return record.row() if hasattr(record, "row") else record


def condition_key(format_prompting: bool | None, temperature: float | None) -> str:
    fmt = "on" if format_prompting else "off"
    return f"format={fmt},temperature={temperature:g}"


def aggregate(records: Iterable) -> EvalSummary:
    """Corpus-level rates with Wilson intervals.

    Accepts EvalRecords or their row projections. Rows are processed in id
    order so the result does not depend on input order.
    """
    from .parser import ParseFailure, classify_failures

    rows = sorted((_row_of(r) for r in records), key=lambda r: r.id)
    if not rows:
        raise ValueError("aggregate needs at least one record")
    n = len(rows)
    valid = sum(r.valid for r in rows)
    parsed = sum(r.parse_ok for r in rows)
    semantic = sum(r.semantic == "yes" for r in rows)
    tier3 = [r.tiers["3"]["passed"] for r in rows if "3" in r.tiers]
    histogram = classify_failures(
        [[ParseFailure.from_dict(f) for f in r.failures] for r in rows if r.failures]
    )
    groups: dict[str, list] = defaultdict(list)
    for row in rows:
        if row.format_prompting is not None and row.temperature is not None:
            groups[condition_key(row.format_prompting, row.temperature)].append(row)
    per_condition = {
        key: {
            "n": len(group),
            "format_rate": sum(r.valid for r in group) / len(group),
            "semantic_rate": sum(r.semantic == "yes" for r in group) / len(group),
        }
        for key, group in sorted(groups.items())
    }
    return EvalSummary(
        n=n,
        format_rate=valid / n,
        parse_rate=parsed / n,
        semantic_rate=semantic / n,
        ci_format=wilson_interval(valid, n),
        ci_semantic=wilson_interval(semantic, n),
        avg_output_length=sum(r.output_length for r in rows) / n,
        failure_histogram=histogram,
        semantic_over_parsed=(sum(tier3) / len(tier3)) if tier3 else None,
        semantic_unknown=sum(r.semantic == "unknown" for r in rows),
        per_condition=per_condition,
    )
