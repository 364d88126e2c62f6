"""Tier-1 structural validation and phase-quality scoring."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import FALLACY_SETS, PRAMANA_KINDS, NirnayaPhase, NyayaTrace, Syllogism, TarkaPhase
from .parser import REQUIRED_FRONTMATTER, ParsedDocument, ParseFailure
from .scoring import token_set

UNIVERSAL_RULE_MODES = ("lenient", "strict")
FALLACY_SELECTORS = ("canonical", "alternate", "either")


@dataclass(frozen=True)
class ValidatorConfig:
    fallacy_set: str = "either"
    universal_rule: str = "lenient"
    require_leading_samshaya: bool = False
    corpus_mode: bool = False

    def __post_init__(self) -> None:
        if self.fallacy_set not in FALLACY_SELECTORS:
            raise ValueError(f"fallacy_set must be one of {FALLACY_SELECTORS}")
        if self.universal_rule not in UNIVERSAL_RULE_MODES:
            raise ValueError(f"universal_rule must be one of {UNIVERSAL_RULE_MODES}")


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[ParseFailure, ...]
    phase_bitmap: tuple[bool, ...]
    syllogism_count: int
    quality_score: int

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


_WHEREVER = re.compile(r"\bwherever\b\s*\W*\s*\w", re.IGNORECASE)
_WHEREVER_THERE = re.compile(r"\bwherever\b[^.!?]*?\bthere\b", re.IGNORECASE)


def check_universal_rule(text: str, mode: str = "lenient") -> bool:
    """True when the Udaharana states a universal rule.

    Lenient mode wants a clause opened by "wherever"; strict mode also
    wants a "there" consequent in the same sentence.
    """
    if mode not in UNIVERSAL_RULE_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    flat = " ".join(text.split())
    if mode == "strict":
        return bool(_WHEREVER_THERE.search(flat))
    return bool(_WHEREVER.search(flat))


_NEGATION = re.compile(
    r"\b(?:not|no|cannot|never|neither|nor|opposite|negation|negate[sd]?|contrary)\b|n't\b"
    r"|\bsuppose\b.*\bfalse\b",
    re.IGNORECASE | re.DOTALL,
)


def conclusion_of(trace: NyayaTrace) -> str:
    """Last Nigamana, falling back to the Nirnaya answer."""
    for syllogism in reversed(trace.syllogisms):
        if syllogism.nigamana.strip():
            return syllogism.nigamana
    return trace.nirnaya.final_answer if trace.nirnaya else ""


def check_tarka_tautology(tarka: TarkaPhase, nirnaya: NirnayaPhase | None, conclusion: str | None = None) -> str:
    """Classify a Tarka as ``meaningful`` or ``tautological``.

    A hypothesis with no negation cue that shares at least 90% of the
    conclusion's tokens merely restates it.
    """
    premise = tarka.premise
    if conclusion is None:
        conclusion = nirnaya.final_answer if nirnaya else ""
    if _NEGATION.search(premise):
        return "meaningful"
    target = token_set(conclusion)
    if not target:
        return "meaningful"
    overlap = len(target & token_set(premise)) / len(target)
    return "tautological" if overlap >= 0.9 else "meaningful"


def _pramana_missing(trace: NyayaTrace) -> list[str]:
    blocks = trace.pramana.blocks if trace.pramana else {}
    return [kind for kind in PRAMANA_KINDS if kind not in blocks or not blocks[kind].content.strip()]


def _tautological(trace: NyayaTrace) -> bool:
    if trace.tarka is None:
        return False
    conclusion = conclusion_of(trace)
    if not conclusion.strip():
        return False
    return check_tarka_tautology(trace.tarka, trace.nirnaya, conclusion) == "tautological"


def quality_score(trace: NyayaTrace, config: ValidatorConfig = ValidatorConfig()) -> int:
    """Phase-quality score on a 0-10 scale.

    Any hard failure gives 0: an absent Samshaya or Nirnaya, a knowledge
    source without real content ("None" does not count here), fewer than
    two complete syllogisms with universal rules, or a Tarka that is
    missing or tautological. Otherwise all five fallacy checks give 10,
    three or four give 7 and fewer give 0.
    """
    if trace.samshaya is None or trace.nirnaya is None or trace.tarka is None:
        return 0
    blocks = trace.pramana.blocks if trace.pramana else {}
    if any(kind not in blocks or blocks[kind].is_none for kind in PRAMANA_KINDS):
        return 0
    strong = [
        s for s in trace.syllogisms if s.complete and check_universal_rule(s.udaharana, config.universal_rule)
    ]
    if len(strong) < 2 or _tautological(trace):
        return 0
    checked = trace.hetvabhasa.checked_count(config.fallacy_set) if trace.hetvabhasa else 0
    if checked >= 5:
        return 10
    return 7 if checked >= 3 else 0


def validate(parsed: ParsedDocument, config: ValidatorConfig = ValidatorConfig()) -> ValidationReport:
    """Structural verdict for one parsed document."""
    trace = parsed.trace
    violations = [f for f in parsed.failures if f.code != "frontmatter_missing_field"]
    if config.corpus_mode:
        front = parsed.frontmatter
        missing = [
            ParseFailure("frontmatter_missing_field", field=key)
            for key in REQUIRED_FRONTMATTER
            if front is None or not getattr(front, key)
        ]
        violations = missing + violations
    if config.require_leading_samshaya and (
        trace.leading_text or (parsed.phase_order and parsed.phase_order[0] != "samshaya")
    ):
        violations.append(ParseFailure("leading_text"))
    if trace.pramana is not None:
        violations += [ParseFailure("pramana_type_missing", phase="pramana", value=k) for k in _pramana_missing(trace)]
    for index, syllogism in enumerate(trace.syllogisms, start=1):
        if syllogism.udaharana.strip() and not check_universal_rule(syllogism.udaharana, config.universal_rule):
            violations.append(ParseFailure("udaharana_no_universal_rule", phase="pancha_avayava", index=index))
    if _tautological(trace):
        violations.append(ParseFailure("tarka_tautological", phase="tarka"))
    if trace.hetvabhasa is not None:
        checked = trace.hetvabhasa.checked_count(config.fallacy_set)
        if checked < len(FALLACY_SETS["canonical"]):
            violations.append(ParseFailure("hetvabhasa_incomplete", phase="hetvabhasa", count=checked))
    return ValidationReport(
        valid=not violations,
        violations=tuple(violations),
        phase_bitmap=trace.phase_presence,
        syllogism_count=len(trace.syllogisms),
        quality_score=quality_score(trace, config),
    )


def complete_syllogisms(trace: NyayaTrace) -> list[Syllogism]:
    return [s for s in trace.syllogisms if s.complete]
