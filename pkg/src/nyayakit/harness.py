"""Tiered evaluation: structure, judge rubric, ground truth, formal check.

Each tier runs only if every earlier tier passed. Tier 4 on an example
without a verifiable problem is recorded as skipped rather than passed.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple, Protocol

from .clients import ClientError, ModelClient
from .grammar import emit_grammar
from .logic import (
    Assign,
    AssignmentAnswer,
    LogicProblem,
    Verdict,
    brute_force_solve,
    cross_check,
    parse_assignment,
    verify_answer,
)
from .model import PHASES, Frontmatter
from .parser import ParsedDocument, parse_trace
from .prompts import assemble_prompt
from .scoring import DEFAULT_THRESHOLD, MatchResult, RewardWeights, composite_reward, match_answer
from .validator import ValidationReport, ValidatorConfig, validate

__all__ = [
    "JUDGE_DIMENSIONS",
    "EvalConfig",
    "EvalRecord",
    "EvalRow",
    "Example",
    "JudgeClient",
    "JudgeFormatError",
    "JudgeScores",
    "RejectionResult",
    "TierOutcome",
    "emit_grammar",
    "evaluate_example",
    "evaluate_examples",
    "format_cell",
    "judge_decision",
    "rejection_sample",
    "run_tiers",
    "semantic_verdict",
]

JUDGE_DIMENSIONS = (
    "samshaya_appropriateness",
    "pratyaksha_validity",
    "anumana_correctness",
    "upamana_relevance",
    "shabda_correctness",
    "pancha_avayava_quality",
    "tarka_meaningfulness",
    "hetvabhasa_thoroughness",
    "nirnaya_definitiveness",
)
PRAMANA_DIMENSIONS = JUDGE_DIMENSIONS[1:5]


@dataclass(frozen=True)
class Example:
    id: str
    problem_statement: str
    frontmatter: Frontmatter | None = None
    problem: LogicProblem | None = None

    @property
    def ground_truth(self) -> str:
        return self.frontmatter.ground_truth if self.frontmatter else ""

    @property
    def z3_verifiable(self) -> bool:
        return bool(self.frontmatter and self.frontmatter.z3_verifiable)


@dataclass(frozen=True)
class EvalConfig:
    tiers: tuple[int, ...] = (1, 3)
    max_new_tokens: int | None = None
    temperature: float = 0.0
    format_prompting: bool = True
    samples: int = 5
    threshold: float = DEFAULT_THRESHOLD
    validator: ValidatorConfig = ValidatorConfig()
    solver: str | None = None
    solver_timeout: float = 10.0
    workers: int = 4
    weights: RewardWeights = RewardWeights()

    def __post_init__(self) -> None:
        tiers = tuple(self.tiers)
        object.__setattr__(self, "tiers", tiers)
        if not tiers:
            raise ValueError("tiers must be non-empty")
        if any(t not in (1, 2, 3, 4) for t in tiers):
            raise ValueError(f"tiers must be drawn from 1-4, got {tiers}")
        if list(tiers) != sorted(set(tiers)):
            raise ValueError(f"tiers must be strictly ascending, got {tiers}")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.max_new_tokens is not None and self.max_new_tokens < 1:
            raise ValueError("max_new_tokens must be positive")

    def to_dict(self) -> dict:
        return {
            "tiers": list(self.tiers),
            "max_new_tokens": self.max_new_tokens,
            "temperature": self.temperature,
            "format_prompting": self.format_prompting,
            "samples": self.samples,
            "threshold": self.threshold,
            "fallacy_set": self.validator.fallacy_set,
            "universal_rule": self.validator.universal_rule,
            "require_leading_samshaya": self.validator.require_leading_samshaya,
            "solver": self.solver,
        }


# ---------------------------------------------------------------- judge

class JudgeFormatError(ValueError):
    pass


@dataclass(frozen=True)
class JudgeScores:
    samshaya_appropriateness: int
    pratyaksha_validity: int
    anumana_correctness: int
    upamana_relevance: int
    shabda_correctness: int
    pancha_avayava_quality: int
    tarka_meaningfulness: int
    hetvabhasa_thoroughness: int
    nirnaya_definitiveness: int

    def __post_init__(self) -> None:
        for name in JUDGE_DIMENSIONS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= 10:
                raise ValueError(f"{name} must be an integer in 0-10, got {value!r}")

    @property
    def total(self) -> int:
        return sum(getattr(self, name) for name in JUDGE_DIMENSIONS)

    @property
    def normalized(self) -> float:
        return self.total / 90

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in JUDGE_DIMENSIONS}

    @classmethod
    def parse(cls, text: str) -> "JudgeScores":
        """Read the fenced ``key: integer`` block a judge must return.

        Exactly the nine dimensions, once each. Fractions, extra keys and
        out-of-range values are rejected, never rounded or clipped.
        """
        blocks = re.findall(r"^```[\w-]*[ \t]*\n(.*?)^```[ \t]*$", text, re.MULTILINE | re.DOTALL)
        if len(blocks) != 1:
            raise JudgeFormatError(f"expected one fenced score block, found {len(blocks)}")
        scores: dict[str, int] = {}
        for line in blocks[0].splitlines():
            if not line.strip():
                continue
            m = re.fullmatch(r"\s*([a-z_]+)\s*:\s*(\S+)\s*", line)
            if not m:
                raise JudgeFormatError(f"malformed score line: {line.strip()!r}")
            key, raw = m.groups()
            if key not in JUDGE_DIMENSIONS:
                raise JudgeFormatError(f"unknown dimension {key!r}")
            if key in scores:
                raise JudgeFormatError(f"dimension {key!r} given twice")
            if not re.fullmatch(r"\d+", raw):
                raise JudgeFormatError(f"{key} must be a whole number, got {raw!r}")
            value = int(raw)
            if value > 10:
                raise JudgeFormatError(f"{key} out of range: {value}")
            scores[key] = value
        missing = [k for k in JUDGE_DIMENSIONS if k not in scores]
        if missing:
            raise JudgeFormatError(f"missing dimensions: {', '.join(missing)}")
        return cls(**scores)


def judge_decision(scores: JudgeScores) -> str:
    # integer comparisons keep the 77/90 and 63/90 cut points exact
    if scores.total * 100 >= 85 * 90:
        return "auto_accept"
    if scores.total * 100 >= 70 * 90:
        return "manual_review"
    return "reject"


class JudgeClient(Protocol):
    def score(self, example_id: str, output: str) -> str: ...


# ---------------------------------------------------------------- records

@dataclass(frozen=True)
class TierOutcome:
    passed: bool | None
    detail: str = ""

    @property
    def skipped(self) -> bool:
        return self.passed is None

    def to_dict(self) -> dict:
        return {"passed": self.passed, "skipped": self.skipped, "detail": self.detail}


@dataclass(frozen=True)
class EvalRow:
    """Flat, JSON-ready projection of one record."""

    id: str
    parse_ok: bool
    valid: bool
    violations: tuple[str, ...]
    failures: tuple[dict, ...]
    similarity: float | None
    semantic_match: bool | None
    semantic: str
    format: str
    tiers: dict
    reward: float
    output_length: int
    format_prompting: bool | None = None
    temperature: float | None = None
    errors: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "parse_ok": self.parse_ok,
            "valid": self.valid,
            "violations": list(self.violations),
            "failures": [dict(f) for f in self.failures],
            "similarity": self.similarity,
            "semantic_match": self.semantic_match,
            "semantic": self.semantic,
            "format": self.format,
            "tiers": {k: dict(v) for k, v in self.tiers.items()},
            "reward": self.reward,
            "output_length": self.output_length,
            "format_prompting": self.format_prompting,
            "temperature": self.temperature,
            "errors": list(self.errors),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalRow":
        return cls(
            id=data["id"],
            parse_ok=data["parse_ok"],
            valid=data["valid"],
            violations=tuple(data["violations"]),
            failures=tuple(data["failures"]),
            similarity=data["similarity"],
            semantic_match=data["semantic_match"],
            semantic=data["semantic"],
            format=data["format"],
            tiers={k: dict(v) for k, v in data["tiers"].items()},
            reward=data["reward"],
            output_length=data["output_length"],
            format_prompting=data.get("format_prompting"),
            temperature=data.get("temperature"),
            errors=tuple(data.get("errors", ())),
        )


@dataclass(frozen=True)
class EvalRecord:
    example_id: str
    output: str
    parsed: ParsedDocument
    report: ValidationReport
    match: MatchResult | None
    semantic: str
    tiers: dict[int, TierOutcome]
    reward: float
    verdict: Verdict | None = None
    judge: JudgeScores | None = None
    format_prompting: bool | None = None
    temperature: float | None = None
    max_new_tokens: int | None = None
    errors: tuple[str, ...] = ()

    def row(self) -> EvalRow:
        return EvalRow(
            id=self.example_id,
            parse_ok=self.parsed.parse_ok,
            valid=self.report.valid,
            violations=self.report.codes,
            failures=tuple(v.to_dict() for v in self.report.violations),
            similarity=self.match.similarity if self.match else None,
            semantic_match=self.tiers[3].passed if 3 in self.tiers else None,
            semantic=self.semantic,
            format=format_cell(self.parsed, self.report),
            tiers={str(k): v.to_dict() for k, v in sorted(self.tiers.items())},
            reward=self.reward,
            output_length=len(self.output.split()),
            format_prompting=self.format_prompting,
            temperature=self.temperature,
            errors=self.errors,
        )


def format_cell(parsed: ParsedDocument, report: ValidationReport, counting: str = "first_failure") -> str:
    """Summary-table wording for a trace's structure.

    ``first_failure`` counting mirrors a checker that stops at the first
    missing section: it knows of one absence, so a truncated trace shows
    5/6 however many later sections are gone. ``present`` counts headers.
    """
    if counting not in ("first_failure", "present"):
        raise ValueError(f"unknown counting {counting!r}")
    present = sum(parsed.trace.phase_presence)
    if present == 0:
        return "None"
    if "invalid_doubt_type" in report.codes:
        return "Invalid"
    if report.valid:
        return f"Complete ({present}/{len(PHASES)})"
    if counting == "first_failure" and present < len(PHASES):
        present = len(PHASES) - 1
    return f"Partial ({present}/{len(PHASES)})"


def with_givens(problem: LogicProblem, answer: AssignmentAnswer) -> AssignmentAnswer:
    """Fill in values the problem states outright; an answer need not repeat them."""
    if problem.kind == "bijection":
        stated = {c.entity: c.value for c in problem.constraints if isinstance(c, Assign)}
    else:
        stated = {lit.var: lit.truth for lit in problem.facts}
    if not answer.mapping:
        return answer
    return AssignmentAnswer({**stated, **dict(answer.mapping)})


def _claims(parsed: ParsedDocument) -> str:
    return "\n".join(s.nigamana for s in parsed.trace.syllogisms if s.nigamana.strip())


def semantic_verdict(
    output: str,
    ground_truth: str,
    problem: LogicProblem | None = None,
    parsed: ParsedDocument | None = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> str:
    """Whether the content reaches the right answer: yes, no or unknown.

    Independent of format. A labelled answer is scored by token overlap.
    Without one, the syllogism conclusions are read against the problem's
    unique solution: they must cover every entity the problem does not
    state outright. With neither, a matching last line counts as yes and
    anything else as unknown.
    """
    match = match_answer(output, ground_truth, threshold)
    if match.method != "last_line":
        return "yes" if match.semantic_match else "no"
    if problem is not None:
        parsed = parsed or parse_trace(output)
        claims = parse_assignment(problem, _claims(parsed)).mapping
        if not claims:
            return "unknown"
        solutions = brute_force_solve(problem)
        if len(solutions) != 1:
            return "unknown"
        truth = solutions[0].mapping
        if any(truth.get(k) != v for k, v in claims.items()):
            return "no"
        open_names = [k for k, v in truth.items() if v is not None and k not in problem.given]
        return "yes" if all(k in claims for k in open_names) else "unknown"
    return "yes" if match.semantic_match else "unknown"


# ---------------------------------------------------------------- tiers

def _reward(config: EvalConfig, report, semantic, judge, tiers) -> float:
    pramana = tarka = 1.0
    if judge is not None:
        pramana = 1 + 4 * (sum(getattr(judge, d) for d in PRAMANA_DIMENSIONS) / len(PRAMANA_DIMENSIONS)) / 10
        tarka = 1 + 4 * judge.tarka_meaningfulness / 10
    consistent = 4 in tiers and tiers[4].passed is True
    return composite_reward(report.valid, semantic == "yes", pramana, tarka, consistent, config.weights)


def run_tiers(
    example: Example,
    output: str,
    config: EvalConfig = EvalConfig(),
    judge: JudgeClient | None = None,
) -> EvalRecord:
    parsed = parse_trace(output)
    report = validate(parsed, config.validator)
    truth = example.ground_truth
    match = match_answer(output, truth, config.threshold) if truth else None
    semantic = semantic_verdict(output, truth, example.problem, parsed, config.threshold) if truth else "unknown"
    tiers: dict[int, TierOutcome] = {}
    errors: list[str] = []
    scores: JudgeScores | None = None
    verdict: Verdict | None = None

    for tier in config.tiers:
        if tier == 1:
            outcome = TierOutcome(report.valid, "valid" if report.valid else report.violations[0].message)
        elif tier == 2:
            if judge is None:
                outcome = TierOutcome(False, "no judge client")
            else:
                try:
                    scores = JudgeScores.parse(judge.score(example.id, output))
                except (ClientError, JudgeFormatError) as exc:
                    errors.append(f"judge: {exc}")
                    outcome = TierOutcome(False, f"judge error: {exc}")
                else:
                    decision = judge_decision(scores)
                    outcome = TierOutcome(decision != "reject", f"{decision} ({scores.total}/90)")
        elif tier == 3:
            if match is None:
                outcome = TierOutcome(False, "no ground truth")
            else:
                outcome = TierOutcome(
                    match.semantic_match, f"similarity {match.similarity:.3f} via {match.method}"
                )
        else:
            if not example.z3_verifiable or example.problem is None:
                outcome = TierOutcome(None, "skipped: not verifiable")
            else:
                answer_text = match.extracted_answer if match else output
                answer = with_givens(example.problem, parse_assignment(example.problem, answer_text))
                verdict = verify_answer(example.problem, answer)
                detail = str(verdict)
                passed = verdict.ok
                if config.solver:
                    check = cross_check(example.problem, answer, config.solver, config.solver_timeout)
                    if check["error"]:
                        errors.append(f"solver: {check['error']}")
                        detail += "; solver error"
                    elif not check["agree"]:
                        passed = False
                        detail += "; solver disagrees"
                outcome = TierOutcome(passed, detail)
        tiers[tier] = outcome
        if outcome.passed is False:
            break

    return EvalRecord(
        example_id=example.id,
        output=output,
        parsed=parsed,
        report=report,
        match=match,
        semantic=semantic,
        tiers=tiers,
        reward=_reward(config, report, semantic, scores, tiers),
        verdict=verdict,
        judge=scores,
        format_prompting=config.format_prompting,
        temperature=config.temperature,
        max_new_tokens=config.max_new_tokens,
        errors=tuple(errors),
    )


def _generate(example: Example, client: ModelClient, config: EvalConfig) -> tuple[str, str | None]:
    prompt = assemble_prompt(example.problem_statement, config.format_prompting, example.id)
    try:
        return client.generate(prompt, config.temperature, config.max_new_tokens), None
    except ClientError as exc:
        return "", f"{exc.kind}: {exc}"


def _with_error(record: EvalRecord, error: str | None) -> EvalRecord:
    if error is None:
        return record
    return replace(record, errors=(error,) + record.errors)


def evaluate_example(example: Example, client: ModelClient, config: EvalConfig, judge: JudgeClient | None = None) -> EvalRecord:
    output, error = _generate(example, client, config)
    return _with_error(run_tiers(example, output, config, judge), error)


def evaluate_examples(
    examples: Iterable[Example],
    client: ModelClient,
    config: EvalConfig = EvalConfig(),
    judge: JudgeClient | None = None,
) -> list[EvalRecord]:
    """Evaluate concurrently; the result is sorted by example id."""
    items = list(examples)
    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as pool:
        records = list(pool.map(lambda ex: evaluate_example(ex, client, config, judge), items))
    return sorted(records, key=lambda r: r.example_id)


class RejectionResult(NamedTuple):
    chosen: str | None
    attempts: int
    records: tuple[EvalRecord, ...]


def rejection_sample(
    example: Example,
    client: ModelClient,
    config: EvalConfig = EvalConfig(),
    judge: JudgeClient | None = None,
) -> RejectionResult:
    """Draw up to ``config.samples`` outputs and keep the first valid one."""
    records: list[EvalRecord] = []
    for attempt in range(1, config.samples + 1):
        output, error = _generate(example, client, config)
        record = _with_error(run_tiers(example, output, config, judge), error)
        records.append(record)
        if error is None and record.report.valid:
            return RejectionResult(output, attempt, tuple(records))
    return RejectionResult(None, len(records), tuple(records))

