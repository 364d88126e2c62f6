"""Parse, validate and score six-phase Nyaya reasoning traces."""

__version__ = "0.1.0"

from .clients import ClientError, EndpointError, HttpClient, NotFoundError, ReplayClient, ReplayJudge
from .corpus import (
    CorpusError,
    TrainingInstance,
    corpus_stats,
    dedup,
    load_corpus,
    load_examples,
    render_trace,
    split_corpus,
    to_jsonl,
)
from .grammar import emit_grammar, grammar_accepts
from .harness import (
    EvalConfig,
    EvalRecord,
    Example,
    JudgeScores,
    evaluate_examples,
    judge_decision,
    rejection_sample,
    run_tiers,
)
from .logic import LogicProblem, brute_force_solve, emit_smtlib, parse_assignment, verify_answer
from .model import NyayaTrace, normalize_enum_token
from .parser import ParsedDocument, ParseFailure, classify_failures, parse_trace
from .prompts import assemble_prompt
from .report import ReportDocument
from .scoring import aggregate, composite_reward, interaction_effect, match_answer, similarity, wilson_interval
from .validator import ValidationReport, ValidatorConfig, validate

__all__ = [
    "ClientError",
    "CorpusError",
    "EndpointError",
    "EvalConfig",
    "EvalRecord",
    "Example",
    "HttpClient",
    "JudgeScores",
    "LogicProblem",
    "NotFoundError",
    "NyayaTrace",
    "ParseFailure",
    "ParsedDocument",
    "ReplayClient",
    "ReplayJudge",
    "ReportDocument",
    "TrainingInstance",
    "ValidationReport",
    "ValidatorConfig",
    "aggregate",
    "assemble_prompt",
    "brute_force_solve",
    "classify_failures",
    "composite_reward",
    "corpus_stats",
    "dedup",
    "emit_grammar",
    "emit_smtlib",
    "evaluate_examples",
    "grammar_accepts",
    "interaction_effect",
    "judge_decision",
    "load_corpus",
    "load_examples",
    "match_answer",
    "normalize_enum_token",
    "parse_assignment",
    "parse_trace",
    "rejection_sample",
    "render_trace",
    "run_tiers",
    "similarity",
    "split_corpus",
    "to_jsonl",
    "validate",
    "verify_answer",
    "wilson_interval",
]
