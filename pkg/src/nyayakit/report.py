"""Evaluation report documents: JSON, schema-checked, self-consistent on load."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import jsonschema

from .harness import EvalRow
from .scoring import EvalSummary, aggregate

SCHEMA_VERSION = 1

_NUM = {"type": "number"}
_PAIR = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_TIER = {
    "type": "object",
    "required": ["passed", "skipped", "detail"],
    "properties": {"passed": {"type": ["boolean", "null"]}, "skipped": {"type": "boolean"}, "detail": {"type": "string"}},
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "tool_version", "config", "rows", "summary"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool_version": {"type": "string"},
        "config": {"type": "object"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "id", "parse_ok", "valid", "violations", "failures", "similarity",
                    "semantic_match", "semantic", "format", "tiers", "reward", "output_length",
                ],
                "properties": {
                    "id": {"type": "string"},
                    "parse_ok": {"type": "boolean"},
                    "valid": {"type": "boolean"},
                    "violations": {"type": "array", "items": {"type": "string"}},
                    "failures": {"type": "array", "items": {"type": "object", "required": ["code"]}},
                    "similarity": {"type": ["number", "null"]},
                    "semantic_match": {"type": ["boolean", "null"]},
                    "semantic": {"enum": ["yes", "no", "unknown"]},
                    "format": {"type": "string"},
                    "tiers": {"type": "object", "propertyNames": {"pattern": "^[1-4]$"}, "additionalProperties": _TIER},
                    "reward": {"type": "number", "minimum": 0, "maximum": 1},
                    "output_length": {"type": "integer", "minimum": 0},
                    "format_prompting": {"type": ["boolean", "null"]},
                    "temperature": {"type": ["number", "null"]},
                    "errors": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": [
                "n", "format_rate", "parse_rate", "semantic_rate", "ci_format", "ci_semantic",
                "avg_output_length", "failure_histogram",
            ],
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "format_rate": _NUM,
                "parse_rate": _NUM,
                "semantic_rate": _NUM,
                "ci_format": _PAIR,
                "ci_semantic": _PAIR,
                "avg_output_length": _NUM,
                "failure_histogram": {"type": "object", "additionalProperties": {"type": "integer"}},
            },
        },
    },
}


class ReportError(ValueError):
    """A report file that fails the schema or its own summary check."""


def tool_version() -> str:
    from . import __version__

    return __version__


@dataclass(frozen=True)
class ReportDocument:
    config: dict
    rows: tuple[EvalRow, ...]
    summary: EvalSummary
    tool_version: str = ""

    @classmethod
    def build(cls, records: Iterable, config: dict) -> "ReportDocument":
        rows = tuple(sorted((r.row() if hasattr(r, "row") else r for r in records), key=lambda r: r.id))
        return cls(dict(config), rows, aggregate(rows), tool_version())

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "config": self.config,
            "rows": [row.to_dict() for row in self.rows],
            "summary": self.summary.to_dict(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def write(self, path: str | os.PathLike) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def from_dict(cls, data: dict) -> "ReportDocument":
        try:
            jsonschema.validate(data, REPORT_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ReportError(f"schema violation at {where}: {exc.message}") from exc
        rows = tuple(EvalRow.from_dict(r) for r in data["rows"])
        summary = aggregate(rows)
        if _canonical(summary.to_dict()) != _canonical(data["summary"]):
            raise ReportError("embedded summary does not match the summary recomputed from rows")
        return cls(data["config"], rows, summary, data["tool_version"])

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ReportDocument":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ReportError(f"not JSON: {exc}") from exc
        return cls.from_dict(data)


def _canonical(value) -> str:
    return json.dumps(value, sort_keys=True)


def summary_table(report: ReportDocument) -> str:
    """Plain-text summary for terminals."""
    s = report.summary
    lines = [
        f"examples        {s.n}",
        f"format rate     {s.format_rate:.2f}  (95% CI {s.ci_format[0]:.3f}-{s.ci_format[1]:.3f})",
        f"parse rate      {s.parse_rate:.2f}",
        f"semantic rate   {s.semantic_rate:.2f}  (95% CI {s.ci_semantic[0]:.3f}-{s.ci_semantic[1]:.3f})",
    ]
    if s.semantic_over_parsed is not None:
        lines.append(f"tier-3 pass     {s.semantic_over_parsed:.2f}  (of rows reaching tier 3)")
    lines.append(f"avg length      {s.avg_output_length:.1f} tokens (approx, whitespace)")
    failures = {k: v for k, v in s.failure_histogram.items() if v}
    if failures:
        lines.append("primary failures:")
        lines += [f"  {name:<24}{count}" for name, count in failures.items()]
    lines.append("")
    width = max(len(r.id) for r in report.rows)
    lines.append(f"{'id':<{width}}  parse  semantic  format           reward  first violation")
    for r in report.rows:
        first = r.violations[0] if r.violations else "-"
        lines.append(
            f"{r.id:<{width}}  {'yes' if r.parse_ok else 'no':<5}  {r.semantic:<8}  {r.format:<15}  {r.reward:.3f}   {first}"
        )
    return "\n".join(lines) + "\n"
