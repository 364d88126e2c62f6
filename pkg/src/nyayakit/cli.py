"""Command-line entry point: ``nyayakit <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .clients import ClientError, HttpClient, ReplayClient, ReplayJudge
from .corpus import (
    CorpusError,
    corpus_stats,
    dedup,
    load_examples,
    read_document,
    read_jsonl,
    split_corpus,
    to_jsonl,
    write_jsonl,
)
from .grammar import emit_grammar
from .harness import EvalConfig, evaluate_examples, rejection_sample, with_givens
from .logic import emit_smtlib, load_problem, parse_assignment, run_solver, verify_answer
from .parser import parse_frontmatter
from .report import ReportDocument, ReportError, summary_table
from .validator import ValidatorConfig

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNREADABLE = 3
EXIT_DATA = 4
EXIT_CLIENT = 5


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


def _validator_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fallacy-set", choices=("canonical", "alternate", "either"), default="either")
    p.add_argument("--strict-udaharana", action="store_true", help='require "wherever ... there" in every Udaharana')


def _validator_config(args, corpus_mode: bool = False) -> ValidatorConfig:
    return ValidatorConfig(
        fallacy_set=args.fallacy_set,
        universal_rule="strict" if args.strict_udaharana else "lenient",
        require_leading_samshaya=getattr(args, "require_leading_samshaya", False),
        corpus_mode=corpus_mode,
    )


def _existing(path: str, kind: str = "any") -> Path:
    p = Path(path)
    if kind == "dir" and not p.is_dir():
        raise CliError(f"not a readable directory: {path}", EXIT_UNREADABLE)
    if kind == "file" and not p.is_file():
        raise CliError(f"not a readable file: {path}", EXIT_UNREADABLE)
    if not p.exists():
        raise CliError(f"no such path: {path}", EXIT_UNREADABLE)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> int:
    files: list[Path] = []
    for raw in args.paths:
        path = _existing(raw)
        files += sorted(path.glob("*.md")) if path.is_dir() else [path]
    config = _validator_config(args, corpus_mode=args.corpus)
    results = []
    for path in files:
        try:
            doc = read_document(path, config)
        except (OSError, UnicodeDecodeError) as exc:
            raise CliError(f"cannot read {path}: {exc}", EXIT_UNREADABLE) from exc
        results.append((path, doc.report))
    if args.format == "json":
        payload = [
            {
                "path": str(path),
                "valid": report.valid,
                "quality_score": report.quality_score,
                "violations": [{"code": v.code, "message": v.message} for v in report.violations],
            }
            for path, report in results
        ]
        print(json.dumps(payload, indent=2))
    else:
        for path, report in results:
            if report.valid:
                print(f"{path}: valid")
            else:
                print(f"{path}: invalid")
                for v in report.violations:
                    print(f"  {v.code}: {v.message}")
    return EXIT_OK if all(r.valid for _, r in results) else EXIT_FAIL


def _replay_dirs(args) -> tuple[Path, Path | None]:
    root = _existing(args.replay, "dir")
    outputs = root / "outputs" if (root / "outputs").is_dir() else root
    corpus = Path(args.corpus) if args.corpus else root / "corpus"
    return outputs, corpus


def cmd_evaluate(args) -> int:
    try:
        tiers = tuple(int(t) for t in args.tiers.split(",") if t.strip())
        config = EvalConfig(
            tiers=tiers,
            max_new_tokens=args.max_new_tokens,
            temperature=args.temperature,
            format_prompting=not args.no_format_prompt,
            samples=args.samples,
            validator=_validator_config(args),
            solver=args.solver,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    if args.replay:
        outputs, corpus = _replay_dirs(args)
        client = ReplayClient(outputs)
    else:
        if not args.corpus:
            raise CliError("--corpus is required with --endpoint", EXIT_USAGE)
        corpus = Path(args.corpus)
        try:
            client = HttpClient(args.endpoint)
        except ClientError as exc:
            raise CliError(str(exc), EXIT_CLIENT) from exc
    _existing(str(corpus), "dir")
    judge = ReplayJudge(_existing(args.judge, "dir")) if args.judge else None
    examples = load_examples(corpus)
    if config.samples > 1:
        records = []
        for example in examples:
            result = rejection_sample(example, client, config, judge)
            valid = [r for r in result.records if r.report.valid]
            records.append(valid[0] if valid else result.records[-1])
    else:
        records = evaluate_examples(examples, client, config, judge)
    echo = config.to_dict()
    echo["source"] = {"replay": args.replay} if args.replay else {"endpoint": args.endpoint}
    report = ReportDocument.build(records, echo)
    if args.out:
        report.write(args.out)
        sys.stdout.write(summary_table(report))
    else:
        sys.stdout.write(report.dumps())
    return EXIT_OK


def cmd_data(args) -> int:
    if args.action == "convert":
        instances = to_jsonl(_existing(args.inp, "dir"))
        if args.out:
            write_jsonl(instances, args.out)
        else:
            sys.stdout.write("".join(i.to_json() + "\n" for i in instances))
        print(f"converted {len(instances)} documents", file=sys.stderr)
    elif args.action == "split":
        instances = read_jsonl(_existing(args.inp, "file"))
        train, val = split_corpus(instances, args.ratio, args.seed)
        out = Path(args.out or ".")
        out.mkdir(parents=True, exist_ok=True)
        write_jsonl(train, out / "train.jsonl")
        write_jsonl(val, out / "val.jsonl")
        print(f"train {len(train)} / val {len(val)}")
    elif args.action == "dedup":
        kept, dropped = dedup(read_jsonl(_existing(args.inp, "file")))
        if args.out:
            write_jsonl(kept, args.out)
        for d in dropped:
            print(f"dropped {d.id}: {d.reason}")
        print(f"kept {len(kept)}, dropped {len(dropped)}")
    else:
        root = _existing(args.inp, "dir")
        fronts = []
        for path in sorted(root.glob("*.md")):
            front, _, _ = parse_frontmatter(path.read_text(encoding="utf-8"))
            if front is not None:
                fronts.append(front)
        _emit(json.dumps(corpus_stats(fronts), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_grammar(args) -> int:
    text = emit_grammar(_validator_config(args))
    Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        problem = load_problem(_existing(args.problem, "file"))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise CliError(f"bad problem file: {exc}", EXIT_DATA) from exc
    answer = with_givens(problem, parse_assignment(problem, args.answer))
    verdict = verify_answer(problem, answer)
    print(verdict)
    if args.emit_smt:
        out = Path(args.emit_smt)
        out.mkdir(parents=True, exist_ok=True)
        scripts = emit_smtlib(problem, answer)
        (out / "satisfies.smt2").write_text(scripts.satisfies, encoding="utf-8")
        (out / "uniqueness.smt2").write_text(scripts.uniqueness, encoding="utf-8")
    if args.solver:
        scripts = emit_smtlib(problem, answer)
        a = run_solver(scripts.satisfies, args.solver)
        b = run_solver(scripts.uniqueness, args.solver)
        print(f"solver: satisfies={a.verdict} uniqueness={b.verdict}")
        if not (a.ok and b.ok):
            return EXIT_CLIENT
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_report(args) -> int:
    report = ReportDocument.load(_existing(args.inp, "file"))
    sys.stdout.write(summary_table(report))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nyayakit", description="Validate and score six-phase reasoning traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check trace files")
    p.add_argument("paths", nargs="+")
    _validator_args(p)
    p.add_argument("--require-leading-samshaya", action="store_true")
    p.add_argument("--corpus", action="store_true", help="also require corpus frontmatter")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="run the tiered evaluation")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--replay", metavar="DIR")
    source.add_argument("--endpoint", metavar="URL")
    p.add_argument("--corpus", metavar="DIR")
    p.add_argument("--tiers", default="1,3")
    p.add_argument("--max-new-tokens", type=int)
    p.add_argument("--temperature", type=float, default=0.0)
    p.add_argument("--no-format-prompt", action="store_true")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--judge", metavar="DIR", help="directory of stored judge responses")
    p.add_argument("--solver", metavar="PATH")
    p.add_argument("--out", metavar="FILE")
    _validator_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("data", help="dataset tooling")
    p.add_argument("action", choices=("convert", "split", "dedup", "stats"))
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--ratio", type=float, default=0.8)
    p.set_defaults(func=cmd_data)

    p = sub.add_parser("grammar", help="write a GBNF grammar")
    p.add_argument("--out", required=True)
    _validator_args(p)
    p.set_defaults(func=cmd_grammar)

    p = sub.add_parser("verify", help="check an answer against a logic problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--answer", required=True)
    p.add_argument("--solver", metavar="PATH")
    p.add_argument("--emit-smt", metavar="DIR")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="print a saved report")
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.status
    except ReportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ClientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLIENT
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
