"""Machine-checkable logic problems, a brute-force oracle and SMT-LIB export.

Two problem families are supported. A *bijection* assigns each entity a
distinct value under assign/forbid constraints; ordering puzzles are
bijections onto rank positions. A *horn* problem has Boolean variables,
literal facts and single-antecedent implications, solved by least fixed
point.
"""

from __future__ import annotations

import itertools
import json
import os
import re
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, NamedTuple, Union

MAX_BIJECTION = 8
MAX_HORN = 24
SOLVER_TIMEOUT = 10.0


class ProblemTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Assign:
    entity: str
    value: str

    def __str__(self) -> str:
        return f"assign({self.entity}, {self.value})"


@dataclass(frozen=True)
class Forbid:
    entity: str
    value: str

    def __str__(self) -> str:
        return f"forbid({self.entity}, {self.value})"


@dataclass(frozen=True)
class Before:
    """Ordering: ``first`` takes an earlier value than ``second``.

    Values are ordered by their position in the problem's value list, so
    rank puzzles list rank 1 first.
    """

    first: str
    second: str

    def __str__(self) -> str:
        return f"before({self.first}, {self.second})"


@dataclass(frozen=True)
class Distinct:
    """Injectivity: two entities may not share ``value``."""

    entities: tuple[str, ...]
    value: str

    def __str__(self) -> str:
        return f"distinct({', '.join(self.entities)}; {self.value})"


@dataclass(frozen=True)
class Lit:
    var: str
    truth: bool

    def __str__(self) -> str:
        return f"lit({self.var}, {str(self.truth).lower()})"


@dataclass(frozen=True)
class Rule:
    premise: str
    conclusion: str

    def __str__(self) -> str:
        return f"if {self.premise} then {self.conclusion}"


Constraint = Union[Assign, Forbid, Before, Distinct, Lit, Rule]


def _unique(items, what: str) -> None:
    seen = set()
    for item in items:
        if item in seen:
            raise ValueError(f"duplicate {what}: {item!r}")
        seen.add(item)


@dataclass(frozen=True)
class LogicProblem:
    kind: str
    entities: tuple[str, ...] = ()
    values: tuple[str, ...] = ()
    constraints: tuple[Assign | Forbid | Before, ...] = ()
    variables: tuple[str, ...] = ()
    facts: tuple[Lit, ...] = ()
    rules: tuple[Rule, ...] = ()
    phrases: Mapping[str, str] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self) -> None:
        object.__setattr__(self, "phrases", MappingProxyType(dict(self.phrases)))
        if self.kind == "bijection":
            _unique(self.entities, "entity")
            _unique(self.values, "value")
            if len(self.entities) != len(self.values):
                raise ValueError("bijection needs as many values as entities")
            for c in self.constraints:
                if isinstance(c, Before):
                    if c.first not in self.entities or c.second not in self.entities or c.first == c.second:
                        raise ValueError(f"constraint {c} names an undeclared or repeated entity")
                elif c.entity not in self.entities or c.value not in self.values:
                    raise ValueError(f"constraint {c} names an undeclared entity or value")
        elif self.kind == "horn":
            _unique(self.variables, "variable")
            names = set(self.variables)
            for lit in self.facts:
                if lit.var not in names:
                    raise ValueError(f"fact {lit} names an undeclared variable")
            for rule in self.rules:
                if rule.premise not in names or rule.conclusion not in names:
                    raise ValueError(f"rule {rule} names an undeclared variable")
        else:
            raise ValueError(f"unknown problem kind {self.kind!r}")

    def __hash__(self) -> int:
        return hash((self.kind, self.entities, self.values, self.constraints, self.variables, self.facts, self.rules))

    @property
    def size(self) -> int:
        return len(self.entities) if self.kind == "bijection" else len(self.variables)

    @property
    def given(self) -> frozenset[str]:
        """Entities or variables whose value the problem states outright."""
        if self.kind == "bijection":
            return frozenset(c.entity for c in self.constraints if isinstance(c, Assign))
        return frozenset(lit.var for lit in self.facts)

    def all_constraints(self) -> tuple:
        return self.constraints if self.kind == "bijection" else self.facts + self.rules

    @classmethod
    def from_dict(cls, data: Mapping) -> "LogicProblem":
        kind = data["kind"]
        if kind == "bijection":
            constraints = []
            for item in data.get("constraints", []):
                ((op, (a, b)),) = item.items()
                make = {"assign": Assign, "forbid": Forbid, "before": Before}[op]
                constraints.append(make(str(a), str(b)))
            return cls(
                kind=kind,
                entities=tuple(map(str, data["entities"])),
                values=tuple(map(str, data["values"])),
                constraints=tuple(constraints),
            )
        return cls(
            kind=kind,
            variables=tuple(map(str, data["variables"])),
            facts=tuple(Lit(str(f["var"]), bool(f["value"])) for f in data.get("facts", [])),
            rules=tuple(Rule(str(r["if"]), str(r["then"])) for r in data.get("rules", [])),
            phrases=data.get("phrases", {}),
        )

    def to_dict(self) -> dict:
        if self.kind == "bijection":
            return {
                "kind": self.kind,
                "entities": list(self.entities),
                "values": list(self.values),
                "constraints": [_constraint_dict(c) for c in self.constraints],
            }
        out = {
            "kind": self.kind,
            "variables": list(self.variables),
            "facts": [{"var": f.var, "value": f.truth} for f in self.facts],
            "rules": [{"if": r.premise, "then": r.conclusion} for r in self.rules],
        }
        if self.phrases:
            out["phrases"] = dict(self.phrases)
        return out


def _constraint_dict(c) -> dict:
    if isinstance(c, Before):
        return {"before": [c.first, c.second]}
    return {"assign" if isinstance(c, Assign) else "forbid": [c.entity, c.value]}


def load_problem(path: str | os.PathLike) -> LogicProblem:
    return LogicProblem.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class AssignmentAnswer:
    """Entity -> value (bijection) or variable -> truth (horn).

    Horn answers from the open-world oracle may map a variable to None,
    meaning undetermined. Partial answers simply omit keys.
    """

    mapping: Mapping[str, object] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self) -> None:
        object.__setattr__(self, "mapping", MappingProxyType(dict(self.mapping)))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AssignmentAnswer):
            return dict(self.mapping) == dict(other.mapping)
        if isinstance(other, Mapping):
            return dict(self.mapping) == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.mapping.items(), key=lambda kv: kv[0])))

    def __len__(self) -> int:
        return len(self.mapping)

    def __getitem__(self, key: str):
        return self.mapping[key]

    def get(self, key: str, default=None):
        return self.mapping.get(key, default)

    def __repr__(self) -> str:
        return f"AssignmentAnswer({dict(self.mapping)!r})"


def _as_answer(answer) -> AssignmentAnswer:
    return answer if isinstance(answer, AssignmentAnswer) else AssignmentAnswer(answer)


# ---------------------------------------------------------------- oracle

def brute_force_solve(problem: LogicProblem, world: str = "closed") -> list[AssignmentAnswer]:
    """All solutions, enumerated exhaustively.

    Bijections try every permutation. Horn problems take the least fixed
    point of the rules from the true facts; a variable left unforced is
    false in the closed world and None (undetermined) in the open world.
    A contradiction with a false fact yields no solution.
    """
    if world not in ("closed", "open"):
        raise ValueError(f"unknown world {world!r}")
    if problem.kind == "bijection":
        if problem.size > MAX_BIJECTION:
            raise ProblemTooLarge(f"bijection of size {problem.size} exceeds {MAX_BIJECTION}")
        solutions = []
        for perm in itertools.permutations(problem.values):
            candidate = dict(zip(problem.entities, perm))
            if all(_holds(c, candidate, problem.values) for c in problem.constraints):
                solutions.append(AssignmentAnswer(candidate))
        return solutions
    if problem.size > MAX_HORN:
        raise ProblemTooLarge(f"horn problem with {problem.size} variables exceeds {MAX_HORN}")
    true = {lit.var for lit in problem.facts if lit.truth}
    changed = True
    while changed:
        changed = False
        for rule in problem.rules:
            if rule.premise in true and rule.conclusion not in true:
                true.add(rule.conclusion)
                changed = True
    false = {lit.var for lit in problem.facts if not lit.truth}
    if true & false:
        return []
    default = False if world == "closed" else None
    return [
        AssignmentAnswer(
            {v: True if v in true else (False if v in false else default) for v in problem.variables}
        )
    ]


def _holds(constraint, mapping: Mapping[str, object], values: tuple[str, ...] = ()) -> bool:
    """Whether ``mapping`` (possibly partial) does not break ``constraint``."""
    if isinstance(constraint, Assign):
        if constraint.entity in mapping:
            return mapping[constraint.entity] == constraint.value
        return constraint.value not in mapping.values()
    if isinstance(constraint, Forbid):
        return mapping.get(constraint.entity) != constraint.value
    if isinstance(constraint, Before):
        a, b = mapping.get(constraint.first), mapping.get(constraint.second)
        if a is None or b is None or a not in values or b not in values:
            return True
        return values.index(a) < values.index(b)
    if isinstance(constraint, Lit):
        value = mapping.get(constraint.var)
        return value is None or value == constraint.truth
    if isinstance(constraint, Rule):
        return not (mapping.get(constraint.premise) is True and mapping.get(constraint.conclusion) is False)
    if isinstance(constraint, Distinct):
        return sum(mapping.get(e) == constraint.value for e in constraint.entities) <= 1
    raise TypeError(constraint)


@dataclass(frozen=True)
class Verdict:
    status: str
    violated: tuple = ()
    expected: AssignmentAnswer | None = None
    solutions: int = 0

    STATUSES = ("unique_and_matches", "satisfies_but_not_unique", "violates", "no_solution", "mismatch")

    @property
    def ok(self) -> bool:
        return self.status == "unique_and_matches"

    def __str__(self) -> str:
        if self.status == "violates":
            return f"violates({', '.join(map(str, self.violated))})"
        if self.status == "mismatch" and self.expected is not None:
            return f"mismatch(expected={dict(self.expected.mapping)})"
        return self.status

    def to_dict(self) -> dict:
        out: dict = {"status": self.status, "solutions": self.solutions}
        if self.violated:
            out["violated"] = [str(c) for c in self.violated]
        if self.expected is not None:
            out["expected"] = dict(self.expected.mapping)
        return out


def _violations(problem: LogicProblem, mapping: Mapping[str, object]) -> list:
    broken = [c for c in problem.all_constraints() if not _holds(c, mapping, problem.values)]
    if problem.kind == "bijection":
        by_value: dict[str, list[str]] = {}
        for entity in problem.entities:
            if entity in mapping:
                by_value.setdefault(mapping[entity], []).append(entity)
        broken += [Distinct(tuple(es), v) for v, es in by_value.items() if len(es) > 1]
    return broken


def verify_answer(problem: LogicProblem, answer, world: str = "closed") -> Verdict:
    """Check an answer against the constraints and the oracle's solutions."""
    mapping = dict(_as_answer(answer).mapping)
    broken = _violations(problem, mapping)
    if broken:
        return Verdict("violates", violated=tuple(broken))
    solutions = brute_force_solve(problem, world)
    if not solutions:
        return Verdict("no_solution")
    consistent = [s for s in solutions if all(s.get(k) == v for k, v in mapping.items())]
    count = len(solutions)
    undetermined = any(v is None for v in solutions[0].mapping.values())
    if count == 1 and not undetermined:
        if mapping and dict(solutions[0].mapping) == mapping:
            return Verdict("unique_and_matches", solutions=1)
        return Verdict("mismatch", expected=solutions[0], solutions=1)
    if consistent and mapping:
        return Verdict("satisfies_but_not_unique", solutions=count)
    return Verdict("mismatch", solutions=count)


# ---------------------------------------------------------------- answer text

def _name(text: str) -> str:
    return r"(?<![\w])" + re.escape(text) + r"(?![\w])"


def parse_assignment(problem: LogicProblem, text: str) -> AssignmentAnswer:
    """Read templated answer sentences into a (possibly partial) answer.

    Bijection forms: "<E> has the <v>", "<E> sits in seat <n>", "<E>: <v>"
    and rank chains "A > B > C". Horn forms: "<V> is true/false",
    "<V>: true/false" and any declared phrase for a variable. Unmatched
    clauses are ignored; the first statement about a name wins.
    """
    found: list[tuple[int, str, object]] = []
    flags = re.IGNORECASE
    if problem.kind == "bijection":
        for entity in problem.entities:
            e = _name(entity)
            for value in problem.values:
                v = _name(value)
                patterns = (
                    rf"{e}\s+(?:has|owns|gets|keeps|holds)\s+(?:the\s+|a\s+|an\s+)?{v}",
                    rf"{e}\s+(?:sits|is\s+seated|is)\s+in\s+(?:seat|position|place)\s+{v}",
                    rf"{e}\s*[:=]\s*(?:the\s+)?{v}",
                    rf"{e}\s+(?:is|ranks)\s+(?:in\s+)?(?:rank|position)\s+{v}",
                )
                for pattern in patterns:
                    for m in re.finditer(pattern, text, flags):
                        found.append((m.start(), entity, value))
        names = "|".join(re.escape(e) for e in sorted(problem.entities, key=len, reverse=True))
        for m in re.finditer(rf"(?:{names})(?:\s*>\s*(?:{names}))+", text, flags):
            chain = [p.strip() for p in m.group(0).split(">")]
            lookup = {e.lower(): e for e in problem.entities}
            if len(chain) == len(problem.values):
                for rank, token in enumerate(chain):
                    found.append((m.start(), lookup[token.lower()], problem.values[rank]))
    else:
        for var in problem.variables:
            n = _name(var)
            for truth, words in ((True, "true"), (False, "false")):
                for pattern in (rf"{n}\s+(?:is|=)\s+{words}\b", rf"{n}\s*:\s*{words}\b"):
                    for m in re.finditer(pattern, text, flags):
                        found.append((m.start(), var, truth))
            for m in re.finditer(rf"{n}\s+is\s+not\s+true\b", text, flags):
                found.append((m.start(), var, False))
            phrase = problem.phrases.get(var)
            if phrase:
                for m in re.finditer(_name(phrase), text, flags):
                    found.append((m.start(), var, True))
    mapping: dict[str, object] = {}
    for _, name, value in sorted(found, key=lambda item: item[0]):
        mapping.setdefault(name, value)
    keys = problem.entities if problem.kind == "bijection" else problem.variables
    return AssignmentAnswer({k: mapping[k] for k in keys if k in mapping})


# ---------------------------------------------------------------- SMT-LIB

class SmtScripts(NamedTuple):
    satisfies: str
    uniqueness: str


def _symbol(name: str, prefix: str = "") -> str:
    text = f"{prefix}{name}"
    if re.fullmatch(r"[A-Za-z~!@$%^&*_+=<>.?/-][0-9A-Za-z~!@$%^&*_+=<>.?/-]*", text):
        return text
    if "|" in text or "\\" in text:
        return "|" + re.sub(r"[|\\]", "_", text) + "|"
    return f"|{text}|"


def _header(problem: LogicProblem, purpose: str) -> list[str]:
    return [f"; nyayakit {problem.kind} encoding: {purpose}", "(set-logic QF_LIA)"]


def _bijection_body(problem: LogicProblem) -> list[str]:
    index = {v: i for i, v in enumerate(problem.values)}
    n = len(problem.values)
    out = ["; values: " + ", ".join(f"{i} = {v}" for v, i in index.items())]
    syms = [_symbol(e) for e in problem.entities]
    out += [f"(declare-fun {s} () Int)" for s in syms]
    out += [f"(assert (and (<= 0 {s}) (< {s} {n})))" for s in syms]
    if len(syms) > 1:
        out.append(f"(assert (distinct {' '.join(syms)}))")
    for c in problem.constraints:
        if isinstance(c, Before):
            out.append(f"(assert (< {_symbol(c.first)} {_symbol(c.second)})) ; {c}")
            continue
        atom = f"(= {_symbol(c.entity)} {index[c.value]})"
        out.append(f"(assert {atom}) ; {c}" if isinstance(c, Assign) else f"(assert (not {atom})) ; {c}")
    return out


def _horn_body(problem: LogicProblem) -> list[str]:
    out = [f"(declare-const {_symbol(v)} Bool)" for v in problem.variables]
    out += [f"(declare-const {_symbol(v, 'rank-')} Int)" for v in problem.variables]
    true_facts = {lit.var for lit in problem.facts if lit.truth}
    for lit in problem.facts:
        sym = _symbol(lit.var)
        out.append(f"(assert {sym}) ; {lit}" if lit.truth else f"(assert (not {sym})) ; {lit}")
    for rule in problem.rules:
        out.append(f"(assert (=> {_symbol(rule.premise)} {_symbol(rule.conclusion)})) ; {rule}")
    # closed world: a true variable needs a fact or a well-founded supporting rule
    for var in problem.variables:
        if var in true_facts:
            continue
        sym, rank = _symbol(var), _symbol(var, "rank-")
        support = [
            f"(and {_symbol(r.premise)} (< {_symbol(r.premise, 'rank-')} {rank}))"
            for r in problem.rules
            if r.conclusion == var
        ]
        if not support:
            out.append(f"(assert (not {sym})) ; unsupported")
        elif len(support) == 1:
            out.append(f"(assert (=> {sym} {support[0]})) ; support")
        else:
            out.append(f"(assert (=> {sym} (or {' '.join(support)}))) ; support")
    return out


def _answer_term(problem: LogicProblem, answer: AssignmentAnswer) -> str:
    atoms = []
    if problem.kind == "bijection":
        index = {v: i for i, v in enumerate(problem.values)}
        for entity in problem.entities:
            if entity in answer.mapping:
                atoms.append(f"(= {_symbol(entity)} {index[answer.mapping[entity]]})")
    else:
        for var in problem.variables:
            value = answer.mapping.get(var)
            if value is not None:
                atoms.append(_symbol(var) if value else f"(not {_symbol(var)})")
    if not atoms:
        return "true"
    return atoms[0] if len(atoms) == 1 else f"(and {' '.join(atoms)})"


def emit_smtlib(problem: LogicProblem, answer=None):
    """SMT-LIB 2 encoding of ``problem``.

    Without an answer, returns one script asserting the constraints. With
    an answer, returns :class:`SmtScripts`: ``satisfies`` (constraints and
    answer, expect sat) and ``uniqueness`` (constraints and not-answer,
    expect unsat when the answer is the only solution). Horn problems use
    the closed-world reading.
    """
    body = _bijection_body(problem) if problem.kind == "bijection" else _horn_body(problem)
    if answer is None:
        return "\n".join(_header(problem, "constraints") + body + ["(check-sat)", ""])
    term = _answer_term(problem, _as_answer(answer))
    sat = _header(problem, "answer satisfies constraints (expect sat)") + body
    sat += [f"(assert {term})", "(check-sat)", ""]
    uniq = _header(problem, "another solution exists (expect unsat if unique)") + body
    uniq += [f"(assert (not {term}))", "(check-sat)", ""]
    return SmtScripts("\n".join(sat), "\n".join(uniq))


class SolverResult(NamedTuple):
    verdict: str
    output: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict != "solver-error"


def run_solver(script: str, solver: str = "z3", timeout: float = SOLVER_TIMEOUT) -> SolverResult:
    """Run an SMT-LIB 2 solver on ``script`` and read the first output line.

    Every failure (missing executable, timeout, unexpected output) comes
    back as the ``solver-error`` verdict with the captured text.
    """
    executable = shutil.which(solver) or (solver if os.path.isfile(solver) else None)
    if executable is None:
        return SolverResult("solver-error", f"solver not found: {solver}")
    with tempfile.TemporaryDirectory(prefix="nyayakit-smt-") as tmp:
        path = Path(tmp) / "problem.smt2"
        path.write_text(script, encoding="utf-8")
        try:
            proc = subprocess.run(
                [executable, str(path)], capture_output=True, text=True, timeout=timeout
            )
        except subprocess.TimeoutExpired:
            return SolverResult("solver-error", f"timed out after {timeout:g} s")
        except OSError as exc:
            return SolverResult("solver-error", str(exc))
    output = proc.stdout + proc.stderr
    first = proc.stdout.strip().splitlines()[0].strip() if proc.stdout.strip() else ""
    if first in ("sat", "unsat", "unknown"):
        return SolverResult(first, output)
    return SolverResult("solver-error", output.strip() or f"exit status {proc.returncode}")


def cross_check(problem: LogicProblem, answer, solver: str = "z3", timeout: float = SOLVER_TIMEOUT) -> dict:
    """Solver verdicts on both scripts next to the oracle's expectation."""
    answer = _as_answer(answer)
    scripts = emit_smtlib(problem, answer)
    verdict = verify_answer(problem, answer)
    solutions = brute_force_solve(problem)
    expect_a = "sat" if any(all(s.get(k) == v for k, v in answer.mapping.items()) for s in solutions) else "unsat"
    expect_b = "sat" if any(
        not all(s.get(k) == v for k, v in answer.mapping.items()) for s in solutions
    ) else "unsat"
    a = run_solver(scripts.satisfies, solver, timeout)
    b = run_solver(scripts.uniqueness, solver, timeout)
    agree = a.verdict == expect_a and b.verdict == expect_b
    return {
        "oracle": verdict.status,
        "satisfies": a.verdict,
        "uniqueness": b.verdict,
        "expected": [expect_a, expect_b],
        "agree": agree if a.ok and b.ok else None,
        "error": None if a.ok and b.ok else (a.output if not a.ok else b.output),
    }
