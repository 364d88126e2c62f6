"""Regenerate the stage, corpus and rejection-sampling fixtures.

The appendix traces under fixtures/appendix/outputs are hand-copied and
are not touched here. Run from the repository root:

    python3 tools/build_fixtures.py
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

ROOT = Path(__file__).resolve().parent.parent / "fixtures"
APPENDIX = ROOT / "appendix" / "outputs"


@dataclass(frozen=True)
class Problem:
    id: str
    problem_type: str
    difficulty: str
    ground_truth: str
    statement: str
    sidecar: dict | None = None
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Trace:
    doubt: str
    doubt_why: str
    pratyaksha: tuple[str, ...]
    anumana: tuple[str, ...]
    upamana: str
    shabda: str
    syllogisms: tuple[tuple[str, str, str, str, str, str], ...]
    tarka: tuple[str, str, str, str]
    answer: str
    why: str
    fallacies: tuple[str, ...] = ("Savyabhichara", "Viruddha", "Asiddha", "Satpratipaksha", "Badhita")
    drop: tuple[str, ...] = ()


def bullets(lines) -> str:
    return "\n".join(f"- {line}" for line in lines)


def render(t: Trace) -> str:
    parts = []
    if "samshaya" not in t.drop:
        parts.append(
            "## Samshaya (Doubt Analysis)\n"
            f"**Doubt Type**: {t.doubt}\n\n"
            f"**Justification**: {t.doubt_why}"
        )
    if "pramana" not in t.drop:
        parts.append(
            "## Pramana (Sources of Knowledge)\n"
            f"### Pratyaksha (Direct Perception)\n{bullets(t.pratyaksha)}\n\n"
            f"### Anumana (Inference)\n{bullets(t.anumana)}\n\n"
            f"### Upamana (Comparison)\n- {t.upamana}\n\n"
            f"### Shabda (Testimony)\n- {t.shabda}"
        )
    if "pancha_avayava" not in t.drop:
        blocks = []
        if "syllogisms" not in t.drop:
            for i, (topic, thesis, reason, rule, application, conclusion) in enumerate(t.syllogisms, start=1):
                blocks.append(
                    f"### Syllogism {i}: {topic}\n"
                    f"**Pratijna (Thesis)**: {thesis}\n"
                    f"**Hetu (Reason)**: {reason}\n"
                    f"**Udaharana (Universal + Example)**: {rule}\n"
                    f"**Upanaya (Application)**: {application}\n"
                    f"**Nigamana (Conclusion)**: {conclusion}"
                )
        else:
            blocks.append("The answer follows directly from the constraints above.")
        parts.append("## Pancha Avayava (5-Member Syllogism)\n" + "\n\n".join(blocks))
    if "tarka" not in t.drop:
        hyp, cons, analysis, resolution = t.tarka
        lines = [f"**Hypothesis**: {hyp}", f"**Consequence**: {cons}"]
        if "analysis" not in t.drop:
            lines.append(f"**Analysis**: {analysis}")
        lines.append(f"**Resolution**: {resolution}")
        parts.append("## Tarka (Counterfactual Reasoning)\n" + "\n".join(lines))
    if "hetvabhasa" not in t.drop:
        parts.append("## Hetvabhasa (Fallacy Check)\n" + "\n".join(f"Check for {f}: No" for f in t.fallacies))
    if "nirnaya" not in t.drop:
        lines = [f"**Final Answer**: {t.answer}"]
        if "justification" not in t.drop:
            lines.append(f"**Justification**: {t.why}")
        lines.append("**Confidence**: High")
        parts.append("## Nirnaya (Ascertainment)\n" + "\n".join(lines))
    return "\n\n---\n\n".join(parts) + "\n"


def problem_doc(p: Problem, trace: str = "") -> str:
    front = {"id": p.id, "problem_type": p.problem_type, "difficulty": p.difficulty, "ground_truth": p.ground_truth}
    front["metadata"] = {"z3_verifiable": p.sidecar is not None, **p.metadata}
    text = "---\n" + yaml.safe_dump(front, sort_keys=False, width=200) + "---\n\n# Problem\n\n" + p.statement.strip() + "\n"
    if trace:
        text += "\n---\n\n" + trace
    return text


def write_corpus(directory: Path, problems, traces: dict[str, str] | None = None) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for p in problems:
        (directory / f"{p.id}.md").write_text(problem_doc(p, (traces or {}).get(p.id, "")), encoding="utf-8")
        if p.sidecar is not None:
            (directory / f"{p.id}.problem.json").write_text(json.dumps(p.sidecar, indent=2) + "\n", encoding="utf-8")


def bijection(entities, values, assign=(), forbid=()):
    return {
        "kind": "bijection",
        "entities": list(entities),
        "values": list(values),
        "constraints": [{"assign": list(a)} for a in assign] + [{"forbid": list(f)} for f in forbid],
    }


def horn(variables, facts, rules, phrases=None):
    out = {
        "kind": "horn",
        "variables": list(variables),
        "facts": [{"var": v, "value": b} for v, b in facts],
        "rules": [{"if": a, "then": b} for a, b in rules],
    }
    if phrases:
        out["phrases"] = phrases
    return out


# ---------------------------------------------------------------- problems

TRANSITIVE = Problem(
    "pramana-003",
    "transitive_reasoning",
    "simple",
    "Alice > Bob > Carol > David",
    """Four runners (Alice, Bob, Carol, David) finish a race with no ties.

**Constraints**:
1. Alice finishes ahead of Bob.
2. Bob finishes ahead of Carol.
3. Carol finishes ahead of David.

**Question**: In what order do the runners finish?""",
    {
        "kind": "bijection",
        "entities": ["Alice", "Bob", "Carol", "David"],
        "values": ["1", "2", "3", "4"],
        "constraints": [{"before": ["Alice", "Bob"]}, {"before": ["Bob", "Carol"]}, {"before": ["Carol", "David"]}],
    },
)

CHAIN = Problem(
    "pramana-005",
    "multi_step_deduction",
    "moderate",
    "All four statements are true: P is true, Q is true, R is true, S is true",
    """Consider four logical statements P, Q, R, and S. The following information is known:

**Given Facts**:
1. If P is true, then Q is true
2. If Q is true, then R is true
3. If R is true, then S is true
4. P is true

**Question**: What are the truth values of P, Q, R, and S?""",
    horn("PQRS", [("P", True)], [("P", "Q"), ("Q", "R"), ("R", "S")]),
)

PETS = Problem(
    "test-001",
    "constraint_satisfaction",
    "simple",
    "Alice: fish, Bob: cat, Carol: dog",
    """Alice, Bob, and Carol each have one pet: a cat, a dog, or a fish.

**Constraints**:
1. Alice does not have the dog.
2. Bob has the cat.
3. Carol does not have the fish.

**Question**: Who has which pet?""",
    bijection(["Alice", "Bob", "Carol"], ["cat", "dog", "fish"], [("Bob", "cat")], [("Alice", "dog"), ("Carol", "fish")]),
)

SEATING = Problem(
    "test-002",
    "constraint_satisfaction",
    "moderate",
    "Dana sits in seat 1, Ben sits in seat 2, Cara sits in seat 3, Alex sits in seat 4",
    """Four people (Alex, Ben, Cara, Dana) sit in four numbered seats (1, 2, 3, 4). Each person sits in exactly one seat.

**Constraints**:
1. Dana sits in seat 1.
2. Ben sits in seat 2.
3. Alex does not sit in seat 1.
4. Cara does not sit in seat 4.

**Question**: Where does each person sit?""",
    bijection(
        ["Alex", "Ben", "Cara", "Dana"], ["1", "2", "3", "4"], [("Dana", "1"), ("Ben", "2")], [("Alex", "1"), ("Cara", "4")]
    ),
)

COLORS = Problem(
    "test-003",
    "set_membership",
    "simple",
    "Liam: green, Mia: red, Noah: blue",
    """Liam, Mia, and Noah each chose a different color: red, green, or blue.

**Constraints**:
1. Mia chose red.
2. Liam did not choose blue.

**Question**: Which color did each person choose?""",
    bijection(["Liam", "Mia", "Noah"], ["red", "green", "blue"], [("Mia", "red")], [("Liam", "blue")]),
)

DRINKS = Problem(
    "test-004",
    "constraint_satisfaction",
    "simple",
    "Eve: tea, Finn: juice, Gus: coffee",
    """Eve, Finn, and Gus each ordered one drink: tea, juice, or coffee. No two ordered the same drink.

**Constraints**:
1. Eve did not order coffee.
2. Finn ordered juice.

**Question**: Who ordered which drink?""",
    bijection(["Eve", "Finn", "Gus"], ["tea", "juice", "coffee"], [("Finn", "juice")], [("Eve", "coffee")]),
)

CONTRAPOSITIVE = Problem(
    "test-005",
    "boolean_sat",
    "simple",
    "A: false, B: false",
    """Two propositions A and B are each either true or false.

**Given Facts**:
1. If A is true, then B is true.
2. B is false.

**Question**: What are the truth values of A and B?""",
    horn("AB", [("B", False)], [("A", "B")]),
)

SUBJECTS = Problem(
    "test-006",
    "set_membership",
    "simple",
    "Maya: Math, Nikhil: Science, Priya: Art",
    """Maya, Nikhil, and Priya each teach one subject: Math, Science, or Art.

**Constraints**:
1. Maya teaches Math.
2. Priya does not teach Science.

**Question**: Which subject does each person teach?""",
    bijection(["Maya", "Nikhil", "Priya"], ["Math", "Science", "Art"], [("Maya", "Math")], [("Priya", "Science")]),
)

SHELVES = Problem(
    "test-007",
    "constraint_satisfaction",
    "simple",
    "Shelf A: Math, B: History, C: Physics",
    """Three shelves (A, B, C) each hold books on exactly one subject: Math, History, or Physics.

**Constraints**:
1. Shelf A holds Math.
2. Shelf B does not hold Physics.

**Question**: Which subject is on each shelf?""",
    bijection(["A", "B", "C"], ["Math", "History", "Physics"], [("A", "Math")], [("B", "Physics")]),
)

LADDER = Problem(
    "test-008",
    "multi_step_deduction",
    "moderate",
    "W: true, X: true, Y: true, Z: true",
    """Four propositions W, X, Y, and Z are each either true or false.

**Given Facts**:
1. W is true.
2. If W is true, then X is true.
3. If X is true, then Y is true.
4. If Y is true, then Z is true.

**Question**: Which of W, X, Y, Z are true?""",
    horn("WXYZ", [("W", True)], [("W", "X"), ("X", "Y"), ("Y", "Z")]),
)

RAIN = Problem(
    "pramana-002",
    "multi_step_deduction",
    "simple",
    "It is raining, the ground is wet, the match is canceled, the stadium is empty",
    """Consider the following statements.

**Given Facts**:
1. If it rains, then the ground is wet.
2. If the ground is wet, then the match is canceled.
3. If the match is canceled, then the stadium is empty.
4. It is raining.

**Question**: What can we conclude about the ground, the match, and the stadium?""",
    horn(
        ["rain", "wet", "canceled", "empty"],
        [("rain", True)],
        [("rain", "wet"), ("wet", "canceled"), ("canceled", "empty")],
        {
            "rain": "it is raining",
            "wet": "the ground is wet",
            "canceled": "the match is canceled",
            "empty": "the stadium is empty",
        },
    ),
)

GROUND_PETS = Problem(
    "pramana-001",
    "constraint_satisfaction",
    "simple",
    "Alice has the fish, Bob has the dog, Carol has the cat",
    """Alice, Bob, and Carol each have exactly one pet: a cat, a dog, or a fish. Each pet belongs to exactly one person.

**Constraints**:
1. Alice does not have the cat.
2. Bob has the dog.
3. Carol does not have the fish.

**Question**: Who has which pet?""",
    bijection(["Alice", "Bob", "Carol"], ["cat", "dog", "fish"], [("Bob", "dog")], [("Alice", "cat"), ("Carol", "fish")]),
    {"author": "manual", "validated": True, "stage": 0},
)

TEST_SET = (TRANSITIVE, CHAIN, PETS, SEATING, COLORS, DRINKS, CONTRAPOSITIVE, SUBJECTS, SHELVES, LADDER)


# ---------------------------------------------------------------- traces

def assignment_trace(doubt, pratyaksha, anumana, steps, tarka, answer, why, upamana, shabda) -> Trace:
    return Trace(
        doubt=doubt,
        doubt_why="Several assignments are possible before the constraints are combined, so the "
        "correct one has to be established step by step.",
        pratyaksha=pratyaksha,
        anumana=anumana,
        upamana=upamana,
        shabda=shabda,
        syllogisms=steps,
        tarka=tarka,
        answer=answer,
        why=why,
    )


ELIMINATION = "Wherever every option but one is ruled out for a person, there that person takes the remaining option."

TRACES: dict[str, Trace] = {
    "pramana-003": Trace(
        doubt="Samana Dharma Upapatti (Several orderings share the given facts)",
        doubt_why="Each constraint compares only two runners, so the full order is not stated anywhere.",
        pratyaksha=("Alice finishes ahead of Bob.", "Bob finishes ahead of Carol.", "Carol finishes ahead of David."),
        anumana=(
            "Purvavat: Alice is ahead of Bob and Bob is ahead of Carol, so Alice is ahead of Carol.",
            "Chaining the same step once more places Alice ahead of David.",
        ),
        upamana="This is like ranking people by height from pairwise comparisons.",
        shabda="Finishing ahead of is a transitive relation.",
        syllogisms=(
            (
                "Alice finishes first",
                "Alice finishes ahead of everyone else.",
                "Alice is ahead of Bob, who is ahead of Carol, who is ahead of David.",
                "Wherever A is ahead of B and B is ahead of C, there A is ahead of C. For example, "
                "first place beats third place.",
                "Alice is ahead of Bob and Bob is ahead of Carol and David.",
                "Therefore, Alice finishes first.",
            ),
            (
                "The full order",
                "The order is Alice, Bob, Carol, David.",
                "Each adjacent pair is fixed by a constraint.",
                "Wherever each adjacent pair in a chain is ordered, there the whole chain is ordered.",
                "The three constraints order every adjacent pair.",
                "Therefore, Alice > Bob > Carol > David.",
            ),
        ),
        tarka=(
            "Suppose Bob does not finish second.",
            "Then Carol or David would be ahead of Bob, or Bob would be ahead of Alice.",
            "Each option breaks one of the stated comparisons.",
            "Therefore Bob finishes second and the order stands.",
        ),
        answer="Alice > Bob > Carol > David",
        why="Transitivity of the pairwise constraints fixes a single order.",
    ),
    "pramana-005": Trace(
        doubt="Vipratipatti (Conflicting possibilities to resolve)",
        doubt_why="Only P is given outright; the truth of Q, R and S depends on the implications.",
        pratyaksha=("P is true.", "P implies Q.", "Q implies R.", "R implies S."),
        anumana=("Purvavat: P is true and P implies Q, so Q is true.", "The same step gives R and then S."),
        upamana="This is a standard chain of implications.",
        shabda="Modus ponens: if X implies Y and X holds, Y holds.",
        syllogisms=(
            (
                "Derive Q",
                "Q is true.",
                "P is true and P implies Q.",
                "Wherever an implication holds and its antecedent is true, there the consequent is true.",
                "P is true and P implies Q.",
                "Therefore, Q is true.",
            ),
            (
                "Derive R and S",
                "R and S are true.",
                "Q is true, Q implies R, and R implies S.",
                "Wherever an implication holds and its antecedent is true, there the consequent is true.",
                "Q gives R, and R gives S.",
                "Therefore, R is true and S is true.",
            ),
        ),
        tarka=(
            "Suppose S is not true.",
            "Then R would have to be false, since R implies S.",
            "R is true by the chain from P, so this is a contradiction.",
            "Therefore S is true.",
        ),
        answer="P is true, Q is true, R is true, and S is true.",
        why="Repeated modus ponens from P reaches every statement.",
    ),
    "test-001": assignment_trace(
        "Vipratipatti (Conflicting possibilities to determine)",
        ("Alice does not have the dog.", "Bob has the cat.", "Carol does not have the fish."),
        ("Since Bob has the cat, the dog and the fish go to Alice and Carol.",),
        (
            (
                "Assigning pets",
                "Alice has the fish and Carol has the dog.",
                "Alice cannot have the dog and Carol cannot have the fish.",
                ELIMINATION,
                "Only the fish is left for Alice; only the dog is left for Carol.",
                "Therefore, Alice has the fish, Bob has the cat, and Carol has the dog.",
            ),
        ),
        (
            "Suppose Alice does not have the fish.",
            "Then Alice would have the dog, which constraint 1 forbids.",
            "The constraints leave no other option.",
            "Therefore Alice has the fish.",
        ),
        "Alice: fish, Bob: cat, Carol: dog",
        "The constraints determine each assignment uniquely.",
        "This is a standard assignment problem where each person receives one unique item.",
        "If a person cannot have an item, they must have one of the remaining items.",
    ),
    "test-002": assignment_trace(
        "Samana Dharma Upapatti (Several seatings fit the partial facts)",
        ("Dana sits in seat 1.", "Ben sits in seat 2.", "Alex does not sit in seat 1.", "Cara does not sit in seat 4."),
        ("Seats 3 and 4 remain for Alex and Cara.", "Cara cannot take seat 4, so Cara takes seat 3 and Alex seat 4."),
        (
            (
                "Seating Cara",
                "Cara sits in seat 3.",
                "Seats 3 and 4 remain and Cara cannot sit in seat 4.",
                ELIMINATION,
                "Cara is ruled out of seat 4, leaving seat 3.",
                "Therefore, Cara sits in seat 3.",
            ),
            (
                "Seating Alex",
                "Alex sits in seat 4.",
                "Seat 4 is the only seat left.",
                ELIMINATION,
                "Seats 1, 2 and 3 are taken, leaving seat 4 for Alex.",
                "Therefore, Alex sits in seat 4.",
            ),
        ),
        (
            "Suppose Alex does not sit in seat 4.",
            "Then Alex takes seat 3 and Cara is forced into seat 4.",
            "That contradicts the constraint that Cara does not sit in seat 4.",
            "Therefore Alex sits in seat 4.",
        ),
        "Dana sits in seat 1, Ben sits in seat 2, Cara sits in seat 3, Alex sits in seat 4",
        "Each seat is forced by the constraints in turn.",
        "This resembles filling slots in a timetable once some are fixed.",
        "Each person occupies exactly one seat and each seat holds one person.",
    ),
    "test-003": assignment_trace(
        "Samana Dharma Upapatti (The colors share the same status)",
        ("Mia chose red.", "Liam did not choose blue."),
        ("Red is taken, so Liam chose green or blue.", "Liam did not choose blue, so Liam chose green."),
        (
            (
                "Liam's color",
                "Liam chose green.",
                "Red belongs to Mia and blue is ruled out for Liam.",
                ELIMINATION,
                "Only green is left for Liam.",
                "Therefore, Liam chose green.",
            ),
            (
                "Noah's color",
                "Noah chose blue.",
                "Red and green are taken.",
                ELIMINATION,
                "Only blue remains for Noah.",
                "Therefore, Noah chose blue.",
            ),
        ),
        (
            "Suppose Liam did not choose green.",
            "Then Liam chose blue, since red is Mia's.",
            "That contradicts constraint 2.",
            "Therefore Liam chose green.",
        ),
        "Liam: green, Mia: red, Noah: blue",
        "Two constraints and distinctness fix every choice.",
        "This is like matching three keys to three locks.",
        "Each person chose a different color.",
    ),
    "test-004": assignment_trace(
        "Samana Dharma Upapatti (Several drink orders are possible)",
        ("Eve did not order coffee.", "Finn ordered juice."),
        ("Juice is Finn's, so Eve ordered tea or coffee.", "Eve did not order coffee, so Eve ordered tea."),
        (
            (
                "Eve's drink",
                "Eve ordered tea.",
                "Juice is taken and coffee is ruled out for Eve.",
                ELIMINATION,
                "Only tea is left for Eve.",
                "Therefore, Eve has the tea.",
            ),
            (
                "Gus's drink",
                "Gus ordered coffee.",
                "Tea and juice are taken.",
                ELIMINATION,
                "Only coffee remains for Gus.",
                "Therefore, Gus has the coffee.",
            ),
        ),
        (
            "Suppose Eve did not order tea.",
            "Then Eve ordered coffee, since juice is Finn's.",
            "That contradicts constraint 1.",
            "Therefore Eve ordered tea.",
        ),
        "Eve: tea, Finn: juice, Gus: coffee",
        "Each order is forced once Finn's juice is fixed.",
        "This is like handing out three different menus.",
        "No two people ordered the same drink.",
    ),
    "test-005": Trace(
        doubt="Vipratipatti (Conflicting truth values to resolve)",
        doubt_why="A is not given directly; its value must be read back from B.",
        pratyaksha=("If A is true, then B is true.", "B is false."),
        anumana=("Sheshavat: B is false, so A cannot be true (modus tollens).",),
        upamana="This mirrors reasoning back from a missing effect to an absent cause.",
        shabda="Modus tollens: if X implies Y and Y is false, X is false.",
        syllogisms=(
            (
                "A is false",
                "A is false.",
                "A implies B and B is false.",
                "Wherever X implies Y and Y fails, there X fails too. For example, no smoke rules out that fire.",
                "A implies B, and B is false.",
                "Therefore, A is false and B is false.",
            ),
        ),
        tarka=(
            "Suppose A is not false.",
            "Then A is true, and B must be true.",
            "B is given as false, a contradiction.",
            "Therefore A is false.",
        ),
        answer="A: false, B: false",
        why="Modus tollens settles A once B is known to be false.",
    ),
    "test-006": assignment_trace(
        "Samana Dharma Upapatti (Several teaching assignments fit)",
        ("Maya teaches Math.", "Priya does not teach Science."),
        ("Math is Maya's, so Priya teaches Science or Art.", "Priya does not teach Science, so Priya teaches Art."),
        (
            (
                "Priya's subject",
                "Priya teaches Art.",
                "Math is taken and Science is ruled out for Priya.",
                ELIMINATION,
                "Only Art is left for Priya.",
                "Therefore, Priya teaches Art.",
            ),
            (
                "Nikhil's subject",
                "Nikhil teaches Science.",
                "Math and Art are taken.",
                ELIMINATION,
                "Only Science remains for Nikhil.",
                "Therefore, Nikhil teaches Science.",
            ),
        ),
        (
            "Suppose Priya does not teach Art.",
            "Then Priya teaches Science, since Math is Maya's.",
            "That contradicts constraint 2.",
            "Therefore Priya teaches Art.",
        ),
        "Maya: Math, Nikhil: Science, Priya: Art",
        "The constraints and distinctness determine every subject.",
        "This is like assigning three rooms to three classes.",
        "Each person teaches exactly one subject.",
    ),
    "test-007": assignment_trace(
        "Samana Dharma Upapatti (The shelves are interchangeable at first)",
        ("Shelf A holds Math.", "Shelf B does not hold Physics."),
        ("Math is on A, so B holds History or Physics.", "B does not hold Physics, so B holds History."),
        (
            (
                "Shelf B",
                "Shelf B holds History.",
                "Math is on A and Physics is ruled out for B.",
                "Wherever every subject but one is ruled out for a shelf, there the shelf holds the remaining subject.",
                "Only History is left for B.",
                "Therefore, B holds History.",
            ),
            (
                "Shelf C",
                "Shelf C holds Physics.",
                "Math and History are placed.",
                "Wherever every subject but one is ruled out for a shelf, there the shelf holds the remaining subject.",
                "Only Physics remains for C.",
                "Therefore, C holds Physics.",
            ),
        ),
        (
            "Suppose shelf B does not hold History.",
            "Then B holds Physics, since Math is on A.",
            "That contradicts constraint 2.",
            "Therefore B holds History.",
        ),
        "Shelf A: Math, B: History, C: Physics",
        "Each shelf is fixed in turn by elimination.",
        "This is like sorting three labelled boxes.",
        "Each shelf holds exactly one subject.",
    ),
    "test-008": Trace(
        doubt="Vipratipatti (Conflicting truth values to resolve)",
        doubt_why="Only W is given; the rest depend on a chain of implications.",
        pratyaksha=("W is true.", "W implies X.", "X implies Y.", "Y implies Z."),
        anumana=("Purvavat: W gives X, X gives Y, Y gives Z.",),
        upamana="This is a row of dominoes: each one topples the next.",
        shabda="Modus ponens: if X implies Y and X holds, Y holds.",
        syllogisms=(
            (
                "The chain",
                "X, Y and Z are true.",
                "W is true and each implication passes truth along.",
                "Wherever an implication holds and its antecedent is true, there the consequent is true.",
                "W is true, so X is; X is true, so Y is; Y is true, so Z is.",
                "Therefore, W: true, X: true, Y: true, Z: true.",
            ),
        ),
        tarka=(
            "Suppose Z is not true.",
            "Then Y must be false, and so X and W too.",
            "W is given as true, a contradiction.",
            "Therefore Z is true.",
        ),
        answer="W: true, X: true, Y: true, Z: true",
        why="Modus ponens along the chain reaches Z.",
    ),
}

STAGE0 = {
    "pramana-003": dict(answer="Alice finishes first and David finishes last."),
    "pramana-005": dict(drop=("hetvabhasa",), answer="P is true and Q is true; R and S cannot be determined."),
    "test-001": dict(drop=("pancha_avayava",), answer="Alice has the dog."),
    "test-002": dict(drop=("analysis",)),
    "test-003": {},
    "test-004": dict(drop=("hetvabhasa",), answer="Eve has the coffee."),
    "test-005": {},
    "test-006": dict(drop=("justification",)),
    "test-007": dict(drop=("syllogisms",)),
    "test-008": dict(answer="Only W and X are true."),
}

STAGE1 = {
    "pramana-003": dict(drop=("justification",)),
    "test-002": dict(doubt="Vipratipatti Samshaya (Conflicting possibilities)"),
    "test-003": dict(doubt="Pramana Dharma (Evidence-based doubt)"),
    "test-004": dict(drop=("nirnaya",)),
    "test-005": dict(drop=("hetvabhasa",)),
    "test-006": {},
    "test-007": {},
    "test-008": {},
}


def write_stage(name: str, variants: dict[str, dict], verbatim: dict[str, str]) -> None:
    base = ROOT / name
    shutil.rmtree(base, ignore_errors=True)
    write_corpus(base / "corpus", TEST_SET)
    outputs = base / "outputs"
    outputs.mkdir(parents=True)
    for pid, source in verbatim.items():
        (outputs / f"{pid}.md").write_text((APPENDIX / source).read_text(encoding="utf-8"), encoding="utf-8")
    for pid, changes in variants.items():
        (outputs / f"{pid}.md").write_text(render(replace(TRACES[pid], **changes)), encoding="utf-8")


def ground_truth_trace() -> str:
    return """## Samshaya (Doubt Analysis)
**Doubt Type**: Samana Dharma Upapatti (Multiple possibilities share
similar properties)
**Justification**: There are three people and three pets, creating
multiple possible assignments. Without systematic reasoning, we cannot
determine which person has which pet.

---

## Pramana (Sources of Knowledge)
### Pratyaksha (Direct Perception)
- "Alice does not have the cat"
- "Bob has the dog"
- "Carol does not have the fish"
- "Each person has exactly one pet"

### Anumana (Inference)
- type: purvavat
  premise: "Bob has the dog (directly stated)"
  conclusion: "Neither Alice nor Carol has the dog"

### Upamana (Comparison)
- A seating chart with one chair per guest works the same way.

### Shabda (Testimony)
- In a one-to-one assignment, an item given to one person is unavailable to the rest.

---

## Pancha Avayava (5-Member Syllogism)
### Syllogism 1: Establishing Bob's Pet
**Pratijna (Thesis)**: Bob has the dog.
**Hetu (Reason)**: This is directly stated in constraint 2.
**Udaharana (Universal + Example)**: Wherever a constraint directly
assigns a pet to a person, there that assignment holds.
**Upanaya (Application)**: Constraint 2 states "Bob has the dog."
**Nigamana (Conclusion)**: Therefore, Bob has the dog.

### Syllogism 2: Establishing Carol's Pet
**Pratijna (Thesis)**: Carol has the cat.
**Hetu (Reason)**: The dog is Bob's and the fish is ruled out for Carol.
**Udaharana (Universal + Example)**: Wherever every option but one is
ruled out, there the remaining option holds.
**Upanaya (Application)**: Carol cannot have the dog or the fish.
**Nigamana (Conclusion)**: Therefore, Carol has the cat, and Alice has the fish.

---

## Tarka (Counterfactual Reasoning)
**Hypothesis**: Suppose Carol does not have the cat (negation of our
conclusion).
**Consequence**: Then Carol must have the dog or the fish, but the dog
is Bob's and constraint 3 rules out the fish.
**Analysis**: Carol would have no pet, which violates the completeness principle.
**Resolution**: Therefore, Carol must have the cat.

---

## Hetvabhasa (Fallacy Check)
```yaml
fallacy_checks:
  savyabhichara: none_detected
  viruddha: none_detected
  prakaranasama: none_detected
  sadhyasama: none_detected
  kalaatita: none_detected
reasoning: "Every step rests on a stated constraint or on elimination."
```

---

## Nirnaya (Ascertainment)
**Status**: Definitive Knowledge
**Final Answer**: Alice has the fish, Bob has the dog, and Carol has
the cat.
**Justification**: All constraints are satisfied and the Tarka test
confirms the solution.
**Confidence**: High
"""


def write_training_corpus() -> None:
    base = ROOT / "corpus"
    shutil.rmtree(base, ignore_errors=True)
    d1 = (APPENDIX / "d1.md").read_text(encoding="utf-8")
    d2 = (APPENDIX / "d2.md").read_text(encoding="utf-8")
    problems = (GROUND_PETS, RAIN, TRANSITIVE, CHAIN, PETS, SEATING)
    traces = {
        "pramana-001": ground_truth_trace(),
        "pramana-002": d2,
        "pramana-003": render(TRACES["pramana-003"]),
        "pramana-005": render(TRACES["pramana-005"]),
        "test-001": d1,
        "test-002": render(TRACES["test-002"]),
    }
    write_corpus(base, problems, traces)


def write_rejection() -> None:
    base = ROOT / "rejection"
    shutil.rmtree(base, ignore_errors=True)
    third = replace(PETS, id="rs-third")
    first = replace(COLORS, id="rs-first")
    never = replace(LADDER, id="rs-never")
    write_corpus(base / "corpus", (third, first, never))
    good = {
        "rs-third": render(TRACES["test-001"]),
        "rs-first": render(TRACES["test-003"]),
        "rs-never": render(TRACES["test-008"]),
    }
    bad = {
        "rs-third": [render(replace(TRACES["test-001"], drop=("hetvabhasa",))), render(replace(TRACES["test-001"], drop=("analysis",)))],
        "rs-first": [],
        "rs-never": [render(replace(TRACES["test-008"], drop=(phase,))) for phase in ("samshaya", "pramana", "tarka", "hetvabhasa", "nirnaya")],
    }
    for pid in good:
        folder = base / "outputs" / pid
        folder.mkdir(parents=True)
        attempts = bad[pid] + [good[pid]]
        for i, text in enumerate(attempts, start=1):
            (folder / f"attempt-{i}.md").write_text(text, encoding="utf-8")


def main() -> None:
    write_stage("stage0", STAGE0, {})
    write_stage("stage1", STAGE1, {"pramana-005": "d3.md", "test-001": "d1.md"})
    write_training_corpus()
    write_rejection()


if __name__ == "__main__":
    main()
