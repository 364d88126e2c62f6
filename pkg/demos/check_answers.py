"""Check final answers against the logic sidecars.

The brute-force oracle needs nothing installed. If a z3 binary is on PATH
the SMT-LIB scripts are also run through it.
"""

import shutil
from pathlib import Path

from nyayakit.logic import (
    brute_force_solve,
    cross_check,
    emit_smtlib,
    load_problem,
    parse_assignment,
    verify_answer,
)
from nyayakit.scoring import extract_answer

APPENDIX = Path(__file__).resolve().parent.parent / "fixtures" / "appendix"
pets = load_problem(APPENDIX / "corpus" / "d1.problem.json")
print("problem:", pets.kind, "with", len(pets.constraints), "constraints")
print("unique solution:", brute_force_solve(pets))

for name in ("d4-base", "d4-tuned"):
    answer, _ = extract_answer((APPENDIX / "outputs" / f"{name}.md").read_text(encoding="utf-8"))
    print(f"{name:<9} {answer!r}")
    print("          ->", verify_answer(pets, parse_assignment(pets, answer)))

solution = brute_force_solve(pets)[0]
print("\n" + emit_smtlib(pets, solution).satisfies)

z3 = shutil.which("z3")
if z3:
    print("solver:", cross_check(pets, solution, z3))
else:
    print("no z3 on PATH; skipping the solver cross-check")
