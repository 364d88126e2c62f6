"""Walk the six worked traces through parser and validator.

Run from the repository root:  python demos/validate_traces.py
"""

from pathlib import Path

from nyayakit.harness import format_cell
from nyayakit.parser import parse_trace
from nyayakit.validator import ValidatorConfig, validate

HERE = Path(__file__).resolve().parent.parent / "fixtures" / "appendix" / "outputs"

for path in sorted(HERE.glob("*.md")):
    # one syllogism is enough for validity but scores 0 on quality
    parsed = parse_trace(path.read_text(encoding="utf-8"))
    report = validate(parsed)
    print(f"{path.stem:<10} {format_cell(parsed, report):<16} quality {report.quality_score}/10")
    # the first violation is usually the interesting one
    for v in report.violations[:2]:
        print(f"    {v.code}: {v.message}")

# Strict mode wants "wherever ... there" in every example member.
strict = ValidatorConfig(universal_rule="strict")
d1 = parse_trace((HERE / "d1.md").read_text(encoding="utf-8"))
print("\nd1 under strict udaharana:", "valid" if validate(d1, strict).valid else validate(d1, strict).codes)
