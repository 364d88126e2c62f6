"""Replay the two stored evaluation runs and compare them side by side.

Nothing here talks to a model; the outputs were recorded once and are
read back by ReplayClient.
"""

from pathlib import Path

from nyayakit.clients import ReplayClient
from nyayakit.corpus import load_examples
from nyayakit.harness import EvalConfig, evaluate_examples
from nyayakit.parser import merge_histograms
from nyayakit.report import ReportDocument, summary_table

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
config = EvalConfig(tiers=(1, 3))

reports = {}
for stage in ("stage0", "stage1"):
    root = FIXTURES / stage
    records = evaluate_examples(load_examples(root / "corpus"), ReplayClient(root / "outputs"), config)
    reports[stage] = ReportDocument.build(records, config.to_dict())

for stage, report in reports.items():
    print(f"== {stage}")
    print(summary_table(report))

# Same format rate, very different failure mix.
combined = merge_histograms([r.summary.failure_histogram for r in reports.values()])
print("failure categories across both stages (max per category):")
for name, count in combined.items():
    if count:
        print(f"  {name:<26}{count}")
