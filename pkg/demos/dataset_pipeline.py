"""Corpus documents to a deduplicated, split JSONL training set."""

import tempfile
from pathlib import Path

from nyayakit.corpus import dedup, read_jsonl, split_corpus, to_jsonl, write_jsonl

CORPUS = Path(__file__).resolve().parent.parent / "fixtures" / "corpus"

instances = to_jsonl(CORPUS)
print(f"{len(instances)} documents converted")
print("first instruction:", instances[0].instruction.splitlines()[0][:70], "...")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "all.jsonl"
    # write every record twice to show dedup at work
    write_jsonl(instances + instances[:3], path)
    kept, dropped = dedup(read_jsonl(path))
    print(f"kept {len(kept)}, dropped {len(dropped)}")
    for d in dropped:
        print(f"  {d.id}: {d.reason}")

train, val = split_corpus(kept, 0.8, seed=42)
print(f"train {len(train)} / val {len(val)}:", ", ".join(i.id for i in val))
