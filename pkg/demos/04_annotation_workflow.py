#!/usr/bin/env python3
# Human correction workflow: durable verdicts, reports, corrected export.

import tempfile
from pathlib import Path

from lineaudit import (
    AnnotationStore,
    Corpus,
    LineRecord,
    VersionConflictError,
    error_type_report,
    export_corrected,
    status_report,
)

corpus = Corpus([
    LineRecord(id=f"L{i}", letter_id="l1", page_id="p1", line_index=i, split="test",
               ground_truth=text, predictions={"htr": text})
    for i, text in enumerate(["virtu", "tem est", "morti. Ago", "gratia et pax"])
])

workdir = Path(tempfile.mkdtemp())
log = workdir / "annotations.jsonl"
store = AnnotationStore(log, corpus)

print("== submitting verdicts ==")
store.submit("L0", "Fixed", expected_version=0, corrected_text="virtutem",
             end_labels={"HyphenatedMissing"}, annotator_id="alice")
store.submit("L1", "Correct", expected_version=0, annotator_id="alice")
store.submit("L2", "Fixed", expected_version=0, corrected_text="Ago",
             start_labels={"HyphenatedExtraChars"}, annotator_id="bob")
store.submit("L3", "Unsure", expected_version=0, annotator_id="bob")
print(f"  4 verdicts appended to {log.name}")

print("\n== optimistic locking ==")
try:
    store.submit("L0", "Correct", expected_version=0, annotator_id="bob")
except VersionConflictError as conflict:
    print(f"  bob lost the race: {conflict}")
record = store.submit("L0", "Fixed", expected_version=1, corrected_text="virtute", annotator_id="bob")
print(f"  bob retried against version 1 -> stored version {record.version}")

print("\n== status report ==")
report = status_report(store)
for status, count in report.counts.items():
    print(f"  {status.value:<10} {count}  ({report.percentages[status]:.2f}%)")

print("\n== error-type report (denominator = all annotated lines) ==")
errors = error_type_report(store)
for label, count in errors.start_counts.items():
    if count:
        print(f"  start {label.value}: {count} ({errors.start_percent(label):.2f}%)")
for label, count in errors.end_counts.items():
    if count:
        print(f"  end   {label.value}: {count} ({errors.end_percent(label):.2f}%)")

print("\n== corrected export (Correct + Fixed only) ==")
export = export_corrected(corpus, store, "test")
for line in export.lines:
    marker = "*" if line.record.ground_truth != line.original_ground_truth else " "
    print(f" {marker} {line.record.id}: {line.original_ground_truth!r} -> {line.record.ground_truth!r}")

print("\n== the log replays to the same state ==")
replayed = AnnotationStore(log, corpus)
print("  reports identical:", status_report(replayed) == report)
