"""Human verdicts on flagged lines: durable store, reports, export.

Verdicts are persisted in an append-only jsonl log, one record per line;
the latest version per line id is authoritative.  Writers pass the
version they saw (0 for "none yet") and lose with a conflict if someone
else got there first.  Replaying the log reconstructs the store exactly,
which makes crash recovery trivial and keeps every correction auditable.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable

from .common import half_up_percent, normalize_text
from .corpus import Corpus, LineRecord, record_to_object, with_ground_truth
from .errors import AnnotationInvariantError, CorpusFormatError, UnknownLineError, VersionConflictError


class AnnotationStatus(str, Enum):
    CORRECT = "Correct"
    FIXED = "Fixed"
    UNSURE = "Unsure"
    HAS_ERRORS = "HasErrors"


class ErrorLabel(str, Enum):
    MISSING_WORDS = "MissingWords"
    ADDITIONAL_WORDS = "AdditionalWords"
    HYPHENATED_MISSING = "HyphenatedMissing"
    HYPHENATED_EXTRA_CHARS = "HyphenatedExtraChars"
    HYPHENATION_CHARACTER = "HyphenationCharacter"


# HyphenationCharacter describes the image (a hyphen is visible at the end
# of the line), not a transcription error, and only exists at the line end.
START_LABELS = frozenset(
    {
        ErrorLabel.MISSING_WORDS,
        ErrorLabel.ADDITIONAL_WORDS,
        ErrorLabel.HYPHENATED_MISSING,
        ErrorLabel.HYPHENATED_EXTRA_CHARS,
    }
)
END_LABELS = frozenset(ErrorLabel)


@dataclass(frozen=True)
class AnnotationRecord:
    line_id: str
    status: AnnotationStatus
    corrected_text: str | None
    start_labels: frozenset[ErrorLabel]
    end_labels: frozenset[ErrorLabel]
    annotator_id: str
    timestamp: datetime
    version: int
    original_ground_truth: str

    def as_record(self) -> dict:
        return {
            "line_id": self.line_id,
            "status": self.status.value,
            "corrected_text": self.corrected_text,
            "start_labels": sorted(l.value for l in self.start_labels),
            "end_labels": sorted(l.value for l in self.end_labels),
            "annotator_id": self.annotator_id,
            "timestamp": self.timestamp.isoformat(),
            "version": self.version,
            "original_ground_truth": self.original_ground_truth,
        }


def _check_invariants(
    status: AnnotationStatus,
    corrected_text: str | None,
    start_labels: frozenset[ErrorLabel],
    end_labels: frozenset[ErrorLabel],
    original: str,
) -> None:
    if not start_labels <= START_LABELS:
        bad = sorted(l.value for l in start_labels - START_LABELS)
        raise AnnotationInvariantError(f"labels not allowed at start of line: {bad}")
    if not end_labels <= END_LABELS:
        bad = sorted(l.value for l in end_labels - END_LABELS)
        raise AnnotationInvariantError(f"unknown end labels: {bad}")
    if status is AnnotationStatus.FIXED:
        if corrected_text is None:
            raise AnnotationInvariantError("status Fixed requires corrected_text")
        if corrected_text == original:
            raise AnnotationInvariantError(
                "status Fixed requires corrected_text to differ from the ground truth"
            )
    if status is AnnotationStatus.CORRECT:
        if corrected_text is not None:
            raise AnnotationInvariantError("status Correct must not carry corrected_text")
        if start_labels:
            raise AnnotationInvariantError("status Correct must not carry start labels")
        if end_labels - {ErrorLabel.HYPHENATION_CHARACTER}:
            raise AnnotationInvariantError(
                "status Correct allows only the HyphenationCharacter end label"
            )


class AnnotationStore:
    """Append-only annotation log with optimistic version checks.

    Writes are serialized; reads see a consistent snapshot.  ``corpus``
    is required for submitting (ground-truth snapshots and invariant
    checks) but not for reading an existing log.
    """

    def __init__(self, log_path: str | Path, corpus: Corpus | None = None):
        self._path = Path(log_path)
        self._corpus = corpus
        self._lock = threading.Lock()
        self._latest: dict[str, AnnotationRecord] = {}
        self.recovery_warnings: list[str] = []
        if self._path.exists():
            self._replay()

    def _replay(self) -> None:
        with open(self._path, encoding="utf-8") as handle:
            lines = handle.readlines()
        for row, raw in enumerate(lines, 1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
                record = _record_from_object(obj)
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                if row == len(lines):
                    # A torn final line is what a crash mid-append leaves
                    # behind; everything before it is intact.
                    self.recovery_warnings.append(f"dropped torn final log line {row}: {exc}")
                    continue
                raise CorpusFormatError(f"bad annotation record: {exc}", row=row) from exc
            current = self._latest.get(record.line_id)
            if current is None or record.version >= current.version:
                self._latest[record.line_id] = record

    def current_version(self, line_id: str) -> int:
        record = self._latest.get(line_id)
        return record.version if record else 0

    def latest(self, line_id: str) -> AnnotationRecord | None:
        return self._latest.get(line_id)

    def latest_records(self) -> dict[str, AnnotationRecord]:
        return dict(self._latest)

    def annotated_ids(self) -> set[str]:
        return set(self._latest)

    def submit(
        self,
        line_id: str,
        status: AnnotationStatus | str,
        expected_version: int,
        *,
        corrected_text: str | None = None,
        start_labels: Iterable[ErrorLabel | str] = (),
        end_labels: Iterable[ErrorLabel | str] = (),
        annotator_id: str = "anonymous",
        timestamp: datetime | None = None,
    ) -> AnnotationRecord:
        """Validate and append one verdict; returns the stored record.

        Rejects (without storing anything) on invariant violations and on
        a stale ``expected_version``; the conflict error carries the
        record that is currently authoritative.
        """
        if self._corpus is None:
            raise UnknownLineError("store was opened without a corpus; submitting is disabled")
        original = self._corpus.get(line_id).ground_truth
        status = AnnotationStatus(status)
        start = frozenset(ErrorLabel(l) for l in start_labels)
        end = frozenset(ErrorLabel(l) for l in end_labels)
        if corrected_text is not None:
            corrected_text = normalize_text(corrected_text)
        _check_invariants(status, corrected_text, start, end, original)
        with self._lock:
            current = self._latest.get(line_id)
            current_version = current.version if current else 0
            if expected_version != current_version:
                raise VersionConflictError(line_id, expected_version, current)
            record = AnnotationRecord(
                line_id=line_id,
                status=status,
                corrected_text=corrected_text,
                start_labels=start,
                end_labels=end,
                annotator_id=annotator_id,
                timestamp=timestamp or datetime.now(timezone.utc),
                version=current_version + 1,
                original_ground_truth=original,
            )
            with open(self._path, "a", encoding="utf-8", newline="\n") as handle:
                handle.write(json.dumps(record.as_record(), ensure_ascii=False))
                handle.write("\n")
                handle.flush()
            self._latest[line_id] = record
        return record


def _record_from_object(obj: dict) -> AnnotationRecord:
    return AnnotationRecord(
        line_id=obj["line_id"],
        status=AnnotationStatus(obj["status"]),
        corrected_text=obj.get("corrected_text"),
        start_labels=frozenset(ErrorLabel(l) for l in obj.get("start_labels", [])),
        end_labels=frozenset(ErrorLabel(l) for l in obj.get("end_labels", [])),
        annotator_id=obj.get("annotator_id", "anonymous"),
        timestamp=datetime.fromisoformat(obj["timestamp"]),
        version=int(obj["version"]),
        original_ground_truth=obj.get("original_ground_truth", ""),
    )


def submit_annotation(store: AnnotationStore, record: dict, expected_version: int) -> AnnotationRecord:
    """Submit a verdict given as a plain field mapping (service/CLI entry)."""
    return store.submit(
        line_id=record["line_id"],
        status=record["status"],
        expected_version=expected_version,
        corrected_text=record.get("corrected_text"),
        start_labels=record.get("start_labels", ()),
        end_labels=record.get("end_labels", ()),
        annotator_id=record.get("annotator_id", "anonymous"),
        timestamp=record.get("timestamp"),
    )


@dataclass(frozen=True)
class StatusReport:
    counts: dict[AnnotationStatus, int]
    percentages: dict[AnnotationStatus, float]
    total: int

    def as_record(self) -> dict:
        return {
            "total": self.total,
            **{s.value: {"count": self.counts[s], "percent": self.percentages[s]} for s in AnnotationStatus},
        }


def status_report(store: AnnotationStore) -> StatusReport:
    """Count the latest verdict per line; percentages are half-up, 2 dp."""
    counts = {status: 0 for status in AnnotationStatus}
    for record in store.latest_records().values():
        counts[record.status] += 1
    total = sum(counts.values())
    percentages = {s: half_up_percent(c, total) for s, c in counts.items()}
    return StatusReport(counts=counts, percentages=percentages, total=total)


@dataclass(frozen=True)
class ErrorTypeReport:
    """Per-label counts at start and end of line.

    Denominators are total annotated lines, not error lines, so the
    percentages say "what fraction of all reviewed lines showed this".
    HyphenationCharacter exists at the end of line only.
    """

    start_counts: dict[ErrorLabel, int]
    end_counts: dict[ErrorLabel, int]
    total: int

    def start_percent(self, label: ErrorLabel) -> float:
        return half_up_percent(self.start_counts.get(label, 0), self.total)

    def end_percent(self, label: ErrorLabel) -> float:
        return half_up_percent(self.end_counts.get(label, 0), self.total)

    def as_record(self) -> dict:
        rows = {}
        for label in ErrorLabel:
            row: dict = {}
            if label is not ErrorLabel.HYPHENATION_CHARACTER:
                row["start"] = {"count": self.start_counts.get(label, 0), "percent": self.start_percent(label)}
            row["end"] = {"count": self.end_counts.get(label, 0), "percent": self.end_percent(label)}
            rows[label.value] = row
        return {"total": self.total, "labels": rows}


def error_type_report(store: AnnotationStore) -> ErrorTypeReport:
    start_counts = {label: 0 for label in ErrorLabel if label is not ErrorLabel.HYPHENATION_CHARACTER}
    end_counts = {label: 0 for label in ErrorLabel}
    latest = store.latest_records()
    for record in latest.values():
        for label in record.start_labels:
            start_counts[label] += 1
        for label in record.end_labels:
            end_counts[label] += 1
    return ErrorTypeReport(start_counts=start_counts, end_counts=end_counts, total=len(latest))


@dataclass(frozen=True)
class ExportedLine:
    record: LineRecord  # ground_truth already carries the correction for Fixed lines
    original_ground_truth: str
    annotation_status: AnnotationStatus

    def as_record(self) -> dict:
        obj = record_to_object(self.record)
        obj["original_ground_truth"] = self.original_ground_truth
        obj["annotation_status"] = self.annotation_status.value
        return obj


@dataclass(frozen=True)
class ExportResult:
    lines: list[ExportedLine]
    warnings: list[str]

    def to_corpus(self) -> Corpus:
        return Corpus([line.record for line in self.lines], strict=False)


def export_corrected(corpus: Corpus, store: AnnotationStore, scope: str) -> ExportResult:
    """Corrected evaluation set for one split.

    Keeps lines whose latest status is Correct or Fixed; Fixed lines get
    their corrected text as ground truth.  Unsure and HasErrors lines are
    dropped, unannotated lines are dropped with a warning.  The original
    ground truth travels along for provenance.
    """
    lines: list[ExportedLine] = []
    warnings: list[str] = []
    for record in corpus.split_lines(scope):
        verdict = store.latest(record.id)
        if verdict is None:
            warnings.append(f"line {record.id!r} in scope {scope!r} is not annotated, excluded")
            continue
        if verdict.status is AnnotationStatus.FIXED:
            exported = with_ground_truth(record, verdict.corrected_text or "")
        elif verdict.status is AnnotationStatus.CORRECT:
            exported = record
        else:
            continue
        lines.append(
            ExportedLine(
                record=exported,
                original_ground_truth=record.ground_truth,
                annotation_status=verdict.status,
            )
        )
    return ExportResult(lines=lines, warnings=warnings)


def save_export(result: ExportResult, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in result.lines:
            handle.write(json.dumps(line.as_record(), ensure_ascii=False))
            handle.write("\n")
