"""Hyphenation-error candidate detection.

Hyphenated words that were assigned wholly to one line leave a telltale
signature when the ground truth is aligned against a model prediction: a
pure run of insertions or deletions anchored at the start or end of the
line.  This module extracts those boundary runs, turns them into flags
(tail run on the line itself, head run on the following line of the same
page), scans for trailing hyphen symbols as a weak auxiliary signal, and
ingests flags produced by external detectors that mark hyphenated line
ends with a dedicated symbol.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, NamedTuple

from .alignment import AlignmentResult, OpKind, edit_alignment
from .common import half_up_percent, normalize_text
from .corpus import Corpus
from .errors import CorpusFormatError

DEFAULT_MIN_RUN = 3

# ':' is a known degraded-hyphen look-alike but a frequent false positive,
# so it is only scanned when explicitly requested.
DEFAULT_HYPHEN_SYMBOLS = frozenset({"-", "=", "¬"})
EXTENDED_HYPHEN_SYMBOLS = frozenset(DEFAULT_HYPHEN_SYMBOLS | {":"})

EXTERNAL_SOURCE = "external"


class RunKind(str, Enum):
    INSERTION_RUN = "InsertionRun"
    DELETION_RUN = "DeletionRun"


class Trigger(str, Enum):
    TAIL_RUN = "TailRun"
    NEXT_HEAD_RUN = "NextHeadRun"
    EXTERNAL_MARKER = "ExternalMarker"


class BoundaryRun(NamedTuple):
    kind: RunKind
    length: int


@dataclass(frozen=True)
class BoundaryRuns:
    """Maximal pure insert-only or delete-only runs at either end of an
    alignment; absent when the first/last op is a Match or Substitute."""

    head: BoundaryRun | None
    tail: BoundaryRun | None


_RUN_KINDS = {OpKind.INSERT: RunKind.INSERTION_RUN, OpKind.DELETE: RunKind.DELETION_RUN}


def boundary_runs(alignment: AlignmentResult) -> BoundaryRuns:
    ops = alignment.ops
    return BoundaryRuns(head=_pure_run(ops), tail=_pure_run(reversed(ops)))


def _pure_run(ops: Iterable) -> BoundaryRun | None:
    kind = None
    length = 0
    for op in ops:
        if kind is None:
            if op.kind not in _RUN_KINDS:
                return None
            kind = op.kind
        elif op.kind is not kind:
            break
        length += 1
    if kind is None:
        return None
    return BoundaryRun(_RUN_KINDS[kind], length)


@dataclass(frozen=True)
class HyphenationFlag:
    """One hyphenation-error candidate.

    TailRun/NextHeadRun flags carry the run evidence; NextHeadRun also
    names the following line whose head run fired.  ExternalMarker flags
    carry neither (``model`` records the flag source instead).
    """

    line_id: str
    trigger: Trigger
    model: str
    run_kind: RunKind | None = None
    run_length: int | None = None
    related_line_id: str | None = None

    def as_record(self) -> dict:
        obj: dict = {"line_id": self.line_id, "trigger": self.trigger.value}
        if self.run_kind is not None:
            obj["run_kind"] = self.run_kind.value
        if self.run_length is not None:
            obj["run_length"] = self.run_length
        if self.related_line_id is not None:
            obj["related_line_id"] = self.related_line_id
        obj["model"] = self.model
        return obj


@dataclass(frozen=True)
class DetectionError:
    line_id: str
    message: str


@dataclass(frozen=True)
class DetectionResult:
    flags: list[HyphenationFlag]
    errors: list[DetectionError]


def detect_candidates(corpus: Corpus, model: str, min_run: int = DEFAULT_MIN_RUN) -> DetectionResult:
    """Flag hyphenation candidates by the boundary-run rule.

    For each line in page order: a tail run of at least ``min_run``
    characters flags the line itself (TailRun); a head run of at least
    ``min_run`` on the next line of the same page flags this line
    (NextHeadRun, with the next line recorded).  Whether the run is made
    of insertions or deletions does not affect flagging, only the
    recorded evidence.  Lines without a prediction are reported as
    errors and skipped; detection continues.
    """
    flags: list[HyphenationFlag] = []
    errors: list[DetectionError] = []
    runs_cache: dict[str, BoundaryRuns | None] = {}

    def runs_for(record) -> BoundaryRuns | None:
        if record.id not in runs_cache:
            prediction = record.predictions.get(model)
            if prediction is None:
                errors.append(DetectionError(record.id, f"no prediction under model {model!r}"))
                runs_cache[record.id] = None
            else:
                runs_cache[record.id] = boundary_runs(edit_alignment(record.ground_truth, prediction))
        return runs_cache[record.id]

    for page_id in corpus.page_ids():
        lines = corpus.ordered_lines(page_id)
        for pos, record in enumerate(lines):
            runs = runs_for(record)
            if runs is not None and runs.tail is not None and runs.tail.length >= min_run:
                flags.append(
                    HyphenationFlag(
                        line_id=record.id,
                        trigger=Trigger.TAIL_RUN,
                        model=model,
                        run_kind=runs.tail.kind,
                        run_length=runs.tail.length,
                    )
                )
            if pos + 1 < len(lines):
                following = lines[pos + 1]
                next_runs = runs_for(following)
                if next_runs is not None and next_runs.head is not None and next_runs.head.length >= min_run:
                    flags.append(
                        HyphenationFlag(
                            line_id=record.id,
                            trigger=Trigger.NEXT_HEAD_RUN,
                            model=model,
                            run_kind=next_runs.head.kind,
                            run_length=next_runs.head.length,
                            related_line_id=following.id,
                        )
                    )
    return DetectionResult(flags=sort_flags(flags), errors=errors)


def sort_flags(flags: Iterable[HyphenationFlag]) -> list[HyphenationFlag]:
    # Canonical output order so file diffs stay meaningful.
    return sorted(flags, key=lambda f: (f.line_id, f.trigger.value, f.related_line_id or ""))


class HyphenSymbolHit(NamedTuple):
    line_id: str
    symbol: str
    position: int


def scan_hyphen_symbols(
    corpus: Corpus,
    field: str = "ground_truth",
    model: str | None = None,
    symbols: frozenset[str] = DEFAULT_HYPHEN_SYMBOLS,
) -> list[HyphenSymbolHit]:
    """Find lines whose selected text ends with a hyphen-like symbol.

    A weak auxiliary signal only: the detector never requires a hyphen
    symbol to be present, and this scan never flags on its own.  ``field``
    selects ``ground_truth`` or ``prediction`` (the latter needs ``model``).
    """
    if field not in ("ground_truth", "prediction"):
        raise ValueError(f"field must be 'ground_truth' or 'prediction', got {field!r}")
    if field == "prediction" and model is None:
        raise ValueError("field 'prediction' requires a model name")
    hits: list[HyphenSymbolHit] = []
    for record in corpus:
        if field == "ground_truth":
            text = record.ground_truth
        else:
            text = record.predictions.get(model)  # type: ignore[arg-type]
            if text is None:
                continue
        stripped = text.rstrip()
        if stripped and stripped[-1] in symbols:
            hits.append(HyphenSymbolHit(record.id, stripped[-1], len(stripped) - 1))
    return hits


@dataclass(frozen=True)
class MarkerIngest:
    flags: list[HyphenationFlag]
    texts: dict[str, str]  # marker-stripped transcriptions by line id
    warnings: list[str]


def ingest_marker_flags(path: str | Path, corpus: Corpus, marker: str = "¬") -> MarkerIngest:
    """Ingest ``id<TAB>text`` rows from an external hyphenation detector.

    Every known line whose transcription ends with ``marker`` yields an
    ExternalMarker flag; the marker is stripped from the stored text.
    Unknown line ids are skipped with a warning; malformed rows are fatal.
    """
    flags: list[HyphenationFlag] = []
    texts: dict[str, str] = {}
    warnings: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for row, raw in enumerate(handle, 1):
            raw = raw.rstrip("\n")
            if not raw:
                continue
            parts = raw.split("\t")
            if len(parts) != 2:
                raise CorpusFormatError(
                    f"expected 2 tab-separated fields, got {len(parts)}", row=row
                )
            line_id, text = parts
            if line_id not in corpus:
                warnings.append(f"row {row}: unknown line id {line_id!r}, skipped")
                continue
            text = normalize_text(text)
            if text.endswith(marker):
                texts[line_id] = text[: -len(marker)].rstrip()
                flags.append(
                    HyphenationFlag(line_id=line_id, trigger=Trigger.EXTERNAL_MARKER, model=EXTERNAL_SOURCE)
                )
            else:
                texts[line_id] = text
    return MarkerIngest(flags=sort_flags(flags), texts=texts, warnings=warnings)


@dataclass(frozen=True)
class ExclusionResult:
    kept: Corpus
    removed: Corpus
    retention: float  # fraction of the scope that was kept
    warnings: list[str]

    @property
    def retention_percent(self) -> float:
        return half_up_percent(len(self.kept), len(self.kept) + len(self.removed))


def exclude_flagged(corpus: Corpus, flags: Iterable[HyphenationFlag], scope: str) -> ExclusionResult:
    """Partition a split into kept/removed by the pessimistic rule: any
    line carrying at least one flag (of any trigger kind) is removed.

    Flags pointing outside the scope are ignored with a warning.  Only
    flagged lines are removed; a related following line stays unless it
    carries a flag of its own.
    """
    scope_records = corpus.split_lines(scope)
    scope_ids = {r.id for r in scope_records}
    flagged: set[str] = set()
    warnings: list[str] = []
    for flag in flags:
        if flag.line_id in scope_ids:
            flagged.add(flag.line_id)
        else:
            warnings.append(f"flag for {flag.line_id!r} is outside scope {scope!r}, ignored")
    kept = [r for r in scope_records if r.id not in flagged]
    removed = [r for r in scope_records if r.id in flagged]
    retention = len(kept) / len(scope_records) if scope_records else 1.0
    return ExclusionResult(
        kept=Corpus(kept, strict=False),
        removed=Corpus(removed, strict=False),
        retention=retention,
        warnings=warnings,
    )


def save_flags(flags: Iterable[HyphenationFlag], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for flag in flags:
            handle.write(json.dumps(flag.as_record(), ensure_ascii=False))
            handle.write("\n")


def load_flags(path: str | Path) -> list[HyphenationFlag]:
    flags: list[HyphenationFlag] = []
    with open(path, encoding="utf-8") as handle:
        for row, raw in enumerate(handle, 1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON: {exc.msg}", row=row) from exc
            try:
                flags.append(
                    HyphenationFlag(
                        line_id=obj["line_id"],
                        trigger=Trigger(obj["trigger"]),
                        model=obj["model"],
                        run_kind=RunKind(obj["run_kind"]) if "run_kind" in obj else None,
                        run_length=obj.get("run_length"),
                        related_line_id=obj.get("related_line_id"),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise CorpusFormatError(f"bad flag record: {exc}", row=row) from exc
    return flags
