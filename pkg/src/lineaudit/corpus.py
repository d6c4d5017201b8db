"""Line-level transcription corpora: data model, file formats, statistics.

A corpus is an ordered, immutable collection of text-line records.  Text
fields are NFC-composed and trimmed at ingestion; corrections never touch
the corpus itself (they live in the annotation store and are merged only
at export).
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from .common import CANONICAL_SPLITS, normalize_text
from .errors import CorpusFormatError, DuplicateIdError, UnknownLineError, UnknownPageError

_REQUIRED_FIELDS = ("id", "letter_id", "page_id", "line_index", "split", "ground_truth")


@dataclass(frozen=True)
class LineRecord:
    """One text-line sample: identifiers, ordering, texts, optional image."""

    id: str
    letter_id: str
    page_id: str
    line_index: int
    split: str
    ground_truth: str
    predictions: dict[str, str] = field(default_factory=dict)
    image_ref: str | None = None


class Corpus:
    """Ordered collection of LineRecords with id and page indexes.

    Read-only after construction; safe for concurrent readers.
    """

    def __init__(self, records: Iterable[LineRecord], strict: bool = True):
        self._records: list[LineRecord] = list(records)
        self._by_id: dict[str, LineRecord] = {}
        for record in self._records:
            if record.id in self._by_id:
                if strict:
                    raise DuplicateIdError(f"duplicate line id {record.id!r}")
                continue
            self._by_id[record.id] = record
        self._by_page: dict[str, list[LineRecord]] = {}
        for record in self._records:
            self._by_page.setdefault(record.page_id, []).append(record)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[LineRecord]:
        return iter(self._records)

    def __contains__(self, line_id: str) -> bool:
        return line_id in self._by_id

    @property
    def records(self) -> tuple[LineRecord, ...]:
        return tuple(self._records)

    def get(self, line_id: str) -> LineRecord:
        try:
            return self._by_id[line_id]
        except KeyError:
            raise UnknownLineError(f"unknown line id {line_id!r}") from None

    def page_ids(self) -> list[str]:
        return sorted(self._by_page)

    def ordered_lines(self, page_id: str) -> list[LineRecord]:
        """Records of one page, ascending by line_index.

        There is no cross-page succession: the last line of a page has no
        following line.
        """
        if page_id not in self._by_page:
            raise UnknownPageError(f"unknown page id {page_id!r}")
        return sorted(self._by_page[page_id], key=lambda r: r.line_index)

    def split_lines(self, split: str) -> list[LineRecord]:
        return [r for r in self._records if r.split == split]


def load_corpus(
    path: str | Path,
    format: str = "jsonl",
    *,
    split: str = "train",
    model: str = "model",
) -> Corpus:
    """Load a corpus file, normalizing all text fields (NFC + trim).

    ``format`` is ``jsonl`` (the canonical line-record format) or
    ``tsv-pairs`` (``id<TAB>ground_truth<TAB>prediction`` for quick
    experiments; ``split`` and ``model`` supply the missing fields, the
    page is derived from the file name and rows are numbered in order).
    Record order is preserved.  Duplicate ids are fatal.
    """
    path = Path(path)
    if format == "jsonl":
        records = _load_jsonl(path)
    elif format == "tsv-pairs":
        records = _load_tsv_pairs(path, split=split, model=model)
    else:
        raise CorpusFormatError(f"unknown corpus format {format!r}")
    return Corpus(records)


def _load_jsonl(path: Path) -> list[LineRecord]:
    records: list[LineRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for row, raw in enumerate(handle, 1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON: {exc.msg}", row=row) from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError("record is not an object", row=row)
            missing = [k for k in _REQUIRED_FIELDS if k not in obj]
            if missing:
                raise CorpusFormatError(f"missing fields {missing}", row=row)
            line_index = obj["line_index"]
            if not isinstance(line_index, int) or line_index < 0:
                raise CorpusFormatError("line_index must be an integer >= 0", row=row)
            predictions = obj.get("predictions") or {}
            if not isinstance(predictions, dict):
                raise CorpusFormatError("predictions must be an object", row=row)
            record = LineRecord(
                id=str(obj["id"]),
                letter_id=str(obj["letter_id"]),
                page_id=str(obj["page_id"]),
                line_index=line_index,
                split=str(obj["split"]),
                ground_truth=normalize_text(str(obj["ground_truth"])),
                predictions={str(k): normalize_text(str(v)) for k, v in predictions.items()},
                image_ref=obj.get("image_ref"),
            )
            if record.id in seen:
                raise CorpusFormatError(f"duplicate line id {record.id!r}", row=row)
            seen.add(record.id)
            records.append(record)
    return records


def _load_tsv_pairs(path: Path, split: str, model: str) -> list[LineRecord]:
    records: list[LineRecord] = []
    seen: set[str] = set()
    stem = path.stem
    index = 0
    with open(path, encoding="utf-8") as handle:
        for row, raw in enumerate(handle, 1):
            raw = raw.rstrip("\n")
            if not raw:
                continue
            parts = raw.split("\t")
            if len(parts) != 3:
                raise CorpusFormatError(
                    f"expected 3 tab-separated fields, got {len(parts)}", row=row
                )
            line_id, ground_truth, prediction = parts
            if line_id in seen:
                raise CorpusFormatError(f"duplicate line id {line_id!r}", row=row)
            seen.add(line_id)
            records.append(
                LineRecord(
                    id=line_id,
                    letter_id=stem,
                    page_id=stem,
                    line_index=index,
                    split=split,
                    ground_truth=normalize_text(ground_truth),
                    predictions={model: normalize_text(prediction)},
                )
            )
            index += 1
    return records


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical jsonl line-record format (UTF-8, LF)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in corpus:
            handle.write(json.dumps(record_to_object(record), ensure_ascii=False))
            handle.write("\n")


def record_to_object(record: LineRecord) -> dict:
    obj = {
        "id": record.id,
        "letter_id": record.letter_id,
        "page_id": record.page_id,
        "line_index": record.line_index,
        "split": record.split,
        "ground_truth": record.ground_truth,
        "predictions": dict(record.predictions),
    }
    if record.image_ref is not None:
        obj["image_ref"] = record.image_ref
    return obj


@dataclass(frozen=True)
class SplitStats:
    letters: int = 0
    pages: int = 0
    lines: int = 0
    words: int = 0


@dataclass(frozen=True)
class CorpusStats:
    """Per-split and total counts; totals are sums over the splits."""

    splits: dict[str, SplitStats]
    total: SplitStats


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Count letters, pages, lines and whitespace-separated words per split.

    Letters and pages are distinct letter_id/page_id values within each
    split.  An empty corpus yields all-zero statistics.
    """
    letters: dict[str, set[str]] = {}
    pages: dict[str, set[str]] = {}
    lines: dict[str, int] = {}
    words: dict[str, int] = {}
    for record in corpus:
        s = record.split
        letters.setdefault(s, set()).add(record.letter_id)
        pages.setdefault(s, set()).add(record.page_id)
        lines[s] = lines.get(s, 0) + 1
        words[s] = words.get(s, 0) + len(record.ground_truth.split())
    split_names = [s for s in CANONICAL_SPLITS if s in lines]
    split_names += sorted(s for s in lines if s not in CANONICAL_SPLITS)
    splits = {
        s: SplitStats(len(letters[s]), len(pages[s]), lines[s], words[s])
        for s in split_names
    }
    total = SplitStats(
        letters=sum(st.letters for st in splits.values()),
        pages=sum(st.pages for st in splits.values()),
        lines=sum(st.lines for st in splits.values()),
        words=sum(st.words for st in splits.values()),
    )
    return CorpusStats(splits=splits, total=total)


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning"
    locator: str
    code: str
    message: str

    def as_record(self) -> dict:
        return {
            "severity": self.severity,
            "locator": self.locator,
            "code": self.code,
            "message": self.message,
        }


def validate(corpus: Corpus, image_root: str | Path | None = None) -> list[ValidationIssue]:
    """Report invariant violations without raising.

    The list is deterministic (corpus order, fixed check order) and empty
    iff all record invariants hold.  Dangling image references are only
    checked when ``image_root`` is given.
    """
    issues: list[ValidationIssue] = []
    seen_ids: set[str] = set()
    seen_keys: set[tuple[str, int]] = set()
    for record in corpus:
        if record.id in seen_ids:
            issues.append(
                ValidationIssue("error", record.id, "DuplicateId", "line id occurs more than once")
            )
        seen_ids.add(record.id)
        key = (record.page_id, record.line_index)
        if key in seen_keys:
            issues.append(
                ValidationIssue(
                    "error",
                    record.id,
                    "DuplicateOrderKey",
                    f"(page_id, line_index) {key!r} occurs more than once",
                )
            )
        seen_keys.add(key)
        if not record.ground_truth:
            issues.append(
                ValidationIssue("warning", record.id, "MissingGroundTruth", "empty ground truth")
            )
        if _non_normalized(record):
            issues.append(
                ValidationIssue(
                    "warning", record.id, "NonNormalizedText", "text is not NFC-composed/trimmed"
                )
            )
        if record.split not in CANONICAL_SPLITS:
            issues.append(
                ValidationIssue("error", record.id, "BadSplit", f"unknown split {record.split!r}")
            )
        if image_root is not None and record.image_ref is not None:
            if not (Path(image_root) / record.image_ref).exists():
                issues.append(
                    ValidationIssue(
                        "warning", record.id, "DanglingImageRef", f"missing {record.image_ref!r}"
                    )
                )
    return issues


def _non_normalized(record: LineRecord) -> bool:
    texts = [record.ground_truth, *record.predictions.values()]
    return any(t != unicodedata.normalize("NFC", t) or t != t.strip() for t in texts)


def subset_corpus(corpus: Corpus, keep: Iterable[str]) -> Corpus:
    """New corpus containing exactly the given ids, in corpus order."""
    wanted = set(keep)
    return Corpus([r for r in corpus if r.id in wanted], strict=False)


def with_ground_truth(record: LineRecord, text: str) -> LineRecord:
    return replace(record, ground_truth=text)
