"""Deterministic fixture builders shared between test modules."""

from __future__ import annotations

import random
from pathlib import Path

from lineaudit.annotation import AnnotationStatus, AnnotationStore, ErrorLabel
from lineaudit.corpus import Corpus, LineRecord

STATUS_FIXTURE_COUNTS = {
    AnnotationStatus.CORRECT: 415,
    AnnotationStatus.FIXED: 1463,
    AnnotationStatus.UNSURE: 21,
    AnnotationStatus.HAS_ERRORS: 1,
}

START_LABEL_COUNTS = {
    ErrorLabel.MISSING_WORDS: 191,
    ErrorLabel.ADDITIONAL_WORDS: 3,
    ErrorLabel.HYPHENATED_MISSING: 315,
    ErrorLabel.HYPHENATED_EXTRA_CHARS: 167,
}

END_LABEL_COUNTS = {
    ErrorLabel.MISSING_WORDS: 104,
    ErrorLabel.ADDITIONAL_WORDS: 24,
    ErrorLabel.HYPHENATED_MISSING: 111,
    ErrorLabel.HYPHENATED_EXTRA_CHARS: 623,
    ErrorLabel.HYPHENATION_CHARACTER: 480,
}


def review_corpus(n: int = 1900, split: str = "test") -> Corpus:
    records = []
    for i in range(n):
        records.append(
            LineRecord(
                id=f"L{i:04d}",
                letter_id=f"letter-{i // 40}",
                page_id=f"page-{i // 10}",
                line_index=i % 10,
                split=split,
                ground_truth=f"line {i} text",
                predictions={"m1": f"line {i} text"},
            )
        )
    return Corpus(records)


def annotated_review_store(log_path: Path, corpus: Corpus) -> AnnotationStore:
    """Store with the published status and label distribution.

    Statuses are assigned in blocks; error-category labels go onto Fixed
    lines (the only status that allows them), except HyphenationCharacter
    which also sits on Correct lines (a visible hyphen is not an error).
    """
    store = AnnotationStore(log_path, corpus)
    statuses: list[AnnotationStatus] = []
    for status, count in STATUS_FIXTURE_COUNTS.items():
        statuses.extend([status] * count)
    records = list(corpus)
    assert len(records) == len(statuses)

    correct_ids = [r.id for r, s in zip(records, statuses) if s is AnnotationStatus.CORRECT]
    fixed_ids = [r.id for r, s in zip(records, statuses) if s is AnnotationStatus.FIXED]

    start_labels: dict[str, set[ErrorLabel]] = {r.id: set() for r in records}
    end_labels: dict[str, set[ErrorLabel]] = {r.id: set() for r in records}
    for label, count in START_LABEL_COUNTS.items():
        for line_id in fixed_ids[:count]:
            start_labels[line_id].add(label)
    for label, count in END_LABEL_COUNTS.items():
        if label is ErrorLabel.HYPHENATION_CHARACTER:
            carriers = correct_ids[:200] + fixed_ids[: count - 200]
        else:
            carriers = fixed_ids[:count]
        for line_id in carriers:
            end_labels[line_id].add(label)

    for record, status in zip(records, statuses):
        corrected = None
        if status is AnnotationStatus.FIXED:
            corrected = record.ground_truth + " corrected"
        store.submit(
            line_id=record.id,
            status=status,
            expected_version=0,
            corrected_text=corrected,
            start_labels=start_labels[record.id],
            end_labels=end_labels[record.id],
            annotator_id="fixture",
        )
    return store


def smoke_corpus(n_pages: int = 5, lines_per_page: int = 10, seed: int = 1234) -> Corpus:
    """Pipeline-smoke corpus: mostly clean lines plus planted hyphenation
    artifacts and some substitution noise, across train and test splits."""
    rng = random.Random(seed)
    words = ["virtus", "tamen", "littera", "manus", "scribo", "epistola", "dominus", "gratia"]
    records = []
    for page in range(n_pages):
        split = "test" if page == n_pages - 1 else "train"
        for line in range(lines_per_page):
            idx = page * lines_per_page + line
            gt = " ".join(rng.choice(words) for _ in range(rng.randint(2, 5)))
            pred = gt
            roll = idx % 10
            if roll == 3:
                pred = gt + " " + rng.choice(words)  # erroneously completed tail
            elif roll == 5 and line > 0:
                pred = rng.choice(words) + " " + gt  # leftover head fragment
            elif roll == 7:
                pred = "x" + gt[1:]  # plain recognition noise
            records.append(
                LineRecord(
                    id=f"S{idx:03d}",
                    letter_id=f"letter-{page}",
                    page_id=f"page-{page}",
                    line_index=line,
                    split=split,
                    ground_truth=gt,
                    predictions={"m1": pred},
                )
            )
    return Corpus(records)
