from __future__ import annotations

import sys
from pathlib import Path

import pytest

from lineaudit.corpus import Corpus, LineRecord

sys.path.insert(0, str(Path(__file__).parent))


def make_record(
    line_id: str,
    ground_truth: str,
    prediction: str | None = None,
    *,
    page: str = "p1",
    letter: str = "l1",
    index: int | None = None,
    split: str = "train",
    model: str = "m1",
    image_ref: str | None = None,
) -> LineRecord:
    predictions = {} if prediction is None else {model: prediction}
    return LineRecord(
        id=line_id,
        letter_id=letter,
        page_id=page,
        line_index=index if index is not None else int(line_id.lstrip("L") or 0),
        split=split,
        ground_truth=ground_truth,
        predictions=predictions,
        image_ref=image_ref,
    )


def make_page(page: str, rows: list[tuple[str, str, str]], *, split: str = "train", model: str = "m1") -> list[LineRecord]:
    """Rows are (id, ground_truth, prediction) in reading order."""
    return [
        make_record(line_id, gt, pred, page=page, letter=f"letter-{page}", index=i, split=split, model=model)
        for i, (line_id, gt, pred) in enumerate(rows)
    ]


@pytest.fixture
def two_page_corpus() -> Corpus:
    records = make_page("p1", [("L1", "virtu", "virtutem"), ("L2", "tem est", "tem est")])
    records += make_page("p2", [("L3", "diem", "diem"), ("L4", "morti. Ago", "Ago")])
    return Corpus(records)
