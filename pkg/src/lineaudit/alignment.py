"""Levenshtein alignment with a deterministic backtrace, plus CER/WER.

The alignment direction is fixed everywhere in this package: operations
transform the ground truth (source) into the prediction (target).  An
Insert therefore means "present only in the prediction" and a Delete
"present only in the ground truth".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence

from .errors import MissingPredictionError, UnknownLineError

if TYPE_CHECKING:
    from .corpus import Corpus


class OpKind(str, Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    INSERT = "insert"
    DELETE = "delete"


class EditOp(NamedTuple):
    """One step of an alignment.

    Match/Substitute carry both positions, Delete only ``source_pos``,
    Insert only ``target_pos``.
    """

    kind: OpKind
    source_pos: int | None
    target_pos: int | None


@dataclass(frozen=True)
class AlignmentResult:
    ops: tuple[EditOp, ...]
    distance: int
    substitutions: int
    insertions: int
    deletions: int


def _suffix_costs(source: Sequence, target: Sequence) -> list[list[int]]:
    # rest[i][j] = Levenshtein distance between source[i:] and target[j:]
    n, m = len(source), len(target)
    rest = [[0] * (m + 1) for _ in range(n + 1)]
    rest[n] = list(range(m, -1, -1))
    for i in range(n - 1, -1, -1):
        row = rest[i]
        below = rest[i + 1]
        row[m] = n - i
        ch = source[i]
        for j in range(m - 1, -1, -1):
            if ch == target[j]:
                row[j] = below[j + 1]
            else:
                best = below[j + 1]
                if below[j] < best:
                    best = below[j]
                if row[j + 1] < best:
                    best = row[j + 1]
                row[j] = best + 1
    return rest


def edit_alignment(source: Sequence, target: Sequence) -> AlignmentResult:
    """Minimal unit-cost alignment of ``source`` onto ``target``.

    Among the minimal-cost alignments one is chosen deterministically by
    walking forward from the start of both sequences and preferring, at
    equal cost, Match > Substitute > Delete > Insert.  The forward walk
    pushes insertion/deletion runs as late as possible, so a pure affix
    at the end of a line surfaces as a run at the end of the op sequence
    (which downstream hyphenation detection relies on).

    Works on strings (character alignment) and on token sequences
    (word alignment) alike.
    """
    rest = _suffix_costs(source, target)
    n, m = len(source), len(target)
    ops: list[EditOp] = []
    subs = ins = dels = 0
    i = j = 0
    while i < n and j < m:
        if source[i] == target[j]:
            # Matching equal heads is always on a minimal path.
            ops.append(EditOp(OpKind.MATCH, i, j))
            i += 1
            j += 1
            continue
        cur = rest[i][j]
        if rest[i + 1][j + 1] + 1 == cur:
            ops.append(EditOp(OpKind.SUBSTITUTE, i, j))
            subs += 1
            i += 1
            j += 1
        elif rest[i + 1][j] + 1 == cur:
            ops.append(EditOp(OpKind.DELETE, i, None))
            dels += 1
            i += 1
        else:
            ops.append(EditOp(OpKind.INSERT, None, j))
            ins += 1
            j += 1
    while i < n:
        ops.append(EditOp(OpKind.DELETE, i, None))
        dels += 1
        i += 1
    while j < m:
        ops.append(EditOp(OpKind.INSERT, None, j))
        ins += 1
        j += 1
    return AlignmentResult(tuple(ops), rest[0][0], subs, ins, dels)


def edit_distance(source: Sequence, target: Sequence) -> int:
    """Levenshtein distance only, without building the op sequence.

    Equivalent to ``edit_alignment(source, target).distance`` but cheap
    enough for corpus-scale metric computation.
    """
    if source == target:
        return 0
    # Trimming a shared prefix/suffix never changes the distance.
    lo = 0
    hi_s, hi_t = len(source), len(target)
    while lo < hi_s and lo < hi_t and source[lo] == target[lo]:
        lo += 1
    while hi_s > lo and hi_t > lo and source[hi_s - 1] == target[hi_t - 1]:
        hi_s -= 1
        hi_t -= 1
    s = source[lo:hi_s]
    t = target[lo:hi_t]
    if not s:
        return len(t)
    if not t:
        return len(s)
    if len(t) < len(s):
        s, t = t, s
    prev = list(range(len(t) + 1))
    for i, cs in enumerate(s, 1):
        cur = [i] + [0] * len(t)
        for j, ct in enumerate(t, 1):
            if cs == ct:
                cur[j] = prev[j - 1]
            else:
                cur[j] = 1 + min(prev[j - 1], prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class Metrics:
    """Character and word error counts with their ground-truth denominators.

    ``cer``/``wer`` are None when the denominator is zero but errors are
    present (or no lines were evaluated at all): the rate is undefined
    rather than infinite, and callers must handle that state explicitly.
    Rates may legitimately exceed 1.0.
    """

    char_errors: int
    char_total: int
    word_errors: int
    word_total: int
    lines: int = 1

    @property
    def cer(self) -> float | None:
        return _rate(self.char_errors, self.char_total, self.lines)

    @property
    def wer(self) -> float | None:
        return _rate(self.word_errors, self.word_total, self.lines)

    def as_record(self) -> dict:
        return {
            "cer": self.cer,
            "wer": self.wer,
            "char_errors": self.char_errors,
            "char_total": self.char_total,
            "word_errors": self.word_errors,
            "word_total": self.word_total,
            "lines": self.lines,
        }


def _rate(errors: int, total: int, lines: int) -> float | None:
    if total > 0:
        return errors / total
    if errors == 0 and lines > 0:
        return 0.0
    return None


def line_metrics(ground_truth: str, prediction: str) -> Metrics:
    """CER/WER counts for one line; denominators come from the ground truth."""
    words_gt = ground_truth.split()
    words_pred = prediction.split()
    return Metrics(
        char_errors=edit_distance(ground_truth, prediction),
        char_total=len(ground_truth),
        word_errors=edit_distance(words_gt, words_pred),
        word_total=len(words_gt),
    )


def evaluate(corpus: "Corpus", model: str, subset) -> Metrics:
    """Micro-averaged metrics for one model over a subset of the corpus.

    ``subset`` is either a split name or an iterable of line ids.  Error
    and reference counts are summed over all lines before division, so
    the result is independent of iteration order.  Every line in the
    subset must carry a prediction under ``model``.
    """
    records = _resolve_subset(corpus, subset)
    missing = [r.id for r in records if model not in r.predictions]
    if missing:
        raise MissingPredictionError(model, missing)
    char_errors = char_total = word_errors = word_total = 0
    for record in records:
        m = line_metrics(record.ground_truth, record.predictions[model])
        char_errors += m.char_errors
        char_total += m.char_total
        word_errors += m.word_errors
        word_total += m.word_total
    return Metrics(char_errors, char_total, word_errors, word_total, lines=len(records))


def _resolve_subset(corpus: "Corpus", subset) -> list:
    if isinstance(subset, str):
        return corpus.split_lines(subset)
    wanted = set(subset)
    unknown = wanted - {r.id for r in corpus}
    if unknown:
        raise UnknownLineError(f"unknown line ids: {sorted(unknown)[:10]}")
    return [r for r in corpus if r.id in wanted]
