"""Character-count deviation statistics and the mu +/- k*sigma filter.

The deviation of a line is the signed difference between the prediction's
character count and the ground truth's.  Lines whose deviation falls
outside [mu - k*sigma, mu + k*sigma] over a subset are filtered out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .common import half_up_percent
from .corpus import Corpus, LineRecord
from .errors import EmptySubsetError, MissingPredictionError


class LineDeviation(NamedTuple):
    line_id: str
    d: int  # len(prediction) - len(ground_truth), in Unicode scalars


def char_diff(line: LineRecord, model: str) -> LineDeviation:
    prediction = line.predictions.get(model)
    if prediction is None:
        raise MissingPredictionError(model, [line.id])
    return LineDeviation(line.id, len(prediction) - len(line.ground_truth))


@dataclass(frozen=True)
class DeviationStats:
    """Mean and population standard deviation (divide by n) of deviations."""

    mu: float
    sigma: float
    n: int
    model: str
    subset: str


def deviation_stats(corpus: Corpus, model: str, subset: str | Iterable[str]) -> DeviationStats:
    records = _resolve(corpus, subset)
    deviations = _deviations(records, model)
    values = np.array([d.d for d in deviations], dtype=float)
    return DeviationStats(
        mu=float(values.mean()),
        sigma=float(values.std()),  # ddof=0: population standard deviation
        n=len(values),
        model=model,
        subset=_describe(subset),
    )


def interval_mask(values: Sequence, k: float = 1.0) -> list[bool]:
    """Closed-interval membership d in [mu - k*sigma, mu + k*sigma].

    Evaluated in exact rational arithmetic via the equivalent form
    (n*d - S)^2 <= k^2 * (n*SS - S^2), so boundary values are kept
    exactly and shifting every value by a constant never changes the
    mask.  Accepts ints or floats (every float is an exact rational).
    """
    fracs = [Fraction(v) for v in values]
    n = len(fracs)
    if n == 0:
        return []
    total = sum(fracs)
    total_sq = sum(f * f for f in fracs)
    kf = Fraction(k)
    bound = kf * kf * (n * total_sq - total * total)
    return [(n * f - total) ** 2 <= bound for f in fracs]


@dataclass(frozen=True)
class DeviationFilterResult:
    kept: Corpus
    removed: Corpus
    retention: float
    stats: DeviationStats
    k: float

    @property
    def retention_percent(self) -> float:
        return half_up_percent(len(self.kept), len(self.kept) + len(self.removed))

    def as_record(self) -> dict:
        return {
            "model": self.stats.model,
            "subset": self.stats.subset,
            "n": self.stats.n,
            "mu": self.stats.mu,
            "sigma": self.stats.sigma,
            "k": self.k,
            "kept": len(self.kept),
            "removed": len(self.removed),
            "retention_percent": self.retention_percent,
        }


def filter_by_deviation(
    corpus: Corpus, model: str, subset: str | Iterable[str], k: float = 1.0
) -> DeviationFilterResult:
    """Keep the lines of a subset whose deviation lies in mu +/- k*sigma.

    Statistics are computed on the full subset before filtering.  The
    interval is closed; with sigma = 0 it degenerates to {mu} and keeps
    every line.
    """
    records = _resolve(corpus, subset)
    deviations = _deviations(records, model)
    stats = DeviationStats(
        mu=float(np.mean([d.d for d in deviations])),
        sigma=float(np.std([d.d for d in deviations])),
        n=len(deviations),
        model=model,
        subset=_describe(subset),
    )
    mask = interval_mask([d.d for d in deviations], k)
    kept = [r for r, keep in zip(records, mask) if keep]
    removed = [r for r, keep in zip(records, mask) if not keep]
    return DeviationFilterResult(
        kept=Corpus(kept, strict=False),
        removed=Corpus(removed, strict=False),
        retention=len(kept) / len(records),
        stats=stats,
        k=k,
    )


def _resolve(corpus: Corpus, subset) -> list[LineRecord]:
    if isinstance(subset, str):
        records = corpus.split_lines(subset)
    else:
        wanted = set(subset)
        records = [r for r in corpus if r.id in wanted]
    if not records:
        raise EmptySubsetError(f"subset {_describe(subset)!r} selects no lines")
    return records


def _deviations(records: list[LineRecord], model: str) -> list[LineDeviation]:
    missing = [r.id for r in records if model not in r.predictions]
    if missing:
        raise MissingPredictionError(model, missing)
    return [char_diff(r, model) for r in records]


def _describe(subset) -> str:
    if isinstance(subset, str):
        return subset
    return f"ids:{len(set(subset))}"
