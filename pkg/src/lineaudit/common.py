"""Small helpers used by several modules."""

from __future__ import annotations

import unicodedata
from decimal import ROUND_HALF_UP, Decimal

CANONICAL_SPLITS = ("train", "validation", "test")


def normalize_text(text: str) -> str:
    """NFC-compose and trim leading/trailing whitespace.

    Interior whitespace is content and is preserved verbatim.
    """
    return unicodedata.normalize("NFC", text).strip()


def half_up_percent(count: float, total: float) -> float:
    """Percentage rounded half-up to two decimals; 0.0 when total is 0."""
    if total == 0:
        return 0.0
    value = Decimal(count) * 100 / Decimal(total)
    return float(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))
