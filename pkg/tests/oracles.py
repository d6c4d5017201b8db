"""Independent reference implementations used to check the library.

These deliberately avoid the library's own algorithms: the distance
oracle is the plain three-branch recursive Levenshtein definition, and
the replay checker reconstructs the target from the op sequence while
verifying positional bookkeeping.
"""

from __future__ import annotations

import functools
from typing import Sequence

from lineaudit.alignment import AlignmentResult, OpKind


def oracle_distance(a: Sequence, b: Sequence) -> int:
    """Plain recursive Levenshtein definition (memoized on positions)."""

    @functools.cache
    def rec(i: int, j: int) -> int:
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        cost = 0 if a[i] == b[j] else 1
        return min(
            rec(i + 1, j + 1) + cost,
            rec(i + 1, j) + 1,
            rec(i, j + 1) + 1,
        )

    result = rec(0, 0)
    rec.cache_clear()
    return result


def replay(source: Sequence, target: Sequence, result: AlignmentResult) -> None:
    """Assert that the op sequence transforms source into target exactly.

    Checks op-position completeness and strict monotonicity as a side
    effect: every source position must be consumed once in order, every
    target position produced once in order.
    """
    out = []
    si = ti = 0
    for op in result.ops:
        if op.kind is OpKind.MATCH:
            assert op.source_pos == si and op.target_pos == ti
            assert source[op.source_pos] == target[op.target_pos]
            out.append(target[op.target_pos])
            si += 1
            ti += 1
        elif op.kind is OpKind.SUBSTITUTE:
            assert op.source_pos == si and op.target_pos == ti
            assert source[op.source_pos] != target[op.target_pos]
            out.append(target[op.target_pos])
            si += 1
            ti += 1
        elif op.kind is OpKind.DELETE:
            assert op.source_pos == si and op.target_pos is None
            si += 1
        elif op.kind is OpKind.INSERT:
            assert op.source_pos is None and op.target_pos == ti
            out.append(target[op.target_pos])
            ti += 1
        else:  # pragma: no cover - enum is closed
            raise AssertionError(op.kind)
    assert si == len(source) and ti == len(target)
    assert list(out) == list(target)
    non_match = sum(1 for op in result.ops if op.kind is not OpKind.MATCH)
    assert result.distance == non_match
    assert result.distance == result.substitutions + result.insertions + result.deletions


def exhaustive_oracle(alphabet: str, max_len: int) -> tuple[list[str], list[list[int]]]:
    """Distance table for every string pair over ``alphabet`` up to
    ``max_len``, computed bottom-up by the recursive definition only
    (no dynamic-programming table per pair, no alignment code).
    """
    import itertools

    strings: list[str] = [""]
    for length in range(1, max_len + 1):
        strings.extend("".join(p) for p in itertools.product(alphabet, repeat=length))
    index = {s: k for k, s in enumerate(strings)}
    tail = [index[s[1:]] if s else -1 for s in strings]
    head = [s[0] if s else "" for s in strings]
    by_length: dict[int, list[int]] = {}
    for k, s in enumerate(strings):
        by_length.setdefault(len(s), []).append(k)

    n = len(strings)
    dist = [[0] * n for _ in range(n)]
    for k in range(n):
        dist[0][k] = len(strings[k])
        dist[k][0] = len(strings[k])
    for total in range(2, 2 * max_len + 1):
        for len_a in range(max(1, total - max_len), min(max_len, total - 1) + 1):
            len_b = total - len_a
            for ia in by_length[len_a]:
                row = dist[ia]
                tail_row = dist[tail[ia]]
                ha = head[ia]
                for ib in by_length[len_b]:
                    cost = 0 if ha == head[ib] else 1
                    tb = tail[ib]
                    best = tail_row[tb] + cost
                    down = tail_row[ib] + 1
                    if down < best:
                        best = down
                    right = row[tb] + 1
                    if right < best:
                        best = right
                    row[ib] = best
    return strings, dist
