#!/usr/bin/env python3
# Detect hyphenation-error candidates from alignment boundary runs.
#
# When a hyphenated word was assigned wholly to one line, a model that
# reads the image will disagree with the ground truth by a pure block of
# characters at a line boundary: either extra characters at the end of
# the line, or extra characters at the start of the following line.

from lineaudit import (
    Corpus,
    LineRecord,
    boundary_runs,
    detect_candidates,
    edit_alignment,
    exclude_flagged,
)


def record(line_id, index, gt, pred):
    return LineRecord(
        id=line_id, letter_id="letter-1", page_id="page-1", line_index=index,
        split="train", ground_truth=gt, predictions={"htr": pred},
    )


print("== boundary runs on a single alignment ==")
alignment = edit_alignment("hand genommen", "hand gen")
print("  ops:", "".join(op.kind.value[0].upper() for op in alignment.ops))
runs = boundary_runs(alignment)
print(f"  head run: {runs.head}  tail run: {runs.tail}")
# The ground truth carries the completed word, the image only the
# fragment: five deletions anchored at the end of the line.

print("\n== page-level candidate detection ==")
corpus = Corpus([
    record("L1", 0, "virtu", "virtutem"),         # model completes the fragment
    record("L2", 1, "tem est", "tem est"),
    record("L3", 2, "diem", "diem"),
    record("L4", 3, "morti. Ago", "Ago"),          # ground truth took the whole word
    record("L5", 4, "pax vobiscum", "pax vobiscum"),
])
result = detect_candidates(corpus, "htr", min_run=3)
for flag in result.flags:
    related = f" (next line: {flag.related_line_id})" if flag.related_line_id else ""
    print(f"  {flag.line_id}: {flag.trigger.value} {flag.run_kind.value} x{flag.run_length}{related}")

print("\n== pessimistic exclusion for training ==")
excluded = exclude_flagged(corpus, result.flags, "train")
print(f"  kept {len(excluded.kept)} of {len(excluded.kept) + len(excluded.removed)} lines "
      f"({excluded.retention_percent:.2f}% retention)")
print("  removed:", [r.id for r in excluded.removed])
