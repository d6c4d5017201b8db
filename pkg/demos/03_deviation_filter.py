#!/usr/bin/env python3
# Filter training lines by prediction/ground-truth character-count deviation.

import numpy as np

from lineaudit import Corpus, LineRecord, filter_by_deviation, interval_mask

rng = np.random.default_rng(7)

# Simulate a training set: most lines agree in length with the ground
# truth up to noise; a minority carry large deviations from alignment
# errors (whole words missing from or added to the ground truth).
n_clean, n_bad = 900, 100
clean = rng.normal(0.0, 1.2, n_clean).round().astype(int)
bad = rng.choice([-9, -8, -7, 7, 8, 9], n_bad)
deviations = np.concatenate([clean, bad])
rng.shuffle(deviations)

records = []
for i, d in enumerate(deviations):
    gt = "x" * 20
    pred = gt + "y" * int(d) if d >= 0 else gt[: 20 + int(d)]
    records.append(LineRecord(
        id=f"L{i:04d}", letter_id="l", page_id=f"p{i // 25}", line_index=i % 25,
        split="train", ground_truth=gt, predictions={"htr": pred},
    ))
corpus = Corpus(records)

result = filter_by_deviation(corpus, "htr", "train", k=1.0)
print(f"deviation stats: mu={result.stats.mu:+.3f} sigma={result.stats.sigma:.3f} n={result.stats.n}")
print(f"kept {len(result.kept)} / removed {len(result.removed)} "
      f"({result.retention_percent:.2f}% retention)")

removed_ds = [len(r.predictions['htr']) - len(r.ground_truth) for r in result.removed]
print(f"removed deviations range: {min(removed_ds)} .. {max(removed_ds)}")

# The interval test itself is exact: values on the boundary stay in, and
# shifting every deviation by a constant never changes the kept set.
values = [0, 2, 0, 2]  # mu=1, sigma=1: both values sit exactly on the edge
print("\nboundary values kept:", interval_mask(values, k=1.0))
print("shifted mask equal:", interval_mask(values, 1.0) == interval_mask([v + 100 for v in values], 1.0))
