#!/usr/bin/env python3
# Walk through the corpus data model and CER/WER evaluation.

from lineaudit import Corpus, LineRecord, corpus_stats, evaluate, line_metrics

records = [
    LineRecord(
        id="L1", letter_id="letter-1", page_id="page-1", line_index=0, split="test",
        ground_truth="Ago",
        predictions={"htr": "morti. Ago"},
    ),
    LineRecord(
        id="L2", letter_id="letter-1", page_id="page-1", line_index=1, split="test",
        ground_truth="hand genommen",
        predictions={"htr": "hand genen"},
    ),
    LineRecord(
        id="L3", letter_id="letter-1", page_id="page-2", line_index=0, split="train",
        ground_truth="gratia et pax",
        predictions={"htr": "gratia et pax"},
    ),
]
corpus = Corpus(records)

print("== corpus statistics ==")
stats = corpus_stats(corpus)
for name, split in stats.splits.items():
    print(f"  {name:<11} letters={split.letters} pages={split.pages} lines={split.lines} words={split.words}")
print(f"  {'total':<11} letters={stats.total.letters} pages={stats.total.pages} lines={stats.total.lines} words={stats.total.words}")

print("\n== per-line metrics ==")
for record in corpus:
    m = line_metrics(record.ground_truth, record.predictions["htr"])
    print(f"  {record.id}: CER={m.cer:.4f} ({m.char_errors}/{m.char_total})  WER={m.wer:.4f} ({m.word_errors}/{m.word_total})")

# Note L1: the prediction contains a whole extra word, so the CER exceeds 1.
# That is exactly the signature of a wrongly hyphenated word in the ground
# truth, which the hyphenation detector exploits (see demo 02).

print("\n== micro-averaged over the test split ==")
m = evaluate(corpus, "htr", "test")
print(f"  CER={m.cer:.4f}  WER={m.wer:.4f}  over {m.lines} lines")
