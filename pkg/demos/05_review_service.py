#!/usr/bin/env python3
# Stand up the review service on a throwaway dataset and exercise the API.
#
# Run with --serve to keep it listening for the browser UI; without the
# flag the script drives the endpoints in-process and exits.

import sys
import tempfile
from pathlib import Path

from lineaudit import (
    AnnotationStore,
    Corpus,
    LineRecord,
    ServiceConfig,
    create_app,
    detect_candidates,
)

corpus = Corpus([
    LineRecord(id=f"L{i}", letter_id="letter-1", page_id="p1", line_index=i, split="test",
               ground_truth=gt, predictions={"htr": pred})
    for i, (gt, pred) in enumerate([
        ("virtu", "virtutem"),
        ("tem est", "tem est"),
        ("diem", "diem"),
        ("morti. Ago", "Ago"),
    ])
])
flags = detect_candidates(corpus, "htr").flags
workdir = Path(tempfile.mkdtemp())
store = AnnotationStore(workdir / "annotations.jsonl", corpus)
config = ServiceConfig(model="htr", cross_reference_template="https://archive.example/{letter_id}")
app = create_app(corpus, flags, store, config)

if "--serve" in sys.argv:
    import uvicorn

    print("serving on http://127.0.0.1:8000 (queue at /api/queue)")
    uvicorn.run(app, host="127.0.0.1", port=8000)
    raise SystemExit(0)

from fastapi.testclient import TestClient  # needs the 'test' extra (httpx)

client = TestClient(app)

print("== queue ==")
for item in client.get("/api/queue?limit=10").json():
    print(f"  {item['line_id']}: gt={item['ground_truth']!r} pred={item['prediction']!r} "
          f"v{item['current_version']} flags={[f['trigger'] for f in item['flags']]}")

print("\n== L3's ground truth grabbed the whole hyphenated word; fix it ==")
response = client.post(
    "/api/lines/L3/annotation",
    json={"status": "Fixed", "corrected_text": "Ago", "expected_version": 0,
          "start_labels": ["HyphenatedExtraChars"]},
    headers={"X-Annotator-Id": "demo"},
)
print("  status:", response.status_code, "-> stored version", response.json()["version"])

print("\n== a stale second writer gets a conflict ==")
response = client.post("/api/lines/L3/annotation",
                       json={"status": "Correct", "expected_version": 0})
print("  status:", response.status_code)

print("\n== reports ==")
print("  ", client.get("/api/reports/status").json())

print("\n== corrected export ==")
for line in client.get("/api/export?scope=test").text.splitlines():
    print("  ", line)
