"""HTTP review service: flag queue, line details, annotation submission,
reports and export, consumed by the browser UI and by scripts.

The service is stateless above the corpus and the annotation store:
restarting it and replaying the log yields identical responses.
"""

from __future__ import annotations

import json
import mimetypes
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Request
from fastapi.responses import FileResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .annotation import AnnotationStore, error_type_report, export_corrected, status_report, submit_annotation
from .corpus import Corpus
from .errors import AnnotationInvariantError, LineAuditError, UnknownLineError, VersionConflictError
from .hyphenation import HyphenationFlag


@dataclass
class ServiceConfig:
    model: str
    image_root: Path | None = None
    cross_reference_template: str | None = None
    static_dir: Path | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> dict:
        """Raw config mapping: corpus/flags/annotations paths plus options."""
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)


class AnnotationIn(BaseModel):
    status: str
    corrected_text: str | None = None
    start_labels: list[str] = []
    end_labels: list[str] = []
    expected_version: int = 0


def create_app(
    corpus: Corpus,
    flags: list[HyphenationFlag],
    store: AnnotationStore,
    config: ServiceConfig,
) -> FastAPI:
    app = FastAPI(title="lineaudit review service")
    flagged_ids = sorted({f.line_id for f in flags if f.line_id in corpus})
    flags_by_line: dict[str, list[HyphenationFlag]] = {}
    for flag in flags:
        flags_by_line.setdefault(flag.line_id, []).append(flag)

    def queue_item(line_id: str) -> dict:
        record = corpus.get(line_id)
        neighbors = corpus.ordered_lines(record.page_id)
        pos = next(i for i, r in enumerate(neighbors) if r.id == line_id)
        previous = neighbors[pos - 1].ground_truth if pos > 0 else None
        following = neighbors[pos + 1].ground_truth if pos + 1 < len(neighbors) else None
        cross_reference = None
        if config.cross_reference_template:
            cross_reference = config.cross_reference_template.format(letter_id=record.letter_id)
        return {
            "line_id": record.id,
            "ground_truth": record.ground_truth,
            "prediction": record.predictions.get(config.model),
            "flags": [f.as_record() for f in flags_by_line.get(line_id, [])],
            "neighbor_context": {"previous": previous, "next": following},
            "image_url": f"/api/lines/{record.id}/image" if record.image_ref else None,
            "cross_reference_url": cross_reference,
            "current_version": store.current_version(record.id),
        }

    @app.get("/api/queue")
    def get_queue(limit: str = "50", filter: str = "unannotated"):
        try:
            n = int(limit)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"limit must be an integer, got {limit!r}")
        if n < 0:
            raise HTTPException(status_code=400, detail="limit must be >= 0")
        if filter not in ("unannotated", "all"):
            raise HTTPException(status_code=400, detail=f"filter must be 'unannotated' or 'all', got {filter!r}")
        ids = flagged_ids
        if filter == "unannotated":
            annotated = store.annotated_ids()
            ids = [i for i in ids if i not in annotated]
        return [queue_item(i) for i in ids[:n]]

    @app.get("/api/lines/{line_id}")
    def get_line(line_id: str):
        if line_id not in corpus:
            raise HTTPException(status_code=404, detail=f"unknown line id {line_id!r}")
        return queue_item(line_id)

    @app.get("/api/lines/{line_id}/image")
    def get_line_image(line_id: str):
        if line_id not in corpus:
            raise HTTPException(status_code=404, detail=f"unknown line id {line_id!r}")
        record = corpus.get(line_id)
        if record.image_ref is None or config.image_root is None:
            raise HTTPException(status_code=404, detail=f"line {line_id!r} has no image")
        path = Path(config.image_root) / record.image_ref
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"image file missing for line {line_id!r}")
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    @app.post("/api/lines/{line_id}/annotation")
    def post_annotation(
        line_id: str,
        body: AnnotationIn,
        x_annotator_id: str = Header(default="anonymous"),
    ):
        fields = {
            "line_id": line_id,
            "status": body.status,
            "corrected_text": body.corrected_text,
            "start_labels": body.start_labels,
            "end_labels": body.end_labels,
            "annotator_id": x_annotator_id,
        }
        try:
            stored = submit_annotation(store, fields, body.expected_version)
        except VersionConflictError as exc:
            current = exc.current.as_record() if exc.current else None
            raise HTTPException(status_code=409, detail={"message": str(exc), "current": current})
        except (AnnotationInvariantError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except UnknownLineError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return stored.as_record()

    @app.get("/api/reports/status")
    def get_status_report():
        return status_report(store).as_record()

    @app.get("/api/reports/errors")
    def get_error_report():
        return error_type_report(store).as_record()

    @app.get("/api/export")
    def get_export(scope: str = "test"):
        result = export_corrected(corpus, store, scope)
        payload = "".join(json.dumps(line.as_record(), ensure_ascii=False) + "\n" for line in result.lines)
        return PlainTextResponse(payload, media_type="application/x-ndjson")

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
