"""Command-line entry point for the full pipeline.

Machine-parseable output goes to stdout (or ``--out``), diagnostics to
stderr.  Exit codes: 0 success, 1 validation/domain error, 2 usage error.
"""

from __future__ import annotations

import functools
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import annotation as ann
from . import hyphenation as hyph
from .alignment import evaluate as evaluate_metrics
from .common import CANONICAL_SPLITS
from .corpus import Corpus, corpus_stats, load_corpus, save_corpus, validate as validate_corpus
from .deviation import filter_by_deviation
from .errors import LineAuditError
from .service import ServiceConfig, create_app

SPLIT_CHOICE = click.Choice(CANONICAL_SPLITS)
FORMAT_CHOICE = click.Choice(("jsonl", "table"))


def domain_errors(func):
    """Map domain errors to exit code 1 with a diagnostic on stderr."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except LineAuditError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group(context_settings={"auto_envvar_prefix": "LINEAUDIT"})
def main():
    """Audit and curate line-level handwriting-transcription corpora."""


def _write_lines(lines: list[str], out: Path | None):
    text = "".join(line + "\n" for line in lines)
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _emit_records(records: list[dict], out: Path | None):
    _write_lines([json.dumps(r, ensure_ascii=False) for r in records], out)


def _render_table(headers: list[str], rows: list[list[str]], no_timestamp: bool) -> list[str]:
    widths = [max(len(str(cell)) for cell in column) for column in zip(headers, *rows)]
    lines = []
    if not no_timestamp:
        lines.append(f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}")
    lines.append("  ".join(str(h).ljust(w) for h, w in zip(headers, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(c).rjust(w) if i else str(c).ljust(w) for i, (c, w) in enumerate(zip(row, widths))).rstrip())
    return lines


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--in-format", type=click.Choice(("jsonl", "tsv-pairs")), default="jsonl", show_default=True)
@click.option("--split", type=SPLIT_CHOICE, default="train", show_default=True, help="Split for tsv-pairs rows.")
@click.option("--model", default="model", show_default=True, help="Model name for tsv-pairs predictions.")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@domain_errors
def ingest(corpus_path: Path, in_format: str, split: str, model: str, out: Path):
    """Load a corpus file, normalize it, and write the canonical jsonl."""
    corpus = load_corpus(corpus_path, format=in_format, split=split, model=model)
    save_corpus(corpus, out)
    click.echo(f"ingested {len(corpus)} lines -> {out}", err=True)


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--image-root", type=click.Path(path_type=Path), default=None)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="jsonl", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--no-timestamp", is_flag=True)
@domain_errors
def validate(corpus_path: Path, image_root: Path | None, fmt: str, out: Path | None, no_timestamp: bool):
    """Report corpus invariant violations; exits 1 if any error-severity issue."""
    corpus = load_corpus(corpus_path)
    issues = validate_corpus(corpus, image_root=image_root)
    if fmt == "jsonl":
        _emit_records([i.as_record() for i in issues], out)
    else:
        rows = [[i.severity, i.locator, i.code, i.message] for i in issues]
        _write_lines(_render_table(["severity", "locator", "code", "message"], rows, no_timestamp), out)
    if any(i.severity == "error" for i in issues):
        click.echo(f"{sum(i.severity == 'error' for i in issues)} error(s) found", err=True)
        sys.exit(1)


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="table", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--no-timestamp", is_flag=True)
@domain_errors
def stats(corpus_path: Path, fmt: str, out: Path | None, no_timestamp: bool):
    """Corpus statistics: letters, pages, lines, words per split."""
    result = corpus_stats(load_corpus(corpus_path))
    if fmt == "jsonl":
        record = {
            "splits": {name: vars(st) for name, st in result.splits.items()},
            "total": vars(result.total),
        }
        _emit_records([record], out)
        return
    headers = [""] + [name.capitalize() for name in result.splits] + ["Total"]
    rows = []
    for label, attr in (("# of letters", "letters"), ("# of pages", "pages"), ("# of lines", "lines"), ("# of words", "words")):
        cells = [f"{getattr(st, attr):,}" for st in result.splits.values()]
        rows.append([label] + cells + [f"{getattr(result.total, attr):,}"])
    _write_lines(_render_table(headers, rows, no_timestamp), out)


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--model", required=True)
@click.option("--split", type=SPLIT_CHOICE, default="test", show_default=True)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="jsonl", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--no-timestamp", is_flag=True)
@domain_errors
def evaluate(corpus_path: Path, model: str, split: str, fmt: str, out: Path | None, no_timestamp: bool):
    """Micro-averaged CER/WER for one model over one split."""
    corpus = load_corpus(corpus_path)
    metrics = evaluate_metrics(corpus, model, split)
    record = {"model": model, "subset": split, **metrics.as_record()}
    if fmt == "jsonl":
        _emit_records([record], out)
    else:
        rows = [[k, "undefined" if v is None else v] for k, v in record.items()]
        _write_lines(_render_table(["field", "value"], rows, no_timestamp), out)


@main.command("detect-hyphen")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--model", required=True)
@click.option("--min-run", type=int, default=hyph.DEFAULT_MIN_RUN, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@domain_errors
def detect_hyphen(corpus_path: Path, model: str, min_run: int, out: Path | None):
    """Flag hyphenation candidates by the boundary-run rule."""
    corpus = load_corpus(corpus_path)
    result = hyph.detect_candidates(corpus, model, min_run=min_run)
    for error in result.errors:
        click.echo(f"warning: {error.line_id}: {error.message}", err=True)
    _emit_records([f.as_record() for f in result.flags], out)
    click.echo(f"{len(result.flags)} flag(s) on {len({f.line_id for f in result.flags})} line(s)", err=True)


@main.command("scan-symbols")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--field", type=click.Choice(("ground_truth", "prediction")), default="ground_truth", show_default=True)
@click.option("--model", default=None)
@click.option("--symbols", default="".join(sorted(hyph.DEFAULT_HYPHEN_SYMBOLS)), show_default=True)
@click.option("--include-colon", is_flag=True, help="Also scan for ':' (frequent false positive).")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@domain_errors
def scan_symbols(corpus_path: Path, field: str, model: str | None, symbols: str, include_colon: bool, out: Path | None):
    """List lines ending with a hyphen-like symbol (auxiliary signal)."""
    symbol_set = frozenset(symbols) | ({":"} if include_colon else set())
    corpus = load_corpus(corpus_path)
    try:
        hits = hyph.scan_hyphen_symbols(corpus, field=field, model=model, symbols=symbol_set)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit_records([{"line_id": h.line_id, "symbol": h.symbol, "position": h.position} for h in hits], out)


@main.command("ingest-markers")
@click.argument("marker_file", type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--marker", default="¬", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@domain_errors
def ingest_markers(marker_file: Path, corpus_path: Path, marker: str, out: Path | None):
    """Ingest id<TAB>text rows from an external marker-based detector."""
    corpus = load_corpus(corpus_path)
    result = hyph.ingest_marker_flags(marker_file, corpus, marker=marker)
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    _emit_records([f.as_record() for f in result.flags], out)


@main.command("filter-deviation")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--model", required=True)
@click.option("--split", type=SPLIT_CHOICE, default="train", show_default=True)
@click.option("--k", type=float, default=1.0, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Kept corpus jsonl.")
@click.option("--removed-out", type=click.Path(path_type=Path), default=None)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="jsonl", show_default=True)
@click.option("--no-timestamp", is_flag=True)
@domain_errors
def filter_deviation(corpus_path, model, split, k, out, removed_out, fmt, no_timestamp):
    """Keep lines whose character-count deviation lies within mu +/- k*sigma."""
    corpus = load_corpus(corpus_path)
    result = filter_by_deviation(corpus, model, split, k=k)
    if out is not None:
        save_corpus(result.kept, out)
    if removed_out is not None:
        save_corpus(result.removed, removed_out)
    record = result.as_record()
    if fmt == "jsonl":
        _emit_records([record], None)
    else:
        _write_lines(_render_table(["field", "value"], [[k_, v] for k_, v in record.items()], no_timestamp), None)


@main.command("exclude-flagged")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--flags", "flags_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--split", type=SPLIT_CHOICE, default="train", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Kept corpus jsonl.")
@click.option("--removed-out", type=click.Path(path_type=Path), default=None)
@domain_errors
def exclude_flagged_cmd(corpus_path, flags_path, split, out, removed_out):
    """Remove every flagged line from a split (pessimistic exclusion)."""
    corpus = load_corpus(corpus_path)
    flags = hyph.load_flags(flags_path)
    result = hyph.exclude_flagged(corpus, flags, split)
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    if out is not None:
        save_corpus(result.kept, out)
    if removed_out is not None:
        save_corpus(result.removed, removed_out)
    _emit_records(
        [{
            "scope": split,
            "kept": len(result.kept),
            "removed": len(result.removed),
            "retention_percent": result.retention_percent,
        }],
        None,
    )


@main.command()
@click.option("--annotations", "log_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--kind", type=click.Choice(("status", "errors")), default="status", show_default=True)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="table", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--no-timestamp", is_flag=True)
@domain_errors
def report(log_path: Path, kind: str, fmt: str, out: Path | None, no_timestamp: bool):
    """Annotation-status or error-type report from an annotation log."""
    store = ann.AnnotationStore(log_path)
    if kind == "status":
        rep = ann.status_report(store)
        if fmt == "jsonl":
            _emit_records([rep.as_record()], out)
            return
        rows = [[s.value, f"{rep.counts[s]:,}", f"({rep.percentages[s]:.2f}%)"] for s in ann.AnnotationStatus]
        rows.append(["Total", f"{rep.total:,}", "(100%)" if rep.total else "(0%)"])
        _write_lines(_render_table(["Annotation Status", "count", "percent"], rows, no_timestamp), out)
    else:
        rep = ann.error_type_report(store)
        if fmt == "jsonl":
            _emit_records([rep.as_record()], out)
            return
        rows = []
        for label in ann.ErrorLabel:
            if label is ann.ErrorLabel.HYPHENATION_CHARACTER:
                start_cells = ["-", "-"]
            else:
                start_cells = [f"{rep.start_counts[label]:,}", f"({rep.start_percent(label):.2f}%)"]
            rows.append([label.value] + start_cells + [f"{rep.end_counts[label]:,}", f"({rep.end_percent(label):.2f}%)"])
        _write_lines(
            _render_table(["Labels", "start", "start %", "end", "end %"], rows, no_timestamp), out
        )


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--annotations", "log_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--scope", type=SPLIT_CHOICE, default="test", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@domain_errors
def export(corpus_path: Path, log_path: Path, scope: str, out: Path | None):
    """Write the corrected evaluation set (Correct + Fixed lines only)."""
    corpus = load_corpus(corpus_path)
    store = ann.AnnotationStore(log_path)
    result = ann.export_corrected(corpus, store, scope)
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    _emit_records([line.as_record() for line in result.lines], out)
    click.echo(f"exported {len(result.lines)} line(s)", err=True)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--corpus", "corpus_path", type=click.Path(path_type=Path), default=None)
@click.option("--flags", "flags_path", type=click.Path(path_type=Path), default=None)
@click.option("--annotations", "log_path", type=click.Path(path_type=Path), default=None)
@click.option("--model", default=None)
@click.option("--image-root", type=click.Path(path_type=Path), default=None)
@click.option("--static-dir", type=click.Path(path_type=Path), default=None)
@click.option("--cross-reference-template", default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@domain_errors
def serve(config_path, corpus_path, flags_path, log_path, model, image_root, static_dir, cross_reference_template, host, port):
    """Run the review service (config file values overridden by flags)."""
    settings: dict = {}
    if config_path is not None:
        settings = ServiceConfig.from_file(config_path)
    overrides = {
        "corpus": corpus_path,
        "flags": flags_path,
        "annotations": log_path,
        "model": model,
        "image_root": image_root,
        "static_dir": static_dir,
        "cross_reference_template": cross_reference_template,
        "host": host,
        "port": port,
    }
    settings.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("corpus", "annotations", "model"):
        if not settings.get(key):
            raise click.UsageError(f"missing required setting {key!r} (flag or config file)")
    corpus = load_corpus(settings["corpus"])
    flags = hyph.load_flags(settings["flags"]) if settings.get("flags") else []
    store = ann.AnnotationStore(settings["annotations"], corpus)
    config = ServiceConfig(
        model=settings["model"],
        image_root=Path(settings["image_root"]) if settings.get("image_root") else None,
        cross_reference_template=settings.get("cross_reference_template"),
        static_dir=Path(settings["static_dir"]) if settings.get("static_dir") else None,
    )
    app = create_app(corpus, flags, store, config)

    import uvicorn

    uvicorn.run(app, host=settings.get("host", "127.0.0.1"), port=int(settings.get("port", 8000)))


if __name__ == "__main__":
    main()
