"""lineaudit: audit and curate line-level handwriting-transcription corpora.

The toolkit detects systematic ground-truth alignment errors (chiefly
wrongly hyphenated words), filters training sets by prediction/ground-truth
deviation, computes CER/WER, and runs a human correction workflow over an
append-only annotation store with an HTTP review service.
"""

from .alignment import (
    AlignmentResult,
    EditOp,
    Metrics,
    OpKind,
    edit_alignment,
    edit_distance,
    evaluate,
    line_metrics,
)
from .annotation import (
    AnnotationRecord,
    AnnotationStatus,
    AnnotationStore,
    ErrorLabel,
    ErrorTypeReport,
    ExportResult,
    StatusReport,
    error_type_report,
    export_corrected,
    save_export,
    status_report,
    submit_annotation,
)
from .corpus import (
    Corpus,
    CorpusStats,
    LineRecord,
    ValidationIssue,
    corpus_stats,
    load_corpus,
    save_corpus,
    validate,
)
from .deviation import (
    DeviationFilterResult,
    DeviationStats,
    LineDeviation,
    char_diff,
    deviation_stats,
    filter_by_deviation,
    interval_mask,
)
from .errors import (
    AnnotationInvariantError,
    CorpusFormatError,
    DuplicateIdError,
    EmptySubsetError,
    LineAuditError,
    MissingPredictionError,
    UnknownLineError,
    UnknownPageError,
    VersionConflictError,
)
from .hyphenation import (
    BoundaryRun,
    BoundaryRuns,
    DetectionResult,
    ExclusionResult,
    HyphenSymbolHit,
    HyphenationFlag,
    MarkerIngest,
    RunKind,
    Trigger,
    boundary_runs,
    detect_candidates,
    exclude_flagged,
    ingest_marker_flags,
    load_flags,
    save_flags,
    scan_hyphen_symbols,
)
from .service import ServiceConfig, create_app

__version__ = "0.1.0"
