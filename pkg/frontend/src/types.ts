// Wire types matching the review service JSON verbatim.

export type AnnotationStatus = "Correct" | "Fixed" | "Unsure" | "HasErrors";

export type StartLabel =
    | "MissingWords"
    | "AdditionalWords"
    | "HyphenatedMissing"
    | "HyphenatedExtraChars";

// HyphenationCharacter only exists at the end of the line.
export type EndLabel = StartLabel | "HyphenationCharacter";

export const STATUSES: AnnotationStatus[] = ["Correct", "Fixed", "Unsure", "HasErrors"];

export const START_LABELS: StartLabel[] = [
    "MissingWords",
    "AdditionalWords",
    "HyphenatedMissing",
    "HyphenatedExtraChars",
];

export const END_LABELS: EndLabel[] = [...START_LABELS, "HyphenationCharacter"];

export const LABEL_TEXT: Record<EndLabel, string> = {
    MissingWords: "Missing Word(s)",
    AdditionalWords: "Additional Word(s)",
    HyphenatedMissing: "Hyphenated (missing)",
    HyphenatedExtraChars: "Hyphenated (extra chars)",
    HyphenationCharacter: "Hyphenation Character",
};

export interface FlagInfo {
    line_id: string;
    trigger: string;
    run_kind?: string;
    run_length?: number;
    related_line_id?: string;
    model: string;
}

export interface NeighborContext {
    previous: string | null;
    next: string | null;
}

export interface QueueItem {
    line_id: string;
    ground_truth: string;
    prediction: string | null;
    flags: FlagInfo[];
    neighbor_context: NeighborContext;
    image_url: string | null;
    cross_reference_url: string | null;
    current_version: number;
}

export interface AnnotationInput {
    status: AnnotationStatus;
    corrected_text: string | null;
    start_labels: StartLabel[];
    end_labels: EndLabel[];
    expected_version: number;
}

export interface StoredAnnotation {
    line_id: string;
    status: AnnotationStatus;
    corrected_text: string | null;
    start_labels: string[];
    end_labels: string[];
    annotator_id: string;
    timestamp: string;
    version: number;
    original_ground_truth: string;
}
