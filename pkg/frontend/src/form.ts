// Pure annotation-form state machine.
//
// Client-side validation mirrors the server's record invariants exactly,
// so the UI never constructs a combination the service would reject:
//   - a status must be chosen before submitting
//   - Fixed requires the transcription to actually differ
//   - Correct forbids edits and labels, except Hyphenation Character at
//     the end of the line (a property of the image, not an error)

import type { AnnotationInput, AnnotationStatus, EndLabel, QueueItem, StartLabel } from "./types.js";

export interface FormState {
    item: QueueItem;
    status: AnnotationStatus | null;
    text: string;
    startLabels: ReadonlySet<StartLabel>;
    endLabels: ReadonlySet<EndLabel>;
}

export function initialForm(item: QueueItem): FormState {
    return {
        item,
        status: null,
        text: item.ground_truth, // prefilled; editing it implies Fixed
        startLabels: new Set(),
        endLabels: new Set(),
    };
}

export function isDirty(state: FormState): boolean {
    return state.text !== state.item.ground_truth;
}

export function editText(state: FormState, text: string): FormState {
    const next = { ...state, text };
    if (text !== state.item.ground_truth && (state.status === null || state.status === "Correct")) {
        next.status = "Fixed";
    }
    return next;
}

export function setStatus(state: FormState, status: AnnotationStatus): FormState {
    return { ...state, status };
}

export function toggleStartLabel(state: FormState, label: StartLabel): FormState {
    const labels = new Set(state.startLabels);
    labels.has(label) ? labels.delete(label) : labels.add(label);
    return { ...state, startLabels: labels };
}

export function toggleEndLabel(state: FormState, label: EndLabel): FormState {
    const labels = new Set(state.endLabels);
    labels.has(label) ? labels.delete(label) : labels.add(label);
    return { ...state, endLabels: labels };
}

export function validate(state: FormState): string[] {
    const messages: string[] = [];
    if (state.status === null) {
        messages.push("Choose a status before submitting.");
        return messages;
    }
    if (state.status === "Fixed" && !isDirty(state)) {
        messages.push("Fixed requires editing the transcription.");
    }
    if (state.status === "Correct") {
        if (isDirty(state)) {
            messages.push("Correct cannot carry an edited transcription; use Fixed.");
        }
        if (state.startLabels.size > 0) {
            messages.push("Correct cannot carry start-of-line labels.");
        }
        if ([...state.endLabels].some((label) => label !== "HyphenationCharacter")) {
            messages.push("Correct allows only the Hyphenation Character end label.");
        }
    }
    return messages;
}

export function canSubmit(state: FormState): boolean {
    return state.status !== null && validate(state).length === 0;
}

export function toPayload(state: FormState): AnnotationInput {
    if (state.status === null) throw new Error("no status chosen");
    const corrected = isDirty(state) && state.status !== "Correct" ? state.text : null;
    return {
        status: state.status,
        corrected_text: corrected,
        start_labels: [...state.startLabels].sort(),
        end_labels: [...state.endLabels].sort(),
        expected_version: state.item.current_version,
    };
}
