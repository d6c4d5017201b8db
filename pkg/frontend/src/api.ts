import type { AnnotationInput, QueueItem, StoredAnnotation } from "./types.js";

export class ApiError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
    }
}

/** 409: someone else annotated this line first; carries their record. */
export class ConflictError extends ApiError {
    constructor(readonly current: StoredAnnotation | null) {
        super(409, "this line was annotated by someone else in the meantime");
    }
}

/** 422: the submission violates a record invariant server-side. */
export class ValidationError extends ApiError {
    constructor(message: string) {
        super(422, message);
    }
}

export async function fetchQueue(
    limit = 50,
    filter: "unannotated" | "all" = "unannotated",
): Promise<QueueItem[]> {
    const r = await fetch(`/api/queue?limit=${limit}&filter=${filter}`);
    if (!r.ok) throw new ApiError(r.status, `GET queue ${r.status}`);
    return r.json();
}

export async function fetchLine(lineId: string): Promise<QueueItem> {
    const r = await fetch(`/api/lines/${encodeURIComponent(lineId)}`);
    if (!r.ok) throw new ApiError(r.status, `GET line ${r.status}`);
    return r.json();
}

export async function submitAnnotation(
    lineId: string,
    payload: AnnotationInput,
    annotatorId: string,
): Promise<StoredAnnotation> {
    const r = await fetch(`/api/lines/${encodeURIComponent(lineId)}/annotation`, {
        method: "POST",
        headers: {
            "Content-Type": "application/json",
            "X-Annotator-Id": annotatorId,
        },
        body: JSON.stringify(payload),
    });
    if (r.status === 409) {
        const body = await r.json().catch(() => null);
        throw new ConflictError(body?.detail?.current ?? null);
    }
    if (r.status === 422) {
        const body = await r.json().catch(() => null);
        const detail = body?.detail;
        throw new ValidationError(typeof detail === "string" ? detail : "submission rejected");
    }
    if (!r.ok) throw new ApiError(r.status, `POST annotation ${r.status}`);
    return r.json();
}
