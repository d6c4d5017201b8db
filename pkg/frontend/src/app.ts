// Annotator-facing single-page app: queue on the left, editor on the
// right, keyboard-first (digits pick a status, Ctrl+Enter submits and
// advances).  All state round-trips through the service; reloading the
// page loses nothing that was submitted.

import * as api from "./api.js";
import { ApiError, ConflictError, ValidationError } from "./api.js";
import {
    canSubmit,
    editText,
    FormState,
    initialForm,
    setStatus,
    toggleEndLabel,
    toggleStartLabel,
    toPayload,
    validate,
} from "./form.js";
import {
    END_LABELS,
    LABEL_TEXT,
    QueueItem,
    START_LABELS,
    STATUSES,
    StoredAnnotation,
} from "./types.js";

export interface AppOptions {
    annotatorId?: string;
    queueLimit?: number;
}

export class ReviewApp {
    readonly root: HTMLElement;
    readonly ready: Promise<void>;

    private annotatorId: string;
    private queueLimit: number;
    private queue: QueueItem[] = [];
    private form: FormState | null = null;
    private conflict: StoredAnnotation | null = null;
    private loadFailed = false;
    private submitError: string | null = null;

    constructor(root: HTMLElement, options: AppOptions = {}) {
        this.root = root;
        this.annotatorId = options.annotatorId ?? "anonymous";
        this.queueLimit = options.queueLimit ?? 100;
        root.classList.add("review-app");
        root.ownerDocument.addEventListener("keydown", (event) => this.onKeydown(event));
        this.ready = this.loadQueue();
    }

    private async loadQueue(): Promise<void> {
        try {
            // filter=all so already-annotated lines stay visible (marked done)
            this.queue = await api.fetchQueue(this.queueLimit, "all");
            this.loadFailed = false;
            if (this.form === null) {
                const first = this.queue.find((item) => item.current_version === 0);
                this.form = first ? initialForm(first) : null;
            }
        } catch {
            this.loadFailed = true;
        }
        this.render();
    }

    private isAnnotated(item: QueueItem): boolean {
        return item.current_version > 0;
    }

    private open(item: QueueItem): void {
        this.form = initialForm(item);
        this.conflict = null;
        this.submitError = null;
        this.render();
    }

    private advance(): void {
        const doneId = this.form?.item.line_id;
        const start = this.queue.findIndex((item) => item.line_id === doneId);
        const ordered = [...this.queue.slice(start + 1), ...this.queue.slice(0, start + 1)];
        const next = ordered.find((item) => !this.isAnnotated(item));
        this.form = next ? initialForm(next) : null;
        this.render();
    }

    async submit(): Promise<void> {
        if (this.form === null || !canSubmit(this.form)) {
            this.render();
            return;
        }
        const item = this.form.item;
        try {
            const stored = await api.submitAnnotation(item.line_id, toPayload(this.form), this.annotatorId);
            item.current_version = stored.version;
            this.submitError = null;
            this.advance();
        } catch (error) {
            if (error instanceof ConflictError) {
                this.conflict = error.current;
                this.render();
            } else if (error instanceof ValidationError) {
                this.submitError = error.message;
                this.render();
            } else if (error instanceof ApiError) {
                this.loadFailed = true;
                this.render();
            } else {
                throw error;
            }
        }
    }

    async reloadConflicted(): Promise<void> {
        if (this.form === null) return;
        const fresh = await api.fetchLine(this.form.item.line_id);
        const index = this.queue.findIndex((item) => item.line_id === fresh.line_id);
        if (index >= 0) this.queue[index] = fresh;
        this.conflict = null;
        this.form = initialForm(fresh);
        this.render();
    }

    dismissConflict(): void {
        this.conflict = null;
        this.render();
    }

    private onKeydown(event: KeyboardEvent): void {
        if (!this.root.isConnected) return; // app was unmounted
        if (event.key === "Enter" && (event.ctrlKey || event.metaKey)) {
            event.preventDefault();
            void this.submit();
            return;
        }
        const target = event.target as HTMLElement | null;
        if (target && (target.tagName === "TEXTAREA" || target.tagName === "INPUT")) return;
        const index = "1234".indexOf(event.key);
        if (index >= 0 && this.form) {
            this.form = setStatus(this.form, STATUSES[index]);
            this.render();
        }
    }

    // ----- rendering ---------------------------------------------------

    render(): void {
        const doc = this.root.ownerDocument;
        this.root.textContent = "";
        if (this.loadFailed) {
            const banner = el(doc, "div", "retry-banner", "Service unreachable.");
            const retry = el(doc, "button", "retry", "Retry");
            retry.addEventListener("click", () => {
                this.loadFailed = false;
                void this.loadQueue();
            });
            banner.appendChild(retry);
            this.root.appendChild(banner);
        }
        this.root.appendChild(this.renderQueue(doc));
        this.root.appendChild(this.renderEditor(doc));
        if (this.conflict !== undefined && this.conflictVisible()) {
            this.root.appendChild(this.renderConflict(doc));
        }
    }

    private conflictVisible(): boolean {
        return this.conflict !== null && this.form !== null;
    }

    private renderQueue(doc: Document): HTMLElement {
        const aside = el(doc, "aside", "queue");
        aside.appendChild(el(doc, "h2", "", "Review queue"));
        const list = el(doc, "ul", "queue-list");
        for (const item of this.queue) {
            const entry = el(doc, "li", "queue-entry");
            entry.dataset.lineId = item.line_id;
            if (this.isAnnotated(item)) entry.classList.add("annotated");
            if (this.form?.item.line_id === item.line_id) entry.classList.add("active");
            entry.appendChild(el(doc, "span", "entry-id", item.line_id));
            const triggers = item.flags.map((flag) => flag.trigger).join(", ");
            entry.appendChild(el(doc, "span", "entry-flags", triggers));
            if (this.isAnnotated(item)) entry.appendChild(el(doc, "span", "entry-done", "done"));
            entry.addEventListener("click", () => this.open(item));
            list.appendChild(entry);
        }
        aside.appendChild(list);
        return aside;
    }

    private renderEditor(doc: Document): HTMLElement {
        const editor = el(doc, "main", "editor");
        if (this.form === null) {
            const done = el(doc, "div", "all-done");
            done.appendChild(el(doc, "h2", "", "All done"));
            done.appendChild(el(doc, "p", "", "Every flagged line in the queue has a verdict."));
            editor.appendChild(done);
            return editor;
        }
        const { item } = this.form;

        if (item.image_url) {
            const img = doc.createElement("img");
            img.className = "line-image";
            img.src = item.image_url;
            img.alt = `line ${item.line_id}`;
            editor.appendChild(img);
        } else {
            editor.appendChild(el(doc, "div", "line-image-missing", "no line image"));
        }

        editor.appendChild(
            el(doc, "div", "context-previous", item.neighbor_context.previous ?? "(start of page)"),
        );

        const textarea = doc.createElement("textarea");
        textarea.className = "gt-editor";
        textarea.value = this.form.text;
        textarea.rows = 2;
        textarea.addEventListener("input", () => {
            if (this.form === null) return;
            this.form = editText(this.form, textarea.value);
            this.updateDynamic();
        });
        editor.appendChild(textarea);

        editor.appendChild(
            el(doc, "div", "context-next", item.neighbor_context.next ?? "(end of page)"),
        );
        editor.appendChild(el(doc, "div", "prediction-text", item.prediction ?? "(no prediction)"));

        const statusGroup = el(doc, "fieldset", "status-group") as HTMLFieldSetElement;
        statusGroup.appendChild(el(doc, "legend", "", "Status"));
        for (const status of STATUSES) {
            const label = el(doc, "label", "status-option");
            const input = doc.createElement("input");
            input.type = "radio";
            input.name = "status";
            input.value = status;
            input.checked = this.form.status === status;
            input.addEventListener("change", () => {
                if (this.form === null) return;
                this.form = setStatus(this.form, status);
                this.updateDynamic();
            });
            label.appendChild(input);
            label.appendChild(doc.createTextNode(status));
            statusGroup.appendChild(label);
        }
        editor.appendChild(statusGroup);

        const startGroup = el(doc, "fieldset", "start-labels") as HTMLFieldSetElement;
        startGroup.appendChild(el(doc, "legend", "", "Start of line"));
        for (const labelName of START_LABELS) {
            const label = el(doc, "label", "label-option");
            const input = doc.createElement("input");
            input.type = "checkbox";
            input.dataset.label = labelName;
            input.checked = this.form.startLabels.has(labelName);
            input.addEventListener("change", () => {
                if (this.form === null) return;
                this.form = toggleStartLabel(this.form, labelName);
                this.updateDynamic();
            });
            label.appendChild(input);
            label.appendChild(doc.createTextNode(LABEL_TEXT[labelName]));
            startGroup.appendChild(label);
        }
        editor.appendChild(startGroup);

        const endGroup = el(doc, "fieldset", "end-labels") as HTMLFieldSetElement;
        endGroup.appendChild(el(doc, "legend", "", "End of line"));
        for (const labelName of END_LABELS) {
            const label = el(doc, "label", "label-option");
            const input = doc.createElement("input");
            input.type = "checkbox";
            input.dataset.label = labelName;
            input.checked = this.form.endLabels.has(labelName);
            input.addEventListener("change", () => {
                if (this.form === null) return;
                this.form = toggleEndLabel(this.form, labelName);
                this.updateDynamic();
            });
            label.appendChild(input);
            label.appendChild(doc.createTextNode(LABEL_TEXT[labelName]));
            endGroup.appendChild(label);
        }
        editor.appendChild(endGroup);

        if (item.cross_reference_url) {
            const link = doc.createElement("a");
            link.className = "cross-reference";
            link.href = item.cross_reference_url;
            link.target = "_blank";
            link.rel = "noopener";
            link.textContent = "Open full letter";
            editor.appendChild(link);
        }

        editor.appendChild(el(doc, "ul", "validation-messages"));
        const submit = doc.createElement("button");
        submit.className = "submit-button";
        submit.textContent = "Submit & next";
        submit.addEventListener("click", () => void this.submit());
        editor.appendChild(submit);

        this.updateDynamic(editor);
        return editor;
    }

    /** Refresh validation, submit button, and status radios in place so
     * typing in the textarea never rebuilds (and never loses focus). */
    private updateDynamic(scope?: HTMLElement): void {
        const editor = scope ?? this.root.querySelector<HTMLElement>(".editor");
        if (!editor || this.form === null) return;
        for (const radio of editor.querySelectorAll<HTMLInputElement>("input[name=status]")) {
            radio.checked = radio.value === this.form.status;
        }
        const messages = editor.querySelector<HTMLElement>(".validation-messages");
        if (messages) {
            messages.textContent = "";
            const problems = validate(this.form);
            if (this.submitError) problems.push(this.submitError);
            for (const problem of problems) {
                messages.appendChild(el(editor.ownerDocument, "li", "validation-message", problem));
            }
        }
        const submit = editor.querySelector<HTMLButtonElement>(".submit-button");
        if (submit) submit.disabled = !canSubmit(this.form);
    }

    private renderConflict(doc: Document): HTMLElement {
        const dialog = el(doc, "div", "conflict-dialog");
        dialog.appendChild(el(doc, "h3", "", "Annotation conflict"));
        dialog.appendChild(
            el(doc, "p", "conflict-explain", "Someone else annotated this line while you were editing."),
        );
        if (this.conflict) {
            const text =
                `Their verdict: ${this.conflict.status} (version ${this.conflict.version})` +
                (this.conflict.corrected_text ? ` — "${this.conflict.corrected_text}"` : "");
            dialog.appendChild(el(doc, "p", "conflict-current", text));
        }
        const reload = el(doc, "button", "reload-conflict", "Reload their version");
        reload.addEventListener("click", () => void this.reloadConflicted());
        dialog.appendChild(reload);
        const dismiss = el(doc, "button", "dismiss-conflict", "Keep editing");
        dismiss.addEventListener("click", () => this.dismissConflict());
        dialog.appendChild(dismiss);
        return dialog;
    }

    // test hooks
    get currentForm(): FormState | null {
        return this.form;
    }
    get queueItems(): readonly QueueItem[] {
        return this.queue;
    }
}

function el(doc: Document, tag: string, className: string, text?: string): HTMLElement {
    const node = doc.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export function mount(root: HTMLElement, options: AppOptions = {}): ReviewApp {
    return new ReviewApp(root, options);
}
