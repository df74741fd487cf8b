// Referral entry plus the intervention frequency dashboard. The report
// refreshes after every successful submission and on date-filter changes.

import { ApiClient, ApiError, FrequencyReport, ModelInfo } from "./api.js";
import { el } from "./util.js";

export class RecordsView {
    readonly root: HTMLElement;
    private studentField: HTMLInputElement;
    private dateField: HTMLInputElement;
    private countFields = new Map<string, HTMLInputElement>();
    private formStatus: HTMLElement;
    private fromField: HTMLInputElement;
    private toField: HTMLInputElement;
    private reportBox: HTMLElement;

    constructor(
        private client: ApiClient,
        private model: ModelInfo,
    ) {
        this.studentField = el("input", { type: "text", name: "student_id" });
        this.dateField = el("input", { type: "date", name: "date" });
        const form = el(
            "form",
            { class: "record-form" },
            el("label", { class: "field" }, "Student id", this.studentField),
            el("label", { class: "field" }, "Date", this.dateField),
        );
        for (const variable of model.inputs) {
            const [lo, hi] = variable.range;
            const input = el("input", {
                type: "number",
                name: variable.name,
                min: String(lo),
                max: String(hi),
                step: "any",
            });
            this.countFields.set(variable.name, input);
            form.append(
                el("label", { class: "field" }, `${variable.display_name} (${lo}–${hi})`, input),
            );
        }
        form.append(el("button", { type: "submit" }, "Record referral"));
        form.addEventListener("submit", (event) => {
            event.preventDefault();
            void this.submit();
        });
        this.formStatus = el("p", { class: "form-status" });

        this.fromField = el("input", { type: "date", name: "from" });
        this.toField = el("input", { type: "date", name: "to" });
        for (const field of [this.fromField, this.toField]) {
            field.addEventListener("change", () => void this.refreshReport());
        }
        this.reportBox = el("div", { class: "frequency-report" });

        this.root = el(
            "section",
            { class: "records-view" },
            el("h2", {}, "New referral"),
            form,
            this.formStatus,
            el("h2", {}, "Intervention frequency"),
            el(
                "div",
                { class: "report-filters" },
                el("label", {}, "from ", this.fromField),
                el("label", {}, "to ", this.toField),
            ),
            this.reportBox,
        );
    }

    readRecord(): { student_id: string; date: string; counts: Record<string, number> } | null {
        const studentId = this.studentField.value.trim();
        const date = this.dateField.value;
        if (!studentId || !date) {
            this.formStatus.textContent = "student id and date are required";
            return null;
        }
        const counts: Record<string, number> = {};
        for (const variable of this.model.inputs) {
            const field = this.countFields.get(variable.name)!;
            const value = Number(field.value);
            const [lo, hi] = variable.range;
            if (field.value.trim() === "" || Number.isNaN(value)) {
                this.formStatus.textContent = `${variable.display_name}: enter a number`;
                return null;
            }
            if (value < lo || value > hi) {
                this.formStatus.textContent =
                    `${variable.display_name}: must be between ${lo} and ${hi}`;
                return null;
            }
            counts[variable.name] = value;
        }
        return { student_id: studentId, date, counts };
    }

    async submit(): Promise<void> {
        const record = this.readRecord();
        if (record === null) return;
        try {
            const ack = await this.client.postReferral(record);
            this.formStatus.textContent =
                `stored; ${ack.total_records} record(s) in the store`;
            await this.refreshReport();
        } catch (error) {
            this.formStatus.textContent =
                error instanceof ApiError
                    ? `${error.code}: ${error.message}`
                    : "Network error; submit again to retry.";
        }
    }

    async refreshReport(): Promise<void> {
        try {
            const report = await this.client.getFrequency(
                this.fromField.value || undefined,
                this.toField.value || undefined,
            );
            this.renderReport(report);
        } catch (error) {
            this.reportBox.replaceChildren(
                el(
                    "div",
                    { class: "banner banner-error" },
                    error instanceof ApiError
                        ? `${error.code}: ${error.message}`
                        : "Network error loading the report.",
                ),
            );
        }
    }

    renderReport(report: FrequencyReport): void {
        const rows = this.model.bands.map((band) =>
            el(
                "tr",
                { "data-band": band.label },
                el("td", {}, band.label),
                el("td", { class: "num" }, String(report.counts[band.label] ?? 0)),
            ),
        );
        if (report.no_rule_fired_count > 0) {
            rows.push(
                el(
                    "tr",
                    { class: "dead-row" },
                    el("td", {}, "(no rule fired)"),
                    el("td", { class: "num" }, String(report.no_rule_fired_count)),
                ),
            );
        }
        const table = el(
            "table",
            { class: "report-table" },
            el(
                "thead",
                {},
                el("tr", {}, el("th", {}, "Intervention"), el("th", {}, "Frequency")),
            ),
            el("tbody", {}, ...rows),
            el(
                "tfoot",
                {},
                el("tr", {}, el("td", {}, "Total"), el("td", { class: "num" }, String(report.total))),
            ),
        );
        this.reportBox.replaceChildren(table);
    }
}
