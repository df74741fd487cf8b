// Evaluation form: one numeric field per model input (bounds come from
// the served model), result panel with the fired-rule explanation.

import { ApiClient, ApiError, EvaluationResult, ModelInfo } from "./api.js";
import { el } from "./util.js";

export class EvaluationView {
    readonly root: HTMLElement;
    private fields = new Map<string, HTMLInputElement>();
    private fieldErrors = new Map<string, HTMLElement>();
    private resultPanel: HTMLElement;

    constructor(
        private client: ApiClient,
        private model: ModelInfo,
    ) {
        const form = el("form", { class: "eval-form" });
        for (const variable of model.inputs) {
            const [lo, hi] = variable.range;
            const input = el("input", {
                type: "number",
                name: variable.name,
                min: String(lo),
                max: String(hi),
                step: "any",
                value: String(lo),
            });
            const error = el("span", { class: "field-error" });
            this.fields.set(variable.name, input);
            this.fieldErrors.set(variable.name, error);
            form.append(
                el(
                    "label",
                    { class: "field" },
                    `${variable.display_name} (${lo}–${hi})`,
                    input,
                    error,
                ),
            );
        }
        const submit = el("button", { type: "submit" }, "Evaluate");
        form.append(submit);
        form.addEventListener("submit", (event) => {
            event.preventDefault();
            void this.submit();
        });

        this.resultPanel = el("section", { class: "result-panel" });
        this.root = el("section", { class: "evaluate-view" }, form, this.resultPanel);
    }

    // Bounds mirror the served model; invalid fields block the request.
    readInputs(): Record<string, number> | null {
        const inputs: Record<string, number> = {};
        let ok = true;
        for (const variable of this.model.inputs) {
            const field = this.fields.get(variable.name)!;
            const errorSlot = this.fieldErrors.get(variable.name)!;
            const value = Number(field.value);
            const [lo, hi] = variable.range;
            if (field.value.trim() === "" || Number.isNaN(value)) {
                errorSlot.textContent = "enter a number";
                ok = false;
            } else if (value < lo || value > hi) {
                errorSlot.textContent = `must be between ${lo} and ${hi}`;
                ok = false;
            } else {
                errorSlot.textContent = "";
                inputs[variable.name] = value;
            }
        }
        return ok ? inputs : null;
    }

    async submit(): Promise<void> {
        const inputs = this.readInputs();
        if (inputs === null) return;
        try {
            const result = await this.client.evaluate(inputs);
            this.renderResult(result);
        } catch (error) {
            if (error instanceof ApiError) {
                this.renderApiError(error);
            } else {
                this.renderNetworkError();
            }
        }
    }

    renderResult(result: EvaluationResult): void {
        this.resultPanel.replaceChildren();
        if (result.status === "no_rule_fired") {
            const combos = result.uncovered_combinations.map((combo) =>
                el(
                    "li",
                    {},
                    combo.map((c) => `${c.variable} is ${c.term}`).join(" and "),
                ),
            );
            this.resultPanel.append(
                el(
                    "div",
                    { class: "banner banner-dead-zone" },
                    "No rule covers this combination; no intervention can be recommended.",
                ),
                el("p", {}, "Activated combinations without a rule:"),
                el("ul", { class: "uncovered-list" }, ...combos),
            );
            return;
        }
        const rules = [...result.fired_rules].sort((a, b) => b.strength - a.strength);
        this.resultPanel.append(
            el("h2", { class: "category" }, result.category ?? ""),
            el(
                "p",
                { class: "crisp-value" },
                `crisp value ${result.crisp_value?.toFixed(3)}`,
            ),
            el(
                "ol",
                { class: "fired-rules" },
                ...rules.map((rule) =>
                    el(
                        "li",
                        { "data-rule-index": String(rule.index) },
                        `${rule.rule_text} `,
                        el("span", { class: "strength" }, rule.strength.toFixed(3)),
                    ),
                ),
            ),
        );
    }

    private renderApiError(error: ApiError): void {
        this.resultPanel.replaceChildren(
            el("div", { class: "banner banner-error" }, `${error.code}: ${error.message}`),
        );
    }

    private renderNetworkError(): void {
        const retry = el("button", { type: "button" }, "Retry");
        retry.addEventListener("click", () => void this.submit());
        this.resultPanel.replaceChildren(
            el("div", { class: "banner banner-error" }, "Network error. ", retry),
        );
    }
}
