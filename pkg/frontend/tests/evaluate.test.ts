import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiClient, EvaluationResult } from "../src/api.js";
import { EvaluationView } from "../src/evaluate.js";
import { fakeModel, stubFetch } from "./helpers.js";

afterEach(() => vi.unstubAllGlobals());

function view(): EvaluationView {
    return new EvaluationView(new ApiClient(), fakeModel());
}

function field(v: EvaluationView, name: string): HTMLInputElement {
    return v.root.querySelector(`input[name="${name}"]`)!;
}

describe("EvaluationView", () => {
    it("builds one bounded field per model input", () => {
        const v = view();
        const alpha = field(v, "alpha");
        expect(alpha.min).toBe("0");
        expect(alpha.max).toBe("10");
        const beta = field(v, "beta");
        expect(beta.min).toBe("0");
        expect(beta.max).toBe("4");
    });

    it("blocks out-of-bounds input client-side without a request", async () => {
        const mock = stubFetch({});
        const v = view();
        field(v, "alpha").value = "99";
        field(v, "beta").value = "1";
        await v.submit();
        expect(mock).not.toHaveBeenCalled();
        expect(v.root.textContent).toContain("must be between 0 and 10");
    });

    it("blocks non-numeric input client-side", async () => {
        const mock = stubFetch({});
        const v = view();
        field(v, "alpha").value = "abc";
        await v.submit();
        expect(mock).not.toHaveBeenCalled();
        expect(v.root.textContent).toContain("enter a number");
    });

    it("renders fired rules sorted by strength descending", () => {
        const v = view();
        const result: EvaluationResult = {
            crisp_value: 1.5,
            category: "Band A",
            status: "ok",
            fired_rules: [
                { index: 0, rule_text: "if alpha is low and beta is low then a", strength: 0.2 },
                { index: 1, rule_text: "if alpha is high and beta is high then b", strength: 0.7 },
            ],
            uncovered_combinations: [],
        };
        v.renderResult(result);
        const items = [...v.root.querySelectorAll(".fired-rules li")];
        expect(items.map((li) => li.getAttribute("data-rule-index"))).toEqual(["1", "0"]);
        expect(v.root.querySelector(".category")!.textContent).toBe("Band A");
        expect(v.root.textContent).toContain("1.500");
    });

    it("shows the dead-zone banner with uncovered combinations", () => {
        const v = view();
        v.renderResult({
            crisp_value: null,
            category: null,
            status: "no_rule_fired",
            fired_rules: [],
            uncovered_combinations: [
                [
                    { variable: "alpha", term: "low" },
                    { variable: "beta", term: "high" },
                ],
            ],
        });
        expect(v.root.querySelector(".banner-dead-zone")).not.toBeNull();
        expect(v.root.textContent).toContain("alpha is low and beta is high");
    });

    it("renders API errors as a banner", async () => {
        stubFetch({ code: "out_of_universe", message: "alpha out of range" }, 422);
        const v = view();
        field(v, "alpha").value = "5";
        field(v, "beta").value = "1";
        await v.submit();
        expect(v.root.querySelector(".banner-error")!.textContent).toContain(
            "out_of_universe",
        );
    });
});
