import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api.js";
import { RecordsView } from "../src/records.js";
import { fakeModel, stubFetch } from "./helpers.js";

afterEach(() => vi.unstubAllGlobals());

function view(): RecordsView {
    return new RecordsView(new ApiClient(), fakeModel());
}

function set(v: RecordsView, name: string, value: string): void {
    v.root.querySelector<HTMLInputElement>(`input[name="${name}"]`)!.value = value;
}

describe("RecordsView", () => {
    it("requires student id and date before submitting", async () => {
        const mock = stubFetch({});
        const v = view();
        set(v, "alpha", "1");
        set(v, "beta", "1");
        await v.submit();
        expect(mock).not.toHaveBeenCalled();
        expect(v.root.textContent).toContain("student id and date are required");
    });

    it("enforces count bounds from the served model", async () => {
        const mock = stubFetch({});
        const v = view();
        set(v, "student_id", "S001");
        set(v, "date", "2020-06-01");
        set(v, "alpha", "1");
        set(v, "beta", "99");
        await v.submit();
        expect(mock).not.toHaveBeenCalled();
        expect(v.root.textContent).toContain("Beta: must be between 0 and 4");
    });

    it("renders the frequency table in band order with a total row", () => {
        const v = view();
        v.renderReport({
            counts: { "Band A": 2, "Band B": 5 },
            no_rule_fired_count: 1,
            total: 8,
        });
        const rows = [...v.root.querySelectorAll("tbody tr")];
        expect(rows.length).toBe(3);
        expect(rows[0].textContent).toContain("Band A");
        expect(rows[0].textContent).toContain("2");
        expect(rows[2].textContent).toContain("(no rule fired)");
        expect(v.root.querySelector("tfoot")!.textContent).toContain("8");
    });

    it("renders zero counts for an empty store", () => {
        const v = view();
        v.renderReport({ counts: {}, no_rule_fired_count: 0, total: 0 });
        const rows = [...v.root.querySelectorAll("tbody tr")];
        expect(rows.length).toBe(2);
        for (const row of rows) {
            expect(row.querySelector(".num")!.textContent).toBe("0");
        }
    });
});
