// Shared fixtures for the unit tests: a small fake model and a fetch stub.

import { vi } from "vitest";
import { ModelInfo } from "../src/api.js";

export function fakeModel(): ModelInfo {
    return {
        name: "test_model",
        inputs: [
            {
                name: "alpha",
                display_name: "Alpha",
                range: [0, 10],
                terms: [
                    { label: "low", shape: "shoulder_left", a: 0, c: 5 },
                    { label: "high", shape: "shoulder_right", a: 5, c: 10 },
                ],
            },
            {
                name: "beta",
                display_name: "Beta",
                range: [0, 4],
                terms: [
                    { label: "low", shape: "shoulder_left", a: 0, c: 2 },
                    { label: "high", shape: "shoulder_right", a: 2, c: 4 },
                ],
            },
        ],
        output: {
            name: "out",
            display_name: "Out",
            range: [0, 6],
            terms: [
                { label: "a", shape: "triangle", a: 0, b: 1.5, c: 3 },
                { label: "b", shape: "triangle", a: 3, b: 4.5, c: 6 },
            ],
        },
        bands: [
            { label: "Band A", lower: 0, upper: 3 },
            { label: "Band B", lower: 3, upper: 6 },
        ],
        rules: [
            { index: 0, text: "if alpha is low and beta is low then a" },
            { index: 1, text: "if alpha is high and beta is high then b" },
        ],
        fzm: "",
    };
}

export function stubFetch(body: unknown, status = 200): ReturnType<typeof vi.fn> {
    const mock = vi.fn(async () => ({
        ok: status >= 200 && status < 300,
        status,
        json: async () => body,
    }));
    vi.stubGlobal("fetch", mock);
    return mock;
}
