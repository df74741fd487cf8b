// Typed client for the fuzzdss HTTP API. All numbers shown anywhere in
// the UI come from these responses; the client does no inference math.

export interface TermInfo {
    label: string;
    shape: "shoulder_left" | "triangle" | "shoulder_right";
    a: number;
    b?: number;
    c: number;
}

export interface VariableInfo {
    name: string;
    display_name: string;
    range: [number, number];
    terms: TermInfo[];
}

export interface BandInfo {
    label: string;
    lower: number;
    upper: number;
}

export interface ModelInfo {
    name: string;
    inputs: VariableInfo[];
    output: VariableInfo;
    bands: BandInfo[];
    rules: { index: number; text: string }[];
    fzm: string;
}

export interface FiredRule {
    index: number;
    rule_text: string;
    strength: number;
}

export interface EvaluationResult {
    crisp_value: number | null;
    category: string | null;
    status: "ok" | "no_rule_fired";
    fired_rules: FiredRule[];
    uncovered_combinations: { variable: string; term: string }[][];
}

export interface SurfaceGrid {
    x_variable: string;
    y_variable: string;
    fixed: Record<string, number>;
    x_points: number[];
    y_points: number[];
    values: (number | null)[][];
    categories: (string | null)[][];
}

export interface FrequencyReport {
    counts: Record<string, number>;
    no_rule_fired_count: number;
    total: number;
}

export interface ReferralRecord {
    student_id: string;
    date: string;
    counts: Record<string, number>;
}

export class ApiError extends Error {
    constructor(
        public status: number,
        public code: string,
        message: string,
        public details?: unknown,
    ) {
        super(message);
    }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
    const response = await fetch(url, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
        const code = body?.code ?? "unknown";
        const message = body?.message ?? `HTTP ${response.status}`;
        throw new ApiError(response.status, code, message, body?.details);
    }
    return body as T;
}

export class ApiClient {
    constructor(public baseUrl: string = "") {}

    getModel(): Promise<ModelInfo> {
        return request(`${this.baseUrl}/api/v1/model`);
    }

    evaluate(inputs: Record<string, number>): Promise<EvaluationResult> {
        return request(`${this.baseUrl}/api/v1/evaluate`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ inputs }),
        });
    }

    getSurface(
        x: string,
        y: string,
        fixed: Record<string, number>,
        resolution: number,
    ): Promise<SurfaceGrid> {
        const params = new URLSearchParams({
            x,
            y,
            resolution: String(resolution),
        });
        for (const [name, value] of Object.entries(fixed)) {
            params.set(`fixed.${name}`, String(value));
        }
        return request(`${this.baseUrl}/api/v1/surface?${params}`);
    }

    postReferral(record: ReferralRecord): Promise<{ stored: number; total_records: number }> {
        return request(`${this.baseUrl}/api/v1/referrals`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(record),
        });
    }

    getFrequency(from?: string, to?: string): Promise<FrequencyReport> {
        const params = new URLSearchParams();
        if (from) params.set("from", from);
        if (to) params.set("to", to);
        const query = params.size > 0 ? `?${params}` : "";
        return request(`${this.baseUrl}/api/v1/reports/frequency${query}`);
    }
}
