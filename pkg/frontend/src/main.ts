// Entry point: fetch the served model once, then mount the three tabs.

import { ApiClient, ModelInfo } from "./api.js";
import { EvaluationView } from "./evaluate.js";
import { RecordsView } from "./records.js";
import { SurfaceView } from "./surface.js";
import { el } from "./util.js";

interface Tab {
    label: string;
    view: { root: HTMLElement };
    onShow?: () => void;
}

export function mountApp(container: HTMLElement, client: ApiClient, model: ModelInfo): void {
    const evaluation = new EvaluationView(client, model);
    const surface = new SurfaceView(client, model);
    const records = new RecordsView(client, model);

    const tabs: Tab[] = [
        { label: "Evaluate", view: evaluation },
        { label: "Surface", view: surface, onShow: () => void surface.refresh() },
        { label: "Referrals", view: records, onShow: () => void records.refreshReport() },
    ];

    const panel = el("main", { class: "panel" });
    const buttons = tabs.map((tab, i) => {
        const button = el("button", { type: "button", class: "tab" }, tab.label);
        button.addEventListener("click", () => show(i));
        return button;
    });

    function show(index: number): void {
        buttons.forEach((b, i) => b.classList.toggle("tab-active", i === index));
        panel.replaceChildren(tabs[index].view.root);
        tabs[index].onShow?.();
    }

    container.replaceChildren(
        el("header", {}, el("h1", {}, model.name), el("nav", { class: "tabs" }, ...buttons)),
        panel,
    );
    show(0);
}

export async function start(): Promise<void> {
    const container = document.getElementById("app");
    if (!container) return;
    const base =
        (window as unknown as { FUZZDSS_API_BASE?: string }).FUZZDSS_API_BASE ?? "";
    const client = new ApiClient(base);
    try {
        const model = await client.getModel();
        mountApp(container, client, model);
    } catch {
        const retry = el("button", { type: "button" }, "Retry");
        retry.addEventListener("click", () => void start());
        container.replaceChildren(
            el("div", { class: "banner banner-error" }, "Could not load the model. ", retry),
        );
    }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
    void start();
}
