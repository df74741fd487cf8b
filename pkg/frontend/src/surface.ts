// What-if surface: axis pickers, sliders for the remaining inputs, and a
// category-colored heatmap (SVG). Dead-zone cells are hatched.

import { ApiClient, ApiError, ModelInfo, SurfaceGrid } from "./api.js";
import { SequenceGate, debounce, el } from "./util.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PALETTE = ["#4c9f70", "#e0b94c", "#d1604d", "#6b7fd7", "#9b59b6", "#5dade2"];
const CELL_PX = 9;

export class SurfaceView {
    readonly root: HTMLElement;
    private xSelect: HTMLSelectElement;
    private ySelect: HTMLSelectElement;
    private resolutionInput: HTMLInputElement;
    private sliderBox: HTMLElement;
    private sliders = new Map<string, HTMLInputElement>();
    private plot: HTMLElement;
    private status: HTMLElement;
    private gate = new SequenceGate();
    private refreshSoon: () => void;
    lastGrid: SurfaceGrid | null = null;

    constructor(
        private client: ApiClient,
        private model: ModelInfo,
        debounceMs = 250,
    ) {
        const names = model.inputs.map((v) => v.name);
        this.xSelect = this.makeAxisSelect(names, names[0]);
        this.ySelect = this.makeAxisSelect(names, names[1] ?? names[0]);
        this.resolutionInput = el("input", {
            type: "number",
            min: "2",
            max: "120",
            value: "50",
        });
        this.sliderBox = el("div", { class: "slider-box" });
        this.plot = el("div", { class: "surface-plot" });
        this.status = el("p", { class: "surface-status" });

        this.refreshSoon = debounce(() => void this.refresh(), debounceMs);
        this.xSelect.addEventListener("change", () => this.onControlsChanged());
        this.ySelect.addEventListener("change", () => this.onControlsChanged());
        this.resolutionInput.addEventListener("input", () => this.refreshSoon());

        this.root = el(
            "section",
            { class: "surface-view" },
            el(
                "div",
                { class: "surface-controls" },
                el("label", {}, "x axis ", this.xSelect),
                el("label", {}, "y axis ", this.ySelect),
                el("label", {}, "resolution ", this.resolutionInput),
                this.sliderBox,
            ),
            this.status,
            this.plot,
        );
        this.rebuildSliders();
    }

    private makeAxisSelect(names: string[], selected: string): HTMLSelectElement {
        const select = el("select", {});
        for (const name of names) {
            const option = el("option", { value: name }, name);
            if (name === selected) option.setAttribute("selected", "");
            select.append(option);
        }
        return select;
    }

    private onControlsChanged(): void {
        this.rebuildSliders();
        this.refreshSoon();
    }

    // One slider per input that is not on an axis.
    private rebuildSliders(): void {
        this.sliderBox.replaceChildren();
        this.sliders.clear();
        for (const variable of this.model.inputs) {
            if (
                variable.name === this.xSelect.value ||
                variable.name === this.ySelect.value
            ) {
                continue;
            }
            const [lo, hi] = variable.range;
            const slider = el("input", {
                type: "range",
                min: String(lo),
                max: String(hi),
                step: String((hi - lo) / 100),
                value: String(lo),
                "data-variable": variable.name,
            });
            const readout = el("span", { class: "slider-value" }, String(lo));
            slider.addEventListener("input", () => {
                readout.textContent = slider.value;
                this.refreshSoon();
            });
            this.sliders.set(variable.name, slider);
            this.sliderBox.append(
                el("label", { class: "slider" }, variable.display_name + " ", slider, readout),
            );
        }
    }

    fixedValues(): Record<string, number> {
        const fixed: Record<string, number> = {};
        for (const [name, slider] of this.sliders) {
            fixed[name] = Number(slider.value);
        }
        return fixed;
    }

    async refresh(): Promise<void> {
        const seq = this.gate.next();
        const resolution = Number(this.resolutionInput.value) || 50;
        try {
            const grid = await this.client.getSurface(
                this.xSelect.value,
                this.ySelect.value,
                this.fixedValues(),
                resolution,
            );
            if (!this.gate.isCurrent(seq)) return; // superseded
            this.lastGrid = grid;
            this.status.textContent = "";
            this.renderHeatmap(grid);
        } catch (error) {
            if (!this.gate.isCurrent(seq)) return;
            this.status.textContent =
                error instanceof ApiError
                    ? `${error.code}: ${error.message}`
                    : "Network error; adjust a control to retry.";
        }
    }

    renderHeatmap(grid: SurfaceGrid): void {
        const colorOf = new Map<string, string>();
        this.model.bands.forEach((band, i) => {
            colorOf.set(band.label, PALETTE[i % PALETTE.length]);
        });

        const nx = grid.x_points.length;
        const ny = grid.y_points.length;
        const svg = document.createElementNS(SVG_NS, "svg");
        svg.setAttribute("class", "heatmap");
        svg.setAttribute("width", String(nx * CELL_PX));
        svg.setAttribute("height", String(ny * CELL_PX));
        svg.setAttribute("data-nx", String(nx));
        svg.setAttribute("data-ny", String(ny));

        for (let i = 0; i < nx; i++) {
            for (let j = 0; j < ny; j++) {
                const rect = document.createElementNS(SVG_NS, "rect");
                rect.setAttribute("x", String(i * CELL_PX));
                // y axis grows upward
                rect.setAttribute("y", String((ny - 1 - j) * CELL_PX));
                rect.setAttribute("width", String(CELL_PX));
                rect.setAttribute("height", String(CELL_PX));
                const value = grid.values[i][j];
                const category = grid.categories[i][j];
                if (value === null || category === null) {
                    rect.setAttribute("class", "cell cell-dead");
                    rect.setAttribute("fill", "url(#dead-hatch)");
                } else {
                    rect.setAttribute("class", "cell");
                    rect.setAttribute("fill", colorOf.get(category) ?? "#999");
                    const title = document.createElementNS(SVG_NS, "title");
                    title.textContent =
                        `${grid.x_variable}=${grid.x_points[i].toFixed(2)}, ` +
                        `${grid.y_variable}=${grid.y_points[j].toFixed(2)}: ` +
                        `${value.toFixed(3)} (${category})`;
                    rect.append(title);
                }
                svg.append(rect);
            }
        }
        svg.insertBefore(this.hatchDefs(), svg.firstChild);

        const legend = el(
            "ul",
            { class: "legend" },
            ...this.model.bands.map((band) => {
                const swatch = el("span", { class: "swatch" });
                swatch.style.background = colorOf.get(band.label) ?? "#999";
                return el("li", {}, swatch, ` ${band.label}`);
            }),
            el("li", {}, el("span", { class: "swatch swatch-dead" }), " no rule fired"),
        );
        this.plot.replaceChildren(svg, legend);
    }

    private hatchDefs(): SVGDefsElement {
        const defs = document.createElementNS(SVG_NS, "defs");
        const pattern = document.createElementNS(SVG_NS, "pattern");
        pattern.setAttribute("id", "dead-hatch");
        pattern.setAttribute("width", "6");
        pattern.setAttribute("height", "6");
        pattern.setAttribute("patternUnits", "userSpaceOnUse");
        const line = document.createElementNS(SVG_NS, "path");
        line.setAttribute("d", "M0,6 L6,0");
        line.setAttribute("stroke", "#b0b0b0");
        line.setAttribute("stroke-width", "1");
        pattern.append(line);
        defs.append(pattern);
        return defs;
    }
}
