import { ApiClient } from "./api.js";
import { debounce } from "./state.js";
import {
    downloadScenario,
    renderComparison,
    renderError,
    renderPanel,
    renderPresets,
    renderSweep,
} from "./view.js";
import { WhatIfViewModel } from "./viewmodel.js";

const DRAG_DEBOUNCE_MS = 150;

async function bootstrap(): Promise<void> {
    const presetsEl = document.getElementById("presets")!;
    const panelEl = document.getElementById("panel")!;
    const comparisonEl = document.getElementById("comparison")!;
    const sweepEl = document.getElementById("sweep")!;
    const errorEl = document.getElementById("errors")!;

    const vm = new WhatIfViewModel(new ApiClient(""));
    const redraw = () => {
        renderPresets(presetsEl, vm);
        renderPanel(panelEl, vm);
        if (vm.comparison) renderComparison(comparisonEl, vm.comparison);
        renderSweep(sweepEl, vm);
        renderError(errorEl, vm);
    };
    vm.onChange = redraw;

    const debouncedDrag = debounce((id: string, value: number) => {
        void vm.dragWeight(id, value);
    }, DRAG_DEBOUNCE_MS);

    presetsEl.addEventListener("click", (event) => {
        const target = event.target as HTMLElement;
        if (target.dataset.preset) void vm.applyPreset(target.dataset.preset);
        if (target.dataset.action === "export") downloadScenario(vm);
    });

    panelEl.addEventListener("input", (event) => {
        const target = event.target as HTMLInputElement;
        if (target.classList.contains("weight-slider") && target.dataset.criterion) {
            debouncedDrag(target.dataset.criterion, Number(target.value));
        }
    });

    panelEl.addEventListener("click", (event) => {
        const target = event.target as HTMLElement;
        if (target.classList.contains("lock-toggle") && target.dataset.criterion) {
            vm.panel.toggleLock(target.dataset.criterion);
            redraw();
        }
    });

    sweepEl.addEventListener("dblclick", () => {
        // quick sweep of the first criterion across the unit interval
        const first = vm.criteria[0];
        if (!first) return;
        const values = Array.from({ length: 19 }, (_, i) => (i + 1) / 20);
        void vm.runSweep(first.id, values);
    });

    const sweepForm = document.getElementById("sweep-form") as HTMLFormElement | null;
    sweepForm?.addEventListener("submit", (event) => {
        event.preventDefault();
        const data = new FormData(sweepForm);
        const criterion = String(data.get("criterion") ?? "");
        const raw = String(data.get("values") ?? "");
        const values = raw
            .split(",")
            .map((v) => Number(v.trim()))
            .filter((v) => Number.isFinite(v));
        if (criterion && values.length > 0) void vm.runSweep(criterion, values);
    });

    await vm.init();
    redraw();
}

if (typeof document !== "undefined" && document.getElementById("panel")) {
    void bootstrap();
}
