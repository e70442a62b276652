/**
 * DOM rendering. Every number shown comes from the view model's
 * server-provided documents; nothing is re-scored client-side.
 */

import { scenarioExport } from "./state.js";
import type { WhatIfViewModel } from "./viewmodel.js";
import type { ComparisonDoc, RankingDoc } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export function renderRanking(ranking: RankingDoc): HTMLElement {
    const box = el("div", "method-column");
    box.dataset.method = ranking.method;
    box.appendChild(el("h3", "method-name", ranking.method));
    const list = el("ol", "rank-list");
    for (const entry of ranking.entries) {
        const item = el("li", "rank-entry");
        item.dataset.service = entry.service;
        item.dataset.rank = String(entry.rank);
        const bar = el("div", "score-bar");
        bar.style.width = `${(entry.display_score * 100).toFixed(1)}%`;
        const label = el(
            "span",
            "rank-label",
            `#${entry.rank} ${entry.service} (${entry.score.toFixed(4)})`,
        );
        item.appendChild(bar);
        item.appendChild(label);
        list.appendChild(item);
    }
    box.appendChild(list);
    return box;
}

export function renderBadge(comparison: ComparisonDoc): HTMLElement {
    const badge = el("div", "agreement-badge");
    if (comparison.kendall_tau === null) {
        badge.classList.add("single");
        badge.textContent = "single method";
        return badge;
    }
    const exact = comparison.exact_rank_match === true;
    badge.classList.add(exact ? "agree" : "disagree");
    badge.dataset.tau = String(comparison.kendall_tau);
    badge.dataset.exact = String(exact);
    badge.textContent = exact
        ? `ranks identical (tau ${comparison.kendall_tau.toFixed(2)})`
        : `ranks differ (tau ${comparison.kendall_tau.toFixed(2)})`;
    return badge;
}

export function renderComparison(root: HTMLElement, comparison: ComparisonDoc): void {
    root.replaceChildren();
    const columns = el("div", "method-columns");
    for (const ranking of comparison.rankings) {
        columns.appendChild(renderRanking(ranking));
    }
    root.appendChild(renderBadge(comparison));
    root.appendChild(columns);
}

export function renderPanel(root: HTMLElement, vm: WhatIfViewModel): void {
    root.replaceChildren();
    const sum = vm.panel.sum();
    const indicator = el(
        "div",
        vm.panel.isNormalized() ? "sum-indicator ok" : "sum-indicator off",
        `sum ${sum.toFixed(3)}`,
    );
    root.appendChild(indicator);

    for (const criterion of vm.criteria) {
        const row = el("div", "slider-row");
        row.dataset.criterion = criterion.id;
        const weight = vm.panel.weights[criterion.id] ?? 0;

        const name = el("label", "criterion-name",
            `${criterion.name} (${criterion.direction})`);
        const slider = el("input") as HTMLInputElement;
        slider.type = "range";
        slider.min = "0.0001";
        slider.max = "0.9999";
        slider.step = "0.0001";
        slider.value = weight.toFixed(4);
        slider.className = "weight-slider";
        slider.dataset.criterion = criterion.id;

        const value = el("span", "weight-value", weight.toFixed(4));
        const lock = el("button", "lock-toggle",
            vm.panel.isLocked(criterion.id) ? "locked" : "unlocked");
        lock.dataset.criterion = criterion.id;

        row.appendChild(name);
        row.appendChild(slider);
        row.appendChild(value);
        row.appendChild(lock);
        root.appendChild(row);
    }
}

export function renderPresets(root: HTMLElement, vm: WhatIfViewModel): void {
    root.replaceChildren();
    for (const preset of vm.presets) {
        const button = el("button", "preset-button", preset.name);
        button.dataset.preset = preset.name;
        if (vm.activePreset === preset.name) button.classList.add("active");
        root.appendChild(button);
    }
    const exportButton = el("button", "export-button", "export weights");
    exportButton.dataset.action = "export";
    root.appendChild(exportButton);
}

export function renderSweep(root: HTMLElement, vm: WhatIfViewModel): void {
    root.replaceChildren();
    if (vm.sweepPoints.length === 0) return;
    const table = el("table", "sweep-table");
    const head = el("tr");
    for (const h of ["value", "AHP top", "SAW top", "note"]) {
        head.appendChild(el("th", undefined, h));
    }
    table.appendChild(head);
    for (const point of vm.sweepPoints) {
        const tr = el("tr");
        tr.dataset.value = String(point.value);
        if (!point.comparison) {
            tr.appendChild(el("td", undefined, String(point.value)));
            const err = el("td", "point-error", point.error ?? "error");
            err.colSpan = 3;
            tr.appendChild(err);
            table.appendChild(tr);
            continue;
        }
        const tops: Record<string, string> = {};
        for (const ranking of point.comparison.rankings) {
            tops[ranking.method] = ranking.entries[0].service;
        }
        const flip = vm.sweepFlips.find((f) => f.afterValue === point.value);
        tr.appendChild(el("td", undefined, String(point.value)));
        tr.appendChild(el("td", "top-ahp", tops["AHP"] ?? "-"));
        tr.appendChild(el("td", "top-saw", tops["SAW"] ?? "-"));
        tr.appendChild(
            el("td", flip ? "flip-marker" : "",
                flip ? `${flip.method}: ${flip.fromService} -> ${flip.toService}` : ""),
        );
        table.appendChild(tr);
    }
    root.appendChild(table);
}

export function renderError(root: HTMLElement, vm: WhatIfViewModel): void {
    root.replaceChildren();
    if (vm.error) {
        root.appendChild(el("div", "inline-error", vm.error));
    }
}

export function downloadScenario(vm: WhatIfViewModel): void {
    const { filename, json } = scenarioExport(
        vm.activePreset ?? "custom",
        vm.panel.weights,
    );
    const blob = new Blob([json], { type: "application/json" });
    const url = URL.createObjectURL(blob);
    const anchor = document.createElement("a");
    anchor.href = url;
    anchor.download = filename;
    anchor.click();
    URL.revokeObjectURL(url);
}
