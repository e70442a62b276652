/**
 * Client-side state: the weight panel (sliders + locks), the re-rank session
 * with latest-wins request handling, and the sweep flip finder.
 *
 * Rescaling mirrors the server's sweep rule exactly: the dragged criterion
 * takes its new value and every unlocked other weight is scaled by a common
 * factor so the panel re-sums to one. The panel never invents scores; all
 * ranking numbers come from the server.
 */

import type { ApiClient } from "./api.js";
import type { ComparisonDoc, SweepPointDoc } from "./types.js";

/** Smallest weight a slider may push any other criterion down to. */
export const MIN_WEIGHT = 1e-4;

export interface DragResult {
    ok: boolean;
    reason?: string;
    weights: Record<string, number>;
}

export function rescaleWithLocks(
    weights: Record<string, number>,
    criterionId: string,
    value: number,
    locked: ReadonlySet<string>,
): DragResult {
    if (!(criterionId in weights)) {
        return { ok: false, reason: `unknown criterion '${criterionId}'`, weights };
    }
    const others = Object.keys(weights).filter((id) => id !== criterionId);
    const unlocked = others.filter((id) => !locked.has(id));
    if (unlocked.length === 0) {
        return { ok: false, reason: "all other criteria are locked", weights };
    }
    const lockedSum = others
        .filter((id) => locked.has(id))
        .reduce((acc, id) => acc + weights[id], 0);
    // keep every unlocked weight strictly positive
    const maxValue = 1 - lockedSum - MIN_WEIGHT * unlocked.length;
    const clamped = Math.min(Math.max(value, MIN_WEIGHT), maxValue);
    if (!(clamped > 0 && clamped < 1)) {
        return { ok: false, reason: "no room left to move this weight", weights };
    }
    const unlockedSum = unlocked.reduce((acc, id) => acc + weights[id], 0);
    const factor = (1 - clamped - lockedSum) / unlockedSum;
    const next: Record<string, number> = {};
    for (const [id, w] of Object.entries(weights)) {
        if (id === criterionId) next[id] = clamped;
        else if (locked.has(id)) next[id] = w;
        else next[id] = w * factor;
    }
    return { ok: true, weights: next };
}

export class WeightPanel {
    private values: Record<string, number> = {};
    private locks = new Set<string>();

    constructor(weights: Record<string, number> = {}) {
        this.values = { ...weights };
    }

    get weights(): Record<string, number> {
        return { ...this.values };
    }

    get lockedIds(): string[] {
        return [...this.locks].sort();
    }

    sum(): number {
        return Object.values(this.values).reduce((a, b) => a + b, 0);
    }

    /** The header indicator: true when the panel shows a unit simplex. */
    isNormalized(): boolean {
        return Math.abs(this.sum() - 1) < 5e-4;
    }

    applyPreset(weights: Record<string, number>): void {
        this.values = { ...weights };
        this.locks.clear();
    }

    toggleLock(id: string): boolean {
        if (this.locks.has(id)) this.locks.delete(id);
        else this.locks.add(id);
        return this.locks.has(id);
    }

    isLocked(id: string): boolean {
        return this.locks.has(id);
    }

    drag(id: string, value: number): DragResult {
        const result = rescaleWithLocks(this.values, id, value, this.locks);
        if (result.ok) this.values = result.weights;
        return result;
    }
}

/**
 * Latest-wins re-rank session: at most one request in flight; interaction
 * during flight queues only the most recent weights; stale responses are
 * discarded by (revision, sequence) tag.
 */
export class RankSession {
    latest: ComparisonDoc | null = null;
    revision = 0;
    onUpdate: (doc: ComparisonDoc) => void = () => {};
    onError: (err: unknown) => void = () => {};

    private seq = 0;
    private appliedSeq = 0;
    private inFlight = false;
    private pending: Record<string, number> | null = null;
    private settled: Promise<void> = Promise.resolve();
    private settledResolve: () => void = () => {};

    constructor(private readonly client: ApiClient) {}

    /** Resolves once no request is running and nothing is queued. */
    idle(): Promise<void> {
        return this.settled;
    }

    submit(weights: Record<string, number>): void {
        if (this.inFlight) {
            this.pending = weights; // latest wins, intermediate drags dropped
            return;
        }
        this.inFlight = true;
        this.settled = new Promise((resolve) => {
            this.settledResolve = resolve;
        });
        void this.fire(weights);
    }

    private async fire(weights: Record<string, number>): Promise<void> {
        const seq = ++this.seq;
        try {
            const doc = await this.client.postRank(weights);
            const revision = doc.revision ?? 0;
            if (seq > this.appliedSeq && revision >= this.revision) {
                this.appliedSeq = seq;
                this.revision = revision;
                this.latest = doc;
                this.onUpdate(doc);
            }
        } catch (err) {
            this.onError(err);
        }
        const next = this.pending;
        this.pending = null;
        if (next) {
            void this.fire(next);
        } else {
            this.inFlight = false;
            this.settledResolve();
        }
    }
}

export interface MethodFlip {
    method: string;
    afterValue: number;
    beforeValue: number;
    fromService: string;
    toService: string;
}

/** Where the top service changes between consecutive valid sweep points. */
export function findTopFlips(points: SweepPointDoc[]): MethodFlip[] {
    const flips: MethodFlip[] = [];
    const ok = points.filter((p) => p.comparison);
    for (let i = 1; i < ok.length; i++) {
        const prev = ok[i - 1].comparison!;
        const curr = ok[i].comparison!;
        for (const ranking of curr.rankings) {
            const before = prev.rankings.find((r) => r.method === ranking.method);
            if (!before) continue;
            const a = before.entries[0].service;
            const b = ranking.entries[0].service;
            if (a !== b) {
                flips.push({
                    method: ranking.method,
                    beforeValue: ok[i - 1].value,
                    afterValue: ok[i].value,
                    fromService: a,
                    toService: b,
                });
            }
        }
    }
    return flips;
}

export function debounce<A extends unknown[]>(
    fn: (...args: A) => void,
    waitMs: number,
): (...args: A) => void {
    let timer: ReturnType<typeof setTimeout> | undefined;
    return (...args: A) => {
        if (timer !== undefined) clearTimeout(timer);
        timer = setTimeout(() => fn(...args), waitMs);
    };
}

/** Payload for the "export scenario" download button. */
export function scenarioExport(
    name: string,
    weights: Record<string, number>,
): { filename: string; json: string } {
    const doc = [{ name, weights, methods: ["AHP", "SAW"] }];
    return {
        filename: `${name.replace(/[^A-Za-z0-9._-]+/g, "_") || "scenario"}.json`,
        json: JSON.stringify(doc, null, 2) + "\n",
    };
}
