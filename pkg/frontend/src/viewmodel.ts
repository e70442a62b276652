/** Orchestrates the panel, the session and the sweep view against the API. */

import { ApiClient, ApiRequestError } from "./api.js";
import {
    MethodFlip,
    RankSession,
    WeightPanel,
    findTopFlips,
} from "./state.js";
import type {
    ComparisonDoc,
    CriterionDoc,
    ScenarioDoc,
    SweepPointDoc,
} from "./types.js";

export class WhatIfViewModel {
    criteria: CriterionDoc[] = [];
    presets: ScenarioDoc[] = [];
    panel = new WeightPanel();
    session: RankSession;
    comparison: ComparisonDoc | null = null;
    error: string | null = null;
    activePreset: string | null = null;
    sweepPoints: SweepPointDoc[] = [];
    sweepFlips: MethodFlip[] = [];
    onChange: () => void = () => {};

    constructor(private readonly client: ApiClient) {
        this.session = new RankSession(client);
        this.session.onUpdate = (doc) => {
            this.comparison = doc;
            this.error = null;
            this.onChange();
        };
        this.session.onError = (err) => {
            this.error = err instanceof Error ? err.message : String(err);
            this.onChange();
        };
    }

    async init(): Promise<void> {
        const [catalog, scenarios] = await Promise.all([
            this.client.getCatalog(),
            this.client.getScenarios(),
        ]);
        this.criteria = catalog.catalog.criteria;
        this.presets = scenarios.scenarios;
        if (this.presets.length > 0) {
            await this.applyPreset(this.presets[0].name);
        }
    }

    async applyPreset(name: string): Promise<void> {
        const preset = this.presets.find((p) => p.name === name);
        if (!preset) {
            // unknown preset (stale bookmark): surface inline, keep state
            this.error = `unknown preset '${name}'`;
            this.onChange();
            return;
        }
        this.panel.applyPreset(preset.weights);
        this.activePreset = name;
        this.session.submit(this.panel.weights);
        await this.session.idle();
    }

    /** Slider handler; resolves when the view has settled on the last value. */
    async dragWeight(criterionId: string, value: number): Promise<boolean> {
        const result = this.panel.drag(criterionId, value);
        if (!result.ok) {
            this.error = result.reason ?? "cannot move this slider";
            this.onChange();
            return false;
        }
        this.activePreset = null;
        this.session.submit(this.panel.weights);
        await this.session.idle();
        return true;
    }

    async runSweep(criterionId: string, values: number[]): Promise<void> {
        try {
            const resp = await this.client.postSweep(
                this.panel.weights,
                criterionId,
                values,
            );
            this.sweepPoints = resp.points;
            this.sweepFlips = findTopFlips(resp.points);
            this.error = null;
        } catch (err) {
            this.error =
                err instanceof ApiRequestError ? err.message : String(err);
        }
        this.onChange();
    }

    /** Rank order per method, straight from server-provided numbers. */
    orderFor(method: string): string[] {
        if (!this.comparison) return [];
        const ranking = this.comparison.rankings.find((r) => r.method === method);
        return ranking ? ranking.entries.map((e) => e.service) : [];
    }

    topFor(method: string): string | null {
        const order = this.orderFor(method);
        return order.length > 0 ? order[0] : null;
    }
}
