/** Wire types mirroring the /api/v1 JSON documents. */

export interface CriterionDoc {
    id: string;
    name: string;
    direction: "benefit" | "cost";
    unit: string;
}

export interface ServiceDoc {
    id: string;
    name: string;
    qos: Record<string, number>;
}

export interface CatalogResponse {
    revision: number;
    catalog: {
        schema_version: number;
        criteria: CriterionDoc[];
        services: ServiceDoc[];
    };
}

export interface ScenarioDoc {
    name: string;
    weights: Record<string, number>;
    methods: string[];
    cr?: number;
    notes?: string;
}

export interface ScenariosResponse {
    revision: number;
    scenarios: ScenarioDoc[];
}

export interface RankEntryDoc {
    service: string;
    score: number;
    display_score: number;
    rank: number;
}

export interface RankingDoc {
    method: string;
    entries: RankEntryDoc[];
}

export interface ComparisonDoc {
    scenario: ScenarioDoc;
    rankings: RankingDoc[];
    kendall_tau: number | null;
    exact_rank_match: boolean | null;
    top_choice_agrees: boolean | null;
    revision?: number;
}

export interface SweepPointDoc {
    value: number;
    comparison?: ComparisonDoc;
    error?: string;
}

export interface SweepResponse {
    revision: number;
    points: SweepPointDoc[];
}

export interface ApiErrorDoc {
    code: string;
    message: string;
    field?: string;
}
