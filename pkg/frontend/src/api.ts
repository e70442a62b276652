/** Typed client for the ranking API; the UI's only path to numbers. */

import type {
    ApiErrorDoc,
    CatalogResponse,
    ComparisonDoc,
    ScenariosResponse,
    SweepResponse,
} from "./types.js";

export class ApiRequestError extends Error {
    readonly code: string;
    readonly field?: string;
    readonly status: number;

    constructor(status: number, doc: ApiErrorDoc) {
        super(doc.message);
        this.status = status;
        this.code = doc.code;
        this.field = doc.field;
    }
}

type FetchLike = typeof fetch;

export class ApiClient {
    constructor(
        private readonly baseUrl: string = "",
        private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
            method,
            headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
            body: body !== undefined ? JSON.stringify(body) : undefined,
        });
        const payload = await resp.json().catch(() => ({
            code: "BadResponse",
            message: `HTTP ${resp.status} with unreadable body`,
        }));
        if (!resp.ok) {
            throw new ApiRequestError(resp.status, payload as ApiErrorDoc);
        }
        return payload as T;
    }

    getCatalog(): Promise<CatalogResponse> {
        return this.request("GET", "/api/v1/catalog");
    }

    getScenarios(): Promise<ScenariosResponse> {
        return this.request("GET", "/api/v1/scenarios");
    }

    postRank(weights: Record<string, number>, methods?: string[]): Promise<ComparisonDoc> {
        const body: Record<string, unknown> = { weights };
        if (methods) body.methods = methods;
        return this.request("POST", "/api/v1/rank", body);
    }

    postSweep(
        weights: Record<string, number>,
        criterion: string,
        values: number[],
    ): Promise<SweepResponse> {
        return this.request("POST", "/api/v1/sweep", { weights, criterion, values });
    }
}
