// Typed client for the domavec query service. The UI does no similarity
// math of its own: every number it shows comes out of these calls.

export interface MatrixInfo {
  name: string;
  kind: string;
  rows: number;
  cols: number;
  window: number;
  weighting: string;
  reducedRank?: number;
}

export interface CatalogResponse {
  matrices: MatrixInfo[];
}

export interface SkippedWord {
  word: string;
  matrix: string;
}

export interface VectorsResult {
  word: string;
  text: string;
  vectors: Record<string, number[]>;
}

export interface SimilarityResult {
  word: string;
  text: string;
  targets: string[];
  similarities: Record<string, number[]>;
}

export interface NeighborsResult {
  word: string;
  text: string;
  neighbors: Record<string, [string, number][]>;
}

export interface QueryResponse<R> {
  results: R[];
  skipped: SkippedWord[];
}

export interface FeatureRow {
  feature: string;
  sRel: number;
  sUnrel: number;
  cT: number;
  fT: number;
  assigned: boolean;
}

export interface FeaturesResponse {
  target: string;
  pk: number;
  ck: number;
  text: string;
  features: FeatureRow[];
}

export class ApiError extends Error {
  constructor(

    readonly status: number,
    readonly payload: unknown,
  ) {
    super(`service error ${status}: ${JSON.stringify(payload)}`);
  }
}

async function request<T>(
  url: string,
  init: RequestInit,
  signal?: AbortSignal,
): Promise<T> {
  const response = await fetch(url, { ...init, signal });
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private post<T>(path: string, payload: unknown, signal?: AbortSignal) {
    return request<T>(
      this.baseUrl + path,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      },
      signal,
    );
  }

  listMatrices(signal?: AbortSignal): Promise<CatalogResponse> {
    return request<CatalogResponse>(this.baseUrl + "/api/matrices", {}, signal);
  }

  vectors(
    matrices: string[],
    words: string[],
    signal?: AbortSignal,
  ): Promise<QueryResponse<VectorsResult>> {
    return this.post("/api/vectors", { matrices, words }, signal);
  }

  similarity(
    matrices: string[],
    words: string[],
    targets: string[],
    measure: string,
    signal?: AbortSignal,
  ): Promise<QueryResponse<SimilarityResult>> {
    return this.post(
      "/api/similarity",
      { matrices, words, targets, measure },
      signal,
    );
  }

  neighbors(
    matrices: string[],
    words: string[],
    k: number,
    measure: string,
    signal?: AbortSignal,
  ): Promise<QueryResponse<NeighborsResult>> {
    return this.post("/api/neighbors", { matrices, words, k, measure }, signal);
  }

  features(
    target: string,
    configRef: string,
    pk: number,
    ck: number,
    signal?: AbortSignal,
  ): Promise<FeaturesResponse> {
    return this.post("/api/features", { target, configRef, pk, ck }, signal);
  }
}
