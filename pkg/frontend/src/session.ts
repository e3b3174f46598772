// Query session: selection state, validation, the single-flight rule and
// the session log. The log records every request/response pair, which is
// how the "every displayed number came from the service" invariant stays
// checkable after the fact.

import {
  ApiClient,
  NeighborsResult,
  QueryResponse,
  SimilarityResult,
  SkippedWord,
  VectorsResult,
} from "./api.js";

export type Task = "vectors" | "similarity" | "neighbors";

export interface SessionState {
  matrices: string[];
  words: string[];
  targets: string[];
  task: Task;
  measure: string;
  k: number;
}

export interface LogEntry {
  seq: number;
  at: string;
  kind: "query" | "expand";
  request: Record<string, unknown>;
  response?: unknown;
  error?: string;
}

export type QueryOutcome =
  | {
      task: "vectors";
      results: VectorsResult[];
      skipped: SkippedWord[];
    }
  | {
      task: "similarity";
      results: SimilarityResult[];
      skipped: SkippedWord[];
    }
  | {
      task: "neighbors";
      results: NeighborsResult[];
      skipped: SkippedWord[];
    }
  | { cancelled: true };

export function validateSession(state: SessionState): string[] {
  const problems: string[] = [];
  if (state.matrices.length === 0) problems.push("select at least one matrix");
  if (state.words.length === 0) problems.push("enter at least one word");
  if (state.task === "similarity" && state.targets.length === 0) {
    problems.push("the similarity task needs target words");
  }
  if (state.task === "neighbors" && (!Number.isInteger(state.k) || state.k < 1)) {
    problems.push("k must be a positive integer");
  }
  return problems;
}

export function parseWordList(raw: string): string[] {
  const seen = new Set<string>();
  const out: string[] = [];
  for (const token of raw.split(/[\s,;]+/)) {
    const word = token.trim();
    if (word && !seen.has(word)) {
      seen.add(word);
      out.push(word);
    }
  }
  return out;
}

export class QuerySession {
  state: SessionState = {
    matrices: [],
    words: [],
    targets: [],
    task: "neighbors",
    measure: "cosine",
    k: 10,
  };

  readonly log: LogEntry[] = [];
  private seq = 0;
  private inflight: AbortController | null = null;

  constructor(private readonly api: ApiClient) {}

  get busy(): boolean {
    return this.inflight !== null;
  }

  // task switches keep the matrix selection and word boxes untouched
  setTask(task: Task): void {
    this.state.task = task;
  }

  private record(
    kind: LogEntry["kind"],
    request: Record<string, unknown>,
  ): LogEntry {
    const entry: LogEntry = {
      seq: this.seq++,
      at: new Date().toISOString(),
      kind,
      request,
    };
    this.log.push(entry);
    return entry;
  }

  /** Run the session's query. A submission while one is in flight cancels
   *  the earlier one (the outcome of the cancelled call is `{cancelled}`). */
  async run(): Promise<QueryOutcome> {
    const problems = validateSession(this.state);
    if (problems.length > 0) {
      throw new Error(problems.join("; "));
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const { matrices, words, targets, task, measure, k } = this.state;
    const requested: Record<string, unknown> = { task, matrices, words };
    if (task === "similarity") {
      requested.targets = targets;
      requested.measure = measure;
    }
    if (task === "neighbors") {
      requested.k = k;
      requested.measure = measure;
    }
    const entry = this.record("query", requested);
    try {
      let outcome: QueryOutcome;
      if (task === "vectors") {
        const r = await this.api.vectors(matrices, words, controller.signal);
        outcome = { task, results: r.results, skipped: r.skipped };
        entry.response = r;
      } else if (task === "similarity") {
        const r = await this.api.similarity(
          matrices,
          words,
          targets,
          measure,
          controller.signal,
        );
        outcome = { task, results: r.results, skipped: r.skipped };
        entry.response = r;
      } else {
        const r = await this.api.neighbors(
          matrices,
          words,
          k,
          measure,
          controller.signal,
        );
        outcome = { task, results: r.results, skipped: r.skipped };
        entry.response = r;
      }
      return outcome;
    } catch (err) {
      if (controller.signal.aborted) {
        entry.error = "cancelled";
        return { cancelled: true };
      }
      entry.error = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }

  /** Neighbors for one clicked graph node, with the session's current
   *  matrices/k/measure; the feedback loop behind the graph view. */
  async expandNode(
    word: string,
  ): Promise<QueryResponse<NeighborsResult> | { cancelled: true }> {
    const { matrices, measure, k } = this.state;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const entry = this.record("expand", {
      task: "neighbors",
      matrices,
      words: [word],
      k,
      measure,
    });
    try {
      const r = await this.api.neighbors(
        matrices,
        [word],
        k,
        measure,
        controller.signal,
      );
      entry.response = r;
      return r;
    } catch (err) {
      if (controller.signal.aborted) {
        entry.error = "cancelled";
        return { cancelled: true };
      }
      entry.error = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }
}
