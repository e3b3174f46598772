import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  QuerySession,
  parseWordList,
  validateSession,
} from "../src/session.js";

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "Content-Type": "application/json" },
  });
}

const EMPTY = { results: [], skipped: [] };

afterEach(() => {
  vi.restoreAllMocks();
  vi.unstubAllGlobals();
});

describe("validation", () => {
  const base = {
    matrices: ["GENERIC"],
    words: ["anguilla"],
    targets: [],
    measure: "cosine",
    k: 5,
  };

  it("passes neighbors and vectors without targets", () => {
    expect(validateSession({ ...base, task: "neighbors" })).toEqual([]);
    expect(validateSession({ ...base, task: "vectors" })).toEqual([]);
  });

  it("requires targets only for similarity", () => {
    const problems = validateSession({ ...base, task: "similarity" });
    expect(problems.some((p) => p.includes("target"))).toBe(true);
    expect(
      validateSession({ ...base, task: "similarity", targets: ["x"] }),
    ).toEqual([]);
  });

  it("rejects empty selections and bad k before any network call", async () => {
    const fetchSpy = vi.fn();
    vi.stubGlobal("fetch", fetchSpy);
    const session = new QuerySession(new ApiClient(""));
    session.state.task = "similarity";
    session.state.words = ["a"];
    session.state.matrices = ["GENERIC"];
    await expect(session.run()).rejects.toThrow("target");
    expect(fetchSpy).not.toHaveBeenCalled();
  });
});

describe("word list parsing", () => {
  it("splits, trims and dedupes", () => {
    expect(parseWordList(" cane\n gatto,cane;  topo \n\n")).toEqual([
      "cane",
      "gatto",
      "topo",
    ]);
    expect(parseWordList("")).toEqual([]);
  });
});

describe("query execution and the session log", () => {
  function makeSession() {
    const session = new QuerySession(new ApiClient(""));
    session.state.matrices = ["GENERIC", "HABITAT"];
    session.state.words = ["anguilla"];
    session.state.task = "neighbors";
    session.state.k = 4;
    return session;
  }

  it("records the request and the response of a run", async () => {
    const fetchSpy = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
      expect(String(url)).toBe("/api/neighbors");
      expect(JSON.parse(String(init?.body))).toEqual({
        matrices: ["GENERIC", "HABITAT"],
        words: ["anguilla"],
        k: 4,
        measure: "cosine",
      });
      return jsonResponse(EMPTY);
    });
    vi.stubGlobal("fetch", fetchSpy);
    const session = makeSession();
    const outcome = await session.run();
    expect("cancelled" in outcome).toBe(false);
    expect(session.log).toHaveLength(1);
    const entry = session.log[0]!;
    expect(entry.kind).toBe("query");
    expect(entry.request).toMatchObject({ task: "neighbors", k: 4 });
    expect(entry.response).toEqual(EMPTY);
    expect(entry.error).toBeUndefined();
  });

  it("a second submission cancels the in-flight one", async () => {
    let firstSignal: AbortSignal | undefined;
    let call = 0;
    vi.stubGlobal(
      "fetch",
      vi.fn((url: RequestInfo | URL, init?: RequestInit) => {
        call += 1;
        if (call === 1) {
          firstSignal = init?.signal ?? undefined;
          return new Promise<Response>((_resolve, reject) => {
            init?.signal?.addEventListener("abort", () =>
              reject(new DOMException("aborted", "AbortError")),
            );
          });
        }
        return Promise.resolve(jsonResponse(EMPTY));
      }),
    );
    const session = makeSession();
    const first = session.run();
    const second = session.run();
    const [a, b] = await Promise.all([first, second]);
    expect(firstSignal?.aborted).toBe(true);
    expect(a).toEqual({ cancelled: true });
    expect("cancelled" in b).toBe(false);
    expect(session.log[0]!.error).toBe("cancelled");
    expect(session.log[1]!.response).toEqual(EMPTY);
    expect(session.busy).toBe(false);
  });

  it("clicking a node issues a new neighbors request, observable in the log", async () => {
    const bodies: unknown[] = [];
    vi.stubGlobal(
      "fetch",
      vi.fn(async (_url: RequestInfo | URL, init?: RequestInit) => {
        bodies.push(JSON.parse(String(init?.body)));
        return jsonResponse(EMPTY);
      }),
    );
    const session = makeSession();
    await session.run();
    const r = await session.expandNode("vescica");
    expect("cancelled" in r).toBe(false);
    expect(bodies[1]).toEqual({
      matrices: ["GENERIC", "HABITAT"],
      words: ["vescica"],
      k: 4,
      measure: "cosine",
    });
    expect(session.log).toHaveLength(2);
    expect(session.log[1]!.kind).toBe("expand");
    expect(session.log[1]!.request).toMatchObject({ words: ["vescica"] });
    expect(session.log[1]!.response).toBeDefined();
  });

  it("keeps matrix selection across task switches", () => {
    const session = makeSession();
    session.setTask("similarity");
    expect(session.state.matrices).toEqual(["GENERIC", "HABITAT"]);
    session.setTask("vectors");
    expect(session.state.words).toEqual(["anguilla"]);
  });
});
