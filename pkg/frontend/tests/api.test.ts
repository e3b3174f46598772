import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => vi.unstubAllGlobals());

describe("api client", () => {
  it("lists matrices from the catalog endpoint", async () => {
    const payload = { matrices: [{ name: "GENERIC" }] };
    const fetchSpy = vi.fn(async (url: RequestInfo | URL) => {
      expect(String(url)).toBe("http://svc/api/matrices");
      return jsonResponse(payload);
    });
    vi.stubGlobal("fetch", fetchSpy);
    const client = new ApiClient("http://svc");
    expect(await client.listMatrices()).toEqual(payload);
  });

  it("posts the documented payload shapes", async () => {
    const calls: { url: string; body: unknown }[] = [];
    vi.stubGlobal(
      "fetch",
      vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
        calls.push({ url: String(url), body: JSON.parse(String(init?.body)) });
        return jsonResponse({ results: [], skipped: [] });
      }),
    );
    const client = new ApiClient("");
    await client.vectors(["A"], ["w"]);
    await client.similarity(["A"], ["w"], ["t"], "cosine");
    await client.neighbors(["A"], ["w"], 7, "dot");
    expect(calls).toEqual([
      { url: "/api/vectors", body: { matrices: ["A"], words: ["w"] } },
      {
        url: "/api/similarity",
        body: { matrices: ["A"], words: ["w"], targets: ["t"],
                measure: "cosine" },
      },
      {
        url: "/api/neighbors",
        body: { matrices: ["A"], words: ["w"], k: 7, measure: "dot" },
      },
    ]);
  });

  it("raises ApiError with status and payload on service errors", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        jsonResponse({ detail: { error: "unknown-matrix" } }, 404),
      ),
    );
    const client = new ApiClient("");
    const err = await client
      .neighbors(["NOPE"], ["w"], 1, "cosine")
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).payload).toEqual({
      detail: { error: "unknown-matrix" },
    });
  });
});
