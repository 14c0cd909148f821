import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { SearchResponse } from "../src/types.js";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(fixturesDir, name), "utf-8")) as T;
}

export const searchSmall = (): SearchResponse => fixture<SearchResponse>("search_small.json");
export const searchMany = (): SearchResponse => fixture<SearchResponse>("search_many.json");
export const searchEmpty = (): SearchResponse => fixture<SearchResponse>("search_empty.json");

export interface RecordedCall {
  url: string;
  body: unknown;
}

/**
 * A fetch stub replaying recorded gateway responses. Routes are matched by
 * URL suffix; each handler may be a static payload or a function of the
 * parsed request body.
 */
export function mockFetch(
  routes: Record<string, unknown | ((body: unknown) => unknown)>,
  calls: RecordedCall[] = [],
): (input: string, init?: RequestInit) => Promise<Response> {
  return async (input, init) => {
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    calls.push({ url: input, body });
    for (const [suffix, handler] of Object.entries(routes)) {
      if (input.endsWith(suffix)) {
        const payload = typeof handler === "function" ? (handler as (b: unknown) => unknown)(body) : handler;
        if (payload instanceof Response) return payload;
        return new Response(JSON.stringify(payload), {
          status: 200,
          headers: { "content-type": "application/json" },
        });
      }
    }
    return new Response(JSON.stringify({ detail: "not found" }), { status: 404 });
  };
}

export function errorResponse(status: number, detail: string): Response {
  return new Response(JSON.stringify({ detail }), { status });
}
