import { readFileSync } from 'node:fs';
import { join } from 'node:path';

/** Parse a captured server response from tests/fixtures. */
export function loadFixture<T>(name: string): T {
  const path = join(process.cwd(), 'tests', 'fixtures', name);
  return JSON.parse(readFileSync(path, 'utf8')) as T;
}

/** Small deterministic RNG so every run exercises identical cases. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export type FetchHandler = (
  url: string,
  init?: RequestInit,
) => unknown | Response | Promise<unknown | Response>;

export interface FetchStub {
  calls: Array<{ url: string; init?: RequestInit }>;
  restore: () => void;
}

/**
 * Replace global fetch with a handler. The handler may return a plain body
 * (wrapped as 200 JSON), a Response, or a promise of either; throwing an
 * object {status, body} produces an error response.
 */
export function stubFetch(handler: FetchHandler): FetchStub {
  const calls: Array<{ url: string; init?: RequestInit }> = [];
  const original = globalThis.fetch;
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    let body: unknown;
    try {
      body = await handler(url, init);
    } catch (raised) {
      const maybe = raised as { status?: number; body?: unknown };
      if (typeof maybe.status !== 'number') {
        throw raised; // a real defect, not a simulated HTTP error
      }
      return new Response(JSON.stringify(maybe.body), {
        status: maybe.status,
        headers: { 'Content-Type': 'application/json' },
      });
    }
    if (body instanceof Response) {
      return body;
    }
    return new Response(JSON.stringify(body), {
      status: 200,
      headers: { 'Content-Type': 'application/json' },
    });
  }) as typeof fetch;
  return {
    calls,
    restore: () => {
      globalThis.fetch = original;
    },
  };
}

/** Let queued promise callbacks run without advancing any timers. */
export async function flushAsync(turns = 12): Promise<void> {
  for (let i = 0; i < turns; i += 1) {
    await Promise.resolve();
  }
}
