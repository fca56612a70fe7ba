// Canned request/response store for fixture-replay mode: contract tests run
// against recorded exchanges with no model weights present.

import { readFileSync } from "fs";

export interface FixtureFile {
  score?: Array<{ request: unknown; response: unknown }>;
  generate?: Array<{ request: unknown; response: unknown }>;
}

export class FixtureStore {
  private score = new Map<string, unknown>();
  private generate = new Map<string, unknown>();

  static load(path: string): FixtureStore {
    const parsed = JSON.parse(readFileSync(path, "utf-8")) as FixtureFile;
    const store = new FixtureStore();
    for (const entry of parsed.score ?? []) {
      store.score.set(canonical(entry.request), entry.response);
    }
    for (const entry of parsed.generate ?? []) {
      store.generate.set(canonical(entry.request), entry.response);
    }
    return store;
  }

  lookupScore(request: unknown): unknown | undefined {
    return this.score.get(canonical(request));
  }

  lookupGenerate(request: unknown): unknown | undefined {
    return this.generate.get(canonical(request));
  }
}

export function canonical(value: unknown): string {
  return JSON.stringify(sortKeys(value));
}

function sortKeys(value: unknown): unknown {
  if (Array.isArray(value)) {
    return value.map(sortKeys);
  }
  if (value !== null && typeof value === "object") {
    const out: Record<string, unknown> = {};
    for (const key of Object.keys(value as Record<string, unknown>).sort()) {
      out[key] = sortKeys((value as Record<string, unknown>)[key]);
    }
    return out;
  }
  return value;
}
