// HTTP surface: POST /score, POST /generate, GET /healthz.
//
// Response bodies carry exactly the contract fields: {score}, {scores},
// {text}. Batch scores are order-aligned with their request pairs. Status
// codes: 400 malformed, 413 over the batch limit, 503 model not loaded or
// fixture miss in replay mode.

import * as http from "http";
import { existsSync } from "fs";
import { ServiceConfig } from "./config";
import { FixtureStore } from "./fixtures";
import { generate } from "./generator";
import { clampScore, lexicalScore } from "./scorer";

interface ScorePair {
  question: string;
  context: string;
}

class HttpError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

function isNonEmptyString(value: unknown): value is string {
  return typeof value === "string" && value.length > 0;
}

function parsePair(value: unknown): ScorePair {
  if (value === null || typeof value !== "object") {
    throw new HttpError(400, "each pair must be an object");
  }
  const { question, context } = value as Record<string, unknown>;
  if (!isNonEmptyString(question) || !isNonEmptyString(context)) {
    throw new HttpError(400, "question and context must be non-empty strings");
  }
  return { question, context };
}

export class ModelService {
  private fixtures?: FixtureStore;
  private loadError?: string;

  constructor(private config: ServiceConfig) {
    if (config.mode === "replay") {
      if (!config.fixturesPath) {
        this.loadError = "replay mode needs a fixtures file";
      } else {
        try {
          this.fixtures = FixtureStore.load(config.fixturesPath);
        } catch (err) {
          this.loadError = `failed to load fixtures: ${String(err)}`;
        }
      }
    } else {
      for (const checkpoint of [config.scorerCheckpoint, config.generatorCheckpoint]) {
        if (checkpoint && !existsSync(checkpoint)) {
          this.loadError = `checkpoint not found: ${checkpoint}`;
        }
      }
    }
  }

  ready(): boolean {
    return this.loadError === undefined;
  }

  handleScore(body: unknown): unknown {
    if (!this.ready()) throw new HttpError(503, this.loadError ?? "model not loaded");
    if (body === null || typeof body !== "object") {
      throw new HttpError(400, "request body must be a JSON object");
    }
    const record = body as Record<string, unknown>;
    if ("pairs" in record) {
      if (!Array.isArray(record.pairs) || record.pairs.length === 0) {
        throw new HttpError(400, "pairs must be a non-empty array");
      }
      if (record.pairs.length > this.config.maxBatchSize) {
        throw new HttpError(
          413,
          `batch of ${record.pairs.length} exceeds limit ${this.config.maxBatchSize}`
        );
      }
      const pairs = record.pairs.map(parsePair);
      if (this.fixtures) {
        const canned = this.fixtures.lookupScore(body);
        if (canned === undefined) throw new HttpError(503, "no fixture for request");
        return canned;
      }
      return { scores: pairs.map((p) => clampScore(lexicalScore(p.question, p.context))) };
    }
    const pair = parsePair(body);
    if (this.fixtures) {
      const canned = this.fixtures.lookupScore(body);
      if (canned === undefined) throw new HttpError(503, "no fixture for request");
      return canned;
    }
    return { score: clampScore(lexicalScore(pair.question, pair.context)) };
  }

  handleGenerate(body: unknown): unknown {
    if (!this.ready()) throw new HttpError(503, this.loadError ?? "model not loaded");
    if (body === null || typeof body !== "object") {
      throw new HttpError(400, "request body must be a JSON object");
    }
    const record = body as Record<string, unknown>;
    if (!isNonEmptyString(record.prompt)) {
      throw new HttpError(400, "prompt must be a non-empty string");
    }
    const decoding = record.decoding ?? this.config.defaultDecoding;
    if (decoding !== "greedy" && decoding !== "nucleus") {
      throw new HttpError(400, `unknown decoding ${String(decoding)}`);
    }
    const requested = record.max_new_tokens;
    let maxNewTokens = 32;
    if (requested !== undefined) {
      if (typeof requested !== "number" || requested <= 0) {
        throw new HttpError(400, "max_new_tokens must be a positive number");
      }
      maxNewTokens = Math.floor(requested);
    }
    maxNewTokens = Math.min(maxNewTokens, this.config.maxSequenceLength);
    const seed = typeof record.seed === "number" ? record.seed : undefined;
    if (this.fixtures) {
      const canned = this.fixtures.lookupGenerate(body);
      if (canned === undefined) throw new HttpError(503, "no fixture for request");
      return canned;
    }
    return {
      text: generate(record.prompt, {
        maxNewTokens,
        decoding,
        nucleus: this.config.nucleus,
        seed,
      }),
    };
  }
}

function readBody(request: http.IncomingMessage): Promise<string> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    request.on("data", (chunk) => chunks.push(chunk));
    request.on("end", () => resolve(Buffer.concat(chunks).toString("utf-8")));
    request.on("error", reject);
  });
}

export function createServer(config: ServiceConfig): http.Server {
  const service = new ModelService(config);
  return http.createServer(async (request, response) => {
    const send = (status: number, body: unknown) => {
      const raw = JSON.stringify(body);
      response.writeHead(status, {
        "Content-Type": "application/json",
        "Content-Length": Buffer.byteLength(raw),
      });
      response.end(raw);
    };
    try {
      if (request.method === "GET" && request.url === "/healthz") {
        if (service.ready()) {
          send(200, { status: "ok" });
        } else {
          send(503, { status: "not ready" });
        }
        return;
      }
      if (request.method !== "POST" || (request.url !== "/score" && request.url !== "/generate")) {
        send(404, { error: "not found" });
        return;
      }
      let body: unknown;
      try {
        body = JSON.parse((await readBody(request)) || "null");
      } catch {
        throw new HttpError(400, "request body is not valid JSON");
      }
      const result =
        request.url === "/score" ? service.handleScore(body) : service.handleGenerate(body);
      send(200, result);
    } catch (err) {
      if (err instanceof HttpError) {
        send(err.status, { error: err.message });
      } else {
        send(500, { error: String(err) });
      }
    }
  });
}
