// Development generator: a procedural text source that mimics the decoding
// contract without model weights. Greedy decoding is a pure function of the
// prompt; nucleus sampling honors its (temperature, topP) parameters and an
// optional seed so runs are reproducible.

import { NucleusParams } from "./config";

export interface GenerateOptions {
  maxNewTokens: number;
  decoding: "greedy" | "nucleus";
  nucleus: NucleusParams;
  seed?: number;
}

const VOCABULARY = (
  "evidence suggests the answer follows from the passage because records " +
  "indicate observed amounts measured context history sources state further " +
  "details confirm therefore likely given both documents describe"
).split(" ");

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function generate(prompt: string, options: GenerateOptions): string {
  const base = fnv1a(prompt);
  const words: string[] = [];
  if (options.decoding === "greedy") {
    // Greedy: the walk is fully determined by the prompt hash.
    let cursor = base;
    for (let i = 0; i < options.maxNewTokens; i++) {
      cursor = (Math.imul(cursor, 1664525) + 1013904223) >>> 0;
      words.push(VOCABULARY[cursor % VOCABULARY.length]);
    }
  } else {
    // Nucleus: mix the seed into the stream and let temperature/topP shape
    // the candidate pool so distinct parameters yield distinct text.
    const seed = (base ^ ((options.seed ?? 0) >>> 0)) >>> 0;
    const random = mulberry32(seed);
    const pool = Math.max(
      2,
      Math.round(VOCABULARY.length * options.nucleus.topP * Math.min(1, options.nucleus.temperature))
    );
    for (let i = 0; i < options.maxNewTokens; i++) {
      words.push(VOCABULARY[Math.floor(random() * pool) % VOCABULARY.length]);
    }
  }
  return words.join(" ") + ".";
}
