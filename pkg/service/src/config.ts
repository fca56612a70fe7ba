// Service-side configuration. Nucleus defaults are fixed to the training
// recipe's values unless explicitly overridden.

export interface NucleusParams {
  temperature: number;
  topP: number;
}

export type ServiceMode = "dev" | "replay";

export interface ServiceConfig {
  mode: ServiceMode;
  // Checkpoint paths are recorded for provenance; loading real weights is
  // out of scope, so a configured path must exist on disk for the service
  // to report itself ready in dev mode.
  scorerCheckpoint?: string;
  generatorCheckpoint?: string;
  fixturesPath?: string;
  maxSequenceLength: number;
  maxBatchSize: number;
  defaultDecoding: "greedy" | "nucleus";
  nucleus: NucleusParams;
  quantized: boolean;
}

export const DEFAULT_NUCLEUS: NucleusParams = { temperature: 0.95, topP: 0.96 };

export function makeConfig(overrides: Partial<ServiceConfig> = {}): ServiceConfig {
  return {
    mode: "dev",
    maxSequenceLength: 512,
    maxBatchSize: 64,
    defaultDecoding: "greedy",
    nucleus: { ...DEFAULT_NUCLEUS },
    quantized: false,
    ...overrides,
  };
}
