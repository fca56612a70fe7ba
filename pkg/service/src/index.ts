// CLI entry: start the service in dev or fixture-replay mode.
//
// Usage: node dist/src/index.js [--port N] [--mode dev|replay]
//        [--fixtures path] [--scorer-checkpoint path]
//        [--generator-checkpoint path] [--max-batch N] [--quantized]

import { makeConfig, ServiceConfig, ServiceMode } from "./config";
import { createServer } from "./server";

function parseArgs(argv: string[]): { port: number; config: ServiceConfig } {
  let port = 8080;
  const overrides: Partial<ServiceConfig> = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      const value = argv[++i];
      if (value === undefined) throw new Error(`${arg} needs a value`);
      return value;
    };
    switch (arg) {
      case "--port":
        port = parseInt(next(), 10);
        break;
      case "--mode":
        overrides.mode = next() as ServiceMode;
        break;
      case "--fixtures":
        overrides.fixturesPath = next();
        break;
      case "--scorer-checkpoint":
        overrides.scorerCheckpoint = next();
        break;
      case "--generator-checkpoint":
        overrides.generatorCheckpoint = next();
        break;
      case "--max-batch":
        overrides.maxBatchSize = parseInt(next(), 10);
        break;
      case "--quantized":
        overrides.quantized = true;
        break;
      default:
        throw new Error(`unknown argument ${arg}`);
    }
  }
  return { port, config: makeConfig(overrides) };
}

if (require.main === module) {
  const { port, config } = parseArgs(process.argv.slice(2));
  const server = createServer(config);
  server.listen(port, () => {
    console.log(`model-service listening on :${port} (mode=${config.mode})`);
  });
}
