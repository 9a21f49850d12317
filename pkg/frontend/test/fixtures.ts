/** Loads captured service responses (real bytes from the running service). */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  EdgesResponse,
  ModelInfo,
  SimulateResponse,
  SweepResponse,
  WeightsResponse,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

export const modelInfo = (): ModelInfo => load("model.json");
export const weights = (): WeightsResponse => load("weights.json");
export const edges = (): EdgesResponse => load("edges.json");
export const simulatePhi1 = (): SimulateResponse => load("simulate_phi1.json");
export const simulatePhi06 = (): SimulateResponse => load("simulate_phi06.json");
export const sweep = (): SweepResponse => load("sweep.json");
