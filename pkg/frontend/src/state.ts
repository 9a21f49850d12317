/** Explorer state: slider values, phi, transfer choice, pinned snapshots.
 *
 * Protected concepts are display-only. They never get sliders and the
 * setter refuses them, mirroring the service's 422 contract.
 */

import type { SimulateResponse } from "./types.js";

export type TransferChoice = "rescaled" | "sigmoid" | "tanh";

export interface Snapshot {
  label: string;
  phi: number;
  sliders: Record<string, number>;
  response: SimulateResponse;
}

export class ExplorerState {
  readonly conceptNames: readonly string[];
  readonly protectedConcepts: ReadonlySet<string>;
  modelId: string | null = null;
  phi = 1.0;
  transfer: TransferChoice = "rescaled";
  snapshots: Snapshot[] = [];

  private readonly sliderValues = new Map<string, number>();

  constructor(conceptNames: readonly string[], protectedConcepts: Iterable<string>) {
    this.conceptNames = [...conceptNames];
    this.protectedConcepts = new Set(protectedConcepts);
    for (const name of this.conceptNames) {
      if (!this.protectedConcepts.has(name)) {
        this.sliderValues.set(name, 0); // concepts start inactive
      }
    }
  }

  /** Settable sliders in concept order; protected concepts never appear. */
  sliderEntries(): Array<[string, number]> {
    return this.conceptNames
      .filter((name) => this.sliderValues.has(name))
      .map((name) => [name, this.sliderValues.get(name) as number]);
  }

  setSlider(name: string, value: number): void {
    if (this.protectedConcepts.has(name)) {
      throw new Error(`concept "${name}" is protected and cannot be activated`);
    }
    if (!this.sliderValues.has(name)) {
      throw new Error(`unknown concept "${name}"`);
    }
    this.sliderValues.set(name, Math.min(1, Math.max(0, value)));
  }

  setPhi(value: number): void {
    this.phi = Math.min(1, Math.max(0, value));
  }

  /** Phi shown as "reliance on data patterns" in percent. */
  phiPercent(): number {
    return Math.round(this.phi * 100);
  }

  phiLabel(): string {
    return `reliance on data patterns: ${this.phiPercent()}%`;
  }

  /** Initial activation map for /simulate: active sliders only. */
  initialMap(): Record<string, number> {
    const initial: Record<string, number> = {};
    for (const [name, value] of this.sliderEntries()) {
      if (value > 0) initial[name] = value;
    }
    return initial;
  }

  pin(label: string, response: SimulateResponse): Snapshot {
    const snapshot: Snapshot = {
      label,
      phi: this.phi,
      sliders: this.initialMap(),
      response,
    };
    this.snapshots.push(snapshot);
    return snapshot;
  }

  unpin(label: string): void {
    this.snapshots = this.snapshots.filter((s) => s.label !== label);
  }
}
