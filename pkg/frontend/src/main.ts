/** Browser wiring: file upload, sliders, live simulation, snapshot
 * comparison, and the weight-network view. All numbers shown come from
 * service responses; this file only moves them into the DOM.
 */

import { ApiClient, ApiError } from "./api.js";
import { createSingleFlight } from "./debounce.js";
import { ExplorerState } from "./state.js";
import { buildCompareView, renderCompareSvg } from "./views/compareView.js";
import {
  buildNetworkViewModel,
  DEFAULT_EDGE_THRESHOLD,
  renderNetworkSvg,
} from "./views/networkView.js";
import { buildSimulateViewModel, renderBarsSvg, renderTraceSvg } from "./views/simulateView.js";
import type { Edge, SimulateResponse } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const api = new ApiClient(
  (document.querySelector("meta[name=service-url]") as HTMLMetaElement | null)?.content ??
    "http://127.0.0.1:8080",
);

let state: ExplorerState | null = null;
let protectedOrder: string[] = [];
let lastResponse: SimulateResponse | null = null;
let edges: Edge[] = [];
let pinCounter = 0;

function showError(message: string): void {
  const box = $("error-box");
  box.textContent = message;
  box.hidden = message === "";
}

async function runSimulation(current: ExplorerState): Promise<void> {
  if (!current.modelId) return;
  try {
    const response = await api.simulate(current.modelId, {
      initial: current.initialMap(),
      phi: current.phi,
      transfer: current.transfer,
      iters: 100,
    });
    lastResponse = response;
    showError("");
    const vm = buildSimulateViewModel(response, protectedOrder);
    $("bars").innerHTML = renderBarsSvg(vm.bars);
    $("trace").innerHTML = renderTraceSvg(vm.lines);
    $("badge").textContent = vm.badge;
  } catch (err) {
    if (err instanceof ApiError) {
      showError(`${err.body.code}: ${err.body.message}`);
    } else {
      showError(String(err));
    }
  }
}

const flight = createSingleFlight(runSimulation, 150);

function rebuildSliders(): void {
  if (!state) return;
  const holder = $("sliders");
  holder.innerHTML = "";
  for (const [name, value] of state.sliderEntries()) {
    const row = document.createElement("label");
    row.className = "slider-row";
    const title = document.createElement("span");
    title.textContent = name;
    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = "1";
    input.step = "0.01";
    input.value = String(value);
    const readout = document.createElement("code");
    readout.textContent = value.toFixed(2);
    input.addEventListener("input", () => {
      if (!state) return;
      state.setSlider(name, Number(input.value));
      readout.textContent = Number(input.value).toFixed(2);
      flight.schedule(state);
    });
    row.append(title, input, readout);
    holder.append(row);
  }
}

function renderCompare(): void {
  if (!state) return;
  $("compare").innerHTML = renderCompareSvg(buildCompareView(state.snapshots));
  $("snapshot-list").textContent = state.snapshots
    .map((s) => `${s.label} (phi=${s.phi})`)
    .join(", ");
}

function renderNetwork(): void {
  if (!state) return;
  const threshold = Number(($("edge-threshold") as HTMLInputElement).value);
  const vm = buildNetworkViewModel(edges, state.protectedConcepts, threshold);
  $("network").innerHTML = renderNetworkSvg(vm, state.conceptNames);
}

async function loadModel(): Promise<void> {
  const dataFile = ($("data-file") as HTMLInputElement).files?.[0];
  const schemaFile = ($("schema-file") as HTMLInputElement).files?.[0];
  if (!dataFile || !schemaFile) {
    showError("choose both a data CSV and a schema JSON first");
    return;
  }
  try {
    const info = await api.createModel(dataFile, schemaFile);
    const weights = await api.getWeights(info.modelId);
    edges = (await api.getEdges(info.modelId)).edges;
    state = new ExplorerState(weights.conceptNames, weights.protected);
    state.modelId = info.modelId;
    protectedOrder = weights.protected;
    $("model-label").textContent = `model ${info.modelId} (${weights.conceptNames.length} concepts)`;
    showError("");
    rebuildSliders();
    renderNetwork();
    flight.schedule(state);
  } catch (err) {
    showError(err instanceof ApiError ? `${err.body.code}: ${err.body.message}` : String(err));
  }
}

function wireControls(): void {
  $("load-model").addEventListener("click", () => void loadModel());
  const phi = $("phi") as HTMLInputElement;
  phi.addEventListener("input", () => {
    if (!state) return;
    state.setPhi(Number(phi.value));
    $("phi-label").textContent = state.phiLabel();
    flight.schedule(state);
  });
  const transfer = $("transfer") as HTMLSelectElement;
  transfer.addEventListener("change", () => {
    if (!state) return;
    state.transfer = transfer.value as ExplorerState["transfer"];
    flight.schedule(state);
  });
  $("pin").addEventListener("click", () => {
    if (!state || !lastResponse) return;
    pinCounter += 1;
    state.pin(`snapshot ${pinCounter}`, lastResponse);
    renderCompare();
  });
  $("clear-pins").addEventListener("click", () => {
    if (!state) return;
    state.snapshots = [];
    renderCompare();
  });
  ($("edge-threshold") as HTMLInputElement).addEventListener("input", renderNetwork);
}

wireControls();
renderCompare();
