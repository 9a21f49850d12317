/** Simulation result view: protected-concept bars, per-concept trace lines,
 * and a terminal-state badge. Every displayed number is copied verbatim from
 * the service response; only pixel positions are computed here.
 */

import type { SimulateResponse, Terminal } from "../types.js";

export interface Bar {
  concept: string;
  value: number;
}

export interface TraceLine {
  concept: string;
  points: number[];
}

export interface SimulateViewModel {
  bars: Bar[];
  lines: TraceLine[];
  badge: string;
}

export function badgeText(terminal: Terminal): string {
  switch (terminal.kind) {
    case "fixed_point":
      return `fixed point (iteration ${terminal.atIteration})`;
    case "limit_cycle":
      return `limit cycle (period ${terminal.period})`;
    default:
      return "inconclusive";
  }
}

export function buildSimulateViewModel(
  response: SimulateResponse,
  protectedOrder?: readonly string[],
): SimulateViewModel {
  const names = protectedOrder ?? Object.keys(response.protectedActivations);
  const bars = names.map((concept) => ({
    concept,
    value: response.protectedActivations[concept],
  }));
  const lines = response.conceptNames.map((concept, column) => ({
    concept,
    points: response.trace.states.map((state) => state[column]),
  }));
  return { bars, lines, badge: badgeText(response.terminal) };
}

export function renderBarsSvg(bars: Bar[], width = 420, height = 200): string {
  const pad = 28;
  const slot = bars.length > 0 ? (width - 2 * pad) / bars.length : 0;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="bars">`,
    `<line x1="${pad}" y1="${height - pad}" x2="${width - pad}" y2="${height - pad}" stroke="#444"/>`,
  ];
  bars.forEach((bar, i) => {
    const h = Math.max(0, Math.min(1, bar.value)) * (height - 2 * pad);
    const x = pad + i * slot + slot * 0.15;
    const y = height - pad - h;
    parts.push(
      `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${(slot * 0.7).toFixed(1)}" ` +
        `height="${h.toFixed(1)}" fill="#b03a2e"/>`,
      `<text x="${(x + slot * 0.35).toFixed(1)}" y="${(y - 4).toFixed(1)}" ` +
        `text-anchor="middle" font-size="11">${bar.value.toFixed(3)}</text>`,
      `<text x="${(x + slot * 0.35).toFixed(1)}" y="${height - pad + 13}" ` +
        `text-anchor="middle" font-size="10">${bar.concept}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}

export function renderTraceSvg(lines: TraceLine[], width = 420, height = 200): string {
  const pad = 24;
  const steps = lines.length > 0 ? lines[0].points.length : 0;
  const dx = steps > 1 ? (width - 2 * pad) / (steps - 1) : 0;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="trace">`,
    `<line x1="${pad}" y1="${height - pad}" x2="${width - pad}" y2="${height - pad}" stroke="#444"/>`,
  ];
  lines.forEach((line, index) => {
    const hue = (index * 137) % 360;
    const points = line.points
      .map((v, t) => `${(pad + t * dx).toFixed(1)},${(height - pad - v * (height - 2 * pad)).toFixed(1)}`)
      .join(" ");
    parts.push(
      `<polyline fill="none" stroke="hsl(${hue},60%,45%)" stroke-width="1.2" points="${points}"/>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
