/** Weight-network rendering: undirected edges on a circular concept layout.
 *
 * Edges touching a protected concept are colored, the rest stay gray; edge
 * width grows with weight and a threshold slider hides near-zero edges.
 */

import type { Edge } from "../types.js";

export const DEFAULT_EDGE_THRESHOLD = 0.01;

export interface NetworkEdgeVM extends Edge {
  colored: boolean;
  width: number;
}

export function buildNetworkViewModel(
  edges: readonly Edge[],
  protectedConcepts: Iterable<string>,
  threshold = DEFAULT_EDGE_THRESHOLD,
): NetworkEdgeVM[] {
  const prot = new Set(protectedConcepts);
  return edges
    .filter((edge) => edge.weight >= threshold)
    .map((edge) => ({
      ...edge,
      colored: prot.has(edge.source) || prot.has(edge.target),
      width: 0.5 + 4.5 * Math.min(1, edge.weight),
    }));
}

export function renderNetworkSvg(
  edges: readonly NetworkEdgeVM[],
  conceptNames: readonly string[],
  size = 440,
): string {
  const center = size / 2;
  const radius = center - 60;
  const angle = (index: number) => (2 * Math.PI * index) / conceptNames.length - Math.PI / 2;
  const pos = new Map(
    conceptNames.map((name, i) => [
      name,
      {
        x: center + radius * Math.cos(angle(i)),
        y: center + radius * Math.sin(angle(i)),
      },
    ]),
  );
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${size} ${size}" class="network">`,
  ];
  // gray edges first so colored ones draw on top
  const ordered = [...edges].sort((a, b) => Number(a.colored) - Number(b.colored));
  for (const edge of ordered) {
    const a = pos.get(edge.source);
    const b = pos.get(edge.target);
    if (!a || !b) continue;
    const stroke = edge.colored ? "#b03a2e" : "#c9c9c9";
    parts.push(
      `<path d="M ${a.x.toFixed(1)} ${a.y.toFixed(1)} Q ${center} ${center} ` +
        `${b.x.toFixed(1)} ${b.y.toFixed(1)}" fill="none" stroke="${stroke}" ` +
        `stroke-width="${edge.width.toFixed(2)}" stroke-opacity="0.65"/>`,
    );
  }
  conceptNames.forEach((name, i) => {
    const p = pos.get(name);
    if (!p) return;
    const deg = (angle(i) * 180) / Math.PI;
    const flip = deg > 90 || deg < -90;
    parts.push(
      `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="3" fill="#333"/>`,
      `<text x="${p.x.toFixed(1)}" y="${p.y.toFixed(1)}" font-size="9" ` +
        `transform="rotate(${(flip ? deg + 180 : deg).toFixed(1)} ${p.x.toFixed(1)} ${p.y.toFixed(1)})" ` +
        `text-anchor="${flip ? "end" : "start"}" dx="${flip ? -6 : 6}" dy="3">${name}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
