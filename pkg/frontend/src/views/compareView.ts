/** Side-by-side snapshot comparison with percentage-change annotations.
 *
 * Values come verbatim from the pinned /simulate responses; the only
 * arithmetic is the relative change against the first snapshot.
 */

import type { Snapshot } from "../state.js";

export interface CompareCell {
  label: string;
  value: number;
  /** Relative change vs the first snapshot, in percent; null for the
   * baseline itself or a zero baseline. */
  changePct: number | null;
}

export interface CompareRow {
  concept: string;
  cells: CompareCell[];
}

export type CompareView =
  | { enabled: true; rows: CompareRow[] }
  | { enabled: false; hint: string };

export function percentChange(baseline: number, value: number): number | null {
  if (baseline === 0) return null;
  return ((value - baseline) / baseline) * 100;
}

export function buildCompareView(snapshots: readonly Snapshot[]): CompareView {
  if (snapshots.length < 2) {
    return { enabled: false, hint: "pin at least two snapshots to compare" };
  }
  const baseline = snapshots[0];
  const concepts = Object.keys(baseline.response.protectedActivations);
  const rows = concepts.map((concept) => ({
    concept,
    cells: snapshots.map((snapshot, index) => {
      const value = snapshot.response.protectedActivations[concept];
      const base = baseline.response.protectedActivations[concept];
      return {
        label: snapshot.label,
        value,
        changePct: index === 0 ? null : percentChange(base, value),
      };
    }),
  }));
  return { enabled: true, rows };
}

export function formatChange(changePct: number | null): string {
  if (changePct === null) return "";
  const sign = changePct >= 0 ? "+" : "";
  return `${sign}${changePct.toFixed(1)}%`;
}

export function renderCompareSvg(view: CompareView, width = 460, height = 220): string {
  if (!view.enabled) {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} 40">` +
      `<text x="8" y="24" font-size="12" fill="#666">${view.hint}</text></svg>`
    );
  }
  const pad = 30;
  const groups = view.rows.length;
  const perGroup = groups > 0 ? (width - 2 * pad) / groups : 0;
  const series = view.rows[0]?.cells.length ?? 0;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="compare">`,
    `<line x1="${pad}" y1="${height - pad}" x2="${width - pad}" y2="${height - pad}" stroke="#444"/>`,
  ];
  view.rows.forEach((row, g) => {
    row.cells.forEach((cell, s) => {
      const w = (perGroup * 0.8) / Math.max(series, 1);
      const x = pad + g * perGroup + perGroup * 0.1 + s * w;
      const h = Math.max(0, Math.min(1, cell.value)) * (height - 2 * pad);
      const y = height - pad - h;
      const hue = (s * 97) % 360;
      parts.push(
        `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${(w * 0.9).toFixed(1)}" ` +
          `height="${h.toFixed(1)}" fill="hsl(${hue},55%,45%)"/>`,
      );
      const annotation = formatChange(cell.changePct);
      if (annotation) {
        parts.push(
          `<text x="${(x + w * 0.45).toFixed(1)}" y="${(y - 4).toFixed(1)}" ` +
            `text-anchor="middle" font-size="10">${annotation}</text>`,
        );
      }
    });
    parts.push(
      `<text x="${(pad + g * perGroup + perGroup * 0.5).toFixed(1)}" y="${height - pad + 13}" ` +
        `text-anchor="middle" font-size="10">${row.concept}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
