// Hand-rolled SVG charts. Geometry is computed here; every *displayed*
// number is passed in verbatim by the caller.

import { escapeHtml } from "./format.js";

export const PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc949",
  "#b07aa1", "#ff9da7", "#9c755f", "#bab0ab", "#86bcb6",
];

export interface DonutSlice {
  label: string;
  value: number;
  color?: string;
}

export interface Bar {
  label: string;
  value: number;
  valueLabel?: string;
}

function emptyChart(text = "no data"): string {
  return `<div class="chart-empty">${escapeHtml(text)}</div>`;
}

/** Donut built from stroked circles; slice sizes are proportions of
 * the given values (the classic 2πr=100 trick). */
export function donutChart(slices: DonutSlice[], centerText = ""): string {
  const total = slices.reduce((sum, s) => sum + s.value, 0);
  if (!(total > 0)) {
    return emptyChart();
  }
  const radius = 15.9155; // circumference = 100
  let offset = 25; // start at 12 o'clock
  const parts: string[] = [];
  slices.forEach((slice, i) => {
    if (slice.value <= 0) return;
    const frac = (slice.value / total) * 100;
    const color = slice.color ?? PALETTE[i % PALETTE.length];
    parts.push(
      `<circle r="${radius}" cx="21" cy="21" fill="transparent" ` +
        `stroke="${color}" stroke-width="7" ` +
        `stroke-dasharray="${frac.toFixed(4)} ${(100 - frac).toFixed(4)}" ` +
        `stroke-dashoffset="${offset.toFixed(4)}">` +
        `<title>${escapeHtml(slice.label)}</title></circle>`,
    );
    offset -= frac;
  });
  return (
    `<svg viewBox="0 0 42 42" class="donut" role="img">${parts.join("")}` +
    `<text x="21" y="23" text-anchor="middle" class="donut-center">` +
    `${escapeHtml(centerText)}</text></svg>`
  );
}

export function barChart(bars: Bar[]): string {
  if (bars.length === 0) {
    return emptyChart();
  }
  const max = Math.max(...bars.map((b) => b.value), 1);
  const barWidth = 22;
  const gap = 8;
  const width = bars.length * (barWidth + gap) + gap;
  const plotHeight = 100;
  const parts: string[] = [];
  bars.forEach((bar, i) => {
    const h = (bar.value / max) * (plotHeight - 16);
    const x = gap + i * (barWidth + gap);
    const y = plotHeight - h;
    const color = PALETTE[i % PALETTE.length];
    parts.push(
      `<rect x="${x}" y="${y.toFixed(2)}" width="${barWidth}" ` +
        `height="${h.toFixed(2)}" fill="${color}" rx="1.5">` +
        `<title>${escapeHtml(bar.label)}</title></rect>`,
      `<text x="${x + barWidth / 2}" y="${(y - 3).toFixed(2)}" ` +
        `text-anchor="middle" class="bar-value">` +
        `${escapeHtml(bar.valueLabel ?? String(bar.value))}</text>`,
      `<text x="${x + barWidth / 2}" y="${plotHeight + 10}" ` +
        `text-anchor="middle" class="bar-label">${escapeHtml(bar.label)}</text>`,
    );
  });
  return (
    `<svg viewBox="0 0 ${width} ${plotHeight + 16}" class="bars" ` +
    `role="img">${parts.join("")}</svg>`
  );
}

export function lineChart(counts: number[]): string {
  if (counts.length === 0) {
    return emptyChart();
  }
  const width = 300;
  const height = 90;
  const pad = 8;
  const max = Math.max(...counts, 1);
  const step = (width - 2 * pad) / Math.max(counts.length - 1, 1);
  const points = counts
    .map((v, i) => {
      const x = pad + i * step;
      const y = height - pad - (v / max) * (height - 2 * pad);
      return `${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
  const baseline = `${pad},${height - pad} ${width - pad},${height - pad}`;
  return (
    `<svg viewBox="0 0 ${width} ${height}" class="line" role="img">` +
    `<polyline points="${baseline}" class="axis"></polyline>` +
    `<polyline points="${points}" class="series" fill="none"></polyline>` +
    `</svg>`
  );
}
