// Presentation helpers. These format values for display; they never
// compute statistics.

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

/** Hex payload grouped 16 bytes per line with a byte-offset gutter. */
export function hexDumpLines(payloadHex: string): string[] {
  const lines: string[] = [];
  for (let i = 0; i < payloadHex.length; i += 32) {
    const chunk = payloadHex.slice(i, i + 32);
    const pairs = chunk.match(/.{1,2}/g) ?? [];
    const offset = (i / 2).toString(16).padStart(4, "0");
    lines.push(`${offset}  ${pairs.join(" ")}`);
  }
  return lines;
}

export function percentLabel(value: number): string {
  return `${value.toFixed(2)}%`;
}

/** Local wall-clock rendering of the service's ISO-8601 UTC strings. */
export function shortTime(iso: string): string {
  return iso.replace("T", " ").replace(/\.\d+Z$/, " UTC");
}

const OPEN_ENDED_EDGE = 0xffffffff;

/** Labels for the fixed frame-size bins, e.g. "40-80", "5120+". */
export function binLabels(edges: number[]): string[] {
  const labels: string[] = [];
  for (let i = 0; i + 1 < edges.length; i++) {
    labels.push(
      edges[i + 1] >= OPEN_ENDED_EDGE
        ? `${edges[i]}+`
        : `${edges[i]}-${edges[i + 1]}`,
    );
  }
  return labels;
}
