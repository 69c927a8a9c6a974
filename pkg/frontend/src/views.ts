// Pure HTML renderers plus the report view-model.
//
// The view-model is a straight copy of service response fields: the
// dashboard displays numbers, it never recomputes them. Tests pin that
// by comparing every view-model value against the stubbed response.

import { barChart, donutChart, lineChart, PALETTE } from "./charts.js";
import { binLabels, escapeHtml, hexDumpLines, percentLabel, shortTime } from "./format.js";
import type { AnalysisReport, ArchiveEntry, PacketPage } from "./types.js";

export function statusBadge(entry: ArchiveEntry): string {
  const title =
    entry.status === "failed" && entry.failure_reason
      ? ` title="${escapeHtml(entry.failure_reason)}"`
      : "";
  return `<span class="badge ${entry.status}"${title}>${entry.status}</span>`;
}

export function archiveListView(entries: ArchiveEntry[]): string {
  if (entries.length === 0) {
    return (
      `<div class="empty-state">No captures yet. ` +
      `Upload a pcap to begin.</div>`
    );
  }
  const rows = entries
    .map(
      (e) => `
      <tr class="archive-row" data-action="open-capture" data-id="${e.capture_id}">
        <td>${statusBadge(e)}</td>
        <td class="name">${escapeHtml(e.original_name)}</td>
        <td><code>${e.capture_id}</code></td>
        <td>${shortTime(e.uploaded_at)}</td>
        <td class="num">${e.pcap_bytes} B</td>
        <td class="num">${e.packet_count ?? "–"}</td>
      </tr>`,
    )
    .join("");
  return `
    <table class="archive">
      <thead><tr>
        <th>status</th><th>name</th><th>id</th><th>uploaded</th>
        <th>size</th><th>packets</th>
      </tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

// --- report ------------------------------------------------------------

export interface ReportViewModel {
  totalPackets: number;
  totalBytes: number;
  durationS: number;
  firstTs: string | null;
  lastTs: string | null;
  truncated: boolean;
  tlsPackets: number;
  tlsPercentage: number;
  hosts: { address: string; appearances: number; percentage: number }[];
  protocols: { name: string; packets: number; percentage: number }[];
  frameBins: { label: string; count: number }[];
  ppsStart: string | null;
  ppsCounts: number[];
}

/** Field-for-field copy of the report; no arithmetic on values. */
export function reportViewModel(report: AnalysisReport): ReportViewModel {
  return {
    totalPackets: report.summary.total_packets,
    totalBytes: report.summary.total_bytes,
    durationS: report.summary.duration_s,
    firstTs: report.summary.first_ts,
    lastTs: report.summary.last_ts,
    truncated: report.truncated,
    tlsPackets: report.tls.tls_packets,
    tlsPercentage: report.tls.percentage,
    hosts: report.hosts.map((h) => ({
      address: h.address,
      appearances: h.appearances,
      percentage: h.percentage,
    })),
    protocols: report.protocols.map((p) => ({
      name: p.name,
      packets: p.packets,
      percentage: p.percentage,
    })),
    frameBins: binLabels(report.frame_sizes.bin_edges).map((label, i) => ({
      label,
      count: report.frame_sizes.counts[i],
    })),
    ppsStart: report.packets_per_second.start_ts,
    ppsCounts: report.packets_per_second.counts,
  };
}

export function reportView(vm: ReportViewModel): string {
  const hostsLegend = vm.hosts
    .map(
      (h, i) => `
      <li><span class="swatch" style="background:${PALETTE[i % PALETTE.length]}"></span>
        <code>${escapeHtml(h.address)}</code>
        <span class="num">${h.appearances}</span>
        <span class="pct">${percentLabel(h.percentage)}</span></li>`,
    )
    .join("");
  const hostsDonut = donutChart(
    vm.hosts.map((h, i) => ({
      label: `${h.address} ${percentLabel(h.percentage)}`,
      value: h.percentage,
      color: PALETTE[i % PALETTE.length],
    })),
    String(vm.hosts.length),
  );
  // remainder slice is geometry only; the displayed number is the field
  const tlsDonut = donutChart(
    [
      { label: `TLS ${percentLabel(vm.tlsPercentage)}`, value: vm.tlsPercentage, color: PALETTE[0] },
      { label: "non-TLS", value: 100 - vm.tlsPercentage, color: "#e3e6ea" },
    ],
    percentLabel(vm.tlsPercentage),
  );
  const protocolBars = barChart(
    vm.protocols.map((p) => ({
      label: p.name,
      value: p.packets,
      valueLabel: String(p.packets),
    })),
  );
  const frameBars = barChart(
    vm.frameBins.map((b) => ({
      label: b.label,
      value: b.count,
      valueLabel: String(b.count),
    })),
  );
  const ppsLine = lineChart(vm.ppsCounts);

  return `
    <div class="cards">
      <div class="card stat-card">
        <h3>Total packets</h3>
        <div class="stat-number" data-stat="total-packets">${vm.totalPackets}</div>
        <dl class="stat-details">
          <dt>bytes</dt><dd data-stat="total-bytes">${vm.totalBytes}</dd>
          <dt>duration</dt><dd data-stat="duration">${vm.durationS} s</dd>
          <dt>first</dt><dd>${vm.firstTs ? shortTime(vm.firstTs) : "–"}</dd>
          <dt>last</dt><dd>${vm.lastTs ? shortTime(vm.lastTs) : "–"}</dd>
        </dl>
        ${vm.truncated ? `<span class="chip warn">truncated capture</span>` : ""}
      </div>
      <div class="card">
        <h3>SSL/TLS packets</h3>
        ${tlsDonut}
        <p class="legend-line">TLS <span class="num" data-stat="tls-packets">${vm.tlsPackets}</span>
          packets, <span class="pct" data-stat="tls-percentage">${percentLabel(vm.tlsPercentage)}</span></p>
      </div>
      <div class="card">
        <h3>Hosts</h3>
        ${hostsDonut}
        <ul class="legend">${hostsLegend}</ul>
      </div>
      <div class="card">
        <h3>Protocols</h3>
        ${protocolBars}
      </div>
      <div class="card">
        <h3>Frame sizes</h3>
        ${frameBars}
      </div>
      <div class="card wide">
        <h3>Packets per second</h3>
        ${ppsLine}
        <p class="legend-line">${vm.ppsStart ? `from ${shortTime(vm.ppsStart)}` : "no traffic"}</p>
      </div>
    </div>`;
}

// --- capture detail shell ----------------------------------------------

export function captureDetailView(
  entry: ArchiveEntry,
  reportHtml: string | null,
  flowsUrl: string,
  reportUrl: string,
): string {
  const inProgress = !["complete", "failed"].includes(entry.status);
  return `
    <section class="detail">
      <header class="detail-header">
        <a href="#/" data-action="back">&larr; captures</a>
        <h2>${escapeHtml(entry.original_name)} ${statusBadge(entry)}</h2>
        <div class="meta">
          <code>${entry.capture_id}</code> ·
          ${shortTime(entry.uploaded_at)} ·
          <span class="num">${entry.pcap_bytes} B</span>
          ${entry.packet_count !== null ? `· <span class="num">${entry.packet_count}</span> packets` : ""}
        </div>
        <nav class="detail-links">
          <a href="#/capture/${entry.capture_id}/packets">packet inspector</a>
          <a href="${flowsUrl}" download>flows.csv</a>
          <a href="${reportUrl}" download>report.json</a>
        </nav>
      </header>
      ${
        entry.status === "failed"
          ? `<div class="panel error">analysis failed: ${escapeHtml(entry.failure_reason ?? "unknown reason")}</div>`
          : ""
      }
      ${
        inProgress
          ? `<div class="panel progress" data-live="polling">
               <span class="spinner"></span> analysis in progress — ${entry.status}…
             </div>`
          : ""
      }
      ${reportHtml ?? ""}
    </section>`;
}

// --- packet inspector ----------------------------------------------------

export function packetInspectorView(
  captureId: string,
  page: PacketPage | null,
  notReady: boolean,
): string {
  if (notReady) {
    return `
      <section class="inspector">
        <a href="#/capture/${captureId}" data-action="back">&larr; capture</a>
        <div class="panel progress">analysis in progress — packets are not
        available yet</div>
      </section>`;
  }
  if (!page) {
    return "";
  }
  const rows = page.items
    .map(
      (item) => `
      <tr class="packet-row" data-action="toggle-payload" data-index="${item.index}">
        <td class="num">${item.index}</td>
        <td>${shortTime(item.timestamp)}</td>
        <td><code>${escapeHtml(item.src)}</code></td>
        <td><code>${escapeHtml(item.dst)}</code></td>
        <td>${escapeHtml(item.protocol)}</td>
        <td class="num">${item.frame_len}</td>
      </tr>
      <tr class="payload-row hidden" data-payload-for="${item.index}">
        <td colspan="6"><pre class="hexdump">${
          item.payload_hex
            ? escapeHtml(hexDumpLines(item.payload_hex).join("\n"))
            : "(no payload captured)"
        }</pre></td>
      </tr>`,
    )
    .join("");
  const prevDisabled = page.offset <= 0 ? " disabled" : "";
  const nextDisabled = page.offset + page.limit >= page.total ? " disabled" : "";
  return `
    <section class="inspector">
      <a href="#/capture/${captureId}" data-action="back">&larr; capture</a>
      <h2>Packets <span class="muted">${page.total} total</span></h2>
      <table class="packets">
        <thead><tr>
          <th>#</th><th>time</th><th>source</th><th>destination</th>
          <th>protocol</th><th>length</th>
        </tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <footer class="pager">
        <button data-action="prev-page"${prevDisabled}>&larr; previous</button>
        <span>${page.offset}–${page.offset + page.items.length} of ${page.total}</span>
        <button data-action="next-page"${nextDisabled}>next &rarr;</button>
      </footer>
    </section>`;
}

// --- upload feedback -----------------------------------------------------

export function uploadErrorView(message: string, retryable: boolean): string {
  return `
    <div class="panel error upload-error">
      ${escapeHtml(message)}
      ${retryable ? `<button data-action="retry-upload">retry</button>` : ""}
    </div>`;
}
