// Wire formats of the analysis service (/api/v1). Field names mirror
// the JSON exactly; the dashboard never derives numbers from them,
// it only displays them.

export type CaptureStatus =
  | "received"
  | "parsing"
  | "analyzing"
  | "complete"
  | "failed";

export const TERMINAL_STATUSES: ReadonlySet<string> = new Set([
  "complete",
  "failed",
]);

export interface ArchiveEntry {
  capture_id: string;
  original_name: string;
  uploaded_at: string;
  pcap_bytes: number;
  packet_count: number | null;
  status: CaptureStatus;
  failure_reason: string | null;
  truncated: boolean;
}

export interface ReportSummary {
  total_packets: number;
  total_bytes: number;
  first_ts: string | null;
  last_ts: string | null;
  duration_s: number;
}

export interface HostShare {
  address: string;
  appearances: number;
  percentage: number;
}

export interface ProtocolCount {
  name: string;
  packets: number;
  percentage: number;
}

export interface AnalysisReport {
  capture_id: string;
  generated_at: string;
  truncated: boolean;
  summary: ReportSummary;
  tls: { tls_packets: number; percentage: number };
  hosts: HostShare[];
  protocols: ProtocolCount[];
  frame_sizes: { bin_edges: number[]; counts: number[] };
  packets_per_second: { start_ts: string | null; counts: number[] };
}

export interface PacketItem {
  index: number;
  timestamp: string;
  src: string;
  dst: string;
  protocol: string;
  frame_len: number;
  payload_hex: string;
}

export interface PacketPage {
  capture_id: string;
  total: number;
  offset: number;
  limit: number;
  items: PacketItem[];
}
