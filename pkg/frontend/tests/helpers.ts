import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import type { AnalysisReport, ArchiveEntry } from "../src/types.js";

const FIXTURE_PATH = fileURLToPath(
  new URL("../../tests/fixtures/mixed_small_report.json", import.meta.url),
);

export function fixtureReport(): AnalysisReport {
  return JSON.parse(readFileSync(FIXTURE_PATH, "utf8"));
}

export function entry(overrides: Partial<ArchiveEntry> = {}): ArchiveEntry {
  return {
    capture_id: "0123456789abcdef",
    original_name: "mixed_small.pcap",
    uploaded_at: "2024-05-01T12:00:00.000000Z",
    pcap_bytes: 6076,
    packet_count: 40,
    status: "complete",
    failure_reason: null,
    truncated: false,
    ...overrides,
  };
}

export interface ScriptedResponse {
  match: (method: string, url: string) => boolean;
  status: number;
  body: unknown;
  once?: boolean;
  fail?: boolean;
}

/** fetch stub fed by an ordered response script. */
export function makeFetch(script: ScriptedResponse[]) {
  const calls: { method: string; url: string; init?: RequestInit }[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    calls.push({ method, url, init });
    const i = script.findIndex((r) => r.match(method, url));
    if (i < 0) {
      throw new Error(`unscripted request: ${method} ${url}`);
    }
    const scripted = script[i];
    if (scripted.once) {
      script.splice(i, 1);
    }
    if (scripted.fail) {
      throw new TypeError("fetch failed");
    }
    return new Response(JSON.stringify(scripted.body), {
      status: scripted.status,
      headers: { "content-type": "application/json" },
    });
  };
  return { fetchFn, calls };
}
