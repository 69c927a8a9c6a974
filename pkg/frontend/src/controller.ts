// DOM-free application logic: routes, upload flow, status polling.
// main.ts supplies the render callback that paints the document.

import { ApiClient, ApiError } from "./api.js";
import { DEFAULT_PAGE_LIMIT, initialState, ViewState } from "./state.js";
import {
  AnalysisReport,
  ArchiveEntry,
  PacketPage,
  TERMINAL_STATUSES,
} from "./types.js";

export interface AppData {
  entries: ArchiveEntry[] | null;
  entry: ArchiveEntry | null;
  report: AnalysisReport | null;
  page: PacketPage | null;
  packetsNotReady: boolean;
  uploadError: { message: string; retryable: boolean } | null;
  loadError: string | null;
}

export interface PollOptions {
  intervalMs?: number;
  maxIntervalMs?: number;
  backoffAfterMs?: number;
}

export type RenderFn = (state: ViewState, data: AppData) => void;

const emptyData = (): AppData => ({
  entries: null,
  entry: null,
  report: null,
  page: null,
  packetsNotReady: false,
  uploadError: null,
  loadError: null,
});

export class AppController {
  state: ViewState = initialState();
  data: AppData = emptyData();

  private intervalMs: number;
  private maxIntervalMs: number;
  private backoffAfterMs: number;
  private pollToken = 0;
  private lastUpload: { body: BodyInit; name: string } | null = null;

  constructor(
    private client: ApiClient,
    private render: RenderFn,
    poll: PollOptions = {},
  ) {
    this.intervalMs = poll.intervalMs ?? 2000;
    this.maxIntervalMs = poll.maxIntervalMs ?? 10000;
    this.backoffAfterMs = poll.backoffAfterMs ?? 60000;
  }

  private paint(): void {
    this.render(this.state, this.data);
  }

  stopPolling(): void {
    this.pollToken++;
    this.state.polling = false;
  }

  async showArchive(): Promise<void> {
    this.stopPolling();
    this.state = { ...initialState() };
    this.data = emptyData();
    try {
      this.data.entries = await this.client.listCaptures();
    } catch (e) {
      this.data.loadError = describeError(e);
    }
    this.paint();
  }

  async openCapture(captureId: string): Promise<void> {
    this.stopPolling();
    this.state = {
      ...initialState(),
      route: "capture-detail",
      selectedCapture: captureId,
    };
    this.data = emptyData();
    let entry: ArchiveEntry;
    try {
      entry = await this.client.getStatus(captureId);
    } catch (e) {
      this.data.loadError = describeError(e);
      this.paint();
      return;
    }
    this.data.entry = entry;
    if (entry.status === "complete") {
      this.data.report = await this.client.getReport(captureId);
      this.paint();
    } else if (entry.status === "failed") {
      this.paint();
    } else {
      this.paint();
      this.startPolling(captureId);
    }
  }

  /** Poll until terminal; 2 s cadence, easing to 10 s after a minute. */
  private startPolling(captureId: string): void {
    const token = ++this.pollToken;
    this.state.polling = true;
    const startedAt = Date.now();

    const tick = async (): Promise<void> => {
      if (token !== this.pollToken) return;
      let entry: ArchiveEntry;
      try {
        entry = await this.client.getStatus(captureId);
      } catch {
        schedule(); // transient; keep watching
        return;
      }
      if (token !== this.pollToken) return;
      this.data.entry = entry;
      if (TERMINAL_STATUSES.has(entry.status)) {
        this.state.polling = false;
        if (entry.status === "complete") {
          this.data.report = await this.client.getReport(captureId);
        }
        this.paint();
        return;
      }
      this.paint();
      schedule();
    };

    const schedule = (): void => {
      const interval =
        Date.now() - startedAt >= this.backoffAfterMs
          ? this.maxIntervalMs
          : this.intervalMs;
      setTimeout(tick, interval);
    };

    schedule();
  }

  async uploadFile(body: BodyInit, name: string): Promise<void> {
    this.lastUpload = { body, name };
    this.data.uploadError = null;
    try {
      const { capture_id } = await this.client.upload(body, name);
      this.lastUpload = null;
      await this.openCapture(capture_id);
    } catch (e) {
      if (e instanceof ApiError) {
        const message =
          e.code === "not_pcap" ? `not a pcap file: ${e.message}` : e.message;
        // client mistakes are terminal; server trouble is worth a retry
        this.data.uploadError = { message, retryable: e.status >= 500 };
      } else {
        this.data.uploadError = {
          message: `upload failed: ${describeError(e)}`,
          retryable: true,
        };
      }
      this.paint();
    }
  }

  async retryUpload(): Promise<void> {
    if (this.lastUpload) {
      await this.uploadFile(this.lastUpload.body, this.lastUpload.name);
    }
  }

  async showPackets(
    captureId: string,
    offset = 0,
    limit: number = DEFAULT_PAGE_LIMIT,
  ): Promise<void> {
    this.stopPolling();
    this.state = {
      ...initialState(),
      route: "packet-inspector",
      selectedCapture: captureId,
      packetPage: { offset, limit },
    };
    this.data = emptyData();
    try {
      this.data.page = await this.client.getPackets(captureId, offset, limit);
    } catch (e) {
      if (e instanceof ApiError && e.status === 409) {
        this.data.packetsNotReady = true;
      } else {
        this.data.loadError = describeError(e);
      }
    }
    this.paint();
  }

  async nextPage(): Promise<void> {
    const { offset, limit } = this.state.packetPage;
    if (this.state.selectedCapture) {
      await this.showPackets(this.state.selectedCapture, offset + limit, limit);
    }
  }

  async prevPage(): Promise<void> {
    const { offset, limit } = this.state.packetPage;
    if (this.state.selectedCapture) {
      await this.showPackets(
        this.state.selectedCapture,
        Math.max(0, offset - limit),
        limit,
      );
    }
  }
}

function describeError(e: unknown): string {
  if (e instanceof ApiError) return e.message;
  if (e instanceof Error) return e.message;
  return String(e);
}
