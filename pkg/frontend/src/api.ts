import type { AnalysisReport, ArchiveEntry, PacketPage } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let code = "error";
      let message = `${resp.status} ${resp.statusText}`;
      try {
        const body = await resp.json();
        if (body && typeof body.error === "string") {
          code = body.error;
          message = body.message ?? message;
        }
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(resp.status, code, message);
    }
    return resp;
  }

  async upload(
    body: BodyInit,
    filename: string,
  ): Promise<{ capture_id: string; status: string }> {
    const resp = await this.request("/api/v1/captures", {
      method: "POST",
      body,
      headers: { "X-Filename": filename },
    });
    return resp.json();
  }

  async listCaptures(): Promise<ArchiveEntry[]> {
    return (await this.request("/api/v1/captures")).json();
  }

  async getStatus(captureId: string): Promise<ArchiveEntry> {
    return (await this.request(`/api/v1/captures/${captureId}`)).json();
  }

  async getReport(captureId: string): Promise<AnalysisReport> {
    return (await this.request(`/api/v1/captures/${captureId}/report`)).json();
  }

  async getPackets(
    captureId: string,
    offset: number,
    limit: number,
  ): Promise<PacketPage> {
    const query = `offset=${offset}&limit=${limit}`;
    return (
      await this.request(`/api/v1/captures/${captureId}/packets?${query}`)
    ).json();
  }

  flowsUrl(captureId: string): string {
    return `${this.base}/api/v1/captures/${captureId}/flows`;
  }

  reportUrl(captureId: string): string {
    return `${this.base}/api/v1/captures/${captureId}/report`;
  }
}
