import { TERMINAL_STATUSES } from "./types.js";

export type Route = "archive-list" | "capture-detail" | "packet-inspector";

export interface ViewState {
  route: Route;
  selectedCapture: string | null;
  polling: boolean;
  packetPage: { offset: number; limit: number };
}

export const DEFAULT_PAGE_LIMIT = 50;

export function initialState(): ViewState {
  return {
    route: "archive-list",
    selectedCapture: null,
    polling: false,
    packetPage: { offset: 0, limit: DEFAULT_PAGE_LIMIT },
  };
}

/** Throws when a state violates its own rules; used by tests and the
 * controller's debug path. */
export function checkState(state: ViewState, status?: string): void {
  if (state.route !== "archive-list" && !state.selectedCapture) {
    throw new Error(`route ${state.route} requires a selected capture`);
  }
  if (state.polling && status !== undefined && TERMINAL_STATUSES.has(status)) {
    throw new Error("polling must stop once the status is terminal");
  }
}
