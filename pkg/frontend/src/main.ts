// Browser bootstrap: hash routing, event delegation, DOM painting.

import { ApiClient } from "./api.js";
import { AppController, AppData } from "./controller.js";
import { escapeHtml } from "./format.js";
import { ViewState } from "./state.js";
import {
  archiveListView,
  captureDetailView,
  packetInspectorView,
  reportView,
  reportViewModel,
  uploadErrorView,
} from "./views.js";

async function apiBase(): Promise<string> {
  try {
    const resp = await fetch("./config.json");
    if (resp.ok) {
      const cfg = await resp.json();
      if (typeof cfg.api_base === "string") return cfg.api_base;
    }
  } catch {
    // same-origin default
  }
  return "";
}

function layout(state: ViewState, data: AppData, client: ApiClient): string {
  const pieces: string[] = [];
  if (data.uploadError) {
    pieces.push(uploadErrorView(data.uploadError.message, data.uploadError.retryable));
  }
  if (data.loadError) {
    pieces.push(`<div class="panel error">${escapeHtml(data.loadError)}</div>`);
  }
  if (state.route === "archive-list") {
    pieces.push(archiveListView(data.entries ?? []));
  } else if (state.route === "capture-detail" && data.entry) {
    const reportHtml = data.report ? reportView(reportViewModel(data.report)) : null;
    pieces.push(
      captureDetailView(
        data.entry,
        reportHtml,
        client.flowsUrl(data.entry.capture_id),
        client.reportUrl(data.entry.capture_id),
      ),
    );
  } else if (state.route === "packet-inspector" && state.selectedCapture) {
    pieces.push(
      packetInspectorView(state.selectedCapture, data.page, data.packetsNotReady),
    );
  }
  return pieces.join("\n");
}

function routeFromHash(hash: string): { route: string; id?: string; packets?: boolean } {
  const m = hash.match(/^#\/capture\/([0-9a-f]{16})(\/packets)?/);
  if (m) return { route: "capture", id: m[1], packets: Boolean(m[2]) };
  return { route: "archive" };
}

async function start(): Promise<void> {
  const client = new ApiClient(await apiBase());
  const app = document.getElementById("app")!;
  const fileInput = document.getElementById("file-input") as HTMLInputElement;

  const controller = new AppController(client, (state, data) => {
    app.innerHTML = layout(state, data, client);
    const wanted =
      state.route === "archive-list"
        ? "#/"
        : state.route === "capture-detail"
          ? `#/capture/${state.selectedCapture}`
          : `#/capture/${state.selectedCapture}/packets`;
    if (location.hash !== wanted) {
      history.replaceState(null, "", wanted);
    }
  });

  const dispatch = (): void => {
    const target = routeFromHash(location.hash);
    if (target.route === "capture" && target.id) {
      if (target.packets) {
        void controller.showPackets(target.id);
      } else {
        void controller.openCapture(target.id);
      }
    } else {
      void controller.showArchive();
    }
  };

  window.addEventListener("hashchange", dispatch);

  document.getElementById("upload-button")!.addEventListener("click", () => {
    fileInput.click();
  });
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (file) {
      void controller.uploadFile(file, file.name);
      fileInput.value = "";
    }
  });

  app.addEventListener("click", (event) => {
    const el = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!el) return;
    switch (el.dataset.action) {
      case "open-capture":
        location.hash = `#/capture/${el.dataset.id}`;
        break;
      case "retry-upload":
        void controller.retryUpload();
        break;
      case "next-page":
        void controller.nextPage();
        break;
      case "prev-page":
        void controller.prevPage();
        break;
      case "toggle-payload": {
        const row = app.querySelector(
          `[data-payload-for="${el.dataset.index}"]`,
        );
        row?.classList.toggle("hidden");
        break;
      }
    }
  });

  dispatch();
}

void start();
