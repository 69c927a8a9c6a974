"""HTTP front-end: upload, status, report, packet pages, flow export.

All endpoints live under /api/v1 and return JSON except the flow CSV.
Errors come back as {"error": code, "message": text}.
"""

import json
import logging
import math
import secrets
import sys
from contextlib import asynccontextmanager
from itertools import islice

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from ..dissect import load_port_labels
from ..flows import (
    DEFAULT_ACTIVE_TIMEOUT_S,
    DEFAULT_IDLE_TIMEOUT_S,
    aggregate,
    export_flows,
    from_summaries_file,
)
from ..pcap import GLOBAL_HEADER_LEN, UnknownMagic, UnsupportedVersion, parse_header
from ..timeutil import iso_utc
from .config import ServiceConfig
from .index import ArchiveEntry, CaptureIndex, CorruptIndex
from .pipeline import now_iso, run_analysis
from .queue import JobQueue

log = logging.getLogger(__name__)

MAX_PAGE_LIMIT = 1000
DEFAULT_PAGE_LIMIT = 100


def api_error(status_code: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code, detail={"error": code, "message": message})


class AnalysisService:
    """Owns the index, the job queue and the disk layout."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        config.ensure_dirs()
        self.index = CaptureIndex(config.index_path)
        self.port_labels = load_port_labels(config.port_labels_path)
        self.queue = JobQueue(self._run_job, workers=config.workers)

    def _run_job(self, capture_id: str):
        run_analysis(capture_id, self.config, self.index, self.port_labels)

    def start(self):
        self.queue.start()
        self.recover_unfinished()

    def stop(self):
        self.queue.stop()

    def recover_unfinished(self):
        """Re-enqueue every capture a previous process left mid-pipeline."""
        for entry in self.index.scan():
            if entry.status in ("received", "parsing", "analyzing"):
                log.info("re-enqueueing unfinished capture %s", entry.capture_id)
                self.queue.submit(entry.capture_id)

    # -- request helpers -------------------------------------------------

    def entry_or_404(self, capture_id: str) -> ArchiveEntry:
        entry = self.index.get(capture_id)
        if entry is None:
            raise api_error(404, "unknown_id", f"no capture {capture_id}")
        return entry

    def complete_entry(self, capture_id: str) -> ArchiveEntry:
        entry = self.entry_or_404(capture_id)
        if entry.status != "complete":
            raise api_error(
                409, "not_ready",
                f"capture {capture_id} is {entry.status}, not complete",
            )
        return entry


def create_app(config: ServiceConfig = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    service = AnalysisService(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        service.start()
        try:
            yield
        finally:
            service.stop()

    app = FastAPI(title="cloudcap analysis service", lifespan=lifespan)
    app.state.service = service

    @app.exception_handler(HTTPException)
    async def error_shape(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"error": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.get("/healthz")
    @app.get("/api/v1/healthz")
    async def healthz():
        return PlainTextResponse("ok")

    @app.post("/api/v1/captures", status_code=201)
    async def upload_capture(request: Request):
        limit = config.max_upload_mb * 1024 * 1024
        capture_id = secrets.token_hex(8)
        part = config.staging_dir / f"{capture_id}.part"
        total = 0
        head = b""
        try:
            with open(part, "wb") as f:
                async for chunk in request.stream():
                    total += len(chunk)
                    if total > limit:
                        raise api_error(
                            413, "body_too_large",
                            f"upload exceeds {config.max_upload_mb} MB limit",
                        )
                    if len(head) < GLOBAL_HEADER_LEN:
                        head = (head + chunk)[:GLOBAL_HEADER_LEN]
                    f.write(chunk)
            if total == 0:
                raise api_error(400, "empty_body", "request body is empty")
            try:
                parse_header(head)
            except (UnknownMagic, UnsupportedVersion) as e:
                raise api_error(422, "not_pcap", str(e))
        except BaseException:
            part.unlink(missing_ok=True)
            raise
        part.replace(config.staging_dir / f"{capture_id}.pcap")

        entry = ArchiveEntry(
            capture_id=capture_id,
            original_name=request.headers.get("x-filename", "upload.pcap"),
            uploaded_at=now_iso(),
            pcap_bytes=total,
        )
        service.index.put(entry)
        service.queue.submit(capture_id)
        return {"capture_id": capture_id, "status": entry.status}

    @app.get("/api/v1/captures")
    def list_captures():
        return [e.to_api_dict() for e in service.index.scan()]

    @app.get("/api/v1/captures/{capture_id}")
    def get_status(capture_id: str):
        return service.entry_or_404(capture_id).to_api_dict()

    @app.get("/api/v1/captures/{capture_id}/report")
    def get_report(capture_id: str):
        service.complete_entry(capture_id)
        data = (config.capture_dir(capture_id) / "report.json").read_bytes()
        return Response(content=data, media_type="application/json")

    @app.get("/api/v1/captures/{capture_id}/packets")
    def get_packets(capture_id: str, offset: str = "0",
                    limit: str = str(DEFAULT_PAGE_LIMIT)):
        try:
            offset_n, limit_n = int(offset), int(limit)
        except ValueError:
            raise api_error(400, "bad_pagination", "offset/limit must be integers")
        if offset_n < 0 or limit_n < 1 or limit_n > MAX_PAGE_LIMIT:
            raise api_error(
                400, "bad_pagination",
                f"need offset >= 0 and 1 <= limit <= {MAX_PAGE_LIMIT}",
            )
        entry = service.complete_entry(capture_id)
        items = []
        with open(config.capture_dir(capture_id) / "packets.ndjson") as f:
            for line in islice(f, offset_n, offset_n + limit_n):
                s = json.loads(line)
                items.append({
                    "index": s["index"],
                    "timestamp": iso_utc(s["ts_us"]),
                    "src": s["src"],
                    "dst": s["dst"],
                    "protocol": s["protocol"],
                    "frame_len": s["frame_len"],
                    "payload_hex": s["payload_hex"],
                })
        return {
            "capture_id": capture_id,
            "total": entry.packet_count,
            "offset": offset_n,
            "limit": limit_n,
            "items": items,
        }

    @app.get("/api/v1/captures/{capture_id}/flows")
    def get_flows(capture_id: str, idle_timeout_s: str = None,
                  active_timeout_s: str = None):
        service.complete_entry(capture_id)
        capture_dir = config.capture_dir(capture_id)
        if idle_timeout_s is None and active_timeout_s is None:
            data = (capture_dir / "flows.csv").read_bytes()
            return Response(content=data, media_type="text/csv")
        try:
            idle = float(idle_timeout_s) if idle_timeout_s is not None else DEFAULT_IDLE_TIMEOUT_S
            active = float(active_timeout_s) if active_timeout_s is not None else DEFAULT_ACTIVE_TIMEOUT_S
        except ValueError:
            raise api_error(400, "non_positive_timeout",
                            "timeouts must be positive numbers")
        if not (math.isfinite(idle) and math.isfinite(active)) or idle <= 0 or active <= 0:
            raise api_error(400, "non_positive_timeout",
                            "timeouts must be positive numbers")
        if (idle, active) == (DEFAULT_IDLE_TIMEOUT_S, DEFAULT_ACTIVE_TIMEOUT_S):
            data = (capture_dir / "flows.csv").read_bytes()
            return Response(content=data, media_type="text/csv")
        packets = from_summaries_file(capture_dir / "packets.ndjson")
        data = export_flows(aggregate(packets, idle, active))
        return Response(content=data, media_type="text/csv")

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True))

    return app


def main():
    logging.basicConfig(level=logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    config = ServiceConfig.from_env()
    try:
        app = create_app(config)
    except CorruptIndex as e:
        print(f"refusing to start: {e}", file=sys.stderr)
        raise SystemExit(1)

    import uvicorn

    uvicorn.run(
        app,
        host="0.0.0.0",
        port=config.port,
        ssl_certfile=config.tls_cert,
        ssl_keyfile=config.tls_key,
        log_level="info",
    )


if __name__ == "__main__":
    main()
