"""Per-capture analysis job: ingest, parse, dissect, persist artifacts.

Artifact files are written to temp names and renamed into place, and
the entry only turns complete after all three exist, so a crash at any
point leaves a state the startup re-enqueue can finish from scratch.
"""

import hashlib
import json
import logging
import os
import time
from datetime import datetime, timezone
from pathlib import Path

from ..dissect import DissectionContext, dissect, to_summary
from ..flows import aggregate, export_flows
from ..pcap import PcapReader, TruncatedRecord, UnknownMagic, UnsupportedVersion
from ..stats import build_report
from ..timeutil import parse_iso_utc
from .config import ServiceConfig
from .index import CaptureIndex

log = logging.getLogger(__name__)

ARTIFACT_NAMES = ("raw.pcap", "report.json", "packets.ndjson", "flows.csv")


def now_iso() -> str:
    dt = datetime.now(timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S") + f".{dt.microsecond:06d}Z"


class StagingMissing(Exception):
    pass


def run_analysis(
    capture_id: str,
    config: ServiceConfig,
    index: CaptureIndex,
    port_labels: dict,
) -> str:
    """Run the capture's full pipeline; returns the terminal status."""
    entry = index.get(capture_id)
    if entry is None:
        raise KeyError(capture_id)
    try:
        index.advance(capture_id, "parsing", now_iso())
        raw_path = _ingest(capture_id, config, index)
        packets, truncated = _parse_and_dissect(raw_path, port_labels)
        index.advance(
            capture_id, "analyzing", now_iso(),
            packet_count=len(packets), truncated=truncated,
        )
        if config.analysis_delay_ms:
            time.sleep(config.analysis_delay_ms / 1000)
        _write_artifacts(capture_id, config, index, packets, truncated)
        index.advance(capture_id, "complete", now_iso())
        return "complete"
    except (UnknownMagic, UnsupportedVersion) as e:
        log.warning("analysis of %s failed: %s", capture_id, e)
        index.advance(capture_id, "failed", now_iso(),
                      failure_reason=f"not a pcap: {e}")
        return "failed"
    except Exception as e:
        log.warning("analysis of %s failed: %s", capture_id, e)
        reason = str(e) or type(e).__name__
        index.advance(capture_id, "failed", now_iso(), failure_reason=reason)
        return "failed"


def _ingest(capture_id: str, config: ServiceConfig, index: CaptureIndex) -> Path:
    """Move the staged upload into the archive and record its identity."""
    staged = config.staging_dir / f"{capture_id}.pcap"
    capture_dir = config.capture_dir(capture_id)
    raw_path = capture_dir / "raw.pcap"
    if staged.exists():
        capture_dir.mkdir(parents=True, exist_ok=True)
        os.replace(staged, raw_path)
    elif not raw_path.exists():  # re-runs after ingest are no-ops
        raise StagingMissing(f"no staged upload for {capture_id}")
    digest = hashlib.sha256()
    with open(raw_path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    index.advance(
        capture_id, "parsing", now_iso(),
        sha256=digest.hexdigest(), pcap_bytes=raw_path.stat().st_size,
    )
    return raw_path


def _parse_and_dissect(raw_path: Path, port_labels: dict):
    """Dissect every complete record; a truncated tail is tolerated when
    at least one record was read."""
    context = DissectionContext(port_labels=port_labels)
    packets = []
    truncated = False
    with open(raw_path, "rb") as f:
        reader = PcapReader(f)  # may raise UnknownMagic/UnsupportedVersion
        try:
            for record in reader:
                packets.append(dissect(record, reader.header.linktype, context))
        except TruncatedRecord as e:
            if e.records_read == 0:
                raise  # nothing analyzable
            truncated = True
    return packets, truncated


def _write_artifacts(capture_id, config, index, packets, truncated):
    capture_dir = config.capture_dir(capture_id)
    capture_dir.mkdir(parents=True, exist_ok=True)
    entry = index.get(capture_id)

    lines = [json.dumps(to_summary(p), separators=(",", ":")) for p in packets]
    _atomic_write(capture_dir / "packets.ndjson",
                  ("\n".join(lines) + "\n").encode() if lines else b"")

    report = build_report(
        capture_id, packets, truncated=truncated,
        generated_at_us=parse_iso_utc(entry.uploaded_at),
    )
    _atomic_write(capture_dir / "report.json", report.to_json_bytes())

    _atomic_write(capture_dir / "flows.csv", export_flows(aggregate(packets)))


def _atomic_write(path: Path, data: bytes):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(data)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def artifacts_present(capture_dir: Path) -> bool:
    return all((capture_dir / name).exists() for name in ARTIFACT_NAMES)
