"""Bidirectional flow aggregation over dissected packets.

A flow is keyed by the canonical 5-tuple (addresses ordered by their
packed bytes, then port), so both directions of a conversation land in
one record. Flows close on idle or active timeout and at end of input;
FIN/RST do not force closure.
"""

import csv
import io
import ipaddress
import json
from dataclasses import dataclass
from typing import Iterable, List, Optional

from .dissect import DissectedPacket, from_summary
from .timeutil import iso_utc

DEFAULT_IDLE_TIMEOUT_S = 15.0
DEFAULT_ACTIVE_TIMEOUT_S = 120.0

CSV_COLUMNS = [
    "flow_id",
    "src_ip",
    "src_port",
    "dst_ip",
    "dst_port",
    "protocol",
    "first_ts",
    "last_ts",
    "duration_s",
    "fwd_packets",
    "bwd_packets",
    "fwd_bytes",
    "bwd_bytes",
    "tcp_flags_hex",
    "is_tls",
]


@dataclass(frozen=True)
class FlowKey:
    addr_lo: str
    port_lo: int
    addr_hi: str
    port_hi: int
    transport: str


@dataclass
class FlowRecord:
    flow_id: int
    key: FlowKey
    initiator: str  # "lo_to_hi" | "hi_to_lo"
    first_ts_us: int
    last_ts_us: int
    fwd_packets: int = 0
    bwd_packets: int = 0
    fwd_bytes: int = 0
    bwd_bytes: int = 0
    tcp_flags: int = 0
    is_tls: bool = False

    @property
    def src_ip(self) -> str:
        return self.key.addr_lo if self.initiator == "lo_to_hi" else self.key.addr_hi

    @property
    def src_port(self) -> int:
        return self.key.port_lo if self.initiator == "lo_to_hi" else self.key.port_hi

    @property
    def dst_ip(self) -> str:
        return self.key.addr_hi if self.initiator == "lo_to_hi" else self.key.addr_lo

    @property
    def dst_port(self) -> int:
        return self.key.port_hi if self.initiator == "lo_to_hi" else self.key.port_lo


def flow_key(p: DissectedPacket) -> Optional[FlowKey]:
    """Canonical key for TCP/UDP packets; None for anything else."""
    if p.transport not in ("tcp", "udp"):
        return None
    a = (ipaddress.ip_address(p.src_addr).packed, p.src_port, p.src_addr)
    b = (ipaddress.ip_address(p.dst_addr).packed, p.dst_port, p.dst_addr)
    lo, hi = (a, b) if a[:2] <= b[:2] else (b, a)
    return FlowKey(
        addr_lo=lo[2], port_lo=lo[1], addr_hi=hi[2], port_hi=hi[1],
        transport=p.transport,
    )


def aggregate(
    packets: Iterable[DissectedPacket],
    idle_timeout_s: float = DEFAULT_IDLE_TIMEOUT_S,
    active_timeout_s: float = DEFAULT_ACTIVE_TIMEOUT_S,
) -> List[FlowRecord]:
    """Fold packets (in file order) into flows, ordered by first_ts then id."""
    if idle_timeout_s <= 0 or active_timeout_s <= 0:
        raise ValueError("timeouts must be positive")
    idle_us = int(idle_timeout_s * 1_000_000)
    active_us = int(active_timeout_s * 1_000_000)

    open_flows: dict = {}
    closed: List[FlowRecord] = []
    next_id = 0

    for p in packets:
        key = flow_key(p)
        if key is None:
            continue
        flow = open_flows.get(key)
        if flow is not None and (
            p.ts_us - flow.last_ts_us > idle_us
            or p.ts_us - flow.first_ts_us > active_us
        ):
            closed.append(open_flows.pop(key))
            flow = None
        if flow is None:
            initiator = "lo_to_hi" if (p.src_addr, p.src_port) == (key.addr_lo, key.port_lo) else "hi_to_lo"
            flow = FlowRecord(
                flow_id=next_id,
                key=key,
                initiator=initiator,
                first_ts_us=p.ts_us,
                last_ts_us=p.ts_us,
            )
            next_id += 1
            open_flows[key] = flow
        forward = (p.src_addr, p.src_port) == (flow.src_ip, flow.src_port)
        if forward:
            flow.fwd_packets += 1
            flow.fwd_bytes += p.frame_len
        else:
            flow.bwd_packets += 1
            flow.bwd_bytes += p.frame_len
        flow.first_ts_us = min(flow.first_ts_us, p.ts_us)
        flow.last_ts_us = max(flow.last_ts_us, p.ts_us)
        flow.tcp_flags |= p.tcp_flags
        flow.is_tls = flow.is_tls or p.is_tls

    closed.extend(open_flows.values())
    closed.sort(key=lambda f: (f.first_ts_us, f.flow_id))
    return closed


def from_summaries_file(path) -> List[DissectedPacket]:
    """Rehydrate dissected packets from a packets.ndjson file."""
    packets = []
    with open(path) as f:
        for line in f:
            if line.strip():
                packets.append(from_summary(json.loads(line)))
    return packets


def export_flows(flows: Iterable[FlowRecord]) -> bytes:
    """Deterministic CSV bytes, one row per flow."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for f in flows:
        w.writerow([
            f.flow_id,
            f.src_ip,
            f.src_port,
            f.dst_ip,
            f.dst_port,
            f.key.transport,
            iso_utc(f.first_ts_us),
            iso_utc(f.last_ts_us),
            f"{(f.last_ts_us - f.first_ts_us) / 1_000_000:.6f}",
            f.fwd_packets,
            f.bwd_packets,
            f.fwd_bytes,
            f.bwd_bytes,
            f"0x{f.tcp_flags:02x}",
            "true" if f.is_tls else "false",
        ])
    return out.getvalue().encode()
