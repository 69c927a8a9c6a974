"""Per-capture statistics: six report datasets and canonical JSON.

All math runs on exact integer counts; percentages become hundredths
only at the edge. Serialization is canonical - fixed key order, fixed
decimal places - so identical inputs always produce identical bytes.
"""

import json
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, List, Optional

from .dissect import DissectedPacket
from .timeutil import iso_utc

FRAME_SIZE_EDGES = [0, 20, 40, 80, 160, 320, 640, 1280, 2560, 5120]
# stands in for the open upper edge; origlen is a u32 so nothing exceeds it
FRAME_SIZE_TOP = 0xFFFFFFFF

TOP_HOSTS = 10


@dataclass(frozen=True)
class Fixed:
    """Decimal rendered with an exact number of places in the JSON."""

    units: int  # value scaled by 10**places
    places: int

    def __str__(self) -> str:
        scale = 10 ** self.places
        sign = "-" if self.units < 0 else ""
        u = abs(self.units)
        return f"{sign}{u // scale}.{u % scale:0{self.places}d}"

    @property
    def value(self) -> float:
        return self.units / 10 ** self.places


def _percent_hundredths(num: int, den: int) -> int:
    """round-half-up hundredths of 100*num/den; 0 when den == 0."""
    if den == 0:
        return 0
    q, r = divmod(10000 * num, den)
    return q + (1 if 2 * r >= den else 0)


def _allocate_hundredths(counts: List[int], denominator: int) -> List[int]:
    """Largest-remainder split of 100.00% across counts.

    Requires sum(counts) == denominator; the result sums to exactly
    10000 hundredths, so displayed shares always add up to 100.00.
    """
    parts = [divmod(10000 * c, denominator) for c in counts]
    units = [q for q, _ in parts]
    leftover = 10000 - sum(units)
    by_remainder = sorted(range(len(counts)), key=lambda i: (-parts[i][1], i))
    for i in by_remainder[:leftover]:
        units[i] += 1
    return units


def total_packets(packets) -> int:
    return len(packets)


def host_shares(packets: Iterable[DissectedPacket]) -> List[dict]:
    """Top hosts by src+dst appearances over IP packets, plus "other"."""
    counts: dict = {}
    ip_packets = 0
    for p in packets:
        if p.ip_version is None:
            continue
        ip_packets += 1
        counts[p.src_addr] = counts.get(p.src_addr, 0) + 1
        counts[p.dst_addr] = counts.get(p.dst_addr, 0) + 1
    if not counts:
        return []
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = [{"address": a, "appearances": n} for a, n in ranked[:TOP_HOSTS]]
    rest = ranked[TOP_HOSTS:]
    if rest:
        entries.append({
            "address": "other",
            "appearances": sum(n for _, n in rest),
        })
    shares = _allocate_hundredths(
        [e["appearances"] for e in entries], 2 * ip_packets
    )
    for entry, units in zip(entries, shares):
        entry["percentage"] = Fixed(units, 2)
    return entries


def tls_share(packets) -> dict:
    tls_packets = sum(1 for p in packets if p.is_tls)
    return {
        "tls_packets": tls_packets,
        "percentage": Fixed(_percent_hundredths(tls_packets, len(packets)), 2),
    }


def protocol_breakdown(packets) -> List[dict]:
    counts: dict = {}
    for p in packets:
        counts[p.protocol_label] = counts.get(p.protocol_label, 0) + 1
    total = len(packets)
    return [
        {
            "name": name,
            "packets": n,
            "percentage": Fixed(_percent_hundredths(n, total), 2),
        }
        for name, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]


def frame_size_histogram(packets) -> dict:
    counts = [0] * (len(FRAME_SIZE_EDGES))
    for p in packets:
        counts[bisect_right(FRAME_SIZE_EDGES, p.frame_len) - 1] += 1
    return {"bin_edges": FRAME_SIZE_EDGES + [FRAME_SIZE_TOP], "counts": counts}


def packets_per_second(packets) -> dict:
    """1 s buckets anchored at the earliest packet's whole second."""
    if not packets:
        return {"start_ts": None, "counts": []}
    seconds = [p.ts_us // 1_000_000 for p in packets]
    start, last = min(seconds), max(seconds)
    counts = [0] * (last - start + 1)
    for s in seconds:
        counts[s - start] += 1
    return {"start_ts": iso_utc(start * 1_000_000), "counts": counts}


@dataclass
class AnalysisReport:
    capture_id: str
    generated_at: str
    truncated: bool
    summary: dict
    tls: dict
    hosts: List[dict]
    protocols: List[dict]
    frame_sizes: dict
    packets_per_second: dict

    def to_json_bytes(self) -> bytes:
        doc = {
            "capture_id": self.capture_id,
            "generated_at": self.generated_at,
            "truncated": self.truncated,
            "summary": self.summary,
            "tls": self.tls,
            "hosts": self.hosts,
            "protocols": self.protocols,
            "frame_sizes": self.frame_sizes,
            "packets_per_second": self.packets_per_second,
        }
        return _emit_json(doc).encode()


def build_report(
    capture_id: str,
    packets: List[DissectedPacket],
    truncated: bool = False,
    generated_at_us: Optional[int] = None,
) -> AnalysisReport:
    """Assemble all six datasets into one report.

    generated_at_us defaults to the capture's last timestamp so that
    rebuilding the same capture reproduces identical bytes.
    """
    n = len(packets)
    if generated_at_us is None:
        generated_at_us = max((p.ts_us for p in packets), default=0)
    first = min((p.ts_us for p in packets), default=None)
    last = max((p.ts_us for p in packets), default=None)
    summary = {
        "total_packets": n,
        "total_bytes": sum(p.frame_len for p in packets),
        "first_ts": iso_utc(first) if first is not None else None,
        "last_ts": iso_utc(last) if last is not None else None,
        "duration_s": Fixed(last - first if n else 0, 6),
    }
    return AnalysisReport(
        capture_id=capture_id,
        generated_at=iso_utc(generated_at_us),
        truncated=truncated,
        summary=summary,
        tls=tls_share(packets),
        hosts=host_shares(packets),
        protocols=protocol_breakdown(packets),
        frame_sizes=frame_size_histogram(packets),
        packets_per_second=packets_per_second(packets),
    )


def _emit_json(value) -> str:
    """Compact JSON with Fixed values rendered at their exact width."""
    if value is None:
        return "null"
    if isinstance(value, Fixed):
        return str(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_emit_json(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(
            f"{json.dumps(k)}:{_emit_json(v)}" for k, v in value.items()
        ) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")
