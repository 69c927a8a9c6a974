"""Layer-by-layer frame decoding and protocol labeling.

Decodes Ethernet II (one optional 802.1Q tag), raw-IP and Linux cooked
link layers, IPv4 (honoring IHL), IPv6 (walking the common extension
headers), then TCP/UDP/ICMP/ICMPv6. Malformed bytes never raise: a
decode failure at one layer degrades the packet to the label of the
deepest layer that did decode.
"""

import ipaddress
import struct
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .pcap import (
    LINKTYPE_ETHERNET,
    LINKTYPE_LINUX_SLL,
    LINKTYPE_RAW_IP,
    PacketRecord,
)

ETHERTYPE_IPV4 = 0x0800
ETHERTYPE_IPV6 = 0x86DD
ETHERTYPE_VLAN = 0x8100

# Labels for ethertypes we name but do not decode further.
ETHERTYPE_NAMES = {
    0x0806: "ARP",
    0x8035: "RARP",
    0x8100: "VLAN",  # only reachable as the inner type of a double tag
    0x8137: "IPX",
    0x8847: "MPLS",
    0x8848: "MPLS",
    0x8863: "PPPOE",
    0x8864: "PPPOE",
    0x888E: "EAPOL",
    0x88CC: "LLDP",
}

IPPROTO_ICMP = 1
IPPROTO_TCP = 6
IPPROTO_UDP = 17
IPPROTO_ICMPV6 = 58

# IPv6 extension headers we walk through: hop-by-hop, routing,
# fragment, destination options.
_IPV6_EXT_HEADERS = {0, 43, 44, 60}

TLS_CONTENT_TYPES = {20, 21, 22, 23}

PAYLOAD_PREVIEW_LEN = 64

_PORT_LABELS_RESOURCE = "port_labels.txt"


def load_port_labels(path=None) -> dict:
    """Port->label table from "port,label" lines; '#' starts a comment."""
    if path is None:
        text = (
            resources.files("cloudcap")
            .joinpath("data", _PORT_LABELS_RESOURCE)
            .read_text()
        )
    else:
        with open(path) as f:
            text = f.read()
    table = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            port_text, label = line.split(",", 1)
            port = int(port_text)
        except ValueError:
            raise ValueError(f"bad port-label line {lineno}: {line!r}")
        table[port] = label.strip()
    return table


@dataclass
class DissectedPacket:
    index: int
    ts_us: int
    frame_len: int
    src_addr: str = ""
    dst_addr: str = ""
    ip_version: Optional[int] = None  # 4, 6 or None
    transport: Optional[str] = None  # tcp|udp|icmp|icmpv6|other|None
    src_port: Optional[int] = None
    dst_port: Optional[int] = None
    protocol_label: str = "OTHER"
    is_tls: bool = False
    payload_preview: bytes = b""
    # full flag byte, cumulative OR'd into flows; 0 for non-TCP
    tcp_flags: int = 0


class DissectionContext:
    """Per-capture state: the port-label table and flow-sticky TLS flags.

    Owned by a single analysis job; never share across captures.
    """

    def __init__(self, port_labels: Optional[dict] = None):
        self.port_labels = port_labels if port_labels is not None else load_port_labels()
        self._tls_flows = set()

    def flow_tag(self, src_addr, src_port, dst_addr, dst_port):
        a = (src_addr, src_port)
        b = (dst_addr, dst_port)
        return (a, b) if a <= b else (b, a)

    def mark_tls(self, tag):
        self._tls_flows.add(tag)

    def seen_tls(self, tag) -> bool:
        return tag in self._tls_flows


def detect_tls(payload: bytes) -> bool:
    """Heuristic TLS record check on the first TCP payload bytes."""
    return (
        len(payload) >= 3
        and payload[0] in TLS_CONTENT_TYPES
        and payload[1] == 0x03
        and payload[2] <= 0x04
    )


def classify_protocol(
    *,
    is_tls: bool,
    transport: Optional[str],
    src_port: Optional[int],
    dst_port: Optional[int],
    ip_version: Optional[int],
    ethertype: Optional[int] = None,
    link_decoded: bool = False,
    port_labels: Optional[dict] = None,
) -> str:
    """Deepest applicable label, by fixed precedence.

    TLS > well-known-port label > transport name > IPV4/IPV6 >
    ethertype name > ETHERNET > OTHER. The destination port is
    consulted before the source port.
    """
    if is_tls:
        return "TLS"
    if transport in ("tcp", "udp"):
        table = port_labels if port_labels is not None else _DEFAULT_PORT_LABELS
        for port in (dst_port, src_port):
            label = table.get(port)
            if label is None:
                continue
            if label == "TLS":  # candidate only; needs the byte heuristic
                continue
            return label
        return transport.upper()
    if transport in ("icmp", "icmpv6"):
        return transport.upper()
    if ip_version is not None:
        return f"IPV{ip_version}"
    if ethertype is not None and ethertype in ETHERTYPE_NAMES:
        return ETHERTYPE_NAMES[ethertype]
    if link_decoded:
        return "ETHERNET"
    return "OTHER"


def dissect(
    record: PacketRecord,
    linktype: int,
    context: Optional[DissectionContext] = None,
) -> DissectedPacket:
    """Decode one captured frame into addresses, ports and a label."""
    if context is None:
        context = DissectionContext()
    p = DissectedPacket(
        index=record.index, ts_us=record.ts_us, frame_len=record.origlen
    )
    data = record.data
    ethertype = None
    link_decoded = False

    if linktype == LINKTYPE_ETHERNET:
        ethertype, payload = _decode_ethernet(data)
        link_decoded = ethertype is not None
    elif linktype == LINKTYPE_LINUX_SLL:
        ethertype, payload = _decode_sll(data)
        link_decoded = ethertype is not None
    elif linktype == LINKTYPE_RAW_IP:
        payload = data
        if data and data[0] >> 4 == 4:
            ethertype = ETHERTYPE_IPV4
        elif data and data[0] >> 4 == 6:
            ethertype = ETHERTYPE_IPV6
    else:
        # unsupported link layer: nothing decoded, label stays OTHER
        p.payload_preview = data[:PAYLOAD_PREVIEW_LEN]
        return p

    p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN] if payload else b""

    if ethertype == ETHERTYPE_IPV4:
        _decode_ipv4(p, payload, context)
    elif ethertype == ETHERTYPE_IPV6:
        _decode_ipv6(p, payload, context)

    p.protocol_label = classify_protocol(
        is_tls=p.is_tls,
        transport=p.transport,
        src_port=p.src_port,
        dst_port=p.dst_port,
        ip_version=p.ip_version,
        ethertype=ethertype,
        link_decoded=link_decoded,
        port_labels=context.port_labels,
    )
    return p


def _decode_ethernet(data: bytes):
    """-> (ethertype, payload) or (None, b'') when the frame is short."""
    if len(data) < 14:
        return None, b""
    (ethertype,) = struct.unpack(">H", data[12:14])
    offset = 14
    if ethertype == ETHERTYPE_VLAN:  # one optional 802.1Q tag
        if len(data) < 18:
            return None, b""
        (ethertype,) = struct.unpack(">H", data[16:18])
        offset = 18
    if ethertype < 0x0600:  # 802.3 length field, not Ethernet II
        return None, b""
    return ethertype, data[offset:]


def _decode_sll(data: bytes):
    """Linux cooked capture: 16-byte pseudo-header, protocol at offset 14."""
    if len(data) < 16:
        return None, b""
    (ethertype,) = struct.unpack(">H", data[14:16])
    return ethertype, data[16:]


def _decode_ipv4(p: DissectedPacket, buf: bytes, context: DissectionContext):
    if len(buf) < 20 or buf[0] >> 4 != 4:
        return
    ihl = buf[0] & 0x0F
    if ihl < 5 or ihl * 4 > len(buf):
        return
    total_len = struct.unpack(">H", buf[2:4])[0]
    if total_len < ihl * 4:
        return
    proto = buf[9]
    p.ip_version = 4
    p.src_addr = str(ipaddress.IPv4Address(buf[12:16]))
    p.dst_addr = str(ipaddress.IPv4Address(buf[16:20]))
    frag = struct.unpack(">H", buf[6:8])[0]
    payload = buf[ihl * 4 : min(len(buf), total_len)]
    p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN]
    if frag & 0x1FFF:  # non-first fragment: no transport header present
        return
    _decode_transport(p, proto, payload, ip_version=4, context=context)


def _decode_ipv6(p: DissectedPacket, buf: bytes, context: DissectionContext):
    if len(buf) < 40 or buf[0] >> 4 != 6:
        return
    payload_len = struct.unpack(">H", buf[4:6])[0]
    next_header = buf[6]
    p.ip_version = 6
    p.src_addr = str(ipaddress.IPv6Address(buf[8:24]))
    p.dst_addr = str(ipaddress.IPv6Address(buf[24:40]))
    payload = buf[40 : min(len(buf), 40 + payload_len)]
    p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN]

    # Walk the extension-header chain.
    while next_header in _IPV6_EXT_HEADERS:
        if len(payload) < 8:
            return
        if next_header == 44:  # fragment header: fixed 8 bytes
            offset = struct.unpack(">H", payload[2:4])[0] >> 3
            next_header = payload[0]
            payload = payload[8:]
            if offset:  # non-first fragment: transport unreachable
                p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN]
                return
            continue
        ext_len = 8 + payload[1] * 8
        if len(payload) < ext_len:
            return
        next_header = payload[0]
        payload = payload[ext_len:]

    p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN]
    _decode_transport(p, next_header, payload, ip_version=6, context=context)


def _decode_transport(p, proto, buf, ip_version, context):
    if proto == IPPROTO_TCP:
        _decode_tcp(p, buf, context)
    elif proto == IPPROTO_UDP:
        _decode_udp(p, buf)
    elif proto == IPPROTO_ICMP and ip_version == 4:
        _decode_icmp(p, buf, "icmp")
    elif proto == IPPROTO_ICMPV6 and ip_version == 6:
        _decode_icmp(p, buf, "icmpv6")
    else:
        p.transport = "other"


def _decode_tcp(p: DissectedPacket, buf: bytes, context: DissectionContext):
    if len(buf) < 20:
        return
    src_port, dst_port = struct.unpack(">HH", buf[:4])
    data_offset = buf[12] >> 4
    if data_offset < 5 or data_offset * 4 > len(buf):
        return
    payload = buf[data_offset * 4 :]
    p.transport = "tcp"
    p.src_port = src_port
    p.dst_port = dst_port
    p.tcp_flags = buf[13]
    p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN]

    tag = context.flow_tag(p.src_addr, src_port, p.dst_addr, dst_port)
    if detect_tls(payload):
        p.is_tls = True
        context.mark_tls(tag)
    elif not payload and 443 in (src_port, dst_port) and context.seen_tls(tag):
        p.is_tls = True  # flow-sticky: empty segment of a flagged TLS flow


def _decode_udp(p: DissectedPacket, buf: bytes):
    if len(buf) < 8:
        return
    src_port, dst_port, length = struct.unpack(">HHH", buf[:6])
    if length < 8:
        return
    p.transport = "udp"
    p.src_port = src_port
    p.dst_port = dst_port
    payload = buf[8 : min(len(buf), length)]
    p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN]


def _decode_icmp(p: DissectedPacket, buf: bytes, kind: str):
    if len(buf) < 4:
        return
    p.transport = kind
    payload = buf[8:] if len(buf) >= 8 else b""
    p.payload_preview = payload[:PAYLOAD_PREVIEW_LEN]


_DEFAULT_PORT_LABELS = load_port_labels()


# --- per-packet summary (the packets.ndjson line format) ---------------


def to_summary(p: DissectedPacket) -> dict:
    """Flat JSON-ready dict, one per packets.ndjson line."""
    return {
        "index": p.index,
        "ts_us": p.ts_us,
        "frame_len": p.frame_len,
        "src": p.src_addr,
        "dst": p.dst_addr,
        "ip_version": p.ip_version,
        "transport": p.transport,
        "src_port": p.src_port,
        "dst_port": p.dst_port,
        "protocol": p.protocol_label,
        "is_tls": p.is_tls,
        "tcp_flags": p.tcp_flags,
        "payload_hex": p.payload_preview.hex(),
    }


def from_summary(d: dict) -> DissectedPacket:
    return DissectedPacket(
        index=d["index"],
        ts_us=d["ts_us"],
        frame_len=d["frame_len"],
        src_addr=d["src"],
        dst_addr=d["dst"],
        ip_version=d["ip_version"],
        transport=d["transport"],
        src_port=d["src_port"],
        dst_port=d["dst_port"],
        protocol_label=d["protocol"],
        is_tls=d["is_tls"],
        tcp_flags=d["tcp_flags"],
        payload_preview=bytes.fromhex(d["payload_hex"]),
    )
