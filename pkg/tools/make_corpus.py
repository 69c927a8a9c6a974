#!/usr/bin/env python3
"""Golden corpus builder.

Constructs every packet byte-by-byte with its own struct code and
writes pcap files with its own writer, so the corpus and its ground
truth stay independent of the library under test. For each packet the
builder records the intended (src, dst, transport, ports) into
dissect_fixture.csv; file digests go to checksums.txt via the system
sha256sum tool when present.

Deterministic: fixed seed, fixed base timestamps. Rerunning must
reproduce identical bytes.

Usage: python3 tools/make_corpus.py [outdir]   (default tests/corpus)
"""

import csv
import hashlib
import ipaddress
import random
import struct
import subprocess
import sys
from pathlib import Path

MAGICS = {
    ("big", "micro"): 0xA1B2C3D4,
    ("little", "micro"): 0xD4C3B2A1,
    ("big", "nano"): 0xA1B23C4D,
    ("little", "nano"): 0x4D3CB2A1,
}


def mac(s):
    return bytes.fromhex(s.replace(":", ""))


def ip4(s):
    return ipaddress.IPv4Address(s).packed


def ip6(s):
    return ipaddress.IPv6Address(s).packed


def checksum(b):
    if len(b) % 2:
        b += b"\x00"
    s = sum(struct.unpack(f">{len(b) // 2}H", b))
    while s >> 16:
        s = (s & 0xFFFF) + (s >> 16)
    return (~s) & 0xFFFF


def eth(src_mac, dst_mac, ethertype, payload, vlan=None, pad_to=60):
    frame = mac(dst_mac) + mac(src_mac)
    if vlan is not None:
        frame += struct.pack(">HH", 0x8100, vlan)
    frame += struct.pack(">H", ethertype) + payload
    if pad_to and len(frame) < pad_to:
        frame += bytes(pad_to - len(frame))
    return frame


def ipv4(src, dst, proto, payload, ttl=64, ident=1, flags_frag=0, options=b""):
    ihl = 5 + len(options) // 4
    total = ihl * 4 + len(payload)
    hdr = (
        struct.pack(
            ">BBHHHBBH", (4 << 4) | ihl, 0, total, ident, flags_frag, ttl, proto, 0
        )
        + ip4(src)
        + ip4(dst)
        + options
    )
    hdr = hdr[:10] + struct.pack(">H", checksum(hdr)) + hdr[12:]
    return hdr + payload


def ipv6(src, dst, next_header, payload, ext=b""):
    return (
        struct.pack(">IHBB", 0x60000000, len(ext) + len(payload), next_header, 64)
        + ip6(src)
        + ip6(dst)
        + ext
        + payload
    )


def hopbyhop_ext(inner_next):
    # next header, hdr-ext-len 0 (=8 bytes), PadN option filling the rest
    return struct.pack(">BB", inner_next, 0) + b"\x01\x04\x00\x00\x00\x00"


def tcp(sport, dport, payload=b"", flags=0x18, seq=1, ack=0, window=65535):
    return (
        struct.pack(">HHIIBBHHH", sport, dport, seq, ack, 5 << 4, flags, window, 0, 0)
        + payload
    )


def udp(sport, dport, payload, length=None):
    if length is None:
        length = 8 + len(payload)
    return struct.pack(">HHHH", sport, dport, length, 0) + payload


def icmp_echo(seq=1, reply=False, payload=b"abcdefgh"):
    body = struct.pack(">BBHHH", 0 if reply else 8, 0, 0, 0x4242, seq) + payload
    return body[:2] + struct.pack(">H", checksum(body)) + body[4:]


def icmpv6_echo(seq=1, reply=False, payload=b"abcdefgh"):
    # checksum left zero; dissection ignores it
    return struct.pack(">BBHHH", 129 if reply else 128, 0, 0, 0x4242, seq) + payload


def arp_request(sender_mac, sender_ip, target_ip):
    return (
        struct.pack(">HHBBH", 1, 0x0800, 6, 4, 1)
        + mac(sender_mac)
        + ip4(sender_ip)
        + mac("00:00:00:00:00:00")
        + ip4(target_ip)
    )


def dns_query(qname, txid=0x1234, qtype=1, response=False):
    flags = 0x8180 if response else 0x0100
    out = struct.pack(">HHHHHH", txid, flags, 1, 1 if response else 0, 0, 0)
    for part in qname.split("."):
        out += bytes([len(part)]) + part.encode()
    out += b"\x00" + struct.pack(">HH", qtype, 1)
    if response:
        out += b"\xc0\x0c" + struct.pack(">HHIH", 1, 1, 60, 4) + ip4("203.0.113.9")
    return out


def tls_record(content_type, version_minor, body):
    return struct.pack(">BBBH", content_type, 3, version_minor, len(body)) + body


HTTP_GET = b"GET / HTTP/1.1\r\nHost: example.net\r\nUser-Agent: corpus\r\n\r\n"
HTTP_OK = b"HTTP/1.1 200 OK\r\nContent-Length: 12\r\n\r\nhello corpus"

CLIENT_MAC = "aa:bb:cc:00:00:02"
GW_MAC = "aa:bb:cc:00:00:01"


class FileBuilder:
    """Accumulates packets plus their ground-truth dissection fields."""

    def __init__(self, name, linktype=1, byte_order="little", precision="micro",
                 snaplen=65535):
        self.name = name
        self.linktype = linktype
        self.byte_order = byte_order
        self.precision = precision
        self.snaplen = snaplen
        self.packets = []  # (ts_sec, ts_frac, data, origlen)
        self.truth = []  # rows for dissect_fixture.csv

    def add(self, ts_us, frame, src="", dst="", transport="", sport="", dport="",
            caplen=None, extra_ns=0):
        origlen = len(frame)
        data = frame if caplen is None else frame[:caplen]
        ts_sec, rem_us = divmod(ts_us, 1_000_000)
        if self.precision == "nano":
            ts_frac = rem_us * 1000 + extra_ns
        else:
            ts_frac = rem_us
        self.packets.append((ts_sec, ts_frac, data, origlen))
        self.truth.append(
            {
                "file": self.name,
                "index": len(self.packets) - 1,
                "src": src,
                "dst": dst,
                "transport": transport,
                "src_port": sport,
                "dst_port": dport,
            }
        )

    def write(self, outdir: Path):
        e = "<" if self.byte_order == "little" else ">"
        buf = struct.pack(">I", MAGICS[(self.byte_order, self.precision)])
        buf += struct.pack(e + "HHiIII", 2, 4, 0, 0, self.snaplen, self.linktype)
        for ts_sec, ts_frac, data, origlen in self.packets:
            buf += struct.pack(e + "IIII", ts_sec, ts_frac, len(data), origlen)
            buf += data
        (outdir / self.name).write_bytes(buf)
        return buf


def build_mixed_small():
    b = FileBuilder("mixed_small.pcap")
    t = 1714564800_000000  # 2024-05-01 12:00:00 UTC
    client, gw, dns_srv, web = "10.0.0.2", "10.0.0.1", "8.8.8.8", "93.184.216.34"
    web_mac = GW_MAC

    def tick(ms=50):
        nonlocal t
        t += ms * 1000
        return t

    # ARP lookup for the gateway
    b.add(t, eth(CLIENT_MAC, "ff:ff:ff:ff:ff:ff", 0x0806,
                 arp_request(CLIENT_MAC, client, gw)))

    # DNS query / response
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, dns_srv, 17, udp(51613, 53, dns_query("example.net")))),
          src=client, dst=dns_srv, transport="udp", sport=51613, dport=53)
    b.add(tick(20), eth(GW_MAC, CLIENT_MAC, 0x0800,
                        ipv4(dns_srv, client, 17,
                             udp(53, 51613, dns_query("example.net", response=True)))),
          src=dns_srv, dst=client, transport="udp", sport=53, dport=51613)

    # mDNS
    b.add(tick(), eth(CLIENT_MAC, "01:00:5e:00:00:fb", 0x0800,
                      ipv4(client, "224.0.0.251", 17,
                           udp(5353, 5353, dns_query("printer.local", qtype=12)))),
          src=client, dst="224.0.0.251", transport="udp", sport=5353, dport=5353)

    # HTTP session on port 80
    hs = [(0x02, client, web, 51700, 80, b""),       # SYN
          (0x12, web, client, 80, 51700, b""),       # SYN|ACK
          (0x10, client, web, 51700, 80, b""),       # ACK
          (0x18, client, web, 51700, 80, HTTP_GET),  # PSH|ACK
          (0x18, web, client, 80, 51700, HTTP_OK),
          (0x11, client, web, 51700, 80, b"")]       # FIN|ACK
    for flags, s, d, sp, dp, payload in hs:
        smac, dmac = (CLIENT_MAC, web_mac) if s == client else (web_mac, CLIENT_MAC)
        b.add(tick(30), eth(smac, dmac, 0x0800,
                            ipv4(s, d, 6, tcp(sp, dp, payload, flags=flags))),
              src=s, dst=d, transport="tcp", sport=sp, dport=dp)

    # TLS session on port 443: pre-handshake empty segments are not TLS,
    # post-ClientHello empty ACKs are flow-sticky TLS
    tls_flow = [(0x02, client, web, 51701, 443, b""),
                (0x12, web, client, 443, 51701, b""),
                (0x10, client, web, 51701, 443, b""),
                (0x18, client, web, 51701, 443,
                 tls_record(22, 1, b"\x01" + bytes(90))),          # ClientHello
                (0x18, web, client, 443, 51701,
                 tls_record(22, 3, b"\x02" + bytes(70))),          # ServerHello
                (0x10, client, web, 51701, 443, b""),              # sticky ACK
                (0x18, web, client, 443, 51701,
                 tls_record(23, 3, bytes(256))),                   # app data
                (0x10, client, web, 51701, 443, b"")]
    for flags, s, d, sp, dp, payload in tls_flow:
        smac, dmac = (CLIENT_MAC, web_mac) if s == client else (web_mac, CLIENT_MAC)
        b.add(tick(25), eth(smac, dmac, 0x0800,
                            ipv4(s, d, 6, tcp(sp, dp, payload, flags=flags))),
              src=s, dst=d, transport="tcp", sport=sp, dport=dp)

    # plain HTTP bytes on port 443: byte rule fails, label falls to TCP
    b.add(tick(), eth(CLIENT_MAC, web_mac, 0x0800,
                      ipv4(client, web, 6, tcp(51702, 443, HTTP_GET))),
          src=client, dst=web, transport="tcp", sport=51702, dport=443)

    # ephemeral-to-ephemeral TCP
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, gw, 6, tcp(49152, 49153, b"hello"))),
          src=client, dst=gw, transport="tcp", sport=49152, dport=49153)

    # ICMP echo pair
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, dns_srv, 1, icmp_echo())),
          src=client, dst=dns_srv, transport="icmp")
    b.add(tick(15), eth(GW_MAC, CLIENT_MAC, 0x0800,
                        ipv4(dns_srv, client, 1, icmp_echo(reply=True))),
          src=dns_srv, dst=client, transport="icmp")

    # ICMPv6 echo
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x86DD,
                      ipv6("fe80::2", "fe80::1", 58, icmpv6_echo())),
          src="fe80::2", dst="fe80::1", transport="icmpv6")

    # IPv6 TCP 443 carrying a TLS record
    v6c, v6s = "2001:db8::2", "2606:4700::6810:84e5"
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x86DD,
                      ipv6(v6c, v6s, 6,
                           tcp(52000, 443, tls_record(22, 1, b"\x01" + bytes(60))))),
          src=v6c, dst=v6s, transport="tcp", sport=52000, dport=443)

    # IPv6 UDP DNS
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x86DD,
                      ipv6(v6c, "2001:4860:4860::8888", 17,
                           udp(52001, 53, dns_query("example.org")))),
          src=v6c, dst="2001:4860:4860::8888", transport="udp", sport=52001, dport=53)

    # IPv6 with a hop-by-hop extension header, then UDP 5353
    b.add(tick(), eth(CLIENT_MAC, "33:33:00:00:00:fb", 0x86DD,
                      ipv6(v6c, "ff02::fb", 0,
                           udp(5353, 5353, dns_query("printer.local", qtype=28)),
                           ext=hopbyhop_ext(17))),
          src=v6c, dst="ff02::fb", transport="udp", sport=5353, dport=5353)

    # DHCP discover
    b.add(tick(), eth(CLIENT_MAC, "ff:ff:ff:ff:ff:ff", 0x0800,
                      ipv4("0.0.0.0", "255.255.255.255", 17,
                           udp(68, 67, bytes(240)))),
          src="0.0.0.0", dst="255.255.255.255", transport="udp", sport=68, dport=67)

    # SSDP
    b.add(tick(), eth(CLIENT_MAC, "01:00:5e:7f:ff:fa", 0x0800,
                      ipv4(client, "239.255.255.250", 17,
                           udp(54321, 1900, b"M-SEARCH * HTTP/1.1\r\n\r\n"))),
          src=client, dst="239.255.255.250", transport="udp", sport=54321, dport=1900)

    # NTP
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, "216.239.35.0", 17, udp(49000, 123, bytes(48)))),
          src=client, dst="216.239.35.0", transport="udp", sport=49000, dport=123)

    # fragmented UDP datagram: first fragment has the header, second none
    big = udp(40000, 9999, bytes(2000))
    first, rest = big[:1480], big[1480:]
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, gw, 17, first, ident=77, flags_frag=0x2000)),
          src=client, dst=gw, transport="udp", sport=40000, dport=9999)
    b.add(tick(5), eth(CLIENT_MAC, GW_MAC, 0x0800,
                       ipv4(client, gw, 17, rest, ident=77, flags_frag=1480 // 8)),
          src=client, dst=gw)

    # VLAN-tagged DNS query
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, dns_srv, 17, udp(51620, 53, dns_query("tagged.example"))),
                      vlan=42),
          src=client, dst=dns_srv, transport="udp", sport=51620, dport=53)

    # GRE inside IPv4: transport decodes as "other"
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, gw, 47, bytes(32))),
          src=client, dst=gw, transport="other")

    # LLDP and an experimental ethertype
    b.add(tick(), eth(CLIENT_MAC, "01:80:c2:00:00:0e", 0x88CC, bytes(40)))
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x88B5, bytes(40)))

    # IPv4 with options (IHL=6)
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, dns_srv, 17,
                           udp(51630, 53, dns_query("opts.example")),
                           options=b"\x01\x01\x01\x00")),
          src=client, dst=dns_srv, transport="udp", sport=51630, dport=53)

    # malformed: IHL=4 degrades the packet to the link layer
    bad_ip = ipv4(client, gw, 17, udp(1, 2, b""))
    bad_ip = bytes([(4 << 4) | 4]) + bad_ip[1:]
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800, bad_ip))

    # malformed: UDP length field below 8
    b.add(tick(), eth(CLIENT_MAC, GW_MAC, 0x0800,
                      ipv4(client, gw, 17, udp(40001, 9998, b"xx", length=4))),
          src=client, dst=gw)

    # snaplen-truncated TCP header: IP decodes, TCP does not
    full = eth(CLIENT_MAC, web_mac, 0x0800,
               ipv4(client, web, 6, tcp(51705, 80, b"cut off payload")))
    b.add(tick(), full, caplen=44, src=client, dst=web)

    # TCP data offset pointing past the captured bytes
    bad_tcp = struct.pack(">HHIIBBHHH", 51706, 80, 1, 0, 15 << 4, 0x18, 65535, 0, 0)
    b.add(tick(), eth(CLIENT_MAC, web_mac, 0x0800, ipv4(client, web, 6, bad_tcp)),
          src=client, dst=web)

    return b


def build_radio_stream():
    """~60 s TLS audio stream with DNS/mDNS sprinkles, ~2500 packets."""
    rng = random.Random(20240501)
    b = FileBuilder("radio_stream.pcap")
    t0 = 1714565000_000000
    client, server, dns_srv = "10.0.0.2", "151.101.2.133", "8.8.8.8"

    def add_tcp(ts, s, d, sp, dp, payload=b"", flags=0x10):
        smac, dmac = (CLIENT_MAC, GW_MAC) if s == client else (GW_MAC, CLIENT_MAC)
        b.add(ts, eth(smac, dmac, 0x0800, ipv4(s, d, 6, tcp(sp, dp, payload, flags=flags))),
              src=s, dst=d, transport="tcp", sport=sp, dport=dp)

    t = t0
    b.add(t, eth(CLIENT_MAC, GW_MAC, 0x0800,
                 ipv4(client, dns_srv, 17, udp(50100, 53, dns_query("stream.radio.example")))),
          src=client, dst=dns_srv, transport="udp", sport=50100, dport=53)
    t += 18_000
    b.add(t, eth(GW_MAC, CLIENT_MAC, 0x0800,
                 ipv4(dns_srv, client, 17,
                      udp(53, 50100, dns_query("stream.radio.example", response=True)))),
          src=dns_srv, dst=client, transport="udp", sport=53, dport=50100)

    sp = 50443
    t += 12_000
    add_tcp(t, client, server, sp, 443, flags=0x02)
    t += 9_000
    add_tcp(t, server, client, 443, sp, flags=0x12)
    t += 1_000
    add_tcp(t, client, server, sp, 443, flags=0x10)
    t += 2_000
    add_tcp(t, client, server, sp, 443, tls_record(22, 1, b"\x01" + bytes(180)), flags=0x18)
    t += 11_000
    add_tcp(t, server, client, 443, sp, tls_record(22, 3, b"\x02" + bytes(1100)), flags=0x18)
    t += 3_000
    add_tcp(t, client, server, sp, 443, tls_record(20, 3, b"\x01"), flags=0x18)
    t += 2_000
    add_tcp(t, server, client, 443, sp, tls_record(20, 3, b"\x01"), flags=0x18)

    end = t0 + 60_000_000
    next_dns = t0 + 5_000_000
    next_mdns = t0 + 10_000_000
    since_ack = 0
    while t < end:
        t += rng.randrange(28_000, 42_000)
        size = rng.randrange(1200, 1460)
        add_tcp(t, server, client, 443, sp,
                tls_record(23, 3, rng.randbytes(size)), flags=0x18)
        since_ack += 1
        if since_ack == 2:
            since_ack = 0
            t += rng.randrange(200, 900)
            add_tcp(t, client, server, sp, 443)  # empty ACK, sticky TLS
        if t >= next_dns:
            next_dns += 5_000_000
            q = f"cdn{rng.randrange(10)}.radio.example"
            b.add(t + 1000, eth(CLIENT_MAC, GW_MAC, 0x0800,
                                ipv4(client, dns_srv, 17, udp(50101, 53, dns_query(q)))),
                  src=client, dst=dns_srv, transport="udp", sport=50101, dport=53)
            b.add(t + 16_000, eth(GW_MAC, CLIENT_MAC, 0x0800,
                                  ipv4(dns_srv, client, 17,
                                       udp(53, 50101, dns_query(q, response=True)))),
                  src=dns_srv, dst=client, transport="udp", sport=53, dport=50101)
        if t >= next_mdns:
            next_mdns += 10_000_000
            b.add(t + 2000, eth(CLIENT_MAC, "01:00:5e:00:00:fb", 0x0800,
                                ipv4(client, "224.0.0.251", 17,
                                     udp(5353, 5353, dns_query("speaker.local", qtype=12)))),
                  src=client, dst="224.0.0.251", transport="udp", sport=5353, dport=5353)

    add_tcp(end + 50_000, client, server, sp, 443, flags=0x11)
    add_tcp(end + 60_000, server, client, 443, sp, flags=0x10)
    return b


def build_udp_gap():
    """Same 5-tuple with 2 s steps and one 20 s silence in the middle."""
    b = FileBuilder("udp_gap.pcap")
    t0 = 1714566000_000000
    for offset_s in (0, 2, 4, 24, 26):
        b.add(t0 + offset_s * 1_000_000,
              eth(CLIENT_MAC, GW_MAC, 0x0800,
                  ipv4("10.0.0.2", "10.0.0.9", 17, udp(40000, 9999, b"tick"))),
              src="10.0.0.2", dst="10.0.0.9", transport="udp", sport=40000, dport=9999)
    return b


def build_nano_be():
    b = FileBuilder("nano_be.pcap", byte_order="big", precision="nano")
    t0 = 1714567000_000000
    b.add(t0, eth(CLIENT_MAC, GW_MAC, 0x0800,
                  ipv4("10.0.0.2", "8.8.8.8", 17, udp(50200, 53, dns_query("nano.example")))),
          src="10.0.0.2", dst="8.8.8.8", transport="udp", sport=50200, dport=53,
          extra_ns=321)
    b.add(t0 + 200_000, eth(GW_MAC, CLIENT_MAC, 0x0800,
                            ipv4("8.8.8.8", "10.0.0.2", 17,
                                 udp(53, 50200, dns_query("nano.example", response=True)))),
          src="8.8.8.8", dst="10.0.0.2", transport="udp", sport=53, dport=50200,
          extra_ns=999)
    b.add(t0 + 400_000, eth(CLIENT_MAC, GW_MAC, 0x0800,
                            ipv4("10.0.0.2", "10.0.0.1", 6, tcp(50201, 8080, b"hi"))),
          src="10.0.0.2", dst="10.0.0.1", transport="tcp", sport=50201, dport=8080,
          extra_ns=1)
    return b


def build_raw_ip():
    b = FileBuilder("raw101.pcap", linktype=101)
    t0 = 1714568000_000000
    b.add(t0, ipv4("192.168.7.2", "192.168.7.1", 17, udp(50300, 53, dns_query("raw.example"))),
          src="192.168.7.2", dst="192.168.7.1", transport="udp", sport=50300, dport=53)
    b.add(t0 + 100_000, ipv6("2001:db8::7", "2001:db8::1", 6, tcp(50301, 80, HTTP_GET)),
          src="2001:db8::7", dst="2001:db8::1", transport="tcp", sport=50301, dport=80)
    return b


def build_sll():
    def sll(ethertype, payload):
        return struct.pack(">HHH8sH", 0, 1, 6, mac(CLIENT_MAC) + b"\x00\x00", ethertype) + payload

    b = FileBuilder("sll113.pcap", linktype=113)
    t0 = 1714569000_000000
    b.add(t0, sll(0x0800, ipv4("172.16.0.2", "172.16.0.1", 17,
                               udp(50400, 53, dns_query("sll.example")))),
          src="172.16.0.2", dst="172.16.0.1", transport="udp", sport=50400, dport=53)
    b.add(t0 + 150_000, sll(0x0800, ipv4("172.16.0.2", "172.16.0.1", 6,
                                         tcp(50401, 443, tls_record(22, 1, bytes(48))))),
          src="172.16.0.2", dst="172.16.0.1", transport="tcp", sport=50401, dport=443)
    return b


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/corpus")
    outdir.mkdir(parents=True, exist_ok=True)
    builders = [
        build_mixed_small(),
        build_radio_stream(),
        build_udp_gap(),
        build_nano_be(),
        build_raw_ip(),
        build_sll(),
    ]
    rows = []
    for b in builders:
        data = b.write(outdir)
        rows.extend(b.truth)
        print(f"{b.name}: {len(b.packets)} packets, {len(data)} bytes")

    with open(outdir / "dissect_fixture.csv", "w", newline="") as f:
        w = csv.DictWriter(
            f, fieldnames=["file", "index", "src", "dst", "transport",
                           "src_port", "dst_port"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)

    names = sorted(b.name for b in builders)
    try:
        out = subprocess.run(
            ["sha256sum", *names], cwd=outdir, check=True,
            capture_output=True, text=True).stdout
    except (OSError, subprocess.CalledProcessError):
        out = "".join(
            f"{hashlib.sha256((outdir / n).read_bytes()).hexdigest()}  {n}\n"
            for n in names)
    (outdir / "checksums.txt").write_text(out)
    print("fixtures written:", outdir / "dissect_fixture.csv", outdir / "checksums.txt")


if __name__ == "__main__":
    main()
