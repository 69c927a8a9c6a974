import struct

import pytest

from cloudcap.dissect import (
    DissectionContext,
    classify_protocol,
    detect_tls,
    dissect,
    from_summary,
    load_port_labels,
    to_summary,
)

from framebuild import eth, ipv4, ipv6, record, tcp, tls_record, udp

ARP_BODY = struct.pack(">HHBBH", 1, 0x0800, 6, 4, 1) + bytes(20)


def dissect_one(frame, linktype=1, ctx=None, **rec_kwargs):
    return dissect(record(frame, **rec_kwargs), linktype, ctx)


class TestLayers:
    def test_arp_frame(self):
        p = dissect_one(eth(0x0806, ARP_BODY))
        assert p.frame_len == 60
        assert p.ip_version is None
        assert p.transport is None
        assert p.protocol_label == "ARP"

    def test_mdns_packet(self):
        frame = eth(0x0800, ipv4("10.0.0.1", "224.0.0.251", 17,
                                 udp(5353, 5353, b"\x00" * 20)))
        p = dissect_one(frame)
        assert p.transport == "udp"
        assert (p.src_port, p.dst_port) == (5353, 5353)
        assert (p.src_addr, p.dst_addr) == ("10.0.0.1", "224.0.0.251")
        assert p.protocol_label == "MDNS"

    def test_invalid_ihl_degrades_to_ethernet(self):
        bad = ipv4("10.0.0.1", "10.0.0.2", 17, udp(1, 2), ihl=4)
        p = dissect_one(eth(0x0800, bad))
        assert p.ip_version is None
        assert p.src_addr == ""
        assert p.protocol_label == "ETHERNET"

    def test_unknown_ethertype_is_ethernet(self):
        p = dissect_one(eth(0x88B5, bytes(40)))
        assert p.protocol_label == "ETHERNET"

    def test_vlan_tag_is_stepped_over(self):
        frame = eth(0x0800, ipv4("10.0.0.1", "8.8.8.8", 17, udp(5000, 53, b"q")),
                    vlan=42)
        p = dissect_one(frame)
        assert p.protocol_label == "DNS"

    def test_short_frame_is_other(self):
        p = dissect_one(b"\x01\x02\x03", linktype=1)
        assert p.protocol_label == "OTHER"

    def test_unsupported_linktype_is_other(self):
        frame = eth(0x0800, ipv4("10.0.0.1", "8.8.8.8", 17, udp(5000, 53, b"q")))
        p = dissect_one(frame, linktype=105)
        assert p.protocol_label == "OTHER"
        assert p.ip_version is None

    def test_non_first_fragment_has_no_transport(self):
        frag = ipv4("10.0.0.1", "10.0.0.2", 17, bytes(64), flags_frag=185)
        p = dissect_one(eth(0x0800, frag))
        assert p.ip_version == 4
        assert p.transport is None
        assert p.protocol_label == "IPV4"

    def test_ipv6_hop_by_hop_then_udp(self):
        ext = struct.pack(">BB", 17, 0) + bytes(6)
        frame = eth(0x86DD, ipv6("fe80::1", "ff02::fb", 0,
                                 udp(5353, 5353, b"q"), ext=ext))
        p = dissect_one(frame)
        assert p.ip_version == 6
        assert p.transport == "udp"
        assert p.protocol_label == "MDNS"

    def test_icmpv6(self):
        frame = eth(0x86DD, ipv6("fe80::2", "fe80::1", 58,
                                 struct.pack(">BBHHH", 128, 0, 0, 1, 1)))
        p = dissect_one(frame)
        assert p.transport == "icmpv6"
        assert p.protocol_label == "ICMPV6"

    def test_other_ip_protocol(self):
        p = dissect_one(eth(0x0800, ipv4("10.0.0.1", "10.0.0.2", 47, bytes(16))))
        assert p.transport == "other"
        assert p.protocol_label == "IPV4"

    def test_truncated_tcp_header_degrades_to_ip(self):
        frame = eth(0x0800, ipv4("10.0.0.1", "10.0.0.2", 6, tcp(1000, 80, b"data")))
        p = dissect_one(frame[:44], origlen=len(frame))
        assert p.ip_version == 4
        assert p.transport is None
        assert p.src_port is None
        assert p.protocol_label == "IPV4"

    def test_payload_preview_capped_at_64(self):
        frame = eth(0x0800, ipv4("10.0.0.1", "10.0.0.2", 17,
                                 udp(9000, 9001, bytes(range(200)))))
        p = dissect_one(frame)
        assert p.payload_preview == bytes(range(64))

    def test_ethernet_padding_not_counted_as_payload(self):
        # 54-byte eth+ip+tcp padded to 60: the pad must not defeat the
        # empty-payload rule
        frame = eth(0x0800, ipv4("10.0.0.1", "10.0.0.2", 6, tcp(5000, 80, b"", flags=0x10)))
        assert len(frame) == 60
        p = dissect_one(frame)
        assert p.payload_preview == b""


class TestTlsDetection:
    def test_handshake_record(self):
        assert detect_tls(bytes([0x16, 0x03, 0x03, 0x00, 0x2F]) + bytes(47))

    def test_http_bytes_are_not_tls(self):
        assert not detect_tls(b"GET / HTTP/1.1\r\n")

    def test_short_payload(self):
        assert not detect_tls(b"\x16\x03")

    def test_bad_version_bytes(self):
        assert not detect_tls(bytes([0x16, 0x02, 0x01]))
        assert not detect_tls(bytes([0x16, 0x03, 0x05]))

    @pytest.mark.parametrize("content_type", [20, 21, 22, 23])
    def test_all_content_types(self, content_type):
        assert detect_tls(bytes([content_type, 0x03, 0x01]))

    def test_flow_sticky_empty_ack(self):
        # hand-traced session: ClientHello flags the flow, the following
        # empty ACK on 443 inherits the flag, a foreign flow does not
        ctx = DissectionContext()
        hello = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                                 tcp(51701, 443, tls_record(22, 1))))
        ack_same = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                                    tcp(51701, 443, b"", flags=0x10)))
        ack_reverse = eth(0x0800, ipv4("1.2.3.4", "10.0.0.2", 6,
                                       tcp(443, 51701, b"", flags=0x10)))
        ack_other = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                                     tcp(51999, 443, b"", flags=0x10)))
        assert dissect_one(hello, ctx=ctx).is_tls
        assert dissect_one(ack_same, ctx=ctx).is_tls
        assert dissect_one(ack_reverse, ctx=ctx).is_tls
        assert not dissect_one(ack_other, ctx=ctx).is_tls

    def test_sticky_requires_port_443(self):
        ctx = DissectionContext()
        hello = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                                 tcp(51701, 8443, tls_record(22, 1))))
        ack = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                               tcp(51701, 8443, b"", flags=0x10)))
        assert dissect_one(hello, ctx=ctx).is_tls
        assert not dissect_one(ack, ctx=ctx).is_tls

    def test_empty_ack_before_handshake_not_tls(self):
        ctx = DissectionContext()
        syn = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                               tcp(51701, 443, b"", flags=0x02)))
        assert not dissect_one(syn, ctx=ctx).is_tls

    def test_http_on_443_labels_tcp(self):
        frame = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                                 tcp(51702, 443, b"GET / HTTP/1.1\r\n\r\n")))
        p = dissect_one(frame)
        assert not p.is_tls
        assert p.protocol_label == "TCP"


class TestClassify:
    def test_tls_wins(self):
        frame = eth(0x0800, ipv4("10.0.0.2", "1.2.3.4", 6,
                                 tcp(51701, 443, tls_record())))
        assert dissect_one(frame).protocol_label == "TLS"

    def test_udp_53_is_dns(self):
        frame = eth(0x0800, ipv4("10.0.0.2", "8.8.8.8", 17, udp(50000, 53, b"q")))
        assert dissect_one(frame).protocol_label == "DNS"

    def test_ephemeral_tcp_falls_back_to_transport(self):
        frame = eth(0x0800, ipv4("10.0.0.2", "10.0.0.3", 6,
                                 tcp(49152, 49153, b"hello")))
        assert dissect_one(frame).protocol_label == "TCP"

    def test_direct_precedence_ladder(self):
        assert classify_protocol(is_tls=True, transport="tcp", src_port=1,
                                 dst_port=2, ip_version=4) == "TLS"
        assert classify_protocol(is_tls=False, transport="udp", src_port=53,
                                 dst_port=50000, ip_version=4) == "DNS"
        assert classify_protocol(is_tls=False, transport="icmp", src_port=None,
                                 dst_port=None, ip_version=4) == "ICMP"
        assert classify_protocol(is_tls=False, transport="other", src_port=None,
                                 dst_port=None, ip_version=6) == "IPV6"
        assert classify_protocol(is_tls=False, transport=None, src_port=None,
                                 dst_port=None, ip_version=None,
                                 ethertype=0x0806, link_decoded=True) == "ARP"
        assert classify_protocol(is_tls=False, transport=None, src_port=None,
                                 dst_port=None, ip_version=None,
                                 ethertype=0x9999, link_decoded=True) == "ETHERNET"
        assert classify_protocol(is_tls=False, transport=None, src_port=None,
                                 dst_port=None, ip_version=None) == "OTHER"

    def test_custom_port_table(self, tmp_path):
        table_file = tmp_path / "ports.txt"
        table_file.write_text("# custom\n9999,FancyProto\n")
        table = load_port_labels(table_file)
        ctx = DissectionContext(port_labels=table)
        frame = eth(0x0800, ipv4("10.0.0.2", "10.0.0.3", 17, udp(1234, 9999, b"x")))
        assert dissect_one(frame, ctx=ctx).protocol_label == "FancyProto"

    def test_bad_port_table_line(self, tmp_path):
        table_file = tmp_path / "ports.txt"
        table_file.write_text("not-a-port,X\n")
        with pytest.raises(ValueError):
            load_port_labels(table_file)


class TestInvariants:
    def test_deterministic(self):
        frame = eth(0x0800, ipv4("10.0.0.2", "8.8.8.8", 17, udp(50000, 53, b"q")))
        assert dissect_one(frame) == dissect_one(frame)

    def test_corpus_invariants(self, mixed_small_packets, radio_stream_packets):
        for packets in (mixed_small_packets, radio_stream_packets):
            tls_count = sum(p.is_tls for p in packets)
            tcp_count = sum(p.transport == "tcp" for p in packets)
            assert tls_count <= tcp_count
            for p in packets:
                assert p.protocol_label
                if p.is_tls:
                    assert p.transport == "tcp"
                has_ports = p.src_port is not None and p.dst_port is not None
                assert has_ports == (p.transport in ("tcp", "udp"))

    def test_frame_len_equals_origlen(self, corpus_dir):
        from cloudcap.pcap import PcapReader
        with open(corpus_dir / "mixed_small.pcap", "rb") as f:
            reader = PcapReader(f)
            ctx = DissectionContext()
            for rec in reader:
                assert dissect(rec, reader.header.linktype, ctx).frame_len == rec.origlen

    def test_summary_round_trip(self, mixed_small_packets):
        for p in mixed_small_packets:
            q = from_summary(to_summary(p))
            assert q.index == p.index
            assert q.ts_us == p.ts_us
            assert q.src_addr == p.src_addr
            assert q.transport == p.transport
            assert q.tcp_flags == p.tcp_flags
            assert q.payload_preview == p.payload_preview


def test_fidelity_against_builder_truth(corpus_dir, dissect_fixture_rows):
    """Every corpus packet's (src, dst, transport, ports) must equal the
    values the packets were constructed from."""
    from conftest import CORPUS_FILES, dissect_file

    checked = 0
    for name in CORPUS_FILES:
        for p in dissect_file(corpus_dir / name):
            row = dissect_fixture_rows[(name, p.index)]
            got = {
                "src": p.src_addr,
                "dst": p.dst_addr,
                "transport": p.transport or "",
                "src_port": "" if p.src_port is None else str(p.src_port),
                "dst_port": "" if p.dst_port is None else str(p.dst_port),
            }
            want = {k: row[k] for k in got}
            assert got == want, f"{name}[{p.index}]: {got} != {want}"
            checked += 1
    assert checked == len(dissect_fixture_rows)
