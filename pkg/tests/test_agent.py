import io
import json
import os
import stat

import pytest

from cloudcap.agent import main
from cloudcap.dissect import DissectionContext, dissect
from cloudcap.pcap import PcapReader
from cloudcap.service.app import create_app
from cloudcap.service.config import ServiceConfig

from conftest import CORPUS_DIR, dissect_file
from serverutil import LiveServer, StubServer

MIXED = CORPUS_DIR / "mixed_small.pcap"


def read_labels(path):
    ctx = DissectionContext()
    with open(path, "rb") as f:
        reader = PcapReader(f)
        return [dissect(r, reader.header.linktype, ctx).protocol_label
                for r in reader]


class TestCaptureFileMode:
    def test_dns_filter_keeps_exactly_dns(self, tmp_path):
        out = tmp_path / "dns.pcap"
        rc = main(["capture", "--input", str(MIXED), "--proto", "dns",
                   "--out", str(out)])
        assert rc == 0
        expected = sum(1 for p in dissect_file(MIXED)
                       if p.protocol_label == "DNS")
        labels = read_labels(out)
        assert len(labels) == expected > 0
        assert set(labels) == {"DNS"}

    def test_empty_filter_copies_byte_identical(self, tmp_path):
        out = tmp_path / "copy.pcap"
        rc = main(["capture", "--input", str(MIXED), "--out", str(out)])
        assert rc == 0
        assert out.read_bytes() == MIXED.read_bytes()

    def test_transport_filter_includes_app_protocols(self, tmp_path):
        out = tmp_path / "tcp.pcap"
        main(["capture", "--input", str(MIXED), "--proto", "tcp",
              "--out", str(out)])
        packets = dissect_file(MIXED)
        expected = sum(1 for p in packets if p.transport == "tcp")
        with open(out, "rb") as f:
            n = sum(1 for _ in PcapReader(f))
        assert n == expected

    def test_filtered_output_is_subsequence(self, tmp_path):
        out = tmp_path / "tls.pcap"
        main(["capture", "--input", str(MIXED), "--proto", "tls",
              "--out", str(out)])
        original = [r.data for r in PcapReader(io.BytesIO(MIXED.read_bytes()))]
        kept = [r.data for r in PcapReader(io.BytesIO(out.read_bytes()))]
        it = iter(original)
        assert all(any(data == o for o in it) for data in kept)

    def test_bad_magic_exits_3(self, tmp_path, capsys):
        bad = tmp_path / "bad.bin"
        bad.write_bytes(b"not a capture at all.....")
        rc = main(["capture", "--input", str(bad), "--out",
                   str(tmp_path / "x.pcap")])
        assert rc == 3
        assert "invalid input" in capsys.readouterr().err

    def test_truncated_input_keeps_prefix(self, tmp_path, capsys):
        cut = tmp_path / "cut.pcap"
        cut.write_bytes(MIXED.read_bytes()[:-30])
        out = tmp_path / "out.pcap"
        rc = main(["capture", "--input", str(cut), "--out", str(out)])
        assert rc == 0
        assert "warning" in capsys.readouterr().err
        with open(out, "rb") as f:
            assert sum(1 for _ in PcapReader(f)) == 39

    def test_usage_errors_exit_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["capture", "--input", str(MIXED), "--iface", "eth0",
                  "--out", str(tmp_path / "x.pcap")])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["capture", "--iface", "eth0", "--out", str(tmp_path / "x.pcap")])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["capture", "--input", str(MIXED), "--proto", "quic",
                  "--out", str(tmp_path / "x.pcap")])
        assert exc.value.code == 2


class TestCaptureSnifferMode:
    def test_missing_env_exits_3(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("CLOUDCAP_SNIFFER_CMD", raising=False)
        rc = main(["capture", "--iface", "eth0", "--duration", "1",
                   "--out", str(tmp_path / "x.pcap")])
        assert rc == 3
        assert "CLOUDCAP_SNIFFER_CMD" in capsys.readouterr().err

    def test_sniffer_not_found_exits_3(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CLOUDCAP_SNIFFER_CMD",
                           "/no/such/sniffer -i {iface} -w {out}")
        rc = main(["capture", "--iface", "eth0", "--duration", "1",
                   "--out", str(tmp_path / "x.pcap")])
        assert rc == 3

    def test_sniffer_nonzero_exit_reports_stderr(self, tmp_path, monkeypatch,
                                                 capsys):
        script = tmp_path / "failer.sh"
        script.write_text("#!/bin/sh\necho boom happened >&2\nexit 7\n")
        script.chmod(script.stat().st_mode | stat.S_IEXEC)
        monkeypatch.setenv("CLOUDCAP_SNIFFER_CMD", f"{script} {{out}}")
        rc = main(["capture", "--iface", "eth0", "--duration", "1",
                   "--out", str(tmp_path / "x.pcap")])
        assert rc == 3
        err = capsys.readouterr().err
        assert "exited with 7" in err
        assert "boom happened" in err

    def test_fake_sniffer_produces_filtered_output(self, tmp_path, monkeypatch):
        script = tmp_path / "fake_sniffer.sh"
        script.write_text(f"#!/bin/sh\ncp {MIXED} \"$1\"\n")
        script.chmod(script.stat().st_mode | stat.S_IEXEC)
        monkeypatch.setenv("CLOUDCAP_SNIFFER_CMD", f"{script} {{out}}")
        out = tmp_path / "sniffed.pcap"
        rc = main(["capture", "--iface", "eth0", "--duration", "1",
                   "--proto", "dns", "--out", str(out)])
        assert rc == 0
        assert set(read_labels(out)) == {"DNS"}

    def test_filter_expression_passed_to_sniffer(self, tmp_path, monkeypatch):
        record_file = tmp_path / "argv.txt"
        script = tmp_path / "recorder.sh"
        script.write_text(
            "#!/bin/sh\n"
            f"printf '%s\\n' \"$@\" > {record_file}\n"
            f"cp {MIXED} \"$3\"\n"
        )
        script.chmod(script.stat().st_mode | stat.S_IEXEC)
        monkeypatch.setenv("CLOUDCAP_SNIFFER_CMD",
                           f"{script} {{iface}} {{filter}} {{out}} {{duration}}")
        rc = main(["capture", "--iface", "wlan0", "--duration", "2",
                   "--proto", "dns,tls", "--out", str(tmp_path / "o.pcap")])
        assert rc == 0
        argv = record_file.read_text().splitlines()
        assert argv[0] == "wlan0"
        assert argv[1] == "port 53 or tcp port 443"
        assert argv[3] == "2.0"


class TestUpload:
    def test_rejected_4xx_no_retry(self, tmp_path, capsys):
        with StubServer([(422, {"error": "not_pcap", "message": "nope"})]) as stub:
            rc = main(["upload", "--server", stub.url, "--file", str(MIXED),
                       "--retry-base-s", "0.01"])
            assert rc == 6
            assert len(stub.requests) == 1  # terminal, not retried
        assert "rejected" in capsys.readouterr().err

    def test_5xx_retries_then_succeeds(self, tmp_path, capsys):
        script = [
            (503, {"error": "busy"}),
            (502, {"error": "busy"}),
            (201, {"capture_id": "ab" * 8, "status": "received"}),
        ]
        with StubServer(script) as stub:
            rc = main(["upload", "--server", stub.url, "--file", str(MIXED),
                       "--retries", "3", "--retry-base-s", "0.01"])
            assert rc == 0
            assert len(stub.requests) == 3
        assert "ab" * 8 in capsys.readouterr().out

    def test_connection_refused_exhausts_retries(self, capsys):
        rc = main(["upload", "--server", "http://127.0.0.1:9",
                   "--file", str(MIXED), "--retries", "1",
                   "--retry-base-s", "0.01"])
        assert rc == 6
        assert "after 1 retries" in capsys.readouterr().err


class TestWatch:
    def test_timeout_exits_5(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        entry = {"capture_id": "ab" * 8, "status": "analyzing"}
        with StubServer([(200, entry)] * 50) as stub:
            rc = main(["watch", "--server", stub.url, "--id", "ab" * 8,
                       "--interval", "0.02", "--timeout", "0.1"])
        assert rc == 5

    def test_failed_analysis_exits_4(self, capsys):
        entry = {"capture_id": "ab" * 8, "status": "failed",
                 "failure_reason": "not a pcap"}
        with StubServer([(200, entry)]) as stub:
            rc = main(["watch", "--server", stub.url, "--id", "ab" * 8])
        assert rc == 4
        assert "not a pcap" in capsys.readouterr().err

    def test_complete_saves_report(self, tmp_path, capsys):
        report = {
            "capture_id": "ab" * 8,
            "summary": {"total_packets": 5, "duration_s": 1.5},
            "protocols": [{"name": "DNS", "packets": 5, "percentage": 100.0}],
        }
        script = [
            (200, {"capture_id": "ab" * 8, "status": "received"}),
            (200, {"capture_id": "ab" * 8, "status": "complete"}),
            (200, report),
        ]
        out = tmp_path / "saved.json"
        with StubServer(script) as stub:
            rc = main(["watch", "--server", stub.url, "--id", "ab" * 8,
                       "--interval", "0.02", "--report-out", str(out)])
        assert rc == 0
        assert json.loads(out.read_text())["summary"]["total_packets"] == 5
        stdout = capsys.readouterr().out
        assert "5 packets" in stdout
        assert "DNS" in stdout


class TestRunPipeline:
    def test_run_against_live_service(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        config = ServiceConfig(data_dir=tmp_path / "data", workers=2)
        with LiveServer(create_app(config)) as server:
            out = tmp_path / "session.pcap"
            rc = main(["run", "--input", str(MIXED), "--proto", "udp",
                       "--out", str(out), "--server", server.url,
                       "--interval", "0.05", "--timeout", "30"])
            assert rc == 0
            report = json.loads((tmp_path / "session.report.json").read_text())
            with open(out, "rb") as f:
                uploaded = sum(1 for _ in PcapReader(f))
            assert report["summary"]["total_packets"] == uploaded > 0
