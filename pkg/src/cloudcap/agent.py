"""Capture agent CLI: produce or take a pcap, filter it, upload it,
and follow the analysis to completion.

Commands: capture, upload, watch, and run (all three chained).
Exit codes: 0 ok, 2 usage, 3 capture error, 4 analysis failed,
5 timeout, 6 upload failed.
"""

import argparse
import json
import os
import shlex
import subprocess
import sys
import time
from pathlib import Path

import requests

from .dissect import DissectionContext, dissect
from .pcap import (
    PcapReader,
    TruncatedRecord,
    UnknownMagic,
    UnsupportedVersion,
    write_pcap,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPTURE = 3
EXIT_ANALYSIS = 4
EXIT_TIMEOUT = 5
EXIT_UPLOAD = 6

PROTO_CHOICES = ("tcp", "udp", "icmp", "dns", "tls")

# capture-time filter expressions handed to the sniffer subprocess
BPF_FRAGMENTS = {
    "tcp": "tcp",
    "udp": "udp",
    "icmp": "(icmp or icmp6)",
    "dns": "port 53",
    "tls": "tcp port 443",
}

SNIFFER_GRACE_S = 15


class AgentError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def packet_matches(p, protos: set) -> bool:
    if not protos:
        return True
    names = {p.protocol_label.lower()}
    if p.transport in ("tcp", "udp"):
        names.add(p.transport)
    elif p.transport in ("icmp", "icmpv6"):
        names.add("icmp")
    return bool(names & protos)


def filter_pcap(input_path, output_path, protos: set) -> tuple:
    """Copy records matching protos into a fresh pcap.

    A truncated input is kept to its complete prefix with a warning.
    Returns (records_read, records_kept).
    """
    context = DissectionContext()
    read = kept = 0
    try:
        src = open(input_path, "rb")
    except OSError as e:
        raise AgentError(f"cannot open {input_path}: {e}", EXIT_CAPTURE)
    with src:
        try:
            reader = PcapReader(src)
        except (UnknownMagic, UnsupportedVersion) as e:
            raise AgentError(f"invalid input: {e}", EXIT_CAPTURE)

        def selected():
            nonlocal read, kept
            while True:
                try:
                    record = reader.next_packet()
                except TruncatedRecord as e:
                    print(f"warning: {e}; keeping the first "
                          f"{e.records_read} records", file=sys.stderr)
                    return
                if record is None:
                    return
                read += 1
                if packet_matches(dissect(record, reader.header.linktype, context),
                                  protos):
                    kept += 1
                    yield record

        with open(output_path, "wb") as sink:
            write_pcap(reader.header, selected(), sink)
    return read, kept


def run_sniffer(iface: str, duration_s: float, protos: set, out_path: Path):
    """Launch the external sniffer configured via CLOUDCAP_SNIFFER_CMD."""
    template = os.environ.get("CLOUDCAP_SNIFFER_CMD")
    if not template:
        raise AgentError(
            "sniffer mode needs CLOUDCAP_SNIFFER_CMD "
            "(placeholders: {iface} {filter} {out} {duration})",
            EXIT_CAPTURE,
        )
    bpf = " or ".join(BPF_FRAGMENTS[p] for p in sorted(protos))
    argv = []
    for token in shlex.split(template):
        expanded = token.format(
            iface=iface, filter=bpf, out=str(out_path), duration=duration_s
        )
        if expanded or token != "{filter}":
            argv.append(expanded)
    try:
        proc = subprocess.run(
            argv, capture_output=True, timeout=duration_s + SNIFFER_GRACE_S
        )
    except FileNotFoundError:
        raise AgentError(f"sniffer not found: {argv[0]}", EXIT_CAPTURE)
    except subprocess.TimeoutExpired:
        raise AgentError(
            f"sniffer still running {SNIFFER_GRACE_S}s past its duration; killed",
            EXIT_CAPTURE,
        )
    if proc.returncode != 0:
        tail = proc.stderr.decode(errors="replace")[-400:].strip()
        raise AgentError(
            f"sniffer exited with {proc.returncode}: {tail}", EXIT_CAPTURE
        )
    if not out_path.exists():
        raise AgentError(f"sniffer wrote no capture at {out_path}", EXIT_CAPTURE)


def cmd_capture(args) -> Path:
    protos = set(args.proto)
    out = Path(args.out)
    if args.input:
        read, kept = filter_pcap(args.input, out, protos)
    else:
        sniffed = out.with_name(out.name + ".sniff")
        try:
            run_sniffer(args.iface, args.duration, protos, sniffed)
            # post-filter so file and sniffer mode behave identically
            read, kept = filter_pcap(sniffed, out, protos)
        finally:
            sniffed.unlink(missing_ok=True)
    print(f"captured {kept} of {read} packets into {out}")
    return out


def upload_file(server: str, path, retries: int = 3,
                retry_base_s: float = 1.0) -> str:
    url = server.rstrip("/") + "/api/v1/captures"
    attempt = 0
    while True:
        failure = None
        try:
            with open(path, "rb") as f:
                resp = requests.post(
                    url, data=f, timeout=60,
                    headers={"X-Filename": Path(path).name},
                )
        except requests.RequestException as e:
            failure = f"connection failed: {e}"
        else:
            if resp.status_code == 201:
                return resp.json()["capture_id"]
            if 400 <= resp.status_code < 500:  # 4xx is terminal, no retry
                raise AgentError(
                    f"server rejected upload ({resp.status_code}): {resp.text}",
                    EXIT_UPLOAD,
                )
            failure = f"server error {resp.status_code}"
        attempt += 1
        if attempt > retries:
            raise AgentError(
                f"upload failed after {retries} retries: {failure}", EXIT_UPLOAD
            )
        delay = retry_base_s * 2 ** (attempt - 1)
        print(f"upload attempt {attempt} failed ({failure}); "
              f"retrying in {delay:g}s", file=sys.stderr)
        time.sleep(delay)


def watch_capture(server: str, capture_id: str, interval_s: float = 2.0,
                  timeout_s: float = 120.0, out_path=None) -> Path:
    base = server.rstrip("/") + f"/api/v1/captures/{capture_id}"
    deadline = time.monotonic() + timeout_s
    while True:
        try:
            resp = requests.get(base, timeout=10)
        except requests.RequestException as e:
            raise AgentError(f"cannot reach server: {e}", EXIT_ANALYSIS)
        if resp.status_code == 404:
            raise AgentError(f"unknown capture id {capture_id}", EXIT_ANALYSIS)
        entry = resp.json()
        if entry["status"] == "failed":
            raise AgentError(
                f"analysis failed: {entry.get('failure_reason')}", EXIT_ANALYSIS
            )
        if entry["status"] == "complete":
            break
        now = time.monotonic()
        if now >= deadline:
            raise AgentError(
                f"capture still {entry['status']} after {timeout_s}s",
                EXIT_TIMEOUT,
            )
        time.sleep(min(interval_s, deadline - now))

    report_bytes = requests.get(base + "/report", timeout=30).content
    out = Path(out_path) if out_path else Path(f"{capture_id}.report.json")
    out.write_bytes(report_bytes)
    doc = json.loads(report_bytes)
    top = doc["protocols"][0]["name"] if doc["protocols"] else "none"
    print(f"{capture_id}: {doc['summary']['total_packets']} packets over "
          f"{doc['summary']['duration_s']}s, top protocol {top}")
    print(f"report saved to {out}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agent",
        description="capture, upload and track pcap analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_capture_args(p):
        p.add_argument("--input", help="existing pcap to filter/copy (file mode)")
        p.add_argument("--iface", help="interface for the sniffer subprocess")
        p.add_argument("--duration", type=float,
                       help="sniffer capture duration in seconds")
        p.add_argument("--proto", type=proto_list, default=[],
                       help=f"comma list of {','.join(PROTO_CHOICES)} (default all)")
        p.add_argument("--out", required=True, help="output pcap path")

    def add_server_arg(p):
        p.add_argument("--server", default=os.environ.get("CLOUDCAP_SERVER"),
                       help="service base URL (or CLOUDCAP_SERVER)")

    p_capture = sub.add_parser("capture", help="produce a filtered pcap")
    add_capture_args(p_capture)

    p_upload = sub.add_parser("upload", help="send a pcap for analysis")
    add_server_arg(p_upload)
    p_upload.add_argument("--file", required=True)
    p_upload.add_argument("--retries", type=int, default=3)
    p_upload.add_argument("--retry-base-s", type=float, default=1.0,
                          help="first retry delay; doubles each attempt")

    p_watch = sub.add_parser("watch", help="poll analysis and fetch the report")
    add_server_arg(p_watch)
    p_watch.add_argument("--id", required=True)
    p_watch.add_argument("--interval", type=float, default=2.0)
    p_watch.add_argument("--timeout", type=float, default=120.0)
    p_watch.add_argument("--report-out", help="report path "
                         "(default ./<id>.report.json)")

    p_run = sub.add_parser("run", help="capture, upload and watch in one go")
    add_capture_args(p_run)
    add_server_arg(p_run)
    p_run.add_argument("--retries", type=int, default=3)
    p_run.add_argument("--retry-base-s", type=float, default=1.0)
    p_run.add_argument("--interval", type=float, default=2.0)
    p_run.add_argument("--timeout", type=float, default=120.0)
    return parser


def proto_list(text: str):
    protos = [p.strip() for p in text.split(",") if p.strip()]
    for p in protos:
        if p not in PROTO_CHOICES:
            raise argparse.ArgumentTypeError(
                f"unknown protocol {p!r}; choose from {','.join(PROTO_CHOICES)}"
            )
    return protos


def validate_capture_args(parser, args):
    if args.input:
        if args.iface or args.duration is not None:
            parser.error("--input (file mode) excludes --iface/--duration")
    else:
        if not args.iface or args.duration is None:
            parser.error("sniffer mode needs both --iface and --duration")
        if args.duration <= 0:
            parser.error("--duration must be positive")


def require_server(parser, args):
    if not args.server:
        parser.error("--server or CLOUDCAP_SERVER is required")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "capture":
            validate_capture_args(parser, args)
            cmd_capture(args)
        elif args.command == "upload":
            require_server(parser, args)
            capture_id = upload_file(args.server, args.file, args.retries,
                                     args.retry_base_s)
            print(capture_id)
        elif args.command == "watch":
            require_server(parser, args)
            watch_capture(args.server, args.id, args.interval, args.timeout,
                          args.report_out)
        elif args.command == "run":
            validate_capture_args(parser, args)
            require_server(parser, args)
            pcap_path = cmd_capture(args)
            capture_id = upload_file(args.server, pcap_path, args.retries,
                                     args.retry_base_s)
            print(capture_id)
            watch_capture(args.server, capture_id, args.interval, args.timeout,
                          pcap_path.with_suffix(".report.json"))
    except AgentError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return EXIT_OK


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
