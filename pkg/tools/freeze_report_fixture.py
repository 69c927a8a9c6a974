#!/usr/bin/env python3
"""Freeze the golden report fixture for mixed_small.pcap.

Run only after the stats oracle tests are green; the frozen bytes then
pin the canonical serialization against regressions.
"""

from pathlib import Path

from cloudcap.dissect import DissectionContext, dissect
from cloudcap.pcap import PcapReader
from cloudcap.stats import build_report

ROOT = Path(__file__).parent.parent
CORPUS = ROOT / "tests" / "corpus" / "mixed_small.pcap"
OUT = ROOT / "tests" / "fixtures" / "mixed_small_report.json"


def main():
    ctx = DissectionContext()
    with open(CORPUS, "rb") as f:
        reader = PcapReader(f)
        packets = [dissect(r, reader.header.linktype, ctx) for r in reader]
    report = build_report(
        "0123456789abcdef", packets, truncated=False,
        generated_at_us=1_714_564_800_000_000,
    )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_bytes(report.to_json_bytes())
    print(f"wrote {OUT} ({OUT.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
