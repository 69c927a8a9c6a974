import csv
import io
from pathlib import Path

import pytest

from cloudcap.dissect import DissectionContext, dissect
from cloudcap.pcap import PcapReader

CORPUS_DIR = Path(__file__).parent / "corpus"
CORPUS_FILES = sorted(p.name for p in CORPUS_DIR.glob("*.pcap"))


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS_DIR


@pytest.fixture(scope="session")
def dissect_fixture_rows():
    """Builder ground truth: {(file, index): row} from dissect_fixture.csv."""
    rows = {}
    with open(CORPUS_DIR / "dissect_fixture.csv", newline="") as f:
        for row in csv.DictReader(f):
            rows[(row["file"], int(row["index"]))] = row
    return rows


def dissect_file(path):
    """Parse + dissect a capture with a fresh per-file context."""
    ctx = DissectionContext()
    with open(path, "rb") as f:
        reader = PcapReader(f)
        return [dissect(r, reader.header.linktype, ctx) for r in reader]


@pytest.fixture(scope="session")
def mixed_small_packets():
    return dissect_file(CORPUS_DIR / "mixed_small.pcap")


@pytest.fixture(scope="session")
def radio_stream_packets():
    return dissect_file(CORPUS_DIR / "radio_stream.pcap")
