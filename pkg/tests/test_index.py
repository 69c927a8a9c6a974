import json
import time

import pytest

from cloudcap.service.index import (
    ArchiveEntry,
    CaptureIndex,
    CorruptIndex,
    InvalidTransition,
)


def entry(cid="aaaa000000000001", uploaded="2024-05-01T12:00:00.000000Z"):
    return ArchiveEntry(
        capture_id=cid, original_name="x.pcap", uploaded_at=uploaded,
        pcap_bytes=123,
    )


def test_put_then_restart_then_get(tmp_path):
    path = tmp_path / "index"
    idx = CaptureIndex(path)
    idx.put(entry())
    reopened = CaptureIndex(path)
    got = reopened.get("aaaa000000000001")
    assert got == idx.get("aaaa000000000001")
    assert got.status == "received"
    assert got.history[0]["status"] == "received"


def test_get_unknown_is_none(tmp_path):
    idx = CaptureIndex(tmp_path / "index")
    assert idx.get("ffff000000000000") is None


def test_scan_newest_first_ties_by_id(tmp_path):
    idx = CaptureIndex(tmp_path / "index")
    idx.put(entry("b" * 16, "2024-05-01T12:00:00.000000Z"))
    idx.put(entry("a" * 16, "2024-05-01T12:00:00.000000Z"))
    idx.put(entry("c" * 16, "2024-05-02T08:00:00.000000Z"))
    assert [e.capture_id for e in idx.scan()] == ["c" * 16, "a" * 16, "b" * 16]


def test_scan_1000_entries_under_100ms(tmp_path):
    idx = CaptureIndex(tmp_path / "index")
    # seed in bulk (scan speed is what's measured, not put throughput)
    for i in range(1000):
        e = entry(f"{i:016x}", f"2024-05-01T12:00:{i % 60:02d}.{i:06d}Z")
        idx._entries[e.capture_id] = e
    idx.put(entry("f" * 16, "2024-05-02T00:00:00.000000Z"))

    start = time.perf_counter()
    entries = CaptureIndex(tmp_path / "index").scan()  # includes reload
    elapsed = time.perf_counter() - start
    assert len(entries) == 1001
    assert elapsed < 0.1
    uploads = [e.uploaded_at for e in entries]
    assert uploads == sorted(uploads, reverse=True)


def test_forward_transitions_and_history(tmp_path):
    idx = CaptureIndex(tmp_path / "index")
    idx.put(entry())
    cid = "aaaa000000000001"
    for status in ("parsing", "analyzing", "complete"):
        idx.advance(cid, status, "2024-05-01T12:00:01.000000Z")
    got = idx.get(cid)
    assert got.status == "complete"
    seen = [h["status"] for h in got.history]
    assert seen == ["received", "parsing", "analyzing", "complete"]


def test_replayed_stage_is_noop(tmp_path):
    # crash recovery re-runs the pipeline from the top
    idx = CaptureIndex(tmp_path / "index")
    idx.put(entry())
    cid = "aaaa000000000001"
    idx.advance(cid, "parsing", "t1")
    idx.advance(cid, "analyzing", "t2")
    idx.advance(cid, "parsing", "t3", sha256="abc")  # replay
    got = idx.get(cid)
    assert got.status == "analyzing"
    assert got.sha256 == "abc"  # fields still applied
    assert [h["status"] for h in got.history] == ["received", "parsing", "analyzing"]


def test_any_state_can_fail_but_not_terminal(tmp_path):
    idx = CaptureIndex(tmp_path / "index")
    idx.put(entry())
    cid = "aaaa000000000001"
    idx.advance(cid, "failed", "t1", failure_reason="boom")
    assert idx.get(cid).status == "failed"
    with pytest.raises(InvalidTransition):
        idx.advance(cid, "parsing", "t2")

    idx.put(entry("bbbb000000000002"))
    for status in ("parsing", "analyzing", "complete"):
        idx.advance("bbbb000000000002", status, "t")
    with pytest.raises(InvalidTransition):
        idx.advance("bbbb000000000002", "failed", "t")


def test_history_never_revisits(tmp_path):
    idx = CaptureIndex(tmp_path / "index")
    idx.put(entry())
    cid = "aaaa000000000001"
    order = {"received": 0, "parsing": 1, "analyzing": 2, "complete": 3, "failed": 3}
    for status in ("parsing", "parsing", "analyzing", "complete"):
        idx.advance(cid, status, "t")
    ranks = [order[h["status"]] for h in idx.get(cid).history]
    assert ranks == sorted(ranks)
    assert len(set(h["status"] for h in idx.get(cid).history)) == len(ranks)


def test_corrupt_index_refused(tmp_path):
    path = tmp_path / "index"
    path.write_text("{this is not json")
    with pytest.raises(CorruptIndex):
        CaptureIndex(path)
    path.write_text(json.dumps({"version": 1}))  # missing entries
    with pytest.raises(CorruptIndex):
        CaptureIndex(path)


def test_no_tmp_file_left_behind(tmp_path):
    idx = CaptureIndex(tmp_path / "index")
    idx.put(entry())
    assert not (tmp_path / "index.tmp").exists()
