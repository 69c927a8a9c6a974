"""Timestamp formatting shared by flow export and reports."""

from datetime import datetime, timezone


def iso_utc(ts_us: int) -> str:
    """Microseconds since epoch -> ISO-8601 UTC, e.g. 2024-05-01T12:00:00.000000Z."""
    sec, us = divmod(ts_us, 1_000_000)
    dt = datetime.fromtimestamp(sec, tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S") + f".{us:06d}Z"


def parse_iso_utc(text: str) -> int:
    """Inverse of iso_utc, back to microseconds since epoch."""
    dt = datetime.strptime(text, "%Y-%m-%dT%H:%M:%S.%fZ").replace(tzinfo=timezone.utc)
    return int(dt.timestamp()) * 1_000_000 + dt.microsecond
