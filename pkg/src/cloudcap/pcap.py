"""Classic pcap container reading and writing.

Layout: a 24-byte global header (magic, version, thiszone, sigfigs,
snaplen, linktype) followed by per-packet records, each a 16-byte
header (ts_sec, ts_frac, caplen, origlen) plus caplen data bytes.
All multi-byte fields use the byte order announced by the magic.
Reference: https://wiki.wireshark.org/Development/LibpcapFileFormat
"""

import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterator, Optional

MAGIC_MICRO_BE = 0xA1B2C3D4
MAGIC_MICRO_LE = 0xD4C3B2A1
MAGIC_NANO_BE = 0xA1B23C4D
MAGIC_NANO_LE = 0x4D3CB2A1
MAGIC_PCAPNG = 0x0A0D0D0A

GLOBAL_HEADER_LEN = 24
RECORD_HEADER_LEN = 16

# first four file bytes read big-endian -> (byte order, timestamp precision)
_MAGIC_TABLE = {
    MAGIC_MICRO_BE: ("big", "micro"),
    MAGIC_MICRO_LE: ("little", "micro"),
    MAGIC_NANO_BE: ("big", "nano"),
    MAGIC_NANO_LE: ("little", "nano"),
}

LINKTYPE_ETHERNET = 1
LINKTYPE_RAW_IP = 101
LINKTYPE_LINUX_SLL = 113


class PcapError(Exception):
    """Base class for pcap container errors."""


class UnknownMagic(PcapError):
    """First bytes are not a classic pcap magic number."""


class UnsupportedVersion(PcapError):
    """File announces a pcap version other than 2.4."""


class TruncatedRecord(PcapError):
    """The byte stream ends inside a packet record.

    ``records_read`` counts the complete records yielded before the
    truncation point, so callers can keep the good prefix.
    """

    def __init__(self, message: str, records_read: int):
        super().__init__(message)
        self.records_read = records_read


class RecordViolatesSnaplen(PcapError):
    """A record's caplen exceeds the file's snaplen."""


@dataclass
class PcapHeader:
    magic: int
    version_major: int
    version_minor: int
    snaplen: int
    linktype: int
    byte_order: str  # "big" | "little"
    ts_precision: str  # "micro" | "nano"
    # Reserved header words, kept so rewriting reproduces input bytes.
    thiszone: int = 0
    sigfigs: int = 0

    @property
    def endian(self) -> str:
        """struct prefix for this file's byte order."""
        return ">" if self.byte_order == "big" else "<"

    @classmethod
    def new(
        cls,
        snaplen: int = 262144,
        linktype: int = LINKTYPE_ETHERNET,
        byte_order: str = "little",
        ts_precision: str = "micro",
    ) -> "PcapHeader":
        """Header for writing a fresh capture file."""
        magic = {
            ("big", "micro"): MAGIC_MICRO_BE,
            ("little", "micro"): MAGIC_MICRO_LE,
            ("big", "nano"): MAGIC_NANO_BE,
            ("little", "nano"): MAGIC_NANO_LE,
        }[(byte_order, ts_precision)]
        return cls(magic, 2, 4, snaplen, linktype, byte_order, ts_precision)


@dataclass
class PacketRecord:
    index: int
    ts_sec: int
    ts_frac: int  # in the owning file's precision unit
    caplen: int
    origlen: int
    data: bytes
    # microseconds since epoch; nanosecond files are truncated, not rounded
    ts_us: Optional[int] = None

    def __post_init__(self):
        if self.ts_us is None:
            self.ts_us = self.ts_sec * 1_000_000 + self.ts_frac


def parse_header(bytes24: bytes) -> PcapHeader:
    """Decode a 24-byte pcap global header.

    Raises UnknownMagic for anything that is not classic pcap (with a
    pcapng-specific message when that magic is recognized) and
    UnsupportedVersion for versions other than 2.4.
    """
    if len(bytes24) != GLOBAL_HEADER_LEN:
        raise UnknownMagic(
            f"need {GLOBAL_HEADER_LEN} header bytes, got {len(bytes24)}"
        )
    (magic,) = struct.unpack(">I", bytes24[:4])
    if magic == MAGIC_PCAPNG:
        raise UnknownMagic("pcapng file detected; only classic pcap is supported")
    if magic not in _MAGIC_TABLE:
        raise UnknownMagic(f"unknown magic 0x{magic:08X}")
    byte_order, ts_precision = _MAGIC_TABLE[magic]
    e = ">" if byte_order == "big" else "<"
    vmaj, vmin, thiszone, sigfigs, snaplen, linktype = struct.unpack(
        e + "HHiIII", bytes24[4:]
    )
    if (vmaj, vmin) != (2, 4):
        raise UnsupportedVersion(f"pcap version {vmaj}.{vmin}, expected 2.4")
    return PcapHeader(
        magic=magic,
        version_major=vmaj,
        version_minor=vmin,
        snaplen=snaplen,
        linktype=linktype,
        byte_order=byte_order,
        ts_precision=ts_precision,
        thiszone=thiszone,
        sigfigs=sigfigs,
    )


class PcapReader:
    """Streams PacketRecords from a binary file object, one at a time.

    Never buffers more than a single record's data. Not safe for
    sharing between threads; open one reader per file.
    """

    def __init__(self, stream: BinaryIO):
        self._stream = stream
        self._records_read = 0
        head = stream.read(GLOBAL_HEADER_LEN)
        self.header = parse_header(head)

    @property
    def records_read(self) -> int:
        return self._records_read

    def next_packet(self) -> Optional[PacketRecord]:
        """Next record, or None exactly at EOF on a record boundary."""
        head = self._stream.read(RECORD_HEADER_LEN)
        if not head:
            return None
        if len(head) < RECORD_HEADER_LEN:
            raise TruncatedRecord(
                f"record {self._records_read}: header cut short "
                f"({len(head)} of {RECORD_HEADER_LEN} bytes)",
                self._records_read,
            )
        ts_sec, ts_frac, caplen, origlen = struct.unpack(
            self.header.endian + "IIII", head
        )
        # A caplen above snaplen (or origlen) cannot come from a sane
        # writer; treat the rest of the stream as a corrupt tail.
        if caplen > self.header.snaplen:
            raise TruncatedRecord(
                f"record {self._records_read}: caplen {caplen} exceeds "
                f"snaplen {self.header.snaplen}",
                self._records_read,
            )
        if caplen > origlen:
            raise TruncatedRecord(
                f"record {self._records_read}: caplen {caplen} exceeds "
                f"origlen {origlen}",
                self._records_read,
            )
        data = self._stream.read(caplen)
        if len(data) < caplen:
            raise TruncatedRecord(
                f"record {self._records_read}: data cut short "
                f"({len(data)} of {caplen} bytes)",
                self._records_read,
            )
        if self.header.ts_precision == "nano":
            ts_us = ts_sec * 1_000_000 + ts_frac // 1000
        else:
            ts_us = ts_sec * 1_000_000 + ts_frac
        record = PacketRecord(
            index=self._records_read,
            ts_sec=ts_sec,
            ts_frac=ts_frac,
            caplen=caplen,
            origlen=origlen,
            data=data,
            ts_us=ts_us,
        )
        self._records_read += 1
        return record

    def __iter__(self) -> Iterator[PacketRecord]:
        while True:
            record = self.next_packet()
            if record is None:
                return
            yield record


def write_pcap(header: PcapHeader, packets, sink: BinaryIO) -> int:
    """Write a pcap file; returns the byte count written.

    Preserves the header's byte order and timestamp precision, so
    parse -> write reproduces the original file byte for byte.
    """
    # The magic field holds the big-endian reading of the first four
    # file bytes, so it is always emitted big-endian verbatim.
    out = struct.pack(">I", header.magic) + struct.pack(
        header.endian + "HHiIII",
        header.version_major,
        header.version_minor,
        header.thiszone,
        header.sigfigs,
        header.snaplen,
        header.linktype,
    )
    sink.write(out)
    written = len(out)
    e = header.endian
    for record in packets:
        if len(record.data) != record.caplen:
            raise ValueError(
                f"record {record.index}: data length {len(record.data)} "
                f"!= caplen {record.caplen}"
            )
        if record.caplen > header.snaplen:
            raise RecordViolatesSnaplen(
                f"record {record.index}: caplen {record.caplen} exceeds "
                f"snaplen {header.snaplen}"
            )
        if record.caplen > record.origlen:
            raise ValueError(
                f"record {record.index}: caplen {record.caplen} exceeds "
                f"origlen {record.origlen}"
            )
        head = struct.pack(
            e + "IIII", record.ts_sec, record.ts_frac, record.caplen, record.origlen
        )
        sink.write(head)
        sink.write(record.data)
        written += RECORD_HEADER_LEN + record.caplen
    return written
