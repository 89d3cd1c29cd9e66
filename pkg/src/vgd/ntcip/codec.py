"""SNMPv1-subset BER codec for the signal controller wire protocol.

Supported: version 0 messages carrying GetRequest / GetResponse /
SetRequest PDUs whose values are Integer, OctetString, or Null. Encoding
is deterministic BER with definite, minimal lengths and minimal
two's-complement integers, so equal messages are byte-identical. Decoding
is strict: trailing bytes, indefinite or non-minimal lengths, non-minimal
OID arcs, and unknown tags are all rejected with a byte offset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TAG_INTEGER = 0x02
TAG_OCTET_STRING = 0x04
TAG_NULL = 0x05
TAG_OID = 0x06
TAG_SEQUENCE = 0x30

GET_REQUEST = "GetRequest"
GET_RESPONSE = "GetResponse"
SET_REQUEST = "SetRequest"

PDU_TAGS = {GET_REQUEST: 0xA0, GET_RESPONSE: 0xA2, SET_REQUEST: 0xA3}
PDU_BY_TAG = {tag: name for name, tag in PDU_TAGS.items()}

NO_ERROR = 0
NO_SUCH_NAME = 2
BAD_VALUE = 3
GEN_ERR = 5
ERROR_STATUSES = (NO_ERROR, NO_SUCH_NAME, BAD_VALUE, GEN_ERR)

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1
MAX_ARC = 2**32 - 1


class CodecError(ValueError):
    """Base for message construction and codec failures."""


class EncodeError(CodecError):
    """Message cannot be represented in the wire subset."""


class DecodeError(CodecError):
    """Byte stream rejected; ``offset`` locates the offending byte."""

    def __init__(self, offset: int, reason: str):
        super().__init__(f"offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class TruncatedError(DecodeError):
    pass


class TagError(DecodeError):
    pass


class LengthError(DecodeError):
    pass


class VersionError(DecodeError):
    pass


class StructureError(DecodeError):
    pass


@dataclass(frozen=True)
class Oid:
    """Object identifier as a sequence of non-negative integer arcs."""

    arcs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(int(a) for a in self.arcs))
        if len(self.arcs) < 2:
            raise CodecError(f"OID needs >= 2 arcs, got {self.arcs}")
        if not 0 <= self.arcs[0] <= 2:
            raise CodecError(f"first OID arc must be 0..2, got {self.arcs[0]}")
        if self.arcs[0] < 2 and self.arcs[1] > 39:
            raise CodecError(f"second OID arc must be <= 39 under arc {self.arcs[0]}")
        for a in self.arcs:
            if not 0 <= a <= MAX_ARC:
                raise CodecError(f"OID arc {a} outside 0..2^32-1")

    def __str__(self) -> str:
        return ".".join(str(a) for a in self.arcs)

    @classmethod
    def parse(cls, dotted: str) -> "Oid":
        try:
            return cls(tuple(int(part) for part in dotted.split(".")))
        except ValueError as e:
            raise CodecError(f"bad dotted OID {dotted!r}") from e


@dataclass(frozen=True)
class Integer:
    value: int

    def __post_init__(self) -> None:
        if not INT32_MIN <= self.value <= INT32_MAX:
            raise CodecError(f"integer {self.value} outside signed 32-bit range")


@dataclass(frozen=True)
class OctetString:
    value: bytes

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", bytes(self.value))


@dataclass(frozen=True)
class Null:
    pass


Value = Integer | OctetString | Null


@dataclass(frozen=True)
class VarBind:
    oid: Oid
    value: Value


@dataclass(frozen=True)
class NtcipMessage:
    community: bytes
    pdu_type: str
    request_id: int
    error_status: int = NO_ERROR
    error_index: int = 0
    varbinds: tuple[VarBind, ...] = field(default_factory=tuple)
    version: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "community", bytes(self.community))
        object.__setattr__(self, "varbinds", tuple(self.varbinds))
        if self.version != 0:
            raise CodecError(f"only version 0 supported, got {self.version}")
        if self.pdu_type not in PDU_TAGS:
            raise CodecError(f"unsupported PDU type {self.pdu_type!r}")
        if not INT32_MIN <= self.request_id <= INT32_MAX:
            raise CodecError(f"request_id {self.request_id} outside signed 32-bit range")
        if self.error_status not in ERROR_STATUSES:
            raise CodecError(f"error_status {self.error_status} not in {ERROR_STATUSES}")
        if self.error_index < 0:
            raise CodecError(f"error_index must be >= 0, got {self.error_index}")
        if self.pdu_type != GET_RESPONSE and (self.error_status or self.error_index):
            raise CodecError("request PDUs must carry noError / zero error_index")


# --- encoding -------------------------------------------------------------

def _encode_length(n: int) -> bytes:
    if n < 0x80:
        return bytes([n])
    body = n.to_bytes((n.bit_length() + 7) // 8, "big")
    return bytes([0x80 | len(body)]) + body


def _tlv(tag: int, content: bytes) -> bytes:
    return bytes([tag]) + _encode_length(len(content)) + content


def _encode_int(v: int) -> bytes:
    n = 1
    while not -(1 << (8 * n - 1)) <= v < (1 << (8 * n - 1)):
        n += 1
    return _tlv(TAG_INTEGER, v.to_bytes(n, "big", signed=True))


def _encode_arc(arc: int) -> bytes:
    groups = [arc & 0x7F]
    arc >>= 7
    while arc:
        groups.append(0x80 | (arc & 0x7F))
        arc >>= 7
    return bytes(reversed(groups))


def _encode_oid(oid: Oid) -> bytes:
    body = _encode_arc(oid.arcs[0] * 40 + oid.arcs[1])
    for arc in oid.arcs[2:]:
        body += _encode_arc(arc)
    return _tlv(TAG_OID, body)


def _encode_value(value: Value) -> bytes:
    if isinstance(value, Integer):
        return _encode_int(value.value)
    if isinstance(value, OctetString):
        return _tlv(TAG_OCTET_STRING, value.value)
    if isinstance(value, Null):
        return _tlv(TAG_NULL, b"")
    raise EncodeError(f"unencodable value {value!r}")


def encode(msg: NtcipMessage) -> bytes:
    """Serialize a message; equal messages yield identical bytes."""
    vbl = b"".join(
        _tlv(TAG_SEQUENCE, _encode_oid(vb.oid) + _encode_value(vb.value))
        for vb in msg.varbinds
    )
    pdu = _tlv(
        PDU_TAGS[msg.pdu_type],
        _encode_int(msg.request_id)
        + _encode_int(msg.error_status)
        + _encode_int(msg.error_index)
        + _tlv(TAG_SEQUENCE, vbl),
    )
    return _tlv(
        TAG_SEQUENCE,
        _encode_int(msg.version) + _tlv(TAG_OCTET_STRING, msg.community) + pdu,
    )


# --- decoding -------------------------------------------------------------

class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def need(self, n: int, what: str) -> None:
        if self.pos + n > len(self.data):
            raise TruncatedError(self.pos, f"truncated while reading {what}")

    def header(self, what: str) -> tuple[int, int, int]:
        """Read a tag + definite minimal length; returns (tag, length, header_offset)."""
        start = self.pos
        self.need(1, f"{what} tag")
        tag = self.data[self.pos]
        self.pos += 1
        self.need(1, f"{what} length")
        first = self.data[self.pos]
        self.pos += 1
        if first < 0x80:
            length = first
        elif first == 0x80:
            raise LengthError(self.pos - 1, f"indefinite length for {what}")
        else:
            n = first & 0x7F
            self.need(n, f"{what} length")
            raw = self.data[self.pos:self.pos + n]
            self.pos += n
            if raw[0] == 0x00:
                raise LengthError(start + 1, f"non-minimal length for {what}")
            length = int.from_bytes(raw, "big")
            if length < 0x80 or n > (length.bit_length() + 7) // 8:
                raise LengthError(start + 1, f"non-minimal length for {what}")
        self.need(length, f"{what} content")
        return tag, length, start

    def expect(self, tag: int, what: str) -> tuple[int, int]:
        got, length, start = self.header(what)
        if got != tag:
            raise TagError(start, f"expected {what} tag 0x{tag:02X}, got 0x{got:02X}")
        return length, start

    def read_int(self, what: str) -> int:
        length, start = self.expect(TAG_INTEGER, what)
        if length == 0:
            raise StructureError(start, f"empty integer for {what}")
        raw = self.data[self.pos:self.pos + length]
        if length > 1 and (
            (raw[0] == 0x00 and raw[1] < 0x80) or (raw[0] == 0xFF and raw[1] >= 0x80)
        ):
            raise StructureError(self.pos, f"non-minimal integer for {what}")
        self.pos += length
        value = int.from_bytes(raw, "big", signed=True)
        if not INT32_MIN <= value <= INT32_MAX:
            raise StructureError(start, f"{what} {value} outside signed 32-bit range")
        return value

    def read_octets(self, what: str) -> bytes:
        length, _ = self.expect(TAG_OCTET_STRING, what)
        raw = self.data[self.pos:self.pos + length]
        self.pos += length
        return raw

    def read_oid(self) -> Oid:
        length, start = self.expect(TAG_OID, "OID")
        if length == 0:
            raise StructureError(start, "empty OID")
        end = self.pos + length
        subids = []
        while self.pos < end:
            if self.data[self.pos] == 0x80:
                raise StructureError(self.pos, "non-minimal OID arc")
            arc = 0
            while True:
                if self.pos >= end:
                    raise TruncatedError(self.pos, "OID arc continues past its length")
                byte = self.data[self.pos]
                self.pos += 1
                arc = (arc << 7) | (byte & 0x7F)
                if arc > MAX_ARC:
                    raise StructureError(self.pos - 1, "OID arc exceeds 2^32-1")
                if not byte & 0x80:
                    break
            subids.append(arc)
        first = subids[0]
        if first < 40:
            arcs = (0, first)
        elif first < 80:
            arcs = (1, first - 40)
        else:
            arcs = (2, first - 80)
        return Oid(arcs + tuple(subids[1:]))

    def read_value(self) -> Value:
        self.need(1, "value tag")
        tag = self.data[self.pos]
        if tag == TAG_INTEGER:
            return Integer(self.read_int("value"))
        if tag == TAG_OCTET_STRING:
            return OctetString(self.read_octets("value"))
        if tag == TAG_NULL:
            length, start = self.expect(TAG_NULL, "null value")
            if length != 0:
                raise StructureError(start, "null value with non-zero length")
            return Null()
        raise TagError(self.pos, f"unsupported value tag 0x{tag:02X}")


def decode(data: bytes) -> NtcipMessage:
    """Parse a wire message; raises a DecodeError subclass on any defect."""
    r = _Reader(bytes(data))
    msg_len, _ = r.expect(TAG_SEQUENCE, "message")
    msg_end = r.pos + msg_len

    version_at = r.pos
    version = r.read_int("version")
    if version != 0:
        raise VersionError(version_at, f"unsupported version {version}")
    community = r.read_octets("community")

    tag, pdu_len, pdu_start = r.header("PDU")
    if tag not in PDU_BY_TAG:
        raise TagError(pdu_start, f"unknown PDU tag 0x{tag:02X}")
    pdu_type = PDU_BY_TAG[tag]
    pdu_end = r.pos + pdu_len

    request_id = r.read_int("request-id")
    status_at = r.pos
    error_status = r.read_int("error-status")
    if error_status not in ERROR_STATUSES:
        raise StructureError(status_at, f"error-status {error_status} not supported")
    index_at = r.pos
    error_index = r.read_int("error-index")
    if error_index < 0:
        raise StructureError(index_at, f"negative error-index {error_index}")

    vbl_len, _ = r.expect(TAG_SEQUENCE, "varbind list")
    vbl_end = r.pos + vbl_len
    varbinds = []
    while r.pos < vbl_end:
        vb_len, _ = r.expect(TAG_SEQUENCE, "varbind")
        vb_end = r.pos + vb_len
        oid = r.read_oid()
        value = r.read_value()
        if r.pos != vb_end:
            raise StructureError(r.pos, "varbind length does not match its contents")
        varbinds.append(VarBind(oid, value))
    if r.pos != vbl_end:
        raise StructureError(r.pos, "varbind list length does not match its contents")
    if r.pos != pdu_end:
        raise StructureError(r.pos, "PDU length does not match its contents")
    if r.pos != msg_end:
        raise StructureError(r.pos, "message length does not match its contents")
    if r.pos != len(r.data):
        raise StructureError(r.pos, f"{len(r.data) - r.pos} trailing bytes after message")

    try:
        return NtcipMessage(
            community=community,
            pdu_type=pdu_type,
            request_id=request_id,
            error_status=error_status,
            error_index=error_index,
            varbinds=tuple(varbinds),
        )
    except CodecError as e:
        raise StructureError(pdu_start, str(e)) from e
