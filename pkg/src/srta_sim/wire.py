"""Bit-exact message framing.

Layout of one encoded message::

    version:u8  type:u8  body_len:u16be  body

where ``body`` is the field list, each field encoded as::

    field_tag:u8  width_bits:u16be  raw bytes (ceil(width/8), big-endian)

Timestamps are always 64-bit, i.e. 8-byte big-endian tick counts.
"""

from __future__ import annotations

import dataclasses
import struct
from typing import ClassVar

from .errors import FormatError
from .primitives import Bitstring

WIRE_VERSION = 1
TIMESTAMP_BITS = 64

_REGISTRY: dict[int, type] = {}


def bits(tag: int):
    return dataclasses.field(metadata={"tag": tag, "kind": "bits"})


def stamp(tag: int):
    return dataclasses.field(metadata={"tag": tag, "kind": "time"})


class Message:
    """Mixin for frozen dataclass messages; subclasses set ``TYPE``."""

    TYPE: ClassVar[int]
    LABEL: ClassVar[str]

    def __init_subclass__(cls, **kw):
        super().__init_subclass__(**kw)
        if "TYPE" in cls.__dict__:
            if cls.TYPE in _REGISTRY:
                raise ValueError(f"duplicate message type 0x{cls.TYPE:02x}")
            _REGISTRY[cls.TYPE] = cls

    def encode(self) -> bytes:
        return encode(self)

    def field_items(self):
        for f in dataclasses.fields(self):
            yield f.name, getattr(self, f.name)


def encode(msg: Message) -> bytes:
    body = bytearray()
    for f in dataclasses.fields(msg):
        value = getattr(msg, f.name)
        if f.metadata["kind"] == "time":
            body += struct.pack(">BH", f.metadata["tag"], TIMESTAMP_BITS)
            body += struct.pack(">Q", value)
        else:
            body += struct.pack(">BH", f.metadata["tag"], value.width)
            body += value.to_bytes()
    if len(body) > 0xFFFF:
        raise FormatError("message body too long")
    return struct.pack(">BBH", WIRE_VERSION, msg.TYPE, len(body)) + bytes(body)


def decode(data: bytes) -> Message:
    if len(data) < 4:
        raise FormatError("truncated header")
    version, mtype, length = struct.unpack(">BBH", data[:4])
    if version != WIRE_VERSION:
        raise FormatError(f"wire version {version} not supported")
    if mtype not in _REGISTRY:
        raise FormatError(f"unknown message type 0x{mtype:02x}")
    body = data[4:]
    if len(body) != length:
        raise FormatError("body length mismatch")
    cls = _REGISTRY[mtype]
    values, pos = {}, 0
    for f in dataclasses.fields(cls):
        if pos + 3 > len(body):
            raise FormatError("truncated field header")
        tag, width = struct.unpack(">BH", body[pos:pos + 3])
        pos += 3
        if tag != f.metadata["tag"]:
            raise FormatError(f"expected field tag {f.metadata['tag']}, got {tag}")
        nbytes = (width + 7) // 8
        raw = body[pos:pos + nbytes]
        if len(raw) != nbytes:
            raise FormatError("truncated field")
        pos += nbytes
        if f.metadata["kind"] == "time":
            if width != TIMESTAMP_BITS:
                raise FormatError("timestamps must be 64-bit")
            values[f.name] = int.from_bytes(raw, "big")
        else:
            values[f.name] = Bitstring(int.from_bytes(raw, "big"), width)
    if pos != len(body):
        raise FormatError("trailing bytes in body")
    return cls(**values)
