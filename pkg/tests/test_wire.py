import dataclasses
import struct

import pytest
from hypothesis import given, strategies as st

from srta_sim import improved, srta, wire
from srta_sim.errors import FormatError
from srta_sim.primitives import Bitstring

WORD = st.integers(0, (1 << 128) - 1).map(lambda v: Bitstring(v, 128))
TIME = st.integers(0, (1 << 64) - 1)
MESSAGES = [srta.M1, srta.M2, srta.M3, srta.M4, srta.M5,
            improved.IM1, improved.IM2, improved.IM3, improved.IM4, improved.IM5]


def message(cls):
    kw = {f.name: (TIME if f.metadata["kind"] == "time" else WORD) for f in dataclasses.fields(cls)}
    return st.builds(cls, **kw)


@given(st.sampled_from(MESSAGES).flatmap(message))
def test_round_trip(msg):
    data = msg.encode()
    assert data[0] == wire.WIRE_VERSION and data[1] == msg.TYPE
    assert struct.unpack(">H", data[2:4])[0] == len(data) - 4
    assert wire.decode(data) == msg


def test_type_codes_are_distinct():
    assert len({m.TYPE for m in MESSAGES}) == len(MESSAGES)


def sample():
    return srta.M5(g=Bitstring(0xAB, 8)).encode()


def test_field_layout():
    assert sample() == bytes([1, 0x05, 0, 4, 11, 0, 8, 0xAB])


def test_bad_version():
    data = bytearray(sample())
    data[0] = 9
    with pytest.raises(FormatError):
        wire.decode(bytes(data))


def test_unknown_type():
    data = bytearray(sample())
    data[1] = 0x7F
    with pytest.raises(FormatError):
        wire.decode(bytes(data))


def test_length_mismatch():
    with pytest.raises(FormatError):
        wire.decode(sample() + b"\x00")


def test_truncated_header():
    with pytest.raises(FormatError):
        wire.decode(b"\x01\x05")


def test_truncated_field():
    data = bytes([1, 0x05, 0, 4, 11, 0, 16, 0xAB])
    with pytest.raises(FormatError):
        wire.decode(data)


def test_wrong_field_tag():
    data = bytes([1, 0x05, 0, 4, 12, 0, 8, 0xAB])
    with pytest.raises(FormatError):
        wire.decode(data)


def test_trailing_bytes_in_body():
    data = bytes([1, 0x05, 0, 5, 11, 0, 8, 0xAB, 0])
    with pytest.raises(FormatError):
        wire.decode(data)


def test_timestamps_must_be_64_bit():
    body = (struct.pack(">BH", 1, 8) + b"\x01" + struct.pack(">BH", 2, 8) + b"\x02"
            + struct.pack(">BH", 3, 8) + b"\x03" + struct.pack(">BH", 4, 32) + b"\x00\x00\x00\x05")
    with pytest.raises(FormatError):
        wire.decode(struct.pack(">BBH", 1, 0x01, len(body)) + body)
