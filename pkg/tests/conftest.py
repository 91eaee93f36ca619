import hashlib

import pytest

from srta_sim.config import ScenarioConfig
from srta_sim.primitives import Bitstring
from srta_sim.sim import World

ACCEPTANCE = []


def ref_hash(word: Bitstring, width: int = 128) -> Bitstring:
    """Independent hash oracle: sha256 over (bit length || bytes), leading bits."""
    framed = word.width.to_bytes(8, "big") + word.value.to_bytes((word.width + 7) // 8, "big")
    out = hashlib.sha256(framed).digest()
    while len(out) * 8 < width:
        out += hashlib.sha256(out[-32:]).digest()
    return Bitstring(int.from_bytes(out, "big") >> (len(out) * 8 - width), width)


def ref_cat(*parts: Bitstring) -> Bitstring:
    value, width = 0, 0
    for p in parts:
        value = (value << p.width) | p.value
        width += p.width
    return Bitstring(value, width)


def ref_t(ticks: int, width: int = 128) -> Bitstring:
    return Bitstring(ticks, width)


@pytest.fixture
def make_world():
    def make(protocol="srta", **kw):
        return World(ScenarioConfig(protocol=protocol, **kw))
    return make


@pytest.fixture(params=["srta", "improved"])
def protocol(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
