"""Insecure channels, the session driver, and the append-only transcript."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import improved, srta, wire
from .config import ScenarioConfig
from .errors import FormatError, MessageDropped, NoPendingSession, ProtocolError
from .model import OpCounter, ProtocolParams, provision
from .primitives import Clock, HashConfig, Rng

FORMAT = 1
PROTOCOLS = {"srta": srta, "improved": improved}

# step label -> (channel, direction)
STEPS = {
    "1.7": ("tag-reader", "reader->tag"),
    "2.4": ("tag-reader", "tag->reader"),
    "3.2": ("reader-server", "reader->server"),
    "4.7": ("reader-server", "server->reader"),
    "5.5": ("tag-reader", "reader->tag"),
}

# A hook sees each message after it is logged and returns the message to
# deliver (possibly altered) or None to drop it.
Hook = Callable[[str, wire.Message, "World"], Optional[wire.Message]]


@dataclass
class TranscriptEntry:
    session: int
    step: str
    direction: str
    bits: str
    time: int
    origin: str = "honest"
    action: str = "send"

    def message(self) -> wire.Message:
        return wire.decode(bytes.fromhex(self.bits))


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


def _ops_view(counter: OpCounter) -> dict:
    out: dict = {}
    for (phase, kind), n in sorted(counter.items()):
        if n:
            out.setdefault(phase, {})[kind] = n
    return out


@dataclass
class SessionReport:
    session: int
    protocol: str
    outcome: str
    detail: str = ""
    reader: int = 0
    tag: int = 0
    entries: int = 0
    data: Optional[str] = None
    state_before: dict = field(default_factory=dict)
    state_after: dict = field(default_factory=dict)
    ops: dict = field(default_factory=dict)
    format: int = FORMAT

    @property
    def ok(self) -> bool:
        return self.outcome == "success"

    def to_dict(self) -> dict:
        return asdict(self)


class World:
    """One provisioned population plus the shared clock, nonce stream and log."""

    def __init__(self, config: ScenarioConfig, rids=None, ids=None):
        self.config = config
        self.protocol = PROTOCOLS[config.protocol]
        self.params = ProtocolParams(HashConfig(config.hash_algorithm, config.width), config.delta_t)
        self.rng = Rng(config.seed)
        self.clock = Clock(config.clock_increment)
        self.tags, self.readers, self.store = provision(
            config.n_tags, config.n_readers, self.rng, self.params.hash, rids=rids, ids=ids)
        self.transcript: list[TranscriptEntry] = []
        self.session = 0
        self.last_server: Optional[srta.ServerOutcome] = None

    @property
    def name(self) -> str:
        return self.protocol.NAME

    # -- logging ------------------------------------------------------------

    def new_session(self) -> int:
        self.session += 1
        return self.session

    def log(self, step: str, msg: wire.Message, origin="honest", action="send", direction=None):
        entry = TranscriptEntry(
            session=self.session, step=step,
            direction=direction or STEPS[step][1],
            bits=msg.encode().hex() if msg is not None else "",
            time=self.clock.peek(), origin=origin, action=action)
        self.transcript.append(entry)
        return entry

    # -- protocol steps (no logging) ----------------------------------------

    def start(self, r: int) -> wire.Message:
        return self.protocol.reader_challenge(self.readers[r], self.clock, self.rng, self.params)

    def tag_reply(self, t: int, m1: wire.Message) -> wire.Message:
        return self.protocol.tag_response(self.tags[t], m1, self.clock, self.rng, self.params)

    def reader_forward(self, r: int, m2: wire.Message) -> wire.Message:
        reader = self.readers[r]
        if reader.pending is None:
            raise NoPendingSession("reader has no open session")
        return self.protocol.reader_forward(reader, reader.pending.m1, m2, self.params)

    def server(self, m3: wire.Message) -> srta.ServerOutcome:
        self.last_server = None
        out = self.protocol.server_process(self.store, m3, self.clock, self.params)
        self.last_server = out
        return out

    def reader_finish(self, r: int, m4: wire.Message):
        return self.protocol.reader_finalize(self.readers[r], m4, self.params)

    def tag_finish(self, t: int, g: wire.Message) -> bool:
        return self.protocol.tag_finalize(self.tags[t], g.g, self.params)

    # -- inspection ----------------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "protocol": self.name,
            "clock": self.clock.peek(),
            "tags": [t.snapshot() for t in self.tags],
            "readers": [r.snapshot() for r in self.readers],
            "server": self.store.snapshot(),
        }

    def digests(self, r: int, t: int) -> dict:
        return {"tag": _digest(self.tags[t].snapshot()),
                "reader": _digest(self.readers[r].snapshot()),
                "server": _digest(self.store.snapshot())}

    def tag_in_window(self, t: int) -> bool:
        return self.store.tags[t].holds(self.tags[t])

    def reader_in_window(self, r: int) -> bool:
        return self.store.readers[r].holds(self.readers[r])

    def synchronized(self) -> bool:
        """Every live secret sits in its server window."""
        return (all(self.tag_in_window(t) for t in range(len(self.tags)))
                and all(self.reader_in_window(r) for r in range(len(self.readers))))

    def ops(self) -> dict:
        return {"tags": [_ops_view(t.ops) for t in self.tags],
                "readers": [_ops_view(r.ops) for r in self.readers],
                "server": _ops_view(self.store.ops)}


def _counter_delta(after: OpCounter, before: OpCounter) -> dict:
    diff = OpCounter(after)
    diff.subtract(before)
    return _ops_view(diff)


def run_session(world: World, reader: int = 0, tag: int = 0,
                hooks: Optional[dict[str, Hook]] = None) -> SessionReport:
    """Drive the six protocol steps, routing every message through its channel.

    Protocol failures end the session and are reported in ``outcome``; this
    function does not raise them.
    """
    hooks = hooks or {}
    i = world.new_session()
    before = world.digests(reader, tag)
    ops_before = (OpCounter(world.tags[tag].ops), OpCounter(world.readers[reader].ops),
                  OpCounter(world.store.ops))
    start_len = len(world.transcript)

    def send(step, msg):
        world.log(step, msg)
        hook = hooks.get(step)
        if hook is None:
            return msg
        out = hook(step, msg, world)
        if out is None:
            world.log(step, msg, origin="adversary", action="drop")
            raise MessageDropped(f"message at step {step} dropped")
        if out != msg:
            world.log(step, out, origin="adversary", action="modify")
        return out

    report = SessionReport(session=i, protocol=world.name, outcome="success", reader=reader, tag=tag)
    try:
        m1 = send("1.7", world.start(reader))
        m2 = send("2.4", world.tag_reply(tag, m1))
        m3 = send("3.2", world.reader_forward(reader, m2))
        m4 = send("4.7", world.server(m3).m4)
        data, g = world.reader_finish(reader, m4)
        report.data = data.hex()
        g = send("5.5", g)
        world.tag_finish(tag, g)
    except ProtocolError as exc:
        report.outcome, report.detail = exc.reason, str(exc)

    report.entries = len(world.transcript) - start_len
    report.state_before = before
    report.state_after = world.digests(reader, tag)
    report.ops = {
        "tag": _counter_delta(world.tags[tag].ops, ops_before[0]),
        "reader": _counter_delta(world.readers[reader].ops, ops_before[1]),
        "server": _counter_delta(world.store.ops, ops_before[2]),
    }
    return report


def drop(step_label: str) -> dict[str, Hook]:
    return {step_label: lambda step, msg, world: None}


# -- scripted runs, transcript files, replay --------------------------------

@dataclass
class SessionSpec:
    reader: int = 0
    tag: int = 0
    drop: tuple = ()

    def hooks(self) -> dict[str, Hook]:
        out = {}
        for s in self.drop:
            out.update(drop(s))
        return out


def run_script(world: World, specs: Iterable[SessionSpec]) -> list[SessionReport]:
    return [run_session(world, s.reader, s.tag, s.hooks()) for s in specs]


def transcript_records(world: World, specs: list[SessionSpec]) -> list[dict]:
    header = {"kind": "header", "format": FORMAT, "protocol": world.name,
              "config": world.config.to_dict(),
              "sessions": [{"reader": s.reader, "tag": s.tag, "drop": list(s.drop)} for s in specs]}
    return [header] + [{"kind": "entry", **asdict(e)} for e in world.transcript]


def write_transcript(path, records: list[dict]) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_transcript(path) -> list[dict]:
    text = Path(path).read_text()
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@dataclass
class ReplayResult:
    reports: list[SessionReport]
    mismatches: list[int]
    ok: bool


def replay(records: list[dict], seed: Optional[int] = None) -> ReplayResult:
    """Re-run a recorded scenario and compare every transcript entry bit-for-bit.

    ``seed`` overrides the recorded seed, which is expected to produce a
    mismatch; mismatching entry indices are returned rather than raised.
    """
    if not records:
        return ReplayResult([], [], True)
    header = records[0]
    if header.get("kind") != "header":
        raise FormatError("transcript does not start with a header")
    if header.get("format") != FORMAT:
        raise FormatError(f"transcript format {header.get('format')} not supported")
    config = ScenarioConfig(**header["config"])
    if seed is not None:
        config = config.replace(seed=seed)
    specs = [SessionSpec(s["reader"], s["tag"], tuple(s["drop"])) for s in header["sessions"]]
    world = World(config)
    reports = run_script(world, specs)
    fresh = [{"kind": "entry", **asdict(e)} for e in world.transcript]
    recorded = records[1:]
    mismatches = [k for k in range(max(len(fresh), len(recorded)))
                  if k >= len(fresh) or k >= len(recorded) or fresh[k] != recorded[k]]
    return ReplayResult(reports, mismatches, not mismatches)
