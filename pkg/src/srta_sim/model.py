"""Party state for tags, readers and the back-end server."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .primitives import Bitstring, HashConfig, Rng, concat, fresh_nonce, xor

# Uninitialised previous-value slot.  Kept out of band so an all-zero secret
# can never match an empty slot.
NULL = None


class OpCounter(Counter):
    """Per-party operation tally keyed by ``(phase, kind)``.

    ``kind`` is ``"hash"`` for an actual hash evaluation, ``"reuse"`` when an
    already computed digest is reused by a second formula, and ``"rng"`` for a
    nonce draw.  The syntactic per-formula count is ``hash + reuse``.
    """

    def total(self, kind: str, phase: Optional[str] = None) -> int:
        return sum(n for (p, k), n in self.items() if k == kind and (phase is None or p == phase))


@dataclass
class TagPending:
    rt: Bitstring
    t2: int


@dataclass
class TagState:
    id: Bitstring
    s_cur: Bitstring
    pending: Optional[TagPending] = None
    ops: OpCounter = field(default_factory=OpCounter, repr=False, compare=False)

    def snapshot(self) -> dict:
        return {"id": self.id.hex(), "s": self.s_cur.hex()}


@dataclass
class ReaderPending:
    rr: Bitstring
    t1: int
    v: Bitstring
    m1: object = None


@dataclass
class ReaderState:
    rid: Bitstring
    rpw: Bitstring
    x_cur: Bitstring
    w_k: Bitstring
    pending: Optional[ReaderPending] = None
    ops: OpCounter = field(default_factory=OpCounter, repr=False, compare=False)

    def snapshot(self) -> dict:
        return {"rid": self.rid.hex(), "x": self.x_cur.hex(), "w": self.w_k.hex()}


def login_verifier(x: Bitstring, rid: Bitstring, rpw: Bitstring, h: HashConfig) -> Bitstring:
    """W_k = h(x || RID) xor RID xor RPW."""
    return xor(xor(h(concat(x, rid)), rid), rpw)


def _hex(v: Optional[Bitstring]) -> Optional[str]:
    return None if v is NULL else v.hex()


@dataclass
class ServerTagRecord:
    id_new: Bitstring
    s_new: Bitstring
    id_old: Optional[Bitstring] = NULL
    s_old: Optional[Bitstring] = NULL

    def slots(self):
        """Candidate (id, s) pairs, new slot first; empty slots skipped."""
        yield "new", self.id_new, self.s_new
        if self.s_old is not NULL:
            yield "old", (self.id_old if self.id_old is not NULL else self.id_new), self.s_old

    def holds(self, tag: TagState) -> bool:
        return any(i == tag.id and s == tag.s_cur for _, i, s in self.slots())

    def snapshot(self) -> dict:
        return {"id_new": _hex(self.id_new), "id_old": _hex(self.id_old),
                "s_new": _hex(self.s_new), "s_old": _hex(self.s_old)}


@dataclass
class ServerReaderRecord:
    rid: Bitstring
    x_new: Bitstring
    x_old: Optional[Bitstring] = NULL

    def slots(self):
        yield "new", self.x_new
        if self.x_old is not NULL:
            yield "old", self.x_old

    def holds(self, reader: ReaderState) -> bool:
        return reader.rid == self.rid and any(x == reader.x_cur for _, x in self.slots())

    def snapshot(self) -> dict:
        return {"rid": self.rid.hex(), "x_new": _hex(self.x_new), "x_old": _hex(self.x_old)}


@dataclass
class ServerStore:
    tags: dict[int, ServerTagRecord] = field(default_factory=dict)
    readers: dict[int, ServerReaderRecord] = field(default_factory=dict)
    data: dict[int, Bitstring] = field(default_factory=dict)
    ops: OpCounter = field(default_factory=OpCounter, repr=False, compare=False)

    def tag_by_id(self, ident: Bitstring) -> tuple[int, ServerTagRecord]:
        for handle, rec in self.tags.items():
            if rec.id_new == ident or rec.id_old == ident:
                return handle, rec
        raise KeyError(ident)

    def reader_by_rid(self, rid: Bitstring) -> tuple[int, ServerReaderRecord]:
        for handle, rec in self.readers.items():
            if rec.rid == rid:
                return handle, rec
        raise KeyError(rid)

    def snapshot(self) -> dict:
        return {
            "tags": {str(k): r.snapshot() for k, r in self.tags.items()},
            "readers": {str(k): r.snapshot() for k, r in self.readers.items()},
            "data": {str(k): d.hex() for k, d in self.data.items()},
        }


def provision(n_tags: int, n_readers: int, rng: Rng, h: HashConfig,
              rids: Optional[list[Bitstring]] = None,
              ids: Optional[list[Bitstring]] = None):
    """Create tags, readers and the mirrored server store.

    Explicit ``rids``/``ids`` override the random draws; duplicates are
    rejected because the server looks parties up by identifier.
    """
    if n_tags < 1 or n_readers < 1:
        raise ValueError("need at least one tag and one reader")
    w = h.width
    if rids is not None and len(rids) != n_readers:
        raise ValueError("rids must match the reader count")
    if ids is not None and len(ids) != n_tags:
        raise ValueError("ids must match the tag count")

    tags, readers, store = [], [], ServerStore()
    for k in range(n_tags):
        ident = ids[k] if ids is not None else fresh_nonce(rng, w)
        s = fresh_nonce(rng, w)
        tags.append(TagState(id=ident, s_cur=s))
        store.tags[k] = ServerTagRecord(id_new=ident, s_new=s)
        store.data[k] = fresh_nonce(rng, w)
    for k in range(n_readers):
        rid = rids[k] if rids is not None else fresh_nonce(rng, w)
        rpw = fresh_nonce(rng, w)
        x = fresh_nonce(rng, w)
        readers.append(ReaderState(rid=rid, rpw=rpw, x_cur=x, w_k=login_verifier(x, rid, rpw, h)))
        store.readers[k] = ServerReaderRecord(rid=rid, x_new=x)

    if len({r.rid for r in readers}) != len(readers):
        raise ValueError("reader identifiers must be unique")
    if len({t.id for t in tags}) != len(tags):
        raise ValueError("tag identifiers must be unique")
    return tags, readers, store


@dataclass(frozen=True)
class ProtocolParams:
    hash: HashConfig = field(default_factory=HashConfig)
    delta_t: int = 10

    @property
    def width(self) -> int:
        return self.hash.width


def hashed(counter: OpCounter, phase: str, params: ProtocolParams, data: Bitstring) -> Bitstring:
    counter[(phase, "hash")] += 1
    return params.hash(data)


def reused(counter: OpCounter, phase: str, n: int = 1) -> None:
    counter[(phase, "reuse")] += n


def drawn(counter: OpCounter, phase: str, rng: Rng, width: int) -> Bitstring:
    counter[(phase, "rng")] += 1
    return fresh_nonce(rng, width)
