"""The original SRTA protocol, kept faithful to its published message flow.

The weaknesses are intentional: ``B = h(A xor T1)`` and ``D = h(C xor T2)``
hold for every honest session, identifiers travel in clear, and the server
commits its update before the reader has seen M4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import wire
from .errors import (LoginFailure, NoPendingSession, ReaderAuthFailure,
                     TagAuthFailure, TimeoutAbort, UnknownParty)
from .model import (ProtocolParams, ReaderPending, ReaderState, ServerStore,
                    TagPending, TagState, drawn, hashed, login_verifier, reused)
from .primitives import Bitstring, Clock, Rng, concat, timestamp_word, xor

NAME = "srta"


@dataclass(frozen=True)
class M1(wire.Message):
    TYPE = 0x01
    LABEL = "M1"
    a: Bitstring = wire.bits(1)
    b: Bitstring = wire.bits(2)
    rid: Bitstring = wire.bits(3)
    t1: int = wire.stamp(4)


@dataclass(frozen=True)
class M2(wire.Message):
    TYPE = 0x02
    LABEL = "M2"
    c: Bitstring = wire.bits(5)
    d: Bitstring = wire.bits(6)
    id: Bitstring = wire.bits(7)
    t2: int = wire.stamp(8)


@dataclass(frozen=True)
class M3(wire.Message):
    TYPE = 0x03
    LABEL = "M3"
    a: Bitstring = wire.bits(1)
    b: Bitstring = wire.bits(2)
    rid: Bitstring = wire.bits(3)
    t1: int = wire.stamp(4)
    c: Bitstring = wire.bits(5)
    d: Bitstring = wire.bits(6)
    id: Bitstring = wire.bits(7)
    t2: int = wire.stamp(8)


@dataclass(frozen=True)
class M4(wire.Message):
    TYPE = 0x04
    LABEL = "M4"
    e: Bitstring = wire.bits(9)
    f: Bitstring = wire.bits(10)
    g: Bitstring = wire.bits(11)


@dataclass(frozen=True)
class M5(wire.Message):
    """The bare G forwarded by the reader to the tag."""
    TYPE = 0x05
    LABEL = "G"
    g: Bitstring = wire.bits(11)


@dataclass
class ServerOutcome:
    m4: wire.Message
    reader_handle: int
    tag_handle: int
    reader_slot: str
    tag_slot: str
    b_star: Bitstring
    d_star: Bitstring


def reader_login(reader: ReaderState, params: ProtocolParams) -> Bitstring:
    ops = reader.ops
    v_prime = xor(xor(reader.w_k, reader.rid), reader.rpw)
    v = hashed(ops, "login", params, concat(reader.x_cur, reader.rid))
    if v != v_prime:
        raise LoginFailure("stored verifier does not match the reader password")
    return v_prime


def reader_challenge(reader: ReaderState, clock: Clock, rng: Rng, params: ProtocolParams) -> M1:
    w = params.width
    v_prime = reader_login(reader, params)
    rr = drawn(reader.ops, "challenge", rng, w)
    t1 = clock.now()
    a = xor(v_prime, rr)
    b = hashed(reader.ops, "challenge", params, xor(xor(v_prime, timestamp_word(t1, w)), rr))
    m1 = M1(a=a, b=b, rid=reader.rid, t1=t1)
    reader.pending = ReaderPending(rr=rr, t1=t1, v=v_prime, m1=m1)
    return m1


def tag_response(tag: TagState, m1: M1, clock: Clock, rng: Rng, params: ProtocolParams) -> M2:
    # the tag checks nothing in M1
    w = params.width
    rt = drawn(tag.ops, "response", rng, w)
    t2 = clock.now()
    inner = hashed(tag.ops, "response", params, concat(tag.s_cur, tag.id))
    c = xor(inner, rt)
    reused(tag.ops, "response")
    d = hashed(tag.ops, "response", params, xor(xor(inner, timestamp_word(t2, w)), rt))
    tag.pending = TagPending(rt=rt, t2=t2)
    return M2(c=c, d=d, id=tag.id, t2=t2)


def _check_window(reader: ReaderState, t1: int, t2: int, params: ProtocolParams) -> None:
    if reader.pending is None:
        raise NoPendingSession("reader has no open session")
    if t2 - t1 > params.delta_t:
        reader.pending = None
        raise TimeoutAbort(f"T2 - T1 = {t2 - t1} exceeds {params.delta_t}")


def reader_forward(reader: ReaderState, m1: M1, m2: M2, params: ProtocolParams) -> M3:
    _check_window(reader, m1.t1, m2.t2, params)
    return M3(a=m1.a, b=m1.b, rid=m1.rid, t1=m1.t1, c=m2.c, d=m2.d, id=m2.id, t2=m2.t2)


def _shift(matched: Bitstring, successor: Bitstring):
    """Next (new, old) window: old <- the value that matched, new <- its successor.

    Candidates are tried new slot first.  Under SRTA's B* and D* the first
    candidate always passes (h(x||RID) xor Rr* is just A), so SRTA effectively
    rolls the new slot forward whatever the party actually holds.
    """
    return successor, matched


def _match_reader(store, params, rid, a, b, t1, ops):
    w = params.width
    try:
        handle, rec = store.reader_by_rid(rid)
    except KeyError:
        raise UnknownParty("unknown reader identifier") from None
    b_star = None
    for slot, x in rec.slots():
        hx = hashed(ops, "process", params, concat(x, rid))
        rr = xor(a, hx)
        reused(ops, "process")
        b_star = hashed(ops, "process", params, xor(xor(hx, timestamp_word(t1, w)), rr))
        if b_star == b:
            return handle, rec, slot, x, rr, b_star
    raise ReaderAuthFailure("no reader secret reproduces B")


def _match_tag(store, params, ident, c, d, t2, ops):
    w = params.width
    try:
        handle, rec = store.tag_by_id(ident)
    except KeyError:
        raise UnknownParty("unknown tag identifier") from None
    for slot, _, s in rec.slots():
        hs = hashed(ops, "process", params, concat(s, ident))
        rt = xor(c, hs)
        reused(ops, "process")
        d_star = hashed(ops, "process", params, xor(xor(hs, timestamp_word(t2, w)), rt))
        if d_star == d:
            return handle, rec, slot, s, rt, d_star
    raise TagAuthFailure("no tag secret reproduces D")


def confirmations(params, ops, x, rid, t1, rr, s, ident, t2, rt, data):
    """E, F, G and the two forward hashes h(x xor Rr), h(s xor Rt)."""
    w = params.width
    hxr = hashed(ops, "process", params, xor(x, rr))
    e = hashed(ops, "process", params, concat(x, rid, timestamp_word(t1, w), rr, hxr))
    reused(ops, "process")
    f = xor(data, hxr)
    hsr = hashed(ops, "process", params, xor(s, rt))
    g = hashed(ops, "process", params, concat(s, ident, timestamp_word(t2, w), rt, hsr))
    return e, f, g, hxr, hsr


def server_process(store: ServerStore, m3: M3, clock: Clock, params: ProtocolParams) -> ServerOutcome:
    t3 = clock.now()
    if t3 - m3.t2 > params.delta_t:
        raise TimeoutAbort(f"T3 - T2 = {t3 - m3.t2} exceeds {params.delta_t}")
    ops = store.ops
    r_handle, r_rec, r_slot, x, rr, b_star = _match_reader(store, params, m3.rid, m3.a, m3.b, m3.t1, ops)
    t_handle, t_rec, t_slot, s, rt, d_star = _match_tag(store, params, m3.id, m3.c, m3.d, m3.t2, ops)
    e, f, g, hxr, hsr = confirmations(params, ops, x, m3.rid, m3.t1, rr, s, m3.id, m3.t2, rt,
                                      store.data[t_handle])
    # committed before M4 is known to arrive
    reused(ops, "process", 2)
    r_rec.x_new, r_rec.x_old = _shift(x, hxr)
    t_rec.s_new, t_rec.s_old = _shift(s, hsr)
    return ServerOutcome(M4(e=e, f=f, g=g), r_handle, t_handle, r_slot, t_slot, b_star, d_star)


def finish_reader(reader: ReaderState, e: Bitstring, f: Bitstring, params: ProtocolParams) -> Bitstring:
    """Verify E, unmask Data with the pre-update x, then roll x and W_k forward."""
    p = reader.pending
    if p is None:
        raise NoPendingSession("reader has no open session")
    reader.pending = None
    w = params.width
    ops = reader.ops
    x = reader.x_cur
    hxr = hashed(ops, "finalize", params, xor(x, p.rr))
    e_star = hashed(ops, "finalize", params, concat(x, reader.rid, timestamp_word(p.t1, w), p.rr, hxr))
    if e_star != e:
        raise ReaderAuthFailure("E does not verify")
    reused(ops, "finalize", 2)
    data = xor(f, hxr)
    reader.x_cur = hxr
    reader.w_k = login_verifier(reader.x_cur, reader.rid, reader.rpw, params.hash)
    ops[("finalize", "hash")] += 1
    return data


def reader_finalize(reader: ReaderState, m4: M4, params: ProtocolParams) -> tuple[Bitstring, M5]:
    data = finish_reader(reader, m4.e, m4.f, params)
    return data, M5(g=m4.g)


def verify_g(tag: TagState, g: Bitstring, params: ProtocolParams) -> Bitstring:
    """Check G against the open session; return h(s xor Rt) on success."""
    p = tag.pending
    if p is None:
        raise NoPendingSession("tag has no open session")
    tag.pending = None
    w = params.width
    ops = tag.ops
    hsr = hashed(ops, "finalize", params, xor(tag.s_cur, p.rt))
    g_star = hashed(ops, "finalize", params, concat(tag.s_cur, tag.id, timestamp_word(p.t2, w), p.rt, hsr))
    if g_star != g:
        raise TagAuthFailure("G does not verify")
    return hsr


def tag_finalize(tag: TagState, g: Bitstring, params: ProtocolParams) -> bool:
    hsr = verify_g(tag, g, params)
    reused(tag.ops, "finalize")
    tag.s_cur = hsr
    return True


# -- public relations the attacks rely on ---------------------------------

def forged_b(a: Bitstring, t1: int, params: ProtocolParams) -> Bitstring:
    """h(A xor T1): equals B for every honest M1."""
    return params.hash(xor(a, timestamp_word(t1, params.width)))


def forged_d(c: Bitstring, t2: int, params: ProtocolParams) -> Bitstring:
    """h(C xor T2): equals D for every honest M2."""
    return params.hash(xor(c, timestamp_word(t2, params.width)))


def air_identifiers(msg) -> Optional[tuple[str, Bitstring]]:
    """The cleartext identifier a message carries, if any."""
    if isinstance(msg, M1):
        return "rid", msg.rid
    if isinstance(msg, M2):
        return "id", msg.id
    return None
