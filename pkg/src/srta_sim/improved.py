"""The hardened variant: identifier-free air messages, rebuilt B and D,
an evolving tag identifier, and anchored two-slot windows at the server.

Login, E, F, G and the reader-side update are shared with :mod:`srta`.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import wire
from .errors import ReaderAuthFailure, TagAuthFailure, TimeoutAbort
from .model import (ProtocolParams, ReaderPending, ReaderState, ServerStore,
                    TagPending, TagState, drawn, hashed, reused)
from .primitives import (Bitstring, Clock, Rng, concat, left_half, right_half,
                         timestamp_word, truncate, xor)
from .srta import (ServerOutcome, _check_window, _shift, confirmations,
                   finish_reader, reader_login, verify_g)

NAME = "improved"


@dataclass(frozen=True)
class IM1(wire.Message):
    TYPE = 0x11
    LABEL = "IM1"
    a: Bitstring = wire.bits(1)
    b: Bitstring = wire.bits(2)


@dataclass(frozen=True)
class IM2(wire.Message):
    TYPE = 0x12
    LABEL = "IM2"
    c: Bitstring = wire.bits(5)
    d: Bitstring = wire.bits(6)
    t2: int = wire.stamp(8)


@dataclass(frozen=True)
class IM3(wire.Message):
    TYPE = 0x13
    LABEL = "IM3"
    a: Bitstring = wire.bits(1)
    b: Bitstring = wire.bits(2)
    t1: int = wire.stamp(4)
    c: Bitstring = wire.bits(5)
    d: Bitstring = wire.bits(6)
    t2: int = wire.stamp(8)


@dataclass(frozen=True)
class IM4(wire.Message):
    TYPE = 0x14
    LABEL = "IM4"
    e: Bitstring = wire.bits(9)
    f: Bitstring = wire.bits(10)
    g: Bitstring = wire.bits(11)


@dataclass(frozen=True)
class IM5(wire.Message):
    TYPE = 0x15
    LABEL = "G"
    g: Bitstring = wire.bits(11)


def bound_b(v: Bitstring, rr: Bitstring, t1: int, params: ProtocolParams) -> Bitstring:
    """B = h(R(V') || (L(Rr) xor T1)), with T1 cut to half a word."""
    half = params.width // 2
    t = truncate(timestamp_word(t1, params.width), half)
    return params.hash(concat(right_half(v), xor(left_half(rr), t)))


def i_reader_challenge(reader: ReaderState, clock: Clock, rng: Rng, params: ProtocolParams) -> IM1:
    v_prime = reader_login(reader, params)
    rr = drawn(reader.ops, "challenge", rng, params.width)
    t1 = clock.now()
    reader.ops[("challenge", "hash")] += 1
    m1 = IM1(a=xor(v_prime, rr), b=bound_b(v_prime, rr, t1, params))
    reader.pending = ReaderPending(rr=rr, t1=t1, v=v_prime, m1=m1)
    return m1


def i_tag_response(tag: TagState, im1: IM1, clock: Clock, rng: Rng, params: ProtocolParams) -> IM2:
    w = params.width
    rt = drawn(tag.ops, "response", rng, w)
    t2 = clock.now()
    c = xor(hashed(tag.ops, "response", params, concat(tag.s_cur, tag.id)), rt)
    d = hashed(tag.ops, "response", params, xor(rt, timestamp_word(t2, w)))
    tag.pending = TagPending(rt=rt, t2=t2)
    return IM2(c=c, d=d, t2=t2)


def i_reader_forward(reader: ReaderState, im1: IM1, im2: IM2, params: ProtocolParams) -> IM3:
    t1 = reader.pending.t1 if reader.pending is not None else 0
    _check_window(reader, t1, im2.t2, params)
    return IM3(a=im1.a, b=im1.b, t1=t1, c=im2.c, d=im2.d, t2=im2.t2)


def i_server_process(store: ServerStore, im3: IM3, clock: Clock, params: ProtocolParams) -> ServerOutcome:
    t3 = clock.now()
    if t3 - im3.t2 > params.delta_t:
        raise TimeoutAbort(f"T3 - T2 = {t3 - im3.t2} exceeds {params.delta_t}")
    ops = store.ops
    w = params.width

    reader_hit = None
    for r_handle, r_rec in store.readers.items():
        for slot, x in r_rec.slots():
            v = hashed(ops, "process", params, concat(x, r_rec.rid))
            rr = xor(im3.a, v)
            b_star = hashed(ops, "process", params,
                            concat(right_half(v), xor(left_half(rr), truncate(timestamp_word(im3.t1, w), w // 2))))
            if b_star == im3.b:
                reader_hit = (r_handle, r_rec, slot, x, rr, b_star)
                break
        if reader_hit:
            break
    if reader_hit is None:
        raise ReaderAuthFailure("no reader record reproduces B")

    tag_hit = None
    t2w = timestamp_word(im3.t2, w)
    for t_handle, t_rec in store.tags.items():
        for slot, ident, s in t_rec.slots():
            rt = xor(im3.c, hashed(ops, "process", params, concat(s, ident)))
            d_star = hashed(ops, "process", params, xor(rt, t2w))
            if d_star == im3.d:
                tag_hit = (t_handle, t_rec, slot, ident, s, rt, d_star)
                break
        if tag_hit:
            break
    if tag_hit is None:
        raise TagAuthFailure("no tag record reproduces D")

    r_handle, r_rec, r_slot, x, rr, b_star = reader_hit
    t_handle, t_rec, t_slot, ident, s, rt, d_star = tag_hit
    e, f, g, hxr, hsr = confirmations(params, ops, x, r_rec.rid, im3.t1, rr, s, ident, im3.t2, rt,
                                      store.data[t_handle])
    reused(ops, "process", 2)
    r_rec.x_new, r_rec.x_old = _shift(x, hxr)
    t_rec.s_new, t_rec.s_old = _shift(s, hsr)
    # the next identifier uses the pre-update s on both sides
    t_rec.id_new, t_rec.id_old = _shift(ident, xor(ident, s))
    return ServerOutcome(IM4(e=e, f=f, g=g), r_handle, t_handle, r_slot, t_slot, b_star, d_star)


def i_reader_finalize(reader: ReaderState, im4: IM4, params: ProtocolParams) -> tuple[Bitstring, IM5]:
    data = finish_reader(reader, im4.e, im4.f, params)
    return data, IM5(g=im4.g)


def i_tag_finalize(tag: TagState, g: Bitstring, params: ProtocolParams) -> bool:
    hsr = verify_g(tag, g, params)
    reused(tag.ops, "finalize")
    tag.id = xor(tag.id, tag.s_cur)
    tag.s_cur = hsr
    return True


def air_identifiers(msg):
    return None


# uniform names used by the session driver
reader_challenge = i_reader_challenge
tag_response = i_tag_response
reader_forward = i_reader_forward
server_process = i_server_process
reader_finalize = i_reader_finalize
tag_finalize = i_tag_finalize
