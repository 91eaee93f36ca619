"""Scripted outsider attacks.

Each attack drives a world only through an :class:`Oracle` and builds its
forgeries from eavesdropped bits plus public parameters (hash, ΔT, clock).
Success is judged afterwards from the world and transcript.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from .. import improved, srta
from ..errors import ProtocolError, TimeoutAbort
from ..primitives import Rng, timestamp_word, xor
from ..sim import World, run_session
from .game import (GameResult, ReaderIdentifier, TagIdentifier,
                   run_upriv_game)
from .oracle import SERVER, Oracle, Reader, Tag

ATTACKS = ("tag-impersonation", "dos", "reader-impersonation",
           "tag-traceability", "reader-traceability")


@dataclass
class AttackOutcome:
    name: str
    protocol: str
    success: bool
    predicate: str
    details: dict = field(default_factory=dict)
    secret_reads: int = 0
    transcript: list = field(default_factory=list, repr=False)

    def to_dict(self, with_transcript: bool = False) -> dict:
        d = dataclasses.asdict(self)
        if not with_transcript:
            d.pop("transcript")
        return d


def _m2(oracle: Oracle, c, d, t2, ident):
    if oracle.protocol == "srta":
        return srta.M2(c=c, d=d, id=ident, t2=t2)
    return improved.IM2(c=c, d=d, t2=t2)


def _word(oracle: Oracle, t: int):
    return timestamp_word(t, oracle.width)


def _finish(world: World, name: str, success: bool, predicate: str, oracle: Oracle,
            start: int, **details) -> AttackOutcome:
    return AttackOutcome(
        name=name, protocol=world.name, success=success, predicate=predicate,
        details=details, secret_reads=oracle.audit["secret_reads"],
        transcript=[dataclasses.asdict(e) for e in world.transcript[start:]])


# -- tag impersonation -------------------------------------------------------

def _learn_tag_response(oracle: Oracle, reader, tag, complete: bool):
    """Observe one tag reply.  Unless ``complete``, push T2 past ΔT so the
    reader aborts and nobody updates."""
    m1 = oracle.send(reader)
    m2 = oracle.send(tag, m1)
    if complete:
        m3 = oracle.send(reader, m2)
        m4 = oracle.send(SERVER, m3)
        g = oracle.send(reader, m4)
        oracle.send(tag, g)
    else:
        late = dataclasses.replace(m2, t2=m2.t2 + oracle.delta_t + 1)
        _, reason = oracle.try_send(reader, late)
        if reason != TimeoutAbort.reason:
            raise RuntimeError(f"learning session did not time out: {reason}")
    return m2


def _forge_tag(oracle: Oracle, reader, learned):
    """Answer a live reader challenge with beta = C and gamma = h(C xor T2')."""
    m1 = oracle.send(reader)
    t2 = m1.t1 + 1 if hasattr(m1, "t1") else oracle.time()
    gamma = oracle.hash(xor(learned.c, _word(oracle, t2)))
    forged = _m2(oracle, learned.c, gamma, t2, getattr(learned, "id", None))
    m3, reason = oracle.try_send(reader, forged)
    if m3 is None:
        return None, reason, forged
    m4, reason = oracle.try_send(SERVER, m3)
    if m4 is not None:
        # relay so the reader finishes; the resulting G goes nowhere
        oracle.try_send(reader, m4)
    return m4, reason, forged


def attack_tag_impersonation(world: World, reader: int = 0, tag: int = 0,
                             learning_completes: bool = False,
                             oracle: Optional[Oracle] = None) -> AttackOutcome:
    oracle = oracle or Oracle(world)
    start = len(world.transcript)
    learned = _learn_tag_response(oracle, Reader(reader), Tag(tag), learning_completes)
    m4, reason, forged = _forge_tag(oracle, Reader(reader), learned)
    accepted = m4 is not None and world.last_server is not None and world.last_server.tag_handle == tag
    return _finish(world, "tag-impersonation", accepted,
                   "server emitted M4 for a forged tag reply", oracle, start,
                   rejection=reason, beta=forged.c.hex(), gamma=forged.d.hex(), t2=forged.t2)


# -- desynchronisation -------------------------------------------------------

def _intercept_m4(oracle: Oracle, reader, tag):
    """Run steps 1-4 honestly and swallow the server's reply."""
    m1 = oracle.send(reader)
    m2 = oracle.send(tag, m1)
    m3 = oracle.send(reader, m2)
    m4, reason = oracle.try_send(SERVER, m3)
    return reason


def attack_dos(world: World, reader: int = 0, tag: int = 0, mode: str = "impersonation",
               repeats: int = 1, oracle: Optional[Oracle] = None) -> AttackOutcome:
    """Intercept M4 once, then either impersonate the tag (``mode="impersonation"``)
    or intercept M4 ``repeats`` more times (``mode="drops"``).

    Success means a later honest session for the victim tag fails.  It is run
    through an untouched reader when one exists, so only the tag's side of
    the synchronisation decides the result.
    """
    if mode not in ("impersonation", "drops"):
        raise ValueError(f"unknown DoS mode {mode!r}")
    oracle = oracle or Oracle(world)
    start = len(world.transcript)
    steps = [_intercept_m4(oracle, Reader(reader), Tag(tag))]
    if mode == "impersonation":
        for _ in range(repeats):
            out = attack_tag_impersonation(world, reader, tag, oracle=oracle)
            steps.append("impersonation-accepted" if out.success else out.details["rejection"])
    else:
        for _ in range(repeats):
            steps.append(_intercept_m4(oracle, Reader(reader), Tag(tag)))

    witness = (reader + 1) % len(world.readers)
    in_window = world.tag_in_window(tag)
    honest = run_session(world, witness, tag)
    return _finish(world, "dos", not honest.ok,
                   "next honest session for the tag fails", oracle, start,
                   mode=mode, steps=steps, honest_outcome=honest.outcome,
                   honest_reader=witness, tag_in_window=in_window)


# -- reader impersonation ----------------------------------------------------

def attack_reader_impersonation(world: World, reader: int = 0, tag: int = 0,
                                learning_completes: bool = False,
                                oracle: Optional[Oracle] = None) -> AttackOutcome:
    oracle = oracle or Oracle(world)
    start = len(world.transcript)

    # learning: keep the reader's challenge, block it (or let it finish)
    m1 = oracle.send(Reader(reader))
    if learning_completes:
        m2 = oracle.send(Tag(tag), m1)
        m3 = oracle.send(Reader(reader), m2)
        g = oracle.send(Reader(reader), oracle.send(SERVER, m3))
        oracle.send(Tag(tag), g)
    alpha = m1.a

    # attack: fresh T1', lambda = h(alpha xor T1')
    t1 = oracle.time()
    lam = oracle.hash(xor(alpha, _word(oracle, t1)))
    if oracle.protocol == "srta":
        probe = srta.M1(a=alpha, b=lam, rid=m1.rid, t1=t1)
    else:
        probe = improved.IM1(a=alpha, b=lam)
    m2 = oracle.send(Tag(tag), probe)
    if oracle.protocol == "srta":
        m3 = srta.M3(a=alpha, b=lam, rid=m1.rid, t1=t1, c=m2.c, d=m2.d, id=m2.id, t2=m2.t2)
    else:
        m3 = improved.IM3(a=alpha, b=lam, t1=t1, c=m2.c, d=m2.d, t2=m2.t2)
    m4, reason = oracle.try_send(SERVER, m3)
    details = {"rejection": reason, "lambda": lam.hex(), "t1": t1}
    if m4 is not None:
        details["b_star"] = world.last_server.b_star.hex()
        details["f"] = m4.f.hex()
        g_cls = srta.M5 if oracle.protocol == "srta" else improved.IM5
        ok, why = oracle.try_send(Tag(tag), g_cls(g=m4.g))
        details["tag_accepted_g"] = bool(ok)
    return _finish(world, "reader-impersonation", m4 is not None,
                   "server emitted E, F, G to a forged reader", oracle, start, **details)


# -- traceability games ------------------------------------------------------

def attack_tag_traceability(protocol: str, trials: int = 1000, seed: int = 0, config=None) -> GameResult:
    return run_upriv_game(protocol, TagIdentifier, trials, seed=seed, config=config)


def attack_reader_traceability(protocol: str, trials: int = 1000, seed: int = 0, config=None) -> GameResult:
    return run_upriv_game(protocol, ReaderIdentifier, trials, seed=seed, config=config)


def trial_seeds(seed: int, trials: int) -> list[int]:
    rng = Rng(seed)
    return [rng.fork() for _ in range(trials)]
