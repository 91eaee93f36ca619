"""The adversary's only handle on a world: Execute, Send, Corrupt and Test.

Every query is tallied in ``audit``.  Queries that expose secrets (Corrupt,
and the test-only ``reveal_bit``) also bump ``audit["secret_reads"]``, which
lets tests prove an attack ran on eavesdropped bits alone.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import ProtocolError
from ..primitives import Bitstring, Rng
from ..sim import World, run_session
from .. import wire


class QueryError(Exception):
    pass


class UnknownPartyError(QueryError):
    pass


class TestQueryError(QueryError):
    """Test was called twice in one game."""
    __test__ = False


class QueryBudgetExceeded(QueryError):
    pass


@dataclass(frozen=True)
class Tag:
    index: int


@dataclass(frozen=True)
class Reader:
    index: int


class Server:
    def __repr__(self):
        return "Server"


SERVER = Server()


@dataclass(frozen=True, eq=False)
class Challenge:
    """Opaque handle returned by Test; stands for T_b (or R_b)."""
    kind: str


Party = Union[Tag, Reader, Challenge, Server]

# message label -> step at which such a message travels
_STEP_OF = {"M1": "1.7", "IM1": "1.7", "M2": "2.4", "IM2": "2.4",
            "M3": "3.2", "IM3": "3.2", "M4": "4.7", "IM4": "4.7", "G": "5.5"}


class Oracle:
    def __init__(self, world: World, challenger_rng: Optional[Rng] = None,
                 budget: Optional[int] = None):
        self._world = world
        self._rng = challenger_rng or Rng(0)
        self._challenge: Optional[tuple[Challenge, object]] = None
        self._bit: Optional[int] = None
        self.budget = budget
        self.audit: Counter = Counter()

    # -- public knowledge -------------------------------------------------

    @property
    def protocol(self) -> str:
        return self._world.name

    @property
    def hash(self):
        return self._world.params.hash

    @property
    def width(self) -> int:
        return self._world.params.width

    @property
    def delta_t(self) -> int:
        return self._world.params.delta_t

    def time(self) -> int:
        """Read the (public) clock."""
        return self._world.clock.now()

    # -- bookkeeping ------------------------------------------------------

    def _count(self, kind: str) -> None:
        self.audit[kind] += 1
        self.audit["queries"] += 1
        if self.budget is not None and self.audit["queries"] > self.budget:
            raise QueryBudgetExceeded(f"more than {self.budget} queries")

    def _resolve(self, party, kind=None) -> tuple[str, int]:
        if isinstance(party, Challenge):
            if self._challenge is None or self._challenge[0] is not party:
                raise UnknownPartyError("stale challenge handle")
            party = self._challenge[1]
        if isinstance(party, Tag):
            if not 0 <= party.index < len(self._world.tags):
                raise UnknownPartyError(f"no tag {party.index}")
            resolved = ("tag", party.index)
        elif isinstance(party, Reader):
            if not 0 <= party.index < len(self._world.readers):
                raise UnknownPartyError(f"no reader {party.index}")
            resolved = ("reader", party.index)
        elif isinstance(party, Server):
            resolved = ("server", 0)
        else:
            raise UnknownPartyError(f"not a party: {party!r}")
        if kind is not None and resolved[0] != kind:
            raise UnknownPartyError(f"expected a {kind}, got {party!r}")
        return resolved

    # -- queries -----------------------------------------------------------

    def execute(self, reader, tag) -> list[wire.Message]:
        """Eavesdrop one honest session; returns the messages in flight order."""
        self._count("execute")
        _, r = self._resolve(reader, "reader")
        _, t = self._resolve(tag, "tag")
        start = len(self._world.transcript)
        run_session(self._world, r, t)
        return [e.message() for e in self._world.transcript[start:]]

    def send(self, receiver, message: Optional[wire.Message] = None) -> Union[wire.Message, bool]:
        """Deliver ``message`` to ``receiver`` and return its reply.

        ``send(reader)`` with no message opens a session (the reader answers
        with its challenge).  A rejection raises the protocol's error.
        """
        self._count("send")
        kind, k = self._resolve(receiver)
        w = self._world
        if message is not None:
            w.log(_STEP_OF[message.LABEL], message, origin="adversary")
        if kind == "reader" and message is None:
            w.new_session()
            reply = w.start(k)
            w.log("1.7", reply)
            return reply
        if message is None:
            raise QueryError(f"{kind} needs a message")
        label = message.LABEL
        if kind == "tag" and label in ("M1", "IM1"):
            reply = w.tag_reply(k, message)
            w.log("2.4", reply)
            return reply
        if kind == "tag" and label == "G":
            return w.tag_finish(k, message)
        if kind == "reader" and label in ("M2", "IM2"):
            reply = w.reader_forward(k, message)
            w.log("3.2", reply)
            return reply
        if kind == "reader" and label in ("M4", "IM4"):
            _, reply = w.reader_finish(k, message)
            w.log("5.5", reply)
            return reply
        if kind == "server" and label in ("M3", "IM3"):
            reply = w.server(message).m4
            w.log("4.7", reply)
            return reply
        raise QueryError(f"{kind} does not accept {label}")

    def try_send(self, receiver, message=None):
        """Like :meth:`send` but returns ``(reply, None)`` or ``(None, reason)``."""
        try:
            return self.send(receiver, message), None
        except ProtocolError as exc:
            return None, exc.reason

    def corrupt(self, tag, new_secret: Bitstring) -> Bitstring:
        self._count("corrupt")
        if isinstance(tag, Challenge):
            raise QueryError("corrupting the challenge party is not allowed")
        _, t = self._resolve(tag, "tag")
        self.audit["secret_reads"] += 1
        state = self._world.tags[t]
        old, state.s_cur = state.s_cur, new_secret
        return old

    def test(self, p0, p1) -> Challenge:
        self._count("test")
        if self._challenge is not None:
            raise TestQueryError("Test may be called once per game")
        k0, _ = self._resolve(p0)
        k1, _ = self._resolve(p1)
        if k0 != k1 or k0 == "server":
            raise QueryError("Test needs two tags or two readers")
        self._bit = self._rng.bit()
        handle = Challenge(k0)
        self._challenge = (handle, (p0, p1)[self._bit])
        return handle

    # -- challenger side -----------------------------------------------------

    @property
    def challenge_bit(self) -> Optional[int]:
        return self._bit

    def reveal_bit(self) -> int:
        """Leak the hidden bit.  Only for calibrating the game engine."""
        self.audit["secret_reads"] += 1
        return self._bit
