"""Untraceable-privacy (UPriv) game and a few stock distinguishers."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from ..config import ScenarioConfig
from ..errors import ProtocolError
from ..primitives import Rng, timestamp_word, xor
from ..sim import World
from .oracle import Challenge, Oracle, QueryBudgetExceeded, Reader, Tag


@dataclass
class GameResult:
    protocol: str
    distinguisher: str
    trials: int
    wins: int
    voided: int = 0
    z: float = 3.0
    guesses: list = field(default_factory=list, repr=False)

    @property
    def win_rate(self) -> float:
        return self.wins / self.trials if self.trials else 0.5

    @property
    def advantage(self) -> float:
        """|Pr[b' = b] - 1/2|, always within [0, 1/2]."""
        return abs(self.win_rate - 0.5)

    @property
    def halfwidth(self) -> float:
        if not self.trials:
            return 0.5
        p = self.win_rate
        return self.z * math.sqrt(p * (1 - p) / self.trials)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("guesses")
        d.update(advantage=self.advantage, halfwidth=self.halfwidth, win_rate=self.win_rate)
        return d


class Distinguisher:
    """Three-phase adversary.  ``challenge`` must call ``oracle.test`` once."""

    name = "distinguisher"

    def __init__(self, rng: Rng):
        self.rng = rng

    def learn(self, oracle: Oracle) -> None:
        pass

    def challenge(self, oracle: Oracle) -> None:
        raise NotImplementedError

    def guess(self) -> int:
        raise NotImplementedError


class CoinFlip(Distinguisher):
    name = "coin-flip"

    def challenge(self, oracle):
        oracle.test(Tag(0), Tag(1))

    def guess(self):
        return self.rng.bit()


class Omniscient(Distinguisher):
    """Reads the hidden bit; calibrates the upper end of the advantage scale."""

    name = "omniscient"

    def challenge(self, oracle):
        oracle.test(Tag(0), Tag(1))
        self._b = oracle.reveal_bit()

    def guess(self):
        return self._b


def forged_challenge(oracle: Oracle, learned, t1: int):
    """A challenge replaying the eavesdropped A with B# = h(A xor T1')."""
    from .. import improved, srta
    b_sharp = oracle.hash(xor(learned.a, timestamp_word(t1, oracle.width)))
    if oracle.protocol == "srta":
        return srta.M1(a=learned.a, b=b_sharp, rid=learned.rid, t1=t1)
    return improved.IM1(a=learned.a, b=b_sharp)


class TagIdentifier(Distinguisher):
    """Links the challenge tag through the identifier field of its reply.

    Falls back to comparing C when the reply carries no identifier.
    """

    name = "tag-id"

    def learn(self, oracle):
        msgs = oracle.execute(Reader(0), Tag(0))
        self._m1, self._m2 = msgs[0], msgs[1]
        self._seen = getattr(self._m2, "id", None)

    def challenge(self, oracle):
        target = oracle.test(Tag(0), Tag(1))
        probe = forged_challenge(oracle, self._m1, oracle.time())
        self._reply, _ = oracle.try_send(target, probe)

    def guess(self):
        if self._reply is None:
            return self.rng.bit()
        if self._seen is not None:
            return 0 if getattr(self._reply, "id", None) == self._seen else 1
        return 0 if self._reply.c == self._m2.c else 1


class LiteralCompareC(TagIdentifier):
    """Guess 0 iff C' == C, taken literally.  C carries a fresh nonce, so this never links."""

    name = "literal-C"

    def guess(self):
        if self._reply is None:
            return self.rng.bit()
        return 0 if self._reply.c == self._m2.c else 1


class ReaderIdentifier(Distinguisher):
    """Stores the RID seen with R0 and compares it with the challenge reader's."""

    name = "reader-id"

    def learn(self, oracle):
        self._zeta = getattr(oracle.execute(Reader(0), Tag(0))[0], "rid", None)

    def challenge(self, oracle):
        target = oracle.test(Reader(0), Reader(1))
        self._z = getattr(oracle.execute(target, Tag(0))[0], "rid", None)

    def guess(self):
        if self._zeta is None or self._z is None:
            return 1
        return 0 if self._zeta == self._z else 1


def run_upriv_game(protocol: str, make: Callable[[Rng], Distinguisher], trials: int,
                   seed: int = 0, config: Optional[ScenarioConfig] = None,
                   budget: Optional[int] = None) -> GameResult:
    """Play ``trials`` independent games, each in a freshly provisioned world."""
    if trials < 1:
        raise ValueError("need at least one trial")
    config = (config or ScenarioConfig()).replace(protocol=protocol)
    if config.n_tags < 2 or config.n_readers < 2:
        config = config.replace(n_tags=max(2, config.n_tags), n_readers=max(2, config.n_readers))
    seeds = Rng(seed)
    result = None
    wins = voided = 0
    guesses = []
    for _ in range(trials):
        world = World(config.replace(seed=seeds.fork()))
        oracle = Oracle(world, challenger_rng=Rng(seeds.fork()), budget=budget)
        dist = make(Rng(seeds.fork()))
        try:
            dist.learn(oracle)
            dist.challenge(oracle)
            if oracle.challenge_bit is None:
                voided += 1
                continue
            guess = dist.guess()
        except (QueryBudgetExceeded, ProtocolError):
            voided += 1
            continue
        guesses.append((oracle.challenge_bit, guess))
        wins += guess == oracle.challenge_bit
        result = dist.name
    return GameResult(protocol=protocol, distinguisher=result or make(Rng(0)).name,
                      trials=trials - voided, wins=wins, voided=voided, guesses=guesses)
