"""Bit-level building blocks shared by both protocols.

Every protocol field (identifiers, secrets, nonces, digests, and the
timestamps when they enter a formula) is a :class:`Bitstring`.  Concatenation
simply yields a wider Bitstring, so the hash accepts any width.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

DEFAULT_WIDTH = 128


class WidthError(ValueError):
    """Operands have incompatible widths."""


@dataclass(frozen=True)
class Bitstring:
    value: int
    width: int

    def __post_init__(self):
        if self.width < 0:
            raise WidthError(f"negative width {self.width}")
        if not 0 <= self.value < (1 << self.width) and not (self.width == 0 and self.value == 0):
            raise WidthError(f"value does not fit in {self.width} bits")

    @classmethod
    def zeros(cls, width: int) -> "Bitstring":
        return cls(0, width)

    @classmethod
    def ones(cls, width: int) -> "Bitstring":
        return cls((1 << width) - 1, width)

    @classmethod
    def from_hex(cls, text: str, width: int) -> "Bitstring":
        return cls(int(text, 16) if text else 0, width)

    def hex(self) -> str:
        nchars = (self.width + 3) // 4
        return format(self.value, f"0{nchars}x") if nchars else ""

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.width + 7) // 8, "big")

    def __xor__(self, other: "Bitstring") -> "Bitstring":
        return xor(self, other)

    def __len__(self) -> int:
        return self.width

    def __repr__(self) -> str:
        return f"Bitstring(0x{self.hex() or '0'}, w={self.width})"


EMPTY = Bitstring(0, 0)


def xor(a: Bitstring, b: Bitstring) -> Bitstring:
    if a.width != b.width:
        raise WidthError(f"xor of {a.width}-bit and {b.width}-bit words")
    return Bitstring(a.value ^ b.value, a.width)


def concat(*parts: Bitstring) -> Bitstring:
    """Join words left to right; the first operand lands in the high-order bits."""
    value, width = 0, 0
    for p in parts:
        value = (value << p.width) | p.value
        width += p.width
    return Bitstring(value, width)


def _check_even(a: Bitstring) -> int:
    if a.width % 2:
        raise WidthError(f"cannot halve a {a.width}-bit word")
    return a.width // 2


def left_half(a: Bitstring) -> Bitstring:
    half = _check_even(a)
    return Bitstring(a.value >> half, half)


def right_half(a: Bitstring) -> Bitstring:
    half = _check_even(a)
    return Bitstring(a.value & ((1 << half) - 1), half)


def truncate(a: Bitstring, width: int) -> Bitstring:
    """Keep the ``width`` low-order bits."""
    if not 0 <= width <= a.width:
        raise WidthError(f"cannot truncate {a.width} bits to {width}")
    return Bitstring(a.value & ((1 << width) - 1), width)


def timestamp_word(ticks: int, width: int) -> Bitstring:
    """Encode a tick count as a big-endian word of the given width."""
    if ticks < 0:
        raise ValueError("timestamps are non-negative")
    return Bitstring(ticks & ((1 << width) - 1), width)


@dataclass(frozen=True)
class HashConfig:
    """A standard hash adapted to produce ``width``-bit digests.

    The input is framed as an 8-byte big-endian bit length followed by the
    big-endian value bytes, so words of different widths never collide.
    Digests longer than ``width`` are truncated to their leading bits; shorter
    ones are extended by re-hashing the previous block.
    """

    algorithm: str = "sha256"
    width: int = DEFAULT_WIDTH

    def __post_init__(self):
        if self.algorithm not in hashlib.algorithms_available:
            raise ValueError(f"unknown hash algorithm {self.algorithm!r}")
        if self.width <= 0:
            raise ValueError("hash width must be positive")

    def _digest(self, data: bytes) -> bytes:
        h = hashlib.new(self.algorithm, data)
        if self.algorithm.startswith("shake"):
            return h.digest((self.width + 7) // 8)
        return h.digest()

    def __call__(self, data: Bitstring) -> Bitstring:
        return hash_bits(data, self)


def hash_bits(data: Bitstring, cfg: HashConfig) -> Bitstring:
    framed = data.width.to_bytes(8, "big") + data.to_bytes()
    block = cfg._digest(framed)
    out = block
    while len(out) * 8 < cfg.width:
        block = cfg._digest(block)
        out += block
    full = int.from_bytes(out, "big")
    return Bitstring(full >> (len(out) * 8 - cfg.width), cfg.width)


class Rng:
    """Seeded nonce stream (Mersenne Twister from the standard library)."""

    def __init__(self, seed: int):
        self.seed = seed
        self._gen = random.Random(seed)

    def draw(self, width: int) -> int:
        return self._gen.getrandbits(width) if width else 0

    def bit(self) -> int:
        return self._gen.getrandbits(1)

    def fork(self) -> int:
        """A 63-bit seed for an independent child stream."""
        return self._gen.getrandbits(63)


def fresh_nonce(rng: Rng, width: int = DEFAULT_WIDTH) -> Bitstring:
    return Bitstring(rng.draw(width), width)


class Clock:
    """Logical clock; each reading returns the current tick then advances."""

    def __init__(self, increment: int = 1, start: int = 0):
        if increment < 0 or start < 0:
            raise ValueError("clock values are non-negative")
        self.ticks = start
        self.increment = increment

    def now(self) -> int:
        t = self.ticks
        self.ticks += self.increment
        return t

    def peek(self) -> int:
        return self.ticks

    def advance(self, ticks: int) -> None:
        if ticks < 0:
            raise ValueError("clock cannot run backwards")
        self.ticks += ticks


def now(clock: Clock) -> int:
    return clock.now()
