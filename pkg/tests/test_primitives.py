import random

import pytest
from hypothesis import given, strategies as st

from srta_sim.primitives import (EMPTY, Bitstring, Clock, HashConfig, Rng, WidthError,
                                 concat, fresh_nonce, hash_bits, left_half, now,
                                 right_half, timestamp_word, truncate, xor)

from conftest import ref_hash

H = HashConfig()


def words(width=128):
    return st.integers(0, (1 << width) - 1).map(lambda v: Bitstring(v, width))


# golden vectors, computed with hashlib/random directly and frozen here
def test_hash_of_empty_word():
    assert H(EMPTY).hex() == "af5570f5a1810b7af78caf4bc70a660f"


def test_hash_of_short_word():
    abc = Bitstring(int.from_bytes(b"abc", "big"), 24)
    assert H(abc).hex() == "eca042ae0e71da35b3aec1861617f2d7"


def test_hash_extends_past_digest_size():
    wide = HashConfig(width=512)
    assert H(EMPTY).hex() == wide(EMPTY).hex()[:32]
    assert wide(EMPTY).hex().endswith("5545f96370870c10b9")


def test_rng_seed_42_first_draw():
    assert Rng(42).draw(128) == 0xbdd640fb06671ad11c80317fa3b1799d


def test_rng_matches_stdlib_stream():
    ours, ref = Rng(7), random.Random(7)
    assert [ours.draw(64) for _ in range(5)] == [ref.getrandbits(64) for _ in range(5)]


def test_clock_reads_then_advances():
    c = Clock()
    assert [c.now(), c.now(), now(c)] == [0, 1, 2]
    c = Clock(increment=5, start=3)
    assert c.now() == 3 and c.peek() == 8
    c.advance(2)
    assert c.now() == 10


def test_clock_rejects_negative():
    with pytest.raises(ValueError):
        Clock(increment=-1)
    with pytest.raises(ValueError):
        Clock().advance(-1)


def test_bitstring_bounds():
    with pytest.raises(WidthError):
        Bitstring(4, 2)
    with pytest.raises(WidthError):
        Bitstring(-1, 8)


def test_xor_width_mismatch():
    with pytest.raises(WidthError):
        xor(Bitstring(1, 8), Bitstring(1, 16))


def test_concat_order_and_halves():
    a, b = Bitstring(0xAB, 8), Bitstring(0xCD, 8)
    ab = concat(a, b)
    assert ab == Bitstring(0xABCD, 16)
    assert left_half(ab) == a and right_half(ab) == b
    assert concat() == EMPTY


def test_halves_need_even_width():
    with pytest.raises(WidthError):
        left_half(Bitstring(1, 7))


def test_truncate_keeps_low_bits():
    assert truncate(Bitstring(0xABCD, 16), 8) == Bitstring(0xCD, 8)
    with pytest.raises(WidthError):
        truncate(Bitstring(1, 8), 9)


def test_timestamp_word():
    assert timestamp_word(5, 128) == Bitstring(5, 128)
    with pytest.raises(ValueError):
        timestamp_word(-1, 128)


def test_hex_round_trip():
    w = Bitstring(0x0F, 12)
    assert w.hex() == "00f"
    assert Bitstring.from_hex(w.hex(), 12) == w


def test_unknown_hash_algorithm():
    with pytest.raises(ValueError):
        HashConfig("nope")


@given(words(), words())
def test_xor_is_an_involution(a, b):
    assert xor(xor(a, b), b) == a
    assert a ^ b == b ^ a


@given(words(), words(), words())
def test_xor_is_associative(a, b, c):
    assert xor(xor(a, b), c) == xor(a, xor(b, c))


@given(words(64), words(64))
def test_concat_splits_back(a, b):
    ab = concat(a, b)
    assert len(ab) == 128
    assert (left_half(ab), right_half(ab)) == (a, b)


@given(st.integers(0, 300).flatmap(lambda w: st.tuples(st.just(w), st.integers(0, (1 << w) - 1))),
       st.sampled_from([8, 64, 128, 200]))
def test_hash_matches_reference_and_width(wv, width):
    w, v = wv
    word = Bitstring(v, w)
    out = hash_bits(word, HashConfig(width=width))
    assert len(out) == width
    assert out == ref_hash(word, width)


@given(st.integers(1, 64))
def test_framing_separates_widths(w):
    assert H(Bitstring(0, w)) != H(Bitstring(0, w + 1))


@given(st.integers(0, 2**32))
def test_same_seed_same_nonces(seed):
    a, b = Rng(seed), Rng(seed)
    assert fresh_nonce(a) == fresh_nonce(b)
    assert a.fork() == b.fork()
