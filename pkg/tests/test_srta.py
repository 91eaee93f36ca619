import dataclasses

import pytest

from srta_sim import srta
from srta_sim.errors import (LoginFailure, ReaderAuthFailure, TagAuthFailure,
                             TimeoutAbort, UnknownParty)
from srta_sim.primitives import Bitstring, xor
from srta_sim.sim import run_session

from conftest import ref_cat, ref_hash, ref_t


def stepwise(world, r=0, t=0):
    """Run one SRTA session by hand, keeping every secret the formulas need."""
    reader, tag, rec = world.readers[r], world.tags[t], world.store.tags[t]
    x, s, ident, rid = reader.x_cur, tag.s_cur, tag.id, reader.rid
    m1 = world.start(r)
    rr = reader.pending.rr
    m2 = world.tag_reply(t, m1)
    rt = tag.pending.rt
    m3 = world.reader_forward(r, m2)
    out = world.server(m3)
    return dict(x=x, s=s, ident=ident, rid=rid, rr=rr, rt=rt, m1=m1, m2=m2, m3=m3, out=out,
                data=world.store.data[t], rec=rec)


def test_messages_match_formulas(make_world):
    world = make_world("srta", seed=3)
    k = stepwise(world)
    x, s, ident, rid, rr, rt = k["x"], k["s"], k["ident"], k["rid"], k["rr"], k["rt"]
    m1, m2, m4 = k["m1"], k["m2"], k["out"].m4
    v = ref_hash(ref_cat(x, rid))
    assert m1.a == xor(v, rr)
    assert m1.b == ref_hash(xor(xor(v, ref_t(m1.t1)), rr))
    assert m1.rid == rid
    hs = ref_hash(ref_cat(s, ident))
    assert m2.c == xor(hs, rt)
    assert m2.d == ref_hash(xor(xor(hs, ref_t(m2.t2)), rt))
    assert m2.id == ident
    hxr, hsr = ref_hash(xor(x, rr)), ref_hash(xor(s, rt))
    assert m4.e == ref_hash(ref_cat(x, rid, ref_t(m1.t1), rr, hxr))
    assert m4.f == xor(k["data"], hxr)
    assert m4.g == ref_hash(ref_cat(s, ident, ref_t(m2.t2), rt, hsr))


def test_forward_copies_both_messages(make_world):
    k = stepwise(make_world("srta"))
    m1, m2, m3 = k["m1"], k["m2"], k["m3"]
    assert (m3.a, m3.b, m3.rid, m3.t1) == (m1.a, m1.b, m1.rid, m1.t1)
    assert (m3.c, m3.d, m3.id, m3.t2) == (m2.c, m2.d, m2.id, m2.t2)


def test_updates_after_honest_session(make_world):
    world = make_world("srta", seed=4)
    k = stepwise(world)
    data, g = world.reader_finish(0, k["out"].m4)
    world.tag_finish(0, g)
    assert data == k["data"]
    assert world.readers[0].x_cur == ref_hash(xor(k["x"], k["rr"]))
    assert world.tags[0].s_cur == ref_hash(xor(k["s"], k["rt"]))
    assert world.tags[0].id == k["ident"]
    rec = world.store.tags[0]
    assert (rec.s_new, rec.s_old) == (world.tags[0].s_cur, k["s"])
    assert world.synchronized()


def test_forgery_identities_hold(make_world):
    world = make_world("srta", seed=5)
    for _ in range(20):
        k = stepwise(world)
        assert k["m1"].b == srta.forged_b(k["m1"].a, k["m1"].t1, world.params)
        assert k["m2"].d == srta.forged_d(k["m2"].c, k["m2"].t2, world.params)
        data, g = world.reader_finish(0, k["out"].m4)
        world.tag_finish(0, g)


def test_server_check_ignores_secret(make_world):
    # B* and D* collapse to h(A xor T1) and h(C xor T2), so any stored secret passes
    world = make_world("srta", seed=6)
    world.store.tags[0].s_new = Bitstring(12345, 128)
    world.store.readers[0].x_new = Bitstring(678, 128)
    k = stepwise(world)
    assert k["out"].tag_slot == "new" and k["out"].reader_slot == "new"
    with pytest.raises(ReaderAuthFailure):
        world.reader_finish(0, k["out"].m4)


def test_login_rejects_wrong_password(make_world):
    world = make_world("srta")
    reader = dataclasses.replace(world.readers[0], rpw=Bitstring(1, 128))
    with pytest.raises(LoginFailure):
        srta.reader_login(reader, world.params)


@pytest.mark.parametrize("delta_t, outcome", [(0, "timeout-abort"), (1, "success")])
def test_reader_timeout_boundary(make_world, delta_t, outcome):
    assert run_session(make_world("srta", delta_t=delta_t)).outcome == outcome


def test_server_timeout(make_world):
    world = make_world("srta", delta_t=3)
    m3 = world.reader_forward(0, world.tag_reply(0, world.start(0)))
    world.clock.advance(5)
    with pytest.raises(TimeoutAbort):
        world.server(m3)


def test_unknown_identifiers(make_world):
    world = make_world("srta")
    m3 = world.reader_forward(0, world.tag_reply(0, world.start(0)))
    with pytest.raises(UnknownParty):
        world.server(dataclasses.replace(m3, id=Bitstring(1, 128)))
    with pytest.raises(UnknownParty):
        world.server(dataclasses.replace(m3, rid=Bitstring(1, 128)))


def test_flipped_e_and_g_rejected(make_world):
    world = make_world("srta")
    out = world.server(world.reader_forward(0, world.tag_reply(0, world.start(0))))
    bad = dataclasses.replace(out.m4, e=xor(out.m4.e, Bitstring(1, 128)))
    with pytest.raises(ReaderAuthFailure):
        world.reader_finish(0, bad)
    with pytest.raises(TagAuthFailure):
        world.tag_finish(0, srta.M5(g=xor(out.m4.g, Bitstring(1, 128))))


def test_identifiers_travel_in_clear(make_world):
    k = stepwise(make_world("srta"))
    assert srta.air_identifiers(k["m1"]) == ("rid", k["rid"])
    assert srta.air_identifiers(k["m2"]) == ("id", k["ident"])
    assert srta.air_identifiers(k["out"].m4) is None


def test_tag_hash_counts(make_world):
    rep = run_session(make_world("srta"))
    assert rep.ops["tag"] == {"response": {"hash": 2, "reuse": 1, "rng": 1},
                              "finalize": {"hash": 2, "reuse": 1}}
