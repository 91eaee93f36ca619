import pytest

from srta_sim.adversary import (SERVER, CoinFlip, LiteralCompareC, Omniscient, Oracle,
                                QueryBudgetExceeded, QueryError, Reader, Tag, TagIdentifier,
                                TestQueryError, UnknownPartyError, attack_dos,
                                attack_reader_impersonation, attack_tag_impersonation,
                                run_upriv_game)
from srta_sim.primitives import Bitstring
from srta_sim.sim import run_session


def test_execute_returns_the_five_messages(make_world, protocol):
    oracle = Oracle(make_world(protocol))
    msgs = oracle.execute(Reader(0), Tag(1))
    assert [m.LABEL for m in msgs][-1] == "G" and len(msgs) == 5
    assert oracle.audit["execute"] == 1 and oracle.audit["secret_reads"] == 0


def test_test_query_once(make_world):
    oracle = Oracle(make_world("srta"))
    oracle.test(Tag(0), Tag(1))
    with pytest.raises(TestQueryError):
        oracle.test(Tag(0), Tag(1))


def test_test_needs_matching_kinds(make_world):
    with pytest.raises(QueryError):
        Oracle(make_world("srta")).test(Tag(0), Reader(1))


def test_corrupt_refuses_challenge(make_world):
    oracle = Oracle(make_world("srta"))
    handle = oracle.test(Tag(0), Tag(1))
    with pytest.raises(QueryError):
        oracle.corrupt(handle, Bitstring(0, 128))


def test_unknown_party(make_world):
    oracle = Oracle(make_world("srta"))
    with pytest.raises(UnknownPartyError):
        oracle.execute(Reader(5), Tag(0))
    with pytest.raises(UnknownPartyError):
        oracle.execute(Tag(0), Tag(0))


def test_wrong_message_for_party(make_world):
    oracle = Oracle(make_world("srta"))
    m1 = oracle.send(Reader(0))
    with pytest.raises(QueryError):
        oracle.send(SERVER, m1)


def test_budget(make_world):
    oracle = Oracle(make_world("srta"), budget=1)
    oracle.execute(Reader(0), Tag(0))
    with pytest.raises(QueryBudgetExceeded):
        oracle.execute(Reader(0), Tag(0))


def test_send_logs_adversary_input(make_world):
    world = make_world("improved")
    oracle = Oracle(world)
    oracle.send(Tag(0), oracle.send(Reader(0)))
    assert [e.origin for e in world.transcript] == ["honest", "adversary", "honest"]


def test_game_calibration():
    coin = run_upriv_game("improved", CoinFlip, 400, seed=1)
    assert coin.advantage <= coin.halfwidth
    omni = run_upriv_game("improved", Omniscient, 50, seed=1)
    assert omni.advantage == 0.5 and omni.halfwidth == 0


def test_literal_c_rule_cannot_link_srta():
    res = run_upriv_game("srta", LiteralCompareC, 400, seed=2)
    assert res.advantage <= res.halfwidth


def test_identifier_distinguisher_links_srta():
    assert run_upriv_game("srta", TagIdentifier, 50, seed=3).advantage == 0.5


def test_game_rejects_zero_trials():
    with pytest.raises(ValueError):
        run_upriv_game("srta", CoinFlip, 0)


@pytest.mark.parametrize("attack", [attack_tag_impersonation, attack_dos, attack_reader_impersonation])
def test_attacks_read_no_secrets(make_world, protocol, attack):
    out = attack(make_world(protocol, seed=4))
    assert out.secret_reads == 0
    assert out.success == (protocol == "srta")
    assert out.transcript


def test_reader_forgery_equals_server_b_star(make_world):
    out = attack_reader_impersonation(make_world("srta", seed=6))
    assert out.success and out.details["lambda"] == out.details["b_star"]
    # the tag's own reply was genuine, so it accepts the server's G and updates
    assert out.details["tag_accepted_g"] is True


def test_tag_forgery_rejected_by_improved_server(make_world):
    out = attack_tag_impersonation(make_world("improved", seed=6))
    assert not out.success and out.details["rejection"] == "tag-auth-failure"


def test_srta_forgery_works_after_a_completed_learning_session(make_world):
    # the forged reply never depends on s, so updating it does not help
    assert attack_tag_impersonation(make_world("srta", seed=7), learning_completes=True).success
    assert attack_reader_impersonation(make_world("srta", seed=7), learning_completes=True).success


def test_improved_survives_repeated_drops(make_world):
    out = attack_dos(make_world("improved", seed=8), mode="drops", repeats=10)
    assert not out.success and out.details["tag_in_window"]


def test_srta_single_interception_desynchronizes(make_world):
    world = make_world("srta", seed=9)
    oracle = Oracle(world)
    m4 = oracle.send(SERVER, oracle.send(Reader(0), oracle.send(Tag(0), oracle.send(Reader(0)))))
    assert m4 is not None
    assert run_session(world, 1, 0).outcome == "tag-auth-failure"


@pytest.mark.parametrize("protocol, server_answers", [("srta", True), ("improved", False)])
def test_corrupted_tag(make_world, protocol, server_answers):
    world = make_world(protocol, seed=10)
    Oracle(world).corrupt(Tag(0), Bitstring(99, 128))
    assert run_session(world).outcome == "tag-auth-failure"
    # SRTA's server accepts the corrupted tag's reply; only the tag's G check notices
    assert (world.last_server is not None) == server_answers
