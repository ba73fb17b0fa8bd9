"""Tests for the partial-vs-total function listing game."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamelab.engine import (ALICE, ALICE_WINS, BOB, BOB_WINS, Budget,
                            IllegalMove, is_pass, run_game)
from gamelab.totalcond import (AliceFreshPoint, ExhaustiveNode, GnRules,
                               GnState, GreedyBob, RandomBob, ScriptedBob,
                               UnsupportedSize, all_strings, check_alice_win,
                               make_bob_adversary)


def test_all_strings_lexicographic():
    assert all_strings(1) == ["0", "1"]
    assert all_strings(2) == ["00", "01", "10", "11"]


def test_alice_opens_with_least_point():
    state = GnState(1)
    move = AliceFreshPoint().move(state)
    assert move == {"define": [["0", "0"]]}


def test_alice_answers_covered_challenge():
    # Bob's map sends 0 to 0, covering the live challenge (0,0); Alice must
    # pick y=1 and a value his map avoids there
    state = GnState(1, a_func={"0": "0"}, bob_list=[("0", "0")],
                    alice_current=("0", "0"))
    move = AliceFreshPoint().move(state)
    assert move == {"define": [["1", "1"]]}


def test_alice_passes_while_challenge_uncovered():
    state = GnState(1, a_func={"0": "0"}, bob_list=[("1", "1")],
                    alice_current=("0", "0"))
    assert is_pass(AliceFreshPoint().move(state))


def test_check_alice_win_examples():
    assert check_alice_win(GnState(1)) == BOB_WINS  # nothing defined
    identity = ("0", "1")
    assert check_alice_win(
        GnState(1, a_func={"0": "1"}, bob_list=[identity])) == ALICE_WINS
    assert check_alice_win(
        GnState(1, a_func={"0": "0"}, bob_list=[identity])) == BOB_WINS


def test_greedy_bob_lexicographic_completion():
    state = GnState(1, a_func={"0": "1"}, alice_current=("0", "1"))
    move = GreedyBob(1).move(state)
    assert move == {"list": [["1", "0"]]}


def test_random_bob_with_empty_budget_passes():
    class ZeroRng:
        def randint(self, a, b):
            return 0

    bob = RandomBob(2)
    bob.start(ZeroRng())
    assert is_pass(bob.move(GnState(2)))


def test_bob_list_budget_enforced():
    rules = GnRules(1)
    state = rules.initial_state()
    f = ["0", "0"]
    rules.validate_move(state, BOB, {"list": [f]})
    rules.apply_move(state, BOB, {"list": [f]})
    with pytest.raises(IllegalMove):
        rules.validate_move(state, BOB, {"list": [f]})


def test_a_func_write_once():
    rules = GnRules(1)
    state = rules.initial_state()
    rules.apply_move(state, ALICE, {"define": [["0", "0"]]})
    with pytest.raises(IllegalMove):
        rules.validate_move(state, ALICE, {"define": [["0", "1"]]})


def test_exhaustive_node_structure():
    node = ExhaustiveNode(1)
    assert len(node.all_total_maps()) == 4
    leaves = node.leaf_verdicts()
    assert all(len(history) <= 1 for history, _ in leaves)
    assert all(verdict == ALICE_WINS for _, verdict in leaves)


def test_exhaustive_rejects_larger_n():
    with pytest.raises(UnsupportedSize):
        make_bob_adversary("exhaustive-node", 2)


def test_make_bob_adversary_kinds():
    assert isinstance(make_bob_adversary("greedy", 2), GreedyBob)
    assert isinstance(make_bob_adversary("random", 2), RandomBob)
    with pytest.raises(ValueError):
        make_bob_adversary("psychic", 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_alice_beats_greedy_with_bounded_moves(n):
    rules = GnRules(n)
    trace = run_game(rules, AliceFreshPoint(), GreedyBob(n),
                     Budget(4 * 2 ** n + 8), seed=n)
    assert trace.verdict == ALICE_WINS
    alice_moves = sum(1 for mv in trace.moves
                      if mv.actor == ALICE and not is_pass(mv.payload))
    assert alice_moves <= 2 ** n


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_alice_beats_any_upfront_list(data):
    # against any legal list of total maps dumped at round zero, the
    # reference Alice still ends with an uncovered point
    n = data.draw(st.integers(1, 2))
    strings = all_strings(n)
    count = data.draw(st.integers(0, 2 ** n - 1))
    maps = data.draw(st.lists(
        st.lists(st.sampled_from(strings), min_size=len(strings), max_size=len(strings)),
        min_size=count, max_size=count))
    bob = ScriptedBob([{"list": [f]} for f in maps])
    trace = run_game(GnRules(n), AliceFreshPoint(), bob,
                     Budget(4 * 2 ** n + 8), seed=0)
    assert trace.verdict == ALICE_WINS
