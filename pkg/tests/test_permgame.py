"""Tests for the permutation merge and the bijection marking game."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamelab.engine import (ALICE, ALICE_WINS, BOB, BOB_WINS, Budget,
                            IllegalMove, is_pass, run_game)
from gamelab.permgame import (AliceMinConnection, CoveringBob, MarkingRules,
                              MarkingState, NotTotal, check_bob_win,
                              make_bob_adversary, merge_total_programs,
                              run_summary, shortlex_strings)


def test_shortlex_order():
    assert shortlex_strings(2) == ["", "0", "1", "00", "01", "10", "11"]


def test_merge_identity():
    universe = shortlex_strings(2)
    ident = {u: u for u in universe}
    assert merge_total_programs(ident, ident, 2) == ident


def test_merge_swap():
    # p and q both swap 0 and 1 and fix the empty string: every pair matches
    p = {"": "", "0": "1", "1": "0"}
    assert merge_total_programs(p, p, 1) == p


def test_merge_constant_completion():
    # only (0,0) matches; the leftovers complete in shortlex order
    p = {"": "0", "0": "0", "1": "0"}
    q = {"": "1", "0": "0", "1": "1"}
    assert merge_total_programs(p, q, 1) == {"0": "0", "": "", "1": "1"}


def test_merge_rejects_partial_maps():
    with pytest.raises(NotTotal):
        merge_total_programs({"": ""}, {"": ""}, 1)
    bad = {"": "00", "0": "0", "1": "1"}  # output too long for n=1
    with pytest.raises(NotTotal):
        merge_total_programs(bad, {"": "", "0": "0", "1": "1"}, 1)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_merge_is_permutation_fixing_matches(data):
    n = data.draw(st.integers(0, 3))
    universe = shortlex_strings(n)
    p = {u: data.draw(st.sampled_from(universe)) for u in universe}
    q = {u: data.draw(st.sampled_from(universe)) for u in universe}
    perm = merge_total_programs(p, q, n)
    assert sorted(perm) == sorted(universe)
    assert sorted(perm.values()) == sorted(universe)
    for u in universe:
        if q[p[u]] == u:
            assert perm[u] == p[u]


def test_alice_marks_least_vertices_first():
    alice = AliceMinConnection()
    state = MarkingState(k=1, n=3)
    assert alice.move(state) == {"mark": ["X", 0]}
    state.marked_x.add(0)
    assert alice.move(state) == {"mark": ["Y", 0]}


def test_alice_avoids_covered_vertex_after_bob_covers():
    state = MarkingState(k=1, n=3, marked_x={0}, marked_y={0})
    state.bijections.append(tuple(range(8)))  # identity covers (0, 0)
    move = AliceMinConnection().move(state)
    side, v = move["mark"]
    assert side == "X"
    assert v == 1  # least vertex not connected to the marked y


def test_alice_waits_for_coverage():
    state = MarkingState(k=1, n=3, marked_x={0}, marked_y={0})
    assert is_pass(AliceMinConnection().move(state))


def test_alice_passes_when_budget_exhausted():
    state = MarkingState(k=1, n=3, marked_x={0, 1}, marked_y={2, 3})
    state.bijections += [
        tuple(range(8)),
        tuple((i + 2) % 8 for i in range(8)),
        tuple((i + 3) % 8 for i in range(8)),
        tuple((i + 1) % 8 for i in range(8)),
    ]
    assert not state.uncovered_pairs()
    assert is_pass(AliceMinConnection().move(state))


def test_check_bob_win_vacuous_and_concrete():
    assert check_bob_win(MarkingState(1, 3)) == BOB_WINS
    state = MarkingState(1, 3, marked_x={0}, marked_y={5})
    assert check_bob_win(state) == ALICE_WINS
    state.bijections.append(tuple([5] + [i for i in range(8) if i != 5]))
    assert check_bob_win(state) == BOB_WINS


def test_bijection_validation():
    rules = MarkingRules(1, 3, bob_budget=1)
    state = rules.initial_state()
    with pytest.raises(IllegalMove):
        rules.validate_move(state, BOB, {"bijections": [[0, 0, 1, 2, 3, 4, 5, 6]]})
    rules.apply_move(state, BOB, {"bijections": [list(range(8))]})
    with pytest.raises(IllegalMove):
        rules.validate_move(state, BOB, {"bijections": [list(range(8))]})  # budget


def test_mark_budget_validation():
    rules = MarkingRules(1, 3, bob_budget=None)
    state = rules.initial_state()
    state.marked_x = {0, 1}
    with pytest.raises(IllegalMove):
        rules.validate_move(state, ALICE, {"mark": ["X", 2]})


@pytest.mark.parametrize("k", [1, 2])
def test_low_budget_bob_loses(k):
    n = 2 * k + 1
    rules = MarkingRules(k, n, bob_budget=2 ** (2 * k - 2))
    bob = make_bob_adversary("greedy", k, n, 2 ** (2 * k - 2))
    trace = run_game(rules, AliceMinConnection(), bob,
                     Budget(16 * 4 ** k + 32), seed=k)
    assert trace.verdict == ALICE_WINS


@pytest.mark.parametrize("k", [1, 2])
def test_big_budget_bob_wins(k):
    n = 2 * k + 1
    rules = MarkingRules(k, n, bob_budget=2 ** (2 * k))
    bob = make_bob_adversary("pairwise", k, n, 2 ** (2 * k))
    trace = run_game(rules, AliceMinConnection(), bob,
                     Budget(16 * 4 ** k + 32), seed=k)
    assert trace.verdict == BOB_WINS


@pytest.mark.parametrize("k", [1, 2])
def test_unlimited_bob_consumes_many_bijections(k):
    n = 2 * k + 1
    rules = MarkingRules(k, n, bob_budget=None)
    bob = make_bob_adversary("greedy", k, n, None)
    trace = run_game(rules, AliceMinConnection(), bob,
                     Budget(16 * 4 ** k + 32), seed=7 * k)
    summary = run_summary(trace)
    assert summary["verdict"] == BOB_WINS
    assert summary["bijections_listed"] >= 2 ** (2 * k - 1)
    assert summary["pairs_covered"] == 4 ** k


def test_covering_bob_passes_without_work():
    bob = CoveringBob(budget=4)
    bob.start(random.Random(1))
    assert is_pass(bob.move(MarkingState(1, 3)))
