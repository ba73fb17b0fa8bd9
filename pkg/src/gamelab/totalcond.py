"""Partial-function vs. total-function-list game on n-bit strings.

Alice gradually defines a partial map on n-bit strings; Bob lists total
maps, fewer than 2^n of them.  Alice wins if some defined point of her map
disagrees with every listed total map at that point.  The reference Alice
plays a fresh point whenever her current challenge gets covered, choosing
a value every listed map avoids.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .engine import ALICE, ALICE_WINS, BOB, BOB_WINS, PASS, IllegalMove, is_pass


class Exhausted(AssertionError):
    """No fresh input string left; unreachable while Bob's list budget holds."""


class UnsupportedSize(ValueError):
    """Exhaustive search is only implemented for n = 1."""


def all_strings(n: int) -> list[str]:
    """All n-bit strings in lexicographic order."""
    return [format(i, f"0{n}b") for i in range(2 ** n)]


@dataclass
class GnState:
    n: int
    a_func: dict[str, str] = field(default_factory=dict)
    bob_list: list[tuple[str, ...]] = field(default_factory=list)
    alice_current: tuple[str, str] | None = None

    def rank(self, s: str) -> int:
        return int(s, 2)

    def list_values_at(self, y: str) -> set[str]:
        r = self.rank(y)
        return {f[r] for f in self.bob_list}

    def covered(self, y: str, x: str) -> bool:
        """Does some listed total map send y to x?"""
        return x in self.list_values_at(y)


def check_alice_win(state: GnState) -> str:
    """Alice wins iff some defined point disagrees with every listed map."""
    for y, x in state.a_func.items():
        if not state.covered(y, x):
            return ALICE_WINS
    return BOB_WINS


class GnRules:
    """Move validation and bookkeeping for the listing game.

    Alice: ``{"define": [[y, x], ...]}`` adds points (write-once).
    Bob:   ``{"list": [[out_0, ..., out_{2^n-1}], ...]}`` appends total maps,
    outputs given in input-lexicographic order; the list must stay shorter
    than 2^n.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.game_id = "totalcond"
        self.params = {"n": n}
        self.first_mover = ALICE
        self.adversary = BOB

    def initial_state(self) -> GnState:
        return GnState(self.n)

    def max_list_len(self) -> int:
        return 2 ** self.n - 1

    def validate_move(self, state: GnState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        domain = set(all_strings(self.n))
        if actor == ALICE:
            pairs = payload.get("define")
            if not pairs:
                raise IllegalMove(actor, "move must define points or pass")
            seen = set()
            for y, x in pairs:
                if y not in domain or x not in domain:
                    raise IllegalMove(actor, f"({y},{x}) not n-bit strings")
                if y in state.a_func or y in seen:
                    raise IllegalMove(actor, f"value at {y} already defined")
                seen.add(y)
        elif actor == BOB:
            fs = payload.get("list")
            if not fs:
                raise IllegalMove(actor, "move must list maps or pass")
            if len(state.bob_list) + len(fs) > self.max_list_len():
                raise IllegalMove(actor, "list length must stay below 2^n")
            for f in fs:
                if len(f) != 2 ** self.n or any(v not in domain for v in f):
                    raise IllegalMove(actor, "listed map is not total on n-bit strings")
        else:
            raise IllegalMove(actor, "unknown actor")

    def apply_move(self, state: GnState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        if actor == ALICE:
            for y, x in payload["define"]:
                state.a_func[y] = x
                state.alice_current = (y, x)
        else:
            for f in payload["list"]:
                state.bob_list.append(tuple(f))

    def verdict(self, state: GnState) -> str:
        return check_alice_win(state)


class AliceFreshPoint:
    """Reference Alice: answer every covered challenge with a fresh point."""

    def move(self, state: GnState) -> dict:
        cur = state.alice_current
        if cur is not None and not state.covered(*cur):
            return PASS
        strings = all_strings(state.n)
        y = next((s for s in strings if s not in state.a_func), None)
        if y is None:
            raise Exhausted("no fresh input string left")
        taken = state.list_values_at(y)
        x = next(s for s in strings if s not in taken)
        return {"define": [[y, x]]}


class GreedyBob:
    """Covers Alice's current challenge while the list budget lasts."""

    def __init__(self, n: int):
        self.n = n

    def move(self, state: GnState) -> dict:
        cur = state.alice_current
        if cur is None or len(state.bob_list) >= 2 ** self.n - 1:
            return PASS
        y, x = cur
        if state.covered(y, x):
            return PASS
        zero = "0" * self.n
        f = [x if s == y else zero for s in all_strings(self.n)]
        return {"list": [f]}


class RandomBob:
    """Lists a seeded-random number of random total maps, then quiesces."""

    def __init__(self, n: int):
        self.n = n
        self.remaining = 0
        self.rng = None

    def start(self, rng) -> None:
        self.rng = rng
        self.remaining = rng.randint(0, 2 ** self.n - 1)

    def move(self, state: GnState) -> dict:
        if self.remaining <= 0:
            return PASS
        self.remaining -= 1
        strings = all_strings(self.n)
        f = [self.rng.choice(strings) for _ in strings]
        return {"list": [f]}


class ScriptedBob:
    """Plays a fixed sequence of payloads, then passes forever."""

    def __init__(self, script: list[dict]):
        self.script = list(script)
        self.at = 0

    def move(self, state: GnState) -> dict:
        if self.at >= len(self.script):
            return PASS
        payload = self.script[self.at]
        self.at += 1
        return payload


class ExhaustiveNode:
    """Full game-tree search over every Bob behavior at n = 1.

    Bob's list budget at n = 1 is a single map, so his only decision is
    which of the four total maps to list, and when.  Between a covered
    state and his listing, the state is frozen (the reference Alice is
    event-driven), so a delayed listing plays out exactly like an immediate
    one; branching on {list f now, never list} at every decision point
    therefore covers the whole tree.
    """

    def __init__(self, n: int, max_depth: int = 10):
        if n != 1:
            raise UnsupportedSize("exhaustive search supports n = 1 only")
        self.n = n
        self.max_depth = max_depth
        self.rules = GnRules(n)

    def all_total_maps(self) -> list[tuple[str, ...]]:
        strings = all_strings(self.n)
        maps = []
        for a in strings:
            for b in strings:
                maps.append((a, b))
        return maps

    def leaf_verdicts(self) -> list[tuple[list, str]]:
        """Returns (bob_listing_history, verdict) for every leaf."""
        alice = AliceFreshPoint()
        leaves: list[tuple[list, str]] = []

        def explore(state: GnState, history: list, depth: int) -> None:
            assert depth <= self.max_depth, "search depth exceeded"
            a_payload = alice.move(state)
            self.rules.validate_move(state, ALICE, a_payload)
            self.rules.apply_move(state, ALICE, a_payload)
            options = [PASS]
            if len(state.bob_list) < self.rules.max_list_len():
                options += [{"list": [list(f)]} for f in self.all_total_maps()]
            for payload in options:
                if is_pass(payload) and is_pass(a_payload):
                    leaves.append((history, self.rules.verdict(state)))
                    continue
                branch = copy.deepcopy(state)
                self.rules.validate_move(branch, BOB, payload)
                self.rules.apply_move(branch, BOB, payload)
                next_history = history + payload["list"] if not is_pass(payload) else history
                explore(branch, next_history, depth + 1)

        explore(self.rules.initial_state(), [], 0)
        return leaves


def make_bob_adversary(kind: str, n: int, seed: int = 0):
    """Build one of the shipped Bob adversaries: greedy, random, exhaustive-node."""
    if kind == "greedy":
        return GreedyBob(n)
    if kind == "random":
        return RandomBob(n)
    if kind == "exhaustive-node":
        return ExhaustiveNode(n)
    raise ValueError(f"unknown adversary kind {kind!r}")
