"""Alternating-game kernel: referee loop, budgets, quiescence, traces, replay.

A *rules* object defines one concrete game.  It must provide:

    game_id      -- str, stable identifier used in traces
    params       -- dict of the parameters the game was built with
    first_mover  -- ALICE or BOB
    adversary    -- ALICE or BOB; the player whose quiescence ends the game
    initial_state()                       -> state
    validate_move(state, actor, payload)  -> None, or raise IllegalMove
    apply_move(state, actor, payload)     -> None (mutates state)
    verdict(state)                        -> ALICE_WINS | BOB_WINS | UNDECIDED

A *strategy* is an object with ``move(state) -> payload`` and an optional
``start(rng)`` hook called once before the first round with a dedicated
child RNG stream.  Payloads are JSON-serializable dicts; the reserved
payload ``{"pass": True}`` is always legal and consumes the turn.

The games here are infinite in their idealized form; this kernel renders
them finite: a run ends when a full round contains only passes, when the
designated adversary has passed for ``grace_rounds`` consecutive rounds
(the strategy player has had its grace to stabilize), or at ``max_rounds``.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

ALICE = "Alice"
BOB = "Bob"

ALICE_WINS = "AliceWins"
BOB_WINS = "BobWins"
UNDECIDED = "Undecided"

PASS = {"pass": True}


class IllegalMove(Exception):
    """A strategy emitted a move the rules reject: a buggy strategy, not a loss."""

    def __init__(self, actor: str, reason: str):
        super().__init__(f"{actor}: {reason}")
        self.actor = actor
        self.reason = reason


def is_pass(payload: dict) -> bool:
    return payload.get("pass") is True


@dataclass(frozen=True)
class Budget:
    """Round limits for one run.

    ``grace_rounds`` are granted to the strategy player after the adversary
    quiesces; 0 disables the quiescence cutoff (the run then ends only on an
    all-pass round or at ``max_rounds``).
    """

    max_rounds: int
    grace_rounds: int = 0

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.grace_rounds < 0:
            raise ValueError("grace_rounds must be >= 0")


@dataclass(frozen=True)
class Move:
    round: int
    actor: str
    payload: dict


@dataclass
class GameTrace:
    """Replayable log of one run: parameters, seed, every move, final verdict."""

    game_id: str
    params: dict
    seed: int
    moves: list[Move] = field(default_factory=list)
    verdict: str = UNDECIDED

    def rounds(self) -> int:
        return 0 if not self.moves else self.moves[-1].round + 1


def child_seed(root: int, index: int) -> int:
    """Derive the ``index``-th child seed from a root seed.

    Counter-based derivation: blake2b over the decimal rendering of
    ``root:index``, truncated to 63 bits.  Stable across platforms and
    Python versions, so seeded runs are reproducible everywhere.
    """
    h = hashlib.blake2b(f"{root}:{index}".encode("ascii"), digest_size=8)
    return int.from_bytes(h.digest(), "big") >> 1


def run_game(rules, alice, bob, budget: Budget, seed: int) -> GameTrace:
    """Referee one game to completion and return its trace.

    Each round the first mover moves, then the other player.  Moves are
    validated before they are applied, so a trace never contains a move the
    rules object rejects (IllegalMove propagates instead).
    """
    state = rules.initial_state()
    strategies = {ALICE: alice, BOB: bob}
    for stream, actor in enumerate((ALICE, BOB)):
        start = getattr(strategies[actor], "start", None)
        if start is not None:
            start(random.Random(child_seed(seed, stream)))

    order = (ALICE, BOB) if rules.first_mover == ALICE else (BOB, ALICE)
    moves: list[Move] = []
    quiet_streak = 0
    for rnd in range(budget.max_rounds):
        all_pass = True
        adversary_passed = True
        for actor in order:
            payload = strategies[actor].move(state)
            rules.validate_move(state, actor, payload)
            rules.apply_move(state, actor, payload)
            moves.append(Move(rnd, actor, payload))
            if not is_pass(payload):
                all_pass = False
                if actor == rules.adversary:
                    adversary_passed = False
        quiet_streak = quiet_streak + 1 if adversary_passed else 0
        if all_pass:
            break
        if budget.grace_rounds and quiet_streak >= budget.grace_rounds:
            break

    params = dict(rules.params)
    params["adversary"] = rules.adversary
    return GameTrace(rules.game_id, params, seed, moves, rules.verdict(state))


def replay_trace(rules, trace: GameTrace):
    """Re-execute a recorded trace through the rules; returns (state, verdict)."""
    state = rules.initial_state()
    for mv in trace.moves:
        rules.validate_move(state, mv.actor, mv.payload)
        rules.apply_move(state, mv.actor, mv.payload)
    return state, rules.verdict(state)


def check_quiescence(trace: GameTrace, window: int, adversary: str | None = None) -> bool:
    """True iff the last ``window`` rounds hold only pass moves by the adversary.

    The adversary defaults to the one recorded in the trace params.
    """
    if adversary is None:
        adversary = trace.params["adversary"]
    n_rounds = trace.rounds()
    if window > n_rounds:
        raise ValueError(f"window {window} exceeds recorded rounds {n_rounds}")
    if window < 1:
        raise ValueError("window must be >= 1")
    cutoff = n_rounds - window
    return all(
        is_pass(mv.payload)
        for mv in trace.moves
        if mv.actor == adversary and mv.round >= cutoff
    )


# --- JSON serialization -----------------------------------------------------
#
# Fixed field order: game_id, params, seed, moves, verdict.  Integers are
# decimal; rationals encode as {"num": ..., "den": ...}.

def to_jsonable(value):
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def from_jsonable(value):
    if isinstance(value, dict):
        if set(value) == {"num", "den"}:
            return Fraction(value["num"], value["den"])
        return {k: from_jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_jsonable(v) for v in value]
    return value


def trace_to_json(trace: GameTrace) -> str:
    doc = {
        "game_id": trace.game_id,
        "params": to_jsonable(trace.params),
        "seed": trace.seed,
        "moves": [
            {"round": mv.round, "actor": mv.actor, "payload": to_jsonable(mv.payload)}
            for mv in trace.moves
        ],
        "verdict": trace.verdict,
    }
    return json.dumps(doc, separators=(",", ":"))


def trace_from_json(text: str) -> GameTrace:
    doc = json.loads(text)
    moves = [
        Move(m["round"], m["actor"], from_jsonable(m["payload"]))
        for m in doc["moves"]
    ]
    return GameTrace(doc["game_id"], from_jsonable(doc["params"]), doc["seed"],
                     moves, doc["verdict"])
