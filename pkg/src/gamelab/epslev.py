"""Weight-raising versus probabilistic-marking game on a bipartite graph.

Alice raises rational weights on left vertices (dyadic increments, total at
most 2); Bob answers each increment epsilon on x with a coin that marks x
with probability min(1, c*2^k*epsilon), then immediately marks any right
vertex that reached neighbor weight 2^-k with no marked neighbor.  Bob wins
if coverage holds within his budgets: at most ``l`` left marks and marked
right measure at most delta.

Also ships the exact backward-induction oracle for the no-success
probability of adaptively chosen coin trials, which stays below e^-t.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import (ALICE, ALICE_WINS, BOB, BOB_WINS, PASS, IllegalMove,
                     child_seed, is_pass)

# dyadic upper bounds of ln(2/delta) keep e^-c <= delta/2 while staying rational
_LN_SCALE = 2 ** 32


class DepthExceeded(Exception):
    """The adversary tree is deeper than the configured bound."""


def _ln_upper(x: float) -> Fraction:
    return Fraction(math.ceil(math.log(x) * _LN_SCALE), _LN_SCALE)


def compute_params(k: int, delta) -> tuple[Fraction, int]:
    """Scaling constant and left-mark budget for the given k and delta.

    c is ln(2/delta) floored at ln 4, rounded up to a dyadic rational so the
    expected marked right measure stays at or below delta/2; the budget is
    l = ceil(c * 2^(k+2)).
    """
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    c = max(_ln_upper(float(2 / delta)), _ln_upper(4.0))
    l_budget = math.ceil(c * 2 ** (k + 2))
    return c, l_budget


class ELConfig:
    """Frozen game instance: graph, right distribution, budgets, quantization.

    Weights are integer multiples of the quantum 2^-m_min.
    """

    def __init__(self, left, right, edges, p: dict, k: int, delta,
                 m_min: int = 6, c: Fraction | None = None,
                 l_budget: int | None = None):
        self.left = tuple(left)
        self.right = tuple(right)
        self.edges = frozenset((x, y) for x, y in edges)
        self.p = {y: Fraction(v) for y, v in p.items()}
        self.k = k
        self.delta = Fraction(delta)
        self.m_min = m_min
        auto_c, auto_l = compute_params(k, self.delta)
        self.c = auto_c if c is None else Fraction(c)
        self.l_budget = auto_l if l_budget is None else l_budget

        if sum(self.p.values()) != 1:
            raise ValueError("P must sum to 1")
        if any(v < 0 for v in self.p.values()):
            raise ValueError("P values must be nonnegative")
        left_set, right_set = set(self.left), set(self.right)
        if any(x not in left_set or y not in right_set for x, y in self.edges):
            raise ValueError("edge endpoints must lie in L x R")

        self.left_adj = {x: tuple(sorted(y for (u, y) in self.edges if u == x))
                         for x in self.left}
        self.right_adj = {y: tuple(sorted(x for (x, v) in self.edges if v == y))
                          for y in self.right}

    @property
    def quantum(self) -> Fraction:
        return Fraction(1, 2 ** self.m_min)

    def threshold_units(self) -> int:
        """2^-k expressed in weight quanta."""
        if self.k > self.m_min:
            raise ValueError("m_min must be at least k")
        return 2 ** (self.m_min - self.k)

    def total_units(self) -> int:
        """Weight cap (2) in quanta."""
        return 2 ** (self.m_min + 1)


@dataclass
class ELState:
    """Mutable game state; weights and loads in units of the quantum."""

    weights: dict = field(default_factory=dict)
    marked_left: set = field(default_factory=set)
    marked_right: set = field(default_factory=set)
    event_log: list = field(default_factory=list)
    right_load: dict = field(default_factory=dict)

    def total_weight_units(self) -> int:
        return sum(self.weights.values())


def mark_probability(config: ELConfig, eps: Fraction) -> Fraction:
    return min(Fraction(1), config.c * 2 ** config.k * eps)


def _uncovered_near(config: ELConfig, state: ELState, x) -> list:
    """Right neighbors of x at or past the threshold with no cover."""
    threshold = config.threshold_units()
    out = []
    for y in config.left_adj[x]:
        if y in state.marked_right:
            continue
        if state.right_load.get(y, 0) < threshold:
            continue
        if any(u in state.marked_left for u in config.right_adj[y]):
            continue
        out.append(y)
    return out


def apply_weight_event(config: ELConfig, state: ELState, x, eps: Fraction) -> int:
    """Record Alice's increment; returns it in quanta."""
    units = eps / config.quantum
    if units.denominator != 1 or units <= 0:
        raise ValueError(f"increment {eps} is not a positive multiple of the quantum")
    units = int(units)
    state.weights[x] = state.weights.get(x, 0) + units
    for y in config.left_adj[x]:
        state.right_load[y] = state.right_load.get(y, 0) + units
    state.event_log.append((x, eps))
    return units


def bob_step(config: ELConfig, state: ELState, event, rng) -> ELState:
    """Process one weight event with Bob's probabilistic marking strategy.

    Applies the increment, tosses the coin for the raised vertex, then marks
    every uncovered right vertex that the increment pushed to the threshold.
    One uniform draw is consumed per event, in event order.
    """
    x, eps = event
    apply_weight_event(config, state, x, Fraction(eps))
    if rng.random() < mark_probability(config, Fraction(eps)):
        state.marked_left.add(x)
    for y in _uncovered_near(config, state, x):
        state.marked_right.add(y)
    return state


def marked_right_measure(config: ELConfig, state: ELState) -> Fraction:
    return sum((config.p[y] for y in state.marked_right), Fraction(0))


def check_bob_outcome(state: ELState, config: ELConfig) -> str:
    """Bob wins iff coverage holds and both marking budgets were respected."""
    threshold = config.threshold_units()
    for y in config.right:
        if state.right_load.get(y, 0) <= threshold:
            continue  # win rule is strict: only loads exceeding 2^-k matter
        if y in state.marked_right:
            continue
        if any(x in state.marked_left for x in config.right_adj[y]):
            continue
        return ALICE_WINS
    if len(state.marked_left) > config.l_budget:
        return ALICE_WINS
    if marked_right_measure(config, state) > config.delta:
        return ALICE_WINS
    return BOB_WINS


# --- adversarial Alices -------------------------------------------------------

class ConcentratedAlice:
    """Dumps a full 2^-k increment on each left vertex once, in random order."""

    def __init__(self, config: ELConfig):
        self.config = config
        self.queue = None

    def start(self, rng) -> None:
        order = list(self.config.left)
        rng.shuffle(order)
        self.queue = order

    def next_event(self, state: ELState):
        step = Fraction(1, 2 ** self.config.k)
        units = self.config.threshold_units()
        if not self.queue or state.total_weight_units() + units > self.config.total_units():
            return None
        return (self.queue.pop(), step)


class SpreadAlice:
    """Drips quantum increments over one right target's neighborhood at a time."""

    def __init__(self, config: ELConfig):
        self.config = config
        self.targets = None
        self.current = None

    def start(self, rng) -> None:
        self.targets = [y for y in self.config.right if self.config.right_adj[y]]
        rng.shuffle(self.targets)

    def next_event(self, state: ELState):
        config = self.config
        if state.total_weight_units() >= config.total_units():
            return None
        threshold = config.threshold_units()
        while self.current is None or state.right_load.get(self.current, 0) > threshold:
            if not self.targets:
                return None
            self.current = self.targets.pop()
        neighbors = config.right_adj[self.current]
        x = min(neighbors, key=lambda u: (state.weights.get(u, 0), u))
        return (x, config.quantum)


class AntiCoinAlice:
    """Raises weight only where coins have failed so far.

    Keeps feeding quanta to probed-but-unmarked left vertices, probing fresh
    vertices when every probed one is marked; pressures the right-measure
    budget by pushing thresholds with unmarked neighborhoods.
    """

    def __init__(self, config: ELConfig):
        self.config = config
        self.order = None

    def start(self, rng) -> None:
        self.order = list(self.config.left)
        rng.shuffle(self.order)

    def next_event(self, state: ELState):
        config = self.config
        if state.total_weight_units() >= config.total_units():
            return None
        failed = [x for x in self.order
                  if state.weights.get(x, 0) and x not in state.marked_left]
        if failed:
            x = min(failed, key=lambda u: state.weights.get(u, 0))
            return (x, config.quantum)
        fresh = [x for x in self.order if not state.weights.get(x, 0)]
        if not fresh:
            return None
        return (fresh[0], config.quantum)


ALICE_KINDS = {
    "concentrated": ConcentratedAlice,
    "spread": SpreadAlice,
    "anti-coin": AntiCoinAlice,
}


def make_alice(kind: str, config: ELConfig):
    try:
        return ALICE_KINDS[kind](config)
    except KeyError:
        raise ValueError(f"unknown adversary kind {kind!r}") from None


# --- engine integration -------------------------------------------------------

class ELRules:
    """Engine rules: Alice raises one weight per move, Bob replies with marks.

    Alice: ``{"raise": [x, epsilon]}``.  Bob: ``{"mark_left": [...],
    "mark_right": [...]}``; his budget overruns decide the verdict rather
    than being illegal.
    """

    def __init__(self, config: ELConfig):
        self.config = config
        self.game_id = "epslev"
        self.params = {
            "k": config.k, "delta": config.delta, "c": config.c,
            "l_budget": config.l_budget, "m_min": config.m_min,
            "left": len(config.left), "right": len(config.right),
        }
        self.first_mover = ALICE
        self.adversary = ALICE

    def initial_state(self) -> ELState:
        return ELState()

    def validate_move(self, state: ELState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        config = self.config
        if actor == ALICE:
            ev = payload.get("raise")
            if not ev:
                raise IllegalMove(actor, "move must raise a weight or pass")
            x, eps = ev
            eps = Fraction(eps)
            if x not in config.left_adj:
                raise IllegalMove(actor, f"unknown left vertex {x}")
            units = eps / config.quantum
            if units.denominator != 1 or units <= 0:
                raise IllegalMove(actor, f"increment {eps} not a positive quantum multiple")
            if state.total_weight_units() + int(units) > config.total_units():
                raise IllegalMove(actor, "total weight cap exceeded")
        elif actor == BOB:
            if not ("mark_left" in payload or "mark_right" in payload):
                raise IllegalMove(actor, "move must mark or pass")
            for x in payload.get("mark_left", []):
                if x not in config.left_adj or x in state.marked_left:
                    raise IllegalMove(actor, f"bad left mark {x}")
            for y in payload.get("mark_right", []):
                if y not in config.right_adj or y in state.marked_right:
                    raise IllegalMove(actor, f"bad right mark {y}")
        else:
            raise IllegalMove(actor, "unknown actor")

    def apply_move(self, state: ELState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        if actor == ALICE:
            x, eps = payload["raise"]
            apply_weight_event(self.config, state, x, Fraction(eps))
        else:
            state.marked_left.update(payload.get("mark_left", []))
            state.marked_right.update(payload.get("mark_right", []))

    def verdict(self, state: ELState) -> str:
        return check_bob_outcome(state, self.config)


class AliceEventStream:
    """Adapts a next_event-style adversary to engine moves."""

    def __init__(self, inner):
        self.inner = inner

    def start(self, rng) -> None:
        self.inner.start(rng)

    def move(self, state: ELState) -> dict:
        event = self.inner.next_event(state)
        if event is None:
            return PASS
        x, eps = event
        return {"raise": [x, eps]}


class BobCoinMarker:
    """Engine Bob: replays the probabilistic strategy against logged events."""

    def __init__(self, config: ELConfig):
        self.config = config
        self.processed = 0
        self.rng = None

    def start(self, rng) -> None:
        self.rng = rng

    def move(self, state: ELState) -> dict:
        config = self.config
        mark_left, mark_right = [], []
        while self.processed < len(state.event_log):
            x, eps = state.event_log[self.processed]
            self.processed += 1
            # one draw per event, even for already-marked vertices
            hit = self.rng.random() < mark_probability(config, eps)
            if hit and x not in state.marked_left and x not in mark_left:
                mark_left.append(x)
            for y in _uncovered_near(config, state, x):
                if y not in mark_right and not any(
                        u in mark_left for u in config.right_adj[y]):
                    mark_right.append(y)
        if not (mark_left or mark_right):
            return PASS
        return {"mark_left": mark_left, "mark_right": mark_right}


# --- exact no-success oracle ---------------------------------------------------

@dataclass(frozen=True)
class EpsNode:
    """Adversary tree node: each choice names an increment and a subtree."""

    choices: tuple  # of (Fraction, EpsNode | None)


def chain_tree(eps_seq) -> EpsNode | None:
    """Tree with a single path: a fixed increment sequence."""
    node = None
    for eps in reversed([Fraction(e) for e in eps_seq]):
        node = EpsNode(((eps, node),))
    return node


def grid_tree(options, depth: int) -> EpsNode | None:
    """Full adaptive tree: any grid increment at each of ``depth`` levels."""
    options = [Fraction(e) for e in options]
    node = None
    for _ in range(depth):
        node = EpsNode(tuple((eps, node) for eps in options))
    return node


def no_success_probability(tree: EpsNode | None, scale, t, max_depth: int = 32) -> Fraction:
    """Exact worst-case probability that every coin fails before the
    increment sum reaches t.

    Backward induction over the adversary tree; at each node the adversary
    picks the increment maximizing the no-success probability, each trial
    succeeding with probability min(1, scale * eps).  Reaching sum >= t with
    no success scores 1; running out of tree first scores 0.
    """
    scale = Fraction(scale)
    t = Fraction(t)
    memo: dict = {}

    def value(node, acc: Fraction, depth: int) -> Fraction:
        if acc >= t:
            return Fraction(1)
        if node is None:
            return Fraction(0)
        if depth > max_depth:
            raise DepthExceeded(f"tree deeper than {max_depth}")
        key = (id(node), acc)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = Fraction(0)
        for eps, child in node.choices:
            fail = 1 - min(Fraction(1), scale * eps)
            if fail > 0:
                best = max(best, fail * value(child, acc + eps, depth + 1))
        memo[key] = best
        return best

    return value(tree, Fraction(0), 0)


# --- Monte Carlo harness -------------------------------------------------------

def play_trial(config: ELConfig, alice, rng_alice, rng_bob) -> ELState:
    """One full game, direct event loop (no trace)."""
    state = ELState()
    alice.start(rng_alice)
    while True:
        event = alice.next_event(state)
        if event is None:
            return state
        bob_step(config, state, event, rng_bob)


def estimate_win_rate(config: ELConfig, alice_kind: str, trials: int, seed: int) -> dict:
    """Empirical Bob win and budget-breach rates over independent trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    wins = l_breach = r_breach = 0
    for i in range(trials):
        alice = make_alice(alice_kind, config)
        state = play_trial(config, alice,
                           random.Random(child_seed(seed, 2 * i)),
                           random.Random(child_seed(seed, 2 * i + 1)))
        if check_bob_outcome(state, config) == BOB_WINS:
            wins += 1
        if len(state.marked_left) > config.l_budget:
            l_breach += 1
        if marked_right_measure(config, state) > config.delta:
            r_breach += 1
    return {
        "win_rate": wins / trials,
        "l_breach_rate": l_breach / trials,
        "r_breach_rate": r_breach / trials,
    }


def ring_config(n_left: int = 32, n_right: int = 32, degree: int = 4,
                k: int = 1, delta=Fraction(1, 4), m_min: int = 6) -> ELConfig:
    """Default desk-scale instance: ring-overlap graph, uniform P."""
    left = tuple(range(n_left))
    right = tuple(range(n_right))
    edges = [(x, y) for y in right for x in
             [(y + t) % n_left for t in range(degree)]]
    p = {y: Fraction(1, n_right) for y in right}
    return ELConfig(left, right, edges, p, k, delta, m_min)
