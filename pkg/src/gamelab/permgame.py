"""Permutation merge of two total maps, and the bijection marking game.

``merge_total_programs`` builds a permutation out of two mutually-inverse
fragments of total maps.  The marking game pits Alice, who marks up to 2^k
vertices on each of two 2^n-element sides, against Bob, who lists bijections
between the sides and wants every marked pair connected by some listed
bijection.  With a list budget of 2^(2k-2) the reference Alice wins; raising
it to 2^(2k) lets a pair-covering Bob win.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import ALICE, ALICE_WINS, BOB, BOB_WINS, PASS, IllegalMove, is_pass


class NotTotal(ValueError):
    """A map fed to the merge is not total on the strings of length <= n."""


def shortlex_strings(n: int) -> list[str]:
    """All binary strings of length <= n: shortest first, ties lexicographic."""
    out = [""]
    for length in range(1, n + 1):
        out.extend(format(i, f"0{length}b") for i in range(2 ** length))
    return out


def merge_total_programs(p: dict, q: dict, n: int) -> dict:
    """Merge total maps p, q on strings of length <= n into a permutation.

    Every matched pair (p(u) = v and q(v) = u) is fixed as pi(u) = v; the
    leftovers are completed canonically, unmatched domain elements in
    shortlex order mapping to unmatched range elements in shortlex order.
    """
    universe = shortlex_strings(n)
    uset = set(universe)
    for name, f in (("p", p), ("q", q)):
        for u in universe:
            if u not in f:
                raise NotTotal(f"{name} is undefined on {u!r}")
            if f[u] not in uset:
                raise NotTotal(f"{name}({u!r}) falls outside strings of length <= {n}")

    matched = {u: p[u] for u in universe if q[p[u]] == u}
    hit = set(matched.values())
    rest_dom = [u for u in universe if u not in matched]
    rest_rng = [v for v in universe if v not in hit]
    perm = dict(matched)
    perm.update(zip(rest_dom, rest_rng))
    return perm


@dataclass
class MarkingState:
    k: int
    n: int
    marked_x: set[int] = field(default_factory=set)
    marked_y: set[int] = field(default_factory=set)
    bijections: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return 2 ** self.n

    def connected(self, x: int, y: int) -> bool:
        return any(b[x] == y for b in self.bijections)

    def uncovered_pairs(self) -> list[tuple[int, int]]:
        return [
            (x, y)
            for x in sorted(self.marked_x)
            for y in sorted(self.marked_y)
            if not self.connected(x, y)
        ]


def check_bob_win(state: MarkingState) -> str:
    """Bob wins iff every marked (x, y) pair is connected by a listed bijection."""
    return BOB_WINS if not state.uncovered_pairs() else ALICE_WINS


class MarkingRules:
    """Marking game rules; ``bob_budget`` None means unlimited listings.

    Alice: ``{"mark": ["X"|"Y", vertex]}``.  Bob: ``{"bijections": [[...], ...]}``,
    each an array of 2^n target indices forming a permutation.
    """

    def __init__(self, k: int, n: int, bob_budget: int | None):
        if n <= 2 * k:
            raise ValueError("need n > 2k")
        self.k = k
        self.n = n
        self.bob_budget = bob_budget
        self.game_id = "permgame"
        self.params = {"k": k, "n": n, "bob_budget": bob_budget}
        self.first_mover = ALICE
        self.adversary = BOB

    def initial_state(self) -> MarkingState:
        return MarkingState(self.k, self.n)

    def validate_move(self, state: MarkingState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        size = state.size
        if actor == ALICE:
            mark = payload.get("mark")
            if not mark:
                raise IllegalMove(actor, "move must mark or pass")
            side, v = mark
            if side not in ("X", "Y") or not 0 <= v < size:
                raise IllegalMove(actor, f"bad mark {mark}")
            marked = state.marked_x if side == "X" else state.marked_y
            if v in marked:
                raise IllegalMove(actor, f"{side}{v} already marked")
            if len(marked) >= 2 ** self.k:
                raise IllegalMove(actor, f"side {side} mark budget 2^k exhausted")
        elif actor == BOB:
            bs = payload.get("bijections")
            if not bs:
                raise IllegalMove(actor, "move must list bijections or pass")
            if self.bob_budget is not None and len(state.bijections) + len(bs) > self.bob_budget:
                raise IllegalMove(actor, "bijection budget exhausted")
            for b in bs:
                if len(b) != size or sorted(b) != list(range(size)):
                    raise IllegalMove(actor, "listed map is not a bijection")
        else:
            raise IllegalMove(actor, "unknown actor")

    def apply_move(self, state: MarkingState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        if actor == ALICE:
            side, v = payload["mark"]
            (state.marked_x if side == "X" else state.marked_y).add(v)
        else:
            for b in payload["bijections"]:
                state.bijections.append(tuple(b))

    def verdict(self, state: MarkingState) -> str:
        return check_bob_win(state)


class AliceMinConnection:
    """Reference Alice: alternate sides, grabbing least-connected vertices.

    Waits (passes) until Bob has covered every currently marked pair, then
    marks, on the side whose turn it is, the unmarked vertex connected to the
    fewest marked vertices opposite, ties to the lowest index.  The averaging
    bound is asserted at every pick: the chosen vertex is connected to at most
    a quarter of the opposite marks.
    """

    def move(self, state: MarkingState) -> dict:
        budget = 2 ** state.k
        if len(state.marked_x) <= len(state.marked_y):
            side = "X" if len(state.marked_x) < budget else None
        else:
            side = "Y" if len(state.marked_y) < budget else None
        if side is None:
            return PASS
        if state.uncovered_pairs():
            return PASS

        own = state.marked_x if side == "X" else state.marked_y
        opposite = sorted(state.marked_y if side == "X" else state.marked_x)
        best_v, best_count = None, None
        for v in range(state.size):
            if v in own:
                continue
            if side == "X":
                count = sum(state.connected(v, w) for w in opposite)
            else:
                count = sum(state.connected(w, v) for w in opposite)
            if best_count is None or count < best_count:
                best_v, best_count = v, count
                if count == 0:
                    break
        assert best_v is not None
        assert 4 * best_count <= len(opposite), (
            f"picked {side}{best_v} connected to {best_count} of {len(opposite)} marks"
        )
        return {"mark": [side, best_v]}


def _bijection_through(size: int, x: int, y: int, rng) -> list[int]:
    """Random permutation of range(size) conditioned on mapping x to y."""
    perm = list(range(size))
    rng.shuffle(perm)
    j = perm.index(y)
    perm[j], perm[x] = perm[x], y
    return perm


class CoveringBob:
    """Covers uncovered marked pairs, one random bijection per pair.

    ``per_move`` bounds how many pairs get covered in a single move; the
    pairwise variant covers them all at once, the greedy variant one per turn.
    """

    def __init__(self, budget: int | None, per_move: int = 1):
        self.budget = budget
        self.per_move = per_move
        self.rng = None

    def start(self, rng) -> None:
        self.rng = rng

    def move(self, state: MarkingState) -> dict:
        uncovered = state.uncovered_pairs()
        listed = []
        for _ in range(self.per_move):
            if not uncovered:
                break
            if self.budget is not None and len(state.bijections) + len(listed) >= self.budget:
                break
            x, y = self.rng.choice(uncovered)
            b = _bijection_through(state.size, x, y, self.rng)
            listed.append(b)
            uncovered = [(u, w) for (u, w) in uncovered if b[u] != w]
        if not listed:
            return PASS
        return {"bijections": listed}


def make_bob_adversary(kind: str, k: int, n: int, bob_budget: int | None):
    """Shipped Bob adversaries: greedy (one pair per turn) or pairwise (all)."""
    if kind == "greedy":
        return CoveringBob(bob_budget, per_move=1)
    if kind == "pairwise":
        return CoveringBob(bob_budget, per_move=4 ** k + 1)
    raise ValueError(f"unknown adversary kind {kind!r}")


def run_summary(trace) -> dict:
    """Summary record for a finished marking-game trace."""
    bijections = []
    marked_x: set[int] = set()
    marked_y: set[int] = set()
    for mv in trace.moves:
        if is_pass(mv.payload):
            continue
        if mv.actor == ALICE:
            side, v = mv.payload["mark"]
            (marked_x if side == "X" else marked_y).add(v)
        else:
            bijections.extend(tuple(b) for b in mv.payload["bijections"])
    covered = sum(
        1
        for x in marked_x
        for y in marked_y
        if any(b[x] == y for b in bijections)
    )
    return {
        "bijections_listed": len(set(bijections)),
        "pairs_covered": covered,
        "verdict": trace.verdict,
    }
