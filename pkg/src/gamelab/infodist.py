"""Clique-agency game on an (m+1)-partite graph with experience indices.

Alice (the agency) keeps every component-0 vertex inside an active clique of
one vertex per component, all pairs joined by her undirected edges.  Bob
dissolves cliques by drawing a directed edge (a complaint) between two
members; every member then bumps the matching coordinate of its experience
index and the agency re-forms a clique for the component-0 vertex from free
vertices with the same index that have never complained about each other.
When no such clique exists the vertex is marked hopeless.  Index matching
caps how often anyone can be rejected, which bounds hopeless counts.

Bob edges outside active cliques are stored; clique formation avoids any
pair connected by a stored edge, so a stored complaint never has to fire.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass, field

from .engine import ALICE, ALICE_WINS, BOB, BOB_WINS, PASS, IllegalMove, is_pass

Vertex = tuple  # (component, number)


class BudgetViolation(AssertionError):
    """A bound the construction guarantees was exceeded: implementation bug."""


def pair_order(m: int) -> list[tuple[int, int]]:
    """Canonical order of the m(m+1) ordered component pairs."""
    return [(p, q) for p in range(m + 1) for q in range(m + 1) if p != q]


@dataclass
class AgencyState:
    m: int
    n: int
    big_n: int  # vertices per component
    cliques: set = field(default_factory=set)           # frozensets of vertices
    clique_of: dict = field(default_factory=dict)       # vertex -> its clique
    indices: dict = field(default_factory=dict)         # vertex -> tuple of counts
    alice_edges: set = field(default_factory=set)       # frozensets {u, v}
    bob_edges: set = field(default_factory=set)         # directed (u, v)
    marked: set = field(default_factory=set)            # hopeless comp-0 vertices
    pools: dict = field(default_factory=dict)           # (comp, index) -> sorted nums
    # running bookkeeping for budget assertions
    pair_pos: dict = field(default_factory=dict)
    clique_changes: dict = field(default_factory=dict)
    bob_out: dict = field(default_factory=dict)         # (vertex, comp) -> count
    alice_deg: dict = field(default_factory=dict)       # (vertex, comp) -> count
    marked_per_index: dict = field(default_factory=dict)
    max_marked_per_index: int = 0

    def complaints_between(self, u: Vertex, v: Vertex) -> bool:
        return (u, v) in self.bob_edges or (v, u) in self.bob_edges

    def free_counts(self) -> dict:
        """(component, index) -> number of out-of-clique vertices."""
        counts: dict = {}
        for (comp, idx), nums in self.pools.items():
            counts[(comp, idx)] = len(nums)
        return counts


def marked_bound(m: int, n: int) -> int:
    return m * 2 ** (n + 1 + n * m * (m + 1))


def marked_per_index_bound(m: int, n: int) -> int:
    return 2 * m * 2 ** n


def alice_degree_bound(m: int, n: int) -> int:
    return m * (m + 1) * 2 ** n


def init_agency(m: int, n: int, big_n: int) -> AgencyState:
    """Pair vertex i of every component into clique i, all indices zero."""
    if big_n < 1:
        raise ValueError("need at least one vertex per component")
    state = AgencyState(m, n, big_n)
    state.pair_pos = {pq: i for i, pq in enumerate(pair_order(m))}
    zero = (0,) * (m * (m + 1))
    for i in range(big_n):
        clique = frozenset((comp, i) for comp in range(m + 1))
        state.cliques.add(clique)
        for v in clique:
            state.clique_of[v] = clique
            state.indices[v] = zero
        _draw_clique_edges(state, clique)
    return state


def _draw_clique_edges(state: AgencyState, clique: frozenset) -> None:
    members = sorted(clique)
    for i, u in enumerate(members):
        for v in members[i + 1:]:
            edge = frozenset((u, v))
            if edge in state.alice_edges:
                continue
            state.alice_edges.add(edge)
            for a, b in ((u, v), (v, u)):
                key = (a, b[0])
                deg = state.alice_deg.get(key, 0) + 1
                state.alice_deg[key] = deg
                if deg > alice_degree_bound(state.m, state.n):
                    raise BudgetViolation(
                        f"Alice degree bound exceeded at {a} toward component {b[0]}")


def _pool_add(state: AgencyState, v: Vertex) -> None:
    insort(state.pools.setdefault((v[0], state.indices[v]), []), v[1])


def _pool_remove(state: AgencyState, v: Vertex) -> None:
    nums = state.pools[(v[0], state.indices[v])]
    nums.remove(v[1])


def try_form_clique(state: AgencyState, x0: Vertex):
    """Attempt a clique for free unmarked x0; mark it hopeless on failure.

    Components are searched in order 1..m; within a pool the lowest vertex
    number wins.  A candidate is admissible when no directed Bob edge in
    either direction connects it to any vertex already chosen.
    """
    assert x0[0] == 0 and x0 not in state.marked and x0 not in state.clique_of
    idx = state.indices[x0]
    chosen = [x0]
    for comp in range(1, state.m + 1):
        pool = state.pools.get((comp, idx), [])
        pick = None
        for num in pool:
            v = (comp, num)
            if all(not state.complaints_between(v, u) for u in chosen):
                pick = v
                break
        if pick is None:
            state.marked.add(x0)
            per = state.marked_per_index.get(idx, 0) + 1
            state.marked_per_index[idx] = per
            state.max_marked_per_index = max(state.max_marked_per_index, per)
            if per > marked_per_index_bound(state.m, state.n):
                raise BudgetViolation(f"per-index marked bound exceeded at {idx}")
            if len(state.marked) > marked_bound(state.m, state.n):
                raise BudgetViolation("total marked bound exceeded")
            return "marked"
        chosen.append(pick)

    clique = frozenset(chosen)
    for v in chosen:
        _pool_remove(state, v)
        state.clique_of[v] = clique
    state.cliques.add(clique)
    _draw_clique_edges(state, clique)
    return clique


def handle_bob_edge(state: AgencyState, u: Vertex, v: Vertex) -> AgencyState:
    """Record a directed Bob edge; dissolve and re-pair if it is a complaint.

    A complaint (edge inside an active clique) bumps the (comp(u), comp(v))
    index coordinate of every member, dissolves the clique, re-forms for the
    component-0 member, and frees the rest.  Any other edge is stored and
    constrains future formations.
    """
    u, v = tuple(u), tuple(v)
    if u == v or u[0] == v[0]:
        raise IllegalMove(BOB, "edge must join distinct components")
    key = (u, v[0])
    out = state.bob_out.get(key, 0) + 1
    if out >= 2 ** state.n:
        raise IllegalMove(BOB, f"out-degree budget exhausted at {u} toward {v[0]}")
    if (u, v) in state.bob_edges:
        raise IllegalMove(BOB, f"duplicate edge {u}->{v}")
    state.bob_out[key] = out
    state.bob_edges.add((u, v))

    clique = state.clique_of.get(u)
    if clique is None or clique != state.clique_of.get(v):
        return state  # stored complaint; formation will avoid this pair

    pos = state.pair_pos[(u[0], v[0])]
    state.cliques.discard(clique)
    x0 = None
    for member in clique:
        del state.clique_of[member]
        old = state.indices[member]
        state.indices[member] = old[:pos] + (old[pos] + 1,) + old[pos + 1:]
        state.clique_changes[member] = state.clique_changes.get(member, 0) + 1
        if state.clique_changes[member] > alice_degree_bound(state.m, state.n):
            raise BudgetViolation(f"clique-change bound exceeded at {member}")
        _pool_add(state, member)
        if member[0] == 0:
            x0 = member
    try_form_clique(state, x0)
    return state


def check_free_pool_symmetry(state: AgencyState) -> None:
    """Every index class must hold equally many free vertices per component."""
    by_index: dict = {}
    for (comp, idx), nums in state.pools.items():
        by_index.setdefault(idx, {})[comp] = len(nums)
    for idx, per_comp in by_index.items():
        counts = {per_comp.get(c, 0) for c in range(state.m + 1)}
        if len(counts) != 1:
            raise BudgetViolation(f"free pools asymmetric at index {idx}: {per_comp}")


def check_alice_outcome(state: AgencyState, spoil_direction: str = "either") -> str:
    """Alice wins iff every unmarked component-0 vertex sits in a sound clique
    and her budgets held.

    ``spoil_direction`` resolves what a Bob edge between clique members must
    look like to spoil the clique: "either" (default; one directed edge in
    any direction spoils) or "both" (only a mutual pair of edges spoils).
    """
    if len(state.marked) > marked_bound(state.m, state.n):
        return BOB_WINS
    if any(deg > alice_degree_bound(state.m, state.n)
           for deg in state.alice_deg.values()):
        return BOB_WINS
    for i in range(state.big_n):
        x0 = (0, i)
        if x0 in state.marked:
            continue
        clique = state.clique_of.get(x0)
        if clique is None:
            return BOB_WINS
        members = sorted(clique)
        for a, u in enumerate(members):
            for w in members[a + 1:]:
                if frozenset((u, w)) not in state.alice_edges:
                    return BOB_WINS
                forward = (u, w) in state.bob_edges
                backward = (w, u) in state.bob_edges
                spoiled = (forward or backward) if spoil_direction == "either" \
                    else (forward and backward)
                if spoiled:
                    return BOB_WINS
    return ALICE_WINS


# --- engine integration ---------------------------------------------------------

class AgencyRules:
    """Engine rules: Bob sends edge batches; the agency reacts inside apply.

    Bob: ``{"edges": [[[ci, ni], [cj, nj]], ...]}``, processed in submission
    order.  Alice's responses (dissolutions, formations, marks) are forced
    deterministic consequences, so her player object always passes.
    """

    def __init__(self, m: int, n: int, big_n: int, spoil_direction: str = "either"):
        self.m = m
        self.n = n
        self.big_n = big_n
        self.spoil_direction = spoil_direction
        self.game_id = "infodist"
        self.params = {"m": m, "n": n, "N": big_n, "spoil_direction": spoil_direction}
        self.first_mover = BOB
        self.adversary = BOB

    def initial_state(self) -> AgencyState:
        return init_agency(self.m, self.n, self.big_n)

    def validate_move(self, state: AgencyState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        if actor == ALICE:
            raise IllegalMove(actor, "the agency only passes; its play is forced")
        edges = payload.get("edges")
        if not edges:
            raise IllegalMove(actor, "move must send edges or pass")
        # out-degree and duplicate checks are stateful along the batch;
        # handle_bob_edge re-validates each edge as it applies
        for u, v in edges:
            u, v = tuple(u), tuple(v)
            for w in (u, v):
                if not (0 <= w[0] <= self.m and 0 <= w[1] < self.big_n):
                    raise IllegalMove(actor, f"vertex {w} out of range")
            if u[0] == v[0]:
                raise IllegalMove(actor, "edge must join distinct components")

    def apply_move(self, state: AgencyState, actor: str, payload: dict) -> None:
        if is_pass(payload) or actor == ALICE:
            return
        for u, v in payload["edges"]:
            handle_bob_edge(state, tuple(u), tuple(v))

    def verdict(self, state: AgencyState) -> str:
        return check_alice_outcome(state, self.spoil_direction)


class AgencyAlice:
    """Placeholder player: every agency response is embedded in the rules."""

    def move(self, state: AgencyState) -> dict:
        return PASS


class GreedyDissolverBob:
    """Complains about active cliques as fast as out-degree budgets allow.

    Samples cliques through random component-0 vertices; a full scan runs
    only when sampling comes up dry, to tell a quiet patch from quiescence.
    Batch edges target disjoint cliques, so building the whole batch against
    the pre-move state stays consistent.
    """

    def __init__(self, m: int, n: int, big_n: int, per_move: int = 8):
        self.m = m
        self.n = n
        self.big_n = big_n
        self.per_move = per_move
        self.rng = None

    def start(self, rng) -> None:
        self.rng = rng

    def _usable(self, state: AgencyState, clique) -> tuple | None:
        members = sorted(clique)
        self.rng.shuffle(members)
        for u in members:
            for v in members:
                if u == v or u[0] == v[0]:
                    continue
                if state.bob_out.get((u, v[0]), 0) + 1 >= 2 ** self.n:
                    continue
                if (u, v) in state.bob_edges:
                    continue
                return (u, v)
        return None

    def move(self, state: AgencyState) -> dict:
        edges = []
        burned = set()

        def grab(clique) -> bool:
            if clique is None or clique in burned:
                return False
            pick = self._usable(state, clique)
            if pick is None:
                return False
            edges.append([list(pick[0]), list(pick[1])])
            burned.add(clique)
            return True

        for _ in range(4 * self.per_move):
            if len(edges) >= self.per_move:
                break
            x0 = (0, self.rng.randrange(self.big_n))
            grab(state.clique_of.get(x0))
        if not edges:
            for clique in sorted(state.cliques, key=sorted):
                if grab(clique):
                    break
        if not edges:
            return PASS
        return {"edges": edges}


class RandomEdgeBob:
    """Sprays random directed edges, budget-aware, then quiesces."""

    def __init__(self, m: int, n: int, big_n: int, total: int | None = None):
        self.m = m
        self.n = n
        self.big_n = big_n
        self.total = total if total is not None else 4 * big_n
        self.sent = 0
        self.rng = None

    def start(self, rng) -> None:
        self.rng = rng

    def move(self, state: AgencyState) -> dict:
        if self.sent >= self.total:
            return PASS
        edges = []
        for _ in range(30):
            if len(edges) >= 4 or self.sent + len(edges) >= self.total:
                break
            cu = self.rng.randrange(self.m + 1)
            cv = self.rng.choice([c for c in range(self.m + 1) if c != cu])
            u = (cu, self.rng.randrange(self.big_n))
            v = (cv, self.rng.randrange(self.big_n))
            if state.bob_out.get((u, v[0]), 0) + 1 >= 2 ** self.n:
                continue
            if (u, v) in state.bob_edges or [list(u), list(v)] in edges:
                continue
            if any(u in (tuple(a), tuple(b)) or v in (tuple(a), tuple(b))
                   for a, b in edges):
                continue  # keep batch edges disjoint so budgets stay exact
            edges.append([list(u), list(v)])
        if not edges:
            self.sent = self.total  # nothing sendable; quiesce
            return PASS
        self.sent += len(edges)
        return {"edges": edges}


class ComplaintFocuserBob:
    """Targets one ordered component pair, pushing a single index coordinate."""

    def __init__(self, m: int, n: int, target: tuple[int, int] = (0, 1)):
        if target[0] == target[1] or not all(0 <= t <= m for t in target):
            raise ValueError("target must be an ordered pair of distinct components")
        self.m = m
        self.n = n
        self.target = target
        self.rng = None

    def start(self, rng) -> None:
        self.rng = rng

    def move(self, state: AgencyState) -> dict:
        ci, cj = self.target
        edges = []
        for clique in sorted(state.cliques, key=sorted):
            if len(edges) >= 8:
                break
            u = next(w for w in clique if w[0] == ci)
            v = next(w for w in clique if w[0] == cj)
            if state.bob_out.get((u, cj), 0) + 1 >= 2 ** self.n:
                continue
            if (u, v) in state.bob_edges:
                continue
            edges.append([list(u), list(v)])
        if not edges:
            return PASS
        return {"edges": edges}


def make_bob_adversary(kind: str, m: int, n: int, big_n: int):
    """Shipped Bob adversaries: greedy-dissolver, random, complaint-focuser."""
    if kind == "greedy-dissolver":
        return GreedyDissolverBob(m, n, big_n)
    if kind == "random":
        return RandomEdgeBob(m, n, big_n)
    if kind == "complaint-focuser":
        return ComplaintFocuserBob(m, n)
    raise ValueError(f"unknown adversary kind {kind!r}")


def run_summary(state: AgencyState, verdict: str) -> dict:
    return {
        "marked_count": len(state.marked),
        "max_marked_per_index": state.max_marked_per_index,
        "max_alice_degree": max(state.alice_deg.values(), default=0),
        "verdict": verdict,
    }
