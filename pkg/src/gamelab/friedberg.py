"""Two-table numbering game with Bob's assistant-based copying strategy.

Alice fills table A; Bob must end with a table B whose valid rows are
pairwise distinct and include every A-row.  Bob runs one assistant per
A-row; an assistant copies its source row into a reserved B-row and retires
(kills) the reservation whenever the first ``kill_counter`` columns of its
source row coincide with those of an earlier row.  Two variants:

* killing: a retired row is dead and excluded from the win condition;
* odd-rows: instead of dying, the retired row is padded into a fresh odd
  row (odd number of filled cells), Bob sees A through a parity filter that
  hides odd rows, and an extra assistant emits every possible odd row once.

Finite rendering: the win check treats a reserved row whose kill condition
holds at evaluation time as already retired, which reproduces the verdict
the idealized unbounded game reaches in the limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .engine import ALICE, ALICE_WINS, BOB, BOB_WINS, PASS, IllegalMove, is_pass

KILLING = "killing"
ODD_ROWS = "odd-rows"

EXTRA_ASSISTANT = -1


class OutOfRows(Exception):
    """B-table has no unreserved row left; dimensions were under-provisioned."""


@dataclass
class PartialTable:
    """Sparse write-once table; cells map (row, col) to a symbol."""

    rows: int
    cols: int
    alphabet_size: int
    cells: dict[tuple[int, int], int] = field(default_factory=dict)

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.rows and 0 <= col < self.cols

    def set_cell(self, row: int, col: int, symbol: int) -> None:
        if not self.in_bounds(row, col):
            raise ValueError(f"cell ({row},{col}) out of bounds")
        if not 0 <= symbol < self.alphabet_size:
            raise ValueError(f"symbol {symbol} outside alphabet")
        if (row, col) in self.cells:
            raise ValueError(f"cell ({row},{col}) already filled")
        self.cells[(row, col)] = symbol

    def row_cells(self, row: int) -> dict[int, int]:
        return {c: s for (r, c), s in self.cells.items() if r == row}

    def row_filled_count(self, row: int) -> int:
        return sum(1 for (r, _c) in self.cells if r == row)


def is_odd_row(table: PartialTable, row: int) -> bool:
    """True iff the row holds an odd number of filled cells."""
    return table.row_filled_count(row) % 2 == 1


def row_content(table: PartialTable, row: int) -> frozenset:
    """Content identity of a row, for cross-table equality checks."""
    return frozenset(table.row_cells(row).items())


def filter_alice_view(a_table: PartialTable, previous_view: PartialTable) -> PartialTable:
    """Advance Bob's parity-filtered view of the A-table.

    Per row, cells not yet in the view are admitted in pairs (ascending
    column order); a single leftover cell stays deferred so that no viewed
    row is ever odd.
    """
    view = PartialTable(a_table.rows, a_table.cols, a_table.alphabet_size,
                        dict(previous_view.cells))
    pending: dict[int, list[tuple[int, int]]] = {}
    for (r, c), s in a_table.cells.items():
        if (r, c) not in view.cells:
            pending.setdefault(r, []).append((c, s))
    for r, new_cells in pending.items():
        new_cells.sort()
        admit = len(new_cells) - (len(new_cells) % 2)
        for c, s in new_cells[:admit]:
            view.cells[(r, c)] = s
    return view


def prefix_match(table: PartialTable, row_a: int, row_b: int, length: int) -> bool:
    """Do two rows agree (including emptiness) on the first ``length`` columns?"""
    cells = table.cells
    for c in range(min(length, table.cols)):
        if cells.get((row_a, c)) != cells.get((row_b, c)):
            return False
    return True


def kill_condition(visible: PartialTable, source_row: int, kill_counter: int) -> bool:
    """Kill rule: some earlier row matches the source row's first k columns."""
    return any(
        prefix_match(visible, source_row, earlier, kill_counter)
        for earlier in range(source_row)
    )


def enumerate_odd_rows(cols: int, alphabet_size: int) -> list[dict[int, int]]:
    """All odd rows over a cols x alphabet grid, in canonical order.

    Ordered lexicographically by (tuple of filled columns, tuple of symbols).
    """
    out = []
    for size in range(1, cols + 1, 2):
        for col_set in combinations(range(cols), size):
            for symbols in product(range(alphabet_size), repeat=size):
                out.append(dict(zip(col_set, symbols)))
    return out


@dataclass
class AssistantState:
    source_row: int
    reserved_row: int | None
    kill_counter: int
    mode: str


@dataclass
class FriedbergState:
    a_table: PartialTable
    a_view: PartialTable
    b_table: PartialTable
    assistants: list[AssistantState] = field(default_factory=list)
    killed_rows: set[int] = field(default_factory=set)
    odd_enumerator_cursor: int = 0
    mode: str = KILLING
    # bookkeeping: row allocation and ownership for replayable retirement
    next_free_row: int = 0
    row_owner: dict[int, int] = field(default_factory=dict)
    extra_rows: list[int] = field(default_factory=list)
    converted_rows: list[int] = field(default_factory=list)

    def visible(self) -> PartialTable:
        return self.a_view if self.mode == ODD_ROWS else self.a_table


class FriedbergRules:
    """Game rules for both variants.

    Alice: ``{"set_cells": [[row, col, symbol], ...]}`` fills A-cells.
    Bob:   ``{"writes": [[row, col, symbol], ...], "kills": [row, ...],
    "reserves": [[assistant, row], ...]}`` where assistant -1 is the odd-row
    enumerator.  Payload application order is reserves, writes, kills.
    """

    def __init__(self, rows_a: int, cols: int, alphabet_size: int, mode: str,
                 max_rounds: int, rows_b: int | None = None):
        if mode not in (KILLING, ODD_ROWS):
            raise ValueError(f"unknown mode {mode!r}")
        self.rows_a = rows_a
        self.cols = cols
        self.alphabet_size = alphabet_size
        self.mode = mode
        n_odd = len(enumerate_odd_rows(cols, alphabet_size))
        # kills consume at most one fresh row per assistant per round
        self.rows_b = rows_b if rows_b is not None else rows_a * (max_rounds + 1) + n_odd
        self.game_id = f"friedberg-{mode}"
        self.params = {
            "rows_a": rows_a, "cols": cols, "alphabet_size": alphabet_size,
            "mode": mode, "rows_b": self.rows_b,
        }
        self.first_mover = ALICE
        self.adversary = ALICE

    def initial_state(self) -> FriedbergState:
        a = PartialTable(self.rows_a, self.cols, self.alphabet_size)
        view = PartialTable(self.rows_a, self.cols, self.alphabet_size)
        b = PartialTable(self.rows_b, self.cols, self.alphabet_size)
        return FriedbergState(a, view, b, mode=self.mode)

    def validate_move(self, state: FriedbergState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        if actor == ALICE:
            cells = payload.get("set_cells")
            if not cells:
                raise IllegalMove(actor, "move must set cells or pass")
            seen = set()
            for row, col, symbol in cells:
                if not state.a_table.in_bounds(row, col):
                    raise IllegalMove(actor, f"A cell ({row},{col}) out of bounds")
                if not 0 <= symbol < self.alphabet_size:
                    raise IllegalMove(actor, f"symbol {symbol} outside alphabet")
                if (row, col) in state.a_table.cells or (row, col) in seen:
                    raise IllegalMove(actor, f"A cell ({row},{col}) already filled")
                seen.add((row, col))
        elif actor == BOB:
            writes = payload.get("writes", [])
            kills = payload.get("kills", [])
            reserves = payload.get("reserves", [])
            if not (writes or kills or reserves):
                raise IllegalMove(actor, "empty move must be a pass")
            reserved_now = set()
            for idx, row in reserves:
                if not (idx == EXTRA_ASSISTANT or 0 <= idx <= len(state.assistants)):
                    raise IllegalMove(actor, f"bad assistant index {idx}")
                if not 0 <= row < self.rows_b:
                    raise IllegalMove(actor, f"B row {row} out of bounds")
                if row in state.row_owner or row in reserved_now:
                    raise IllegalMove(actor, f"B row {row} already reserved")
                reserved_now.add(row)
            seen = set()
            for row, col, symbol in writes:
                if not state.b_table.in_bounds(row, col):
                    raise IllegalMove(actor, f"B cell ({row},{col}) out of bounds")
                if not 0 <= symbol < self.alphabet_size:
                    raise IllegalMove(actor, f"symbol {symbol} outside alphabet")
                if (row, col) in state.b_table.cells or (row, col) in seen:
                    raise IllegalMove(actor, f"B cell ({row},{col}) already filled")
                if row in state.killed_rows:
                    raise IllegalMove(actor, f"B row {row} is dead")
                seen.add((row, col))
            for row in kills:
                if row not in state.row_owner and row not in reserved_now:
                    raise IllegalMove(actor, f"cannot retire unreserved row {row}")
                if row in state.killed_rows:
                    raise IllegalMove(actor, f"row {row} already retired")
        else:
            raise IllegalMove(actor, "unknown actor")

    def apply_move(self, state: FriedbergState, actor: str, payload: dict) -> None:
        if is_pass(payload):
            return
        if actor == ALICE:
            for row, col, symbol in payload["set_cells"]:
                state.a_table.set_cell(row, col, symbol)
            state.a_view = filter_alice_view(state.a_table, state.a_view)
            return
        for idx, row in payload.get("reserves", []):
            if idx == EXTRA_ASSISTANT:
                state.extra_rows.append(row)
            else:
                if idx == len(state.assistants):
                    state.assistants.append(
                        AssistantState(source_row=idx, reserved_row=None,
                                       kill_counter=0, mode=self.mode))
                state.assistants[idx].reserved_row = row
            state.row_owner[row] = idx
            state.next_free_row = max(state.next_free_row, row + 1)
        for row, col, symbol in payload.get("writes", []):
            state.b_table.set_cell(row, col, symbol)
        for row in payload.get("kills", []):
            owner = state.row_owner[row]
            if owner != EXTRA_ASSISTANT:
                state.assistants[owner].kill_counter += 1
            state.killed_rows.add(row)
            # odd parity marks a finalized conversion; an even retired row is
            # dead (the fallback when the grid's odd-row supply is exhausted)
            if self.mode == ODD_ROWS and is_odd_row(state.b_table, row):
                state.converted_rows.append(row)

    def verdict(self, state: FriedbergState) -> str:
        return check_win(state, self.mode)


def _fresh_row(state: FriedbergState, taken: set[int]) -> int:
    row = state.next_free_row
    while row in state.row_owner or row in taken:
        row += 1
    if row >= state.b_table.rows:
        raise OutOfRows(f"B-table exhausted at {state.b_table.rows} rows")
    taken.add(row)
    return row


class BobAssistants:
    """Reference Bob: one assistant per A-row plus, in the odd-rows variant,
    an enumerator that emits every possible odd row once.

    Assistants act in ascending index order within a move; a new assistant
    activates each round until every A-row has one.
    """

    def move(self, state: FriedbergState) -> dict:
        writes: list[list[int]] = []
        kills: list[int] = []
        reserves: list[list[int]] = []
        taken: set[int] = set()
        visible = state.visible()
        b = state.b_table

        # odd-row contents already on the board (all finalized rows are odd
        # or even copies; parity separates them, so compare raw content)
        existing = {row_content(b, r) for r in range(state.next_free_row)
                    if b.row_filled_count(r)}

        plan: list[tuple[int, AssistantState | None]] = list(enumerate(state.assistants))
        if len(state.assistants) < state.a_table.rows:
            plan.append((len(state.assistants), None))

        for idx, assistant in plan:
            if assistant is None:
                reserved = _fresh_row(state, taken)
                reserves.append([idx, reserved])
                counter = 0
                reserved_cells: dict[int, int] = {}
            else:
                if assistant.reserved_row is None:
                    continue
                reserved = assistant.reserved_row
                counter = assistant.kill_counter
                reserved_cells = b.row_cells(reserved)

            if kill_condition(visible, idx, counter):
                if state.mode == KILLING:
                    kills.append(reserved)
                    reserves.append([idx, _fresh_row(state, taken)])
                else:
                    pattern = self._fresh_odd_extension(state, reserved_cells, existing)
                    if pattern is not None:
                        for col in sorted(pattern.keys() - reserved_cells.keys()):
                            writes.append([reserved, col, pattern[col]])
                        existing.add(frozenset(pattern.items()))
                    # no fresh odd extension left on this finite grid: retire
                    # the row dead instead, so the kill cascade still advances
                    kills.append(reserved)
                    reserves.append([idx, _fresh_row(state, taken)])
            else:
                source = visible.row_cells(idx)
                for col in sorted(source.keys() - reserved_cells.keys()):
                    writes.append([reserved, col, source[col]])

        if state.mode == ODD_ROWS:
            emit = self._next_missing_odd_row(state, existing)
            if emit is not None:
                row = _fresh_row(state, taken)
                reserves.append([EXTRA_ASSISTANT, row])
                for col in sorted(emit):
                    writes.append([row, col, emit[col]])

        if not (writes or kills or reserves):
            return PASS
        return {"writes": writes, "kills": kills, "reserves": reserves}

    @staticmethod
    def _fresh_odd_extension(state, reserved_cells, existing) -> dict | None:
        """First canonical odd row extending the reserved content, new to B."""
        for pattern in enumerate_odd_rows(state.b_table.cols, state.b_table.alphabet_size):
            if any(pattern.get(c) != s for c, s in reserved_cells.items()):
                continue
            if frozenset(pattern.items()) in existing:
                continue
            return pattern
        return None

    @staticmethod
    def _next_missing_odd_row(state, existing) -> dict | None:
        for pattern in enumerate_odd_rows(state.b_table.cols, state.b_table.alphabet_size):
            if frozenset(pattern.items()) not in existing:
                return pattern
        return None


class RandomQuiescingAlice:
    """Fills random A-cells for a bounded number of rounds, then passes forever."""

    def __init__(self, rows: int, cols: int, alphabet_size: int,
                 active_rounds: int = 20, pass_chance: float = 0.3):
        self.rows = rows
        self.cols = cols
        self.alphabet_size = alphabet_size
        self.active_rounds = active_rounds
        self.pass_chance = pass_chance
        self.round = 0
        self.rng = None

    def start(self, rng) -> None:
        self.rng = rng

    def move(self, state: FriedbergState) -> dict:
        self.round += 1
        if self.round > self.active_rounds:
            return PASS
        if self.rng.random() < self.pass_chance:
            return PASS
        empty = [
            (r, c)
            for r in range(self.rows)
            for c in range(self.cols)
            if (r, c) not in state.a_table.cells
        ]
        if not empty:
            return PASS
        count = self.rng.randint(1, min(3, len(empty)))
        cells = self.rng.sample(empty, count)
        return {"set_cells": [[r, c, self.rng.randrange(self.alphabet_size)]
                              for r, c in cells]}


def check_win(state: FriedbergState, mode: str) -> str:
    """End-of-trace verdict, emulating the idealized game's limit.

    A reserved row whose assistant's kill condition holds at evaluation is
    treated as already retired: in the unbounded game that assistant retires
    its reservation forever and never settles.
    """
    a, b = state.a_table, state.b_table
    visible = state.visible()

    settled: list[frozenset] = []
    for assistant in state.assistants:
        if assistant.reserved_row is None or assistant.reserved_row in state.killed_rows:
            continue
        if kill_condition(visible, assistant.source_row, assistant.kill_counter):
            continue
        settled.append(row_content(b, assistant.reserved_row))

    if mode == KILLING:
        if len(set(settled)) != len(settled):
            return ALICE_WINS
        valid = set(settled)
        for row in range(a.rows):
            if row_content(a, row) not in valid:
                return ALICE_WINS
        return BOB_WINS

    candidates = list(settled)
    candidates += [row_content(b, r) for r in state.converted_rows]
    candidates += [row_content(b, r) for r in state.extra_rows]
    if len(set(candidates)) != len(candidates):
        return ALICE_WINS
    contents = set(candidates)
    for row in range(a.rows):
        if not is_odd_row(a, row) and row_content(a, row) not in contents:
            return ALICE_WINS
    for pattern in enumerate_odd_rows(b.cols, b.alphabet_size):
        if frozenset(pattern.items()) not in contents:
            return ALICE_WINS
    return BOB_WINS
