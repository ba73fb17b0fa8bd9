"""Adversarial two-player game simulations with verification harnesses.

Five concrete games, each with a reference winning strategy and a set of
adversaries, run on a shared deterministic referee with replayable traces:

* ``friedberg``  -- two-table numbering game (killing and odd-rows variants)
* ``totalcond``  -- partial function vs. a budget-capped list of total maps
* ``permgame``   -- bijection marking game plus the permutation merge
* ``epslev``     -- weight-raising vs. probabilistic marking on a bipartite graph
* ``infodist``   -- clique agency with experience indices on m+1 components
"""

from .engine import (ALICE, ALICE_WINS, BOB, BOB_WINS, PASS, UNDECIDED, Budget,
                     GameTrace, IllegalMove, Move, check_quiescence, child_seed,
                     replay_trace, run_game, trace_from_json, trace_to_json)

__version__ = "0.1.0"

__all__ = [
    "ALICE", "ALICE_WINS", "BOB", "BOB_WINS", "PASS", "UNDECIDED",
    "Budget", "GameTrace", "IllegalMove", "Move",
    "check_quiescence", "child_seed", "replay_trace", "run_game",
    "trace_from_json", "trace_to_json", "__version__",
]
