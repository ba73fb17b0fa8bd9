"""Command-line front end: single runs, verification suites, sweeps, oracles.

Plain-text key=value configs with command-line override; all machine output
is JSON.  ``GAMELAB_SEED`` supplies the default seed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from fractions import Fraction

from . import engine, epslev, friedberg, infodist, permgame, totalcond
from .engine import Budget, run_game, replay_trace, trace_to_json

GAMES = ("friedberg", "totalcond", "permgame", "epslev", "infodist")


def parse_value(text: str):
    """int, rational (a/b), float-free; falls back to the raw string."""
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        try:
            return Fraction(text)
        except ValueError:
            pass
    try:
        return Fraction(text)  # accepts decimal strings exactly
    except ValueError:
        return text


def parse_params(pairs) -> dict:
    params = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise SystemExit(f"bad --param {pair!r}, expected key=value")
        key, _, value = pair.partition("=")
        params[key.strip()] = parse_value(value.strip())
    return params


def load_config(path: str) -> dict:
    params = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            params[key.strip()] = parse_value(value.strip())
    return params


def _epslev_config(params: dict) -> epslev.ELConfig:
    n_left = int(params.get("left", 32))
    n_right = int(params.get("right", 32))
    k = int(params.get("k", 1))
    delta = Fraction(params.get("delta", Fraction(1, 4)))
    m_min = int(params.get("m_min", 6))
    if "edges" in params:
        edges = [tuple(int(t) for t in e.split("-")) for e in str(params["edges"]).split(",")]
        p_spec = params.get("p", "uniform")
        if p_spec == "uniform":
            p = {y: Fraction(1, n_right) for y in range(n_right)}
        else:
            p = {}
            for item in str(p_spec).split(";"):
                y, _, frac = item.partition(":")
                p[int(y)] = Fraction(frac)
        return epslev.ELConfig(range(n_left), range(n_right), edges, p, k, delta, m_min)
    degree = int(params.get("degree", 4))
    return epslev.ring_config(n_left, n_right, degree, k, delta, m_min)


def build_run(game: str, params: dict, adversary: str):
    """Build (rules, alice, bob, budget) for one game instance."""
    if game == "totalcond":
        n = int(params.get("n", 2))
        rules = totalcond.GnRules(n)
        alice = totalcond.AliceFreshPoint()
        bob = totalcond.make_bob_adversary(adversary or "greedy", n)
        budget = Budget(max_rounds=4 * 2 ** n + 8)
        return rules, alice, bob, budget
    if game == "permgame":
        k = int(params.get("k", 1))
        n = int(params.get("n", 2 * k + 1))
        raw = params.get("bob_budget", 2 ** (2 * k - 2) if k >= 1 else 1)
        bob_budget = None if raw in ("unlimited", None) else int(raw)
        rules = permgame.MarkingRules(k, n, bob_budget)
        alice = permgame.AliceMinConnection()
        bob = permgame.make_bob_adversary(adversary or "greedy", k, n, bob_budget)
        budget = Budget(max_rounds=16 * 4 ** k + 32)
        return rules, alice, bob, budget
    if game == "friedberg":
        rows = int(params.get("rows_a", 4))
        cols = int(params.get("cols", 3))
        alphabet = int(params.get("alphabet", 2))
        mode = str(params.get("mode", friedberg.KILLING))
        active = int(params.get("active_rounds", 20))
        grace = int(params.get("grace", 40))
        max_rounds = active + grace + 20
        rules = friedberg.FriedbergRules(rows, cols, alphabet, mode, max_rounds)
        alice = friedberg.RandomQuiescingAlice(rows, cols, alphabet, active)
        bob = friedberg.BobAssistants()
        return rules, alice, bob, Budget(max_rounds=max_rounds, grace_rounds=grace)
    if game == "epslev":
        config = _epslev_config(params)
        rules = epslev.ELRules(config)
        alice = epslev.AliceEventStream(epslev.make_alice(adversary or "spread", config))
        bob = epslev.BobCoinMarker(config)
        return rules, alice, bob, Budget(max_rounds=2 ** (config.m_min + 2))
    if game == "infodist":
        m = int(params.get("m", 1))
        n = int(params.get("n", 1))
        big_n = int(params.get("N", 64))
        grace = int(params.get("grace", 20))
        rules = infodist.AgencyRules(m, n, big_n,
                                     str(params.get("spoil_direction", "either")))
        alice = infodist.AgencyAlice()
        bob = infodist.make_bob_adversary(adversary or "greedy-dissolver", m, n, big_n)
        return rules, alice, bob, Budget(max_rounds=6000, grace_rounds=grace)
    raise SystemExit(f"unknown game {game!r}")


def summarize(game: str, trace, state) -> dict:
    if game == "permgame":
        return permgame.run_summary(trace)
    if game == "infodist":
        return infodist.run_summary(state, trace.verdict)
    if game == "totalcond":
        return {
            "verdict": trace.verdict,
            "alice_points": len(state.a_func),
            "bob_listed": len(state.bob_list),
        }
    if game == "epslev":
        return {
            "verdict": trace.verdict,
            "marked_left": len(state.marked_left),
            "marked_right": len(state.marked_right),
        }
    return {"verdict": trace.verdict, "rounds": trace.rounds()}


def cmd_run(args) -> int:
    params = {}
    if args.config:
        params.update(load_config(args.config))
    params.update(parse_params(args.param))
    rules, alice, bob, budget = build_run(args.game, params, args.adversary)
    trace = run_game(rules, alice, bob, budget, args.seed)
    state, verdict = replay_trace(rules, trace)
    if verdict != trace.verdict:
        print("replay verdict mismatch: trace is not self-consistent", file=sys.stderr)
        return 1
    text = trace_to_json(trace)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    summary = summarize(args.game, trace, state)
    print(json.dumps(engine.to_jsonable(summary), separators=(",", ":")), file=sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    grid: dict[str, list] = {}
    for part in (args.grid or "").split(";"):
        part = part.strip()
        if not part:
            continue
        key, _, values = part.partition("=")
        grid[key.strip()] = [parse_value(v.strip()) for v in values.split(",")]
    keys = sorted(grid)
    cells = list(itertools.product(*(grid[k] for k in keys))) if keys else [()]
    base = parse_params(args.param)
    for index, cell in enumerate(cells):
        params = dict(base)
        params.update(zip(keys, cell))
        record = {"cell": dict(zip(keys, cell)), "trials": args.trials}
        wins = 0
        summary = None
        for t in range(args.trials):
            rules, alice, bob, budget = build_run(args.game, params, args.adversary)
            trace = run_game(rules, alice, bob, budget, engine.child_seed(args.seed, index * args.trials + t))
            state, _ = replay_trace(rules, trace)
            summary = summarize(args.game, trace, state)
            wins += trace.verdict in (engine.ALICE_WINS, engine.BOB_WINS) and \
                trace.verdict == summary["verdict"]
        record["win_verdicts"] = wins
        record["last_summary"] = summary
        print(json.dumps(engine.to_jsonable(record), separators=(",", ":")))
    return 0


def cmd_oracle(args) -> int:
    if args.coin_tree:
        spec = parse_params(args.coin_tree)
        scale = Fraction(spec.get("scale", 1))
        t = Fraction(spec.get("t", 1))
        if "eps" in spec:
            eps = [Fraction(e) for e in str(spec["eps"]).split(",")]
            tree = epslev.chain_tree(eps)
        else:
            grid_opts = [Fraction(e) for e in str(spec.get("grid", "1/8,1/4,1/2,1")).split(",")]
            tree = epslev.grid_tree(grid_opts, int(spec.get("depth", 4)))
        value = epslev.no_success_probability(tree, scale, t)
        print(value)
        return 0
    if args.totalcond_exhaustive is not None:
        node = totalcond.make_bob_adversary("exhaustive-node", args.totalcond_exhaustive)
        leaves = node.leaf_verdicts()
        alice_all = all(v == engine.ALICE_WINS for _, v in leaves)
        print(json.dumps({"leaves": len(leaves), "alice_wins_all": alice_all}))
        return 0 if alice_all else 1
    raise SystemExit("oracle needs --coin-tree or --totalcond-exhaustive")


# --- verification suites ---------------------------------------------------------

def _suite_totalcond_exhaustive() -> list[str]:
    leaves = totalcond.ExhaustiveNode(1).leaf_verdicts()
    bad = [h for h, v in leaves if v != engine.ALICE_WINS]
    return [f"losing leaf {h}" for h in bad]


def _suite_totalcond_small() -> list[str]:
    failures = []
    for n in (2, 3):
        for kind in ("greedy", "random"):
            for seed in range(100):
                rules, alice, bob, budget = build_run("totalcond", {"n": n}, kind)
                trace = run_game(rules, alice, bob, budget, seed)
                if trace.verdict != engine.ALICE_WINS:
                    failures.append(f"n={n} {kind} seed={seed}: {trace.verdict}")
    return failures


def _suite_permgame_small() -> list[str]:
    failures = []
    for k in (1, 2):
        n = 2 * k + 1
        for seed in range(50):
            rules, alice, bob, budget = build_run(
                "permgame", {"k": k, "n": n, "bob_budget": 2 ** (2 * k - 2)}, "greedy")
            trace = run_game(rules, alice, bob, budget, seed)
            if trace.verdict != engine.ALICE_WINS:
                failures.append(f"k={k} lower bound seed={seed}: {trace.verdict}")
            rules, alice, bob, budget = build_run(
                "permgame", {"k": k, "n": n, "bob_budget": 2 ** (2 * k)}, "pairwise")
            trace = run_game(rules, alice, bob, budget, seed)
            if trace.verdict != engine.BOB_WINS:
                failures.append(f"k={k} upper bound seed={seed}: {trace.verdict}")
    return failures


def _suite_friedberg_small() -> list[str]:
    failures = []
    for mode in (friedberg.KILLING, friedberg.ODD_ROWS):
        for seed in range(25):
            rules, alice, bob, budget = build_run("friedberg", {"mode": mode}, "random")
            trace = run_game(rules, alice, bob, budget, seed)
            if trace.verdict != engine.BOB_WINS:
                failures.append(f"mode={mode} seed={seed}: {trace.verdict}")
    return failures


def _suite_epslev_oracle() -> list[str]:
    import math
    failures = []
    opts = [Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(1)]
    for depth in (2, 4):
        tree = epslev.grid_tree(opts, depth)
        for t in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)):
            value = epslev.no_success_probability(tree, 1, t)
            if float(value) > math.exp(-float(t)) + 1e-12:
                failures.append(f"depth={depth} t={t}: {value} beats e^-t")
    return failures


def _suite_epslev_small() -> list[str]:
    failures = []
    config = epslev.ring_config(k=1, delta=Fraction(1, 4))
    for kind in ("concentrated", "spread", "anti-coin"):
        rates = epslev.estimate_win_rate(config, kind, 200, seed=20260809)
        for name in ("l_breach_rate", "r_breach_rate"):
            if rates[name] >= 0.5:
                failures.append(f"{kind} {name}={rates[name]}")
    return failures


def _suite_infodist_small() -> list[str]:
    failures = []
    for kind in ("greedy-dissolver", "random", "complaint-focuser"):
        for seed in range(20):
            rules, alice, bob, budget = build_run("infodist", {"m": 1, "n": 1, "N": 64}, kind)
            trace = run_game(rules, alice, bob, budget, seed)
            if trace.verdict != engine.ALICE_WINS:
                failures.append(f"{kind} seed={seed}: {trace.verdict}")
    return failures


def _suite_determinism() -> list[str]:
    failures = []
    specs = [
        ("totalcond", {"n": 2}, "random"),
        ("permgame", {"k": 1}, "greedy"),
        ("friedberg", {"mode": friedberg.ODD_ROWS}, "random"),
        ("epslev", {"k": 1}, "anti-coin"),
        ("infodist", {"m": 1, "n": 1, "N": 64}, "greedy-dissolver"),
    ]
    for game, params, kind in specs:
        texts = []
        for _ in range(2):
            rules, alice, bob, budget = build_run(game, params, kind)
            texts.append(trace_to_json(run_game(rules, alice, bob, budget, 99)))
        if texts[0] != texts[1]:
            failures.append(f"{game}: traces differ across identical runs")
    return failures


SUITES = {
    "totalcond-exhaustive": _suite_totalcond_exhaustive,
    "totalcond-small": _suite_totalcond_small,
    "permgame-small": _suite_permgame_small,
    "friedberg-small": _suite_friedberg_small,
    "epslev-oracle": _suite_epslev_oracle,
    "epslev-small": _suite_epslev_small,
    "infodist-small": _suite_infodist_small,
    "determinism": _suite_determinism,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    bad = False
    for name in names:
        suite = SUITES.get(name)
        if suite is None:
            raise SystemExit(f"unknown suite {name!r}; have {', '.join(SUITES)} or all")
        failures = suite()
        status = "ok" if not failures else "FAIL"
        print(f"{name}: {status}")
        for line in failures:
            print(f"  {line}")
        bad = bad or bool(failures)
    return 1 if bad else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gamelab",
                                     description=__doc__.splitlines()[0])
    default_seed = int(os.environ.get("GAMELAB_SEED", "0"))
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="play one game and write its trace")
    p_run.add_argument("--game", required=True, choices=GAMES)
    p_run.add_argument("--adversary", default=None)
    p_run.add_argument("--seed", type=int, default=default_seed)
    p_run.add_argument("--param", action="append", metavar="KEY=VALUE")
    p_run.add_argument("--config", default=None, help="key=value config file")
    p_run.add_argument("--output", default=None, help="trace file (default stdout)")
    p_run.add_argument("--n", type=int, dest="shortcut_n", default=None)
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="run a named acceptance suite")
    p_verify.add_argument("--suite", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="iterate a parameter grid")
    p_sweep.add_argument("--game", required=True, choices=GAMES)
    p_sweep.add_argument("--grid", default="", metavar="k=1,2;n=3,5")
    p_sweep.add_argument("--adversary", default=None)
    p_sweep.add_argument("--trials", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=default_seed)
    p_sweep.add_argument("--param", action="append", metavar="KEY=VALUE")
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="evaluate an exact oracle")
    p_oracle.add_argument("--coin-tree", nargs="+", default=None,
                          metavar="KEY=VALUE", help="eps=…/grid=… depth=… scale=… t=…")
    p_oracle.add_argument("--totalcond-exhaustive", type=int, default=None,
                          metavar="N", help="full search at n=N (n=1 only)")
    p_oracle.set_defaults(func=cmd_oracle)

    args = parser.parse_args(argv)
    if getattr(args, "shortcut_n", None) is not None:
        args.param = (args.param or []) + [f"n={args.shortcut_n}"]
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
