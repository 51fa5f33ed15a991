"""Command-line interface.

Subcommands
-----------
classify   verdict, minimality, and coupling diagnostics for one word
speed      certified two-sided speed bracket for a letter law
curve      bracket the growth-rate curve C(p) over a grid of p values
simulate   forward Monte Carlo speed estimate
perfect    exact stationary samples via coupling from the past
begraph    longest-path growth rate in the random directed graph
verify     cross-check the three estimators against each other

Every command is deterministic given ``--seed`` and the command arguments;
``--threads`` only changes wall-clock time, never output bytes.  Exit
codes: 0 success, 1 usage error, 2 verification failure, 3 size or
horizon limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from infinitebin import begraph, rng, series, simulate, words
from infinitebin.core import MINIMAL_CONFIG, Configuration
from infinitebin.distributions import parse_mu
from infinitebin.simulate import CouplingHorizonError
from infinitebin.store import WordStore, WordStoreRecord, default_store_path
from infinitebin.words import SizeLimitError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_LIMIT = 3

#: Largest letter for which the exact coupling number is computed by the
#: classify command (cost grows like 2^letter).
_EXACT_COUPLING_LETTER_CAP = 12

#: Default verification panel: two geometric and two uniform laws.
VERIFY_PANEL = ("geom:0.5", "geom:0.8", "unif:2", "unif:3")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of calling sys.exit(2)."""

    def error(self, message):
        raise _UsageError(message)


@contextmanager
def _out_stream(path):
    """Writable text stream: the given path, or stdout when path is None."""
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _record(op, mu_desc, params, estimate, stderr, seed, tau_histogram):
    """One JSON result record with the fixed key set."""
    return json.dumps(
        {
            "op": op,
            "mu": mu_desc,
            "params": params,
            "estimate": estimate,
            "stderr": stderr,
            "seed": seed,
            "tau_histogram": tau_histogram,
        },
        sort_keys=False,
    )


def _parse_word(text):
    try:
        word = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise _UsageError(f"bad word {text!r}: {exc}") from exc
    if not word:
        raise _UsageError("word must have at least one letter")
    if any(a < 1 for a in word):
        raise _UsageError(f"letters must be >= 1, got {text!r}")
    return word


def _parse_grid(text):
    """Grid spec: 'start:stop:step' or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _UsageError(f"bad grid {text!r}: want start:stop:step")
        try:
            start, stop, step = (float(x) for x in parts)
        except ValueError as exc:
            raise _UsageError(f"bad grid {text!r}: {exc}") from exc
        if step <= 0 or stop < start:
            raise _UsageError(f"bad grid {text!r}: need step > 0, stop >= start")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise _UsageError(f"bad grid {text!r}: {exc}") from exc


def _parse_budget(text):
    raw = text[:-1] if text.endswith("s") else text
    try:
        value = int(raw)
    except ValueError as exc:
        raise _UsageError(f"bad budget {text!r}: want seconds like '60s'") from exc
    if value < 1:
        raise _UsageError("budget must be at least 1 second")
    return value


def _store_for(args):
    path = args.store if args.store is not None else default_store_path()
    return WordStore(path) if path else None


def _map_ordered(threads, fn, jobs):
    """Run fn over jobs, results in job order regardless of thread count."""
    if threads <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_classify(args):
    word = _parse_word(args.word)
    store = _store_for(args)
    result = store.classify(word) if store is not None else words.classify(word)
    verdict = result.verdict
    if result.minimal is True:
        verdict += ", minimal"
    elif result.minimal is False:
        verdict += ", not minimal"
    tracker_depth = words.tracker_run(word).depth
    if max(word) <= _EXACT_COUPLING_LETTER_CAP:
        coupling = f"coupling_number={words.coupling_number(word)}"
    else:
        coupling = f"coupling_number>={tracker_depth} (tracker bound only)"
    lines = [
        f"word {','.join(map(str, word))}: {verdict}",
        f"horizon={words.horizon(word)} tracker_depth={tracker_depth} {coupling}",
    ]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_speed(args):
    mu = parse_mu(args.mu)
    if not mu.non_degenerate() and mu.support_min >= 2:
        k = mu.support_min
        sys.stderr.write(
            f"warning: {mu.describe()} is a point mass at {k} >= 2; the "
            "minimal-word speed identity does not hold for it\n"
        )
        sys.stdout.write(
            "bracket suppressed; estimate by simulation instead, e.g.\n"
            f"  infinitebin simulate {mu.describe()} --steps 1000000\n"
        )
        return EXIT_OK
    store = _store_for(args)
    if store is not None:
        def emit(word, verdict, _weight):
            store.add(
                WordStoreRecord(word=tuple(word), verdict=verdict, minimal=True)
            )
        bracket = series.enumerate_minimal(
            mu, args.len, args.max_letter, emit=emit
        )
    else:
        bracket = series.enumerate_minimal(mu, args.len, args.max_letter)
    sys.stdout.write(str(bracket) + "\n")
    if args.out is not None:
        params = dict(bracket.params)
        params.update(
            lower=bracket.lower,
            upper=bracket.upper,
            good_mass=bracket.good_mass,
            bad_mass=bracket.bad_mass,
            frontier_mass=bracket.frontier_mass,
            rounding_bound=bracket.rounding_bound,
        )
        with _out_stream(args.out) as fh:
            fh.write(
                _record(
                    "speed", mu.describe(), params,
                    bracket.midpoint, 0.5 * bracket.width, None, None,
                )
                + "\n"
            )
    return EXIT_OK


def cmd_curve(args):
    grid = _parse_grid(args.grid)
    rows = series.curve(grid, args.len, args.max_letter)
    with _out_stream(args.out) as fh:
        fh.write("p,lower,upper,L,A,rounding_bound\n")
        for row in rows:
            fh.write(
                f"{row.p:.10g},{row.lower:.17g},{row.upper:.17g},"
                f"{args.len},{args.max_letter},{row.rounding_bound:.17g}\n"
            )
    return EXIT_OK


def cmd_simulate(args):
    mu = parse_mu(args.mu)
    start = (
        Configuration.from_json(args.start)
        if args.start is not None
        else MINIMAL_CONFIG
    )
    stats = simulate.run_forward(mu, start, args.steps, args.seed)
    sys.stdout.write(
        f"speed_estimate={stats.speed_estimate:.9f} "
        f"stderr={stats.stderr:.3e} front_final={stats.front_final} "
        f"steps={stats.steps} seed={stats.seed}\n"
    )
    if args.out is not None:
        with _out_stream(args.out) as fh:
            fh.write(
                _record(
                    "simulate", mu.describe(),
                    {"steps": args.steps, "start": start.to_json()},
                    stats.speed_estimate, stats.stderr, args.seed, None,
                )
                + "\n"
            )
    return EXIT_OK


def cmd_perfect(args):
    mu = parse_mu(args.mu)
    tail = simulate.tau_tail(
        mu, args.K, args.replicas, args.seed, max_horizon=args.max_horizon
    )
    first = simulate.perfect_sample(
        mu, args.K, args.seed, replica=0, max_horizon=args.max_horizon
    )
    estimate = stderr = None
    if args.estimate:
        estimate, stderr = simulate.stationary_speed(
            mu, args.replicas, args.K, args.seed, max_horizon=args.max_horizon
        )
    hist = [[int(t), int(c)] for t, c in tail.histogram()]
    sys.stdout.write(
        f"scenery[replica 0]={list(first.scenery)} tau={first.tau} "
        f"median_tau={tail.median:g} replicas={args.replicas}\n"
    )
    if estimate is not None:
        sys.stdout.write(
            f"stationary_speed={estimate:.9f} stderr={stderr:.3e}\n"
        )
    if args.out is not None:
        with _out_stream(args.out) as fh:
            fh.write(
                _record(
                    "perfect", mu.describe(),
                    {
                        "K": args.K,
                        "replicas": args.replicas,
                        "max_horizon": args.max_horizon,
                        "scenery_first": list(first.scenery),
                        "tau_first": first.tau,
                    },
                    estimate, stderr, args.seed, hist,
                )
                + "\n"
            )
    return EXIT_OK


def cmd_begraph(args):
    if args.trajectory:
        fronts = begraph.fk_coupling_trajectory(args.n, args.p, args.seed)
        terminal = int(fronts[-1])
        sys.stdout.write(
            f"longest_path={terminal} n={args.n} p={args.p:g} "
            f"rate={terminal / args.n:.9f}\n"
        )
        if args.out is not None:
            with _out_stream(args.out) as fh:
                fh.write(
                    _record(
                        "begraph", None,
                        {
                            "n": args.n,
                            "p": args.p,
                            "trajectory": [int(f) for f in fronts],
                        },
                        terminal / args.n, None, args.seed, None,
                    )
                    + "\n"
                )
        return EXIT_OK
    estimate, stderr = begraph.estimate_C(
        args.p, n=args.n, replicas=args.replicas, seed=args.seed
    )
    sys.stdout.write(
        f"C({args.p:g}) ~ {estimate:.9f} stderr={stderr:.3e} "
        f"(n={args.n}, replicas={args.replicas})\n"
    )
    if args.out is not None:
        with _out_stream(args.out) as fh:
            fh.write("p,n,estimate,stderr,replicas,seed\n")
            fh.write(
                f"{args.p:.10g},{args.n},{estimate:.17g},{stderr:.17g},"
                f"{args.replicas},{args.seed}\n"
            )
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _stationary_blocked(mu, samples, seed, threads, max_horizon):
    """stationary_speed with a fixed 16-block decomposition.

    The block split is independent of the thread count, so results are
    byte-identical for every --threads value.
    """
    probes = mu.letters_from_uniforms(
        rng.stream(seed, rng.STREAM_PROBE).random(samples)
    )
    n_blocks = min(16, samples)
    bounds = [round(i * samples / n_blocks) for i in range(n_blocks + 1)]

    def block_hits(b):
        hits = 0
        for r in range(bounds[b], bounds[b + 1]):
            sample = simulate.perfect_sample(
                mu, 1, seed, replica=r, max_horizon=max_horizon
            )
            if probes[r] <= sample.scenery[0]:
                hits += 1
        return hits

    hits = sum(_map_ordered(threads, block_hits, list(range(n_blocks))))
    estimate = hits / samples
    return estimate, math.sqrt(estimate * (1.0 - estimate) / samples)


# Two-sided 99.73% Student-t quantiles (the coverage of "3 sigma") by
# degrees of freedom, for gates whose stderr is itself estimated from a
# small number of replicates.
_T_GATE = {
    2: 19.21, 3: 9.22, 4: 6.62, 5: 5.51, 6: 4.90, 7: 4.53, 8: 4.28,
    9: 4.09, 10: 3.96, 12: 3.76, 15: 3.59, 20: 3.42, 29: 3.28,
}


def _t_gate(dof: int) -> float:
    if dof <= 0:
        raise ValueError("need at least two replicates for a spread gate")
    for cutoff in sorted(_T_GATE):
        if dof <= cutoff:
            return _T_GATE[cutoff]
    return 3.0


def _verify_one(spec, args, steps, samples, bracket_len):
    mu = parse_mu(spec)
    bracket = series.enumerate_minimal(mu, bracket_len, bracket_len)

    def forward_job(replica):
        return simulate.run_forward(
            mu, MINIMAL_CONFIG, steps, args.seed, replica=replica
        ).speed_estimate

    fw = _map_ordered(args.threads, forward_job, list(range(5)))
    fw_mean = sum(fw) / len(fw)
    fw_var = sum((x - fw_mean) ** 2 for x in fw) / (len(fw) - 1)
    fw_se = math.sqrt(fw_var / len(fw))

    st_mean, st_se = _stationary_blocked(
        mu, samples, args.seed, args.threads, simulate.DEFAULT_MAX_HORIZON
    )
    floor = simulate.speed_floor(mu)
    # The forward stderr is estimated from few replicas, so the 99.73%
    # two-sided gate needs the Student-t quantile, not the normal 3; the
    # stationary stderr is the exact binomial formula and keeps 3.
    fw_tol = _t_gate(len(fw) - 1) * fw_se
    st_tol = 3 * st_se
    slack = bracket.rounding_bound
    checks = {
        "bracket_sane": 0.0 <= bracket.lower <= bracket.upper <= 1.0,
        "forward_in_bracket": (
            bracket.lower - fw_tol - slack
            <= fw_mean
            <= bracket.upper + fw_tol + slack
        ),
        "stationary_in_bracket": (
            bracket.lower - st_tol - slack
            <= st_mean
            <= bracket.upper + st_tol + slack
        ),
        "estimators_agree": (
            abs(fw_mean - st_mean) <= math.hypot(fw_tol, st_tol) + 1e-12
        ),
        "above_floor": fw_mean >= floor - fw_tol,
    }
    return {
        "mu": mu.describe(),
        "bracket": {
            "lower": bracket.lower,
            "upper": bracket.upper,
            "width": bracket.width,
            "L": bracket_len,
            "A": bracket_len,
        },
        "forward": {"estimate": fw_mean, "stderr": fw_se, "steps": steps,
                    "seeds": len(fw)},
        "stationary": {"estimate": st_mean, "stderr": st_se,
                       "samples": samples},
        "floor": floor,
        "checks": checks,
        "pass": all(checks.values()),
    }


def cmd_verify(args):
    budget = _parse_budget(args.budget)
    if args.panel != "default":
        raise _UsageError(f"unknown panel {args.panel!r}")
    scale = budget / 60.0
    steps = max(2_000, int(100_000 * scale))
    samples = max(500, int(20_000 * scale))
    bracket_len = 10
    results = [
        _verify_one(spec, args, steps, samples, bracket_len)
        for spec in VERIFY_PANEL
    ]
    report = {
        "op": "verify",
        "panel": args.panel,
        "budget_s": budget,
        "seed": args.seed,
        "results": results,
        "pass": all(r["pass"] for r in results),
    }
    for r in results:
        status = "PASS" if r["pass"] else "FAIL"
        sys.stdout.write(
            f"{status} mu={r['mu']} "
            f"bracket=[{r['bracket']['lower']:.6f},{r['bracket']['upper']:.6f}] "
            f"forward={r['forward']['estimate']:.6f} "
            f"stationary={r['stationary']['estimate']:.6f}\n"
        )
    sys.stdout.write(("VERIFY PASS" if report["pass"] else "VERIFY FAIL") + "\n")
    if args.out is not None:
        with _out_stream(args.out) as fh:
            fh.write(json.dumps(report, sort_keys=False) + "\n")
    return EXIT_OK if report["pass"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="master seed (default 0)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads; never changes results")
    common.add_argument("--out", type=str, default=None,
                        help="write the structured result to this path")
    common.add_argument("--store", type=str, default=None,
                        help="word-classification cache path "
                             "(default: $INFINITEBIN_WORD_STORE)")

    parser = _Parser(
        prog="infinitebin",
        description="Infinite-bin model: word calculus, certified speed "
                    "brackets, perfect simulation, and longest-path growth.",
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common],
                       help="classify one word (comma-separated letters)")
    p.add_argument("word", help="e.g. 2,3,2,2")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("speed", parents=[common],
                       help="certified speed bracket for a letter law")
    p.add_argument("mu", help="geom:p | unif:k | dirac:k | finite:p1,p2,...")
    p.add_argument("--len", type=int, default=12,
                   help="maximum word length (default 12)")
    p.add_argument("--max-letter", type=int, default=12,
                   help="maximum letter (default 12)")
    p.set_defaults(func=cmd_speed)

    p = sub.add_parser("curve", parents=[common],
                       help="bracket C(p) on a grid of p values (CSV)")
    p.add_argument("--grid", required=True,
                   help="start:stop:step or comma-separated p values")
    p.add_argument("--len", type=int, default=10,
                   help="maximum word length (default 10)")
    p.add_argument("--max-letter", type=int, default=10,
                   help="maximum letter (default 10)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", parents=[common],
                       help="forward Monte Carlo speed estimate")
    p.add_argument("mu", help="letter law spec")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--start", type=str, default=None,
                   help="start configuration as JSON (default: minimal)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("perfect", parents=[common],
                       help="perfect stationary samples via coupling "
                            "from the past")
    p.add_argument("mu", help="letter law spec")
    p.add_argument("-K", type=int, default=1,
                   help="scenery depth (default 1)")
    p.add_argument("--replicas", type=int, default=100)
    p.add_argument("--max-horizon", type=int,
                   default=simulate.DEFAULT_MAX_HORIZON)
    p.add_argument("--estimate", action="store_true",
                   help="also estimate the stationary speed")
    p.set_defaults(func=cmd_perfect)

    p = sub.add_parser("begraph", parents=[common],
                       help="longest-path growth in the random graph")
    p.add_argument("--p", type=float, required=True,
                   help="edge probability in (0, 1]")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--replicas", type=int, default=10)
    p.add_argument("--trajectory", action="store_true",
                   help="emit the front trajectory of one coupled run")
    p.set_defaults(func=cmd_begraph)

    p = sub.add_parser("verify", parents=[common],
                       help="cross-check bracket, forward MC, and perfect "
                            "sampling on a panel of laws")
    p.add_argument("--panel", type=str, default="default")
    p.add_argument("--budget", type=str, default="60s",
                   help="time budget like '60s'; scales sample sizes "
                        "deterministically")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise _UsageError("--threads must be >= 1")
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (SizeLimitError, CouplingHorizonError) as exc:
        sys.stderr.write(f"limit exceeded: {exc}\n")
        return EXIT_LIMIT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
