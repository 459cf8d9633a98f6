"""Command-line front end.

One executable, eight subcommands: fires, simulate, play, enumerate,
extract-orders, check, bounds, sequence.  Output on stdout is a stable
contract: given the same flags and seed, every invocation produces
byte-identical bytes (progress and diagnostics go to stderr).  Exit
codes: 0 success / all checks pass, 1 property failure, 2 usage or input
error, 3 checkpoint error, 4 enumeration paused with a checkpoint
written.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds as bounds_mod
from . import checks, enumeration, labeled, unlabeled

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CHECKPOINT = 3
EXIT_PAUSED = 4


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _fail(message: str, code: int = EXIT_USAGE) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _config_obj(config: labeled.LabeledConfig) -> dict:
    return {
        "n_chips": config.n_chips,
        "cells": [{"v": v, "chips": list(ls)} for v, ls in sorted(config.cells.items())],
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_fires(args) -> int:
    if args.chips < 1:
        return _fail("--chips must be >= 1")
    prof = unlabeled.profile(args.chips)
    if args.json:
        print(_dump(prof.to_dict()))
        return EXIT_OK
    for key, value in prof.to_dict().items():
        if isinstance(value, list):
            value = ",".join(str(x) for x in value)
        print(f"{key} {value}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.chips < 1:
        return _fail("--chips must be >= 1")
    if args.labeled:
        config = labeled.run_policy(args.chips, args.policy, args.seed)
        print(config.canonical_json())
        return EXIT_OK
    state = unlabeled.simulate(args.chips, strategy=args.strategy, seed=args.seed)
    out = {
        "n_chips": state.n_chips,
        "strategy": args.strategy,
        "seed": args.seed,
        "cells": {str(v): k for v, k in sorted(state.cells.items())},
        "fired": {str(v): k for v, k in sorted(state.fired.items())},
        "total_fires": sum(state.fired.values()),
    }
    print(_dump(out))
    return EXIT_OK


def cmd_play(args) -> int:
    if args.chips < 1:
        return _fail("--chips must be >= 1")
    config, fired = labeled.run_policy_traced(args.chips, args.policy, args.seed)
    out = {
        "policy": args.policy,
        "seed": args.seed,
        "total_fires": sum(fired.values()),
        "fired": [[v, k] for v, k in sorted(fired.items())],
        "config": _config_obj(config),
    }
    print(_dump(out))
    return EXIT_OK


def cmd_sequence(args) -> int:
    if args.count < 1:
        return _fail("--count must be >= 1")
    try:
        values = unlabeled.sequence(args.name, args.count)
    except ValueError as exc:
        return _fail(str(exc))
    if args.json:
        print(_dump({"name": args.name, "count": args.count, "values": values}))
    elif args.csv:
        for m, value in enumerate(values, start=1):
            print(f"{m},{value}")
    else:
        for value in values:
            print(value)
    return EXIT_OK


def _parse_ell_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError("range must look like L1..L2, e.g. 4..7")
    return int(lo), int(hi)


def cmd_bounds(args) -> int:
    cap = bounds_mod.ell_cap()
    use_sci = args.sci or (args.table is not None and not args.exact)

    def fmt(value: int) -> str:
        return bounds_mod.sci(value) if use_sci else str(value)

    if args.table is not None:
        try:
            lo, hi = _parse_ell_range(args.table)
        except ValueError as exc:
            return _fail(str(exc))
        if lo < 4 or hi < lo:
            return _fail("table range needs 4 <= L1 <= L2")
        if hi > cap:
            return _fail(f"ell {hi} exceeds the cap {cap}; set CHIPFIRE_MAX_ELL to raise it")
        rows = bounds_mod.compare_table(range(lo, hi + 1))
        if args.json:
            print(
                _dump(
                    {
                        "rows": [
                            {
                                "ell": r.ell,
                                "naive_z": r.naive_z,
                                "zigzag_z": r.zigzag_z,
                                "ballot_z": r.ballot_z,
                                "flags": r.flags(),
                            }
                            for r in rows
                        ],
                        "conditional": ["ballot"],
                    }
                )
            )
        elif args.csv:
            print("ell,naive_z,zigzag_z,ballot_z")
            for r in rows:
                print(f"{r.ell},{fmt(r.naive_z)},{fmt(r.zigzag_z)},{fmt(r.ballot_z)}")
        else:
            cells = [["ell", "naive", "zigzag", "ballot (conditional)"]]
            cells += [[str(r.ell), fmt(r.naive_z), fmt(r.zigzag_z), fmt(r.ballot_z)] for r in rows]
            widths = [max(len(row[i]) for row in cells) for i in range(4)]
            for row in cells:
                print("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        return EXIT_OK

    if args.ell is None:
        return _fail("either --ell or --table is required")
    if args.ell > cap:
        return _fail(f"ell {args.ell} exceeds the cap {cap}; set CHIPFIRE_MAX_ELL to raise it")

    methods = {
        "naive": (bounds_mod.naive_bounds, 3, ""),
        "zigzag": (bounds_mod.zigzag_bound, 4, ""),
        "ballot": (bounds_mod.ballot_bound, 3, " (conditional)"),
    }
    wanted = list(methods) if args.method == "all" else [args.method]
    results = {}
    for name in wanted:
        func, min_ell, _ = methods[name]
        if args.ell < min_ell:
            if args.method != "all":
                return _fail(f"{name} bound needs ell >= {min_ell}")
            continue
        results[name] = func(args.ell)
    if not results:
        return _fail(f"no requested bound is defined for ell={args.ell}")
    if args.json:
        print(
            _dump(
                {
                    "ell": args.ell,
                    "bounds": {name: {"t": t, "z": z} for name, (t, z) in results.items()},
                    "conditional": [n for n in results if n == "ballot"],
                }
            )
        )
    else:
        for name, (t, z) in results.items():
            suffix = methods[name][2]
            print(f"{name}{suffix} T={fmt(t)} Z={fmt(z)}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.ell < 1:
        return _fail("--ell must be >= 1")
    try:
        result = enumeration.enumerate_stable(
            args.ell,
            mode=args.mode,
            workers=args.workers,
            checkpoint_path=args.checkpoint,
            checkpoint_every=args.checkpoint_every,
            resume_path=args.resume,
            max_seconds=args.max_seconds,
            max_frontier=args.max_frontier,
            progress=args.progress,
        )
    except enumeration.CorpusError as exc:
        return _fail(str(exc), EXIT_CHECKPOINT)
    except enumeration.EnumerationPaused as exc:
        print(f"paused: {exc}", file=sys.stderr)
        return EXIT_PAUSED
    except ValueError as exc:
        return _fail(str(exc))
    if args.out:
        enumeration.save(result, args.out)
    if args.json:
        print(
            _dump(
                {
                    "ell": result.ell,
                    "count": result.count,
                    "mode": result.meta["mode"],
                    "explored_states": result.meta["explored_states"],
                    "max_frontier": result.meta["max_frontier"],
                    "out": args.out,
                }
            )
        )
    else:
        print(f"Z_{result.ell} = {result.count}")
        if args.mode == "scheduled":
            print(
                "mode scheduled fixes the vertex order and varies triples only; "
                "it matches full mode for ell <= 3 but undercounts from ell = 4 on"
            )
    return EXIT_OK


def cmd_extract_orders(args) -> int:
    try:
        stable_set = enumeration.load(args.input)
    except OSError as exc:
        return _fail(f"cannot read {args.input}: {exc}")
    except enumeration.CorpusError as exc:
        return _fail(str(exc))
    try:
        orders = sorted(enumeration.extract_subtree_orders(stable_set, args.depth))
    except ValueError as exc:
        return _fail(str(exc))
    if args.json:
        print(
            _dump(
                {
                    "ell": stable_set.ell,
                    "depth": args.depth,
                    "count": len(orders),
                    "orders": orders,
                }
            )
        )
    else:
        print(f"orders {len(orders)}")
        for key in orders:
            print(key)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        stable_set = enumeration.load(args.input)
    except OSError as exc:
        return _fail(f"cannot read {args.input}: {exc}")
    except enumeration.CorpusError as exc:
        return _fail(str(exc))
    ell = stable_set.ell

    wanted = list(checks.CHECKERS) if args.property == "all" else [args.property]
    runnable = []
    for name in wanted:
        needed = checks.min_layers_for(name)
        if ell < needed:
            if args.property != "all":
                return _fail(f"property {name} needs at least {needed} layers, corpus has {ell}")
            print(f"skip {name}: needs at least {needed} layers, corpus has {ell}")
            continue
        runnable.append(name)

    summary: dict[str, list[int]] = {name: [0, 0] for name in runnable}
    failures = []
    for index, config in enumerate(stable_set.configs):
        for name in runnable:
            try:
                if name == "penultimate":
                    report = checks.check_penultimate(config, mode=args.mode)
                else:
                    report = checks.CHECKERS[name](config)
            except ValueError as exc:
                return _fail(f"config {index} is outside the checkers' domain: {exc}")
            if report.passed:
                summary[name][0] += 1
                if args.verbose:
                    print(f"config {index} {name} PASS")
            else:
                summary[name][1] += 1
                for violation in report.violations:
                    failures.append(
                        {
                            "config": index,
                            "property": name,
                            "vertex": violation.vertex,
                            "detail": violation.detail,
                        }
                    )
                    print(
                        f"config {index} {name} FAIL vertex {violation.vertex}: "
                        f"{violation.detail}"
                    )
    all_pass = not failures
    if args.json:
        print(
            _dump(
                {
                    "input": args.input,
                    "ell": ell,
                    "configs": stable_set.count,
                    "summary": {
                        name: {"pass": ok, "fail": bad} for name, (ok, bad) in summary.items()
                    },
                    "failures": failures,
                    "all_pass": all_pass,
                }
            )
        )
    else:
        for name, (ok, bad) in summary.items():
            print(f"{name}: {ok}/{ok + bad} pass")
        print("all pass" if all_pass else f"failures {len(failures)}")
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chipfire",
        description="Chip-firing on the infinite binary tree with a self-loop at the root.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fires", help="closed-form fire counts and stable chip counts")
    p.add_argument("--chips", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fires)

    p = sub.add_parser("simulate", help="run the firing process to its stable configuration")
    p.add_argument("--chips", type=int, required=True)
    p.add_argument("--strategy", choices=unlabeled.STRATEGIES, default="lowest-index-first")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--labeled", action="store_true", help="play the labeled game instead")
    p.add_argument("--policy", choices=labeled.POLICIES, default="min-triple")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("play", help="play a labeled game with a triple-choice policy")
    p.add_argument("--chips", type=int, required=True)
    p.add_argument("--policy", choices=labeled.POLICIES, default="min-triple")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("enumerate", help="enumerate all reachable stable configurations")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--mode", choices=enumeration.MODES, default="full")
    p.add_argument("--out", help="write the stable set as a JSON-lines corpus")
    p.add_argument("--resume", help="resume from a checkpoint file")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--checkpoint", help="where to write periodic checkpoints")
    p.add_argument("--checkpoint-every", type=float, default=60.0, metavar="SECONDS")
    p.add_argument("--max-seconds", type=float, help="pause (exit 4) after this much time")
    p.add_argument("--max-frontier", type=int, help="pause (exit 4) if a level grows past this")
    p.add_argument("--progress", action="store_true", help="report progress on stderr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("extract-orders", help="distinct subtree orders in a stable-set corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_extract_orders)

    p = sub.add_parser("check", help="run property checkers over a stable-set corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--property", choices=[*checks.CHECKERS, "all"], default="all")
    p.add_argument(
        "--mode",
        choices=checks.PENULTIMATE_MODES,
        default="strict",
        help="reading of the penultimate-layer property",
    )
    p.add_argument("--verbose", action="store_true", help="print per-config PASS lines too")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bounds", help="exact bounds on stable-configuration counts")
    p.add_argument("--ell", type=int)
    p.add_argument("--method", choices=["naive", "zigzag", "ballot", "all"], default="all")
    p.add_argument("--table", metavar="L1..L2", help="comparison table over an ell range")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", help="print exact integers")
    group.add_argument("--sci", action="store_true", help="print 2-significant-digit notation")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sequence", help="integer sequences of the firing counts")
    p.add_argument("--name", choices=unlabeled.SEQUENCE_NAMES, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--csv", action="store_true", help="emit m,value rows")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sequence)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
