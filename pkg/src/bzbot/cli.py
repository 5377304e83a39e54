"""Command-line interface.

    bzbot run <scenario> [--seed N] [--out PATH]
    bzbot analyze <trace.csv> [--hist-width VOLTS]
    bzbot serve [--port P] [--realtime-factor F] [--scenario NAME] [--seed N]
    bzbot scenarios
"""
from __future__ import annotations

import argparse
import asyncio
import sys

from . import lab
from .lab import (
    BUILTIN_SCENARIOS,
    DEFAULT_HISTOGRAM_WIDTH_V,
    LabError,
    decision_tallies,
    fit_normal,
    histogram,
    read_trace,
    resolve_scenario,
    run_scenario,
    write_trace,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bzbot",
        description="Chemical-oscillator robot simulator and analysis tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write its trace")
    p_run.add_argument("scenario",
                       help="builtin name (E1-E4) or path to a JSON definition")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None, help="trace CSV path")

    p_an = sub.add_parser("analyze", help="summarize a recorded trace")
    p_an.add_argument("trace", help="trace CSV file")
    p_an.add_argument("--hist-width", type=float,
                      default=DEFAULT_HISTOGRAM_WIDTH_V,
                      help="histogram bin width in volts")

    p_srv = sub.add_parser("serve", help="serve a live session over WebSocket")
    p_srv.add_argument("--port", type=int, default=8765)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--realtime-factor", type=float, default=10.0)
    p_srv.add_argument("--scenario", default=None,
                       help="scenario to drive the session (default: free run)")
    p_srv.add_argument("--seed", type=int, default=None)

    sub.add_parser("scenarios", help="list builtin scenarios")
    return parser


def _cmd_run(args, parser) -> int:
    try:
        scenario = resolve_scenario(args.scenario, seed=args.seed)
    except LabError as err:
        parser.error(str(err))  # exits 2
    trace = run_scenario(scenario)
    out = args.out or f"{scenario.name.lower()}_seed{scenario.seed}.csv"
    write_trace(trace, out)
    tallies = decision_tallies(trace)
    print(f"{scenario.name}: {len(trace.decisions)} decisions "
          f"(L={tallies['L']} R={tallies['R']} S={tallies['S']}) -> {out}")
    return 0


def _cmd_analyze(args) -> int:
    trace = read_trace(args.trace)
    volts = [s.volts for s in trace.samples]
    fit = fit_normal(volts)
    tallies = decision_tallies(trace)
    print(f"scenario {trace.scenario.name} seed {trace.scenario.seed}: "
          f"{fit.n} samples")
    note = " (degenerate: constant data)" if fit.is_degenerate else ""
    print(f"fit: mean={fit.mean:+.4f} V std={fit.std:.4f} V{note}")
    print(f"reference experiment scale: mean={lab.REFERENCE_MEAN_V} V "
          f"std={lab.REFERENCE_STD_V} V")
    print(f"decisions: L={tallies['L']} R={tallies['R']} S={tallies['S']}")
    print(f"histogram (width {args.hist_width} V):")
    for edge, count in histogram(volts, args.hist_width):
        print(f"  {edge:+.4f}  {count}")
    return 0


def _cmd_serve(args) -> int:
    from .bridge import serve

    if args.scenario is not None:
        scenario = resolve_scenario(args.scenario, seed=args.seed)
        endless = False
    else:
        scenario = lab.Scenario(name="live", duration_s=3600.0,
                                seed=args.seed if args.seed is not None else 0)
        endless = True
    try:
        asyncio.run(serve(scenario, host=args.host, port=args.port,
                          speed=args.realtime_factor, endless=endless))
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_scenarios() -> int:
    for name in sorted(BUILTIN_SCENARIOS):
        scenario = BUILTIN_SCENARIOS[name]()
        doc = (BUILTIN_SCENARIOS[name].__doc__ or "").strip().splitlines()[0]
        print(f"{name}: {scenario.duration_s:.0f} s, "
              f"{len(scenario.stimuli)} stimuli, seed {scenario.seed} - {doc}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args, parser)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "scenarios":
            return _cmd_scenarios()
    except (LabError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
