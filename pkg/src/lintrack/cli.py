"""Command-line front end.

Exit status: 0 linearizable (up to the bound), 1 counterexample or no
linearization, 2 stuck implementation or any input/configuration error,
3 state budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from lintrack import casestudies, serialize
from lintrack.checker import (
    BudgetExceeded,
    Counterexample,
    ExploreParams,
    LinearizableUpToBound,
    NoLinearization,
    check,
    extract_witness,
)
from lintrack.core import decode_val
from lintrack.lang import DSLError, load_implementation, parse_implementation, parse_value_set
from lintrack.lang.syntax import Implementation
from lintrack.runtime import ReplayError, wf_run
from lintrack.tracker import embed, project

EXIT_OK, EXIT_FAIL, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3
BUILTIN_PREFIX = "builtin:"


class CLIError(Exception):
    pass


# --- loading ---------------------------------------------------------------


def parse_domain_flags(items: Sequence[str]) -> dict:
    out = {}
    for item in items:
        name, sep, text = item.partition("=")
        if not sep or not name.strip():
            raise CLIError(f"--domain expects NAME=v1,v2,..., got {item!r}")
        try:
            out[name.strip()] = parse_value_set(text)
        except DSLError as exc:
            raise CLIError(f"--domain {name.strip()}: {exc}") from None
    return out


def load_target(spec: str, domains: dict) -> Implementation:
    if spec.startswith(BUILTIN_PREFIX):
        name = spec[len(BUILTIN_PREFIX):]
        if name not in casestudies.NAMES:
            raise CLIError(f"unknown bundled case study {name!r} (have: {', '.join(casestudies.NAMES)})")
        try:
            return parse_implementation(casestudies.source(name), domains)
        except DSLError as exc:
            raise CLIError(f"{spec}: {type(exc).__name__}: {exc}") from None
    try:
        return load_implementation(spec, domains)
    except OSError as exc:
        raise CLIError(f"cannot read {spec}: {exc.strerror or exc}") from None
    except DSLError as exc:
        raise CLIError(f"{spec}: {type(exc).__name__}: {exc}") from None


def load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: invalid JSON: {exc}") from None


def load_run(impl: Implementation, path: str, nprocs: Optional[int]):
    obj = load_json(path)
    try:
        r = serialize.run_from_json(impl, obj, nprocs)
    except serialize.TraceFormatError as exc:
        raise CLIError(f"{path}: {exc}") from None
    except ReplayError as exc:
        raise CLIError(f"{path}: inapplicable {exc}") from None
    ok = wf_run(impl, r)
    if not ok:
        raise CLIError(f"{path}: trace is not well-formed at event {ok.index}: {ok.reason}")
    return r


# --- text rendering --------------------------------------------------------


def _v(obj: Any) -> str:
    return str(decode_val(obj))


def fmt_line(line: dict) -> str:
    if line["kind"] == "invoke":
        return f"Invoke({line['op']}, {_v(line['arg'])})"
    if line["kind"] == "response":
        return f"Response({_v(line['resp'])})"
    return "Intermediate"


def fmt_event(e: dict) -> str:
    return f"p{e['proc']}:{fmt_line(e['line'])}"


def fmt_status(s: dict) -> str:
    if s["kind"] == "pending":
        return f"pending {s['op']}({_v(s['arg'])})"
    if s["kind"] == "linearized":
        return f"linearized {_v(s['res'])}"
    return "idle"


def fmt_snapshot(ac: dict) -> str:
    return f"sigma={_v(ac['sigma'])} [{', '.join(fmt_status(s) for s in ac['statuses'])}]"


def fmt_config(c: dict) -> str:
    frames = []
    for p, f in enumerate(c["outstanding"]):
        if f is None:
            continue
        regs = ", ".join(f"{k}={_v(v)}" for k, v in sorted(f["registers"].items()))
        frames.append(f"p{p}:{f['op']}({_v(f['arg'])})@{f['pc']}" + (f"{{{regs}}}" if regs else ""))
    eps = ", ".join(f"{k}={_v(v)}" for k, v in sorted(c["eps"].items()))
    return f"eps {{{eps}}} frames [{', '.join(frames)}]"


def render_tracker(lines: list[str], label: str, snaps: list) -> None:
    lines.append(f"{label} ({len(snaps)} configuration{'s' if len(snaps) != 1 else ''}):")
    lines.extend(f"    {fmt_snapshot(ac)}" for ac in snaps)


def render_check_text(report: dict, elapsed: Optional[float] = None) -> str:
    p, s = report["params"], report["stats"]
    lines = [
        f"implementation {report['implementation']}: {p['mode']} check, "
        f"{p['processes']} processes, at most {p['max_events']} events",
        f"verdict: {report['verdict']}",
        f"explored {s['explored_states']} states, {s['explored_runs']} runs, "
        f"largest tracker {s['max_tracker_size']}" + (f", {elapsed:.2f}s" if elapsed is not None else ""),
    ]
    if "counterexample" in report:
        cex = report["counterexample"]
        lines.append(f"counterexample ({cex['failing_index']} events; tracker empties at the last):")
        for k, e in enumerate(cex["trace"]["events"], start=1):
            lines.append(f"  {k:3d}  {fmt_event(e)}")
        render_tracker(lines, f"  tracker after event {cex['failing_index'] - 1}", cex["tracker_before_failure"])
        if "witness_before_failure" in cex:
            lines.append("  linearization of the prefix before the failing event:")
            lines.extend(_render_atomic_events(cex["witness_before_failure"], indent="    "))
    for d in report.get("diagnostics", []):
        trace = " ".join(fmt_event(e) for e in d["trace"]) or "(initial)"
        lines.append(f"stuck p{d['proc']} ({d['kind']}): {d['message']}")
        lines.append(f"    after {trace}")
        lines.append(f"    in {fmt_config(d['config'])}")
    if "state_budget" in report:
        lines.append(f"state budget of {report['state_budget']} exhausted; result inconclusive")
    return "\n".join(lines) + "\n"


def _render_atomic_events(run: dict, indent: str = "  ") -> list[str]:
    out = [f"{indent}  0  {'':28s}{fmt_snapshot(run['initial'])}"]
    for k, e in enumerate(run["events"], start=1):
        out.append(f"{indent}{k:3d}  {fmt_event(e):28s}{fmt_snapshot(e)}")
    return out


def render_witness_text(run: dict) -> str:
    lines = [f"linearization ({len(run['events'])} events):"]
    lines.extend(_render_atomic_events(run))
    return "\n".join(lines) + "\n"


def render_replay_text(report: dict) -> str:
    lines = [f"replay of {len(report['steps']) - 1} events on {report['implementation']}, {report['processes']} processes"]
    for st in report["steps"]:
        head = "(initial)" if st["event"] is None else fmt_event(st["event"])
        lines.append(f"  {st['index']:3d}  {head:28s}tracker {st['tracker_size']:3d}  {fmt_config(st['config'])}")
        for ac in st.get("tracker", []):
            lines.append(f"{'':36s}{fmt_snapshot(ac)}")
    if report["failing_index"] is None:
        lines.append("tracker non-empty throughout: the replayed run is linearizable")
    else:
        lines.append(f"tracker empty after event {report['failing_index']}: no linearization")
    return "\n".join(lines) + "\n"


# --- commands --------------------------------------------------------------


def params_from_args(args) -> ExploreParams:
    try:
        return ExploreParams(
            max_events=args.depth,
            process_count=args.procs,
            dedup=not args.no_dedup,
            mode=args.mode,
            seed=args.seed,
            trials=args.trials,
            record_provenance=args.provenance,
            minimize=args.minimize,
            jobs=args.jobs,
            state_budget=args.budget,
        )
    except ValueError as exc:
        raise CLIError(str(exc)) from None


def cmd_check(args, out) -> int:
    impl = load_target(args.file, parse_domain_flags(args.domain))
    p = params_from_args(args)
    v = check(impl, p)
    witness = None
    if isinstance(v, Counterexample) and p.record_provenance:
        witness = extract_witness(impl, project(v.run).prefix(v.failing_index - 1))
    report = serialize.verdict_report(impl, p, v, witness)
    if args.format == "json":
        out.write(serialize.dumps(report))
    else:
        out.write(render_check_text(report, v.stats.elapsed))
    if isinstance(v, LinearizableUpToBound):
        return EXIT_OK
    if isinstance(v, Counterexample):
        return EXIT_FAIL
    if isinstance(v, BudgetExceeded):
        return EXIT_BUDGET
    return EXIT_ERROR


def cmd_witness(args, out) -> int:
    impl = load_target(args.file, parse_domain_flags(args.domain))
    r = load_run(impl, args.trace, args.procs)
    try:
        w = extract_witness(impl, r)
    except NoLinearization as exc:
        print(f"lintrack: {exc}", file=sys.stderr)
        return EXIT_FAIL
    run = serialize.atomic_run_to_json(impl.spec, w)
    out.write(serialize.dumps(run) if args.format == "json" else render_witness_text(run))
    return EXIT_OK


def replay_report(impl: Implementation, r, verbose: bool) -> dict:
    t = impl.spec
    aug = embed(impl, r)
    steps, failing = [], None
    for k, c in enumerate(aug.configs):
        st: dict[str, Any] = {
            "index": k,
            "event": None if k == 0 else serialize.event_to_json(aug.steps[k - 1]),
            "config": serialize.config_to_json(impl, c.base),
            "tracker_size": len(c.tracker),
        }
        if verbose:
            st["tracker"] = serialize.tracker_to_json(t, c.tracker)
        if failing is None and not c.tracker:
            failing = k
        steps.append(st)
    return {
        "schema": "lintrack.replay/1",
        "implementation": impl.name,
        "processes": r.initial.nprocs,
        "steps": steps,
        "failing_index": failing,
    }


def cmd_trace(args, out) -> int:
    impl = load_target(args.file, parse_domain_flags(args.domain))
    r = load_run(impl, args.schedule, args.procs)
    report = replay_report(impl, r, args.verbose)
    out.write(serialize.dumps(report) if args.format == "json" else render_replay_text(report))
    return EXIT_OK if report["failing_index"] is None else EXIT_FAIL


def cmd_show(args, out) -> int:
    if args.name not in casestudies.NAMES:
        raise CLIError(f"unknown bundled case study {args.name!r} (have: {', '.join(casestudies.NAMES)})")
    out.write(casestudies.source(args.name))
    return EXIT_OK


# --- argument parsing ------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _natural(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument(
        "--domain", action="append", default=[], metavar="NAME=V1,V2",
        help="override a named domain declared in the source, e.g. D=0,1,2",
    )

    ap = argparse.ArgumentParser(prog="lintrack", description="Bounded linearizability checking by tracking every possible linearization.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, mode, help_ in (
        ("check", "exhaustive", "explore runs up to a depth bound"),
        ("fuzz", "random", "sample random schedules (check --mode random)"),
    ):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("file", help="DSL source, or builtin:NAME for a bundled case study")
        c.add_argument("--procs", type=_positive, default=2)
        c.add_argument("--depth", type=_natural, default=8, help="maximum number of events per run")
        c.add_argument("--mode", choices=("exhaustive", "random"), default=mode)
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--trials", type=_positive, default=1000)
        c.add_argument("--jobs", type=_positive, default=1)
        c.add_argument("--provenance", action="store_true", help="attach a linearization of the counterexample's last good prefix")
        c.add_argument("--minimize", action="store_true", help="breadth-first search for a shortest counterexample")
        c.add_argument("--no-dedup", action="store_true", help="do not prune revisited states")
        c.add_argument("--budget", type=_positive, default=None, help="give up after this many distinct states")
        c.set_defaults(run=cmd_check)

    w = sub.add_parser("witness", parents=[common], help="print a linearization of a recorded run")
    w.add_argument("file")
    w.add_argument("trace", help="trace JSON file, or - for stdin")
    w.add_argument("--procs", type=_positive, default=None)
    w.set_defaults(run=cmd_witness)

    t = sub.add_parser("trace", parents=[common], help="replay a schedule and dump configurations and trackers")
    t.add_argument("file")
    t.add_argument("schedule", help="trace JSON file, or - for stdin")
    t.add_argument("--procs", type=_positive, default=None)
    t.add_argument("--verbose", action="store_true", help="print full tracker contents")
    t.set_defaults(run=cmd_trace)

    s = sub.add_parser("show", help="print the source of a bundled case study")
    s.add_argument("name", choices=casestudies.NAMES)
    s.set_defaults(run=cmd_show)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except CLIError as exc:
        print(f"lintrack: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
