"""JSON forms of runs, trackers and check reports.

Values encode as JSON scalars: integers as numbers, booleans as
``true``/``false``, unit as ``null``, pairs as two-element arrays.  Object
states go through their type's canonical value encoding (a queue becomes a
unit-terminated chain of pairs).

Implementation trace (``lintrack.trace/1``)::

    {"schema": "lintrack.trace/1", "implementation": "RWCell", "processes": 2,
     "initial": CONFIG,
     "events": [{"proc": 0, "line": LINE, "config": CONFIG}, ...]}

    LINE   = {"kind": "invoke", "op": "Write", "arg": 1}
           | {"kind": "intermediate"}
           | {"kind": "response", "resp": null}
    CONFIG = {"outstanding": [null | FRAME, ...], "eps": {"cell": 0}}
    FRAME  = {"op": "Write", "pc": 1, "arg": 1, "registers": {"x": 0}}

``config`` (and ``initial``) may be omitted on input when every step is
deterministic; the run is then rebuilt by replay.

Atomic trace (``lintrack.atomic-trace/1``): same layout, with
``{"sigma": ..., "statuses": [STATUS, ...]}`` snapshots in place of
configurations, where ``STATUS`` is ``{"kind": "idle"}``,
``{"kind": "pending", "op": ..., "arg": ...}`` or
``{"kind": "linearized", "res": ...}``.

A tracker serializes as the canonically sorted list of such snapshots.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from lintrack.atomicmodel import AtomicConfiguration, Idle, Linearized, Pending, Status
from lintrack.checker.explore import (
    BudgetExceeded,
    Counterexample,
    ExploreParams,
    LinearizableUpToBound,
    Stuck,
    Verdict,
)
from lintrack.core import ObjectType, decode_val, encode_val
from lintrack.lang.syntax import Frame, Implementation
from lintrack.runtime import (
    Configuration,
    Event,
    Intermediate,
    Invoke,
    Line,
    Response,
    Run,
    initial_configuration,
    replay,
)
from lintrack.tracker import MetaConfiguration, project

TRACE_SCHEMA = "lintrack.trace/1"
ATOMIC_SCHEMA = "lintrack.atomic-trace/1"
REPORT_SCHEMA = "lintrack.report/1"


class TraceFormatError(Exception):
    pass


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- lines -----------------------------------------------------------------


def line_to_json(line: Line) -> dict:
    if isinstance(line, Invoke):
        return {"kind": "invoke", "op": line.op, "arg": encode_val(line.arg)}
    if isinstance(line, Intermediate):
        return {"kind": "intermediate"}
    return {"kind": "response", "resp": encode_val(line.v)}


def line_from_json(obj: dict) -> Line:
    try:
        kind = obj["kind"]
        if kind == "invoke":
            return Invoke(obj["op"], decode_val(obj.get("arg")))
        if kind == "intermediate":
            return Intermediate()
        if kind == "response":
            return Response(decode_val(obj.get("resp")))
    except (KeyError, TypeError) as exc:
        raise TraceFormatError(f"malformed line {obj!r}: {exc}") from None
    raise TraceFormatError(f"unknown line kind {kind!r}")


def event_to_json(e: Event) -> dict:
    return {"proc": e.proc, "line": line_to_json(e.line)}


def event_from_json(obj: dict) -> Event:
    if not isinstance(obj, dict) or "proc" not in obj or "line" not in obj:
        raise TraceFormatError(f"malformed event {obj!r}")
    return Event(int(obj["proc"]), line_from_json(obj["line"]))


# --- configurations --------------------------------------------------------


def frame_to_json(f: Frame) -> dict:
    return {
        "op": f.op,
        "pc": f.pc,
        "arg": encode_val(f.arg),
        "registers": {k: encode_val(v) for k, v in f.registers},
    }


def frame_from_json(obj: dict) -> Frame:
    regs = tuple(sorted((k, decode_val(v)) for k, v in obj.get("registers", {}).items()))
    return Frame(obj["op"], int(obj["pc"]), decode_val(obj.get("arg")), regs)


def config_to_json(impl: Implementation, c: Configuration) -> dict:
    return {
        "outstanding": [None if f is None else frame_to_json(f) for f in c.outstanding],
        "eps": {b.name: encode_val(b.type.encode(s)) for b, s in zip(impl.bases, c.eps)},
    }


def config_from_json(impl: Implementation, obj: dict) -> Configuration:
    try:
        outstanding = tuple(None if f is None else frame_from_json(f) for f in obj["outstanding"])
        eps = tuple(b.type.decode(decode_val(obj["eps"][b.name])) for b in impl.bases)
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceFormatError(f"malformed configuration: {exc}") from None
    return Configuration(outstanding, eps)


def run_to_json(impl: Implementation, r: Run[Configuration]) -> dict:
    return {
        "schema": TRACE_SCHEMA,
        "implementation": impl.name,
        "processes": r.initial.nprocs,
        "initial": config_to_json(impl, r.initial),
        "events": [
            {"proc": s.proc, "line": line_to_json(s.line), "config": config_to_json(impl, s.config)}
            for s in r.steps
        ],
    }


def run_from_json(impl: Implementation, obj: Any, nprocs: Optional[int] = None) -> Run[Configuration]:
    """Load a trace; a bare list of events is accepted as a schedule.

    Raises :class:`~lintrack.runtime.ReplayError` when configurations are
    omitted and some event cannot be replayed.
    """
    if isinstance(obj, list):
        obj = {"events": obj}
    if not isinstance(obj, dict) or not isinstance(obj.get("events"), list):
        raise TraceFormatError("trace must be an object with an 'events' list")
    if obj.get("schema", TRACE_SCHEMA) != TRACE_SCHEMA:
        raise TraceFormatError(f"unsupported trace schema {obj.get('schema')!r}")
    n = obj.get("processes", nprocs)
    if n is None:
        raise TraceFormatError("trace does not say how many processes it has")
    if nprocs is not None and n != nprocs:
        raise TraceFormatError(f"trace has {n} processes, expected {nprocs}")
    events = [event_from_json(e) for e in obj["events"]]
    if all("config" in e for e in obj["events"]):
        initial = config_from_json(impl, obj["initial"]) if "initial" in obj else initial_configuration(impl, n)
        r = Run(initial)
        for e, raw in zip(events, obj["events"]):
            r = r.extend(e.proc, e.line, config_from_json(impl, raw["config"]))
        return r
    return replay(impl, n, events)


# --- atomic configurations and trackers ------------------------------------


def status_to_json(s: Status) -> dict:
    if isinstance(s, Idle):
        return {"kind": "idle"}
    if isinstance(s, Pending):
        return {"kind": "pending", "op": s.op, "arg": encode_val(s.arg)}
    return {"kind": "linearized", "res": encode_val(s.res)}


def status_from_json(obj: dict) -> Status:
    kind = obj.get("kind")
    if kind == "idle":
        return Idle()
    if kind == "pending":
        return Pending(obj["op"], decode_val(obj.get("arg")))
    if kind == "linearized":
        return Linearized(decode_val(obj.get("res")))
    raise TraceFormatError(f"unknown status kind {kind!r}")


def ac_to_json(t: ObjectType, ac: AtomicConfiguration) -> dict:
    return {"sigma": encode_val(t.encode(ac.sigma)), "statuses": [status_to_json(s) for s in ac.f]}


def ac_from_json(t: ObjectType, obj: dict) -> AtomicConfiguration:
    return AtomicConfiguration(t.decode(decode_val(obj["sigma"])), tuple(status_from_json(s) for s in obj["statuses"]))


def tracker_to_json(t: ObjectType, C: MetaConfiguration) -> list:
    return [ac_to_json(t, ac) for ac in C.sorted(t)]


def atomic_run_to_json(t: ObjectType, r: Run[AtomicConfiguration]) -> dict:
    return {
        "schema": ATOMIC_SCHEMA,
        "processes": len(r.initial.f),
        "initial": ac_to_json(t, r.initial),
        "events": [
            {"proc": s.proc, "line": line_to_json(s.line), **ac_to_json(t, s.config)}
            for s in r.steps
        ],
    }


def atomic_run_from_json(t: ObjectType, obj: dict) -> Run[AtomicConfiguration]:
    if obj.get("schema") != ATOMIC_SCHEMA:
        raise TraceFormatError(f"unsupported atomic trace schema {obj.get('schema')!r}")
    r = Run(ac_from_json(t, obj["initial"]))
    for e in obj["events"]:
        r = r.extend(int(e["proc"]), line_from_json(e["line"]), ac_from_json(t, e))
    return r


# --- reports ---------------------------------------------------------------


def params_to_json(p: ExploreParams) -> dict:
    out = {
        "mode": p.mode,
        "processes": p.process_count,
        "max_events": p.max_events,
        "dedup": p.dedup,
        "minimize": p.minimize,
    }
    if p.mode == "random":
        out.update(seed=p.seed, trials=p.trials)
    if p.state_budget is not None:
        out["state_budget"] = p.state_budget
    return out


def verdict_report(impl: Implementation, p: ExploreParams, v: Verdict, witness: Optional[Run] = None) -> dict:
    """Report model shared by the JSON and text renderers.

    Wall-clock time is deliberately absent so reports are reproducible byte
    for byte; the text renderer prints it separately.
    """
    t = impl.spec
    report: dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "implementation": impl.name,
        "params": params_to_json(p),
        "verdict": v.name,
        "stats": {
            "explored_states": v.stats.explored_states,
            "explored_runs": v.stats.explored_runs,
            "max_tracker_size": v.stats.max_tracker_size,
        },
    }
    if isinstance(v, Counterexample):
        trackers = [c.tracker for c in v.run.configs]
        report["counterexample"] = {
            "failing_index": v.failing_index,
            "trace": run_to_json(impl, project(v.run)),
            "tracker_before_failure": tracker_to_json(t, trackers[v.failing_index - 1]),
            "tracker_at_failure": tracker_to_json(t, trackers[v.failing_index]),
        }
        if witness is not None:
            report["counterexample"]["witness_before_failure"] = atomic_run_to_json(t, witness)
    elif isinstance(v, Stuck):
        report["diagnostics"] = [
            {
                "proc": d.proc,
                "kind": d.kind,
                "message": d.message,
                "trace": [event_to_json(e) for e in d.trace],
                "config": config_to_json(impl, d.config),
            }
            for d in v.diagnostics
        ]
    elif isinstance(v, BudgetExceeded):
        report["state_budget"] = v.budget
    else:
        assert isinstance(v, LinearizableUpToBound)
    return report
