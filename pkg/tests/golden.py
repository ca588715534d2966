"""Golden rule instances for the semantics, shared by the golden tests and the
acceptance run.

Each case returns ``(actual, expected)``; both are reduced with :func:`canon`
to canonical JSON text and compared byte for byte.
"""

from __future__ import annotations

import contextlib
import io
import json
from dataclasses import dataclass
from typing import Any, Callable

from lintrack import casestudies, cli, serialize
from lintrack.atomicmodel import (
    IDLE,
    AtomicConfiguration,
    Linearized,
    Pending,
    atomic_implementation,
    atomic_step,
    initial_atomic,
    wf_atomic,
)
from lintrack.checker import (
    Counterexample,
    ExploreParams,
    LinearizableUpToBound,
    adequacy_crosscheck,
    check,
    extract_witness,
    fuzz,
    iter_linearizations,
    oracle_finals,
)
from lintrack.core import FALSE, TRUE, UNIT, Int, Pair, builtin_queue, builtin_rcas, builtin_register
from lintrack.lang import ValidationError, parse_implementation
from lintrack.lang.semantics import eval_statement, eval_term, step_frame
from lintrack.lang.syntax import (
    CONTINUE,
    ArgRef,
    Assign,
    BoolLit,
    Frame,
    If,
    IntLit,
    InvokeStmt,
    InvokeTerm,
    MkPair,
    Next,
    ProjL,
    Ret,
    Return,
    ReturnSig,
    Seq,
    UnitLit,
    Var,
    regs,
)
from lintrack.runtime import (
    INTERMEDIATE,
    Configuration,
    Event,
    Invoke,
    Response,
    Run,
    behavior,
    enabled_events,
    expand,
    global_step,
    initial_configuration,
    replay,
    wf_run,
)
from lintrack.tracker import (
    augmented_step,
    embed,
    evolve,
    evolve_inv,
    evolve_ret,
    initial_augmented,
    initial_tracker,
    linearize_pending,
    meta,
    multistep,
    project,
    tracker_of,
)

WIDE = tuple(range(11))
REG, _ = builtin_register(WIDE, 0)
RCAS, _ = builtin_rcas(WIDE, 0)
QUEUE, _ = builtin_queue(WIDE, 2)
REG01, _ = builtin_register([0, 1], 0)


def rw(domain=(0, 1)):
    return casestudies.load("rwcas", {"D": domain})


def broken():
    return casestudies.load("broken_write")


def ac(sigma, *statuses):
    return AtomicConfiguration(sigma if not isinstance(sigma, int) else Int(sigma), tuple(statuses))


def P(op, arg=UNIT):
    return Pending(op, Int(arg) if isinstance(arg, int) else arg)


def L(res=UNIT):
    return Linearized(Int(res) if isinstance(res, int) else res)


def inv(p, op, arg=UNIT):
    return Event(p, Invoke(op, Int(arg) if isinstance(arg, int) else arg))


def mid(p):
    return Event(p, INTERMEDIATE)


def resp(p, v=UNIT):
    return Event(p, Response(Int(v) if isinstance(v, int) else v))


# --- canonical comparison --------------------------------------------------


def canon(x: Any) -> Any:
    if hasattr(x, "configs") and isinstance(getattr(x, "configs"), frozenset):
        x = x.configs
    if isinstance(x, (set, frozenset)):
        return sorted((canon(i) for i in x), key=lambda j: json.dumps(j, sort_keys=True))
    if isinstance(x, (list, tuple)):
        return [canon(i) for i in x]
    if isinstance(x, dict):
        return {str(k): canon(v) for k, v in x.items()}
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    return repr(x)


def canon_text(x: Any) -> str:
    return json.dumps(canon(x), sort_keys=True)


@dataclass(frozen=True)
class Case:
    id: str
    tag: str
    fn: Callable[[], tuple[Any, Any]]

    def run(self) -> tuple[str, str]:
        actual, expected = self.fn()
        return canon_text(actual), canon_text(expected)


CASES: list[Case] = []


def case(id: str, tag: str):
    def deco(fn):
        CASES.append(Case(id, tag, fn))
        return fn

    return deco


def run_cli(*argv) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stderr(err):
        code = cli.main(list(argv), out)
    return code, out.getvalue(), err.getvalue()


# --- object types ----------------------------------------------------------


@case("register.read", "reference")
def _():
    return set(REG.delta(Int(0), 0, "Read", UNIT)), {(Int(0), Int(0))}


@case("register.write", "reference")
def _():
    return set(REG.delta(Int(0), 0, "Write", Int(5))), {(Int(5), UNIT)}


@case("register.write-idempotent", "trivial")
def _():
    return set(REG.delta(Int(3), 0, "Write", Int(3))), {(Int(3), UNIT)}


@case("rcas.cas-success", "reference")
def _():
    return set(RCAS.delta(Int(0), 0, "CAS", Pair(Int(0), Int(1)))), {(Int(1), TRUE)}


@case("rcas.cas-failure", "reference")
def _():
    return set(RCAS.delta(Int(2), 0, "CAS", Pair(Int(0), Int(1)))), {(Int(2), FALSE)}


@case("rcas.read-identity", "trivial")
def _():
    return [set(RCAS.delta(Int(v), 0, "Read", UNIT)) for v in WIDE], [{(Int(v), Int(v))} for v in WIDE]


@case("queue.enq-empty", "trivial")
def _():
    return set(QUEUE.delta((), 0, "Enq", Int(5))), {((Int(5),), UNIT)}


@case("queue.deq", "reference")
def _():
    return set(QUEUE.delta((Int(5), Int(10)), 0, "Deq", UNIT)), {((Int(10),), Int(5))}


@case("queue.deq-empty", "derived")
def _():
    return set(QUEUE.delta((), 0, "Deq", UNIT)), set()


# --- DSL and big-step evaluation --------------------------------------------

_MINI = """
object Mini implements register({0, 1}, 0) uses { cell : register({0, 1}, 0) }
proc Read(unit) { return Arg; }
proc Write({0, 1}) { %s }
"""


@case("load.rw-register-write", "reference")
def _():
    expected = (
        Assign("x", InvokeTerm("cell", "Read", UnitLit())),
        InvokeStmt("cell", "CAS", MkPair(Var("x"), ArgRef())),
        Return(UnitLit()),
    )
    return rw().procedure("Write").statements, expected


@case("load.return-arg", "trivial")
def _():
    return parse_implementation(_MINI % "return unit;").procedure("Read").statements, (Return(ArgRef()),)


@case("load.goto-out-of-range", "trivial")
def _():
    try:
        parse_implementation(_MINI % "goto 5; return unit;")
    except ValidationError as exc:
        return type(exc).__name__, "ValidationError"
    return "loaded", "ValidationError"


def _eps(v=0):
    return (Int(v),)


@case("eval.arg", "trivial")
def _():
    return eval_term(rw(WIDE), 0, Int(5), (), _eps(), ArgRef()), [(_eps(), Int(5))]


@case("eval.proj-left", "trivial")
def _():
    return eval_term(rw(), 0, UNIT, regs(x=Pair(Int(1), Int(2))), _eps(), ProjL(Var("x"))), [(_eps(), Int(1))]


@case("eval.invoke-read", "derived")
def _():
    direct = [(_eps(s), v) for s, v in RCAS.delta(Int(0), 0, "Read", UNIT)]
    return eval_term(rw(), 0, UNIT, (), _eps(0), InvokeTerm("cell", "Read", UnitLit())), direct


@case("stmt.assign", "reference")
def _():
    return eval_statement(rw(WIDE), 0, UNIT, (), _eps(), Assign("x", IntLit(5))), [(regs(x=Int(5)), _eps(), CONTINUE)]


@case("stmt.seq-ret", "reference")
def _():
    s = Seq(Return(IntLit(1)), Assign("x", IntLit(2)))
    return eval_statement(rw(), 0, UNIT, (), _eps(), s), [((), _eps(), Ret(Int(1)))]


@case("stmt.if-true", "reference")
def _():
    s = If(BoolLit(True), Return(IntLit(1)), Return(IntLit(2)))
    return eval_statement(rw(), 0, UNIT, (), _eps(), s), [((), _eps(), Ret(Int(1)))]


@case("frame.write-pc0", "derived")
def _():
    out = step_frame(rw(WIDE), 0, _eps(0), Frame("Write", 0, Int(5)))
    return out, [(_eps(0), Next(Frame("Write", 1, Int(5), regs(x=Int(0)))))]


@case("frame.return", "trivial")
def _():
    out = step_frame(rw(WIDE), 0, _eps(0), Frame("Write", 2, Int(5), regs(x=Int(0))))
    return out, [(_eps(0), ReturnSig(UNIT))]


@case("frame.goto0", "reference")
def _():
    impl = parse_implementation(_MINI % "x := 1; goto 0;")
    f = Frame("Write", 1, Int(1), regs(x=Int(1)))
    return step_frame(impl, 0, _eps(0), f), [(_eps(0), Next(Frame("Write", 0, Int(1), regs(x=Int(1)))))]


# --- global dynamics ---------------------------------------------------------


@case("step.invoke", "reference")
def _():
    impl = rw(WIDE)
    c = initial_configuration(impl, 2)
    return global_step(impl, c, 0, Invoke("Write", Int(5))), [c.with_frame(0, Frame("Write", 0, Int(5)))]


@case("step.response", "derived")
def _():
    impl = rw(WIDE)
    c = initial_configuration(impl, 2).with_frame(0, Frame("Write", 2, Int(5), regs(x=Int(0))))
    return global_step(impl, c, 0, Response(UNIT)), [initial_configuration(impl, 2)]


@case("step.intermediate-idle", "trivial")
def _():
    impl = rw()
    return global_step(impl, initial_configuration(impl, 2), 0, INTERMEDIATE), []


@case("events.initial", "derived")
def _():
    impl = rw()
    got = [str(e) for e, _ in enabled_events(impl, initial_configuration(impl, 2))]
    expected = [
        f"p{p}:{line}"
        for p in range(2)
        for line in ("Invoke(Read, unit)", "Invoke(Write, 0)", "Invoke(Write, 1)")
    ]
    return sorted(got), sorted(expected)


@case("events.mid-procedure", "trivial")
def _():
    impl = rw()
    c = initial_configuration(impl, 2).with_frame(0, Frame("Write", 0, Int(1)))
    mine = [str(e) for e, _ in enabled_events(impl, c) if e.proc == 0]
    c2 = c.with_frame(0, Frame("Write", 2, Int(1), regs(x=Int(0))))
    mine2 = [str(e) for e, _ in enabled_events(impl, c2) if e.proc == 0]
    return (mine, mine2), (["p0:Intermediate"], ["p0:Response(unit)"])


_STUCK = """
object Q implements register({0}, 0) uses { q : queue({0}, 1) }
proc Read(unit) { x := invoke q.Deq(unit); return x; }
proc Write({0}) { return unit; }
"""


@case("events.all-stuck", "trivial")
def _():
    impl = parse_implementation(_STUCK)
    c = initial_configuration(impl, 1).with_frame(0, Frame("Read", 0, UNIT))
    events, stuck = expand(impl, c)
    return (events, [e.cause.kind for e in stuck]), ([], ["base-stuck"])


@case("wf.initial", "reference")
def _():
    impl = rw()
    return bool(wf_run(impl, Run(initial_configuration(impl, 2)))), True


@case("wf.skip-pc", "trivial")
def _():
    impl = rw()
    c0 = initial_configuration(impl, 2)
    c1 = c0.with_frame(0, Frame("Write", 0, Int(1)))
    c2 = c0.with_frame(0, Frame("Write", 2, Int(1), regs(x=Int(0))))
    r = Run(c0).extend(0, Invoke("Write", Int(1)), c1).extend(0, INTERMEDIATE, c2)
    res = wf_run(impl, r)
    return (res.ok, res.index), (False, 2)


@case("wf.explorer-runs", "derived")
def _():
    impl = broken()
    v = check(impl, ExploreParams(max_events=8))
    return bool(wf_run(impl, project(v.run))), True


@case("behavior.initial", "trivial")
def _():
    return behavior(Run(initial_configuration(rw(), 2))), []


@case("behavior.filter", "trivial")
def _():
    r = replay(rw(WIDE), 2, [inv(0, "Write", 5), mid(0), mid(0), resp(0)])
    return behavior(r), [inv(0, "Write", 5), resp(0)]


QUEUE_SCHEDULE = [
    inv(0, "Enq", 5), inv(1, "Enq", 10), mid(0), mid(1), resp(1), inv(2, "Deq"), resp(0),
    inv(1, "Deq"), mid(1), mid(2), resp(2, 10), resp(1, 5),
]
QUEUE_HISTORY = [
    inv(0, "Enq", 5), inv(1, "Enq", 10), resp(1), inv(2, "Deq"), resp(0), inv(1, "Deq"), resp(2, 10), resp(1, 5),
]


def queue_impl():
    return atomic_implementation(QUEUE, (), name="AtomicQueue")


@case("behavior.queue-history", "reference")
def _():
    return behavior(replay(queue_impl(), 3, QUEUE_SCHEDULE)), QUEUE_HISTORY


# --- atomic dynamics ---------------------------------------------------------


@case("atomic.invoke", "reference")
def _():
    return atomic_step(REG, ac(0, IDLE), 0, Invoke("Write", Int(5))), [ac(0, P("Write", 5))]


@case("atomic.intermediate", "derived")
def _():
    direct = [ac(s, L(r)) for s, r in REG.delta(Int(0), 0, "Write", Int(5))]
    return atomic_step(REG, ac(0, P("Write", 5)), 0, INTERMEDIATE), direct


@case("atomic.response-mismatch", "trivial")
def _():
    return atomic_step(REG, ac(5, L()), 0, Response(FALSE)), []


@case("wf-atomic.initial", "reference")
def _():
    return bool(wf_atomic(REG, Int(0), Run(initial_atomic(REG, Int(0), 2)))), True


@case("wf-atomic.double-linearization", "trivial")
def _():
    r = Run(ac(0, IDLE)).extend(0, Invoke("Write", Int(5)), ac(0, P("Write", 5)))
    r = r.extend(0, INTERMEDIATE, ac(5, L())).extend(0, INTERMEDIATE, ac(5, L()))
    res = wf_atomic(REG, Int(0), r)
    return (res.ok, res.index), (False, 3)


@case("wf-atomic.checker-witnesses", "derived")
def _():
    impl = rw()
    v = check(impl, ExploreParams(max_events=8, mode="random", trials=50, seed=7))
    assert isinstance(v, LinearizableUpToBound)
    r = replay(impl, 2, [inv(0, "Write", 1), mid(0), inv(1, "Read"), mid(1), mid(0), resp(1, 0), resp(0)])
    return bool(wf_atomic(REG01, Int(0), extract_witness(impl, r))), True


@case("atomic-impl.register-lengths", "reference")
def _():
    impl = atomic_implementation(REG01, Int(0))
    return [(op, len(impl.procedure(op))) for op in impl.ops], [("Read", 2), ("Write", 2)]


@case("atomic-impl.any-length-2", "trivial")
def _():
    impls = [atomic_implementation(t, i) for t, i in (builtin_rcas([0, 1], 0), builtin_queue([0, 1], 2))]
    return sorted({len(impl.procedure(op)) for impl in impls for op in impl.ops}), [2]


@case("atomic-impl.behaviors-linearizable", "derived")
def _():
    rep = adequacy_crosscheck(atomic_implementation(REG01, Int(0)), ExploreParams(max_events=8))
    return (rep.nonlinearizable_prefixes, len(rep.discrepancies)), (0, 0)


# --- tracker -----------------------------------------------------------------


@case("multistep.refl", "reference")
def _():
    a = ac(0, P("Write", 5), IDLE)
    return multistep(REG, a, []), {a}


@case("multistep.one", "derived")
def _():
    return multistep(REG, ac(0, P("Write", 5)), [0]), {ac(5, L())}


@case("multistep.idle", "trivial")
def _():
    return multistep(REG, ac(0, IDLE), [0]), set()


@case("linearize-pending.empty", "trivial")
def _():
    return linearize_pending(REG, meta([])), set()


@case("linearize-pending.all-idle", "trivial")
def _():
    return linearize_pending(REG, meta([ac(0, IDLE, IDLE)])), {ac(0, IDLE, IDLE)}


@case("linearize-pending.two-writes", "derived")
def _():
    start = ac(0, P("Write", 1), P("Write", 2))
    # brute force: every ordered selection of distinct pending processes
    brute = set()
    for seq in ([], [0], [1], [0, 1], [1, 0]):
        brute |= multistep(REG, start, seq)
    expected = {start, ac(1, L(), P("Write", 2)), ac(2, P("Write", 1), L()), ac(2, L(), L()), ac(1, L(), L())}
    assert brute == expected
    return linearize_pending(REG, meta([start])), expected


@case("evolve-inv.idle", "derived")
def _():
    return evolve_inv(meta([ac(0, IDLE, IDLE)]), 0, "Write", Int(5)), {ac(0, P("Write", 5), IDLE)}


@case("evolve-inv.busy", "trivial")
def _():
    return evolve_inv(meta([ac(0, P("Read")), ac(1, L(1))]), 0, "Write", Int(5)), set()


@case("evolve-inv.empty", "trivial")
def _():
    return evolve_inv(meta([]), 0, "Write", Int(5)), set()


@case("evolve-ret.filter", "derived")
def _():
    return evolve_ret(meta([ac(5, L()), ac(0, P("Write", 5))]), 0, UNIT), {ac(5, IDLE)}


@case("evolve-ret.mismatch", "trivial")
def _():
    return evolve_ret(meta([ac(0, L(0)), ac(1, L(1))]), 0, Int(2)), set()


@case("evolve-ret.empty", "trivial")
def _():
    return evolve_ret(meta([]), 0, UNIT), set()


@case("evolve.intermediate-fixed-point", "trivial")
def _():
    C = meta([ac(0, IDLE, L(0)), ac(3, IDLE, IDLE)])
    return evolve(REG, 0, INTERMEDIATE, C), C


@case("evolve.invoke", "derived")
def _():
    return evolve(REG, 0, Invoke("Write", Int(5)), meta([ac(0, IDLE)])), {ac(0, P("Write", 5)), ac(5, L())}


@case("evolve.response", "derived")
def _():
    C = evolve(REG, 0, Invoke("Write", Int(5)), meta([ac(0, IDLE)]))
    return evolve(REG, 0, Response(UNIT), C), {ac(5, IDLE)}


@case("augmented.successor-count", "trivial")
def _():
    impl = rw()
    c = initial_augmented(impl, 2)
    counts = []
    for e, _ in enabled_events(impl, c.base):
        counts.append((len(augmented_step(impl, c, e.proc, e.line)), len(global_step(impl, c.base, e.proc, e.line))))
    return [a for a, _ in counts], [b for _, b in counts]


@case("augmented.initial", "reference")
def _():
    return initial_augmented(rw(), 2).tracker, {ac(0, IDLE, IDLE)}


# p0 Write(1) reads 0; p1 Write(2) completes; p0's CAS fails; p0 responds
INTERFERING = [inv(0, "Write", 1), mid(0), inv(1, "Write", 2), mid(1), mid(1), resp(1), mid(0), resp(0)]


@case("augmented.interfering-write-nonempty", "reference")
def _():
    impl = rw((0, 1, 2))
    r = replay(impl, 2, INTERFERING)
    return [len(c.tracker) > 0 for c in embed(impl, r).configs], [True] * (len(INTERFERING) + 1)


@case("embed.initial", "trivial")
def _():
    impl = rw()
    return embed(impl, Run(initial_configuration(impl, 2))).final.tracker, {ac(0, IDLE, IDLE)}


@case("embed.round-trip", "derived")
def _():
    import random

    from lintrack.checker import random_run

    impl, rng = rw(), random.Random(11)
    runs = [random_run(impl, 2, rng.randrange(13), rng) for _ in range(50)]
    return [project(embed(impl, r)) == r for r in runs], [True] * len(runs)


@case("project.behavior", "trivial")
def _():
    impl = rw((0, 1, 2))
    r = replay(impl, 2, INTERFERING)
    return behavior(project(embed(impl, r))), behavior(r)


# --- checker -------------------------------------------------------------------


@case("check.rwcas-depth10", "reference")
def _():
    return check(rw(), ExploreParams(max_events=10, process_count=2)).name, "linearizable_up_to_bound"


BROKEN_SCHEDULE = [inv(0, "Write", 1), mid(0), resp(0), inv(0, "Read"), mid(0), resp(0, 0)]


@case("check.broken-schedule", "derived")
def _():
    impl = broken()
    r = replay(impl, 2, BROKEN_SCHEDULE)
    trackers = [len(c.tracker) for c in embed(impl, r).configs]
    oracle = oracle_finals(impl.spec, impl.init, 2, behavior(r))
    return (trackers[-1], min(trackers[:-1]) > 0, len(oracle)), (0, True, 0)


@case("check.depth0", "trivial")
def _():
    v = check(rw(), ExploreParams(max_events=0))
    return (v.name, v.stats.explored_runs), ("linearizable_up_to_bound", 1)


def _lin_order(a: Run) -> list[tuple]:
    order = []
    prev = a.initial
    for s in a.steps:
        if s.line == INTERMEDIATE:
            p = prev.f[s.proc]
            order.append((p.op, str(p.arg), str(s.config.f[s.proc].res)))
        prev = s.config
    return order


@case("oracle.queue-history", "reference")
def _():
    lins = list(iter_linearizations(QUEUE, (), 3, QUEUE_HISTORY))
    orders = {tuple(_lin_order(a)) for a in lins}
    want = (("Enq", "5", "unit"), ("Enq", "10", "unit"), ("Deq", "unit", "5"), ("Deq", "unit", "10"))
    return (len(lins) > 0, want in orders), (True, True)


@case("oracle.empty-run", "trivial")
def _():
    return list(iter_linearizations(REG01, Int(0), 2, [])), [Run(ac(0, IDLE, IDLE))]


@case("oracle.broken-counterexample", "derived")
def _():
    return list(iter_linearizations(REG01, Int(0), 2, behavior(replay(broken(), 2, BROKEN_SCHEDULE)))), []


@case("adequacy.rwcas-depth8", "derived")
def _():
    return len(adequacy_crosscheck(rw(), ExploreParams(max_events=8)).discrepancies), 0


@case("adequacy.atomic-depth8", "derived")
def _():
    return len(adequacy_crosscheck(atomic_implementation(REG01, Int(0)), ExploreParams(max_events=8)).discrepancies), 0


@case("adequacy.initial", "trivial")
def _():
    impl = rw()
    tracker = tracker_of(impl, Run(initial_configuration(impl, 2)))
    oracle = oracle_finals(REG01, Int(0), 2, [])
    rep = adequacy_crosscheck(impl, ExploreParams(max_events=0))
    return (tracker, oracle, rep.prefixes_checked, rep.ok), ({ac(0, IDLE, IDLE)}, {ac(0, IDLE, IDLE)}, 1, True)


def _witness_order(w: Run) -> list[tuple]:
    return [(op, arg) for op, arg, _ in _lin_order(w)]


@case("witness.interfering-write", "reference")
def _():
    impl = rw((0, 1, 2))
    w = extract_witness(impl, replay(impl, 2, INTERFERING))
    return _witness_order(w), [("Write", "1"), ("Write", "2")]


@case("witness.single-op", "trivial")
def _():
    impl = rw()
    w = extract_witness(impl, replay(impl, 2, [inv(0, "Write", 1), mid(0), mid(0), resp(0)]))
    return [str(e) for e in w.events], ["p0:Invoke(Write, 1)", "p0:Intermediate", "p0:Response(unit)"]


@case("witness.fuzzed-valid", "derived")
def _():
    import random

    from lintrack.checker import random_run

    impl, rng = rw(), random.Random(5)
    oks = []
    for _ in range(50):
        r = random_run(impl, 2, rng.randrange(15), rng)
        w = extract_witness(impl, r)
        oks.append(bool(wf_atomic(REG01, Int(0), w)) and behavior(w) == behavior(r))
    return oks, [True] * 50


@case("fuzz.deterministic", "trivial")
def _():
    p = ExploreParams(max_events=8, mode="random", seed=3, trials=200)
    a, b = fuzz(broken(), p), fuzz(broken(), p)
    key = lambda v: (v.name, v.stats.explored_states, v.stats.explored_runs, v.stats.max_tracker_size,
                     [str(e) for e in v.run.events] if isinstance(v, Counterexample) else None)
    return key(a), key(b)


@case("fuzz.broken-finds", "derived")
def _():
    return fuzz(broken(), ExploreParams(max_events=8, mode="random", seed=0, trials=1000)).name, "counterexample"


@case("fuzz.rwcas-never", "derived")
def _():
    names = {fuzz(rw(), ExploreParams(max_events=8, mode="random", seed=s, trials=200)).name for s in range(5)}
    return "counterexample" in names, False


# --- command line --------------------------------------------------------------


def _bundled(name: str) -> str:
    return str(casestudies.path(name))


@case("cli.check-rwcas", "derived")
def _():
    return run_cli("check", _bundled("rwcas"), "--procs", "2", "--depth", "10")[0], 0


@case("cli.check-broken", "derived")
def _():
    code, out, _ = run_cli("check", _bundled("broken_write"), "--procs", "2", "--depth", "8", "--format", "json")
    report = json.loads(out)
    return (code, "trace" in report["counterexample"]), (1, True)


@case("cli.check-missing-file", "trivial")
def _():
    return run_cli("check", "/nonexistent/impl.obj")[0], 2


def _write_trace(tmpdir, name, impl, events, nprocs=2) -> str:
    import os

    path = os.path.join(tmpdir, name)
    with open(path, "w") as fh:
        fh.write(serialize.dumps(serialize.run_to_json(impl, replay(impl, nprocs, events))))
    return path


@case("cli.witness-interfering-write", "reference")
def _():
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        impl = rw((0, 1, 2))
        path = _write_trace(d, "interfering.json", impl, INTERFERING)
        code, out, _ = run_cli("witness", _bundled("rwcas"), path, "--domain", "D=0,1,2", "--format", "json")
    w = serialize.atomic_run_from_json(impl.spec, json.loads(out))
    return (code, _witness_order(w)), (0, [("Write", "1"), ("Write", "2")])


@case("cli.witness-single-op", "trivial")
def _():
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        path = _write_trace(d, "one.json", rw(), [inv(0, "Write", 1), mid(0), mid(0), resp(0)])
        code, out, _ = run_cli("witness", _bundled("rwcas"), path, "--format", "json")
    return (code, len(json.loads(out)["events"])), (0, 3)


@case("cli.witness-broken", "derived")
def _():
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        path = _write_trace(d, "cex.json", broken(), BROKEN_SCHEDULE)
        code, _, err = run_cli("witness", _bundled("broken_write"), path)
    return (code, "no linearization" in err), (1, True)


@case("cli.trace-counterexample-replay", "derived")
def _():
    import os
    import tempfile

    code, out, _ = run_cli("check", _bundled("broken_write"), "--depth", "8", "--format", "json")
    cex = json.loads(out)["counterexample"]
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "cex.json")
        with open(path, "w") as fh:
            json.dump(cex["trace"], fh)
        code2, out2, _ = run_cli("trace", _bundled("broken_write"), path, "--format", "json")
    return (code2, json.loads(out2)["failing_index"]), (1, cex["failing_index"])


@case("cli.trace-empty", "trivial")
def _():
    import os
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "empty.json")
        with open(path, "w") as fh:
            json.dump({"processes": 2, "events": []}, fh)
        code, out, _ = run_cli("trace", _bundled("rwcas"), path, "--format", "json")
    steps = json.loads(out)["steps"]
    return (code, [s["index"] for s in steps], steps[0]["tracker_size"]), (0, [0], 1)


@case("cli.trace-inapplicable", "trivial")
def _():
    import os
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "bad.json")
        with open(path, "w") as fh:
            json.dump({"processes": 2, "events": [{"proc": 1, "line": {"kind": "intermediate"}}]}, fh)
        code, _, err = run_cli("trace", _bundled("rwcas"), path)
    return (code, "event 1" in err), (2, True)
