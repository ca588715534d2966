"""Concrete configurations and the global small-step dynamics.

A :class:`Configuration` holds one optional frame per process (``None`` means
idle) and the base-object states.  :class:`Run` is an append-only list of
steps from an initial configuration; it is generic in the configuration type
so the same class carries implementation, atomic and augmented runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Generic, Iterator, Optional, TypeVar, Union

from lintrack.core import Val
from lintrack.lang.semantics import EvalError, step_frame
from lintrack.lang.syntax import Frame, Implementation, Next, ReturnSig

# --- lines and events ------------------------------------------------------


@dataclass(frozen=True)
class Invoke:
    op: str
    arg: Val

    def __str__(self):
        return f"Invoke({self.op}, {self.arg})"


@dataclass(frozen=True)
class Intermediate:
    def __str__(self):
        return "Intermediate"


@dataclass(frozen=True)
class Response:
    v: Val

    def __str__(self):
        return f"Response({self.v})"


Line = Union[Invoke, Intermediate, Response]
INTERMEDIATE = Intermediate()


@dataclass(frozen=True)
class Event:
    proc: int
    line: Line

    def __str__(self):
        return f"p{self.proc}:{self.line}"


def line_key(line: Line) -> tuple:
    """Canonical order on lines: invocations, intermediates, responses."""
    if isinstance(line, Invoke):
        return (0, line.op, line.arg.key())
    if isinstance(line, Intermediate):
        return (1,)
    return (2, line.v.key())


def event_key(e: Event) -> tuple:
    return (e.proc, line_key(e.line))


# --- configurations --------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    outstanding: tuple[Optional[Frame], ...]
    eps: tuple

    @property
    def nprocs(self) -> int:
        return len(self.outstanding)

    def frame(self, proc: int) -> Optional[Frame]:
        return self.outstanding[proc]

    def with_frame(self, proc: int, f: Optional[Frame], eps: Optional[tuple] = None) -> Configuration:
        out = self.outstanding[:proc] + (f,) + self.outstanding[proc + 1 :]
        return Configuration(out, self.eps if eps is None else eps)


def initial_configuration(impl: Implementation, nprocs: int) -> Configuration:
    return Configuration((None,) * nprocs, impl.initial_eps())


class StuckError(Exception):
    """A process's next line has no semantics (evaluation error or stuck base object)."""

    def __init__(self, config: Configuration, proc: int, cause: EvalError):
        super().__init__(f"process {proc} stuck: {cause}")
        self.config = config
        self.proc = proc
        self.cause = cause


def frame_outcomes(impl: Implementation, c: Configuration, proc: int) -> list[tuple[tuple, Any]]:
    """Outcomes of stepping ``proc``'s frame; raises :class:`StuckError`."""
    f = c.outstanding[proc]
    try:
        return step_frame(impl, proc, c.eps, f)
    except EvalError as exc:
        raise StuckError(c, proc, exc) from None


def global_step(impl: Implementation, c: Configuration, proc: int, line: Line) -> list[Configuration]:
    """Successors of ``c`` when ``proc`` executes ``line`` (empty if no rule applies).

    Raises :class:`StuckError` when ``proc`` has an outstanding frame whose
    current line cannot be evaluated.
    """
    f = c.outstanding[proc]
    if isinstance(line, Invoke):
        if f is not None or line.op not in impl.ops:
            return []
        return [c.with_frame(proc, Frame(line.op, 0, line.arg, ()))]
    if f is None:
        return []
    out = []
    for eps1, sig in frame_outcomes(impl, c, proc):
        if isinstance(line, Intermediate) and isinstance(sig, Next):
            out.append(c.with_frame(proc, sig.frame, eps1))
        elif isinstance(line, Response) and isinstance(sig, ReturnSig) and sig.v == line.v:
            out.append(c.with_frame(proc, None, eps1))
    return list(dict.fromkeys(out))


def expand(impl: Implementation, c: Configuration) -> tuple[list[tuple[Event, Configuration]], list[StuckError]]:
    """All enabled ``(event, successor)`` pairs plus diagnostics for stuck processes.

    Order is deterministic: by process, then invocations in operation and
    argument-domain order, then frame outcomes in evaluation order.
    """
    events: list[tuple[Event, Configuration]] = []
    stuck: list[StuckError] = []
    for proc, f in enumerate(c.outstanding):
        if f is None:
            for op in impl.ops:
                for arg in impl.arg_domain(op):
                    events.append((Event(proc, Invoke(op, arg)), c.with_frame(proc, Frame(op, 0, arg, ()))))
            continue
        try:
            outcomes = frame_outcomes(impl, c, proc)
        except StuckError as exc:
            stuck.append(exc)
            continue
        seen = set()
        for eps1, sig in outcomes:
            if isinstance(sig, Next):
                item = (Event(proc, INTERMEDIATE), c.with_frame(proc, sig.frame, eps1))
            else:
                item = (Event(proc, Response(sig.v)), c.with_frame(proc, None, eps1))
            if item not in seen:
                seen.add(item)
                events.append(item)
    return events, stuck


def enabled_events(impl: Implementation, c: Configuration) -> list[tuple[Event, Configuration]]:
    return expand(impl, c)[0]


# --- runs ------------------------------------------------------------------

C = TypeVar("C")


@dataclass(frozen=True)
class Step(Generic[C]):
    proc: int
    line: Line
    config: C

    @property
    def event(self) -> Event:
        return Event(self.proc, self.line)


@dataclass(frozen=True)
class Run(Generic[C]):
    """``initial`` followed by ``steps``; ``configs[i]`` is the state after ``i`` events."""

    initial: C
    steps: tuple[Step[C], ...] = ()

    @property
    def final(self) -> C:
        return self.steps[-1].config if self.steps else self.initial

    @property
    def configs(self) -> list[C]:
        return [self.initial] + [s.config for s in self.steps]

    @property
    def events(self) -> list[Event]:
        return [s.event for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def extend(self, proc: int, line: Line, config: C) -> Run[C]:
        return Run(self.initial, self.steps + (Step(proc, line, config),))

    def prefix(self, n: int) -> Run[C]:
        return Run(self.initial, self.steps[:n])

    def __iter__(self) -> Iterator[Step[C]]:
        return iter(self.steps)


@dataclass(frozen=True)
class WFResult:
    ok: bool
    index: Optional[int] = None  # 0 = initial configuration, k = k-th step
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def wf_run(impl: Implementation, r: Run[Configuration]) -> WFResult:
    """Well-formedness: proper initial configuration, every step a global step."""
    c0 = r.initial
    if any(f is not None for f in c0.outstanding):
        return WFResult(False, 0, "initial configuration has outstanding frames")
    if c0.eps != impl.initial_eps():
        return WFResult(False, 0, "initial base states differ from the implementation's")
    prev = c0
    for k, step in enumerate(r.steps, start=1):
        try:
            succ = global_step(impl, prev, step.proc, step.line)
        except StuckError as exc:
            return WFResult(False, k, str(exc))
        if step.config not in succ:
            return WFResult(False, k, f"{step.event} does not lead to the recorded configuration")
        prev = step.config
    return WFResult(True)


def behavior(r: Run) -> list[Event]:
    """Invocation and response events of ``r``, in order."""
    return [s.event for s in r.steps if not isinstance(s.line, Intermediate)]


def replay(impl: Implementation, nprocs: int, events: list[Event]) -> Run[Configuration]:
    """Build the run of ``events`` from the initial configuration.

    Every event must have exactly one successor; nondeterministic steps need
    a trace that records configurations.
    """
    r = Run(initial_configuration(impl, nprocs))
    for k, e in enumerate(events, start=1):
        if not 0 <= e.proc < nprocs:
            raise ReplayError(k, f"process {e.proc} out of range")
        try:
            succ = global_step(impl, r.final, e.proc, e.line)
        except StuckError as exc:
            raise ReplayError(k, str(exc)) from None
        if not succ:
            raise ReplayError(k, f"{e} is not applicable")
        if len(succ) > 1:
            raise ReplayError(k, f"{e} has {len(succ)} possible successors; record configurations in the trace")
        r = r.extend(e.proc, e.line, succ[0])
    return r


class ReplayError(Exception):
    def __init__(self, index: int, message: str):
        super().__init__(f"event {index}: {message}")
        self.index = index
        self.message = message
