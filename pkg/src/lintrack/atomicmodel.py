"""Atomic configurations and the reference dynamics they follow.

In an atomic run each operation takes effect at exactly one intermediate
step (its linearization point).  Process status moves
Idle -> Pending -> Linearized -> Idle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

from lintrack.core import ObjectType, Val
from lintrack.lang.syntax import (
    ArgRef,
    Assign,
    BaseObject,
    Implementation,
    InvokeTerm,
    Procedure,
    Return,
    Var,
)
from lintrack.runtime import Intermediate, Invoke, Line, Response, Run, WFResult


@dataclass(frozen=True)
class Idle:
    def __str__(self):
        return "Idle"


@dataclass(frozen=True)
class Pending:
    op: str
    arg: Val

    def __str__(self):
        return f"Pending({self.op}, {self.arg})"


@dataclass(frozen=True)
class Linearized:
    res: Val

    def __str__(self):
        return f"Linearized({self.res})"


Status = Union[Idle, Pending, Linearized]
IDLE = Idle()


def status_key(s: Status) -> tuple:
    if isinstance(s, Idle):
        return (0,)
    if isinstance(s, Pending):
        return (1, s.op, s.arg.key())
    return (2, s.res.key())


@dataclass(frozen=True)
class AtomicConfiguration:
    """Abstract state ``sigma`` and one status per process."""

    sigma: Any
    f: tuple[Status, ...]

    def with_status(self, proc: int, s: Status, sigma: Any = None) -> AtomicConfiguration:
        return AtomicConfiguration(
            self.sigma if sigma is None else sigma,
            self.f[:proc] + (s,) + self.f[proc + 1 :],
        )

    def pending(self) -> list[int]:
        return [p for p, s in enumerate(self.f) if isinstance(s, Pending)]

    def __str__(self):
        return f"({self.sigma}, [{', '.join(map(str, self.f))}])"


def ac_key(t: ObjectType, ac: AtomicConfiguration) -> tuple:
    """Canonical sort key: encoded state, then statuses in process order."""
    return (t.state_key(ac.sigma), tuple(status_key(s) for s in ac.f))


def initial_atomic(t: ObjectType, init: Any, nprocs: int) -> AtomicConfiguration:
    return AtomicConfiguration(init, (IDLE,) * nprocs)


def linearize(t: ObjectType, ac: AtomicConfiguration, proc: int) -> list[AtomicConfiguration]:
    """Successors of taking ``proc``'s linearization point (empty unless Pending)."""
    s = ac.f[proc]
    if not isinstance(s, Pending):
        return []
    return [ac.with_status(proc, Linearized(v), sigma) for sigma, v in t.delta(ac.sigma, proc, s.op, s.arg)]


def atomic_step(t: ObjectType, ac: AtomicConfiguration, proc: int, line: Line) -> list[AtomicConfiguration]:
    s = ac.f[proc]
    if isinstance(line, Invoke):
        if not isinstance(s, Idle) or line.op not in t.ops:
            return []
        return [ac.with_status(proc, Pending(line.op, line.arg))]
    if isinstance(line, Intermediate):
        return list(dict.fromkeys(linearize(t, ac, proc)))
    if isinstance(line, Response):
        if isinstance(s, Linearized) and s.res == line.v:
            return [ac.with_status(proc, IDLE)]
        return []
    raise TypeError(f"not a line: {line!r}")


def wf_atomic(t: ObjectType, init: Any, r: Run[AtomicConfiguration]) -> WFResult:
    """Well-formedness of an atomic run: all-idle start at ``init``, every step atomic."""
    c0 = r.initial
    if c0.sigma != init:
        return WFResult(False, 0, "initial abstract state differs from the object's initial state")
    if any(not isinstance(s, Idle) for s in c0.f):
        return WFResult(False, 0, "initial statuses are not all Idle")
    prev = c0
    for k, step in enumerate(r.steps, start=1):
        if step.config not in atomic_step(t, prev, step.proc, step.line):
            return WFResult(False, k, f"p{step.proc}:{step.line} is not an atomic step here")
        prev = step.config
    return WFResult(True)


def atomic_implementation(t: ObjectType, init: Any, name: str = "Atomic", base: str = "self") -> Implementation:
    """The two-line implementation: ``r := invoke self.op(Arg); return r``."""
    procs = tuple(
        (op, Procedure((Assign("r", InvokeTerm(base, op, ArgRef())), Return(Var("r"))), t.arg_domain(op)))
        for op in t.ops
    )
    return Implementation(name, t, init, (BaseObject(base, t, init),), procs)
