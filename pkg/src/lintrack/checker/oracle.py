"""Brute-force search for linearizations of a run.

A linearization is a well-formed atomic run with the same behavior.  The
search keeps the invocation/response skeleton fixed and tries every way of
inserting one intermediate (linearization) step per operation: before its
response for completed operations, optionally anywhere after its invocation
for operations still pending at the end.  It only uses the atomic step
relation, never the tracker.
"""

from __future__ import annotations

from typing import Any, Iterator, Sequence

from lintrack.atomicmodel import AtomicConfiguration, Pending, atomic_step, initial_atomic
from lintrack.core import ObjectType
from lintrack.runtime import INTERMEDIATE, Event, Run, Step, behavior


def iter_linearizations(t: ObjectType, init: Any, nprocs: int, skeleton: Sequence[Event]) -> Iterator[Run[AtomicConfiguration]]:
    """Yield every well-formed atomic run whose behavior is ``skeleton``."""
    skeleton = list(skeleton)
    steps: list[Step] = []

    def go(ac: AtomicConfiguration, i: int):
        if i == len(skeleton):
            yield Run(initial, tuple(steps))
        # take a linearization point for some pending process
        for p in range(nprocs):
            if isinstance(ac.f[p], Pending):
                for nxt in atomic_step(t, ac, p, INTERMEDIATE):
                    steps.append(Step(p, INTERMEDIATE, nxt))
                    yield from go(nxt, i)
                    steps.pop()
        # or perform the next skeleton event
        if i < len(skeleton):
            e = skeleton[i]
            for nxt in atomic_step(t, ac, e.proc, e.line):
                steps.append(Step(e.proc, e.line, nxt))
                yield from go(nxt, i + 1)
                steps.pop()

    initial = initial_atomic(t, init, nprocs)
    yield from go(initial, 0)


def oracle_linearizations(t: ObjectType, init: Any, r: Run) -> list[tuple[Run[AtomicConfiguration], AtomicConfiguration]]:
    """All linearizations of ``r`` with their final atomic configurations."""
    nprocs = r.initial.nprocs if hasattr(r.initial, "nprocs") else r.initial.base.nprocs
    return [(a, a.final) for a in iter_linearizations(t, init, nprocs, behavior(r))]


def oracle_finals(t: ObjectType, init: Any, nprocs: int, skeleton: Sequence[Event]) -> frozenset[AtomicConfiguration]:
    """Final configurations of all linearizations of a behavior."""
    return frozenset(a.final for a in iter_linearizations(t, init, nprocs, skeleton))


def is_linearizable(t: ObjectType, init: Any, nprocs: int, skeleton: Sequence[Event]) -> bool:
    return next(iter_linearizations(t, init, nprocs, skeleton), None) is not None
