"""Rebuild a linearization of a run from its trackers."""

from __future__ import annotations

from lintrack.atomicmodel import AtomicConfiguration, ac_key, atomic_step, wf_atomic
from lintrack.lang.syntax import Implementation
from lintrack.runtime import INTERMEDIATE, Configuration, Intermediate, Run, behavior
from lintrack.tracker import embed, evolve, meta


class NoLinearization(Exception):
    """The run's final tracker is empty."""

    def __init__(self, index: int):
        super().__init__(f"no linearization: tracker empty after event {index}")
        self.index = index


def extract_witness(impl: Implementation, r: Run[Configuration]) -> Run[AtomicConfiguration]:
    """An atomic run with the same behavior as ``r``.

    Among all linearizations the one returned linearizes eagerly: walking
    forward through the trackers, each event is followed by as many
    linearization points as still allow the run to be completed, ties broken
    by the canonical order on atomic configurations.  A write whose effect
    was overwritten before it became visible is therefore placed right after
    its invocation, ahead of the write that masked it.
    """
    t = impl.spec
    trackers = [c.tracker for c in embed(impl, r).configs]
    for k, tr in enumerate(trackers):
        if not tr:
            raise NoLinearization(k)

    # moves[k][a]: ways from a in tracker k-1 to members of tracker k that can still reach the end
    n = len(r)
    moves: list[dict] = [{} for _ in range(n + 1)]
    alive = trackers[n].configs
    for k in range(n, 0, -1):
        step = r.steps[k - 1]
        for a in trackers[k - 1].configs:
            out = evolve(t, step.proc, step.line, meta([a]), record=True)
            opts = [(b, out.provenance[b][1]) for b in out.configs if b in alive]
            if opts:
                moves[k][a] = opts
        alive = frozenset(moves[k])

    (ac,) = trackers[0].configs
    witness = Run(ac)
    for k, step in enumerate(r.steps, start=1):
        nxt, seq = min(moves[k][ac], key=lambda o: (-len(o[1]), ac_key(t, o[0])))
        if not isinstance(step.line, Intermediate):
            (after,) = atomic_step(t, ac, step.proc, step.line)
            witness = witness.extend(step.proc, step.line, after)
        for p, lin in seq:
            witness = witness.extend(p, INTERMEDIATE, lin)
        ac = nxt

    ok = wf_atomic(t, impl.init, witness)
    if not ok or behavior(witness) != behavior(r):
        raise AssertionError(f"internal error: extracted witness is not a linearization ({ok.reason})")
    return witness
