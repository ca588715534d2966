"""Meta-configurations: the set of all linearization end-states of a run so far.

On every event the tracker is first filtered (invocations need the process
idle, responses need it linearized with the returned value) and then closed
under linearizing any sequence of pending processes.  The implementation is
linearizable iff the tracker never becomes empty.

Trackers are extensional finite sets.  Optionally each member records where
it came from (its parent in the previous tracker and the linearization points
taken since), which is enough to rebuild a witness atomic run.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

from lintrack.atomicmodel import (
    IDLE,
    AtomicConfiguration,
    Idle,
    Linearized,
    Pending,
    ac_key,
    initial_atomic,
    linearize,
)
from lintrack.core import ObjectType, Val
from lintrack.lang.syntax import Implementation
from lintrack.runtime import (
    Configuration,
    Intermediate,
    Invoke,
    Line,
    Response,
    Run,
    WFResult,
    global_step,
    initial_configuration,
    wf_run,
)

# provenance entry: (parent in the previous tracker, ((proc, config after linearizing), ...))
Origin = tuple[Optional[AtomicConfiguration], tuple[tuple[int, AtomicConfiguration], ...]]


@dataclass(frozen=True, eq=False)
class MetaConfiguration:
    configs: frozenset[AtomicConfiguration]
    provenance: Optional[dict[AtomicConfiguration, Origin]] = field(default=None, repr=False)

    def __eq__(self, other):
        if not isinstance(other, MetaConfiguration):
            return NotImplemented
        return self.configs == other.configs

    def __hash__(self):
        return hash(self.configs)

    def __len__(self):
        return len(self.configs)

    def __iter__(self):
        return iter(self.configs)

    def __contains__(self, ac):
        return ac in self.configs

    def __bool__(self):
        return bool(self.configs)

    def __le__(self, other: MetaConfiguration) -> bool:
        return self.configs <= other.configs

    def sorted(self, t: ObjectType) -> list[AtomicConfiguration]:
        return sorted(self.configs, key=lambda ac: ac_key(t, ac))


def meta(configs: Iterable[AtomicConfiguration]) -> MetaConfiguration:
    return MetaConfiguration(frozenset(configs))


def initial_tracker(t: ObjectType, init: Any, nprocs: int, provenance: bool = False) -> MetaConfiguration:
    ac = initial_atomic(t, init, nprocs)
    return MetaConfiguration(frozenset([ac]), {ac: (None, ())} if provenance else None)


def multistep(t: ObjectType, ac: AtomicConfiguration, pis: Sequence[int]) -> frozenset[AtomicConfiguration]:
    """End states of linearizing exactly the processes ``pis``, in that order."""
    current = {ac}
    for p in pis:
        current = {nxt for c in current for nxt in linearize(t, c, p)}
    return frozenset(current)


def _ordered(t: ObjectType, configs, record: bool):
    # canonical iteration only matters when provenance choices are recorded
    return sorted(configs, key=lambda ac: ac_key(t, ac)) if record else configs


def _close(t: ObjectType, seeds: dict[AtomicConfiguration, Origin], record: bool) -> MetaConfiguration:
    """Breadth-first closure of ``seeds`` under linearizing one pending process.

    Every linearization turns a Pending status into Linearized, so chains
    are at most as long as the number of processes.
    """
    seen: dict[AtomicConfiguration, Origin] = dict(seeds)
    queue = deque(_ordered(t, seeds, record))
    while queue:
        ac = queue.popleft()
        for p, s in enumerate(ac.f):
            if not isinstance(s, Pending):
                continue
            for nxt in linearize(t, ac, p):
                if nxt not in seen:
                    if record:
                        parent, seq = seen[ac]
                        seen[nxt] = (parent, seq + ((p, nxt),))
                    else:
                        seen[nxt] = None
                    queue.append(nxt)
    return MetaConfiguration(frozenset(seen), seen if record else None)


def linearize_pending(t: ObjectType, C: MetaConfiguration, record: bool = False) -> MetaConfiguration:
    seeds = {ac: (ac, ()) for ac in C.configs} if record else dict.fromkeys(C.configs)
    return _close(t, seeds, record)


def evolve_inv(C: MetaConfiguration, proc: int, op: str, arg: Val) -> MetaConfiguration:
    return meta(ac.with_status(proc, Pending(op, arg)) for ac in C.configs if isinstance(ac.f[proc], Idle))


def evolve_ret(C: MetaConfiguration, proc: int, v: Val) -> MetaConfiguration:
    return meta(
        ac.with_status(proc, IDLE)
        for ac in C.configs
        if isinstance(ac.f[proc], Linearized) and ac.f[proc].res == v
    )


def evolve(t: ObjectType, proc: int, line: Line, C: MetaConfiguration, record: bool = False) -> MetaConfiguration:
    """Tracker after ``proc`` executes ``line``.

    With ``record`` set, the result carries provenance pointing into ``C``.
    """
    if isinstance(line, Invoke):
        pre = {}
        for ac in _ordered(t, C.configs, record):
            if isinstance(ac.f[proc], Idle):
                pre.setdefault(ac.with_status(proc, Pending(line.op, line.arg)), (ac, ()))
    elif isinstance(line, Intermediate):
        pre = {ac: (ac, ()) for ac in C.configs}
    elif isinstance(line, Response):
        pre = {}
        for ac in _ordered(t, C.configs, record):
            s = ac.f[proc]
            if isinstance(s, Linearized) and s.res == line.v:
                pre.setdefault(ac.with_status(proc, IDLE), (ac, ()))
    else:
        raise TypeError(f"not a line: {line!r}")
    if not record:
        pre = dict.fromkeys(pre)
    return _close(t, pre, record)


# --- augmented configurations and runs -------------------------------------


@dataclass(frozen=True)
class AugmentedConfiguration:
    base: Configuration
    tracker: MetaConfiguration


def initial_augmented(impl: Implementation, nprocs: int, provenance: bool = False) -> AugmentedConfiguration:
    return AugmentedConfiguration(
        initial_configuration(impl, nprocs),
        initial_tracker(impl.spec, impl.init, nprocs, provenance),
    )


def augmented_step(impl: Implementation, c: AugmentedConfiguration, proc: int, line: Line, record: bool = False) -> list[AugmentedConfiguration]:
    succ = global_step(impl, c.base, proc, line)
    if not succ:
        return []
    tracker = evolve(impl.spec, proc, line, c.tracker, record)
    return [AugmentedConfiguration(b, tracker) for b in succ]


def embed(impl: Implementation, r: Run[Configuration], provenance: bool = False) -> Run[AugmentedConfiguration]:
    """Attach trackers to a well-formed implementation run."""
    ok = wf_run(impl, r)
    if not ok:
        raise ValueError(f"embed needs a well-formed run (step {ok.index}: {ok.reason})")
    tracker = initial_tracker(impl.spec, impl.init, r.initial.nprocs, provenance)
    out = Run(AugmentedConfiguration(r.initial, tracker))
    for step in r.steps:
        tracker = evolve(impl.spec, step.proc, step.line, tracker, provenance)
        out = out.extend(step.proc, step.line, AugmentedConfiguration(step.config, tracker))
    return out


def project(r: Run[AugmentedConfiguration]) -> Run[Configuration]:
    out = Run(r.initial.base)
    for step in r.steps:
        out = out.extend(step.proc, step.line, step.config.base)
    return out


def wf_aug(impl: Implementation, r: Run[AugmentedConfiguration]) -> WFResult:
    """Well-formed base run, initial tracker, and every tracker the evolution of the last."""
    c0 = r.initial
    if c0.tracker != initial_tracker(impl.spec, impl.init, c0.base.nprocs):
        return WFResult(False, 0, "initial tracker is not the all-idle initial configuration")
    base_ok = wf_run(impl, project(r))
    if not base_ok:
        return base_ok
    prev = c0
    for k, step in enumerate(r.steps, start=1):
        if step.config.tracker != evolve(impl.spec, step.proc, step.line, prev.tracker):
            return WFResult(False, k, "tracker is not the evolution of the previous one")
        prev = step.config
    return WFResult(True)


def tracker_of(impl: Implementation, r: Run[Configuration]) -> MetaConfiguration:
    """Tracker at the end of ``r`` (no well-formedness check)."""
    tracker = initial_tracker(impl.spec, impl.init, r.initial.nprocs)
    for step in r.steps:
        tracker = evolve(impl.spec, step.proc, step.line, tracker)
    return tracker


__all__ = [
    "AugmentedConfiguration",
    "MetaConfiguration",
    "augmented_step",
    "embed",
    "evolve",
    "evolve_inv",
    "evolve_ret",
    "initial_augmented",
    "initial_tracker",
    "linearize_pending",
    "meta",
    "multistep",
    "project",
    "tracker_of",
    "wf_aug",
]
