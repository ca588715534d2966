"""Bounded exploration of augmented runs.

Exhaustive mode walks every run of at most ``max_events`` events and
reports the first event whose tracker evolution is empty.  Augmented
configurations determine their own future (successors depend only on the
base configuration and the tracker), so revisiting one with no more
remaining budget than before can be pruned without changing the verdict.

Two exhaustive strategies are available:

* depth-first (default), reporting the first counterexample in exploration
  order;
* level-synchronous breadth-first (``minimize=True`` or ``jobs > 1``),
  reporting the shortest counterexample, ties broken by canonical trace
  order (the per-step rank of each event in :func:`~lintrack.runtime.expand`
  order).  With ``jobs > 1`` each level's frontier is split into contiguous
  chunks expanded by worker threads; merging, deduplication and statistics
  happen on the calling thread in chunk order, so the outcome is identical
  to the single-threaded search.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

from lintrack.lang.syntax import Implementation
from lintrack.runtime import Configuration, Event, Run, StuckError, expand, initial_configuration
from lintrack.tracker import AugmentedConfiguration, MetaConfiguration, evolve, initial_augmented


@dataclass(frozen=True)
class ExploreParams:
    max_events: int = 8
    process_count: int = 2
    dedup: bool = True
    mode: str = "exhaustive"  # or "random"
    seed: int = 0
    trials: int = 1000
    record_provenance: bool = False
    minimize: bool = False
    jobs: int = 1
    state_budget: Optional[int] = None

    def __post_init__(self):
        if self.max_events < 0:
            raise ValueError("max_events must be non-negative")
        if self.process_count < 1:
            raise ValueError("process_count must be at least 1")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.mode == "random" and self.trials < 1:
            raise ValueError("trials must be at least 1")


@dataclass
class Stats:
    explored_states: int = 0
    explored_runs: int = 0
    max_tracker_size: int = 0
    elapsed: float = 0.0


@dataclass(frozen=True)
class StuckDiagnostic:
    proc: int
    kind: str
    message: str
    trace: tuple[Event, ...]
    config: Configuration


@dataclass
class LinearizableUpToBound:
    stats: Stats

    name = "linearizable_up_to_bound"


@dataclass
class Counterexample:
    """``run`` ends at ``failing_index``, the first step with an empty tracker."""

    run: Run[AugmentedConfiguration]
    failing_index: int
    stats: Stats

    name = "counterexample"


@dataclass
class Stuck:
    diagnostics: list[StuckDiagnostic]
    stats: Stats

    name = "stuck"


@dataclass
class BudgetExceeded:
    stats: Stats
    budget: int = 0

    name = "budget_exceeded"


Verdict = Union[LinearizableUpToBound, Counterexample, Stuck, BudgetExceeded]

MAX_DIAGNOSTICS = 20


class _Budget(Exception):
    pass


@dataclass
class _Search:
    impl: Implementation
    params: ExploreParams
    stats: Stats = field(default_factory=Stats)
    diagnostics: list[StuckDiagnostic] = field(default_factory=list)
    _diag_seen: set = field(default_factory=set)
    _cache: dict = field(default_factory=dict)

    def evolve(self, ev: Event, tracker: MetaConfiguration) -> MetaConfiguration:
        # dict get/set are atomic under the GIL; a lost race only repeats work
        key = (ev.proc, ev.line, tracker.configs)
        out = self._cache.get(key)
        if out is None:
            out = evolve(self.impl.spec, ev.proc, ev.line, tracker)
            self._cache[key] = out
        return out

    def successors(self, c: AugmentedConfiguration):
        events, stuck = expand(self.impl, c.base)
        return [(ev, AugmentedConfiguration(b, self.evolve(ev, c.tracker))) for ev, b in events], stuck

    def note_stuck(self, stuck: list[StuckError], trace: tuple[Event, ...]):
        for exc in stuck:
            key = (exc.config, exc.proc)
            if key in self._diag_seen or len(self.diagnostics) >= MAX_DIAGNOSTICS:
                continue
            self._diag_seen.add(key)
            self.diagnostics.append(StuckDiagnostic(exc.proc, exc.cause.kind, exc.cause.message, trace, exc.config))

    def note_tracker(self, tracker: MetaConfiguration):
        if len(tracker) > self.stats.max_tracker_size:
            self.stats.max_tracker_size = len(tracker)

    def check_budget(self, nstates: int):
        budget = self.params.state_budget
        if budget is not None and nstates > budget:
            raise _Budget()

    def finish(self, cex: Optional[tuple[AugmentedConfiguration, list]], start: float) -> Verdict:
        self.stats.elapsed = time.perf_counter() - start
        if cex is not None:
            init, path = cex
            run = Run(init)
            for ev, c in path:
                run = run.extend(ev.proc, ev.line, c)
            return Counterexample(run, len(run), self.stats)
        if self.diagnostics:
            return Stuck(self.diagnostics, self.stats)
        return LinearizableUpToBound(self.stats)


def check(impl: Implementation, p: ExploreParams) -> Verdict:
    """Explore augmented runs of ``impl`` up to ``p.max_events`` events."""
    if p.mode == "random":
        return fuzz(impl, p)
    search = _Search(impl, p)
    start = time.perf_counter()
    try:
        if p.minimize or p.jobs > 1:
            cex = _bfs(search)
        else:
            cex = _dfs(search)
    except _Budget:
        search.stats.elapsed = time.perf_counter() - start
        return BudgetExceeded(search.stats, p.state_budget)
    return search.finish(cex, start)


def _dfs(search: _Search):
    p = search.params
    init = initial_augmented(search.impl, p.process_count)
    best_depth = {init: 0}  # fewest events needed to reach each state
    path: list[tuple[Event, AugmentedConfiguration]] = []
    search.note_tracker(init.tracker)

    def visit(c: AugmentedConfiguration, depth: int):
        search.stats.explored_runs += 1
        if depth == p.max_events:
            return None
        succ, stuck = search.successors(c)
        if stuck:
            search.note_stuck(stuck, tuple(ev for ev, _ in path))
        for ev, nc in succ:
            search.note_tracker(nc.tracker)
            if not nc.tracker:
                path.append((ev, nc))
                search.stats.explored_runs += 1
                return list(path)
            if p.dedup:
                seen = best_depth.get(nc)
                if seen is not None and seen <= depth + 1:
                    continue
            best_depth[nc] = depth + 1
            search.check_budget(len(best_depth))
            path.append((ev, nc))
            found = visit(nc, depth + 1)
            path.pop()
            if found is not None:
                return found
        return None

    try:
        found = visit(init, 0)
    finally:
        search.stats.explored_states = len(best_depth)
    return (init, found) if found is not None else None


@dataclass(frozen=True)
class _Node:
    config: AugmentedConfiguration
    parent: Optional[_Node]
    event: Optional[Event]

    def path(self) -> list[tuple[Event, AugmentedConfiguration]]:
        out = []
        node = self
        while node.parent is not None:
            out.append((node.event, node.config))
            node = node.parent
        out.reverse()
        return out

    def trace(self) -> tuple[Event, ...]:
        return tuple(ev for ev, _ in self.path())


def _bfs(search: _Search):
    p = search.params
    init = initial_augmented(search.impl, p.process_count)
    root = _Node(init, None, None)
    visited = {init}
    frontier = [root]
    search.note_tracker(init.tracker)
    search.stats.explored_runs = 1
    pool = ThreadPoolExecutor(max_workers=p.jobs) if p.jobs > 1 else None

    def expand_chunk(nodes):
        return [search.successors(n.config) for n in nodes]

    try:
        for _depth in range(p.max_events):
            if not frontier:
                break
            if pool is None:
                expanded = expand_chunk(frontier)
            else:
                size = -(-len(frontier) // p.jobs)
                chunks = [frontier[i : i + size] for i in range(0, len(frontier), size)]
                expanded = [x for part in pool.map(expand_chunk, chunks) for x in part]
            nxt = []
            for node, (succ, stuck) in zip(frontier, expanded):
                if stuck:
                    search.note_stuck(stuck, node.trace())
                for ev, nc in succ:
                    search.note_tracker(nc.tracker)
                    if not nc.tracker:
                        search.stats.explored_runs += 1
                        return init, _Node(nc, node, ev).path()
                    if p.dedup and nc in visited:
                        continue
                    search.stats.explored_runs += 1
                    visited.add(nc)
                    search.check_budget(len(visited))
                    nxt.append(_Node(nc, node, ev))
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
        search.stats.explored_states = len(visited)
    return None


def fuzz(impl: Implementation, p: ExploreParams) -> Verdict:
    """Sample ``p.trials`` schedules, each event drawn uniformly from the enabled ones."""
    search = _Search(impl, p)
    rng = random.Random(p.seed)
    start = time.perf_counter()
    init = initial_augmented(impl, p.process_count)
    seen = {init}
    search.note_tracker(init.tracker)
    try:
        for _ in range(p.trials):
            c, path = init, []
            search.stats.explored_runs += 1
            for _depth in range(p.max_events):
                succ, stuck = search.successors(c)
                if stuck:
                    search.note_stuck(stuck, tuple(ev for ev, _ in path))
                if not succ:
                    break
                ev, c = succ[rng.randrange(len(succ))]
                path.append((ev, c))
                seen.add(c)
                search.check_budget(len(seen))
                search.note_tracker(c.tracker)
                if not c.tracker:
                    search.stats.explored_states = len(seen)
                    return search.finish((init, path), start)
    except _Budget:
        search.stats.explored_states = len(seen)
        search.stats.elapsed = time.perf_counter() - start
        return BudgetExceeded(search.stats, p.state_budget)
    search.stats.explored_states = len(seen)
    return search.finish(None, start)


def random_run(impl: Implementation, nprocs: int, length: int, rng: random.Random) -> Run[Configuration]:
    """A uniformly scheduled well-formed run of at most ``length`` events."""
    r = Run(initial_configuration(impl, nprocs))
    for _ in range(length):
        events, _stuck = expand(impl, r.final)
        if not events:
            break
        ev, c = events[rng.randrange(len(events))]
        r = r.extend(ev.proc, ev.line, c)
    return r
