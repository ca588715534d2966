"""Cross-check the tracker against brute-force linearization search.

For every explored run prefix the final tracker must equal the set of final
configurations of all linearizations of that prefix.  When ``dedup`` is on,
prefixes are merged on (base configuration, behavior): both sides of the
comparison depend only on the behavior, and the future only on the base
configuration, so nothing distinct is skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from lintrack.atomicmodel import AtomicConfiguration
from lintrack.checker.explore import ExploreParams
from lintrack.checker.oracle import oracle_finals
from lintrack.lang.syntax import Implementation
from lintrack.runtime import Event, Intermediate, expand, initial_configuration
from lintrack.tracker import evolve, initial_tracker


@dataclass(frozen=True)
class Discrepancy:
    trace: tuple[Event, ...]
    tracker: frozenset[AtomicConfiguration]
    oracle: frozenset[AtomicConfiguration]


@dataclass
class AdequacyReport:
    prefixes_checked: int = 0
    behaviors_checked: int = 0
    nonlinearizable_prefixes: int = 0
    discrepancies: list[Discrepancy] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def shortest(self) -> Discrepancy | None:
        return min(self.discrepancies, key=lambda d: len(d.trace), default=None)


def adequacy_crosscheck(impl: Implementation, p: ExploreParams) -> AdequacyReport:
    t, n = impl.spec, p.process_count
    report = AdequacyReport()
    oracle_memo: dict[tuple[Event, ...], frozenset] = {}
    evolve_memo: dict = {}
    seen: set = set()

    def oracle(beh):
        out = oracle_memo.get(beh)
        if out is None:
            out = oracle_memo[beh] = oracle_finals(t, impl.init, n, beh)
        return out

    def visit(c, tracker, beh, trace, depth):
        report.prefixes_checked += 1
        expected = oracle(beh)
        if tracker.configs != expected:
            report.discrepancies.append(Discrepancy(trace, tracker.configs, expected))
            return
        if not tracker or depth == p.max_events:
            report.nonlinearizable_prefixes += not tracker
            return
        for ev, nc in expand(impl, c)[0]:
            key = (ev.proc, ev.line, tracker.configs)
            nt = evolve_memo.get(key)
            if nt is None:
                nt = evolve_memo[key] = evolve(t, ev.proc, ev.line, tracker)
            nbeh = beh if isinstance(ev.line, Intermediate) else beh + (ev,)
            if p.dedup:
                k = (nc, nbeh)
                if k in seen:
                    continue
                seen.add(k)
            visit(nc, nt, nbeh, trace + (ev,), depth + 1)

    visit(initial_configuration(impl, n), initial_tracker(t, impl.init, n), (), (), 0)
    report.behaviors_checked = len(oracle_memo)
    return report
