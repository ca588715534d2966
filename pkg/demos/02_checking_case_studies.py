"""
Bounded checking of the bundled case studies
============================================

Two correct register implementations and two broken ones.  The checker
explores every schedule up to a number of events and stops at the first
event whose tracker becomes empty.
"""

from lintrack import casestudies
from lintrack.checker import Counterexample, ExploreParams, check
from lintrack.tracker import project

for name in casestudies.NAMES:
    impl = casestudies.load(name)
    v = check(impl, ExploreParams(max_events=8, process_count=2, minimize=True))
    s = v.stats
    print(f"{name:16s} {v.name:26s} states={s.explored_states:5d} largest tracker={s.max_tracker_size}")
    if isinstance(v, Counterexample):
        for e in project(v.run).events:
            print("    ", e)

# three processes make the tracker much larger, but the search stays small
v = check(casestudies.load("rwcas"), ExploreParams(max_events=8, process_count=3))
print(f"\nrwcas, 3 processes: {v.name}, {v.stats.explored_states} states in {v.stats.elapsed:.2f}s")

# fuzzing samples schedules instead of enumerating them
v = check(casestudies.load("stale_read"), ExploreParams(max_events=8, mode="random", seed=1, trials=200))
print(f"stale_read, random schedules: {v.name} after {v.stats.explored_runs} samples")
