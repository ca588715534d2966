"""
Watching the tracker follow an interfering write
================================================

Process 0 writes 1 through a read/CAS cell, but process 1 sneaks in a
write of 2 between the read and the CAS.  Process 0's CAS fails, so its
write never reaches memory.  The tracker keeps every way the run could
still be linearized, and at the end only orderings in which Write(1)
happened before Write(2) survive.
"""

from lintrack import casestudies
from lintrack.checker import extract_witness
from lintrack.core import UNIT, Int
from lintrack.runtime import INTERMEDIATE, Event, Invoke, Response, replay
from lintrack.tracker import embed

impl = casestudies.load("rwcas", {"D": [0, 1, 2]})
print(casestudies.source("rwcas"))

schedule = [
    Event(0, Invoke("Write", Int(1))),
    Event(0, INTERMEDIATE),           # p0 reads 0
    Event(1, Invoke("Write", Int(2))),
    Event(1, INTERMEDIATE),           # p1 reads 0
    Event(1, INTERMEDIATE),           # p1's CAS(0, 2) succeeds
    Event(1, Response(UNIT)),
    Event(0, INTERMEDIATE),           # p0's CAS(0, 1) fails
    Event(0, Response(UNIT)),
]
run = replay(impl, 2, schedule)

# every event, the physical cell, and the abstract configurations still possible
for k, c in enumerate(embed(impl, run).configs):
    label = "initial" if k == 0 else str(schedule[k - 1])
    print(f"{k}: {label:24s} cell={c.base.eps[0]}  tracker={len(c.tracker)}")
    for ac in c.tracker.sorted(impl.spec):
        print("      ", ac)

# one concrete linearization, rebuilt from the trackers
witness = extract_witness(impl, run)
print("\nlinearization:")
for step in witness:
    print(f"  {str(step.event):24s} -> {step.config}")
