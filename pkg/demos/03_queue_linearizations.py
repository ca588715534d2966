"""
Linearizations of a concurrent queue history
============================================

Three processes share a FIFO queue.  p0 and p1 enqueue 5 and 10
concurrently, then p2 and p1 dequeue and get 10 and 5 back.  The
brute-force oracle lists every linearization; the tracker arrives at
exactly the same set of final abstract states without enumerating
orderings one at a time.
"""

from collections import Counter

from lintrack.atomicmodel import atomic_implementation
from lintrack.checker import ExploreParams, adequacy_crosscheck, iter_linearizations
from lintrack.core import UNIT, Int, builtin_queue
from lintrack.runtime import INTERMEDIATE, Event, Invoke, Response, behavior, replay
from lintrack.tracker import tracker_of

queue, empty = builtin_queue(range(11), 2)
impl = atomic_implementation(queue, empty, name="AtomicQueue")

inv = lambda p, op, a=UNIT: Event(p, Invoke(op, Int(a) if isinstance(a, int) else a))
lin = lambda p: Event(p, INTERMEDIATE)
ret = lambda p, v=UNIT: Event(p, Response(Int(v) if isinstance(v, int) else v))

run = replay(impl, 3, [
    inv(0, "Enq", 5), inv(1, "Enq", 10), lin(0), lin(1), ret(1), inv(2, "Deq"), ret(0),
    inv(1, "Deq"), lin(1), lin(2), ret(2, 10), ret(1, 5),
])
history = behavior(run)
print("history:", ", ".join(str(e) for e in history))

# brute force: every placement of one linearization point per operation;
# many placements give the same order of operations
orders = Counter()
for a in iter_linearizations(queue, empty, 3, history):
    order, prev = [], a.initial
    for s in a:
        if s.line == INTERMEDIATE:
            pending, done = prev.f[s.proc], s.config.f[s.proc]
            order.append(f"p{s.proc}:{pending.op}({pending.arg})->{done.res}")
        prev = s.config
    orders[" ".join(order)] += 1
for order, n in sorted(orders.items()):
    print(f"  {order}   ({n} placements)")

print("tracker at the end:", sorted(str(ac) for ac in tracker_of(impl, run)))

# the same comparison on every run of two processes up to 7 events
report = adequacy_crosscheck(atomic_implementation(*builtin_queue([0, 1], 2)), ExploreParams(max_events=7))
print(f"adequacy: {report.prefixes_checked} prefixes, {len(report.discrepancies)} discrepancies")
