"""Values, object types and the built-in object type registry.

Values are small immutable trees (``Int``, ``Bool``, ``Unit``, ``Pair``).
Python's ``bool`` is a subclass of ``int`` so native values would conflate
``1`` and ``True``; the wrapper classes keep them apart for hashing and
set deduplication.

An :class:`ObjectType` is a state machine given by a set-valued transition
function ``delta(state, proc, op, arg) -> ((next_state, ret), ...)``.  An
empty result means the operation cannot fire in that state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Union

INT_BITS = 63


class DomainError(Exception):
    pass


def int_bounds(bits: Optional[int] = None) -> tuple[int, int]:
    """Signed range of DSL integers; ``INT_BITS`` is read at call time."""
    bits = INT_BITS if bits is None else bits
    return -(1 << (bits - 1)), (1 << (bits - 1)) - 1


def in_int_range(n: int, bits: Optional[int] = None) -> bool:
    lo, hi = int_bounds(bits)
    return lo <= n <= hi


class Val:
    """Base class of the value universe.

    Values carry a canonical total order: every ``Int`` sorts before every
    ``Bool``, then ``Unit``, then ``Pair``; values of the same kind compare
    by their contents, pairs lexicographically.
    """

    __slots__ = ()

    def key(self) -> tuple:
        raise NotImplementedError

    def __lt__(self, other: Val) -> bool:
        return self.key() < other.key()

    def __le__(self, other: Val) -> bool:
        return self.key() <= other.key()

    def __gt__(self, other: Val) -> bool:
        return self.key() > other.key()

    def __ge__(self, other: Val) -> bool:
        return self.key() >= other.key()


@dataclass(frozen=True, slots=True, eq=True)
class Int(Val):
    n: int

    def key(self) -> tuple:
        return (0, self.n)

    def __repr__(self) -> str:
        return f"Int({self.n})"

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True, slots=True, eq=True)
class Bool(Val):
    b: bool

    def key(self) -> tuple:
        return (1, self.b)

    def __repr__(self) -> str:
        return f"Bool({self.b})"

    def __str__(self) -> str:
        return "true" if self.b else "false"


@dataclass(frozen=True, slots=True, eq=True)
class Unit(Val):
    def key(self) -> tuple:
        return (2,)

    def __repr__(self) -> str:
        return "Unit"

    def __str__(self) -> str:
        return "unit"


@dataclass(frozen=True, slots=True, eq=True)
class Pair(Val):
    first: Val
    second: Val

    def key(self) -> tuple:
        return (3, self.first.key(), self.second.key())

    def __repr__(self) -> str:
        return f"Pair({self.first!r}, {self.second!r})"

    def __str__(self) -> str:
        return f"pair({self.first}, {self.second})"


UNIT = Unit()
TRUE = Bool(True)
FALSE = Bool(False)

ValLike = Union[Val, int, bool, None, tuple]


def val(x: ValLike) -> Val:
    """Convert a Python value to a :class:`Val`.

    ``None`` is unit, 2-tuples are pairs.  Handy in tests and notebooks.

    >>> val((1, True))
    Pair(Int(1), Bool(True))
    """
    if isinstance(x, Val):
        return x
    if isinstance(x, bool):
        return Bool(x)
    if isinstance(x, int):
        if not in_int_range(x):
            raise DomainError(f"integer {x} outside {INT_BITS}-bit range")
        return Int(x)
    if x is None:
        return UNIT
    if isinstance(x, tuple) and len(x) == 2:
        return Pair(val(x[0]), val(x[1]))
    raise DomainError(f"cannot convert {x!r} to a value")


def vals(xs: Iterable[ValLike]) -> tuple[Val, ...]:
    """Convert and canonically sort a collection of values, dropping duplicates."""
    return tuple(sorted(set(val(x) for x in xs), key=lambda v: v.key()))


# JSON encoding: int -> number, bool -> true/false, unit -> null, pair -> [a, b]


def encode_val(v: Val) -> Any:
    if isinstance(v, Int):
        return v.n
    if isinstance(v, Bool):
        return v.b
    if isinstance(v, Unit):
        return None
    if isinstance(v, Pair):
        return [encode_val(v.first), encode_val(v.second)]
    raise TypeError(f"not a value: {v!r}")


def decode_val(obj: Any) -> Val:
    if obj is None:
        return UNIT
    if isinstance(obj, bool):
        return Bool(obj)
    if isinstance(obj, int):
        return val(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return Pair(decode_val(obj[0]), decode_val(obj[1]))
    raise DomainError(f"malformed encoded value: {obj!r}")


# ---------------------------------------------------------------------------
# Object types
# ---------------------------------------------------------------------------

Outcome = tuple[Any, Val]  # (next_state, return value)


class ObjectType:
    """A state machine with named operations.

    Subclasses define ``ops``, ``arg_domain`` and ``delta``.  States may be
    any hashable Python object; ``encode``/``decode`` map them to and from
    :class:`Val` so they can be ordered, hashed and serialized uniformly.
    """

    kind: str = "object"
    ops: tuple[str, ...] = ()

    def arg_domain(self, op: str) -> tuple[Val, ...]:
        raise NotImplementedError

    def delta(self, state: Any, proc: int, op: str, arg: Val) -> tuple[Outcome, ...]:
        raise NotImplementedError

    def contains(self, state: Any) -> bool:
        raise NotImplementedError

    def states(self) -> tuple[Any, ...]:
        """Enumerate the (finite) state domain."""
        raise NotImplementedError

    def encode(self, state: Any) -> Val:
        return state

    def decode(self, v: Val) -> Any:
        return v

    def state_key(self, state: Any) -> tuple:
        return self.encode(state).key()

    def format_state(self, state: Any) -> str:
        return str(self.encode(state))

    def is_deterministic(self) -> bool:
        return True

    def describe(self) -> str:
        """Source form, as accepted by the DSL parser."""
        raise NotImplementedError


def _fmt_set(values: Iterable[Val]) -> str:
    return "{" + ", ".join(str(v) for v in values) + "}"


@dataclass(frozen=True)
class RegisterType(ObjectType):
    """Read/write cell over a finite value domain."""

    domain: tuple[Val, ...]

    kind = "register"
    ops = ("Read", "Write")

    def arg_domain(self, op):
        if op == "Read":
            return (UNIT,)
        if op == "Write":
            return self.domain
        raise KeyError(op)

    def delta(self, state, proc, op, arg):
        if op == "Read":
            return ((state, state),) if arg == UNIT else ()
        if op == "Write":
            return ((arg, UNIT),) if arg in self.domain else ()
        return ()

    def contains(self, state):
        return state in self.domain

    def states(self):
        return self.domain

    def describe(self):
        return f"register({_fmt_set(self.domain)})"


@dataclass(frozen=True)
class RCasType(ObjectType):
    """Cell supporting Read and CAS(pair(expected, new)) -> Bool(success)."""

    domain: tuple[Val, ...]

    kind = "rcas"
    ops = ("Read", "CAS")

    def arg_domain(self, op):
        if op == "Read":
            return (UNIT,)
        if op == "CAS":
            return tuple(Pair(c, n) for c in self.domain for n in self.domain)
        raise KeyError(op)

    def delta(self, state, proc, op, arg):
        if op == "Read":
            return ((state, state),) if arg == UNIT else ()
        if op == "CAS":
            if not isinstance(arg, Pair) or arg.second not in self.domain:
                return ()
            if state == arg.first:
                return ((arg.second, TRUE),)
            return ((state, FALSE),)
        return ()

    def contains(self, state):
        return state in self.domain

    def states(self):
        return self.domain

    def describe(self):
        return f"rcas({_fmt_set(self.domain)})"


@dataclass(frozen=True)
class QueueType(ObjectType):
    """Bounded FIFO queue; the state is a tuple of values, head first.

    ``Deq`` on an empty queue and ``Enq`` on a full one have no successors.
    """

    domain: tuple[Val, ...]
    capacity: int

    kind = "queue"
    ops = ("Enq", "Deq")

    def arg_domain(self, op):
        if op == "Enq":
            return self.domain
        if op == "Deq":
            return (UNIT,)
        raise KeyError(op)

    def delta(self, state, proc, op, arg):
        if op == "Enq":
            if arg not in self.domain or len(state) >= self.capacity:
                return ()
            return ((state + (arg,), UNIT),)
        if op == "Deq":
            if arg != UNIT or not state:
                return ()
            return ((state[1:], state[0]),)
        return ()

    def contains(self, state):
        return (
            isinstance(state, tuple)
            and len(state) <= self.capacity
            and all(x in self.domain for x in state)
        )

    def states(self):
        out = [()]
        frontier = [()]
        for _ in range(self.capacity):
            frontier = [s + (x,) for s in frontier for x in self.domain]
            out.extend(frontier)
        return tuple(out)

    # cons-list encoding, unit terminated
    def encode(self, state):
        v: Val = UNIT
        for x in reversed(state):
            v = Pair(x, v)
        return v

    def decode(self, v):
        items = []
        while isinstance(v, Pair):
            items.append(v.first)
            v = v.second
        if v != UNIT:
            raise DomainError(f"malformed queue encoding: {v!r}")
        return tuple(items)

    def format_state(self, state):
        return "[" + ", ".join(str(v) for v in state) + "]"

    def describe(self):
        return f"queue({_fmt_set(self.domain)}, {self.capacity})"


def builtin_register(domain: Iterable[ValLike], init: ValLike = None) -> tuple[RegisterType, Val]:
    """Build the register type; returns ``(type, initial_state)``."""
    t = RegisterType(vals(domain))
    s0 = t.domain[0] if init is None else val(init)
    if not t.contains(s0):
        raise DomainError(f"initial state {s0} not in domain {_fmt_set(t.domain)}")
    return t, s0


def builtin_rcas(domain: Iterable[ValLike], init: ValLike = None) -> tuple[RCasType, Val]:
    t = RCasType(vals(domain))
    s0 = t.domain[0] if init is None else val(init)
    if not t.contains(s0):
        raise DomainError(f"initial state {s0} not in domain {_fmt_set(t.domain)}")
    return t, s0


def builtin_queue(domain: Iterable[ValLike], capacity: int) -> tuple[QueueType, tuple]:
    if capacity < 1:
        raise DomainError("queue capacity must be at least 1")
    return QueueType(vals(domain), capacity), ()


# DSL name -> factory returning (type, initial_state)
BUILTINS: dict[str, Callable[..., tuple[ObjectType, Any]]] = {
    "register": builtin_register,
    "rcas": builtin_rcas,
    "queue": builtin_queue,
}
