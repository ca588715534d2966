"""Abstract syntax of the implementation language, frames and signals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

from lintrack.core import ObjectType, Val

# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IntLit:
    n: int


@dataclass(frozen=True)
class BoolLit:
    b: bool


@dataclass(frozen=True)
class UnitLit:
    pass


@dataclass(frozen=True)
class ArgRef:
    pass


@dataclass(frozen=True)
class ProjL:
    e: Term


@dataclass(frozen=True)
class ProjR:
    e: Term


BINOPS = ("+", "-", "*", "==", "<", "&&", "||")


@dataclass(frozen=True)
class BinOp:
    op: str
    e1: Term
    e2: Term


@dataclass(frozen=True)
class Not:
    e: Term


@dataclass(frozen=True)
class MkPair:
    e1: Term
    e2: Term


@dataclass(frozen=True)
class InvokeTerm:
    obj: str
    op: str
    arg: Term


Term = Union[Var, IntLit, BoolLit, UnitLit, ArgRef, ProjL, ProjR, BinOp, Not, MkPair, InvokeTerm]

# --- statements ------------------------------------------------------------


@dataclass(frozen=True)
class Seq:
    s1: Statement
    s2: Statement


@dataclass(frozen=True)
class Assign:
    x: str
    e: Term


@dataclass(frozen=True)
class If:
    e: Term
    s1: Statement
    s2: Statement


@dataclass(frozen=True)
class Return:
    e: Term


@dataclass(frozen=True)
class InvokeStmt:
    obj: str
    op: str
    arg: Term


@dataclass(frozen=True)
class Goto:
    n: int


Statement = Union[Seq, Assign, If, Return, InvokeStmt, Goto]

# --- signals ---------------------------------------------------------------


@dataclass(frozen=True)
class Continue:
    pass


@dataclass(frozen=True)
class GotoSig:
    line: int


@dataclass(frozen=True)
class Ret:
    v: Val


Signal = Union[Continue, GotoSig, Ret]

CONTINUE = Continue()

# --- procedures and implementations ----------------------------------------


@dataclass(frozen=True)
class Procedure:
    """Statements indexed by line number, plus the invocation argument domain."""

    statements: tuple[Statement, ...]
    arg_domain: tuple[Val, ...]

    def __len__(self) -> int:
        return len(self.statements)


@dataclass(frozen=True)
class BaseObject:
    name: str
    type: ObjectType
    init: Any


@dataclass(frozen=True)
class Implementation:
    """An implementation of one object using a set of base objects.

    Base states are kept as a tuple ordered like ``bases``; ``base_index``
    maps a base object name to its slot.
    """

    name: str
    spec: ObjectType
    init: Any
    bases: tuple[BaseObject, ...]
    procedures: tuple[tuple[str, Procedure], ...]
    base_index: dict[str, int] = field(init=False, compare=False, repr=False)
    _procs: dict[str, Procedure] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "base_index", {b.name: i for i, b in enumerate(self.bases)})
        object.__setattr__(self, "_procs", dict(self.procedures))

    def __hash__(self):
        return hash((self.name, self.spec, self.bases, self.procedures))

    def procedure(self, op: str) -> Procedure:
        return self._procs[op]

    @property
    def ops(self) -> tuple[str, ...]:
        return tuple(op for op, _ in self.procedures)

    def arg_domain(self, op: str) -> tuple[Val, ...]:
        return self._procs[op].arg_domain

    def initial_eps(self) -> tuple:
        return tuple(b.init for b in self.bases)

    def variables(self, op: Optional[str] = None) -> frozenset[str]:
        """Identifiers assigned anywhere in one procedure (or in all of them)."""
        procs = [self._procs[op]] if op is not None else list(self._procs.values())
        out: set[str] = set()
        for p in procs:
            for s in p.statements:
                out |= assigned_vars(s)
        return frozenset(out)


# --- frames ----------------------------------------------------------------

Registers = tuple[tuple[str, Val], ...]  # sorted by name


def regs_get(regs: Registers, x: str) -> Optional[Val]:
    for k, v in regs:
        if k == x:
            return v
    return None


def regs_set(regs: Registers, x: str, v: Val) -> Registers:
    out = [(k, w) for k, w in regs if k != x]
    out.append((x, v))
    out.sort(key=lambda kv: kv[0])
    return tuple(out)


def regs(**kw: Val) -> Registers:
    return tuple(sorted(kw.items()))


@dataclass(frozen=True)
class Frame:
    op: str
    pc: int
    arg: Val
    registers: Registers = ()


@dataclass(frozen=True)
class Next:
    frame: Frame


@dataclass(frozen=True)
class ReturnSig:
    v: Val


ProcedureSignal = Union[Next, ReturnSig]

# --- traversal helpers -----------------------------------------------------


def assigned_vars(s: Statement) -> set[str]:
    if isinstance(s, Assign):
        return {s.x}
    if isinstance(s, Seq):
        return assigned_vars(s.s1) | assigned_vars(s.s2)
    if isinstance(s, If):
        return assigned_vars(s.s1) | assigned_vars(s.s2)
    return set()


def term_children(e: Term) -> tuple[Term, ...]:
    if isinstance(e, (ProjL, ProjR, Not)):
        return (e.e,)
    if isinstance(e, (BinOp, MkPair)):
        return (e.e1, e.e2)
    if isinstance(e, InvokeTerm):
        return (e.arg,)
    return ()


def statement_terms(s: Statement) -> tuple[Term, ...]:
    if isinstance(s, (Assign, Return)):
        return (s.e,)
    if isinstance(s, If):
        return (s.e,) + statement_terms(s.s1) + statement_terms(s.s2)
    if isinstance(s, Seq):
        return statement_terms(s.s1) + statement_terms(s.s2)
    if isinstance(s, InvokeStmt):
        return (s.arg,)
    return ()


def iter_subterms(e: Term):
    yield e
    for c in term_children(e):
        yield from iter_subterms(c)


def iter_substatements(s: Statement):
    yield s
    if isinstance(s, Seq):
        yield from iter_substatements(s.s1)
        yield from iter_substatements(s.s2)
    elif isinstance(s, If):
        yield from iter_substatements(s.s1)
        yield from iter_substatements(s.s2)
