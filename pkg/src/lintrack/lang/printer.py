"""Pretty-printer producing source that parses back to an equal Implementation."""

from __future__ import annotations

from lintrack.core import QueueType, UNIT, _fmt_set
from lintrack.lang.syntax import (
    ArgRef,
    Assign,
    BinOp,
    BoolLit,
    Goto,
    If,
    Implementation,
    IntLit,
    InvokeStmt,
    InvokeTerm,
    MkPair,
    Not,
    ProjL,
    ProjR,
    Return,
    Seq,
    UnitLit,
    Var,
)


def format_term(e) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, IntLit):
        return str(e.n)
    if isinstance(e, BoolLit):
        return "true" if e.b else "false"
    if isinstance(e, UnitLit):
        return "unit"
    if isinstance(e, ArgRef):
        return "Arg"
    if isinstance(e, ProjL):
        return f"fst({format_term(e.e)})"
    if isinstance(e, ProjR):
        return f"snd({format_term(e.e)})"
    if isinstance(e, BinOp):
        return f"({format_term(e.e1)} {e.op} {format_term(e.e2)})"
    if isinstance(e, Not):
        return f"!{format_term(e.e)}"
    if isinstance(e, MkPair):
        return f"pair({format_term(e.e1)}, {format_term(e.e2)})"
    if isinstance(e, InvokeTerm):
        return f"invoke {e.obj}.{e.op}({format_term(e.arg)})"
    raise TypeError(f"not a term: {e!r}")


def _seq_items(s) -> list:
    # right spine only; a left-nested Seq becomes its own atomic block
    items = []
    while isinstance(s, Seq):
        items.append(s.s1)
        s = s.s2
    items.append(s)
    return items


def _inner(s) -> str:
    """Statement inside an atomic block."""
    if isinstance(s, Seq):
        return "atomic { " + "; ".join(_inner(x) for x in _seq_items(s)) + " }"
    if isinstance(s, If):
        return (
            f"if {format_term(s.e)} {{ "
            + "; ".join(_inner(x) for x in _seq_items(s.s1))
            + " } else { "
            + "; ".join(_inner(x) for x in _seq_items(s.s2))
            + " }"
        )
    return _simple(s)


def _simple(s) -> str:
    if isinstance(s, Assign):
        return f"{s.x} := {format_term(s.e)}"
    if isinstance(s, Return):
        return f"return {format_term(s.e)}"
    if isinstance(s, Goto):
        return f"goto {s.n}"
    if isinstance(s, InvokeStmt):
        return f"invoke {s.obj}.{s.op}({format_term(s.arg)})"
    raise TypeError(f"not a simple statement: {s!r}")


def format_line(s) -> str:
    """One top-level procedure line."""
    if isinstance(s, If):
        if isinstance(s.s1, Goto) and isinstance(s.s2, Goto):
            return f"if {format_term(s.e)} {{ goto {s.s1.n} }} else {{ goto {s.s2.n} }}"
        return "atomic { " + _inner(s) + " }"
    if isinstance(s, Seq):
        return "atomic { " + "; ".join(_inner(x) for x in _seq_items(s)) + " }"
    return _simple(s)


def format_type(t, init) -> str:
    if isinstance(t, QueueType):
        return f"queue({_fmt_set(t.domain)}, {t.capacity})"
    return f"{t.kind}({_fmt_set(t.domain)}, {init})"


def pretty_print(impl: Implementation) -> str:
    out = [f"object {impl.name} implements {format_type(impl.spec, impl.init)} uses {{"]
    for b in impl.bases:
        out.append(f"  {b.name} : {format_type(b.type, b.init)}")
    out.append("}")
    for op, proc in impl.procedures:
        dom = "unit" if proc.arg_domain == (UNIT,) else _fmt_set(proc.arg_domain)
        out.append("")
        out.append(f"proc {op}({dom}) {{")
        for i, s in enumerate(proc.statements):
            out.append(f"  {format_line(s)};  # {i}")
        out.append("}")
    return "\n".join(out) + "\n"
