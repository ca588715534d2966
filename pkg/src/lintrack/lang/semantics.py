"""Big-step evaluation of terms and statements, and single-frame stepping.

Evaluation is set-valued: every function returns all outcomes, which differ
only when a base object has a nondeterministic transition.  Outcomes are
listed in a deterministic order and without duplicates.

Term evaluation is left to right and strictly typed.  Binary operators
evaluate both operands (no short-circuiting), so a base invocation inside
either operand always happens.
"""

from __future__ import annotations

from typing import Any

from lintrack import core
from lintrack.core import FALSE, TRUE, UNIT, Bool, Int, Pair, Val
from lintrack.lang.syntax import (
    CONTINUE,
    ArgRef,
    Assign,
    BinOp,
    BoolLit,
    Continue,
    Frame,
    Goto,
    GotoSig,
    If,
    Implementation,
    IntLit,
    InvokeStmt,
    InvokeTerm,
    MkPair,
    Next,
    Not,
    ProjL,
    ProjR,
    Registers,
    Ret,
    Return,
    ReturnSig,
    Seq,
    UnitLit,
    Var,
    regs_get,
    regs_set,
)

Eps = tuple  # base-object states, ordered like Implementation.bases


class EvalError(Exception):
    """A statement or term has no applicable semantics.

    ``kind`` is one of ``unbound``, ``type``, ``overflow``, ``base-stuck``
    or ``pc-range``.
    """

    KINDS = ("unbound", "type", "overflow", "base-stuck", "pc-range")

    def __init__(self, kind: str, message: str):
        assert kind in self.KINDS, kind
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message


def _dedup(items):
    return list(dict.fromkeys(items))


def _int(v: Val, op: str) -> int:
    if not isinstance(v, Int):
        raise EvalError("type", f"operator {op} expects integers, got {v}")
    return v.n


def _bool(v: Val, op: str) -> bool:
    if not isinstance(v, Bool):
        raise EvalError("type", f"operator {op} expects booleans, got {v}")
    return v.b


def _checked(n: int) -> Int:
    if not core.in_int_range(n, core.INT_BITS):
        raise EvalError("overflow", f"{n} exceeds {core.INT_BITS}-bit range")
    return Int(n)


def apply_binop(op: str, a: Val, b: Val) -> Val:
    if op == "+":
        return _checked(_int(a, op) + _int(b, op))
    if op == "-":
        return _checked(_int(a, op) - _int(b, op))
    if op == "*":
        return _checked(_int(a, op) * _int(b, op))
    if op == "<":
        return TRUE if _int(a, op) < _int(b, op) else FALSE
    if op == "==":
        return TRUE if a == b else FALSE
    if op == "&&":
        x, y = _bool(a, op), _bool(b, op)
        return TRUE if (x and y) else FALSE
    if op == "||":
        x, y = _bool(a, op), _bool(b, op)
        return TRUE if (x or y) else FALSE
    raise EvalError("type", f"unknown operator {op}")


def invoke_base(impl: Implementation, proc: int, eps: Eps, obj: str, op: str, arg: Val) -> list[tuple[Eps, Val]]:
    i = impl.base_index[obj]
    base = impl.bases[i]
    outcomes = base.type.delta(eps[i], proc, op, arg)
    if not outcomes:
        raise EvalError("base-stuck", f"{obj}.{op}({arg}) has no transition from state {base.type.format_state(eps[i])}")
    return [(eps[:i] + (s,) + eps[i + 1 :], r) for s, r in outcomes]


def eval_term(impl: Implementation, proc: int, arg: Val, regs: Registers, eps: Eps, e) -> list[tuple[Eps, Val]]:
    """All ``(eps', value)`` outcomes of evaluating term ``e``."""
    if isinstance(e, Var):
        v = regs_get(regs, e.name)
        if v is None:
            raise EvalError("unbound", f"variable {e.name} read before assignment")
        return [(eps, v)]
    if isinstance(e, IntLit):
        return [(eps, _checked(e.n))]
    if isinstance(e, BoolLit):
        return [(eps, TRUE if e.b else FALSE)]
    if isinstance(e, UnitLit):
        return [(eps, UNIT)]
    if isinstance(e, ArgRef):
        return [(eps, arg)]
    if isinstance(e, (ProjL, ProjR)):
        out = []
        for eps1, v in eval_term(impl, proc, arg, regs, eps, e.e):
            if not isinstance(v, Pair):
                raise EvalError("type", f"projection of non-pair {v}")
            out.append((eps1, v.first if isinstance(e, ProjL) else v.second))
        return _dedup(out)
    if isinstance(e, Not):
        return _dedup(
            (eps1, FALSE if _bool(v, "!") else TRUE)
            for eps1, v in eval_term(impl, proc, arg, regs, eps, e.e)
        )
    if isinstance(e, (BinOp, MkPair)):
        out = []
        for eps1, a in eval_term(impl, proc, arg, regs, eps, e.e1):
            for eps2, b in eval_term(impl, proc, arg, regs, eps1, e.e2):
                v = Pair(a, b) if isinstance(e, MkPair) else apply_binop(e.op, a, b)
                out.append((eps2, v))
        return _dedup(out)
    if isinstance(e, InvokeTerm):
        out = []
        for eps1, a in eval_term(impl, proc, arg, regs, eps, e.arg):
            out.extend(invoke_base(impl, proc, eps1, e.obj, e.op, a))
        return _dedup(out)
    raise TypeError(f"not a term: {e!r}")


def eval_statement(impl: Implementation, proc: int, arg: Val, regs: Registers, eps: Eps, s) -> list[tuple[Registers, Eps, Any]]:
    """All ``(registers', eps', signal)`` outcomes of statement ``s``.

    ``Seq`` runs its second half only when the first yields ``Continue``;
    both ``Ret`` and ``GotoSig`` transfer control out of the line.
    """
    if isinstance(s, Assign):
        return _dedup((regs_set(regs, s.x, v), eps1, CONTINUE) for eps1, v in eval_term(impl, proc, arg, regs, eps, s.e))
    if isinstance(s, Return):
        return _dedup((regs, eps1, Ret(v)) for eps1, v in eval_term(impl, proc, arg, regs, eps, s.e))
    if isinstance(s, Goto):
        return [(regs, eps, GotoSig(s.n))]
    if isinstance(s, InvokeStmt):
        outcomes = []
        for eps1, a in eval_term(impl, proc, arg, regs, eps, s.arg):
            outcomes.extend(invoke_base(impl, proc, eps1, s.obj, s.op, a))
        return _dedup((regs, eps2, CONTINUE) for eps2, _ in outcomes)
    if isinstance(s, If):
        out = []
        for eps1, c in eval_term(impl, proc, arg, regs, eps, s.e):
            branch = s.s1 if _bool(c, "if") else s.s2
            out.extend(eval_statement(impl, proc, arg, regs, eps1, branch))
        return _dedup(out)
    if isinstance(s, Seq):
        out = []
        for regs1, eps1, sig in eval_statement(impl, proc, arg, regs, eps, s.s1):
            if isinstance(sig, Continue):
                out.extend(eval_statement(impl, proc, arg, regs1, eps1, s.s2))
            else:
                out.append((regs1, eps1, sig))
        return _dedup(out)
    raise TypeError(f"not a statement: {s!r}")


def step_frame(impl: Implementation, proc: int, eps: Eps, f: Frame) -> list[tuple[Eps, Any]]:
    """Execute the line at ``f.pc``; returns ``(eps', Next(frame) | ReturnSig(v))`` outcomes."""
    body = impl.procedure(f.op).statements
    if not 0 <= f.pc < len(body):
        raise EvalError("pc-range", f"{f.op} has no line {f.pc} (length {len(body)})")
    out = []
    for regs1, eps1, sig in eval_statement(impl, proc, f.arg, f.registers, eps, body[f.pc]):
        if isinstance(sig, Continue):
            out.append((eps1, Next(Frame(f.op, f.pc + 1, f.arg, regs1))))
        elif isinstance(sig, GotoSig):
            out.append((eps1, Next(Frame(f.op, sig.line, f.arg, regs1))))
        else:
            out.append((eps1, ReturnSig(sig.v)))
    return _dedup(out)
