"""Text front end for the implementation language.

Grammar (``#`` starts a comment that runs to the end of the line)::

    file      := decl*
    decl      := "domain" NAME "=" valueset
               | "object" NAME "implements" type "uses" "{" (NAME ":" type [","|";"])* "}"
               | "proc" NAME "(" argdomain ")" block
    type      := NAME "(" param ("," param)* ")"      # register(D, 0), rcas(D, 0), queue(D, 2)
    param     := valueset | value
    argdomain := valueset | "unit"
    valueset  := "{" [value ("," value)*] "}" | NAME
    value     := ["-"] INT | "true" | "false" | "unit" | "pair" "(" value "," value ")"

    block     := "{" [stmt (";" stmt)* [";"]] "}"
    stmt      := NAME ":=" term
               | "invoke" NAME "." NAME "(" term ")"
               | "return" term
               | "goto" INT
               | "if" term block ["else" block]
               | "atomic" block
    term      := or-term, with precedence  ||  <  &&  <  == <  <  + -  <  *  <  ! (prefix)
    atom      := NAME | INT | "true" | "false" | "unit" | "Arg"
               | "fst" "(" term ")" | "snd" "(" term ")" | "pair" "(" term "," term ")"
               | "invoke" NAME "." NAME "(" term ")" | "(" term ")"

Each top-level statement of a procedure is one line, numbered from 0.  An
``if`` whose branches are not both a single ``goto`` is lowered into goto
form: a conditional jump line, the then-lines, a ``goto`` past the else
branch (when there is one), and the else-lines.  ``goto n`` always names a
line number of the lowered procedure.  An ``atomic { ... }`` block is a
single line: its statements run in one step as a right-nested ``Seq``, and
``if`` inside it stays a structured conditional (``else`` is then
mandatory).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from lintrack import core
from lintrack.core import UNIT, Bool, Int, Pair, Val
from lintrack.lang.syntax import (
    ArgRef,
    Assign,
    BaseObject,
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
    Procedure,
    ProjL,
    ProjR,
    Return,
    Seq,
    UnitLit,
    Var,
    iter_substatements,
    iter_subterms,
    statement_terms,
)


class DSLError(Exception):
    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.col = col


class ParseError(DSLError):
    pass


class ValidationError(DSLError):
    pass


KEYWORDS = {
    "domain", "object", "implements", "uses", "proc", "if", "else", "goto",
    "invoke", "return", "atomic", "true", "false", "unit", "Arg", "pair", "fst", "snd",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>:=|==|&&|\|\||[{}(),;:.+\-*<!=])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # "int" | "name" | "kw" | "op" | "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            if kind == "name" and text in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, text, line, pos - line_start + 1))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# Structured if, before lowering to goto form.
@dataclass
class _SrcIf:
    cond: object
    then: list
    orelse: list
    tok: Token


class Parser:
    def __init__(self, source: str, domains: Optional[dict[str, tuple[Val, ...]]] = None):
        self.toks = tokenize(source)
        self.i = 0
        self.overrides = dict(domains or {})
        self.domains: dict[str, tuple[Val, ...]] = {}

    # -- token helpers --

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        t = tok or self.tok
        return ParseError(msg, t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("kw", "op") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self) -> Token:
        if self.tok.kind != "name":
            found = self.tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        if self.tok.kind != "int":
            raise self.error(f"expected integer, found {self.tok.text!r}")
        n = int(self.tok.text)
        self.i += 1
        return n

    # -- values --

    def value(self) -> Val:
        t = self.tok
        if self.accept("-"):
            return self._int_val(-self.integer(), t)
        if t.kind == "int":
            return self._int_val(self.integer(), t)
        if self.accept("true"):
            return Bool(True)
        if self.accept("false"):
            return Bool(False)
        if self.accept("unit"):
            return UNIT
        if self.accept("pair"):
            self.expect("(")
            a = self.value()
            self.expect(",")
            b = self.value()
            self.expect(")")
            return Pair(a, b)
        raise self.error(f"expected a value, found {t.text!r}")

    def _int_val(self, n: int, tok: Token) -> Int:
        if not core.in_int_range(n, core.INT_BITS):
            raise self.error(f"integer literal {n} outside {core.INT_BITS}-bit range", tok)
        return Int(n)

    def valueset(self) -> tuple[Val, ...]:
        if self.tok.kind == "name":
            t = self.name()
            if t.text not in self.domains:
                raise self.error(f"unknown domain {t.text!r}", t)
            return self.domains[t.text]
        self.expect("{")
        items = []
        if not self.at("}"):
            items.append(self.value())
            while self.accept(","):
                items.append(self.value())
        self.expect("}")
        return core.vals(items)

    def type_expr(self):
        t = self.name()
        if t.text not in core.BUILTINS:
            raise self.error(f"unknown object type {t.text!r} (known: {', '.join(sorted(core.BUILTINS))})", t)
        self.expect("(")
        params = [self.param()]
        while self.accept(","):
            params.append(self.param())
        self.expect(")")
        if not isinstance(params[0], tuple):
            raise self.error(f"{t.text}: first parameter must be a value set", t)
        rest = params[1:]
        if t.text == "queue":
            if len(rest) != 1 or not isinstance(rest[0], Int):
                raise self.error("queue(domain, capacity) expects an integer capacity", t)
            rest = [rest[0].n]
        elif len(rest) > 1 or any(isinstance(p, tuple) for p in rest):
            raise self.error(f"{t.text}(domain[, init]) takes at most one initial value", t)
        try:
            return core.BUILTINS[t.text](params[0], *rest)
        except core.DomainError as exc:
            raise self.error(str(exc), t) from None

    def param(self):
        if self.at("{") or self.tok.kind == "name":
            return self.valueset()
        return self.value()

    # -- terms --

    def term(self):
        return self._binary(0)

    _LEVELS = (("||",), ("&&",), ("==", "<"), ("+", "-"), ("*",))

    def _binary(self, level: int):
        if level == len(self._LEVELS):
            return self._unary()
        lhs = self._binary(level + 1)
        while self.tok.kind == "op" and self.tok.text in self._LEVELS[level]:
            op = self.tok.text
            self.i += 1
            rhs = self._binary(level + 1)
            lhs = BinOp(op, lhs, rhs)
        return lhs

    def _unary(self):
        if self.accept("!"):
            return Not(self._unary())
        if self.at("-") and self.toks[self.i + 1].kind == "int":
            t = self.tok
            self.i += 1
            return IntLit(self._int_val(-self.integer(), t).n)
        return self._atom()

    def _atom(self):
        t = self.tok
        if t.kind == "name":
            self.i += 1
            return Var(t.text)
        if t.kind == "int":
            return IntLit(self._int_val(self.integer(), t).n)
        if self.accept("true"):
            return BoolLit(True)
        if self.accept("false"):
            return BoolLit(False)
        if self.accept("unit"):
            return UnitLit()
        if self.accept("Arg"):
            return ArgRef()
        if self.accept("fst") or self.accept("snd"):
            self.expect("(")
            e = self.term()
            self.expect(")")
            return ProjL(e) if t.text == "fst" else ProjR(e)
        if self.accept("pair"):
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return MkPair(a, b)
        if self.at("invoke"):
            obj, op, arg = self._invocation()
            return InvokeTerm(obj, op, arg)
        if self.accept("("):
            e = self.term()
            self.expect(")")
            return e
        raise self.error(f"expected a term, found {t.text or 'end of input'!r}")

    def _invocation(self):
        self.expect("invoke")
        obj = self.name().text
        self.expect(".")
        op = self.name().text
        self.expect("(")
        arg = self.term()
        self.expect(")")
        return obj, op, arg

    # -- statements --

    def block(self, atomic: bool) -> list:
        self.expect("{")
        items = []
        while not self.at("}"):
            items.append(self.stmt(atomic))
            closed = self.toks[self.i - 1].text == "}"  # `;` is optional after a block
            if not self.accept(";") and not self.at("}") and not closed:
                raise self.error(f"expected ';' or '}}', found {self.tok.text!r}")
        self.expect("}")
        return items

    def stmt(self, atomic: bool):
        t = self.tok
        if t.kind == "name":
            self.i += 1
            self.expect(":=")
            return Assign(t.text, self.term())
        if self.at("invoke"):
            obj, op, arg = self._invocation()
            return InvokeStmt(obj, op, arg)
        if self.accept("return"):
            return Return(self.term())
        if self.accept("goto"):
            return Goto(self.integer())
        if self.accept("atomic"):
            body = self.block(atomic=True)
            if not body:
                raise self.error("empty atomic block", t)
            return _seq(body)
        if self.accept("if"):
            cond = self.term()
            then = self.block(atomic)
            orelse = self.block(atomic) if self.accept("else") else []
            if atomic:
                if not then or not orelse:
                    raise self.error("if inside an atomic block needs non-empty then and else branches", t)
                return If(cond, _seq(then), _seq(orelse))
            return _SrcIf(cond, then, orelse, t)
        raise self.error(f"expected a statement, found {t.text or 'end of input'!r}")

    # -- declarations --

    def parse(self) -> Implementation:
        header = None
        procs: dict[str, tuple[tuple[Val, ...], list, Token]] = {}
        while self.tok.kind != "eof":
            t = self.tok
            if self.accept("domain"):
                name = self.name().text
                self.expect("=")
                values = self.valueset()
                self.domains[name] = self.overrides.get(name, values)
            elif self.accept("object"):
                if header is not None:
                    raise self.error("only one object declaration is allowed", t)
                name = self.name().text
                self.expect("implements")
                spec, init = self.type_expr()
                self.expect("uses")
                self.expect("{")
                bases = []
                while not self.at("}"):
                    bt = self.name()
                    self.expect(":")
                    btype, binit = self.type_expr()
                    if any(b.name == bt.text for b in bases):
                        raise self.error(f"duplicate base object {bt.text!r}", bt)
                    bases.append(BaseObject(bt.text, btype, binit))
                    self.accept(",") or self.accept(";")
                self.expect("}")
                header = (name, spec, init, tuple(bases), t)
            elif self.accept("proc"):
                pt = self.name()
                self.expect("(")
                dom = (UNIT,) if self.accept("unit") else self.valueset()
                self.expect(")")
                body = self.block(atomic=False)
                if pt.text in procs:
                    raise self.error(f"duplicate procedure {pt.text!r}", pt)
                procs[pt.text] = (dom, body, pt)
            else:
                raise self.error(f"expected 'domain', 'object' or 'proc', found {t.text!r}")
        unknown = set(self.overrides) - set(self.domains)
        if unknown:
            raise ValidationError(f"domain override for undeclared domain(s): {', '.join(sorted(unknown))}")
        if header is None:
            raise ValidationError("missing object declaration")
        name, spec, init, bases, _ = header
        procedures = []
        for op in spec.ops:
            if op not in procs:
                raise ValidationError(f"no procedure for operation {op!r} of {spec.kind}")
            dom, body, pt = procs.pop(op)
            stmts = tuple(lower(body, 0))
            if not stmts:
                raise ValidationError(f"procedure {op} is empty", pt.line, pt.col)
            procedures.append((op, Procedure(stmts, dom)))
        if procs:
            extra = next(iter(procs.values()))[2]
            raise ValidationError(f"procedure {extra.text!r} is not an operation of {spec.kind}", extra.line, extra.col)
        impl = Implementation(name, spec, init, bases, tuple(procedures))
        validate(impl)
        return impl


def _seq(stmts: list):
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = Seq(s, out)
    return out


def _is_goto_form(item: _SrcIf) -> bool:
    return (
        len(item.then) == 1 and isinstance(item.then[0], Goto)
        and len(item.orelse) == 1 and isinstance(item.orelse[0], Goto)
    )


def lower(items: list, base: int) -> list:
    """Flatten structured ``if`` into conditional jumps; ``base`` is the first line number."""
    out: list = []
    for item in items:
        if not isinstance(item, _SrcIf):
            out.append(item)
            continue
        if _is_goto_form(item):
            out.append(If(item.cond, item.then[0], item.orelse[0]))
            continue
        n = base + len(out)
        then_lines = lower(item.then, n + 1)
        if item.orelse:
            # no join jump when the then-branch cannot fall through
            join = not (then_lines and isinstance(then_lines[-1], (Return, Goto)))
            else_start = n + 1 + len(then_lines) + join
            else_lines = lower(item.orelse, else_start)
            end = else_start + len(else_lines)
            out.append(If(item.cond, Goto(n + 1), Goto(else_start)))
            out.extend(then_lines)
            if join:
                out.append(Goto(end))
            out.extend(else_lines)
        else:
            end = n + 1 + len(then_lines)
            out.append(If(item.cond, Goto(n + 1), Goto(end)))
            out.extend(then_lines)
    return out


def validate(impl: Implementation) -> None:
    """Static checks: base references, goto ranges, variables, argument domains."""
    for op, proc in impl.procedures:
        allowed = set(impl.spec.arg_domain(op))
        bad = [v for v in proc.arg_domain if v not in allowed]
        if bad:
            raise ValidationError(f"procedure {op}: argument {bad[0]} outside the domain of {impl.spec.describe()}")
        assigned = impl.variables(op)
        for line, stmt in enumerate(proc.statements):
            for s in iter_substatements(stmt):
                if isinstance(s, Goto) and not 0 <= s.n < len(proc):
                    raise ValidationError(f"procedure {op}, line {line}: goto {s.n} out of range (procedure has {len(proc)} lines)")
                if isinstance(s, InvokeStmt):
                    _check_invoke(impl, op, line, s.obj, s.op)
            for t in statement_terms(stmt):
                for e in iter_subterms(t):
                    if isinstance(e, InvokeTerm):
                        _check_invoke(impl, op, line, e.obj, e.op)
                    elif isinstance(e, Var) and e.name not in assigned:
                        raise ValidationError(f"procedure {op}, line {line}: undeclared variable {e.name!r}")


def _check_invoke(impl: Implementation, op: str, line: int, obj: str, bop: str) -> None:
    if obj not in impl.base_index:
        raise ValidationError(f"procedure {op}, line {line}: unknown base object {obj!r}")
    btype = impl.bases[impl.base_index[obj]].type
    if bop not in btype.ops:
        raise ValidationError(f"procedure {op}, line {line}: {obj} ({btype.kind}) has no operation {bop!r}")


def parse_implementation(source: str, domains: Optional[dict[str, object]] = None) -> Implementation:
    """Parse and validate DSL source.

    ``domains`` overrides named ``domain`` declarations, e.g. ``{"D": [0, 1, 2]}``.
    """
    overrides = {k: core.vals(v) for k, v in (domains or {}).items()}
    return Parser(source, overrides).parse()


def load_implementation(path, domains=None) -> Implementation:
    with open(path, encoding="utf-8") as fh:
        return parse_implementation(fh.read(), domains)


def parse_value_set(text: str) -> tuple[Val, ...]:
    """Parse ``{0, 1}`` or a bare ``0, 1`` list of DSL values."""
    text = text.strip()
    if not text.startswith("{"):
        text = "{" + text + "}"
    p = Parser(text)
    values = p.valueset()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after value set")
    return values
