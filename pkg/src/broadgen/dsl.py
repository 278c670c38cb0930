"""A small declarative language for signatures, rubrics, broad rubrics, broad
signatures, reduced broad signatures, families of sets and budgets.

Grammar (version 1)::

    doc        := def*
    def        := 'signature' NAME '{' (INT ':' arity ';')* '}'   (the last ';' is optional)
                | 'rubric' NAME '{' rule* '}'
                | 'broadrubric' NAME '{' ('basic' NAME ';' | 'trigger' expr '=>' NAME ';')* '}'
                | 'broadsig' NAME '{' ('default' NAME ';' | 'at' expr '=>' NAME ';')* '}'
                | 'reducedsig' NAME '{' ('default' arity ';' | 'at' expr '=>' arity ';')* '}'
                | 'famofsets' NAME '{' (INT ':' expr ';')* '}'
                | 'budget' NAME '{' (('depth' | 'elements' | 'fuel') INT ';')* '}'
    rule       := 'rule' INT 'arity' arity '=>' result ';'
    result     := 'family' NAME 'from' expr ['to' expr] ':' expr ['max' INT]
                | '(' [expr (',' expr)*] ')'
    arity      := '{' [INT (',' INT)*] '}' | INT
    expr       := term (('+' | '-') term)*
    term       := atom ('*' atom)*
    atom       := INT | NAME | '(' expr ')' | 'Start' | 'Begin'
                | 'Build' '(' expr ',' expr ',' expr ')' | 'Make' '(' expr ',' expr ')'
                | '<' expr ',' expr '>' | '[' [expr '->' expr (',' ...)*] ']'
                | '{' [expr (',' expr)*] '}'

Naturals denote von Neumann numerals. Inside a rule, ``m<k>`` names the input
at position k and the family variable names the index. Comments run from '#'
to the end of the line. ``->`` may also be written as the arrow character.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import ArityMismatch, DslSyntaxError, NotANumeral, UnresolvedName

GRAMMAR_VERSION = 1

KEYWORDS = {
    "signature", "rubric", "broadrubric", "broadsig", "reducedsig", "famofsets", "budget",
    "rule", "arity", "family", "from", "to", "max", "basic", "trigger", "default", "at",
    "depth", "elements", "fuel", "Start", "Begin", "Build", "Make",
}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<int>\d+) | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<sym>=>|->|↦|[{}()\[\]<>,;:+\-*])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'name', 'sym', 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind in ("int", "name", "sym"):
            t = "->" if m.group() == "↦" else m.group()
            out.append(Token(kind, t, line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- AST ---------------------------------------------------------------------------

_POS = dict(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Any
    right: Any
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class Atom:
    """Start or Begin (both the empty set)."""
    name: str
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class BuildLit:
    x: Any
    i: Any
    args: Any
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class MakeLit:
    x: Any
    args: Any
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class PairLit:
    a: Any
    b: Any
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class TupleLit:
    entries: tuple  # of (key expr, value expr)
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class SetLit:
    items: tuple
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class FamilyExpr:
    var: str
    lower: Any
    upper: Any
    value: Any
    cap: int | None
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class ListExpr:
    items: tuple
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class RuleDef:
    index: int
    arity: tuple
    result: Any
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class SignatureDef:
    name: str
    entries: tuple  # of (symbol, arity tuple)
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class RubricDef:
    name: str
    rules: tuple
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class BroadRubricDef:
    name: str
    basic: str | None
    triggers: tuple  # of (expr, rubric name)
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class BroadSigDef:
    name: str
    default: str | None
    entries: tuple  # of (expr, signature name)
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class ReducedSigDef:
    name: str
    default: tuple | None
    entries: tuple  # of (expr, arity tuple)
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class FamOfSetsDef:
    name: str
    entries: tuple  # of (index, expr)
    pos: tuple = field(**_POS)


@dataclass(frozen=True)
class BudgetDef:
    name: str
    settings: tuple  # of (key, int)
    pos: tuple = field(**_POS)


DEF_KINDS = {
    SignatureDef: "signature", RubricDef: "rubric", BroadRubricDef: "broadrubric",
    BroadSigDef: "broadsig", ReducedSigDef: "reducedsig", FamOfSetsDef: "famofsets",
    BudgetDef: "budget",
}


# -- parser ------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise DslSyntaxError(f"{msg}, found {found}", t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "name")

    def take(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def maybe(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def end_item(self) -> None:
        """Items are separated by ';'; the last one may omit it."""
        if not self.maybe(";") and not self.at("}"):
            self.fail("expected ';'")

    def int_(self) -> int:
        if self.tok.kind != "int":
            self.fail("expected a natural number")
        v = int(self.tok.text)
        self.i += 1
        return v

    def name(self) -> str:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            self.fail("expected a name")
        self.i += 1
        return t.text

    def pos(self) -> tuple:
        return (self.tok.line, self.tok.col)

    # definitions

    def doc(self) -> "SpecDoc":
        defs = []
        seen = set()
        while self.tok.kind != "eof":
            d = self.definition()
            if d.name in seen:
                raise DslSyntaxError(f"{d.name!r} is defined twice", *d.pos)
            seen.add(d.name)
            defs.append(d)
        return SpecDoc(tuple(defs))

    def definition(self):
        p = self.pos()
        kw = self.tok.text
        handlers = {
            "signature": self.signature, "rubric": self.rubric,
            "broadrubric": self.broadrubric, "broadsig": self.broadsig,
            "reducedsig": self.reducedsig, "famofsets": self.famofsets, "budget": self.budget,
        }
        if self.tok.kind != "name" or kw not in handlers:
            self.fail("expected a definition keyword")
        self.i += 1
        name = self.name()
        self.take("{")
        d = handlers[kw](name, p)
        self.take("}")
        return d

    def signature(self, name, p):
        entries = []
        while not self.at("}"):
            sym = self.int_()
            self.take(":")
            entries.append((sym, self.arity()))
            self.end_item()
        return SignatureDef(name, tuple(entries), p)

    def arity(self) -> tuple:
        if self.tok.kind == "int":
            return tuple(range(self.int_()))
        self.take("{")
        ks = []
        while not self.at("}"):
            ks.append(self.int_())
            if not self.maybe(","):
                break
        self.take("}")
        if len(set(ks)) != len(ks):
            self.fail("repeated position in arity")
        return tuple(sorted(ks))

    def rubric(self, name, p):
        rules = []
        while not self.at("}"):
            rp = self.pos()
            self.take("rule")
            idx = self.int_()
            self.take("arity")
            ar = self.arity()
            self.take("=>")
            rules.append(RuleDef(idx, ar, self.result(), rp))
            self.end_item()
        if len({r.index for r in rules}) != len(rules):
            raise DslSyntaxError(f"rubric {name!r} repeats a rule index", *p)
        return RubricDef(name, tuple(rules), p)

    def result(self):
        p = self.pos()
        if self.maybe("family"):
            var = self.name()
            self.take("from")
            lower = self.expr()
            upper = self.expr() if self.maybe("to") else None
            self.take(":")
            value = self.expr()
            cap = self.int_() if self.maybe("max") else None
            return FamilyExpr(var, lower, upper, value, cap, p)
        self.take("(")
        items = []
        while not self.at(")"):
            items.append(self.expr())
            if not self.maybe(","):
                break
        self.take(")")
        return ListExpr(tuple(items), p)

    def broadrubric(self, name, p):
        basic, triggers = None, []
        while not self.at("}"):
            if self.maybe("basic"):
                if basic is not None:
                    self.fail("second basic rubric")
                basic = self.name()
            else:
                self.take("trigger")
                key = self.expr()
                self.take("=>")
                triggers.append((key, self.name()))
            self.end_item()
        return BroadRubricDef(name, basic, tuple(triggers), p)

    def broadsig(self, name, p):
        default, entries = None, []
        while not self.at("}"):
            if self.maybe("default"):
                default = self.name()
            else:
                self.take("at")
                key = self.expr()
                self.take("=>")
                entries.append((key, self.name()))
            self.end_item()
        return BroadSigDef(name, default, tuple(entries), p)

    def reducedsig(self, name, p):
        default, entries = None, []
        while not self.at("}"):
            if self.maybe("default"):
                default = self.arity()
            else:
                self.take("at")
                key = self.expr()
                self.take("=>")
                entries.append((key, self.arity()))
            self.end_item()
        return ReducedSigDef(name, default, tuple(entries), p)

    def famofsets(self, name, p):
        entries = []
        while not self.at("}"):
            idx = self.int_()
            self.take(":")
            entries.append((idx, self.expr()))
            self.end_item()
        return FamOfSetsDef(name, tuple(entries), p)

    def budget(self, name, p):
        settings = []
        while not self.at("}"):
            if self.tok.text not in ("depth", "elements", "fuel"):
                self.fail("expected depth, elements or fuel")
            key = self.tok.text
            self.i += 1
            settings.append((key, self.int_()))
            self.end_item()
        return BudgetDef(name, tuple(settings), p)

    # expressions

    def expr(self):
        left = self.term()
        while self.at("+") or self.at("-"):
            p = self.pos()
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.term(), p)
        return left

    def term(self):
        left = self.atom()
        while self.at("*"):
            p = self.pos()
            self.i += 1
            left = BinOp("*", left, self.atom(), p)
        return left

    def atom(self):
        t = self.tok
        p = self.pos()
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text), p)
        if t.kind == "name":
            if t.text in ("Start", "Begin"):
                self.i += 1
                return Atom(t.text, p)
            if t.text == "Build":
                self.i += 1
                self.take("(")
                x = self.expr()
                self.take(",")
                i = self.expr()
                self.take(",")
                a = self.expr()
                self.take(")")
                return BuildLit(x, i, a, p)
            if t.text == "Make":
                self.i += 1
                self.take("(")
                x = self.expr()
                self.take(",")
                a = self.expr()
                self.take(")")
                return MakeLit(x, a, p)
            return Var(self.name(), p)
        if self.maybe("("):
            e = self.expr()
            self.take(")")
            return e
        if self.maybe("<"):
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take(">")
            return PairLit(a, b, p)
        if self.maybe("["):
            entries = []
            while not self.at("]"):
                k = self.expr()
                self.take("->")
                entries.append((k, self.expr()))
                if not self.maybe(","):
                    break
            self.take("]")
            return TupleLit(tuple(entries), p)
        if self.maybe("{"):
            items = []
            while not self.at("}"):
                items.append(self.expr())
                if not self.maybe(","):
                    break
            self.take("}")
            return SetLit(tuple(items), p)
        self.fail("expected an expression")


def parse_expr(text: str):
    p = _Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail("unexpected text after expression")
    return e


# -- documents and pretty-printing -------------------------------------------------

@dataclass(frozen=True)
class SpecDoc:
    defs: tuple = ()

    def get(self, name: str, kind: str | None = None, pos: tuple = (0, 0)):
        for d in self.defs:
            if d.name == name:
                if kind is not None and DEF_KINDS[type(d)] != kind:
                    raise UnresolvedName(f"{name!r} is a {DEF_KINDS[type(d)]}, not a {kind}", *pos)
                return d
        raise UnresolvedName(f"no definition named {name!r}", *pos)

    def names(self, kind: str | None = None) -> list[str]:
        return [d.name for d in self.defs if kind is None or DEF_KINDS[type(d)] == kind]


def parse_spec(text: str) -> SpecDoc:
    """Parse and check a document: names resolve and rules only use their inputs."""
    doc = _Parser(text).doc()
    check(doc)
    return doc


_PREC = {"+": 1, "-": 1, "*": 2}


def pretty_expr(e) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, BinOp):
        prec = _PREC[e.op]
        left = pretty_expr(e.left)
        if isinstance(e.left, BinOp) and _PREC[e.left.op] < prec:
            left = f"({left})"
        right = pretty_expr(e.right)
        if isinstance(e.right, BinOp) and _PREC[e.right.op] <= prec:
            right = f"({right})"
        return f"{left}{e.op}{right}" if e.op == "*" else f"{left} {e.op} {right}"
    if isinstance(e, BuildLit):
        return f"Build({pretty_expr(e.x)}, {pretty_expr(e.i)}, {pretty_expr(e.args)})"
    if isinstance(e, MakeLit):
        return f"Make({pretty_expr(e.x)}, {pretty_expr(e.args)})"
    if isinstance(e, PairLit):
        return f"<{pretty_expr(e.a)}, {pretty_expr(e.b)}>"
    if isinstance(e, TupleLit):
        return "[" + ", ".join(f"{pretty_expr(k)} -> {pretty_expr(v)}" for k, v in e.entries) + "]"
    if isinstance(e, SetLit):
        return "{" + ", ".join(pretty_expr(x) for x in e.items) + "}"
    raise TypeError(f"not an expression: {e!r}")


def _arity(ks: tuple) -> str:
    return "{" + ",".join(str(k) for k in ks) + "}"


def _result(r) -> str:
    if isinstance(r, ListExpr):
        return "(" + ", ".join(pretty_expr(x) for x in r.items) + ")"
    out = f"family {r.var} from {pretty_expr(r.lower)}"
    if r.upper is not None:
        out += f" to {pretty_expr(r.upper)}"
    out += f" : {pretty_expr(r.value)}"
    if r.cap is not None:
        out += f" max {r.cap}"
    return out


def pretty(doc: SpecDoc) -> str:
    """Canonical text; parse_spec(pretty(doc)) == doc."""
    blocks = []
    for d in doc.defs:
        kind = DEF_KINDS[type(d)]
        lines = [f"{kind} {d.name} {{"]
        if isinstance(d, SignatureDef):
            lines += [f"  {s}: {_arity(k)};" for s, k in d.entries]
        elif isinstance(d, RubricDef):
            lines += [f"  rule {r.index} arity {_arity(r.arity)} => {_result(r.result)};"
                      for r in d.rules]
        elif isinstance(d, BroadRubricDef):
            if d.basic is not None:
                lines.append(f"  basic {d.basic};")
            lines += [f"  trigger {pretty_expr(k)} => {n};" for k, n in d.triggers]
        elif isinstance(d, BroadSigDef):
            if d.default is not None:
                lines.append(f"  default {d.default};")
            lines += [f"  at {pretty_expr(k)} => {n};" for k, n in d.entries]
        elif isinstance(d, ReducedSigDef):
            if d.default is not None:
                lines.append(f"  default {_arity(d.default)};")
            lines += [f"  at {pretty_expr(k)} => {_arity(a)};" for k, a in d.entries]
        elif isinstance(d, FamOfSetsDef):
            lines += [f"  {i}: {pretty_expr(e)};" for i, e in d.entries]
        elif isinstance(d, BudgetDef):
            lines += [f"  {k} {v};" for k, v in d.settings]
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# -- checking ------------------------------------------------------------------------

def _vars(e, out: list) -> list:
    """All Var nodes in an expression."""
    if isinstance(e, Var):
        out.append(e)
    elif isinstance(e, BinOp):
        _vars(e.left, out)
        _vars(e.right, out)
    elif isinstance(e, BuildLit):
        for sub in (e.x, e.i, e.args):
            _vars(sub, out)
    elif isinstance(e, MakeLit):
        _vars(e.x, out)
        _vars(e.args, out)
    elif isinstance(e, PairLit):
        _vars(e.a, out)
        _vars(e.b, out)
    elif isinstance(e, TupleLit):
        for k, v in e.entries:
            _vars(k, out)
            _vars(v, out)
    elif isinstance(e, SetLit):
        for x in e.items:
            _vars(x, out)
    return out


_INPUT = re.compile(r"^m(\d+)$")


def _check_rule_vars(r: RuleDef) -> None:
    res = r.result
    exprs = list(res.items) if isinstance(res, ListExpr) else [res.lower, res.value] + (
        [res.upper] if res.upper is not None else [])
    index_var = None if isinstance(res, ListExpr) else res.var
    for e in exprs:
        for v in _vars(e, []):
            if v.name == index_var:
                if e is res.lower or e is res.upper:
                    raise UnresolvedName(f"index {v.name!r} used in its own bound", *v.pos)
                continue
            m = _INPUT.match(v.name)
            if m is None:
                raise UnresolvedName(f"unknown variable {v.name!r}", *v.pos)
            if int(m.group(1)) not in r.arity:
                raise ArityMismatch(
                    f"{v.name} refers to position {m.group(1)}, not in arity {_arity(r.arity)}",
                    *v.pos)


def _check_const(e) -> None:
    for v in _vars(e, []):
        raise UnresolvedName(f"unknown name {v.name!r} in a constant", *v.pos)


def check(doc: SpecDoc) -> None:
    for d in doc.defs:
        if isinstance(d, RubricDef):
            for r in d.rules:
                _check_rule_vars(r)
        elif isinstance(d, BroadRubricDef):
            if d.basic is not None:
                doc.get(d.basic, "rubric", d.pos)
            for k, n in d.triggers:
                _check_const(k)
                doc.get(n, "rubric", k.pos)
        elif isinstance(d, BroadSigDef):
            if d.default is not None:
                doc.get(d.default, "signature", d.pos)
            for k, n in d.entries:
                _check_const(k)
                doc.get(n, "signature", k.pos)
        elif isinstance(d, ReducedSigDef):
            for k, _ in d.entries:
                _check_const(k)
        elif isinstance(d, FamOfSetsDef):
            for _, e in d.entries:
                _check_const(e)


# -- evaluation and desugaring ---------------------------------------------------------

class _NotNatural(Exception):
    pass


def evaluate(e, env: dict | None = None):
    """Value of an expression: an int while arithmetic is pending, else an HfSet."""
    from . import encodings as enc
    from .hfset import intern

    env = env or {}

    def as_set(v):
        return enc.von_neumann(v) if isinstance(v, int) else v

    def as_int(v):
        if isinstance(v, int):
            return v
        try:
            return enc.to_nat(v)
        except NotANumeral:
            raise _NotNatural from None

    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if e.name not in env:
            raise UnresolvedName(f"unknown name {e.name!r}", *e.pos)
        return env[e.name]
    if isinstance(e, Atom):
        return enc.START
    if isinstance(e, BinOp):
        a, b = as_int(evaluate(e.left, env)), as_int(evaluate(e.right, env))
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b
    if isinstance(e, BuildLit):
        return enc.build(as_set(evaluate(e.x, env)), as_set(evaluate(e.i, env)),
                         as_set(evaluate(e.args, env)))
    if isinstance(e, MakeLit):
        return enc.make(as_set(evaluate(e.x, env)), as_set(evaluate(e.args, env)))
    if isinstance(e, PairLit):
        return enc.pair(as_set(evaluate(e.a, env)), as_set(evaluate(e.b, env)))
    if isinstance(e, TupleLit):
        return enc.tup({as_set(evaluate(k, env)): as_set(evaluate(v, env)) for k, v in e.entries})
    if isinstance(e, SetLit):
        return intern(as_set(evaluate(x, env)) for x in e.items)
    raise TypeError(f"not an expression: {e!r}")


def thing(e, env: dict | None = None):
    """Evaluate to a kernel set; negative integers are an error."""
    from .encodings import von_neumann
    v = evaluate(e, env)
    if isinstance(v, int):
        if v < 0:
            raise ValueError("negative natural")
        return von_neumann(v)
    return v


def _arity_set(ks: tuple):
    from .encodings import von_neumann
    from .hfset import intern
    return intern(von_neumann(k) for k in ks)


def _rule(r: RuleDef):
    from . import encodings as enc
    from .genengine import EMPTY_FAMILY, Explicit, Indexed, Rule

    positions = {k: enc.von_neumann(k) for k in r.arity}
    res = r.result

    def env_of(args: dict) -> dict:
        return {f"m{k}": args[v] for k, v in positions.items()}

    def value_at(env: dict, e):
        try:
            v = evaluate(e, env)
        except _NotNatural:
            return None
        if isinstance(v, int):
            return enc.von_neumann(v) if v >= 0 else None
        return v

    if isinstance(res, ListExpr):
        def apply(args):
            env = env_of(args)
            out = {}
            for j, item in enumerate(res.items):
                v = value_at(env, item)
                if v is None:
                    return EMPTY_FAMILY
                out[enc.von_neumann(j)] = v
            return Explicit(out)
        return Rule(_arity_set(r.arity), apply, name=f"rule {r.index}")

    def apply(args):
        env = env_of(args)
        try:
            lo = evaluate(res.lower, env)
            hi = evaluate(res.upper, env) if res.upper is not None else None
            if not isinstance(lo, int) or (hi is not None and not isinstance(hi, int)):
                return EMPTY_FAMILY
        except _NotNatural:
            return EMPTY_FAMILY
        lo = max(lo, 0)

        def val(p):
            n = p if isinstance(p, int) else len(p)
            return value_at({**env, res.var: n}, res.value)

        def ok(v) -> bool:
            if v is None:
                return False
            return res.cap is None or (enc.is_numeral(v) and len(v) <= res.cap)

        def contains(p) -> bool:
            if not enc.is_numeral(p):
                return False
            n = len(p)
            return n >= lo and (hi is None or n <= hi) and ok(val(n))

        enumerate_ = None
        if hi is not None:
            def enumerate_():
                return [enc.von_neumann(n) for n in range(lo, hi + 1) if ok(val(n))]
        return Indexed(contains, val, enumerate_)

    return Rule(_arity_set(r.arity), apply, name=f"rule {r.index}")


class Desugarer:
    """Turns definitions into engine objects, caching each by name."""

    def __init__(self, doc: SpecDoc):
        self.doc = doc
        self.cache: dict = {}

    def _memo(self, name: str, make: Callable):
        if name not in self.cache:
            self.cache[name] = make()
        return self.cache[name]

    def signature(self, name: str, pos=(0, 0)):
        from .encodings import von_neumann
        from .terms import Signature
        d = self.doc.get(name, "signature", pos)
        return self._memo(name, lambda: Signature(
            {von_neumann(s): _arity_set(k) for s, k in d.entries}))

    def rubric(self, name: str, pos=(0, 0)):
        from .encodings import von_neumann
        from .genengine import Rubric
        d = self.doc.get(name, "rubric", pos)
        return self._memo(name, lambda: Rubric({von_neumann(r.index): _rule(r) for r in d.rules}))

    def broadrubric(self, name: str, pos=(0, 0)):
        from .genengine import EMPTY_RUBRIC, BroadRubric
        d = self.doc.get(name, "broadrubric", pos)

        def make():
            basic = self.rubric(d.basic, d.pos) if d.basic is not None else EMPTY_RUBRIC
            return BroadRubric(basic, {thing(k): self.rubric(n, k.pos) for k, n in d.triggers})
        return self._memo(name, make)

    def broadsig(self, name: str, pos=(0, 0)):
        from .broadnum import BroadSignature
        from .terms import EMPTY_SIGNATURE
        d = self.doc.get(name, "broadsig", pos)

        def make():
            default = self.signature(d.default, d.pos) if d.default is not None else EMPTY_SIGNATURE
            return BroadSignature({thing(k): self.signature(n, k.pos) for k, n in d.entries},
                                  default)
        return self._memo(name, make)

    def reducedsig(self, name: str, pos=(0, 0)):
        from .broadnum import ReducedBroadSignature
        from .hfset import EMPTY
        d = self.doc.get(name, "reducedsig", pos)

        def make():
            default = _arity_set(d.default) if d.default is not None else EMPTY
            return ReducedBroadSignature({thing(k): _arity_set(a) for k, a in d.entries}, default)
        return self._memo(name, make)

    def famofsets(self, name: str, pos=(0, 0)):
        from .encodings import von_neumann
        d = self.doc.get(name, "famofsets", pos)
        return self._memo(name, lambda: {von_neumann(i): thing(e) for i, e in d.entries})

    def budget(self, name: str, pos=(0, 0)) -> dict:
        d = self.doc.get(name, "budget", pos)
        return dict(d.settings)


# -- derivation text -------------------------------------------------------------------

def parse_derivation(text: str):
    """Parse '(i g p)', '(basic i g p)' or '(trigger m i g p)', where g is
    '[k -> d, ...]' (commas optional) and i, k, p are expressions."""
    p = _Parser(text)
    d = _derivation(p)
    if p.tok.kind != "eof":
        p.fail("unexpected text after derivation")
    return d


def _derivation(p: _Parser):
    from . import encodings as enc
    p.take("(")
    head = p.tok.text if p.tok.kind == "name" else None
    if head in ("basic", "trigger"):
        p.i += 1
    elif head == "d":
        p.i += 1
        head = None
    m = _derivation(p) if head == "trigger" else None
    i = thing(p.atom())
    g = _subderivations(p)
    idx = thing(p.atom())
    p.take(")")
    if head == "basic":
        return enc.basic(i, g, idx)
    if head == "trigger":
        return enc.trigger(m, i, g, idx)
    return enc.ntuple(i, g, idx)


def _subderivations(p: _Parser):
    from . import encodings as enc
    p.take("[")
    entries = {}
    while not p.at("]"):
        k = thing(p.atom())
        p.take("->")
        entries[k] = _derivation(p)
        p.maybe(",")
    p.take("]")
    return enc.tup(entries)
