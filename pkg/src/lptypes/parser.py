"""Readers for programs, type rule files and type expressions."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .terms import CONS, NIL, Compound, FnSym, StrLit, Term, Var, head_symbol, num
from .types import (
    PRIM_BASES,
    RESERVED,
    ONE,
    ZERO,
    And,
    Con,
    ConScheme,
    Not,
    Or,
    Param,
    Prim,
    RuleSet,
    TypeDomainError,
    TypeRule,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


@dataclass
class Token:
    kind: str  # var, atom, int, float, str, punct, end, eof
    text: str
    line: int
    col: int
    layout_before: bool = False


_SYMCH = "+-*/\\^<>=~:.?@#&$"
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*|/\*.*?\*/)
  | (?P<float>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<qatom>'(?:[^'\\]|\\.|'')*')
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<punct>[()\[\],|!;{}])
  | (?P<sym>[+\-*/\\^<>=~:.?@#&$]+)
    """,
    re.VERBOSE | re.DOTALL,
)


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    layout = True
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            layout = True
        else:
            if kind == "sym" and s == "." and (m.end() >= len(text) or text[m.end()].isspace()
                                              or text[m.end()] == "%"):
                kind = "end"
            elif kind == "sym" and s.endswith(".") and len(s) > 1 and (
                    m.end() >= len(text) or text[m.end()].isspace()):
                # e.g. "X = a+." is not supported; split trailing end token
                tokens.append(Token("atom", s[:-1], line, col, layout))
                kind, s, col = "end", ".", col + len(s) - 1
                layout = False
            if kind == "qatom":
                kind, s = "atom", s[1:-1].replace("''", "'").replace("\\'", "'")
                tokens.append(Token(kind, s, line, col, layout))
            elif kind == "sym":
                tokens.append(Token("atom", s, line, col, layout))
            else:
                tokens.append(Token(kind, s, line, col, layout))
            layout = False
        nl = s.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            line_start = pos + s.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, True))
    return tokens


# priority, type
INFIX = {
    ":-": (1200, "xfx"), "-->": (1200, "xfx"),
    ";": (1100, "xfy"), "->": (1050, "xfy"), ",": (1000, "xfy"),
    "=": (700, "xfx"), "\\=": (700, "xfx"), "==": (700, "xfx"), "\\==": (700, "xfx"),
    "@<": (700, "xfx"), "@>": (700, "xfx"), "@=<": (700, "xfx"), "@>=": (700, "xfx"),
    "=<@": (700, "xfx"), "is": (700, "xfx"), "=:=": (700, "xfx"), "=\\=": (700, "xfx"),
    "<": (700, "xfx"), ">": (700, "xfx"), "=<": (700, "xfx"), ">=": (700, "xfx"),
    "=..": (700, "xfx"), ":": (200, "xfy"),
    "+": (500, "yfx"), "-": (500, "yfx"), "*": (400, "yfx"), "/": (400, "yfx"),
    "//": (400, "yfx"), "mod": (400, "yfx"),
}
PREFIX = {":-": (1200, "fx"), "\\+": (900, "fy"), "-": (200, "fy")}


class TermReader:
    """Operator-precedence reader for clause text."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.varmap: dict = {}
        self.anon = itertools.count()

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text):
        if self.tok.text != text or self.tok.kind not in ("punct", "atom", "end"):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def at_eof(self) -> bool:
        return self.tok.kind == "eof"

    def read_clause(self):
        """Read one term terminated by '.'; returns (term, variable names, line)."""
        self.varmap = {}
        line = self.tok.line
        t = self.parse(1200)
        if self.tok.kind != "end":
            self.error(f"expected '.', found {self.tok.text or 'end of input'!r}")
        self.advance()
        return t, dict(self.varmap), line

    def _is_term_start(self) -> bool:
        t = self.tok
        if t.kind in ("eof", "end"):
            return False
        if t.kind == "punct":
            return t.text in "([{!"
        if t.kind == "atom" and t.text in INFIX and t.text not in PREFIX:
            return False
        return True

    def parse(self, max_prec: int):
        left, left_prec = self.parse_primary(max_prec)
        return self.parse_infix(left, left_prec, max_prec)

    def parse_infix(self, left, left_prec, max_prec):
        while True:
            t = self.tok
            name = t.text
            if t.kind == "punct" and name in (",", "|"):
                name = "," if name == "," else None
            elif t.kind != "atom":
                name = None
            if name is None or name not in INFIX:
                return left
            prec, typ = INFIX[name]
            if prec > max_prec:
                return left
            left_max = prec - 1 if typ[0] == "x" else prec
            right_max = prec - 1 if typ[2] == "x" else prec
            if left_prec > left_max:
                return left
            self.advance()
            right = self.parse(right_max)
            left, left_prec = Compound(name, (left, right)), prec

    def parse_primary(self, max_prec):
        t = self.advance()
        if t.kind == "int":
            return num(int(t.text)), 0
        if t.kind == "float":
            return num(float(t.text)), 0
        if t.kind == "str":
            return StrLit(t.text[1:-1]), 0
        if t.kind == "var":
            if t.text == "_":
                return Var(f"_{next(self.anon)}"), 0
            v = self.varmap.setdefault(t.text, Var(t.text))
            return v, 0
        if t.kind == "punct":
            if t.text == "(":
                inner = self.parse(1200)
                self.expect(")")
                return inner, 0
            if t.text == "[":
                if self.tok.text == "]" and self.tok.kind == "punct":
                    self.advance()
                    return self._maybe_call("[]", t), 0
                items = [self.parse(999)]
                while self.tok.kind == "punct" and self.tok.text == ",":
                    self.advance()
                    items.append(self.parse(999))
                tail = NIL
                if self.tok.kind == "punct" and self.tok.text == "|":
                    self.advance()
                    tail = self.parse(999)
                self.expect("]")
                out = tail
                for item in reversed(items):
                    out = Compound(CONS, (item, out))
                return out, 0
            if t.text in ("!", ";"):
                return Compound(t.text), 0
            if t.text == "{":
                inner = self.parse(1200)
                self.expect("}")
                return Compound("{}", (inner,)), 0
            self.error(f"unexpected {t.text!r}", t)
        if t.kind == "atom":
            name = t.text
            nxt = self.tok
            if nxt.kind == "punct" and nxt.text == "(" and not nxt.layout_before:
                return self._maybe_call(name, t), 0
            if name == "-" and nxt.kind in ("int", "float") and not nxt.layout_before:
                self.advance()
                val = int(nxt.text) if nxt.kind == "int" else float(nxt.text)
                return num(-val), 0
            if name in PREFIX and self._is_term_start():
                prec, typ = PREFIX[name]
                if prec > max_prec:
                    prec = 999
                arg_max = prec - 1 if typ == "fx" else prec
                arg = self.parse(arg_max)
                return Compound(name, (arg,)), prec
            prec = INFIX.get(name, (0,))[0] if name in INFIX else 0
            return Compound(name), (prec if prec <= max_prec else 0)
        if t.kind == "end":
            self.error("unexpected end of clause", t)
        self.error("unexpected end of input", t)

    def _maybe_call(self, name, tok):
        if self.tok.kind == "punct" and self.tok.text == "(" and not self.tok.layout_before:
            self.advance()
            args = [self.parse(999)]
            while self.tok.kind == "punct" and self.tok.text == ",":
                self.advance()
                args.append(self.parse(999))
            self.expect(")")
            return Compound(name, tuple(args))
        return Compound(name)


def read_terms(text: str) -> list:
    r = TermReader(text)
    out = []
    while not r.at_eof():
        out.append(r.read_clause())
    return out


def parse_term(text: str) -> Term:
    r = TermReader(text.strip() + " .")
    t, _, _ = r.read_clause()
    if not r.at_eof():
        r.error("trailing input")
    return t


# ---------------------------------------------------------------- rules


def _scheme(t: Term, line: int):
    if isinstance(t, Var):
        return Param(t.name)
    if isinstance(t, Compound):
        if t.name in PRIM_BASES:
            raise ParseError(f"primitive type {t.name} cannot appear in a rule", line)
        params = []
        for a in t.args:
            if not isinstance(a, Var):
                raise ParseError(f"nested type scheme {t} is not allowed", line)
            params.append(a.name)
        return ConScheme(t.name, tuple(params))
    raise ParseError(f"bad type scheme {t}", line)


def parse_rules(text: str) -> RuleSet:
    """Read `ctor(B1,...) -> f(args).` rules and optional `:- atoms(...)`."""
    rules, atoms = [], []
    for t, _, line in read_terms(text):
        if isinstance(t, Compound) and t.name == ":-" and len(t.args) == 1:
            d = t.args[0]
            if isinstance(d, Compound) and d.name == "atoms":
                for a in d.args:
                    if not (isinstance(a, Compound) and not a.args):
                        raise ParseError(f"atoms/N expects atoms, got {a}", line)
                    atoms.append(a.name)
                continue
            raise ParseError(f"unknown directive {d}", line)
        if not (isinstance(t, Compound) and t.name == "->" and len(t.args) == 2):
            raise ParseError("expected a rule of the form head -> rhs", line)
        head, rhs = t.args
        if isinstance(head, Var) or not isinstance(head, Compound):
            raise ParseError("rule head must be a type constructor", line)
        if head.name in RESERVED:
            raise ParseError(f"{head.name} is reserved", line)
        params = []
        for a in head.args:
            if not isinstance(a, Var):
                raise ParseError("rule head arguments must be type parameters", line)
            params.append(a.name)
        if len(set(params)) != len(params):
            raise ParseError(f"repeated parameter in rule head {head}", line)
        if isinstance(rhs, Var):
            raise ParseError("rule right-hand side must start with a function symbol", line)
        sym = head_symbol(rhs)
        args = tuple(_scheme(a, line) for a in rhs.args) if isinstance(rhs, Compound) else ()
        for a in args:
            for p in ((a.name,) if isinstance(a, Param) else a.params):
                if p not in params:
                    raise ParseError(f"parameter {p} does not occur in the head", line)
        try:
            rules.append(TypeRule(head.name, tuple(params), sym, args))
        except TypeDomainError as e:
            raise ParseError(str(e), line) from None
    try:
        return RuleSet(rules, atoms)
    except TypeDomainError as e:
        raise ParseError(str(e)) from None


# ---------------------------------------------------------------- type expressions


_TYPE_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*|\d+)|(?P<p>[(),~\[\]]))")


def parse_type(text: str, rules: RuleSet | None = None):
    """Read a type expression; `or`/`and` may be infix or prefix."""
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TYPE_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character in type at {pos + 1}: {text[pos:pos + 10]!r}", 1, pos + 1)
        toks.append(m.group("name") or m.group("p"))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take(expected=None):
        nonlocal i
        t = toks[i]
        if expected is not None and t != expected:
            raise ParseError(f"expected {expected!r} in type, found {t!r}")
        i += 1
        return t

    def disjunction():
        left = conjunction()
        while peek() == "or":
            take()
            left = Or(left, conjunction())
        return left

    def conjunction():
        left = unary()
        while peek() == "and":
            take()
            left = And(left, unary())
        return left

    def unary():
        if peek() == "~":
            take()
            return Not(unary())
        return primary()

    def primary():
        t = take()
        if t == "(":
            inner = disjunction()
            take(")")
            return inner
        if t is None or t in (")", ","):
            raise ParseError(f"unexpected {t!r} in type")
        if t == "0":
            return ZERO
        if t == "1":
            return ONE
        args = []
        if peek() == "(":
            take()
            args.append(disjunction())
            while peek() == ",":
                take()
                args.append(disjunction())
            take(")")
        if t in ("or", "and") and len(args) == 2:
            return (Or if t == "or" else And)(*args)
        if t in PRIM_BASES:
            if args:
                raise ParseError(f"primitive type {t} takes no arguments")
            return Prim(t)
        if t[0].isdigit():
            raise ParseError(f"unexpected number {t} in type")
        if rules is not None:
            try:
                rules.check_ctor(t, len(args))
            except TypeDomainError as e:
                raise ParseError(str(e)) from None
        return Con(t, tuple(args))

    out = disjunction()
    if peek() is not None:
        raise ParseError(f"trailing input in type: {peek()!r}")
    return out


def split_top(text: str, sep: str = ",") -> list:
    """Split on separators that are not nested in brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_bindings(text: str, rules: RuleSet | None = None) -> dict:
    """Read `X:type, Y:type` into a name-to-type mapping."""
    out = {}
    for part in split_top(text):
        if ":" not in part:
            raise ParseError(f"expected Var:type, got {part!r}")
        name, typ = part.split(":", 1)
        name = name.strip()
        if not re.fullmatch(r"[A-Z_][A-Za-z0-9_]*", name):
            raise ParseError(f"bad variable name {name!r}")
        out[name] = parse_type(typ, rules)
    return out
