"""Programs, program points and the control-flow graph between them."""
from __future__ import annotations

from dataclasses import dataclass, field

from .parser import ParseError, read_terms
from .terms import Compound, Term, Var, apply, render_term, variables


class LoadError(ValueError):
    pass


@dataclass(frozen=True)
class Literal:
    atom: Compound
    negated: bool = False
    builtin: bool = False

    @property
    def key(self) -> tuple:
        return (self.atom.name, len(self.atom.args))

    def __str__(self):
        return ("\\+ " if self.negated else "") + render_term(self.atom)


@dataclass
class Clause:
    head: Compound | None  # None for the query
    body: tuple
    index: int  # scope used to keep clause variables apart
    line: int = 0
    points: tuple = ()

    @property
    def is_query(self) -> bool:
        return self.head is None

    def variables(self) -> list:
        acc = []
        if self.head is not None:
            variables(self.head, acc)
        for lit in self.body:
            variables(lit.atom, acc)
        return acc

    def __str__(self):
        body = ", ".join(str(l) for l in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{render_term(self.head)}."
        return f"{render_term(self.head)} :- {body}."


@dataclass
class Program:
    clauses: list  # in source order, including the query

    @property
    def query(self) -> Clause:
        return next(c for c in self.clauses if c.is_query)

    def predicates(self) -> dict:
        out: dict = {}
        for c in self.clauses:
            if c.head is not None:
                out.setdefault((c.head.name, len(c.head.args)), []).append(c)
        return out

    def variables(self) -> list:
        return [v for c in self.clauses for v in c.variables()]

    def query_var(self, name: str) -> Var:
        q = self.query
        v = Var(name, q.index)
        if v not in q.variables():
            raise LoadError(f"variable {name} does not occur in the query")
        return v


BUILTINS = {
    ("abort", 0), ("fail", 0), ("false", 0),
    ("!", 0), ("@<", 2), ("@>", 2), ("@=<", 2), ("=<@", 2), ("@>=", 2), ("\\==", 2), ("\\=", 2),
    ("display", 1), ("ground", 1), ("listing", 0), ("listing", 1), ("nl", 0), ("nonvar", 1),
    ("portray_clause", 1), ("print", 1), ("read", 1), ("repeat", 0), ("true", 0), ("write", 1),
    ("writeq", 1),
    ("compound", 1), ("var", 1), ("atom", 1), ("atomic", 1), ("float", 1), ("erase", 1),
    ("integer", 1), ("tab", 1), ("number", 1), ("put", 1), ("string", 1),
    ("=", 2), ("==", 2), ("format", 1), ("format", 2), ("format", 3),
    ("<", 2), (">", 2), ("=<", 2), (">=", 2), ("=:=", 2), ("=\\=", 2), ("is", 2),
    ("length", 2), ("compare", 3), ("name", 2),
}


def _standardize(t: Term, scope: int) -> Term:
    return apply({v: Var(v.name, scope) for v in variables(t)}, t)


def _body_literals(t: Term, line: int) -> list:
    if isinstance(t, Compound) and t.name == "," and len(t.args) == 2:
        return _body_literals(t.args[0], line) + _body_literals(t.args[1], line)
    negated = False
    if isinstance(t, Compound) and t.name == "\\+" and len(t.args) == 1:
        negated, t = True, t.args[0]
    if isinstance(t, Var):
        raise ParseError("variable goals are not supported", line)
    if not isinstance(t, Compound):
        raise ParseError(f"{render_term(t)} is not a callable goal", line)
    if t.name in (";", "->") and len(t.args) == 2:
        raise ParseError("disjunction and if-then-else are not supported", line)
    if t.name == "\\+":
        raise ParseError("nested negation is not supported", line)
    return [Literal(t, negated, (t.name, len(t.args)) in BUILTINS)]


def load_program(text: str) -> Program:
    """Parse clauses, standardize them apart and check the query."""
    clauses = []
    for index, (t, _, line) in enumerate(read_terms(text), start=1):
        t = _standardize(t, index)
        if isinstance(t, Compound) and t.name == ":-" and len(t.args) == 1:
            clauses.append(Clause(None, tuple(_body_literals(t.args[0], line)), index, line))
        elif isinstance(t, Compound) and t.name == ":-" and len(t.args) == 2:
            head = t.args[0]
            if not isinstance(head, Compound):
                raise ParseError("clause head must be an atom", line)
            clauses.append(Clause(head, tuple(_body_literals(t.args[1], line)), index, line))
        elif isinstance(t, Compound):
            clauses.append(Clause(t, (), index, line))
        else:
            raise ParseError(f"{render_term(t)} is not a clause", line)
    queries = [c for c in clauses if c.is_query]
    if len(queries) != 1:
        raise ParseError(f"expected exactly one query, found {len(queries)}")
    prog = Program(clauses)
    preds = prog.predicates()
    for c in clauses:
        if c.head is not None and (c.head.name, len(c.head.args)) in BUILTINS:
            raise LoadError(f"line {c.line}: cannot redefine built-in {c.head.name}/{len(c.head.args)}")
        for lit in c.body:
            if not lit.builtin and lit.key not in preds:
                raise LoadError(f"line {c.line}: call to undefined predicate {lit.key[0]}/{lit.key[1]}")
    return prog


# ---------------------------------------------------------------- control flow


INITIAL, CALL, RET, NF, BIP = "initial", "call", "ret", "nf", "bip"


@dataclass
class Cfg:
    program: Program
    kind: dict = field(default_factory=dict)  # point -> kind
    clause_of: dict = field(default_factory=dict)  # point -> Clause
    position: dict = field(default_factory=dict)  # point -> index of next literal
    edges: set = field(default_factory=set)  # (source, target, label)
    initial: int = 0

    @property
    def points(self) -> list:
        return sorted(self.kind)

    def atom_at(self, p: int):
        """Literal to the right of p, or None at a clause end."""
        c = self.clause_of[p]
        i = self.position[p]
        return c.body[i] if i < len(c.body) else None

    def head_at(self, p: int):
        return self.clause_of[p].head

    def pred(self, p: int) -> int:
        return p - 1

    def incoming(self, q: int) -> list:
        return sorted((s for s, t, _ in self.edges if t == q))

    def outgoing(self, p: int) -> list:
        return sorted({t for s, t, _ in self.edges if s == p})

    def is_end(self, p: int) -> bool:
        return self.atom_at(p) is None

    def dependencies(self, q: int) -> set:
        """Points whose value the equation of q reads."""
        deps = set(self.incoming(q))
        if self.kind[q] in (RET, NF, BIP):
            deps.add(self.pred(q))
        return deps

    def dependents(self) -> dict:
        out = {p: set() for p in self.kind}
        for q in self.kind:
            for p in self.dependencies(q):
                out[p].add(q)
        return out


def build_cfg(program: Program) -> Cfg:
    cfg = Cfg(program)
    n = 0
    for c in program.clauses:
        pts = []
        for i in range(len(c.body) + 1):
            n += 1
            pts.append(n)
            cfg.clause_of[n] = c
            cfg.position[n] = i
            if i == 0:
                cfg.kind[n] = INITIAL if c.is_query else CALL
            else:
                lit = c.body[i - 1]
                cfg.kind[n] = BIP if lit.builtin else (NF if lit.negated else RET)
        c.points = tuple(pts)
        if c.is_query:
            cfg.initial = pts[0]
    preds = program.predicates()
    for c in program.clauses:
        for i, lit in enumerate(c.body):
            p, after = c.points[i], c.points[i + 1]
            if lit.builtin:
                cfg.edges.add((p, after, "bip"))
                continue
            for callee in preds[lit.key]:
                cfg.edges.add((p, callee.points[0], "call"))
                if not lit.negated:
                    cfg.edges.add((callee.points[-1], after, "ret"))
            if lit.negated:
                cfg.edges.add((p, after, "nf"))
    return cfg
