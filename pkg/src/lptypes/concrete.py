"""Bounded SLD execution that records the substitution at every program point.

Used to check analysis results against real executions. Cut is treated as
true, so more paths are explored than a real Prolog system would take.
"""
from __future__ import annotations

import itertools

from .program import Cfg, Clause, Program, build_cfg
from .terms import Compound, NumLit, Term, Var, apply, compose, mgu, num, term_class, variables


class StepLimit(Exception):
    pass


class ConcreteRunner:
    def __init__(self, program: Program, max_depth: int = 6, max_records: int = 5000):
        self.program = program
        self.cfg: Cfg = build_cfg(program)  # numbers the program points
        self.max_depth = max_depth
        self.max_records = max_records
        self.preds = program.predicates()
        self.fresh = itertools.count(1_000_000)
        self.observed: dict = {}
        self.records = 0
        self.cutoff = False

    def run(self, initial: dict | None = None) -> dict:
        """Execute the query; returns point -> list of substitutions over clause variables."""
        q = self.program.query
        act = {v: v for v in q.variables()}
        subst = {}
        for name, t in (initial or {}).items():
            subst[Var(name, q.index)] = t
        try:
            for _ in self._body(q, act, 0, subst, 0):
                pass
        except StepLimit:
            pass
        return self.observed

    def _record(self, point: int, act: dict, subst: dict):
        self.records += 1
        if self.records > self.max_records:
            raise StepLimit()
        theta = {x: apply(subst, v) for x, v in act.items()}
        self.observed.setdefault(point, []).append(theta)

    def _activate(self, c: Clause) -> dict:
        scope = next(self.fresh)
        return {v: Var(v.name, scope) for v in c.variables()}

    def _unify(self, subst, t1, t2):
        theta = mgu([(apply(subst, t1), apply(subst, t2))])
        if theta is None:
            return None
        return compose(theta, subst)

    def _body(self, c: Clause, act: dict, i: int, subst: dict, depth: int):
        self._record(c.points[i], act, subst)
        if i == len(c.body):
            yield subst
            return
        lit = c.body[i]
        atom = apply(act, lit.atom)
        if lit.builtin:
            for s in self._builtin(atom, subst):
                yield from self._body(c, act, i + 1, s, depth)
        elif lit.negated:
            saved = self.cutoff
            self.cutoff = False
            succeeded = next(iter(self._call(atom, subst, depth)), None) is not None
            incomplete = self.cutoff
            self.cutoff = saved or incomplete
            if not succeeded and not incomplete:
                yield from self._body(c, act, i + 1, subst, depth)
        else:
            for s in self._call(atom, subst, depth):
                yield from self._body(c, act, i + 1, s, depth)

    def _call(self, atom: Compound, subst: dict, depth: int):
        if depth >= self.max_depth:
            self.cutoff = True
            return
        for callee in self.preds[(atom.name, len(atom.args))]:
            act = self._activate(callee)
            s = self._unify(subst, atom, apply(act, callee.head))
            if s is not None:
                yield from self._body(callee, act, 0, s, depth + 1)

    def _builtin(self, atom: Compound, subst: dict):
        name, args = atom.name, [apply(subst, a) for a in atom.args]
        key = (name, len(args))
        if key in (("true", 0), ("!", 0), ("nl", 0), ("write", 1), ("print", 1), ("writeq", 1)):
            yield subst
        elif key in (("fail", 0), ("false", 0)):
            return
        elif key == ("=", 2):
            s = self._unify(subst, args[0], args[1])
            if s is not None:
                yield s
        elif key == ("\\=", 2):
            if mgu([(args[0], args[1])]) is None:
                yield subst
        elif key == ("==", 2):
            if args[0] == args[1]:
                yield subst
        elif key == ("\\==", 2):
            if args[0] != args[1]:
                yield subst
        elif key == ("var", 1):
            if isinstance(args[0], Var):
                yield subst
        elif key == ("nonvar", 1):
            if not isinstance(args[0], Var):
                yield subst
        elif key == ("compound", 1):
            if isinstance(args[0], Compound) and args[0].args:
                yield subst
        elif key[1] == 1 and name in ("atom", "integer", "float", "number", "atomic"):
            cls = term_class(args[0]) if not (isinstance(args[0], Compound) and args[0].args) else None
            allowed = {"atom": {"atom"}, "integer": {"integer"}, "float": {"float"},
                       "number": {"integer", "float"}, "atomic": {"atom", "integer", "float"}}[name]
            if cls in allowed:
                yield subst
        elif key == ("is", 2):
            v = evaluate(args[1])
            if v is not None:
                s = self._unify(subst, args[0], num(v))
                if s is not None:
                    yield s
        elif key[1] == 2 and name in ("<", ">", "=<", ">=", "=:=", "=\\="):
            a, b = evaluate(args[0]), evaluate(args[1])
            if a is not None and b is not None and _compare(name, a, b):
                yield subst
        else:
            raise NotImplementedError(f"concrete semantics of {name}/{len(args)}")


def evaluate(t: Term):
    """Value of an arithmetic expression, or None if it is not evaluable."""
    if isinstance(t, NumLit):
        return t.value
    if isinstance(t, Compound) and len(t.args) == 2 and t.name in ("+", "-", "*"):
        a, b = evaluate(t.args[0]), evaluate(t.args[1])
        if a is None or b is None:
            return None
        return {"+": a + b, "-": a - b, "*": a * b}[t.name]
    return None


def _compare(op, a, b) -> bool:
    return {"<": a < b, ">": a > b, "=<": a <= b, ">=": a >= b, "=:=": a == b, "=\\=": a != b}[op]
