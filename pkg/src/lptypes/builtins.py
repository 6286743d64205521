"""Abstract transfer functions for built-in predicates."""
from __future__ import annotations

from .decision import as_env
from .domain import meet, meet_all
from .propagation import solve, type_of, vts
from .terms import Compound, NumLit, Var, eq, mgu, variables
from .types import ONE, Con, Prim, RuleSet, disj_all

FAILING = {("abort", 0), ("fail", 0), ("false", 0)}
IDENTITY = {
    ("!", 0), ("@<", 2), ("@>", 2), ("@=<", 2), ("=<@", 2), ("@>=", 2), ("\\==", 2), ("\\=", 2),
    ("display", 1), ("ground", 1), ("listing", 0), ("listing", 1), ("nl", 0), ("nonvar", 1),
    ("portray_clause", 1), ("print", 1), ("read", 1), ("repeat", 0), ("true", 0), ("write", 1),
    ("writeq", 1),
}
ARITHMETIC = {"<", ">", "=<", ">=", "=:=", "=\\=", "is"}
CLASS_TESTS = {
    "atom": "atom", "atomic": "atomic", "float": "float", "erase": "integer",
    "integer": "integer", "tab": "integer", "number": "number", "string": "string",
}


def _list_of(rules: RuleSet, elem):
    """list(elem) if the rules define a unary list constructor, else 1."""
    if rules.arity.get("list") == 1:
        return Con("list", (elem,))
    return ONE


def _numeric(t, rules) -> frozenset:
    # an evaluated argument is a number, or an expression whose leaves are numbers
    if isinstance(t, Compound) and t.args:
        return meet_all(vts(Prim("number"), v, rules) for v in variables(t))
    return vts(Prim("number"), t, rules)


def transfer(atom: Compound, S, env) -> frozenset:
    """Effect of calling a built-in on a set of typings."""
    env = as_env(env)
    rules = env.rules
    key = (atom.name, len(atom.args))
    args = atom.args
    if key in FAILING:
        return frozenset()
    if key in IDENTITY:
        return frozenset(S)
    if key in (("=", 2), ("==", 2)):
        theta = mgu([(args[0], args[1])])
        if theta is None:
            return frozenset()
        return solve(eq(theta), S, rules)
    if key == ("var", 1):
        return frozenset(m for m in S if env.includes(type_of(args[0], m, rules), ONE))
    if key == ("compound", 1):
        return frozenset(m for m in S if not env.includes(Prim("atomic"), type_of(args[0], m, rules)))
    if key[1] == 1 and key[0] in CLASS_TESTS:
        return meet(S, vts(Prim(CLASS_TESTS[key[0]]), args[0], rules))
    if key == ("put", 1):
        return meet(S, vts(disj_all([Prim("atom"), Prim("integer")]), args[0], rules))
    if key[0] == "format" and 1 <= key[1] <= 3:
        t = args[0] if key[1] < 3 else args[1]
        allowed = disj_all([Prim("atom"), _list_of(rules, Prim("integer")), Prim("string")])
        return meet(S, vts(allowed, t, rules))
    if key[0] in ARITHMETIC and key[1] == 2:
        return meet_all([S, _numeric(args[0], rules), _numeric(args[1], rules)])
    if key == ("length", 2):
        return meet_all([S, vts(_list_of(rules, ONE), args[0], rules),
                         vts(Prim("integer"), args[1], rules)])
    if key == ("compare", 3):
        return meet(S, vts(Prim("atom"), args[0], rules))
    if key == ("name", 2):
        return meet_all([S, vts(disj_all([Prim("atom"), Prim("integer")]), args[0], rules),
                         vts(Prim("string"), args[1], rules)])
    raise ValueError(f"no transfer function for {key[0]}/{key[1]}")
