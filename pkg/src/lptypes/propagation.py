"""Moving type information through equations: down, up and abstract unification."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .decision import as_env
from .domain import (
    ALL_ONE,
    VarTyping,
    disjoint_union,
    id_abstract,
    meet,
    meet_all,
    remove_redundant,
    restrict_out,
)
from .terms import Compound, Term, Var, eq, head_symbol, mgu, psi_rename, symbol_class
from .types import (
    ONE,
    ZERO,
    And,
    Con,
    ConScheme,
    One,
    Or,
    Param,
    Prim,
    RuleSet,
    TypeDomainError,
    Zero,
    class_leq,
    conj,
    conj_all,
    disj,
    disj_all,
    rule_kappa,
    scheme_apply,
)


# ---------------------------------------------------------------- type substitutions


class _Top:
    def __repr__(self):
        return "TOP"


class _Bottom:
    def __repr__(self):
        return "BOTTOM"


TOP = _Top()
BOTTOM = _Bottom()


@dataclass(frozen=True)
class TMap:
    bindings: tuple = ()  # sorted (param, type) pairs

    @staticmethod
    def of(d: Mapping) -> "TMap":
        return TMap(tuple(sorted(d.items())))

    def get(self, p):
        for q, t in self.bindings:
            if q == p:
                return t
        return ZERO

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def __str__(self):
        return "{" + ", ".join(f"{p}:{t}" for p, t in self.bindings) + "}"


def tsub_apply(kappa, tau):
    if kappa is TOP:
        return ONE
    if kappa is BOTTOM:
        return ZERO
    return scheme_apply(kappa.as_dict(), tau)


def tsub_join(k1, k2):
    if k1 is TOP or k2 is TOP:
        return TOP
    if k1 is BOTTOM:
        return k2
    if k2 is BOTTOM:
        return k1
    keys = set(k1.as_dict()) | set(k2.as_dict())
    return TMap.of({p: disj(k1.get(p), k2.get(p)) for p in keys})


def tsub_meet(k1, k2):
    if k1 is BOTTOM or k2 is BOTTOM:
        return BOTTOM
    if k1 is TOP:
        return k2
    if k2 is TOP:
        return k1
    keys = set(k1.as_dict()) & set(k2.as_dict())
    return TMap.of({p: conj(k1.get(p), k2.get(p)) for p in keys})


def tsubset_join(K1, K2) -> frozenset:
    return frozenset(tsub_join(a, b) for a in K1 for b in K2)


def tsubset_meet(K1, K2) -> frozenset:
    return frozenset(tsub_meet(a, b) for a in K1 for b in K2)


def cover(R, tau) -> frozenset:
    """Type substitutions whose instances of tau jointly cover R."""
    if isinstance(R, One):
        return frozenset({TOP})
    if isinstance(R, Zero):
        return frozenset({BOTTOM})
    if isinstance(R, Or):
        return cover(R.left, tau) | cover(R.right, tau)
    if isinstance(R, And):
        return tsubset_meet(cover(R.left, tau), cover(R.right, tau))
    if isinstance(tau, Param):
        return frozenset({TMap.of({tau.name: R})})
    if isinstance(R, Con) and R.ctor == tau.ctor and len(R.args) == len(tau.params):
        return frozenset({TMap.of(dict(zip(tau.params, R.args)))})
    return frozenset({TOP})


# ---------------------------------------------------------------- vts and type_of


def _single(x: Var, R) -> frozenset:
    return frozenset({VarTyping.of({x: R})})


def vts(R, t: Term, rules: RuleSet) -> frozenset:
    """Typings of the variables of t under which t belongs to R."""
    if isinstance(R, One):
        return id_abstract()
    if isinstance(t, Var):
        return _single(t, R)
    if isinstance(R, And):
        return meet(vts(R.left, t, rules), vts(R.right, t, rules))
    if isinstance(R, Or):
        return vts(R.left, t, rules) | vts(R.right, t, rules)
    if isinstance(R, Zero):
        return frozenset()
    sym = head_symbol(t)
    if isinstance(R, Prim):
        return id_abstract() if class_leq(symbol_class(sym), R.cls) else frozenset()
    rules.check_ctor(R.ctor, len(R.args))
    args = t.args if isinstance(t, Compound) else ()
    out = set()
    for rule in rules.rules_for(R.ctor, sym):
        kappa = rule_kappa(rule, R.args)
        out |= meet_all(vts(scheme_apply(kappa, tau), a, rules) for a, tau in zip(args, rule.args))
    return frozenset(out)


def type_of(t: Term, mu: VarTyping, rules: RuleSet):
    """A type containing every instance of t allowed by mu."""
    if isinstance(t, Var):
        return mu.get(t)
    sym = head_symbol(t)
    matching = rules.rules_with_sym(sym)
    if not matching:
        cls = symbol_class(sym)
        if cls is None:
            raise TypeDomainError(f"function symbol {sym} occurs in no type rule")
        return Prim(cls)
    args = t.args if isinstance(t, Compound) else ()
    arg_types = [type_of(a, mu, rules) for a in args]
    out = ONE
    for rule in matching:
        K = frozenset({TMap()})
        for r, tau in zip(arg_types, rule.args):
            K = tsubset_join(K, cover(r, tau))
        head = ConScheme(rule.ctor, rule.params)
        out = conj(out, disj_all(tsub_apply(k, head) for k in sorted(K, key=str)))
    return out


# ---------------------------------------------------------------- solving equations


def down(E: Iterable, S, rules: RuleSet) -> frozenset:
    E = tuple(E)
    out = set()
    for mu in S:
        out |= meet_all([frozenset({mu})] + [vts(mu.get(x), t, rules) for x, t in E])
    return frozenset(out)


def up(E: Iterable, S, rules: RuleSet) -> frozenset:
    E = tuple(E)
    out = set()
    for mu in S:
        d = mu.as_dict()
        for x, t in E:
            d[x] = conj(mu.get(x), type_of(t, mu, rules))
        out.add(VarTyping.of(d))
    return frozenset(out)


def solve(E: Iterable, S, rules: RuleSet) -> frozenset:
    E = tuple(E)
    return up(E, down(E, S, rules), rules)


def aunify(a1: Term, S1, a2: Term, S2, env) -> frozenset:
    """Abstract counterpart of unifying a1 (under S1) with a2 (under S2).

    The result describes the variables on the a2 side.
    """
    env = as_env(env)
    theta = mgu([(psi_rename(a1), a2)])
    if theta is None:
        return frozenset()
    S = solve(eq(theta), disjoint_union(psi_rename(S1), S2), env.rules)
    return remove_redundant(restrict_out(S, env), env)
