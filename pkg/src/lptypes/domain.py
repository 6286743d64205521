"""Variable typings and sets of them (the abstract substitutions).

A typing is sparse: a variable that is not listed has type 1, and 1 is
never stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .decision import as_env
from .terms import Var
from .types import ONE, ZERO, Not, One, Zero, canonical, conj, member, type_key


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class VarTyping:
    entries: tuple = ()  # sorted (Var, TypeExpr) pairs, none of them One

    @staticmethod
    def of(mapping: Mapping | Iterable = ()) -> "VarTyping":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        d = {}
        for x, t in items:
            if not isinstance(t, One):
                d[x] = t
        return VarTyping(tuple(sorted(d.items())))

    def get(self, x: Var):
        for y, t in self.entries:
            if y == x:
                return t
        return ONE

    def as_dict(self) -> dict:
        return dict(self.entries)

    def keys(self) -> list:
        return [x for x, _ in self.entries]

    def items(self):
        return self.entries

    def set(self, x: Var, t) -> "VarTyping":
        d = self.as_dict()
        d[x] = t
        return VarTyping.of(d)

    def has_zero(self) -> bool:
        return any(isinstance(t, Zero) for _, t in self.entries)

    def rename_vars(self, f) -> "VarTyping":
        return VarTyping.of((f(x), t) for x, t in self.entries)

    def map_types(self, f) -> "VarTyping":
        return VarTyping.of((x, f(t)) for x, t in self.entries)

    def key(self) -> str:
        return ", ".join(f"{x}/{type_key(canonical(t))}" for x, t in self.entries)

    def __str__(self):
        return "{" + ", ".join(f"{x}:{t}" for x, t in self.entries) + "}"

    __repr__ = __str__


ALL_ONE = VarTyping()


def typing(mapping: Mapping | Iterable = ()) -> VarTyping:
    return VarTyping.of(mapping)


def vtset(*typings) -> frozenset:
    return frozenset(t if isinstance(t, VarTyping) else VarTyping.of(t) for t in typings)


def id_abstract() -> frozenset:
    """The set holding the typing that maps every variable to 1."""
    return frozenset({ALL_ONE})


def sorted_typings(S) -> list:
    return sorted(S, key=VarTyping.key)


def meet_typing(m1: VarTyping, m2: VarTyping) -> VarTyping:
    d = m1.as_dict()
    for x, t in m2.entries:
        d[x] = conj(d.get(x, ONE), t)
    return VarTyping.of(d)


def meet(S1, S2) -> frozenset:
    """Pairwise pointwise conjunction; typings with a literal 0 are dropped."""
    out = set()
    for m1 in S1:
        for m2 in S2:
            m = meet_typing(m1, m2)
            if not m.has_zero():
                out.add(m)
    return frozenset(out)


def meet_all(sets: Iterable) -> frozenset:
    out = id_abstract()
    for S in sets:
        out = meet(out, S)
        if not out:
            break
    return out


def disjoint_union(S1, S2) -> frozenset:
    out = set()
    for m1 in S1:
        for m2 in S2:
            if set(m1.keys()) & set(m2.keys()):
                raise DomainError("typings to combine have overlapping domains")
            out.add(VarTyping.of(m1.entries + m2.entries))
    return frozenset(out)


# ---------------------------------------------------------------- decisions


def typing_empty(m: VarTyping, env) -> bool:
    env = as_env(env)
    return any(env.is_empty(t) for _, t in m.entries)


def _covered(mu: VarTyping, others: list, env) -> bool:
    """Whether mu is included in the union of the others.

    Searches for a way to pick, for every other typing, a variable where the
    candidate region escapes it; if no consistent choice exists, mu is covered.
    """
    if typing_empty(mu, env):
        return True
    xs = sorted(set(mu.keys()).union(*(set(n.keys()) for n in others)))
    R = {x: mu.get(x) for x in xs}
    T = [{x: n.get(x) for x in xs} for n in others]
    assigned = {x: [] for x in xs}
    failed = set()

    def feasible(x, j):
        t = R[x]
        for i in sorted(assigned[x] + [j]):
            t = conj(t, Not(T[i][x]))
        return not env.is_empty(t)

    def search(remaining: frozenset) -> bool:
        if not remaining:
            return True
        state = (remaining, tuple(frozenset(assigned[x]) for x in xs))
        if state in failed:
            return False
        best = None
        for j in sorted(remaining):
            opts = [x for x in xs if not isinstance(T[j][x], One) and feasible(x, j)]
            if best is None or len(opts) < len(best[1]):
                best = (j, opts)
            if not opts:
                break
        j, opts = best
        for x in opts:
            assigned[x].append(j)
            found = search(remaining - {j})
            assigned[x].pop()
            if found:
                return True
        failed.add(state)
        return False

    return not search(frozenset(range(len(T))))


def vtset_leq(S1, S2, env) -> bool:
    """Every typing of S1 is covered by the union of S2."""
    env = as_env(env)
    others = sorted_typings(S2)
    return all(_covered(mu, others, env) for mu in sorted_typings(S1))


def vtset_equiv(S1, S2, env) -> bool:
    return vtset_leq(S1, S2, env) and vtset_leq(S2, S1, env)


def remove_redundant(S, env) -> frozenset:
    """Drop empty typings, then typings covered by the remaining ones."""
    env = as_env(env)
    survivors = [m for m in sorted_typings(S) if not typing_empty(m, env)]
    for mu in list(survivors):
        rest = [m for m in survivors if m != mu]
        if _covered(mu, rest, env):
            survivors = rest
    return frozenset(survivors)


def join(S1, S2, env) -> frozenset:
    return remove_redundant(frozenset(S1) | frozenset(S2), env)


def restrict_out(S, env) -> frozenset:
    """Drop typings with an empty entry and forget renamed variables."""
    env = as_env(env)
    out = set()
    for m in S:
        if typing_empty(m, env):
            continue
        out.add(VarTyping.of((x, t) for x, t in m.entries if not x.psi))
    return frozenset(out)


def project(S, keep) -> frozenset:
    keep = set(keep)
    return frozenset(VarTyping.of((x, t) for x, t in m.entries if x in keep) for m in S)


def satisfies(theta: Mapping, S, rules) -> bool:
    """Whether the concrete substitution is described by some typing of S."""
    from .terms import apply

    rules = as_env(rules).rules
    return any(all(member(apply(theta, x), t, rules) for x, t in m.entries) for m in S)


def union_type(S, x: Var):
    """Type of x across all typings of S."""
    from .types import disj_all

    return disj_all(m.get(x) for m in sorted_typings(S))
