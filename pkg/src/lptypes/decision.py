"""Emptiness and inclusion for types with complement.

Emptiness is decided over ground terms built from the rule symbols, the
constant rho (which stands for variables), and one fresh representative per
primitive class. The search works on goals, i.e. conjunctions of positive
and negated atomic types for a single term. A goal is non-empty iff some
head symbol admits argument tuples whose positions are non-empty goals.
Cycles are resolved as a least fixed point by repeating the search until
no new goal is proven non-empty.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Iterable

from .terms import RHO, FnSym, NumLit, StrLit, Compound, Term, Var, head_symbol, num, symbol_class
from .types import (
    BASE_CLASSES,
    ONE,
    PRIM_BASES,
    ZERO,
    And,
    Con,
    Not,
    One,
    Or,
    Prim,
    RuleSet,
    TypeDomainError,
    Zero,
    atoms_of,
    canonical,
    conj,
    conj_all,
    disj_all,
    render_type,
    rule_kappa,
    scheme_apply,
    type_key,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


# ---------------------------------------------------------------- literal DNF


def _expand_prim(p: Prim):
    bases = sorted(PRIM_BASES[p.cls])
    if len(bases) == 1:
        return p
    return disj_all(Prim(b) for b in bases)


def _nnf(E, positive: bool = True) -> list:
    """DNF over literals (positive flag, atom); atoms are Con or base Prim."""
    if isinstance(E, One):
        return [[]] if positive else []
    if isinstance(E, Zero):
        return [] if positive else [[]]
    if isinstance(E, Not):
        return _nnf(E.arg, not positive)
    if isinstance(E, (And, Or)):
        left, right = _nnf(E.left, positive), _nnf(E.right, positive)
        if isinstance(E, And) == positive:
            return [a + b for a in left for b in right]
        return left + right
    if isinstance(E, Prim) and len(PRIM_BASES[E.cls]) > 1:
        return _nnf(_expand_prim(E), positive)
    return [[(positive, E)]]


def ext_key(E) -> str:
    """Canonical printed form of a type that may contain complements."""
    conjuncts = set()
    for c in _nnf(E):
        lits = set()
        for positive, a in c:
            if isinstance(a, Con):
                a = canonical(a)
            lits.add(type_key(a) if positive else "~" + type_key(a))
        conjuncts.add(" and ".join(sorted(lits)) if lits else "1")
    if not conjuncts:
        return "0"
    if "1" in conjuncts:
        return "1"
    return " or ".join(sorted(conjuncts))


@dataclass(frozen=True)
class Goal:
    pos: frozenset
    neg: frozenset


def _goals(E) -> list:
    out = []
    seen = set()
    for c in _nnf(E):
        pos = frozenset(a for p, a in c if p)
        neg = frozenset(a for p, a in c if not p)
        if pos & neg:
            continue
        if len({a.cls for a in pos if isinstance(a, Prim)}) > 1:
            continue
        g = Goal(pos, neg)
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


# ---------------------------------------------------------------- search


@dataclass(frozen=True)
class Fresh:
    """A constant of the given class that occurs in no type rule."""

    cls: str


class _Search:
    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.known: set = set()
        self.reached: set = set()
        self._goal_cache: dict = {}
        self.constants = {b: sorted((s for s in rules.symbols if symbol_class(s) == b), key=str)
                          for b in BASE_CLASSES}

    def nonempty(self, E) -> bool:
        roots = _goals(E)
        while True:
            self.changed = False
            self.visiting: set = set()
            self.memo: dict = {}
            if any(self._goal(g) for g in roots):
                return True
            if not self.changed:
                return False

    def _position(self, pos: tuple, neg: tuple) -> bool:
        key = (pos, neg)
        goals = self._goal_cache.get(key)
        if goals is None:
            E = conj_all(pos)
            for n in neg:
                E = conj(E, Not(n))
            goals = self._goal_cache[key] = _goals(E)
        return any(self._goal(g) for g in goals)

    def _goal(self, g: Goal) -> bool:
        if g in self.known:
            return True
        if g in self.visiting:
            return False
        if g in self.memo:
            return self.memo[g]
        self.reached.add(g)
        self.visiting.add(g)
        result = self._compute(g)
        self.visiting.discard(g)
        self.memo[g] = result
        if result:
            self.known.add(g)
            self.changed = True
        return result

    def _compute(self, g: Goal) -> bool:
        if not g.pos:
            return True  # rho is in no atomic type
        cons = sorted((a for a in g.pos if isinstance(a, Con)), key=type_key)
        bases = {a.cls for a in g.pos if isinstance(a, Prim)}
        if cons:
            syms = None
            for c in cons:
                self.rules.check_ctor(c.ctor, len(c.args))
                s = self.rules.syms_of_ctor(c.ctor)
                syms = s if syms is None else syms & s
            candidates = sorted(syms, key=lambda s: (s.arity, s.name))
        else:
            (b,) = bases
            candidates = self.constants[b] + [Fresh(b)]
        return any(self._viable(f, cons, bases, g.neg) for f in candidates)

    def _viable(self, f, cons, bases, neg) -> bool:
        cls = f.cls if isinstance(f, Fresh) else symbol_class(f)
        if any(b != cls for b in bases):
            return False
        if any(isinstance(n, Prim) and n.cls == cls for n in neg):
            return False
        if isinstance(f, Fresh):
            return True
        clauses = set()
        for n in neg:
            if not isinstance(n, Con):
                continue
            for rule in self.rules.rules_for(n.ctor, f):
                kappa = rule_kappa(rule, n.args)
                clause = tuple(scheme_apply(kappa, tau) for tau in rule.args)
                if not clause:
                    return False
                clauses.add(clause)
        clauses = sorted(clauses, key=lambda c: tuple(type_key(x) for x in c))
        choices = [self.rules.rules_for(c.ctor, f) for c in cons]
        for choice in itertools.product(*choices):
            pos = [set() for _ in range(f.arity)]
            for c, rule in zip(cons, choice):
                kappa = rule_kappa(rule, c.args)
                for i, tau in enumerate(rule.args):
                    pos[i].add(scheme_apply(kappa, tau))
            pos = [tuple(sorted(p, key=type_key)) for p in pos]
            if self._tuple(pos, clauses):
                return True
        return False

    def _tuple(self, pos, clauses) -> bool:
        """Can every clause be satisfied at some position, keeping all positions non-empty?"""
        n = len(pos)
        if not all(self._position(pos[i], ()) for i in range(n)):
            return False
        options = []
        for c in clauses:
            opts = [i for i in range(n) if not isinstance(c[i], One)
                    and self._position(pos[i], (c[i],))]
            if not opts:
                return False
            options.append((c, opts))
        options.sort(key=lambda co: len(co[1]))
        for i in range(n):
            if all(i in opts for _, opts in options):
                negs = tuple(sorted({c[i] for c, _ in options}, key=type_key))
                if self._position(pos[i], negs):
                    return True
        assigned = [frozenset() for _ in range(n)]
        failed = set()

        def search(j):
            if j == len(options):
                return True
            state = (j, tuple(assigned))
            if state in failed:
                return False
            c, opts = options[j]
            for i in opts:
                old = assigned[i]
                if c[i] in old:
                    if search(j + 1):
                        return True
                    continue
                assigned[i] = old | {c[i]}
                good = (self._position(pos[i], tuple(sorted(assigned[i], key=type_key)))
                        and search(j + 1))
                assigned[i] = old
                if good:
                    return True
            failed.add(state)
            return False

        return search(0)


def decide(E, rules: RuleSet) -> tuple:
    """(is_empty, number of goals reached) for a type with complements."""
    s = _Search(rules)
    nonempty = s.nonempty(E)
    return (not nonempty, len(s.reached))


def etype(E, rules: RuleSet) -> bool:
    """True iff the ground meaning of E is empty."""
    return decide(E, rules)[0]


# ---------------------------------------------------------------- caching


class EmptinessCache:
    """Memo table of emptiness results keyed by canonical printed form."""

    def __init__(self):
        self.table: dict = {}
        self.hits = 0
        self.misses = 0


def etype_tabled(E, rules: RuleSet, cache: EmptinessCache) -> bool:
    key = ext_key(E)
    if key in cache.table:
        cache.hits += 1
        return cache.table[key]
    cache.misses += 1
    result = etype(E, rules)
    cache.table[key] = result
    return result


class TypeEnv:
    """Rules plus the emptiness-check bookkeeping shared by an analysis run."""

    def __init__(self, rules: RuleSet, tabling: bool = True):
        self.rules = rules
        self.tabling = tabling
        self.cache = EmptinessCache()
        self.total_checks = 0
        self.computations = 0
        self.keys: set = set()

    def is_empty(self, E) -> bool:
        self.total_checks += 1
        if isinstance(E, Zero):
            return True
        if isinstance(E, One):
            return False
        key = ext_key(E)
        self.keys.add(key)
        if self.tabling:
            if key in self.cache.table:
                self.cache.hits += 1
                return self.cache.table[key]
            self.cache.misses += 1
        self.computations += 1
        result = etype(E, self.rules)
        if self.tabling:
            self.cache.table[key] = result
        return result

    def includes(self, R1, R2) -> bool:
        """R2 is included in R1."""
        return self.is_empty(conj(R2, Not(R1)))

    def equiv(self, R1, R2) -> bool:
        return self.includes(R1, R2) and self.includes(R2, R1)

    def stats(self) -> dict:
        distinct = len(self.keys)
        return {
            "total_checks": self.total_checks,
            "distinct_checks": distinct,
            "repetition": (self.total_checks / distinct) if distinct else 0.0,
            "computations": self.computations,
        }


def as_env(x) -> TypeEnv:
    return x if isinstance(x, TypeEnv) else TypeEnv(x)


def includes(R1, R2, env) -> bool:
    """True iff R2 is included in R1."""
    return as_env(env).includes(R1, R2)


def equiv(R1, R2, env) -> bool:
    return as_env(env).equiv(R1, R2)


# ---------------------------------------------------------------- sequences


@dataclass(frozen=True)
class Seq:
    items: tuple


@dataclass(frozen=True)
class SeqAnd:
    left: object
    right: object


@dataclass(frozen=True)
class SeqOr:
    left: object
    right: object


@dataclass(frozen=True)
class SeqNot:
    arg: object


def push_complement(E):
    """Move complements on sequences down to positions."""
    if isinstance(E, Seq):
        return E
    if isinstance(E, SeqAnd):
        return SeqAnd(push_complement(E.left), push_complement(E.right))
    if isinstance(E, SeqOr):
        return SeqOr(push_complement(E.left), push_complement(E.right))
    inner = E.arg
    if isinstance(inner, SeqNot):
        return push_complement(inner.arg)
    if isinstance(inner, SeqOr):
        return SeqAnd(push_complement(SeqNot(inner.left)), push_complement(SeqNot(inner.right)))
    if isinstance(inner, SeqAnd):
        return SeqOr(push_complement(SeqNot(inner.left)), push_complement(SeqNot(inner.right)))
    k = len(inner.items)
    if k == 0:
        return Seq(())  # kept as a marker; an empty sequence complement is empty
    out = None
    for l in range(k):
        items = tuple(Not(r) if i == l else ONE for i, r in enumerate(inner.items))
        out = Seq(items) if out is None else SeqOr(out, Seq(items))
    return out


def _seq_dnf(E) -> list:
    if isinstance(E, Seq):
        return [[E]]
    if isinstance(E, SeqOr):
        return _seq_dnf(E.left) + _seq_dnf(E.right)
    if isinstance(E, SeqAnd):
        return [a + b for a in _seq_dnf(E.left) for b in _seq_dnf(E.right)]
    raise TypeDomainError("push complements before distributing")


def seq_empty(E, env) -> bool:
    """Emptiness of a sequence formula by pushing complements and distributing."""
    env = as_env(env)
    for conjunct in _seq_dnf(push_complement(E)):
        k = len(conjunct[0].items)
        if any(len(s.items) != k for s in conjunct):
            raise TypeDomainError("sequences of different lengths")
        positions = [conj_all(s.items[i] for s in conjunct) for i in range(k)]
        if not any(env.is_empty(p) for p in positions):
            return False
    return True


# ---------------------------------------------------------------- witnesses


def member_ground(t: Term, E, rules: RuleSet) -> bool:
    """Membership of a ground term (rho allowed) in a type with complements."""
    if isinstance(E, One):
        return True
    if isinstance(E, Zero):
        return False
    if isinstance(E, And):
        return member_ground(t, E.left, rules) and member_ground(t, E.right, rules)
    if isinstance(E, Or):
        return member_ground(t, E.left, rules) or member_ground(t, E.right, rules)
    if isinstance(E, Not):
        return not member_ground(t, E.arg, rules)
    if isinstance(t, Var):
        raise TypeDomainError("member_ground needs a ground term")
    if t == RHO:
        return False
    sym = head_symbol(t)
    if isinstance(E, Prim):
        cls = symbol_class(sym)
        return cls is not None and cls in PRIM_BASES[E.cls]
    for rule in rules.rules_for(E.ctor, sym):
        kappa = rule_kappa(rule, E.args)
        args = t.args if isinstance(t, Compound) else ()
        if all(member_ground(a, scheme_apply(kappa, tau), rules) for a, tau in zip(args, rule.args)):
            return True
    return False


def _closure(E, rules: RuleSet) -> list:
    todo = [a for a in atoms_of(E) if isinstance(a, (Con, Prim))]
    seen = set()
    while todo:
        a = todo.pop()
        if a in seen:
            continue
        seen.add(a)
        if isinstance(a, Con):
            for rule in rules.rules_for(a.ctor):
                kappa = rule_kappa(rule, a.args)
                for tau in rule.args:
                    todo.extend(x for x in atoms_of(scheme_apply(kappa, tau))
                                if isinstance(x, (Con, Prim)))
    return sorted(seen, key=type_key)


def fresh_constants(rules: RuleSet) -> list:
    """One constant per primitive class that no rule mentions."""
    used = {s.name for s in rules.symbols}
    out = []
    n = 7919
    while str(n) in used:
        n += 1
    out.append(num(n))
    x = 0.375
    while repr(x) in used:
        x += 1.0
    out.append(num(x))
    s = "s"
    while '"' + s + '"' in used:
        s += "s"
    out.append(StrLit(s))
    a = "fresh_atom"
    while a in used:
        a += "_"
    out.append(Compound(a))
    return out


def enumerate_witness(E, rules: RuleSet, max_depth: int):
    """Brute-force search for a ground term in E up to the given depth.

    Terms are generated bottom-up; terms with the same membership profile
    over the atoms reachable from E are interchangeable, so only one
    representative per profile is kept.
    """
    closure = _closure(E, rules)
    reps: dict = {}

    def consider(t):
        profile = frozenset(i for i, a in enumerate(closure) if member_ground(t, a, rules))
        if profile in reps:
            return None
        reps[profile] = t
        return t if member_ground(t, E, rules) else None

    constants = [RHO] + fresh_constants(rules)
    constants += [Compound(s.name) if symbol_class(s) == "atom" else _const_term(s)
                  for s in sorted(rules.symbols, key=str) if s.arity == 0]
    for t in constants:
        found = consider(t)
        if found is not None:
            return found
    functors = sorted((s for s in rules.symbols if s.arity > 0), key=str)
    for _ in range(1, max_depth):
        pool = list(reps.values())
        grew = False
        for f in functors:
            for args in itertools.product(pool, repeat=f.arity):
                before = len(reps)
                found = consider(Compound(f.name, tuple(args)))
                if found is not None:
                    return found
                grew = grew or len(reps) > before
        if not grew:
            return None
    return None


def _const_term(sym: FnSym) -> Term:
    cls = symbol_class(sym)
    if cls == "integer":
        return num(int(sym.name))
    if cls == "float":
        return num(float(sym.name))
    if cls == "string":
        return StrLit(sym.name[1:-1])
    return Compound(sym.name)
