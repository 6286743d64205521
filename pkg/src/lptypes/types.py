"""Type expressions, type rules, membership and syntactic normal forms."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .terms import CONS, FnSym, Term, Var, head_symbol, term_class


class TypeDomainError(ValueError):
    pass


PRIM_BASES = {
    "integer": frozenset({"integer"}),
    "float": frozenset({"float"}),
    "string": frozenset({"string"}),
    "atom": frozenset({"atom"}),
    "number": frozenset({"integer", "float"}),
    "atomic": frozenset({"integer", "float", "atom"}),
}
BASE_CLASSES = ("atom", "float", "integer", "string")
RESERVED = set(PRIM_BASES) | {"and", "or", "0", "1"}


@dataclass(frozen=True, repr=False)
class Zero:
    def __str__(self):
        return "0"


@dataclass(frozen=True, repr=False)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True, repr=False)
class And:
    left: "TypeExpr"
    right: "TypeExpr"

    def __str__(self):
        return render_type(self)


@dataclass(frozen=True, repr=False)
class Or:
    left: "TypeExpr"
    right: "TypeExpr"

    def __str__(self):
        return render_type(self)


@dataclass(frozen=True, repr=False)
class Con:
    ctor: str
    args: tuple = ()

    def __str__(self):
        return render_type(self)


@dataclass(frozen=True, repr=False)
class Prim:
    cls: str

    def __post_init__(self):
        if self.cls not in PRIM_BASES:
            raise TypeDomainError(f"unknown primitive type {self.cls}")

    def __str__(self):
        return self.cls


@dataclass(frozen=True, repr=False)
class Not:
    """Complement; only used by the decision procedure."""

    arg: "TypeExpr"

    def __str__(self):
        return render_type(self)


TypeExpr = Union[Zero, One, And, Or, Con, Prim, Not]

for _cls in (Zero, One, And, Or, Con, Prim, Not):
    _cls.__repr__ = lambda self: f"<{render_type(self)}>"
ZERO = Zero()
ONE = One()


def is_atomic(t) -> bool:
    return not isinstance(t, (And, Or))


def render_type(t, prec: int = 0) -> str:
    if isinstance(t, Or):
        s = f"{render_type(t.left, 1)} or {render_type(t.right, 1)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, And):
        s = f"{render_type(t.left, 2)} and {render_type(t.right, 2)}"
        return f"({s})" if prec > 2 else s
    if isinstance(t, Not):
        return "~" + render_type(t.arg, 3)
    if isinstance(t, Con):
        if not t.args:
            return t.ctor
        return t.ctor + "(" + ",".join(render_type(a) for a in t.args) + ")"
    return str(t)


# smart constructors: exact simplifications only


def conj(a, b):
    if isinstance(a, One) or a == b:
        return b
    if isinstance(b, One):
        return a
    if isinstance(a, Zero) or isinstance(b, Zero):
        return ZERO
    return And(a, b)


def disj(a, b):
    if isinstance(a, Zero) or a == b:
        return b
    if isinstance(b, Zero):
        return a
    if isinstance(a, One) or isinstance(b, One):
        return ONE
    return Or(a, b)


def conj_all(items: Iterable):
    out = ONE
    for i in items:
        out = conj(out, i)
    return out


def disj_all(items: Iterable):
    out = ZERO
    for i in items:
        out = disj(out, i)
    return out


# ---------------------------------------------------------------- rules


@dataclass(frozen=True, repr=False)
class Param:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, repr=False)
class ConScheme:
    ctor: str
    params: tuple = ()

    def __str__(self):
        if not self.params:
            return self.ctor
        return self.ctor + "(" + ",".join(self.params) + ")"


TypeScheme = Union[Param, ConScheme]


@dataclass(frozen=True)
class TypeRule:
    """ctor(params) -> sym(args)"""

    ctor: str
    params: tuple
    sym: FnSym
    args: tuple

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise TypeDomainError(f"repeated parameter in head of rule for {self.ctor}")
        if len(self.args) != self.sym.arity:
            raise TypeDomainError(f"arity mismatch for {self.sym}")
        for a in self.args:
            used = (a.name,) if isinstance(a, Param) else a.params
            if isinstance(a, ConScheme) and len(set(a.params)) != len(a.params):
                raise TypeDomainError(f"repeated parameter in scheme {a}")
            for p in used:
                if p not in self.params:
                    raise TypeDomainError(f"parameter {p} does not occur in head {self.ctor}")

    def head_str(self) -> str:
        return str(ConScheme(self.ctor, self.params))

    def __str__(self):
        return f"{self.head_str()} -> {render_rhs(self.sym, self.args)}"


def render_rhs(sym: FnSym, args) -> str:
    if sym.name == CONS and sym.arity == 2:
        return f"[{args[0]}|{args[1]}]"
    if not args:
        return sym.name
    return sym.name + "(" + ",".join(str(a) for a in args) + ")"


class RuleSet:
    """A finite set of type rules with lookup indexes."""

    def __init__(self, rules: Iterable[TypeRule], atoms: Iterable[str] = ()):
        self.rules = tuple(rules)
        self.atoms = frozenset(atoms)
        self.arity: dict[str, int] = {}
        self._by_ctor: dict[str, list] = {}
        self._by_pair: dict[tuple, list] = {}
        self._by_sym: dict[FnSym, list] = {}
        for r in self.rules:
            if r.ctor in RESERVED:
                raise TypeDomainError(f"{r.ctor} is reserved and cannot be a type constructor")
            if self.arity.setdefault(r.ctor, len(r.params)) != len(r.params):
                raise TypeDomainError(f"constructor {r.ctor} used with different arities")
            self._by_ctor.setdefault(r.ctor, []).append(r)
            self._by_pair.setdefault((r.ctor, r.sym), []).append(r)
            self._by_sym.setdefault(r.sym, []).append(r)
        for r in self.rules:
            for a in r.args:
                if isinstance(a, ConScheme):
                    if a.ctor not in self.arity:
                        raise TypeDomainError(f"constructor {a.ctor} has no rules")
                    if self.arity[a.ctor] != len(a.params):
                        raise TypeDomainError(f"constructor {a.ctor} used with different arities")
        self.symbols = frozenset(self._by_sym)
        self._syms_of_ctor = {c: frozenset(r.sym for r in rs) for c, rs in self._by_ctor.items()}

    def has_ctor(self, ctor: str) -> bool:
        return ctor in self.arity

    def check_ctor(self, ctor: str, nargs: int):
        if ctor not in self.arity:
            raise TypeDomainError(f"unknown type constructor {ctor}")
        if self.arity[ctor] != nargs:
            raise TypeDomainError(f"{ctor} expects {self.arity[ctor]} arguments, got {nargs}")

    def rules_for(self, ctor: str, sym: FnSym | None = None) -> list:
        if sym is None:
            return self._by_ctor.get(ctor, [])
        return self._by_pair.get((ctor, sym), [])

    def rules_with_sym(self, sym: FnSym) -> list:
        return self._by_sym.get(sym, [])

    def syms_of_ctor(self, ctor: str) -> frozenset:
        return self._syms_of_ctor.get(ctor, frozenset())

    def __str__(self):
        return render_rules(self)


def render_rules(rules: RuleSet) -> str:
    lines = []
    if rules.atoms:
        lines.append(":- atoms(" + ", ".join(sorted(rules.atoms)) + ").")
    lines.extend(f"{r}." for r in rules.rules)
    return "\n".join(lines) + "\n"


def scheme_apply(kappa: Mapping, tau) -> TypeExpr:
    """Instantiate a scheme; parameters outside kappa map to 0."""
    if isinstance(tau, Param):
        return kappa.get(tau.name, ZERO)
    return Con(tau.ctor, tuple(kappa.get(p, ZERO) for p in tau.params))


def rule_kappa(rule: TypeRule, args) -> dict:
    return dict(zip(rule.params, args))


# ---------------------------------------------------------------- membership


def class_leq(cls, prim: str) -> bool:
    return cls is not None and cls in PRIM_BASES[prim]


def member(t: Term, R, rules: RuleSet) -> bool:
    """Whether t (possibly non-ground) is in the meaning of R.

    A variable only belongs to types equivalent to 1.
    """
    if isinstance(R, One):
        return True
    if isinstance(R, Zero):
        return False
    if isinstance(R, And):
        return member(t, R.left, rules) and member(t, R.right, rules)
    if isinstance(R, Or):
        return member(t, R.left, rules) or member(t, R.right, rules)
    if isinstance(R, Not):
        raise TypeDomainError("member is only defined for complement-free types")
    if isinstance(t, Var):
        return False
    if isinstance(R, Prim):
        return class_leq(term_class(t), R.cls)
    rules.check_ctor(R.ctor, len(R.args))
    sym = head_symbol(t)
    targs = t.args if sym.arity else ()
    for rule in rules.rules_for(R.ctor, sym):
        kappa = rule_kappa(rule, R.args)
        if all(member(ti, scheme_apply(kappa, tau), rules) for ti, tau in zip(targs, rule.args)):
            return True
    return False


# ---------------------------------------------------------------- normal forms


def _dnf_lists(R) -> list:
    if isinstance(R, Or):
        return _dnf_lists(R.left) + _dnf_lists(R.right)
    if isinstance(R, And):
        return [a + b for a in _dnf_lists(R.left) for b in _dnf_lists(R.right)]
    return [[R]]


def disjuncts(R) -> list:
    """The conjuncts of the DNF of R, each as a list of atomic types."""
    return _dnf_lists(R)


def _fold(ctor, items):
    out = items[0]
    for i in items[1:]:
        out = ctor(out, i)
    return out


def dnf(R):
    """Disjunctive normal form by distribution, without any simplification."""
    return _fold(Or, [_fold(And, c) for c in _dnf_lists(R)])


@lru_cache(maxsize=None)
def canonical(R):
    """Deterministic compact DNF with canonical arguments; idempotent."""
    conjuncts = {}
    for c in _dnf_lists(R):
        atoms = {}
        dead = False
        for a in c:
            if isinstance(a, Con):
                a = Con(a.ctor, tuple(canonical(x) for x in a.args))
            elif isinstance(a, Not):
                raise TypeDomainError("canonical is defined for complement-free types")
            if isinstance(a, Zero):
                dead = True
                break
            if isinstance(a, One):
                continue
            atoms[type_key(a)] = a
        if dead:
            continue
        if not atoms:
            return ONE
        key = tuple(sorted(atoms))
        conjuncts[key] = [atoms[k] for k in key]
    if not conjuncts:
        return ZERO
    return _fold(Or, [_fold(And, conjuncts[k]) for k in sorted(conjuncts)])


@lru_cache(maxsize=None)
def type_key(R) -> str:
    return render_type(R)


def canonical_key(R) -> str:
    return type_key(canonical(R))


def atom_depth_max(R, depth: int = 0) -> int:
    """Largest number of constructors above any atomic subterm."""
    if isinstance(R, (And, Or)):
        return max(atom_depth_max(R.left, depth), atom_depth_max(R.right, depth))
    if isinstance(R, Con) and R.args:
        return max(depth, max(atom_depth_max(a, depth + 1) for a in R.args))
    return depth


def depth_abstract(R, k: int, depth: int = 0):
    """Replace the arguments of atomic subterms at depth k by 1."""
    if k < 1:
        raise TypeDomainError("depth bound must be positive")
    if isinstance(R, And):
        return And(depth_abstract(R.left, k, depth), depth_abstract(R.right, k, depth))
    if isinstance(R, Or):
        return Or(depth_abstract(R.left, k, depth), depth_abstract(R.right, k, depth))
    if isinstance(R, Con) and R.args:
        if depth == k:
            return Con(R.ctor, tuple(ONE for _ in R.args))
        return Con(R.ctor, tuple(depth_abstract(a, k, depth + 1) for a in R.args))
    return R


def type_size(R) -> int:
    if isinstance(R, (And, Or)):
        return 1 + type_size(R.left) + type_size(R.right)
    if isinstance(R, Con):
        return 1 + sum(type_size(a) for a in R.args)
    if isinstance(R, Not):
        return 1 + type_size(R.arg)
    return 1


def atoms_of(R) -> set:
    """Top-level atomic subterms, looking through and/or/not."""
    if isinstance(R, (And, Or)):
        return atoms_of(R.left) | atoms_of(R.right)
    if isinstance(R, Not):
        return atoms_of(R.arg)
    return {R}
