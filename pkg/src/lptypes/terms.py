"""Terms, substitutions and syntactic unification.

Substitutions are plain dicts mapping Var to Term. Unification failure is
signalled by returning None, never by raising.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union


class TermDomainError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Var:
    name: str
    scope: int = 0
    psi: bool = False

    def __str__(self):
        return self.name + ("'" if self.psi else "")


@dataclass(frozen=True)
class FnSym:
    name: str
    arity: int

    def __str__(self):
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class Compound:
    """A function application; constants are compounds with no arguments."""

    name: str
    args: tuple = ()

    @property
    def sym(self) -> FnSym:
        return FnSym(self.name, len(self.args))

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class NumLit:
    kind: str  # "integer" or "float"
    value: Union[int, float]

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class StrLit:
    value: str

    def __str__(self):
        return render_term(self)


Term = Union[Var, Compound, NumLit, StrLit]

NIL = Compound("[]")
CONS = "[|]"
# the distinguished constant that stands for a variable in ground encodings
RHO = Compound("$rho")
RHO_SYM = RHO.sym


def num(value) -> NumLit:
    return NumLit("float" if isinstance(value, float) else "integer", value)


def mklist(items, tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(list(items)):
        out = Compound(CONS, (item, out))
    return out


def head_symbol(t: Term) -> FnSym:
    """The symbol a non-variable term is matched on against type rules."""
    if isinstance(t, Compound):
        return t.sym
    if isinstance(t, NumLit):
        return FnSym(repr(t.value), 0)
    if isinstance(t, StrLit):
        return FnSym('"' + t.value + '"', 0)
    raise TermDomainError(f"variable {t} has no head symbol")


def symbol_class(sym: FnSym):
    """Primitive class of a constant symbol, or None for compounds and rho."""
    if sym.arity > 0 or sym == RHO_SYM:
        return None
    name = sym.name
    if name.startswith('"'):
        return "string"
    try:
        int(name)
        return "integer"
    except ValueError:
        pass
    try:
        float(name)
        return "float"
    except ValueError:
        pass
    return "atom"


def term_class(t: Term):
    if isinstance(t, Var):
        return None
    return symbol_class(head_symbol(t))


def variables(t: Term, acc=None) -> list:
    """Variables of t in first-occurrence order."""
    if acc is None:
        acc = []
    if isinstance(t, Var):
        if t not in acc:
            acc.append(t)
    elif isinstance(t, Compound):
        for a in t.args:
            variables(a, acc)
    return acc


def occurs(x: Var, t: Term) -> bool:
    if isinstance(t, Var):
        return t == x
    if isinstance(t, Compound):
        return any(occurs(x, a) for a in t.args)
    return False


def apply(theta: Mapping, t: Term) -> Term:
    if isinstance(t, Var):
        return theta.get(t, t)
    if isinstance(t, Compound) and t.args:
        return Compound(t.name, tuple(apply(theta, a) for a in t.args))
    return t


def compose(sigma: Mapping, theta: Mapping) -> dict:
    """sigma after theta: apply(compose(s, t), x) == apply(s, apply(t, x))."""
    out = {x: apply(sigma, t) for x, t in theta.items()}
    for x, t in sigma.items():
        out.setdefault(x, t)
    return {x: t for x, t in out.items() if t != x}


def mgu(equations: Iterable) -> dict | None:
    """Most general idempotent unifier of a set of term pairs, or None."""
    subst: dict = {}
    stack = list(equations)
    stack.reverse()
    while stack:
        left, right = stack.pop()
        left, right = apply(subst, left), apply(subst, right)
        if left == right:
            continue
        if not isinstance(left, Var) and isinstance(right, Var):
            left, right = right, left
        if isinstance(left, Var):
            if occurs(left, right):
                return None
            binding = {left: right}
            subst = {x: apply(binding, t) for x, t in subst.items()}
            subst[left] = right
        elif isinstance(left, Compound) and isinstance(right, Compound):
            if left.name != right.name or len(left.args) != len(right.args):
                return None
            stack.extend(reversed(list(zip(left.args, right.args))))
        else:
            return None
    return subst


def unify(t1: Term, t2: Term) -> dict | None:
    return mgu([(t1, t2)])


def eq(theta: Mapping) -> tuple:
    """Solved-form equation set of an idempotent substitution."""
    return tuple(sorted(theta.items()))


def psi_rename(obj):
    """Rename every variable into the primed namespace.

    Works on terms and on anything exposing rename_vars (typings, sets).
    """
    if isinstance(obj, (frozenset, set)):
        return frozenset(psi_rename(o) for o in obj)
    if hasattr(obj, "rename_vars"):
        return obj.rename_vars(psi_var)
    if isinstance(obj, Var):
        return psi_var(obj)
    if isinstance(obj, Compound) and obj.args:
        return Compound(obj.name, tuple(psi_rename(a) for a in obj.args))
    return obj


def psi_var(x: Var) -> Var:
    if x.psi:
        raise TermDomainError(f"{x} is already in the renamed namespace")
    return Var(x.name, x.scope, True)


def ground_encode(t: Term) -> Term:
    """Replace every variable by the constant rho."""
    if isinstance(t, Var):
        return RHO
    if isinstance(t, Compound) and t.args:
        return Compound(t.name, tuple(ground_encode(a) for a in t.args))
    return t


def is_ground(t: Term) -> bool:
    return not variables(t)


def _atom_text(name: str) -> str:
    if name == "$rho":
        return "ρ"
    if name in ("[]", "!", ";", "{}"):
        return name
    if name and name[0].islower() and all(c.isalnum() or c == "_" for c in name):
        return name
    if name and all(c in "+-*/\\^<>=~:.?@#&$" for c in name):
        return name
    return "'" + name.replace("'", "\\'") + "'"


INFIX_OPS = {"=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "is", "=:=", "=\\=", "<", ">",
             "=<", ">=", "+", "-", "*", "/", "//", "mod"}


def _operand(t: Term) -> str:
    s = render_term(t)
    if isinstance(t, Compound) and len(t.args) == 2 and t.name in INFIX_OPS:
        return f"({s})"
    return s


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return str(t)
    if isinstance(t, NumLit):
        return repr(t.value)
    if isinstance(t, StrLit):
        return '"' + t.value + '"'
    if t.name == CONS and len(t.args) == 2:
        items = []
        cur = t
        while isinstance(cur, Compound) and cur.name == CONS and len(cur.args) == 2:
            items.append(render_term(cur.args[0]))
            cur = cur.args[1]
        body = ",".join(items)
        if cur == NIL:
            return f"[{body}]"
        return f"[{body}|{render_term(cur)}]"
    if not t.args:
        return _atom_text(t.name)
    if len(t.args) == 2 and t.name in INFIX_OPS:
        a, b = (_operand(x) for x in t.args)
        return f"{a} {t.name} {b}"
    return _atom_text(t.name) + "(" + ",".join(render_term(a) for a in t.args) + ")"
