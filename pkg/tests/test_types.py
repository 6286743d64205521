import random

import pytest

from gen import BASIC, random_ground, random_type, sample_member, generalize
from lptypes.parser import ParseError, parse_rules, parse_type
from lptypes.terms import NIL, Compound, Var, apply, mklist, num
from lptypes.types import (
    ONE,
    ZERO,
    And,
    Con,
    Not,
    Or,
    Prim,
    TypeDomainError,
    atom_depth_max,
    canonical,
    canonical_key,
    conj,
    depth_abstract,
    disj,
    disjuncts,
    dnf,
    member,
    render_rules,
    scheme_apply,
)
from lptypes.types import ConScheme, Param


def T(s):
    return parse_type(s, BASIC)


def s_(t):
    return Compound("s", (t,))


def test_member_examples():
    assert member(num(0), T("nat"), BASIC)
    assert member(s_(s_(num(0))), T("even"), BASIC)
    assert not member(s_(num(0)), T("even"), BASIC)
    assert member(mklist([num(0), s_(num(0))]), T("list(nat)"), BASIC)
    assert member(NIL, T("list(0)"), BASIC)
    assert not member(mklist([num(0)]), T("list(0)"), BASIC)
    assert member(mklist([num(0), mklist([num(0)])]), T("list(nat or list(nat))"), BASIC)


def test_variables_only_in_one():
    x = Var("X")
    assert member(x, ONE, BASIC)
    assert not member(x, T("nat"), BASIC)
    assert not member(x, T("nat or list(1)"), BASIC)
    assert member(mklist([x]), T("list(1)"), BASIC)


def test_prims():
    assert member(num(3), Prim("integer"), BASIC)
    assert member(num(3), Prim("number"), BASIC)
    assert not member(num(2.5), Prim("integer"), BASIC)
    assert member(Compound("a"), Prim("atomic"), BASIC)
    assert not member(mklist([num(1)]), Prim("atomic"), BASIC)


def test_member_rejects_complement():
    with pytest.raises(TypeDomainError):
        member(num(0), Not(T("nat")), BASIC)


def test_smart_constructors():
    n = T("nat")
    assert conj(ONE, n) == n and conj(ZERO, n) == ZERO
    assert disj(ZERO, n) == n and disj(ONE, n) == ONE


def test_dnf_distributes():
    R = T("(nat or odd) and list(1)")
    assert dnf(R) == Or(And(T("nat"), T("list(1)")), And(T("odd"), T("list(1)")))
    assert disjuncts(R) == [[T("nat"), T("list(1)")], [T("odd"), T("list(1)")]]


def test_canonical_drops_units_and_sorts():
    assert canonical(T("(nat and 1) or (0 and list(nat)) or nat")) == T("nat")
    assert canonical(T("nat or list(nat)")) == canonical(T("list(nat) or nat"))
    assert canonical(T("0")) == ZERO
    assert canonical(T("nat or 1")) == ONE


def test_depth():
    assert atom_depth_max(T("nat")) == 0
    assert atom_depth_max(T("nat or list(nat)")) == 1
    R = T("tree(tree(list(even) or list(list(nat))))")
    assert canonical(depth_abstract(R, 2)) == T("tree(tree(list(1)))")
    assert depth_abstract(T("list(nat)"), 1) == T("list(nat)")
    assert depth_abstract(T("list(list(nat))"), 1) == T("list(list(1))")


def test_scheme_apply_defaults_to_zero():
    assert scheme_apply({}, ConScheme("list", ("B",))) == T("list(0)")
    assert scheme_apply({"B": T("nat")}, Param("B")) == T("nat")


def test_arity_checked():
    with pytest.raises((ParseError, TypeDomainError)):
        T("list(nat, nat)")
    with pytest.raises((ParseError, TypeDomainError)):
        T("unknown")


@pytest.mark.parametrize("text", [
    "list(B) -> [list(list(B))|B].",  # nested scheme
    "pair(B, B) -> p(B).",  # repeated head parameter
    "list(B) -> [C|list(B)].",  # parameter not in head
    "foo -> f(integer).",  # primitive in rule
    "or -> f.",  # reserved name
])
def test_rule_rejections(text):
    with pytest.raises((ParseError, TypeDomainError)):
        parse_rules(text)


def test_rule_any_position_scheme():
    rs = parse_rules("list(B) -> []. list(B) -> [list(B)|B].")
    assert len(rs.rules) == 2


def test_rules_round_trip():
    again = parse_rules(render_rules(BASIC))
    assert again.rules == BASIC.rules
    with_atoms = parse_rules(":- atoms(a, b).\n" + render_rules(BASIC))
    assert parse_rules(render_rules(with_atoms)).atoms == with_atoms.atoms


def test_closure_under_instantiation_small():
    rng = random.Random(7)
    checked = 0
    for _ in range(300):
        R = random_type(rng, 3)
        t = sample_member(R, rng)
        if t is None:
            continue
        pattern, _ = generalize(t, rng)
        if not member(pattern, R, BASIC):
            continue
        sigma = {v: random_ground(rng, 2) for v in set(_vars(pattern))}
        assert member(apply(sigma, pattern), R, BASIC)
        checked += 1
    assert checked > 20


def _vars(t):
    from lptypes.terms import variables
    return variables(t)


def test_canonical_key_is_order_free():
    assert canonical_key(T("nat or (odd and even)")) == canonical_key(T("(even and odd) or nat"))
