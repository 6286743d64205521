import pytest

from gen import BASIC
from lptypes.decision import TypeEnv
from lptypes.domain import (
    ALL_ONE,
    DomainError,
    disjoint_union,
    id_abstract,
    join,
    meet,
    project,
    remove_redundant,
    restrict_out,
    satisfies,
    typing,
    union_type,
    vtset,
    vtset_equiv,
    vtset_leq,
)
from lptypes.parser import parse_type
from lptypes.terms import Var, mklist, num, psi_var
from lptypes.types import ONE, ZERO

x, y = Var("x"), Var("y")


def T(s):
    return parse_type(s, BASIC)


def test_typing_is_sparse():
    m = typing({x: ONE, y: T("nat")})
    assert m.keys() == [y]
    assert m.get(x) == ONE
    assert typing({}) == ALL_ONE


def test_meet_pointwise():
    S = meet(vtset({x: T("nat")}), vtset({x: T("list(1)")}, {y: T("nat")}))
    assert typing({x: T("nat"), y: T("nat")}) in S
    assert len(S) == 2


def test_meet_drops_literal_zero():
    assert meet(vtset({x: ZERO}), id_abstract()) == frozenset()


def test_id_is_top():
    env = TypeEnv(BASIC)
    S = vtset({x: T("nat")})
    assert vtset_equiv(join(id_abstract(), S, env), id_abstract(), env)
    assert vtset_equiv(meet(id_abstract(), S), S, env)
    assert satisfies({}, id_abstract(), BASIC)


def test_disjoint_union_requires_disjoint_domains():
    with pytest.raises(DomainError):
        disjoint_union(vtset({x: T("nat")}), vtset({x: T("nat")}))
    S = disjoint_union(vtset({psi_var(x): T("nat")}), vtset({x: T("list(1)")}))
    assert S == vtset({psi_var(x): T("nat"), x: T("list(1)")})


def test_restrict_out_drops_renamed_and_empty():
    S = vtset({psi_var(x): T("nat"), x: T("list(nat)")}, {x: T("nat and list(1)")})
    assert restrict_out(S, BASIC) == vtset({x: T("list(nat)")})


def test_remove_redundant_dedups_and_drops_empty():
    env = TypeEnv(BASIC)
    S = vtset({x: T("nat")}, {x: T("even")}, {x: T("odd and even")})
    assert remove_redundant(S, env) == vtset({x: T("nat")})


def test_union_of_typings_is_not_pointwise():
    # {x:nat, y:list(1)} u {x:list(1), y:nat} is strictly below the pointwise or
    env = TypeEnv(BASIC)
    S = vtset({x: T("nat"), y: T("list(1)")}, {x: T("list(1)"), y: T("nat")})
    pointwise = vtset({x: union_type(S, x), y: union_type(S, y)})
    assert vtset_leq(S, pointwise, env)
    assert not vtset_leq(pointwise, S, env)


def test_satisfies():
    S = vtset({x: T("list(nat)")})
    assert satisfies({x: mklist([num(0)])}, S, BASIC)
    assert not satisfies({x: mklist([num(1.5)])}, S, BASIC)
    assert not satisfies({}, S, BASIC)  # x unbound is a variable, not a list


def test_project():
    S = vtset({x: T("nat"), y: T("odd")})
    assert project(S, [x]) == vtset({x: T("nat")})
