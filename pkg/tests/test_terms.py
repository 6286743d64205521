import random

from hypothesis import given, settings, strategies as st

from lptypes.terms import (
    CONS,
    NIL,
    RHO,
    Compound,
    FnSym,
    StrLit,
    Var,
    apply,
    compose,
    eq,
    ground_encode,
    head_symbol,
    mgu,
    mklist,
    num,
    occurs,
    psi_rename,
    render_term,
    symbol_class,
    variables,
)

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def f(*args):
    return Compound("f", tuple(args))


def test_mgu_basic():
    theta = mgu([(f(X, Compound("b")), f(Compound("a"), Y))])
    assert theta == {X: Compound("a"), Y: Compound("b")}


def test_mgu_clash_and_occurs_check():
    assert mgu([(Compound("a"), Compound("b"))]) is None
    assert mgu([(X, f(X))]) is None
    assert mgu([(f(X), Compound("f", (X, Y)))]) is None


def test_mgu_is_idempotent_on_chains():
    theta = mgu([(X, f(Y)), (Y, f(Z))])
    for t in theta.values():
        assert apply(theta, t) == t
    assert theta[X] == f(f(Z))


def test_literals_unify_by_value():
    assert mgu([(num(1), num(1))]) == {}
    assert mgu([(num(1), num(1.0))]) is None
    assert mgu([(StrLit("a"), Compound("a"))]) is None


def test_compose_order():
    sigma = {Y: Compound("a")}
    theta = {X: f(Y)}
    c = compose(sigma, theta)
    assert apply(c, X) == apply(sigma, apply(theta, X)) == f(Compound("a"))
    assert apply(c, Y) == Compound("a")


def test_head_symbol_and_class():
    assert head_symbol(num(3)) == FnSym("3", 0)
    assert symbol_class(head_symbol(num(3))) == "integer"
    assert symbol_class(head_symbol(num(2.5))) == "float"
    assert symbol_class(head_symbol(StrLit("x"))) == "string"
    assert symbol_class(head_symbol(NIL)) == "atom"
    assert symbol_class(FnSym(CONS, 2)) is None
    assert symbol_class(RHO.sym) is None


def test_ground_encode_and_psi():
    t = f(X, mklist([Y]))
    assert variables(ground_encode(t)) == []
    assert ground_encode(t) == f(RHO, mklist([RHO]))
    r = psi_rename(t)
    assert all(v.psi for v in variables(r))
    assert occurs(X, t) and not occurs(X, r)


def test_render():
    assert render_term(mklist([num(1), num(2)], Var("T"))) == "[1,2|T]"
    assert render_term(Compound("is", (X, Compound("+", (Y, num(1)))))) == "X is (Y + 1)"
    assert render_term(RHO) == "ρ"


def test_eq_is_sorted_solved_form():
    theta = mgu([(f(X, Y), f(Compound("a"), X))])
    E = eq(theta)
    assert [x for x, _ in E] == sorted(theta)
    for x, t in E:
        assert not any(occurs(y, t) for y, _ in E)


terms = st.recursive(
    st.sampled_from([X, Y, Z, Compound("a"), Compound("b"), num(1)]),
    lambda inner: st.builds(lambda a, b: f(a, b), inner, inner) | st.builds(lambda a: Compound("g", (a,)), inner),
    max_leaves=8,
)


@settings(max_examples=200, deadline=None)
@given(terms, terms)
def test_mgu_unifies_or_fails(s, t):
    theta = mgu([(s, t)])
    if theta is not None:
        assert apply(theta, s) == apply(theta, t)
        assert all(apply(theta, v) == v for v in theta.values())


@settings(max_examples=200, deadline=None)
@given(terms, terms, terms, terms)
def test_mgu_split_identity(a, b, c, d):
    # mgu(E1 u E2) agrees with mgu(E1 u eq(mgu(E2))) up to renaming
    E1, E2 = [(a, b)], [(c, d)]
    inner = mgu(E2)
    whole = mgu(E1 + E2)
    if inner is None:
        assert whole is None
        return
    staged = mgu(E1 + list(eq(inner)))
    assert (whole is None) == (staged is None)
    if whole is not None:
        for v in [X, Y, Z]:
            lhs, rhs = apply(whole, v), apply(staged, v)
            assert mgu([(lhs, rhs)]) is not None
            assert len(variables(lhs)) == len(variables(rhs))
