import random

import pytest

from gen import BASIC, LISTTREE, random_ext_type, random_ground, random_type
from lptypes.decision import (
    EmptinessCache,
    Seq,
    SeqAnd,
    SeqNot,
    SeqOr,
    TypeEnv,
    decide,
    enumerate_witness,
    etype,
    etype_tabled,
    ext_key,
    includes,
    member_ground,
    push_complement,
    seq_empty,
)
from lptypes.domain import remove_redundant, typing, vtset, vtset_equiv, vtset_leq
from lptypes.parser import parse_type
from lptypes.terms import NIL, RHO, Compound, Var, ground_encode, mklist, num
from lptypes.types import ONE, ZERO, And, Not, TypeDomainError, member


def T(s, rules=BASIC):
    return parse_type(s, rules)


x, y = Var("x"), Var("y")


def test_trivial():
    assert etype(ZERO, BASIC)
    assert not etype(ONE, BASIC)
    assert not etype(Not(T("list(1)")), BASIC)  # rho escapes every constructor


def test_known_emptiness_facts():
    assert etype(T("nat and list(1)"), BASIC)
    assert etype(T("list(nat) and ~list(nat)"), BASIC)
    assert etype(T("even and odd"), BASIC)
    assert not etype(T("nat and ~even"), BASIC)
    assert etype(T("(even or odd) and ~nat"), BASIC)


def test_includes():
    env = TypeEnv(BASIC)
    assert env.includes(T("list(nat)"), T("list(even)"))
    assert env.includes(T("list(nat)"), T("list(even) or list(odd)"))
    assert not env.includes(T("list(even) or list(odd)"), T("list(nat)"))
    assert env.includes(T("nat"), T("even or odd")) and env.includes(T("even or odd"), T("nat"))


def test_prim_axioms():
    env = TypeEnv(BASIC)
    assert not env.is_empty(T("integer and nat"))  # 0 is both
    assert env.is_empty(T("float and nat"))
    assert env.is_empty(T("integer and float"))
    assert not env.is_empty(T("number and ~integer"))
    assert env.is_empty(T("atom and list(1) and ~list(0)"))
    assert not env.is_empty(T("atom and list(0)"))  # []
    assert not env.is_empty(T("atom and ~list(0) and ~tree(0)"))  # reservoir


def test_witness_examples():
    assert enumerate_witness(T("nat"), BASIC, 2) == num(0)
    assert enumerate_witness(ZERO, BASIC, 4) is None
    w = enumerate_witness(T("and(list(0), tree(0))", LISTTREE), LISTTREE, 2)
    assert w == Compound("nil")
    w = enumerate_witness(T("list(nat) and ~(list(even) or list(odd))"), BASIC, 4)
    assert w is not None and member_ground(w, T("list(nat)"), BASIC)
    assert not member(w, T("list(even)"), BASIC) and not member(w, T("list(odd)"), BASIC)


def test_push_complement_single_and_pair():
    A, B = T("list(even) or list(odd)"), T("list(nat)")
    assert push_complement(SeqNot(Seq((A,)))) == Seq((Not(A),))
    assert push_complement(SeqNot(Seq((A, B)))) == SeqOr(Seq((Not(A), ONE)), Seq((ONE, Not(B))))


def test_example_equivalence_of_sets():
    mu1 = typing({x: T("list(even)"), y: T("list(nat)")})
    mu2 = typing({x: T("list(odd)"), y: T("list(nat)")})
    mu3 = typing({x: T("list(even) or list(odd)"), y: T("list(nat)")})
    env = TypeEnv(BASIC)
    assert vtset_equiv(vtset(mu1, mu2), vtset(mu3), env)
    # the literal push-and-distribute reduction agrees
    R1 = Seq((T("list(even)"), T("list(nat)")))
    R2 = Seq((T("list(odd)"), T("list(nat)")))
    T1 = Seq((T("list(even) or list(odd)"), T("list(nat)")))
    assert seq_empty(SeqAnd(SeqOr(R1, R2), SeqNot(T1)), env)
    assert seq_empty(SeqAnd(T1, SeqNot(SeqOr(R1, R2))), env)


def test_redundancy_example():
    mu1 = typing({x: T("list(even)"), y: T("list(nat)")})
    mu2 = typing({x: T("list(odd)"), y: T("list(nat)")})
    mu3 = typing({x: T("list(nat)"), y: T("list(nat)")})
    assert remove_redundant(vtset(mu1, mu2, mu3), BASIC) == vtset(mu3)
    assert remove_redundant(frozenset(), BASIC) == frozenset()


def test_leq_basics():
    env = TypeEnv(BASIC)
    S = vtset({x: T("list(nat)")})
    assert vtset_leq(frozenset(), S, env)
    assert not vtset_leq(S, vtset({x: T("list(even)")}), env)
    assert vtset_leq(vtset({x: T("list(even)")}), S, env)
    assert not vtset_leq(vtset({}), S, env)


def test_cache_hits_and_misses():
    cache = EmptinessCache()
    R = T("nat and list(1)")
    assert etype_tabled(R, BASIC, cache)
    assert etype_tabled(R, BASIC, cache)
    assert (cache.hits, cache.misses) == (1, 1)
    etype_tabled(T("list(1) and nat"), BASIC, cache)
    assert cache.misses == 1  # same canonical key


def test_env_statistics():
    env = TypeEnv(BASIC)
    for _ in range(3):
        env.is_empty(T("nat and ~even"))
    s = env.stats()
    assert (s["total_checks"], s["distinct_checks"], s["computations"]) == (3, 1, 1)
    assert s["repetition"] == 3
    off = TypeEnv(BASIC, tabling=False)
    for _ in range(3):
        off.is_empty(T("nat and ~even"))
    assert off.stats()["computations"] == 3


def test_unknown_constructor_is_error():
    from lptypes.types import Con
    with pytest.raises(TypeDomainError):
        etype(Con("nosuch", ()), BASIC)


def test_ext_key_orders_conjuncts():
    assert ext_key(T("nat and ~even")) == ext_key(T("~even and nat"))


def test_oracle_agreement_sample():
    rng = random.Random(11)
    for _ in range(60):
        R = random_ext_type(rng, 2)
        empty, bound = decide(R, BASIC)
        w = enumerate_witness(R, BASIC, max(bound, 1) + 1)
        assert empty == (w is None), R


def test_chi_transfer_sample():
    rng = random.Random(5)
    for _ in range(200):
        R = random_type(rng, 3)
        from gen import random_term
        t = random_term(rng, 3, (x, y))
        assert member(t, R, BASIC) == member_ground(ground_encode(t), R, BASIC)


def test_seq_empty_agrees_with_leq():
    rng = random.Random(3)
    env = TypeEnv(BASIC)
    for _ in range(40):
        S1 = vtset(*[{x: random_type(rng, 2), y: random_type(rng, 2)} for _ in range(rng.randint(1, 2))])
        S2 = vtset(*[{x: random_type(rng, 2), y: random_type(rng, 2)} for _ in range(rng.randint(1, 2))])
        lhs = _or(Seq((m.get(x), m.get(y))) for m in S1)
        rhs = _or(Seq((m.get(x), m.get(y))) for m in S2)
        assert seq_empty(SeqAnd(lhs, SeqNot(rhs)), env) == vtset_leq(S1, S2, env)


def _or(seqs):
    seqs = list(seqs)
    out = seqs[0]
    for s in seqs[1:]:
        out = SeqOr(out, s)
    return out


def test_includes_transitive_sample():
    rng = random.Random(9)
    env = TypeEnv(BASIC)
    for _ in range(100):
        a, b, c = (random_type(rng, 2) for _ in range(3))
        if env.includes(a, b) and env.includes(b, c):
            assert env.includes(a, c)
