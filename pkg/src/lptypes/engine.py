"""Fixpoint computation of typings at every program point."""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from .builtins import transfer
from .decision import TypeEnv
from .domain import (
    ALL_ONE,
    VarTyping,
    id_abstract,
    remove_redundant,
    sorted_typings,
    vtset_leq,
)
from .program import BIP, CALL, INITIAL, NF, RET, Cfg, Program, build_cfg
from .propagation import aunify
from .types import (
    ONE,
    ZERO,
    And,
    Con,
    One,
    Or,
    RuleSet,
    Zero,
    atom_depth_max,
    canonical,
    depth_abstract,
)


class AnalysisError(ValueError):
    pass


@dataclass
class AnalysisConfig:
    k0: int = 1
    tabling: bool = True
    simplified: bool = False
    max_iterations: int = 100000

    def as_dict(self) -> dict:
        return {"k0": self.k0, "tabling": self.tabling, "simplified": self.simplified}


@dataclass
class AnalysisResult:
    program: Program
    cfg: Cfg
    env: TypeEnv
    config: AnalysisConfig
    assignment: dict  # point -> frozenset of VarTyping
    depth_bound: dict = field(default_factory=dict)
    iterations: int = 0
    seconds: float = 0.0

    def at(self, p: int) -> frozenset:
        return self.assignment[p]

    def exit_point(self) -> int:
        return self.program.query.points[-1]

    def stats(self) -> dict:
        s = self.env.stats()
        s["iterations"] = self.iterations
        s["seconds"] = round(self.seconds, 4)
        return s


def widen(S, k: int) -> frozenset:
    """Cut every type at depth k and canonicalize."""
    return frozenset(m.map_types(lambda t: canonical(depth_abstract(canonical(t), k))) for m in S)


def max_depth(S) -> int:
    return max((atom_depth_max(canonical(t)) for m in S for _, t in m.entries), default=0)


# ---------------------------------------------------------------- simplified mode


def flatten(R, env: TypeEnv):
    """An and/or-free type containing R."""
    if isinstance(R, Or):
        return lub(flatten(R.left, env), flatten(R.right, env), env)
    if isinstance(R, And):
        a, b = flatten(R.left, env), flatten(R.right, env)
        if env.is_empty(And(a, b)):
            return ZERO
        if env.includes(b, a):
            return a
        if env.includes(a, b):
            return b
        return a
    if isinstance(R, Con):
        return Con(R.ctor, tuple(flatten(x, env) for x in R.args))
    return R


def lub(a, b, env: TypeEnv):
    """Least upper bound among and/or-free types, falling back to 1."""
    if env.includes(b, a):
        return b
    if env.includes(a, b):
        return a
    if isinstance(a, Con) and isinstance(b, Con) and a.ctor == b.ctor:
        return Con(a.ctor, tuple(lub(x, y, env) for x, y in zip(a.args, b.args)))
    return ONE


def collapse(S, env: TypeEnv) -> frozenset:
    """Merge a set of typings into a single and/or-free typing."""
    typings = [m.map_types(lambda t: flatten(t, env)) for m in sorted_typings(S)]
    typings = [m for m in typings if not m.has_zero()]
    if not typings:
        return frozenset()
    keys = set().union(*(set(m.keys()) for m in typings))
    out = {}
    for x in keys:
        t = typings[0].get(x)
        for m in typings[1:]:
            t = lub(t, m.get(x), env)
        out[x] = t
    return frozenset({VarTyping.of(out)})


# ---------------------------------------------------------------- fixpoint


class Analyzer:
    def __init__(self, program: Program, rules: RuleSet, config: AnalysisConfig | None = None,
                 env: TypeEnv | None = None):
        self.program = program
        self.config = config or AnalysisConfig()
        self.env = env or TypeEnv(rules, tabling=self.config.tabling)
        self.cfg = build_cfg(program)
        self.on_update = None  # optional callback (point, old set, new set)
        self.edges_in: dict = {p: [] for p in self.cfg.kind}
        for s, t, label in sorted(self.cfg.edges):
            if label in ("call", "ret"):
                self.edges_in[t].append(s)

    def equation(self, q: int, X: dict) -> frozenset:
        cfg, env = self.cfg, self.env
        kind = cfg.kind[q]
        if kind == CALL:
            out = set()
            head = cfg.head_at(q)
            for p in self.edges_in[q]:
                out |= aunify(cfg.atom_at(p).atom, X[p], head, id_abstract(), env)
            return remove_redundant(out, env)
        if kind == RET:
            before = cfg.pred(q)
            call = cfg.atom_at(before).atom
            out = set()
            for e in self.edges_in[q]:
                out |= aunify(cfg.head_at(e), X[e], call, X[before], env)
            return remove_redundant(out, env)
        if kind == NF:
            return X[cfg.pred(q)]
        if kind == BIP:
            return transfer(cfg.atom_at(cfg.pred(q)).atom, X[cfg.pred(q)], env)
        raise AnalysisError(f"no equation for point {q}")

    def run(self, initial) -> AnalysisResult:
        start = time.perf_counter()
        cfg, env, config = self.cfg, self.env, self.config
        initial = frozenset(initial)
        if config.simplified:
            initial = collapse(initial, env)
        X = {p: frozenset() for p in cfg.kind}
        X[cfg.initial] = initial
        depth: dict = {}
        dependents = cfg.dependents()
        queue = deque(sorted(dependents[cfg.initial]))
        queued = set(queue)
        iterations = 0
        while queue:
            q = queue.popleft()
            queued.discard(q)
            if q == cfg.initial:
                continue
            iterations += 1
            if iterations > config.max_iterations:
                raise AnalysisError("iteration limit exceeded")
            new = self.equation(q, X)
            if not new:
                continue
            if config.simplified:
                new = collapse(new, env)
            if q not in depth:
                depth[q] = max(1, max_depth(new) + config.k0)
            new = widen(new, depth[q])
            if vtset_leq(new, X[q], env):
                continue
            merged = X[q] | new
            merged = collapse(merged, env) if config.simplified else remove_redundant(merged, env)
            merged = widen(merged, depth[q]) if config.simplified else merged
            if self.on_update is not None:
                self.on_update(q, X[q], merged)
            X[q] = merged
            for d in sorted(dependents[q]):
                if d not in queued:
                    queue.append(d)
                    queued.add(d)
        return AnalysisResult(self.program, cfg, env, config, X, depth, iterations,
                              time.perf_counter() - start)


def initial_typing(program: Program, bindings: dict) -> frozenset:
    """Typing of the query variables given by name; others are 1."""
    return frozenset({VarTyping.of({program.query_var(n): t for n, t in bindings.items()})})


def analyze(program: Program, rules: RuleSet, bindings: dict | None = None,
            config: AnalysisConfig | None = None, env: TypeEnv | None = None) -> AnalysisResult:
    return Analyzer(program, rules, config, env).run(initial_typing(program, bindings or {}))
