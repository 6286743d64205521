"""Text and JSON rendering of analysis results."""
from __future__ import annotations

import json

from .decision import TypeEnv
from .domain import VarTyping, sorted_typings
from .engine import AnalysisResult
from .types import And, Con, Or, ZERO, canonical, disj_all, conj_all, disjuncts, type_key


def tidy(R, env: TypeEnv):
    """Equivalent, more readable form: empty and subsumed disjuncts removed."""
    R = canonical(R)
    conjuncts = []
    for c in disjuncts(R):
        c = [Con(a.ctor, tuple(tidy(x, env) for x in a.args)) if isinstance(a, Con) else a for a in c]
        t = canonical(conj_all(c))
        if not env.is_empty(t):
            conjuncts.append(t)
    kept = []
    for i, c in enumerate(conjuncts):
        later = conjuncts[i + 1:]
        if any(env.includes(o, c) for o in kept) or any(env.includes(o, c) and not env.includes(c, o)
                                                         for o in later):
            continue
        kept.append(c)
    return canonical(disj_all(kept)) if kept else ZERO


def _typing_rows(m: VarTyping, env, raw: bool) -> list:
    rows = []
    for x, t in m.entries:
        shown = canonical(t) if raw else tidy(t, env)
        rows.append((x.name, type_key(shown)))
    return sorted(rows)


def point_rows(result: AnalysisResult, raw: bool = False) -> list:
    cfg = result.cfg
    # a separate environment keeps display work out of the analysis statistics
    env = TypeEnv(result.env.rules)
    out = []
    for p in cfg.points:
        c = cfg.clause_of[p]
        lit = cfg.atom_at(p)
        out.append({
            "id": p,
            "kind": cfg.kind[p],
            "clause_line": c.line,
            "position": cfg.position[p],
            "before": str(lit) if lit is not None else None,
            "typings": [[{"var": v, "type": t} for v, t in _typing_rows(m, env, raw)]
                        for m in sorted_typings(result.at(p))],
        })
    return out


def render_set(rows: list) -> str:
    return "[" + ", ".join("[" + ", ".join(f"{r['var']}/{r['type']}" for r in typing) + "]"
                           for typing in rows) + "]"


def to_text(result: AnalysisResult, stats: bool = False, raw: bool = False) -> str:
    rows = {r["id"]: r for r in point_rows(result, raw)}
    lines = []
    for c in result.program.clauses:
        pts = c.points
        head = ":-" if c.head is None else str(c.head) + (" :-" if c.body else ".")
        lines.append(head)
        for i, p in enumerate(pts):
            lines.append(f"    % {p} ({rows[p]['kind']}): {render_set(rows[p]['typings'])}")
            if i < len(c.body):
                sep = "," if i < len(c.body) - 1 else "."
                lines.append(f"    {c.body[i]}{sep}")
        lines.append("")
    if stats:
        s = result.stats()
        lines.append(f"% emptiness checks: total {s['total_checks']}, distinct {s['distinct_checks']}, "
                     f"repetition {s['repetition']:.2f}")
        lines.append(f"% iterations: {s['iterations']}")
    return "\n".join(lines).rstrip() + "\n"


def to_json(result: AnalysisResult, raw: bool = False) -> str:
    s = result.stats()
    doc = {
        "config": result.config.as_dict(),
        "points": point_rows(result, raw),
        "stats": {k: s[k] for k in ("total_checks", "distinct_checks", "repetition", "iterations")},
    }
    doc["stats"]["repetition"] = round(doc["stats"]["repetition"], 4)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
