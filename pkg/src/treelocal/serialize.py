"""JSON wire formats for trees, groups, elements, quasimorphisms, chains.

All encoders produce plain dicts/lists ready for json.dumps; decoders
accept the same shapes.  Vertex text format: dot-separated colors with
the base vertex rendered "e".
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import TreeLocalError
from .permgroups import Permutation, generate, parse_cycles, pick_tau
from .tree import EventuallyPeriodic, LineSpec, Segment, Vertex
from .autom import (
    Automorphism,
    Compose,
    Diagonal,
    Inverse,
    Patched,
    SubtreeDiagonal,
    WordTranslation,
)
from .localaction import GroupContext, build_line, rotation_r, translation_t
from .chains import AlternatingChain


# --- tree types ---


def encode_vertex(v: Vertex) -> dict:
    return {"v": str(v)}


def decode_vertex(obj: dict) -> Vertex:
    return Vertex.parse(obj["v"])


def encode_segment(s: Segment) -> dict:
    return {"start": str(s.start), "colors": list(s.colors)}


def decode_segment(obj: dict) -> Segment:
    return Segment(Vertex.parse(obj["start"]), tuple(obj["colors"]))


def encode_line(L: LineSpec) -> dict:
    return {
        "anchor": str(L.anchor),
        "forward": {"pre": list(L.forward.pre), "period": list(L.forward.period)},
        "backward": {"pre": list(L.backward.pre), "period": list(L.backward.period)},
    }


def decode_line(obj: dict) -> LineSpec:
    def seq(o: dict) -> EventuallyPeriodic:
        return EventuallyPeriodic(tuple(o.get("pre", ())), tuple(o["period"]))

    return LineSpec(Vertex.parse(obj["anchor"]),
                    seq(obj["forward"]), seq(obj["backward"]))


# --- group specs ---


def decode_group_spec(obj: dict) -> tuple[int, list[str], list[str]]:
    """A group-spec file: {"d": n, "F": [cycles], "Fprime": [cycles]}."""
    for key in ("d", "F", "Fprime"):
        if key not in obj:
            raise TreeLocalError(f"group spec missing key {key!r}")
    return int(obj["d"]), list(obj["F"]), list(obj["Fprime"])


def context_from_spec(obj: dict) -> GroupContext:
    d, f_gens, fp_gens = decode_group_spec(obj)
    F = generate([parse_cycles(s, d) for s in f_gens], d)
    Fp = generate([parse_cycles(s, d) for s in fp_gens], d)
    return GroupContext(d, F, Fp)


# --- elements ---


def decode_element(obj: dict, d: int,
                   ctx: Optional[GroupContext] = None) -> Automorphism:
    op = obj.get("op")
    if op == "word":
        return WordTranslation(Vertex.parse(obj["w"]), d)
    if op == "diag":
        return Diagonal(parse_cycles(obj["perm"], d))
    if op == "subdiag":
        return SubtreeDiagonal(Vertex.parse(obj["at"]),
                               parse_cycles(obj["perm"], d))
    if op == "compose":
        args = [decode_element(a, d, ctx) for a in obj["args"]]
        if not args:
            raise TreeLocalError("compose needs at least one argument")
        out = args[0]
        for a in args[1:]:
            out = Compose(out, a)
        return out
    if op == "inverse":
        return Inverse(decode_element(obj["arg"], d, ctx))
    if op == "patched":
        base = decode_element(obj["base"], d, ctx)
        overrides = {Vertex.parse(v): parse_cycles(p, d)
                     for v, p in obj["overrides"]}
        return Patched(base, overrides)
    if op == "line":
        if ctx is None:
            if "spec" not in obj:
                raise TreeLocalError("line element needs a group context")
            ctx = context_from_spec(obj["spec"])
        if "line" in obj:
            L = decode_line(obj["line"])
            tau, cycle = pick_tau(ctx.F)
        else:
            L, tau, cycle = build_line(ctx)
        kind = obj.get("kind", "t")
        if kind == "t":
            return translation_t(ctx, L)
        if kind == "r":
            return rotation_r(ctx, L, tau, cycle)
        raise TreeLocalError(f"unknown line element kind {kind!r}")
    raise TreeLocalError(f"unknown element op {op!r}")


# --- chains ---


def encode_chain(c: AlternatingChain) -> dict:
    terms = sorted(
        ([[str(v) for v in key], str(coeff)] for key, coeff in c.terms.items()),
        key=lambda t: t[0])
    return {"degree": c.degree, "terms": terms}


def decode_chain(obj: dict) -> AlternatingChain:
    raw = [(tuple(Vertex.parse(v) for v in key), Fraction(coeff))
           for key, coeff in obj["terms"]]
    return AlternatingChain.build(int(obj["degree"]), raw)


# --- DOT export ---


def dot_ball(d: int, radius: int, center: Vertex = Vertex()) -> str:
    """Graphviz DOT text of the ball around a vertex, edges labeled with
    their colors."""
    from .tree import ball, distance, neighbor

    nodes = list(ball(center, radius, d))
    node_set = set(nodes)
    lines = ["graph tree {"]
    for v in nodes:
        lines.append(f'  "{v}";')
    for v in nodes:
        for k in range(1, d + 1):
            w = neighbor(v, k)
            if w in node_set and (len(w), tuple(w)) > (len(v), tuple(v)):
                lines.append(f'  "{v}" -- "{w}" [label={k}];')
    lines.append("}")
    return "\n".join(lines)
