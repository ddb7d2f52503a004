"""Exact finite permutation-group computations on {1, ..., d}.

Everything here is materialized and deterministic: groups are full element
sets in a canonical order (lexicographic on image tuples), so searches such
as :func:`find_mapping` and :func:`pick_tau` always return the same answer.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    ConflictingConstraints,
    DegreeMismatch,
    MalformedCycle,
    OutOfRange,
    RepeatedEntry,
    SizeLimitExceeded,
    TrivialGroup,
)

#: Default cap on materialized group order (10!).
DEFAULT_ORDER_CAP = 3628800


class Permutation(tuple):
    """A permutation of {1..d}, stored as its image tuple.

    ``p[i-1]`` is the image of ``i``; ``p(i)`` is sugar for the same.
    Instances compare and hash as plain tuples, which fixes the canonical
    order used throughout the package.
    """

    __slots__ = ()

    def __new__(cls, images: Iterable[int]) -> "Permutation":
        t = tuple(images)
        if sorted(t) != list(range(1, len(t) + 1)):
            raise MalformedCycle(f"not a bijection of 1..{len(t)}: {t}")
        return tuple.__new__(cls, t)

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(range(1, d + 1))

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        return self[i - 1]

    def after(self, other: "Permutation") -> "Permutation":
        """Composition self o other (apply ``other`` first)."""
        if len(self) != len(other):
            raise DegreeMismatch(f"{len(self)} vs {len(other)}")
        return Permutation(self[other[i] - 1] for i in range(len(self)))

    def inv(self) -> "Permutation":
        images = [0] * len(self)
        for i, j in enumerate(self, start=1):
            images[j - 1] = i
        return Permutation(images)

    def power(self, n: int) -> "Permutation":
        p = Permutation.identity(len(self))
        q = self if n >= 0 else self.inv()
        for _ in range(abs(n)):
            p = q.after(p)
        return p

    def is_identity(self) -> bool:
        return all(self[i] == i + 1 for i in range(len(self)))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles of length >= 2, each starting at its least point."""
        seen = set()
        out = []
        for start in range(1, len(self) + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Permutation{tuple(self)!r}"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, d: int) -> Permutation:
    """Parse disjoint-cycle notation like ``"(1 2 3)(4 5)"``.

    The empty string and ``"()"`` denote the identity.  Entries may be
    separated by spaces or commas.
    """
    stripped = text.strip()
    if stripped and (stripped.count("(") != stripped.count(")")
                     or _CYCLE_RE.sub("", stripped).strip()):
        raise MalformedCycle(f"bad cycle syntax: {text!r}")
    images = list(range(1, d + 1))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        entries = [e for e in re.split(r"[,\s]+", body.strip()) if e]
        if not entries:
            continue
        try:
            points = [int(e) for e in entries]
        except ValueError as exc:
            raise MalformedCycle(f"non-integer entry in {text!r}") from exc
        for p in points:
            if not 1 <= p <= d:
                raise OutOfRange(f"entry {p} outside 1..{d}")
            if p in seen:
                raise RepeatedEntry(f"entry {p} repeated in {text!r}")
            seen.add(p)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b
    return Permutation(images)


@dataclass(frozen=True)
class PermGroup:
    """A fully materialized subgroup of Sym({1..d}).

    ``elements`` is sorted lexicographically on image tuples; this is the
    canonical order relied on by every deterministic search.
    """

    degree: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]
    _element_set: frozenset = field(repr=False, compare=False, default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "_element_set", frozenset(self.elements))

    def __contains__(self, p: Permutation) -> bool:
        return p in self._element_set

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        if self.degree != other.degree:
            raise DegreeMismatch(f"{self.degree} vs {other.degree}")
        return self._element_set <= other._element_set

    def __le__(self, other: "PermGroup") -> bool:
        return self.is_subgroup_of(other)

    def __lt__(self, other: "PermGroup") -> bool:
        return self.is_subgroup_of(other) and self.order < other.order


def generate(generators: Sequence[Permutation], d: int,
             cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Materialize the subgroup generated by ``generators`` inside Sym(d)."""
    gens = tuple(generators)
    for g in gens:
        if g.degree != d:
            raise DegreeMismatch(f"generator degree {g.degree}, expected {d}")
    ident = Permutation.identity(d)
    elements = {ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for a in frontier:
            for g in gens:
                b = g.after(a)
                if b not in elements:
                    if len(elements) >= cap:
                        raise SizeLimitExceeded(f"group order would exceed {cap}")
                    elements.add(b)
                    fresh.append(b)
        frontier = fresh
    return PermGroup(d, gens, tuple(sorted(elements)))


def trivial_group(d: int) -> PermGroup:
    return generate([], d)


def symmetric_group(d: int, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    gens = [parse_cycles("(" + " ".join(map(str, range(1, d + 1))) + ")", d)]
    if d >= 2:
        gens.append(parse_cycles("(1 2)", d))
    return generate(gens, d, cap)


def orbits(G: PermGroup) -> list[tuple[int, ...]]:
    """G-orbits on {1..d}, each sorted, blocks ordered by least element."""
    remaining = set(range(1, G.degree + 1))
    blocks = []
    while remaining:
        start = min(remaining)
        orb = {start}
        frontier = [start]
        while frontier:
            fresh = []
            for x in frontier:
                for g in G.generators:
                    y = g(x)
                    if y not in orb:
                        orb.add(y)
                        fresh.append(y)
            frontier = fresh
        blocks.append(tuple(sorted(orb)))
        remaining -= orb
    return blocks


def is_transitive(G: PermGroup) -> bool:
    return len(orbits(G)) == 1


def is_2transitive_direct(G: PermGroup) -> bool:
    """Transitivity on ordered pairs of distinct points (orbit of (1,2))."""
    d = G.degree
    if d < 2:
        return False
    start = (1, 2)
    orb = {start}
    frontier = [start]
    while frontier:
        fresh = []
        for (x, y) in frontier:
            for g in G.generators:
                p = (g(x), g(y))
                if p not in orb:
                    orb.add(p)
                    fresh.append(p)
        frontier = fresh
    return len(orb) == d * (d - 1)


def is_2transitive_stab(G: PermGroup) -> bool:
    """Point-stabilizer transitivity on the complement, for every point."""
    d = G.degree
    if not is_transitive(G):
        return False
    for x in range(1, d + 1):
        st = stabilizer(G, x)
        others = [y for y in range(1, d + 1) if y != x]
        reach = {others[0]}
        for g in st.elements:
            reach.add(g(others[0]))
        # orbit under a full element set is one pass
        if reach != set(others):
            return False
    return True


def stabilizer(G: PermGroup, x: int) -> PermGroup:
    if not 1 <= x <= G.degree:
        raise OutOfRange(f"point {x} outside 1..{G.degree}")
    elems = tuple(g for g in G.elements if g(x) == x)
    return PermGroup(G.degree, elems, elems)


def preserves_orbits(F: PermGroup, Fp: PermGroup) -> bool:
    """True iff every F-orbit is setwise invariant under every element of Fp."""
    if F.degree != Fp.degree:
        raise DegreeMismatch(f"{F.degree} vs {Fp.degree}")
    for block in orbits(F):
        bset = set(block)
        for g in Fp.generators:
            if {g(x) for x in bset} != bset:
                return False
    return True


def find_mapping(G: PermGroup,
                 constraints: Sequence[tuple[int, int]]) -> Optional[Permutation]:
    """Least element of G (canonical order) with g(a) = b for all (a, b).

    Returns None when no element satisfies the constraints.  Duplicate
    sources with different targets raise ConflictingConstraints; duplicate
    targets with different sources are unsatisfiable and yield None.
    """
    wanted: dict[int, int] = {}
    for a, b in constraints:
        if a in wanted and wanted[a] != b:
            raise ConflictingConstraints(f"source {a} mapped to both {wanted[a]} and {b}")
        wanted[a] = b
    targets = list(wanted.values())
    if len(set(targets)) != len(targets):
        return None
    for g in G.elements:
        if all(g(a) == b for a, b in wanted.items()):
            return g
    return None


def pick_tau(F: PermGroup) -> tuple[Permutation, tuple[int, ...]]:
    """First non-identity element in canonical order, with its longest cycle.

    Ties between cycles of equal length go to the one with the least
    starting point.  The returned cycle always has length >= 2.
    """
    for g in F.elements:
        if not g.is_identity():
            cycs = g.cycles()
            best = max(cycs, key=lambda c: (len(c), -c[0]))
            return g, best
    raise TrivialGroup("pick_tau needs a nontrivial group")


def all_subgroups(d: int, max_generators: int = 2,
                  cap: int = DEFAULT_ORDER_CAP) -> list[PermGroup]:
    """Every subgroup of Sym(d), for small d.

    Closes over all generator tuples of size <= max_generators; two
    generators suffice for d <= 5 since every subgroup of Sym(5) is
    2-generated.  Result sorted by (order, element list).
    """
    sym = symmetric_group(d, cap)
    seen: dict[frozenset, PermGroup] = {}
    triv = trivial_group(d)
    seen[frozenset(triv.elements)] = triv
    pool = list(sym.elements)
    for r in range(1, max_generators + 1):
        for gens in itertools.combinations(pool, r):
            G = generate(gens, d, cap)
            key = frozenset(G.elements)
            if key not in seen:
                seen[key] = G
    return sorted(seen.values(), key=lambda G: (G.order, G.elements))
