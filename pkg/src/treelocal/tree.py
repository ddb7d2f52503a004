"""The colored regular tree T_d in the reduced-word model.

Vertices are reduced words over the colors 1..d (no two consecutive letters
equal); the empty word is the base vertex.  The edge between w and w.k
carries color k, which fixes a legal coloring once and for all: with this
convention color-preserving automorphisms are exactly the left regular
action of the free product of d copies of Z/2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import TreeLocalError


class Vertex(tuple):
    """A vertex of T_d: a reduced word of colors. ``Vertex()`` is the base."""

    __slots__ = ()

    def __new__(cls, letters: Sequence[int] = ()) -> "Vertex":
        t = tuple(letters)
        for a, b in zip(t, t[1:]):
            if a == b:
                raise TreeLocalError(f"word not reduced: {t}")
        return tuple.__new__(cls, t)

    @classmethod
    def parse(cls, text: str) -> "Vertex":
        text = text.strip()
        if text in ("", "e"):
            return cls()
        return cls(tuple(int(p) for p in text.split(".")))

    def __str__(self) -> str:
        return "e" if not self else ".".join(map(str, self))

    def __repr__(self) -> str:
        return f"Vertex({str(self)!r})"


BASE = Vertex()


def vertex_key(v: Vertex) -> tuple:
    """Length-lexicographic sort key; the global vertex order."""
    return (len(v), tuple(v))


def neighbor(v: Vertex, k: int) -> Vertex:
    """The vertex across the edge of color k at v."""
    if v and v[-1] == k:
        return Vertex(v[:-1])
    return Vertex(tuple(v) + (k,))


def reduce_word(letters: Sequence[int]) -> Vertex:
    """Reduce a word in the free product of Z/2 factors (aa = empty)."""
    out: list[int] = []
    for k in letters:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(k)
    return Vertex(out)


def _common_prefix_len(u: Vertex, v: Vertex) -> int:
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def distance(u: Vertex, v: Vertex) -> int:
    c = _common_prefix_len(u, v)
    return (len(u) - c) + (len(v) - c)


@dataclass(frozen=True)
class EdgeRef:
    """An edge given by its endpoint nearer the base, plus its color."""

    near: Vertex
    color: int

    def __post_init__(self):
        if self.near and self.near[-1] == self.color:
            raise TreeLocalError("near endpoint already ends with the edge color")

    @property
    def far(self) -> Vertex:
        return Vertex(tuple(self.near) + (self.color,))

    def endpoints(self) -> tuple[Vertex, Vertex]:
        return (self.near, self.far)


def edge_between(u: Vertex, v: Vertex) -> EdgeRef:
    """The edge joining two adjacent vertices."""
    if distance(u, v) != 1:
        raise TreeLocalError(f"{u} and {v} are not adjacent")
    near, far = (u, v) if len(u) < len(v) else (v, u)
    return EdgeRef(near, far[-1])


@dataclass(frozen=True)
class Segment:
    """An oriented geodesic: a start vertex and the colors of its steps."""

    start: Vertex
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        for a, b in zip(self.colors, self.colors[1:]):
            if a == b:
                raise TreeLocalError(f"segment backtracks: colors {self.colors}")

    @property
    def length(self) -> int:
        return len(self.colors)

    def vertices(self) -> list[Vertex]:
        out = [self.start]
        for k in self.colors:
            out.append(neighbor(out[-1], k))
        return out

    @property
    def end(self) -> Vertex:
        v = self.start
        for k in self.colors:
            v = neighbor(v, k)
        return v

    def reversed(self) -> "Segment":
        return Segment(self.end, tuple(reversed(self.colors)))


def geodesic(u: Vertex, v: Vertex) -> Segment:
    """The geodesic segment from u to v."""
    c = _common_prefix_len(u, v)
    colors = tuple(reversed(u[c:])) + tuple(v[c:])
    return Segment(u, colors)


PointOrMid = Union[Vertex, EdgeRef]


def midpoint(u: Vertex, v: Vertex) -> PointOrMid:
    """Vertex midpoint when distance is even, edge midpoint when odd."""
    seg = geodesic(u, v)
    half = seg.length // 2
    verts = seg.vertices()
    if seg.length % 2 == 0:
        return verts[half]
    return edge_between(verts[half], verts[half + 1])


def ball(v: Vertex, R: int, d: int) -> Iterator[Vertex]:
    """All vertices at distance <= R from v, in BFS order."""
    if R < 0:
        raise TreeLocalError("negative radius")
    yield v
    frontier = [v]
    for _ in range(R):
        fresh = []
        for u in frontier:
            for k in range(1, d + 1):
                w = neighbor(u, k)
                if distance(w, v) > distance(u, v):
                    fresh.append(w)
                    yield w
        frontier = fresh


def ball_size(R: int, d: int) -> int:
    """Closed form 1 + d((d-1)^R - 1)/(d-2) for d >= 3."""
    if R == 0:
        return 1
    return 1 + d * ((d - 1) ** R - 1) // (d - 2)


def is_aligned(points: Sequence[Vertex]) -> bool:
    """True iff all points lie on a common geodesic.

    Computed via the Steiner hull: take the union of all pairwise
    geodesics and check no vertex has degree > 2 in it.
    """
    pts = list(points)
    if not pts:
        raise TreeLocalError("is_aligned needs at least one point")
    if len(set(pts)) <= 2:
        return True
    adjacency: dict[Vertex, set[Vertex]] = {}
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            verts = geodesic(a, b).vertices()
            for x, y in zip(verts, verts[1:]):
                adjacency.setdefault(x, set()).add(y)
                adjacency.setdefault(y, set()).add(x)
    return all(len(nb) <= 2 for nb in adjacency.values())


def is_aligned_bruteforce(points: Sequence[Vertex]) -> bool:
    """Independent oracle: all points on the geodesic of the farthest pair."""
    pts = list(points)
    if len(set(pts)) <= 2:
        return True
    far = max(((a, b) for a in pts for b in pts), key=lambda ab: distance(*ab))
    on_path = set(geodesic(*far).vertices())
    return all(p in on_path for p in pts)


@dataclass(frozen=True)
class EventuallyPeriodic:
    """An eventually periodic sequence indexed from 1."""

    pre: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(self.pre))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise TreeLocalError("period must be nonempty")

    def term(self, i: int) -> int:
        if i < 1:
            raise TreeLocalError(f"index {i} < 1")
        if i <= len(self.pre):
            return self.pre[i - 1]
        return self.period[(i - 1 - len(self.pre)) % len(self.period)]


@dataclass(frozen=True)
class LineSpec:
    """A bi-infinite geodesic line through an anchor vertex v_0.

    ``forward.term(i)`` is the color of the edge (v_{i-1}, v_i) for i >= 1;
    ``backward.term(i)`` is the color of the edge (v_{-i}, v_{-i+1}).
    """

    anchor: Vertex
    forward: EventuallyPeriodic
    backward: EventuallyPeriodic

    def __post_init__(self):
        # geodesic check on a window covering both preambles and periods
        w = 2 * (len(self.forward.pre) + len(self.forward.period)
                 + len(self.backward.pre) + len(self.backward.period)) + 4
        for i in range(-w, w):
            if self.edge_color(i) == self.edge_color(i + 1):
                raise TreeLocalError(f"line backtracks at index {i}")

    def edge_color(self, i: int) -> int:
        """Color of the edge (v_{i-1}, v_i)."""
        if i >= 1:
            return self.forward.term(i)
        return self.backward.term(1 - i)

    def vertex(self, i: int) -> Vertex:
        v = self.anchor
        if i >= 0:
            for j in range(1, i + 1):
                v = neighbor(v, self.forward.term(j))
        else:
            for j in range(1, -i + 1):
                v = neighbor(v, self.backward.term(j))
        return v

    def index_of(self, v: Vertex) -> int | None:
        """Index of v on the line, or None when v is off the line."""
        n = distance(self.anchor, v)
        if n == 0:
            return 0
        if self.vertex(n) == v:
            return n
        if self.vertex(-n) == v:
            return -n
        return None

    def vertices(self, lo: int, hi: int) -> list[Vertex]:
        return [self.vertex(i) for i in range(lo, hi + 1)]
