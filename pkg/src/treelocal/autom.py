"""Tree automorphisms as lazy portrait expressions.

An automorphism of T_d is represented by its portrait: the image of the
base vertex together with the local permutation sigma(g, v) at every
vertex, where sigma(g, v) describes how g permutes the edge colors at v.
Evaluation walks the word of a vertex from a point whose image is known,
stepping the image side by the local permutation of each letter.

Expressions are immutable; every instance memoizes its images and local
permutations, so repeated evaluation is cheap.  Edge compatibility
(sigma at both endpoints of an edge agree on the edge color) is checked
lazily where a constructor cannot guarantee it, and violations raise
InconsistentPortrait rather than producing a wrong vertex map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    InconsistentPortrait,
    OrbitViolation,
    RadiusExhausted,
    TreeLocalError,
)
from .permgroups import PermGroup, Permutation, find_mapping
from .tree import (
    BASE,
    EdgeRef,
    LineSpec,
    Vertex,
    ball,
    distance,
    edge_between,
    geodesic,
    midpoint,
    neighbor,
    reduce_word,
)


class Automorphism:
    """Base class: a lazy, memoizing automorphism of T_d."""

    def __init__(self, d: int):
        if d < 3:
            raise TreeLocalError(f"degree {d} < 3")
        self.d = d
        self._apply_memo: dict[Vertex, Vertex] = {}
        self._local_memo: dict[Vertex, Permutation] = {}

    def apply(self, v: Vertex) -> Vertex:
        hit = self._apply_memo.get(v)
        if hit is None:
            hit = self._apply(v)
            self._apply_memo[v] = hit
        return hit

    def local(self, v: Vertex) -> Permutation:
        hit = self._local_memo.get(v)
        if hit is None:
            hit = self._local(v)
            self._local_memo[v] = hit
        return hit

    def __call__(self, v: Vertex) -> Vertex:
        return self.apply(v)

    def _apply(self, v: Vertex) -> Vertex:
        raise NotImplementedError

    def _local(self, v: Vertex) -> Permutation:
        raise NotImplementedError

    def is_exact(self, F: PermGroup) -> bool:
        """True when this expression class guarantees that the set of
        vertices with local permutation outside F is finite."""
        return False

    def describe(self) -> str:
        return type(self).__name__


def _walk_image(g: Automorphism, start: Vertex, start_image: Vertex,
                v: Vertex, check_edges: bool = False) -> Vertex:
    """Image of v obtained by walking the geodesic from start, whose image
    is known, stepping the image side by the local permutation."""
    u = start
    x = start_image
    for k in geodesic(start, v).colors:
        if check_edges:
            w = neighbor(u, k)
            if g.local(u)(k) != g.local(w)(k):
                raise InconsistentPortrait(
                    f"edge ({u}, {w}) color {k}: "
                    f"{g.local(u)(k)} != {g.local(w)(k)}")
        x = neighbor(x, g.local(u)(k))
        u = neighbor(u, k)
    return x


class Identity(Automorphism):
    def __init__(self, d: int):
        super().__init__(d)

    def _apply(self, v: Vertex) -> Vertex:
        return v

    def _local(self, v: Vertex) -> Permutation:
        return Permutation.identity(self.d)

    def is_exact(self, F: PermGroup) -> bool:
        return True

    def describe(self) -> str:
        return "id"


class WordTranslation(Automorphism):
    """Left translation by a reduced word: v -> reduce(w . v).

    These are exactly the color-preserving automorphisms of the word
    model, so the local permutation is the identity everywhere.
    """

    def __init__(self, w: Vertex, d: int):
        super().__init__(d)
        if any(not 1 <= k <= d for k in w):
            raise TreeLocalError(f"word {w} has letters outside 1..{d}")
        self.w = w

    def _apply(self, v: Vertex) -> Vertex:
        return reduce_word(tuple(self.w) + tuple(v))

    def _local(self, v: Vertex) -> Permutation:
        return Permutation.identity(self.d)

    def is_exact(self, F: PermGroup) -> bool:
        return True

    def describe(self) -> str:
        return f"word({self.w})"


class Diagonal(Automorphism):
    """The automorphism acting letterwise by a fixed permutation of colors."""

    def __init__(self, pi: Permutation):
        super().__init__(pi.degree)
        self.pi = pi

    def _apply(self, v: Vertex) -> Vertex:
        return Vertex(tuple(self.pi(k) for k in v))

    def _local(self, v: Vertex) -> Permutation:
        return self.pi

    def is_exact(self, F: PermGroup) -> bool:
        return self.pi in F

    def describe(self) -> str:
        return f"diag({self.pi.cycle_string()})"


class SubtreeDiagonal(Automorphism):
    """Acts by a fixed permutation on colors inside the subtree hanging at u,
    identically elsewhere.  Requires pi to fix the last letter of u so the
    edge into the subtree stays compatible."""

    def __init__(self, u: Vertex, pi: Permutation):
        super().__init__(pi.degree)
        if not u:
            raise TreeLocalError("subtree root must differ from the base; use Diagonal")
        if pi(u[-1]) != u[-1]:
            raise InconsistentPortrait(
                f"permutation must fix the entry color {u[-1]} of {u}")
        self.u = u
        self.pi = pi

    def _in_subtree(self, v: Vertex) -> bool:
        return len(v) >= len(self.u) and v[:len(self.u)] == tuple(self.u)

    def _apply(self, v: Vertex) -> Vertex:
        if not self._in_subtree(v):
            return v
        n = len(self.u)
        return Vertex(tuple(self.u) + tuple(self.pi(k) for k in v[n:]))

    def _local(self, v: Vertex) -> Permutation:
        if self._in_subtree(v):
            return self.pi
        return Permutation.identity(self.d)

    def is_exact(self, F: PermGroup) -> bool:
        return self.pi in F

    def describe(self) -> str:
        return f"subdiag({self.u}, {self.pi.cycle_string()})"


class Patched(Automorphism):
    """Override the local permutations of a base automorphism at finitely
    many vertices.  Consistency is not provable per constructor, so every
    walked edge is compatibility-checked at evaluation time."""

    def __init__(self, base: Automorphism, overrides: dict[Vertex, Permutation]):
        super().__init__(base.d)
        for v, p in overrides.items():
            if p.degree != base.d:
                raise TreeLocalError(f"override at {v} has degree {p.degree}")
        self.base = base
        self.overrides = dict(overrides)

    def _apply(self, v: Vertex) -> Vertex:
        return _walk_image(self, BASE, self.apply_base(), v, check_edges=True)

    def apply_base(self) -> Vertex:
        return self.base.apply(BASE)

    def _local(self, v: Vertex) -> Permutation:
        hit = self.overrides.get(v)
        return hit if hit is not None else self.base.local(v)

    def is_exact(self, F: PermGroup) -> bool:
        # a finite patch cannot change finiteness of the singular set
        return self.base.is_exact(F)

    def describe(self) -> str:
        return f"patched({self.base.describe()}, {len(self.overrides)} overrides)"


class SegmentPortrait(Automorphism):
    """An automorphism prescribed on a finite connected skeleton of vertices
    and filled outward by the least valid element of a fill group.

    The skeleton is a geodesic segment: vertex i maps to images[i] with
    local permutation sigmas[i].  Off the skeleton, each new vertex has a
    single color constraint inherited from its neighbor toward the
    skeleton, and the lexicographically least fill-group element matching
    it is chosen.  The construction exists whenever the fill group can
    always solve one-point constraints produced by the prescribed data,
    which is guaranteed when the prescribed permutations preserve the
    fill group's orbits.
    """

    def __init__(self, vertices: Sequence[Vertex], images: Sequence[Vertex],
                 sigmas: Sequence[Permutation], fill: PermGroup):
        super().__init__(fill.degree)
        if not (len(vertices) == len(images) == len(sigmas)):
            raise TreeLocalError("skeleton arrays must have equal lengths")
        if not vertices:
            raise TreeLocalError("skeleton must be nonempty")
        for a, b in zip(vertices, vertices[1:]):
            if distance(a, b) != 1:
                raise TreeLocalError("skeleton vertices must be consecutive")
        self.skeleton = tuple(vertices)
        self.images = tuple(images)
        self.sigmas = tuple(sigmas)
        self.fill = fill
        self._index = {v: i for i, v in enumerate(self.skeleton)}
        self._validate()

    def _validate(self):
        for i in range(len(self.skeleton) - 1):
            u, w = self.skeleton[i], self.skeleton[i + 1]
            k = edge_between(u, w).color
            if self.sigmas[i](k) != self.sigmas[i + 1](k):
                raise InconsistentPortrait(
                    f"sigma at {u} and {w} disagree on edge color {k}")
            if neighbor(self.images[i], self.sigmas[i](k)) != self.images[i + 1]:
                raise InconsistentPortrait(
                    f"images of {u}, {w} are not related by sigma on color {k}")
            if distance(self.images[i], self.images[i + 1]) != 1:
                raise InconsistentPortrait("images must stay adjacent")

    def _toward_skeleton(self, v: Vertex) -> tuple[Vertex, int]:
        """The neighbor of v on the geodesic toward the skeleton, with the
        connecting edge color.  v must be off the skeleton."""
        seg = geodesic(v, self.skeleton[0])
        for w in seg.vertices():
            if w in self._index:
                proj = w
                break
        step = geodesic(v, proj).colors[0]
        return neighbor(v, step), step

    def _local(self, v: Vertex) -> Permutation:
        i = self._index.get(v)
        if i is not None:
            return self.sigmas[i]
        u, k = self._toward_skeleton(v)
        target = self.local(u)(k)
        sol = find_mapping(self.fill, [(k, target)])
        if sol is None:
            raise OrbitViolation(
                f"no fill element maps color {k} to {target} at {v}")
        return sol

    def _apply(self, v: Vertex) -> Vertex:
        i = self._index.get(v)
        if i is not None:
            return self.images[i]
        u, k = self._toward_skeleton(v)
        return neighbor(self.apply(u), self.local(u)(k))

    def is_exact(self, F: PermGroup) -> bool:
        return self.fill.is_subgroup_of(F)

    def describe(self) -> str:
        return f"portrait(segment of {len(self.skeleton)} vertices)"


class LinePortrait(Automorphism):
    """An automorphism prescribed along a bi-infinite line and filled
    outward by the least valid element of a fill group.

    The vertex map on the line is index_image (an affine map of the index),
    and sigma_at gives the local permutation at v_i.  Everything off the
    line is filled exactly as in SegmentPortrait.  sigma_regular_in marks
    the indices outside which sigma_at is known to land in the fill group,
    so membership certificates can be exact.
    """

    def __init__(self, line: LineSpec, index_image: Callable[[int], int],
                 sigma_at: Callable[[int], Permutation], fill: PermGroup,
                 irregular_indices: tuple[int, ...] = (),
                 check_window: int = 12):
        super().__init__(fill.degree)
        self.line = line
        self.index_image = index_image
        self.sigma_at = sigma_at
        self.fill = fill
        self.irregular_indices = tuple(irregular_indices)
        self._check(check_window)

    def _check(self, window: int):
        for i in range(-window, window):
            k = self.line.edge_color(i + 1)
            if self.sigma_at(i)(k) != self.sigma_at(i + 1)(k):
                raise InconsistentPortrait(
                    f"sigma at line indices {i}, {i + 1} disagree on color {k}")
            j, j2 = self.index_image(i), self.index_image(i + 1)
            if abs(j2 - j) != 1:
                raise InconsistentPortrait("index map must move to a neighbor")
            # the image edge (v_j, v_j2) must carry the color sigma sends k to
            step = self.sigma_at(i)(k)
            if neighbor(self.line.vertex(j), step) != self.line.vertex(j2):
                raise InconsistentPortrait(
                    f"sigma at index {i} sends color {k} off the image edge")

    def _on_line(self, v: Vertex) -> Optional[int]:
        return self.line.index_of(v)

    def _toward_line(self, v: Vertex) -> tuple[Vertex, int]:
        seg = geodesic(v, self.line.anchor)
        for w in seg.vertices():
            if self.line.index_of(w) is not None:
                proj = w
                break
        step = geodesic(v, proj).colors[0]
        return neighbor(v, step), step

    def _local(self, v: Vertex) -> Permutation:
        i = self._on_line(v)
        if i is not None:
            return self.sigma_at(i)
        u, k = self._toward_line(v)
        target = self.local(u)(k)
        sol = find_mapping(self.fill, [(k, target)])
        if sol is None:
            raise OrbitViolation(
                f"no fill element maps color {k} to {target} at {v}")
        return sol

    def _apply(self, v: Vertex) -> Vertex:
        i = self._on_line(v)
        if i is not None:
            return self.line.vertex(self.index_image(i))
        u, k = self._toward_line(v)
        return neighbor(self.apply(u), self.local(u)(k))

    def is_exact(self, F: PermGroup) -> bool:
        if not self.fill.is_subgroup_of(F):
            return False
        # sigma along the line must lie in F outside the irregular indices;
        # spot-check a window around them plus both periodic tails
        lo = min(self.irregular_indices, default=0) - 12
        hi = max(self.irregular_indices, default=0) + 12
        return all(self.sigma_at(i) in F
                   for i in range(lo, hi + 1)
                   if i not in self.irregular_indices)

    def describe(self) -> str:
        return "portrait(line)"


class Compose(Automorphism):
    """apply(v) = g(h(v)); the local permutation obeys the cocycle rule
    sigma(gh, v) = sigma(g, h v) o sigma(h, v)."""

    def __init__(self, g: Automorphism, h: Automorphism):
        if g.d != h.d:
            raise TreeLocalError(f"degree mismatch {g.d} vs {h.d}")
        super().__init__(g.d)
        self.g = g
        self.h = h

    def _apply(self, v: Vertex) -> Vertex:
        return self.g.apply(self.h.apply(v))

    def _local(self, v: Vertex) -> Permutation:
        return self.g.local(self.h.apply(v)).after(self.h.local(v))

    def is_exact(self, F: PermGroup) -> bool:
        return self.g.is_exact(F) and self.h.is_exact(F)

    def describe(self) -> str:
        return f"({self.g.describe()} * {self.h.describe()})"


class Inverse(Automorphism):
    """The inverse automorphism, evaluated by walking the image-side
    geodesic and pulling each color back through the local permutation."""

    def __init__(self, g: Automorphism):
        super().__init__(g.d)
        self.g = g

    def _apply(self, v: Vertex) -> Vertex:
        u = BASE
        x = self.g.apply(BASE)
        for c in geodesic(x, v).colors:
            k = self.g.local(u).inv()(c)
            u = neighbor(u, k)
            x = neighbor(x, c)
        return u

    def _local(self, v: Vertex) -> Permutation:
        return self.g.local(self.apply(v)).inv()

    def is_exact(self, F: PermGroup) -> bool:
        return self.g.is_exact(F)

    def describe(self) -> str:
        return f"inv({self.g.describe()})"


def compose(g: Automorphism, h: Automorphism) -> Automorphism:
    return Compose(g, h)


def inverse(g: Automorphism) -> Automorphism:
    return Inverse(g)


def power(g: Automorphism, n: int) -> Automorphism:
    """g composed with itself n times; negative n inverts first."""
    base = g if n >= 0 else Inverse(g)
    out: Automorphism = Identity(g.d)
    for _ in range(abs(n)):
        out = Compose(base, out)
    return out


# --- displacement classification ---


@dataclass(frozen=True)
class Elliptic:
    fixed: Vertex


@dataclass(frozen=True)
class InversionMove:
    edge: EdgeRef


@dataclass(frozen=True)
class Loxodromic:
    length: int
    axis_point: Vertex


MoveClass = Elliptic | InversionMove | Loxodromic


def classify(g: Automorphism, R: Optional[int] = None) -> MoveClass:
    """Elliptic / inversion / loxodromic classification by the midpoint
    iteration: replace v by the midpoint of [v, g v] (testing both
    endpoints when the midpoint is an edge) while the displacement
    decreases.  The final displacement is 0 for elliptic elements, 1 for
    inversions (with g swapping the last edge), and the translation
    length for loxodromics (certified by d(v, g^2 v) = 2 length)."""
    v = BASE
    disp = distance(v, g.apply(v))
    if R is None:
        R = 4 + 2 * disp
    for _ in range(R + 1):
        if disp == 0:
            return Elliptic(v)
        m = midpoint(v, g.apply(v))
        candidates = [m] if isinstance(m, Vertex) else list(m.endpoints())
        best = min(candidates, key=lambda u: distance(u, g.apply(u)))
        best_disp = distance(best, g.apply(best))
        if best_disp >= disp:
            break
        v, disp = best, best_disp
    else:
        raise RadiusExhausted(f"midpoint iteration did not settle within {R} steps")
    gv = g.apply(v)
    if distance(v, g.apply(gv)) == 2 * disp:
        return Loxodromic(disp, v)
    if disp == 1 and g.apply(gv) == v:
        return InversionMove(edge_between(v, gv))
    raise RadiusExhausted(
        f"iteration stalled at displacement {disp} without certifying a class")


def eta(g: Automorphism, at: Vertex = BASE) -> int:
    """Parity of the displacement length; a homomorphism to Z/2 and
    independent of the chosen vertex since T is bipartite."""
    return distance(at, g.apply(at)) % 2


# --- membership in U(F'), G(F), G(F,F') ---


@dataclass(frozen=True)
class MembershipCertificate:
    radius: int
    singular_in_radius: tuple[Vertex, ...]
    in_Uprime_in_radius: bool
    exact: bool


def singular_support(g: Automorphism, F: PermGroup, R: int) -> list[Vertex]:
    """Vertices in ball(base, R) where the local permutation leaves F."""
    return [v for v in ball(BASE, R, g.d) if g.local(v) not in F]


def certify_membership(g: Automorphism, F: PermGroup, Fp: PermGroup,
                       R: int) -> MembershipCertificate:
    singular = []
    in_up = True
    for v in ball(BASE, R, g.d):
        s = g.local(v)
        if s not in F:
            singular.append(v)
        if s not in Fp:
            in_up = False
    return MembershipCertificate(
        radius=R,
        singular_in_radius=tuple(singular),
        in_Uprime_in_radius=in_up,
        exact=g.is_exact(F),
    )


def moved_set(g: Automorphism, window: Iterable[Vertex]) -> list[Vertex]:
    return [v for v in window if g.apply(v) != v]


def conjugate_support_shift_check(a: Automorphism, b: Automorphism,
                                  window: Sequence[Vertex]) -> bool:
    """The moved set of a^-1 b a on the window equals the a-preimage of the
    moved set of b on the a-image of the window."""
    conj = Compose(Inverse(a), Compose(b, a))
    lhs = set(moved_set(conj, window))
    a_inv = Inverse(a)
    rhs = {a_inv.apply(v) for v in moved_set(b, [a.apply(w) for w in window])}
    return lhs == rhs


def equal_on_ball(g: Automorphism, h: Automorphism, R: int) -> bool:
    if g.d != h.d:
        raise TreeLocalError(f"degree mismatch {g.d} vs {h.d}")
    return all(g.apply(v) == h.apply(v) for v in ball(BASE, R, g.d))
