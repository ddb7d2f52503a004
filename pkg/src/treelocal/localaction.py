"""Explicit constructions inside the groups G(F,F').

G(F,F') consists of the tree automorphisms whose local permutations lie
in F' everywhere and in F at all but finitely many vertices, for a pair
F <= F' of subgroups of Sym({1..d}) such that F' preserves the F-orbits.

This module builds the concrete witnesses the theory turns on: a colored
periodic line, a translation by 2 and a rotation stabilizing it, segment
transport elements, the pointwise matchability test for segments, and
the obstruction/escape witnesses that separate the 2-transitive case
from the rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    ConstraintUnsolvable,
    HypothesisUnverified,
    IncompatibleSigma,
    InconsistentPortrait,
    LengthMismatch,
    NotStabilizing,
    NotTwoTransitive,
    SizeLimitExceeded,
    TreeLocalError,
)
from .permgroups import (
    PermGroup,
    Permutation,
    find_mapping,
    is_2transitive_direct,
    orbits,
    pick_tau,
    preserves_orbits,
    stabilizer,
)
from .autom import (
    Automorphism,
    Identity,
    Inverse,
    LinePortrait,
    SegmentPortrait,
    WordTranslation,
)
from .tree import (
    BASE,
    EventuallyPeriodic,
    LineSpec,
    Segment,
    Vertex,
    distance,
    geodesic,
    neighbor,
    reduce_word,
)


@dataclass
class GroupContext:
    """A validated pair F < F' < Sym({1..d}) with F' preserving F-orbits."""

    d: int
    F: PermGroup
    Fp: PermGroup
    relaxed_orbits: bool = False
    _match_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.d < 3:
            raise TreeLocalError(f"degree {self.d} < 3")
        if self.F.degree != self.d or self.Fp.degree != self.d:
            raise TreeLocalError("group degrees do not match d")
        if not self.F.is_subgroup_of(self.Fp):
            raise TreeLocalError("F must be a subgroup of F'")
        if self.F.order == self.Fp.order:
            raise TreeLocalError("F must be a proper subgroup of F'")
        if not self.relaxed_orbits and not preserves_orbits(self.F, self.Fp):
            raise TreeLocalError("F' must preserve the orbits of F")


# --- pointwise matchability of color sequences ---


def _slot_constraints(a: Sequence[int], b: Sequence[int],
                      i: int) -> list[tuple[int, int]]:
    """Constraints on the permutation at position i of a vertexwise match
    of color sequences a onto b (positions 0..len(a))."""
    cons = []
    if i >= 1:
        cons.append((a[i - 1], b[i - 1]))
    if i <= len(a) - 1:
        cons.append((a[i], b[i]))
    return cons


def colors_matchable(ctx: GroupContext, a: tuple[int, ...],
                     b: tuple[int, ...]) -> bool:
    """True iff there are rho_0..rho_n in F' with rho_{i-1}(a_i) = b_i and
    rho_i(a_i) = b_i for every i.  The slots are independent: each carries
    at most two constraints, so existence is a per-slot check."""
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} vs {len(b)}")
    key = (a, b)
    hit = ctx._match_cache.get(key)
    if hit is None:
        hit = all(
            find_mapping(ctx.Fp, _slot_constraints(a, b, i)) is not None
            for i in range(len(a) + 1))
        ctx._match_cache[key] = hit
    return hit


def is_translate(ctx: GroupContext, s: Segment, s2: Segment,
                 oriented: bool = True) -> bool:
    """Whether some element of G(F,F') carries s onto s2 (as oriented
    segments; the unoriented variant also tries the reversal).

    Soundness: restricting such an element to s gives the slot
    permutations.  Completeness: a slotwise match extends to a global
    element because F' preserves F-orbits, so every off-segment vertex
    gets a valid least-F fill.  Start vertices are irrelevant: word
    translations are color-transparent and act transitively on vertices.
    """
    a, b = s.colors, s2.colors
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} vs {len(b)}")
    if colors_matchable(ctx, a, b):
        return True
    if not oriented:
        return colors_matchable(ctx, a, tuple(reversed(b)))
    return False


def is_translate_bruteforce(ctx: GroupContext, s: Segment, s2: Segment) -> bool:
    """Oracle for is_translate: exhaust all |F'|^(n+1) slot assignments."""
    a, b = s.colors, s2.colors
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} vs {len(b)}")
    n = len(a)

    def rec(i: int, prev: Optional[Permutation]) -> bool:
        if i > n:
            return True
        for rho in ctx.Fp.elements:
            if i >= 1 and (prev(a[i - 1]) != b[i - 1] or rho(a[i - 1]) != b[i - 1]):
                continue
            if rec(i + 1, rho):
                return True
        return False

    return rec(0, None)


# --- extension and transport ---


def extend_from_segment(ctx: GroupContext, source: Segment, target: Segment,
                        sigma_choices: Sequence[Permutation]) -> Automorphism:
    """Extend a prescribed vertexwise map of segments to an element of
    G(F,F') by filling every off-segment vertex with the least F element
    matching its single inherited color constraint."""
    if source.length != target.length:
        raise LengthMismatch(f"{source.length} vs {target.length}")
    sigmas = list(sigma_choices)
    if source.length == 0 and not sigmas:
        sigmas = [Permutation.identity(ctx.d)]
    if len(sigmas) != source.length + 1:
        raise IncompatibleSigma(
            f"need {source.length + 1} permutations, got {len(sigmas)}")
    for p in sigmas:
        if p not in ctx.Fp:
            raise IncompatibleSigma(f"{p.cycle_string()} is not in F'")
    try:
        return SegmentPortrait(source.vertices(), target.vertices(), sigmas, ctx.F)
    except InconsistentPortrait as exc:
        raise IncompatibleSigma(str(exc)) from exc


@dataclass(frozen=True)
class TransportResult:
    element: Automorphism
    checked_radius: int


def _slot_sigmas(ctx: GroupContext, a: tuple[int, ...],
                 b: tuple[int, ...]) -> Optional[list[Permutation]]:
    """Least valid permutation per slot (preferring F over F'), or None."""
    out = []
    for i in range(len(a) + 1):
        cons = _slot_constraints(a, b, i)
        rho = find_mapping(ctx.F, cons) or find_mapping(ctx.Fp, cons)
        if rho is None:
            return None
        out.append(rho)
    return out


def segment_transport(ctx: GroupContext, s: Segment,
                      s2: Segment) -> Optional[TransportResult]:
    """An element of G(F,F') carrying s onto s2 vertex by vertex, when one
    exists (equivalently, when is_translate holds)."""
    if s.length != s2.length:
        raise LengthMismatch(f"{s.length} vs {s2.length}")
    sigmas = _slot_sigmas(ctx, s.colors, s2.colors)
    if sigmas is None:
        return None
    g = SegmentPortrait(s.vertices(), s2.vertices(), sigmas, ctx.F)
    radius = max(2, s.length + 2)
    for u, x in zip(s.vertices(), s2.vertices()):
        if g.apply(u) != x:
            raise InconsistentPortrait(f"transport does not map {u} to {x}")
    return TransportResult(element=g, checked_radius=radius)


def transport_into_line(ctx: GroupContext, s: Segment, L: LineSpec,
                        parity: str = "even") -> TransportResult:
    """Send s onto the line L, optionally with even displacement of the
    segment's start vertex.  Needs F' 2-transitive so every slot
    constraint pair is solvable."""
    if parity not in ("even", "any"):
        raise TreeLocalError(f"parity must be 'even' or 'any', not {parity!r}")
    if not is_2transitive_direct(ctx.Fp):
        raise NotTwoTransitive("transport into a line needs F' 2-transitive")
    n = s.length
    # scan candidate anchor indices outward from 0; target occupies
    # indices j..j+n in the increasing direction
    for radius in range(0, 64):
        for j in ([0] if radius == 0 else [radius, -radius]):
            if parity == "even" and distance(s.start, L.vertex(j)) % 2 != 0:
                continue
            target = Segment(L.vertex(j),
                             tuple(L.edge_color(j + i) for i in range(1, n + 1)))
            sigmas = _slot_sigmas(ctx, s.colors, target.colors)
            if sigmas is None:
                continue
            g = SegmentPortrait(s.vertices(), target.vertices(), sigmas, ctx.F)
            return TransportResult(element=g, checked_radius=max(2, n + 2))
    raise ConstraintUnsolvable("no target position found on the line")


# --- the line, its translation and rotation ---


def build_line(ctx: GroupContext,
               anchor: Vertex = BASE) -> tuple[LineSpec, Permutation, tuple[int, ...]]:
    """The periodic colored line determined by the canonical choice of a
    nontrivial permutation tau in F with longest cycle (n_1 ... n_k).

    For k = 2 the edge colors alternate n_1, n_2 in both directions with
    edge (v_-1, v_0) colored n_1 and (v_0, v_1) colored n_2.  For k >= 3
    the backward side alternates n_1, n_2 starting with n_1 and the
    forward side alternates n_2, n_3 starting with n_2.
    """
    tau, cycle = pick_tau(ctx.F)
    if len(cycle) == 2:
        n1, n2 = cycle[0], cycle[1]
        forward = EventuallyPeriodic((), (n2, n1))
        backward = EventuallyPeriodic((), (n1, n2))
    else:
        n1, n2, n3 = cycle[0], cycle[1], cycle[2]
        forward = EventuallyPeriodic((), (n2, n3))
        backward = EventuallyPeriodic((), (n1, n2))
    return LineSpec(anchor, forward, backward), tau, cycle


def _cached_sigma(solver):
    cache: dict[int, Permutation] = {}

    def sigma_at(i: int) -> Permutation:
        hit = cache.get(i)
        if hit is None:
            hit = solver(i)
            cache[i] = hit
        return hit

    return sigma_at


def _line_slot(ctx: GroupContext, cons: list[tuple[int, int]],
               preferred: Sequence[Permutation]) -> Permutation:
    """A permutation satisfying the slot constraints: first matching
    preferred candidate lying in F', else least in F, else least in F'."""
    for cand in preferred:
        if cand in ctx.Fp and all(cand(x) == y for x, y in cons):
            return cand
    sol = find_mapping(ctx.F, cons) or find_mapping(ctx.Fp, cons)
    if sol is None:
        raise ConstraintUnsolvable(f"no F' element satisfies {cons}")
    return sol


def _irregular_window(ctx: GroupContext, sigma_at, window: int = 12) -> tuple[int, ...]:
    return tuple(i for i in range(-window, window + 1)
                 if sigma_at(i) not in ctx.F)


def translation_t(ctx: GroupContext, L: LineSpec) -> Automorphism:
    """The translation v_i -> v_{i+2} along L.  The local permutation at
    v_i must send the line colors e(i), e(i+1) to e(i+2), e(i+3); by
    periodicity the identity works except near the seam of the two
    periodic sides, where the least compatible element is chosen."""
    ident = Permutation.identity(ctx.d)

    def solve(i: int) -> Permutation:
        cons = [(L.edge_color(i), L.edge_color(i + 2)),
                (L.edge_color(i + 1), L.edge_color(i + 3))]
        return _line_slot(ctx, cons, [ident])

    sigma_at = _cached_sigma(solve)
    return LinePortrait(L, lambda i: i + 2, sigma_at, ctx.F,
                        irregular_indices=_irregular_window(ctx, sigma_at))


def rotation_r(ctx: GroupContext, L: LineSpec, tau: Permutation,
               cycle: tuple[int, ...]) -> Automorphism:
    """The rotation v_i -> v_{-i} fixing v_0.  At v_0 the local
    permutation swaps the two line colors (an F' slot); along the rest of
    the line the solver prefers powers of tau and otherwise takes the
    least compatible element of F, falling back to F'."""

    def solve(i: int) -> Permutation:
        cons = [(L.edge_color(i), L.edge_color(1 - i)),
                (L.edge_color(i + 1), L.edge_color(-i))]
        return _line_slot(ctx, cons, [tau.power(i), tau.power(-i)])

    sigma_at = _cached_sigma(solve)
    return LinePortrait(L, lambda i: -i, sigma_at, ctx.F,
                        irregular_indices=_irregular_window(ctx, sigma_at))


def edge_transitivity_check(ctx: GroupContext, L: LineSpec,
                            generators: Sequence[Automorphism],
                            window: int) -> bool:
    """Whether words of length <= window in the generators act transitively
    on the geometric edges of L with indices in [-window, window].

    Edge i is the pair (v_{i-1}, v_i).  Each generator must stabilize L
    setwise on the checked window.
    """
    if not generators:
        return False
    span = 3 * window
    moves = []
    for g in generators:
        for h in (g, Inverse(g)):
            index_map: dict[int, int] = {}
            for i in range(-span - 1, span + 1):
                j = L.index_of(h.apply(L.vertex(i)))
                if j is None:
                    if -window <= i <= window:
                        raise NotStabilizing(
                            f"{g.describe()} moves v_{i} off the line")
                    continue
                index_map[i] = j
            moves.append(index_map)

    def edge_image(mv: dict[int, int], i: int) -> Optional[int]:
        a, b = mv.get(i - 1), mv.get(i)
        if a is None or b is None or abs(a - b) != 1:
            return None
        return max(a, b)

    orbit = {0}
    frontier = [0]
    for _ in range(window):
        fresh = []
        for i in frontier:
            for mv in moves:
                j = edge_image(mv, i)
                if j is not None and abs(j) <= span and j not in orbit:
                    orbit.add(j)
                    fresh.append(j)
        frontier = fresh
    return all(i in orbit for i in range(-window, window + 1))


# --- witnesses for the non-2-transitive branch ---


def boundary_escape_witness(d: int, prefix_length: int = 6) -> tuple[Automorphism, int]:
    """A color-preserving element g moving a ray off itself.

    The ray gamma repeats the color pattern (1, 2), so the vertices
    gamma(1) and gamma(3) see identical colorings; g is the word
    translation taking gamma(1) to a vertex w hanging off gamma(3), and
    the returned radius bounds where the divergence is visible.
    """
    if d < 3:
        raise TreeLocalError(f"degree {d} < 3")
    if prefix_length < 4:
        raise TreeLocalError("prefix must have length at least 4")
    colors = tuple((1, 2)[i % 2] for i in range(prefix_length))
    gamma = Segment(BASE, colors)
    ray = gamma.vertices()
    v1, v2 = ray[1], ray[3]
    off = next(k for k in range(1, d + 1) if k != v2[-1] and k != colors[3])
    w = neighbor(v2, off)
    g = WordTranslation(reduce_word(tuple(w) + tuple(reversed(v1))), d)
    if g.apply(v1) != w:
        raise TreeLocalError("witness construction failed")
    on_ray = set(ray)
    divergence = next(distance(BASE, g.apply(u))
                      for u in ray if g.apply(u) not in on_ray)
    return g, divergence


@dataclass(frozen=True)
class ObstructionWitness:
    """Two short segments through a common edge color that no element of
    G(F,F') can match: the stabilizer of the color a in F' has b1 and b2
    in different orbits."""

    a: Optional[int]
    b1: int
    b2: int
    gamma1: Segment
    gamma2: Segment
    translate: bool


def e2_obstruction(ctx: GroupContext) -> Optional[ObstructionWitness]:
    """Absent iff F' is 2-transitive; otherwise a pair of segments that
    fail is_translate.  If F' is intransitive the witness is a pair of
    length-1 segments in different color orbits; if transitive, a pair of
    length-2 segments ending with a common color a whose first colors lie
    in different orbits of the stabilizer of a."""
    if is_2transitive_direct(ctx.Fp):
        return None
    blocks = orbits(ctx.Fp)
    if len(blocks) > 1:
        b1, b2 = blocks[0][0], blocks[1][0]
        g1 = Segment(Vertex((b1,)), (b1,))
        g2 = Segment(Vertex((b2,)), (b2,))
        return ObstructionWitness(None, b1, b2, g1, g2,
                                  translate=is_translate(ctx, g1, g2))
    for a in range(1, ctx.d + 1):
        st = stabilizer(ctx.Fp, a)
        st_blocks = [blk for blk in orbits(st) if blk != (a,)]
        if len(st_blocks) > 1:
            b1, b2 = st_blocks[0][0], st_blocks[1][0]
            g1 = Segment(Vertex((b1,)), (b1, a))
            g2 = Segment(Vertex((b2,)), (b2, a))
            return ObstructionWitness(a, b1, b2, g1, g2,
                                      translate=is_translate(ctx, g1, g2))
    raise TreeLocalError("unreachable: F' transitive with all stabilizers "
                         "transitive is 2-transitive")


def segment_orbit_census(ctx: GroupContext, n: int,
                         cap: int = 100000) -> list[tuple[int, ...]]:
    """Representatives of length-n color sequences up to oriented pointwise
    F'-matchability (equivalently, up to the G(F,F') action on oriented
    segments with matched starts).  One class for every n iff the group
    is transitive on same-length segments."""
    if n < 1:
        raise TreeLocalError("census needs n >= 1")
    total = ctx.d * (ctx.d - 1) ** (n - 1)
    if total > cap:
        raise SizeLimitExceeded(f"{total} sequences exceed cap {cap}")

    def sequences(length: int):
        if length == 0:
            yield ()
            return
        for head in sequences(length - 1):
            for k in range(1, ctx.d + 1):
                if not head or head[-1] != k:
                    yield head + (k,)

    reps: list[tuple[int, ...]] = []
    for seq in sequences(n):
        if not any(colors_matchable(ctx, seq, rep) for rep in reps):
            reps.append(seq)
    return reps
