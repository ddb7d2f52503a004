"""Finite-window alternating chain complexes on vertex sets of T_d.

Chains of degree n are finitely supported rational combinations of
(n+1)-tuples of vertices, taken modulo signed permutation of the
entries; tuples with a repeated vertex are zero.  The boundary is the
usual alternating face sum, with the degree-0 boundary given by
summation of coefficients (the augmentation).

The aligned subcomplex keeps only tuples lying on a common geodesic.
All linear algebra is exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import HypothesisUnverified, SizeLimitExceeded, TreeLocalError
from .localaction import (
    GroupContext,
    build_line,
    edge_transitivity_check,
    rotation_r,
    translation_t,
    transport_into_line,
)
from .autom import Compose, power
from .permgroups import is_2transitive_direct
from .ratmat import rank
from .tree import (
    BASE,
    LineSpec,
    Vertex,
    ball,
    distance,
    geodesic,
    is_aligned,
    vertex_key,
)

MAX_WINDOW_POINTS = 6
MAX_DEGREE = 4


def normalize(tup: Sequence[Vertex]) -> Optional[tuple[tuple[Vertex, ...], int]]:
    """Canonical (sorted) form of a tuple with the sign of the sorting
    permutation; None when an entry repeats (the tuple is zero)."""
    if len(set(tup)) != len(tup):
        return None
    keyed = sorted(range(len(tup)), key=lambda i: vertex_key(tup[i]))
    inversions = sum(
        1 for a, b in itertools.combinations(keyed, 2) if a > b)
    sign = -1 if inversions % 2 else 1
    return tuple(tup[i] for i in keyed), sign


@dataclass(frozen=True)
class AlternatingChain:
    degree: int
    terms: dict[tuple[Vertex, ...], Fraction]

    @classmethod
    def build(cls, degree: int,
              raw: Sequence[tuple[Sequence[Vertex], Fraction]]) -> "AlternatingChain":
        acc: dict[tuple[Vertex, ...], Fraction] = {}
        for tup, coeff in raw:
            if len(tup) != degree + 1:
                raise TreeLocalError(
                    f"tuple of {len(tup)} entries in a degree-{degree} chain")
            norm = normalize(tuple(tup))
            if norm is None:
                continue
            key, sign = norm
            acc[key] = acc.get(key, Fraction(0)) + sign * Fraction(coeff)
        return cls(degree, {k: v for k, v in acc.items() if v != 0})

    def is_zero(self) -> bool:
        return not self.terms


def boundary(c: AlternatingChain):
    """The alternating face sum; for degree 0 the augmentation (sum of
    coefficients, a Fraction)."""
    if c.degree == 0:
        return sum(c.terms.values(), Fraction(0))
    raw = []
    for tup, coeff in c.terms.items():
        for j in range(len(tup)):
            face = tup[:j] + tup[j + 1:]
            raw.append((face, coeff if j % 2 == 0 else -coeff))
    return AlternatingChain.build(c.degree - 1, raw)


@dataclass(frozen=True)
class ComplexWindow:
    points: tuple[Vertex, ...]
    max_degree: int

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise TreeLocalError("window points must be distinct")

    def basis(self, n: int) -> list[tuple[Vertex, ...]]:
        pts = sorted(self.points, key=vertex_key)
        return list(itertools.combinations(pts, n + 1))


def _boundary_matrix(w: ComplexWindow, n: int) -> list[list[Fraction]]:
    """Matrix of the degree-n boundary in the canonical bases, rows indexed
    by the degree-(n-1) basis (by the augmentation for n = 0)."""
    dom = w.basis(n)
    if n == 0:
        return [[Fraction(1)] * len(dom)]
    cod = {t: i for i, t in enumerate(w.basis(n - 1))}
    out = [[Fraction(0)] * len(dom) for _ in range(len(cod))]
    for col, tup in enumerate(dom):
        for j in range(len(tup)):
            face = tup[:j] + tup[j + 1:]
            out[cod[face]][col] += Fraction(1 if j % 2 == 0 else -1)
    return out


def exactness_check(w: ComplexWindow) -> bool:
    """Zero reduced homology of the full-simplex complex on the window:
    at each degree the kernel of the boundary equals the image of the
    next boundary, with the augmentation at the bottom."""
    if len(w.points) > MAX_WINDOW_POINTS:
        raise SizeLimitExceeded(
            f"{len(w.points)} points exceed cap {MAX_WINDOW_POINTS}")
    if w.max_degree > MAX_DEGREE:
        raise SizeLimitExceeded(f"degree {w.max_degree} exceeds cap {MAX_DEGREE}")
    for n in range(0, w.max_degree + 1):
        dim_n = len(w.basis(n))
        rank_n = rank(_boundary_matrix(w, n))
        if n + 1 <= len(w.points) - 1:
            rank_next = rank(_boundary_matrix(w, n + 1))
        else:
            rank_next = 0
        if dim_n - rank_n != rank_next:
            return False
    return True


def aligned_basis(w: ComplexWindow, n: int) -> list[tuple[Vertex, ...]]:
    if len(w.points) > MAX_WINDOW_POINTS:
        raise SizeLimitExceeded(
            f"{len(w.points)} points exceed cap {MAX_WINDOW_POINTS}")
    return [t for t in w.basis(n) if is_aligned(t)]


def aligned_closure_check(w: ComplexWindow, n: int) -> bool:
    """The boundary of an aligned tuple is supported on aligned tuples
    (faces of a geodesic-contained tuple stay on the geodesic)."""
    if n == 0:
        return True
    aligned = set(aligned_basis(w, n - 1))
    for tup in aligned_basis(w, n):
        chain = AlternatingChain.build(n, [(tup, Fraction(1))])
        for face in boundary(chain).terms:
            if face not in aligned:
                return False
    return True


def random_chain(w: ComplexWindow, n: int, rng: random.Random,
                 terms: int = 5) -> AlternatingChain:
    basis = w.basis(n)
    raw = []
    for _ in range(min(terms, len(basis))):
        tup = list(rng.choice(basis))
        rng.shuffle(tup)
        raw.append((tuple(tup), Fraction(rng.randint(-6, 6), rng.randint(1, 4))))
    return AlternatingChain.build(n, raw)


def restriction_correspondence_check(ctx: GroupContext, L: LineSpec,
                                     window_radius: int, n: int,
                                     sample_cap: int = 120,
                                     seed: int = 0) -> dict:
    """Constructive check, on aligned (n+1)-tuples within a ball, of the
    correspondence between aligned tuples and tuples on the line L:

    - every aligned tuple is carried into L by a transport of its
      spanning segment (with even displacement);
    - two different transports of the same tuple differ by a power of
      the translation t along L (their anchor indices have matching
      parity), verified on the tuple images.

    Requires the hypotheses: F' 2-transitive and the stabilizer of L
    edge-transitive on a window (checked here via t and r).
    """
    if not is_2transitive_direct(ctx.Fp):
        raise HypothesisUnverified("F' must be 2-transitive")
    _, tau, cycle = build_line(ctx)
    t = translation_t(ctx, L)
    r = rotation_r(ctx, L, tau, cycle)
    if not edge_transitivity_check(ctx, L, [t, r], max(4, window_radius)):
        raise HypothesisUnverified("line stabilizer not edge-transitive on window")

    points = list(ball(BASE, window_radius, ctx.d))
    tuples = [tup for tup in itertools.combinations(points, n + 1)
              if is_aligned(tup)]
    rng = random.Random(seed)
    if len(tuples) > sample_cap:
        tuples = rng.sample(tuples, sample_cap)
        tuples.sort()

    transported = 0
    consistent = 0
    failures: list[str] = []
    for tup in tuples:
        far = max(itertools.combinations(tup, 2),
                  key=lambda ab: distance(*ab))
        span = geodesic(*far)
        res = transport_into_line(ctx, span, L, parity="even")
        g = res.element
        images = [g.apply(v) for v in tup]
        idx = [L.index_of(x) for x in images]
        if any(i is None for i in idx):
            failures.append(f"tuple {tup} not carried into L")
            continue
        transported += 1
        # second, shifted transport: t g also carries the tuple into L
        g2 = Compose(t, g)
        images2 = [g2.apply(v) for v in tup]
        j = L.index_of(g.apply(span.start))
        j2 = L.index_of(g2.apply(span.start))
        if (j2 - j) % 2 != 0:
            failures.append(f"tuple {tup}: parity mismatch between transports")
            continue
        h = power(t, (j2 - j) // 2)
        if all(h.apply(x) == y for x, y in zip(images, images2)):
            consistent += 1
        else:
            failures.append(f"tuple {tup}: stabilizer element does not match")
    return {
        "tuples_checked": len(tuples),
        "transported": transported,
        "consistent": consistent,
        "failures": failures,
    }
