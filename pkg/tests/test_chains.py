"""Alternating chain complexes on finite vertex windows."""

import itertools
import random
from fractions import Fraction

import pytest

from treelocal.errors import HypothesisUnverified, SizeLimitExceeded
from treelocal.chains import (
    AlternatingChain,
    ComplexWindow,
    aligned_basis,
    aligned_closure_check,
    boundary,
    exactness_check,
    normalize,
    random_chain,
    restriction_correspondence_check,
)
from treelocal.localaction import build_line
from treelocal.tree import BASE, Vertex, ball


V = Vertex.parse


class TestNormalize:
    def test_sorts_and_signs(self):
        a, b = V("1"), V("2")
        assert normalize((a, b)) == ((a, b), 1)
        assert normalize((b, a)) == ((a, b), -1)

    def test_three_cycle_is_even(self):
        a, b, c = V("1"), V("2"), V("3")
        assert normalize((b, c, a)) == ((a, b, c), 1)
        assert normalize((b, a, c)) == ((a, b, c), -1)

    def test_repeats_vanish(self):
        assert normalize((V("1"), V("1"))) is None


class TestChains:
    def test_build_cancels_opposite_orientations(self):
        a, b = V("1"), V("2")
        c = AlternatingChain.build(1, [((a, b), Fraction(1)),
                                       ((b, a), Fraction(1))])
        assert c.is_zero()

    def test_degree_zero_boundary_is_augmentation(self):
        c = AlternatingChain.build(0, [((V("1"),), Fraction(2)),
                                       ((V("2"),), Fraction(1, 2))])
        assert boundary(c) == Fraction(5, 2)

    def test_boundary_squares_to_zero_random(self):
        rng = random.Random(12)
        points = tuple(ball(BASE, 2, 3))
        w = ComplexWindow(points[:6], 3)
        for _ in range(100):
            n = rng.randint(2, 3)
            c = random_chain(w, n, rng)
            dc = boundary(c)
            ddc = boundary(dc)
            if isinstance(ddc, AlternatingChain):
                assert ddc.is_zero()
            else:
                assert ddc == 0

    def test_wrong_arity_rejected(self):
        with pytest.raises(Exception):
            AlternatingChain.build(1, [((V("1"),), Fraction(1))])


class TestExactness:
    def test_small_windows(self):
        points = list(ball(BASE, 2, 3))[:5]
        for size in (2, 3, 4, 5):
            for pts in itertools.combinations(points, size):
                assert exactness_check(ComplexWindow(pts, 3))

    def test_caps_enforced(self):
        points = tuple(ball(BASE, 2, 3))[:7]
        with pytest.raises(SizeLimitExceeded):
            exactness_check(ComplexWindow(points, 3))


class TestAligned:
    def test_basis_subset_of_full(self):
        pts = tuple(ball(BASE, 1, 3))
        w = ComplexWindow(pts, 2)
        assert set(aligned_basis(w, 1)) <= set(w.basis(1))

    def test_closure_under_boundary(self):
        pts = tuple(ball(BASE, 2, 3))[:6]
        w = ComplexWindow(pts, 3)
        for n in range(4):
            assert aligned_closure_check(w, n)

    def test_tripod_excluded(self):
        w = ComplexWindow((V("1"), V("2"), V("3")), 2)
        assert aligned_basis(w, 2) == []


class TestRestriction:
    def test_correspondence_on_small_ball(self, ctx3):
        L, _, _ = build_line(ctx3)
        report = restriction_correspondence_check(ctx3, L, 2, 1,
                                                  sample_cap=60, seed=0)
        assert report["tuples_checked"] > 0
        assert report["transported"] == report["tuples_checked"]
        assert report["consistent"] == report["tuples_checked"]
        assert report["failures"] == []

    def test_requires_2transitive(self, ctxd4):
        L, _, _ = build_line(ctxd4)
        with pytest.raises(HypothesisUnverified):
            restriction_correspondence_check(ctxd4, L, 2, 1)

    def test_deterministic_given_seed(self, ctx3):
        L, _, _ = build_line(ctx3)
        r1 = restriction_correspondence_check(ctx3, L, 2, 2,
                                              sample_cap=40, seed=5)
        r2 = restriction_correspondence_check(ctx3, L, 2, 2,
                                              sample_cap=40, seed=5)
        assert r1 == r2
