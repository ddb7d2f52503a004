"""Constructions inside G(F,F'): matchability, transport, line elements."""

import itertools
import random

import pytest

from treelocal.errors import (
    LengthMismatch,
    NotStabilizing,
    NotTwoTransitive,
    TreeLocalError,
)
from treelocal.permgroups import is_2transitive_direct, trivial_group
from treelocal.autom import (
    Identity,
    Loxodromic,
    WordTranslation,
    certify_membership,
    classify,
    eta,
    equal_on_ball,
    power,
)
from treelocal.localaction import (
    GroupContext,
    boundary_escape_witness,
    build_line,
    colors_matchable,
    e2_obstruction,
    edge_transitivity_check,
    extend_from_segment,
    is_translate,
    is_translate_bruteforce,
    rotation_r,
    segment_orbit_census,
    segment_transport,
    translation_t,
    transport_into_line,
)
from treelocal.tree import BASE, Segment, Vertex, distance

from conftest import random_reduced_word, valid_contexts


def color_sequences(d: int, n: int) -> list[tuple[int, ...]]:
    out = [()]
    for _ in range(n):
        out = [s + (k,) for s in out for k in range(1, d + 1)
               if not s or s[-1] != k]
    return out


class TestContextValidation:
    def test_rejects_equal_groups(self):
        from treelocal.permgroups import symmetric_group
        with pytest.raises(TreeLocalError):
            GroupContext(3, symmetric_group(3), symmetric_group(3))

    def test_rejects_non_subgroup(self):
        from treelocal.permgroups import generate, parse_cycles
        F = generate([parse_cycles("(1 2)", 3)], 3)
        Fp = generate([parse_cycles("(1 2 3)", 3)], 3)
        with pytest.raises(TreeLocalError):
            GroupContext(3, F, Fp)

    def test_rejects_orbit_violation(self):
        from treelocal.permgroups import generate, parse_cycles, symmetric_group
        F = generate([parse_cycles("(1 2)", 3)], 3)
        with pytest.raises(TreeLocalError):
            GroupContext(3, F, symmetric_group(3))


class TestMatchability:
    def test_symmetric_relation(self, ctxd4):
        for a in color_sequences(4, 2):
            for b in color_sequences(4, 2):
                assert (colors_matchable(ctxd4, a, b)
                        == colors_matchable(ctxd4, b, a))

    def test_transitive_relation(self, ctxd4):
        seqs = color_sequences(4, 3)
        rng = random.Random(1)
        for _ in range(300):
            a, b, c = rng.choice(seqs), rng.choice(seqs), rng.choice(seqs)
            if colors_matchable(ctxd4, a, b) and colors_matchable(ctxd4, b, c):
                assert colors_matchable(ctxd4, a, c)

    def test_length_mismatch(self, ctx3):
        with pytest.raises(LengthMismatch):
            colors_matchable(ctx3, (1,), (1, 2))

    def test_2transitive_matches_everything(self, ctx3):
        for a in color_sequences(3, 3):
            for b in color_sequences(3, 3):
                assert colors_matchable(ctx3, a, b)

    def test_dihedral_distinguishes_step_patterns(self, ctxd4):
        # steps of size 1 and size 2 around the 4-cycle are different classes
        assert not colors_matchable(ctxd4, (1, 2), (1, 3))
        assert colors_matchable(ctxd4, (1, 2), (2, 3))


class TestIsTranslate:
    def test_agrees_with_bruteforce_sampled(self, ctxd4):
        seqs = color_sequences(4, 2)
        for a in seqs:
            for b in seqs:
                s1, s2 = Segment(BASE, a), Segment(BASE, b)
                assert (is_translate(ctxd4, s1, s2)
                        == is_translate_bruteforce(ctxd4, s1, s2))

    def test_start_vertices_irrelevant(self, ctxd4):
        s1 = Segment(Vertex((2, 1)), (2, 1))
        s2 = Segment(BASE, (2, 1))
        assert is_translate(ctxd4, s1, s2)

    def test_unoriented_uses_reversal(self, ctxd4):
        s = Segment(BASE, (1, 2, 1))
        back = s.reversed()
        assert is_translate(ctxd4, s, back, oriented=False)


class TestTransport:
    def test_segment_transport_maps_vertices(self, ctx3):
        s = Segment(Vertex((1, 2)), (1, 3))
        s2 = Segment(Vertex((3,)), (2, 1))
        res = segment_transport(ctx3, s, s2)
        assert res is not None
        g = res.element
        for u, x in zip(s.vertices(), s2.vertices()):
            assert g.apply(u) == x

    def test_segment_transport_exact_when_possible(self, ctx3):
        s = Segment(BASE, (1, 2, 3))
        s2 = Segment(BASE, (2, 3, 1))
        res = segment_transport(ctx3, s, s2)
        assert res is not None
        assert certify_membership(res.element, ctx3.F, ctx3.Fp, 4).exact

    def test_segment_transport_none_when_unmatchable(self, ctxd4):
        res = segment_transport(ctxd4, Segment(BASE, (1, 2)),
                                Segment(BASE, (1, 3)))
        assert res is None

    def test_transport_into_line_even_parity(self, ctx3):
        L, _, _ = build_line(ctx3)
        rng = random.Random(2)
        for _ in range(15):
            start = random_reduced_word(rng, 3, rng.randint(0, 3))
            colors = list(random_reduced_word(rng, 3, rng.randint(1, 4)))
            if start and colors and colors[0] == start[-1]:
                colors[0] = next(k for k in (1, 2, 3)
                                 if k != start[-1]
                                 and (len(colors) < 2 or k != colors[1]))
            s = Segment(start, tuple(colors))
            res = transport_into_line(ctx3, s, L, parity="even")
            g = res.element
            assert all(L.index_of(g.apply(v)) is not None
                       for v in s.vertices())
            assert distance(s.start, g.apply(s.start)) % 2 == 0

    def test_transport_into_line_needs_2transitivity(self, ctxd4):
        L, _, _ = build_line(ctxd4)
        with pytest.raises(NotTwoTransitive):
            transport_into_line(ctxd4, Segment(BASE, (1,)), L)

    def test_extend_from_segment_checks_sigmas(self, ctx3):
        s = Segment(BASE, (1,))
        with pytest.raises(TreeLocalError):
            extend_from_segment(ctx3, s, Segment(BASE, (2,)), [])


class TestLine:
    def test_line_colors_for_rotation_group(self, ctx3):
        L, tau, cycle = build_line(ctx3)
        assert cycle == (1, 2, 3)
        # backward alternates 1,2; forward alternates 2,3
        assert [L.edge_color(i) for i in (-2, -1, 0, 1, 2, 3)] == \
            [1, 2, 1, 2, 3, 2]

    def test_translation_is_loxodromic_length2(self, ctx3):
        L, tau, cycle = build_line(ctx3)
        t = translation_t(ctx3, L)
        for i in range(-6, 7):
            assert t.apply(L.vertex(i)) == L.vertex(i + 2)
        cls = classify(t)
        assert isinstance(cls, Loxodromic) and cls.length == 2
        assert eta(t) == 0

    def test_translation_certificate(self, ctx3):
        L, _, _ = build_line(ctx3)
        t = translation_t(ctx3, L)
        cert = certify_membership(t, ctx3.F, ctx3.Fp, 8)
        assert cert.exact
        assert cert.in_Uprime_in_radius
        allowed = {L.vertex(0), L.vertex(-1)}
        assert set(cert.singular_in_radius) <= allowed

    def test_rotation_reflects_line(self, ctx3):
        L, tau, cycle = build_line(ctx3)
        r = rotation_r(ctx3, L, tau, cycle)
        for i in range(-8, 9):
            assert r.apply(L.vertex(i)) == L.vertex(-i)

    def test_rotation_involution_on_ball(self, ctx3):
        from treelocal.autom import Compose
        L, tau, cycle = build_line(ctx3)
        r = rotation_r(ctx3, L, tau, cycle)
        assert equal_on_ball(Compose(r, r), Identity(3), 4)

    def test_edge_transitivity(self, ctx3):
        L, tau, cycle = build_line(ctx3)
        t = translation_t(ctx3, L)
        r = rotation_r(ctx3, L, tau, cycle)
        assert edge_transitivity_check(ctx3, L, [t, r], 8)
        # the translation alone only reaches every other edge
        assert not edge_transitivity_check(ctx3, L, [t], 8)

    def test_line_elements_for_dihedral_pair(self, ctxd4):
        L, tau, cycle = build_line(ctxd4)
        t = translation_t(ctxd4, L)
        r = rotation_r(ctxd4, L, tau, cycle)
        cls = classify(t)
        assert isinstance(cls, Loxodromic) and cls.length == 2
        assert all(r.apply(L.vertex(i)) == L.vertex(-i) for i in range(-6, 7))


class TestBoundaryEscape:
    @pytest.mark.parametrize("d", [3, 4])
    def test_witness_properties(self, d):
        g, radius = boundary_escape_witness(d)
        assert radius <= 12
        # color preserving: exact over the trivial local group
        assert g.is_exact(trivial_group(d))
        # the ray leaves itself under g
        ray = Segment(BASE, tuple((1, 2)[i % 2] for i in range(6))).vertices()
        on_ray = set(ray)
        assert any(g.apply(u) not in on_ray for u in ray)

    def test_rejects_small_degree(self):
        with pytest.raises(TreeLocalError):
            boundary_escape_witness(2)


class TestObstruction:
    def test_absent_iff_2transitive(self):
        for d in (3, 4):
            for ctx in valid_contexts(d):
                wit = e2_obstruction(ctx)
                assert (wit is None) == is_2transitive_direct(ctx.Fp)

    def test_dihedral_witness(self, ctxd4):
        wit = e2_obstruction(ctxd4)
        assert wit is not None
        assert wit.a == 1
        assert {wit.b1, wit.b2} == {2, 3}
        assert not wit.translate
        assert not is_translate_bruteforce(ctxd4, wit.gamma1, wit.gamma2)

    def test_witness_segments_share_final_color(self, ctxd4):
        wit = e2_obstruction(ctxd4)
        assert wit.gamma1.colors[-1] == wit.gamma2.colors[-1] == wit.a


class TestCensus:
    def test_single_class_under_2transitivity(self, ctx3, ctx4):
        for ctx in (ctx3, ctx4):
            for n in range(1, 5):
                assert len(segment_orbit_census(ctx, n)) == 1

    def test_dihedral_census_doubles(self, ctxd4):
        sizes = [len(segment_orbit_census(ctxd4, n)) for n in range(1, 5)]
        assert sizes == [1, 2, 4, 8]

    def test_representatives_pairwise_unmatchable(self, ctxd4):
        reps = segment_orbit_census(ctxd4, 3)
        for a, b in itertools.combinations(reps, 2):
            assert not colors_matchable(ctxd4, a, b)

    def test_every_sequence_covered(self, ctxd4):
        reps = segment_orbit_census(ctxd4, 3)
        for seq in color_sequences(4, 3):
            assert any(colors_matchable(ctxd4, seq, r) for r in reps)
