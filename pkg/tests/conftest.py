"""Shared fixtures: validated group contexts and random element builders."""

from __future__ import annotations

import random

import pytest

from treelocal.analysis import validate_inputs
from treelocal.autom import (
    Compose,
    Diagonal,
    Identity,
    Inverse,
    SubtreeDiagonal,
    WordTranslation,
)
from treelocal.localaction import GroupContext
from treelocal.permgroups import Permutation, all_subgroups, preserves_orbits
from treelocal.tree import Vertex


@pytest.fixture(scope="session")
def ctx3() -> GroupContext:
    """(d=3, F = rotations, F' = Sym(3)); F' is 2-transitive."""
    _, ctx = validate_inputs(3, ["(1 2 3)"], ["(1 2 3)", "(1 2)"])
    assert ctx is not None
    return ctx


@pytest.fixture(scope="session")
def ctx4() -> GroupContext:
    """(d=4, F = <4-cycle>, F' = Sym(4)); F' is 2-transitive."""
    _, ctx = validate_inputs(4, ["(1 2 3 4)"], ["(1 2 3 4)", "(1 2)"])
    assert ctx is not None
    return ctx


@pytest.fixture(scope="session")
def ctxd4() -> GroupContext:
    """(d=4, F = <4-cycle>, F' = dihedral); F' transitive, not 2-transitive."""
    _, ctx = validate_inputs(4, ["(1 2 3 4)"], ["(1 2 3 4)", "(1 3)"])
    assert ctx is not None
    return ctx


def valid_contexts(d: int) -> list[GroupContext]:
    """All contexts (F, F') over degree d: proper subgroup pairs with F'
    preserving the F-orbits."""
    subs = all_subgroups(d)
    out = []
    for F in subs:
        for Fp in subs:
            if (F.is_subgroup_of(Fp) and F.order < Fp.order
                    and preserves_orbits(F, Fp)):
                out.append(GroupContext(d, F, Fp))
    return out


def random_reduced_word(rng: random.Random, d: int, length: int) -> Vertex:
    out: list[int] = []
    for _ in range(length):
        k = rng.randint(1, d)
        while out and out[-1] == k:
            k = rng.randint(1, d)
        out.append(k)
    return Vertex(tuple(out))


def random_permutation(rng: random.Random, d: int) -> Permutation:
    images = list(range(1, d + 1))
    rng.shuffle(images)
    return Permutation(images)


def random_primitive(rng: random.Random, d: int):
    kind = rng.randrange(4)
    if kind == 0:
        return Identity(d)
    if kind == 1:
        return WordTranslation(random_reduced_word(rng, d, rng.randint(1, 3)), d)
    if kind == 2:
        return Diagonal(random_permutation(rng, d))
    u = random_reduced_word(rng, d, rng.randint(1, 2))
    pi = random_permutation(rng, d)
    images = list(pi)
    j = images.index(u[-1])
    images[j], images[u[-1] - 1] = images[u[-1] - 1], u[-1]
    return SubtreeDiagonal(u, Permutation(images))


def random_composite(rng: random.Random, d: int, depth: int):
    """A random expression tree of primitives, composites and inverses."""
    if depth == 0:
        return random_primitive(rng, d)
    kind = rng.randrange(3)
    if kind == 0:
        return Compose(random_composite(rng, d, depth - 1),
                       random_composite(rng, d, depth - 1))
    if kind == 1:
        return Inverse(random_composite(rng, d, depth - 1))
    return random_primitive(rng, d)
