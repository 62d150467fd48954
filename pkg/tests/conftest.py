"""Shared complexes for the test suite."""

from __future__ import annotations

import random

import pytest

from scomplex.core import WeightAssignment, build_complex
from scomplex.generators import fan, random_complex
from scomplex.operators import OrientationAssignment

LEX = OrientationAssignment()


def combinatorial(maximal, empty_policy="exclude"):
    return build_complex(maximal, "combinatorial", empty_policy=empty_policy)


def named_entries(empty_policy="exclude"):
    return [
        ("edge", *combinatorial([[0, 1]], empty_policy), LEX),
        ("hollow_triangle", *combinatorial([[0, 1], [1, 2], [0, 2]], empty_policy), LEX),
        ("solid_triangle", *combinatorial([[0, 1, 2]], empty_policy), LEX),
        ("tetra", *combinatorial([[0, 1, 2, 3]], empty_policy), LEX),
    ]


def random_entries(count=20, empty_policy="exclude"):
    out = []
    for seed in range(count):
        n = 4 + seed % 5
        c = random_complex(n, 0.5, 3, seed)
        maximal = [list(s.vertices) for s in c.maximal_simplices()]
        out.append((f"random{seed}", *combinatorial(maximal, empty_policy), LEX))
    return out


def fan_entries(ns=(1, 3, 5)):
    return [(f"fan{n}", fam.complex, fam.weights, fam.orientation)
            for n in ns for fam in (fan(n),)]


def full_corpus():
    """Named complexes, fan truncations, and the random clique corpus.

    Entries are (label, complex, weights, orientation); the corpus excludes
    the empty simplex (the with-empty variants are built where a test needs
    them).
    """
    return named_entries() + fan_entries() + random_entries()


@pytest.fixture(scope="session")
def corpus():
    return full_corpus()


@pytest.fixture(scope="session")
def edge():
    return combinatorial([[0, 1]])


@pytest.fixture(scope="session")
def hollow_triangle():
    return combinatorial([[0, 1], [1, 2], [0, 2]])


@pytest.fixture(scope="session")
def solid_triangle():
    return combinatorial([[0, 1, 2]])


@pytest.fixture(scope="session")
def tetra():
    return combinatorial([[0, 1, 2, 3]])


def random_weights(complex_, seed, low=0.2, high=3.0) -> WeightAssignment:
    rng = random.Random(seed)
    return WeightAssignment({s: rng.uniform(low, high) for s in complex_.simplices()},
                            scheme="explicit")
