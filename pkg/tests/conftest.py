"""Shared builders for the test suite."""

from __future__ import annotations

import os
import random

import pytest

from vasep import SectionSpec, SectionedVas, Vas, Vass, full_section
from vasep.linsets import LinearSet

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def example1() -> Vas:
    return Vas(3, (1, 0, 0), [(-1, 2, 1), (2, -1, 1)])


def example1_section() -> SectionedVas:
    return SectionedVas(example1(), SectionSpec(3, (0, 1), [(2, 7)]))


def example2() -> Vass:
    return Vass(3, ("p", "pp"), ("p", (1, 0, 0)),
                [("p", (-1, 1, 0), "p"), ("p", (0, 0, 0), "pp"),
                 ("pp", (2, -1, 0), "pp"), ("pp", (0, 0, 1), "p")])


def evens() -> SectionedVas:
    return full_section(Vas(1, (0,), [(2,)]))


def odds() -> SectionedVas:
    return full_section(Vas(1, (1,), [(2,)]))


def zero_section() -> SectionedVas:
    return full_section(Vas(1, (0,), []))


def positives() -> SectionedVas:
    return full_section(Vas(1, (1,), [(1,)]))


def random_vec(rng: random.Random, dim: int, hi: int) -> tuple[int, ...]:
    return tuple(rng.randint(0, hi) for _ in range(dim))


def random_linear(rng: random.Random, dim: int, hi: int = 4,
                  max_periods: int = 3) -> LinearSet:
    base = random_vec(rng, dim, hi)
    periods = []
    for _ in range(rng.randint(0, max_periods)):
        p = random_vec(rng, dim, hi)
        if any(p):
            periods.append(p)
    return LinearSet(base, periods)


def random_vas(rng: random.Random, dim: int, ntrans: int, hi: int = 2) -> Vas:
    source = random_vec(rng, dim, hi)
    transitions = []
    for _ in range(ntrans):
        t = tuple(rng.randint(-hi, hi) for _ in range(dim))
        transitions.append(t)
    return Vas(dim, source, transitions)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260817)


def replay_leaf(ls: LinearSet, ms: LinearSet, verdict):
    """Follow a negative verdict's slice trace down to its leaf pair."""
    from vasep.linsets import intersect_hyperplane

    cur_l, cur_m = ls, ms
    for side, coord, value, idx in verdict.trace:
        src = cur_l if side == "left" else cur_m
        comp = intersect_hyperplane(src, coord, value).components[idx]
        if side == "left":
            cur_l = comp
        else:
            cur_m = comp
    return cur_l, cur_m


def equivalent_pair(ls: LinearSet, ms: LinearSet, verdict, n: int):
    """Concrete (u, v), u in ls and v in ms, congruent mod n coordinatewise.

    When the leaf is linked the pair is also threshold-n equivalent: every
    coordinate where u and v differ is pushed to n or above on both sides.
    """
    leaf_l, leaf_m = replay_leaf(ls, ms, verdict)
    k = len(leaf_l.periods)
    a = [(-c) % n + n for c in verdict.coeffs[:k]]
    d = [c % n + n for c in verdict.coeffs[k:]]
    if verdict.linked is not None:
        # one extra multiple of n on every period lifts each moving
        # coordinate past the threshold (supports are equal and positive)
        a = [x + n for x in a]
        d = [x + n for x in d]
    u = list(leaf_l.base)
    for ai, p in zip(a, leaf_l.periods):
        u = [x + ai * y for x, y in zip(u, p)]
    v = list(leaf_m.base)
    for dj, q in zip(d, leaf_m.periods):
        v = [x + dj * y for x, y in zip(v, q)]
    return tuple(u), tuple(v)
