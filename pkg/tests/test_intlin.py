"""Integer lattice and nonnegative combination layer."""

import itertools
import random

import pytest

from vasep import brute
from vasep.errors import BudgetExceeded, DimensionMismatch
from vasep.intlin import (
    check_dim,
    LatticeBasis,
    finite_base,
    hnf,
    lattice_member,
    mod_lattice_member,
    nonneg_member,
    residue_subgroup,
    vadd,
    vmod,
    vsub,
)
from conftest import random_vec


def recombine(coeffs, vectors, dim):
    acc = [0] * dim
    for c, v in zip(coeffs, vectors):
        for j in range(dim):
            acc[j] += c * v[j]
    return tuple(acc)


def subgroup_mod(gens, n, dim):
    # independent closure of <gens> mod n under addition
    zero = (0,) * dim
    seen = {zero}
    frontier = [zero]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple((a + b) % n for a, b in zip(cur, g))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def test_vector_helpers():
    assert vadd((1, 2), (3, -1)) == (4, 1)
    assert vsub((1, 2), (3, -1)) == (-2, 3)
    assert vmod((5, -1), 3) == (2, 2)
    with pytest.raises(DimensionMismatch):
        check_dim(2, [(1, 2), (1,)])


def test_lattice_member_recombines_and_covers_all_slots():
    gens = [(2, 0), (0, 3), (2, 3)]
    coeffs = lattice_member((4, 3), gens, 2)
    assert coeffs is not None and len(coeffs) == len(gens)
    assert recombine(coeffs, gens, 2) == (4, 3)
    # dependent and duplicate generators still own coefficient positions
    dup = [(2,), (2,)]
    coeffs = lattice_member((6,), dup, 1)
    assert coeffs is not None and len(coeffs) == 2
    assert recombine(coeffs, dup, 1) == (6,)
    assert lattice_member((1,), [(2,), (4,)], 1) is None


def test_lattice_member_agrees_with_reference_solver(rng):
    for _ in range(300):
        dim = rng.randint(1, 3)
        gens = [tuple(rng.randint(-3, 3) for _ in range(dim))
                for _ in range(rng.randint(0, 4))]
        v = tuple(rng.randint(-6, 6) for _ in range(dim))
        mine = lattice_member(v, gens, dim)
        ref = brute.solve_integer(gens, v)
        assert (mine is None) == (ref is None)
        if mine is not None:
            assert recombine(mine, gens, dim) == v
        if ref is not None:
            assert recombine(ref, gens, dim) == v


def test_hnf_contains_iff_express(rng):
    for _ in range(200):
        dim = rng.randint(1, 3)
        gens = [tuple(rng.randint(-3, 3) for _ in range(dim))
                for _ in range(rng.randint(0, 4))]
        basis = hnf(gens, dim)
        v = tuple(rng.randint(-6, 6) for _ in range(dim))
        assert basis.contains(v) == (basis.express(v) is not None)


def test_finite_base_stabilizes(rng):
    # any stream of vectors grows the span only finitely often
    basis = LatticeBasis.empty(3)
    grown = 0
    for _ in range(500):
        v = tuple(rng.randint(-4, 4) for _ in range(3))
        basis, grew = finite_base(basis, v)
        grown += grew
    assert grown <= 3 + 20  # rank growth plus pivot shrinkages


def test_residue_subgroup_matches_reference(rng):
    for _ in range(60):
        dim = rng.randint(1, 2)
        n = rng.choice([2, 3, 4, 6])
        gens = [tuple(rng.randint(-3, 3) for _ in range(dim))
                for _ in range(rng.randint(0, 3))]
        got = residue_subgroup(gens, n, dim)
        assert got == subgroup_mod([vmod(g, n) for g in gens], n, dim)


def test_residue_subgroup_budget():
    with pytest.raises(BudgetExceeded):
        residue_subgroup([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 100, 3,
                         max_size=10)


def test_mod_lattice_member_matches_subgroup(rng):
    for _ in range(200):
        dim = rng.randint(1, 2)
        n = rng.choice([2, 3, 4, 5, 8])
        gens = [tuple(rng.randint(-3, 3) for _ in range(dim))
                for _ in range(rng.randint(0, 3))]
        v = tuple(rng.randint(-6, 6) for _ in range(dim))
        want = vmod(v, n) in subgroup_mod([vmod(g, n) for g in gens], n, dim)
        assert mod_lattice_member(v, gens, n) == want


def test_mod_lattice_member_both_routes():
    # same answers whether the closure or the widened lattice route runs
    gens = [(3, 1), (0, 2)]
    for n in (2, 3, 5):
        for v in itertools.product(range(-4, 5), repeat=2):
            a = mod_lattice_member(v, gens, n, closure_limit=10 ** 6)
            b = mod_lattice_member(v, gens, n, closure_limit=0)
            assert a == b


def test_nonneg_member_against_exhaustive(rng):
    for _ in range(250):
        dim = rng.randint(1, 3)
        periods = []
        for _ in range(rng.randint(0, 3)):
            p = random_vec(rng, dim, 3)
            if any(p):
                periods.append(p)
        v = random_vec(rng, dim, 8)
        coeffs = nonneg_member(v, tuple(periods))
        sols = brute.nonneg_solutions(v, tuple(periods))
        assert (coeffs is not None) == bool(sols)
        if coeffs is not None:
            assert all(c >= 0 for c in coeffs)
            assert recombine(coeffs, periods, dim) == v


def test_nonneg_member_zero_target():
    assert nonneg_member((0, 0), ((1, 2),)) == (0,)
    assert nonneg_member((1, 0), ()) is None
