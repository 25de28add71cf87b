"""Separability of two linear sets by modular and by unary sets.

Two linear sets b+P*, c+Q* admit a modular separator exactly when b-c lies
outside the integer lattice spanned by P and Q together. The witness for the
negative case is the integer combination itself; the witness for the positive
case is a modulus with disjoint residue sets.

Unary separators are strictly more powerful. The decision procedure:
  1. modular separable: lift the modular separator to a unary one;
  2. linked pair (equal period supports, equal bases off the support):
     a modular counterexample is also a unary one;
  3. a coordinate untouched by all periods where the bases differ pins a
     unary separator directly;
  4. otherwise some coordinate lies in exactly one support: slice the moving
     side at the other side's (constant) value there and recurse on the
     slices, combining the resulting separators.
Slicing removes a coordinate from one support, so the recursion terminates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DimensionMismatch
from .intlin import Vec, lattice_member, mod_lattice_member, vadd, vscale, vsub, vzero
from .linsets import (
    SMALL,
    LinearSet,
    ModularSet,
    UnarySet,
    _coord_descriptors,
    intersect_hyperplane,
    mod_residues,
    modular_to_unary,
    unary_class_of,
    unary_intersection,
    unary_pin,
    unary_union,
)

# (side, coord, value, component index); side is "left" or "right"
SliceStep = tuple[str, int, int, int]


@dataclass(frozen=True)
class SeparableVerdict:
    separator: ModularSet | UnarySet


@dataclass(frozen=True)
class NotSeparableVerdict:
    """Proof that no separator exists.

    vectors/coeffs give an integer combination of the periods of the leaf
    pair equal to the difference of its bases. For unary non-separability
    the leaf pair must in addition be linked; trace records the hyperplane
    slices leading from the input pair down to the leaf (subsets of the
    inputs, so the leaf's non-separability transfers up).
    """

    vectors: tuple[Vec, ...]
    coeffs: tuple[int, ...]
    linked: tuple[int, ...] | None = None
    path: str = "lattice"
    trace: tuple[SliceStep, ...] = ()


Verdict = SeparableVerdict | NotSeparableVerdict


def diophantine_witness(ls: LinearSet, ms: LinearSet) -> tuple[int, ...] | None:
    """Integer coeffs over periods(ls)+periods(ms) summing to base(ls)-base(ms)."""
    if ls.dim != ms.dim:
        raise DimensionMismatch("pair of unequal dimension")
    gens = ls.periods + ms.periods
    return lattice_member(vsub(ls.base, ms.base), gens, ls.dim)


def linked_support(ls: LinearSet, ms: LinearSet) -> tuple[int, ...] | None:
    """Common period support if the pair is linked, else None.

    Linked: both supports equal some I, and the bases agree outside I.
    Periods are nonnegative, so equal supports already give each side a
    period vector positive exactly on I (the sum of its periods).
    """
    if ls.dim != ms.dim:
        raise DimensionMismatch("pair of unequal dimension")
    sp, sq = ls.support(), ms.support()
    if sp != sq:
        return None
    if any(ls.base[j] != ms.base[j] for j in range(ls.dim) if j not in sp):
        return None
    return tuple(sorted(sp))


def modular_separable_linear(
    ls: LinearSet, ms: LinearSet, max_n: int = 64, residue_cap: int = 10**6
) -> Verdict:
    """Decide modular separability of two linear sets.

    Raises BudgetExceeded if separability holds but every working modulus
    exceeds max_n, or if the separator's residue set would exceed residue_cap.
    """
    coeffs = diophantine_witness(ls, ms)
    if coeffs is not None:
        return NotSeparableVerdict(ls.periods + ms.periods, coeffs, path="lattice")
    diff = vsub(ls.base, ms.base)
    gens = ls.periods + ms.periods
    for n in range(2, max_n + 1):
        # residue sets mod n are disjoint iff diff is not in the lattice mod n
        if not mod_lattice_member(diff, gens, n):
            return SeparableVerdict(
                ModularSet(n, ls.dim, mod_residues(ls, n, max_size=residue_cap))
            )
    raise BudgetExceeded(f"no separating modulus up to {max_n}")


def unary_copin(dim: int, coord: int, value: int,
                max_count: int = 500_000) -> UnarySet:
    """{x in N^dim : x[coord] != value} at threshold value+1."""
    n = value + 1
    options = []
    for j in range(dim):
        descs = _coord_descriptors(n)
        if j == coord:
            descs = [d for d in descs if d != (SMALL, value)]
        options.append(descs)
    size = 1
    for o in options:
        size *= len(o)
    if size > max_count:
        raise BudgetExceeded(f"co-pin set of {size} classes exceeds {max_count}")
    return UnarySet(n, dim, itertools.product(*options))


def _sliced(sub: NotSeparableVerdict, step: SliceStep) -> NotSeparableVerdict:
    return NotSeparableVerdict(
        sub.vectors, sub.coeffs, sub.linked, "sliced", (step,) + sub.trace
    )


def unary_separable_linear(
    ls: LinearSet, ms: LinearSet, max_n: int = 64, residue_cap: int = 10**6
) -> Verdict:
    """Decide unary separability of two linear sets."""
    if ls.dim != ms.dim:
        raise DimensionMismatch("pair of unequal dimension")
    mod = modular_separable_linear(ls, ms, max_n=max_n, residue_cap=residue_cap)
    if isinstance(mod, SeparableVerdict):
        return SeparableVerdict(modular_to_unary(mod.separator))

    linked = linked_support(ls, ms)
    if linked is not None:
        return NotSeparableVerdict(mod.vectors, mod.coeffs, linked, "linked")

    sp, sq = ls.support(), ms.support()
    for i in range(ls.dim):
        if i not in sp and i not in sq and ls.base[i] != ms.base[i]:
            n = max(ls.base[i], ms.base[i]) + 1
            return SeparableVerdict(unary_pin(ls.dim, i, ls.base[i], n=n))

    only_q = sorted(sq - sp)
    if only_q:
        # ms moves at i, ls is stuck at its base value: slice ms there
        i = only_q[0]
        comps = intersect_hyperplane(ms, i, ls.base[i]).components
        seps: list[UnarySet] = []
        for j, mj in enumerate(comps):
            sub = unary_separable_linear(ls, mj, max_n=max_n, residue_cap=residue_cap)
            if isinstance(sub, NotSeparableVerdict):
                return _sliced(sub, ("right", i, ls.base[i], j))
            seps.append(sub.separator)
        pin = unary_pin(ls.dim, i, ls.base[i])
        return SeparableVerdict(unary_intersection(pin, *seps))

    # mirror case: ls moves at i, ms is stuck; slice ls and take unions
    i = sorted(sp - sq)[0]
    comps = intersect_hyperplane(ls, i, ms.base[i]).components
    seps = []
    for j, lj in enumerate(comps):
        sub = unary_separable_linear(lj, ms, max_n=max_n, residue_cap=residue_cap)
        if isinstance(sub, NotSeparableVerdict):
            return _sliced(sub, ("left", i, ms.base[i], j))
        seps.append(sub.separator)
    copin = unary_copin(ls.dim, i, ms.base[i])
    return SeparableVerdict(unary_union(copin, *seps))


def unary_canonical(v: Vec, n: int) -> Vec:
    """Class representative: entries below n kept, others folded into [n, 2n)."""
    return tuple(x if x < n else n + x % n for x in v)


def unary_classes_of_linear(
    ls: LinearSet, n: int, max_size: int = 500_000
) -> frozenset:
    """Exact set of threshold-n classes met by a linear set.

    Adding a period commutes with canonicalization, so the classes met are
    those reachable from the canonicalized base in the folded space [0,2n)^d.
    """
    start = unary_canonical(ls.base, n)
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for p in ls.periods:
            nxt = unary_canonical(vadd(cur, p), n)
            if nxt not in seen:
                if len(seen) >= max_size:
                    raise BudgetExceeded(f"class closure exceeds {max_size}")
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(unary_class_of(v, n) for v in seen)


def verify_linsep(
    ls: LinearSet, ms: LinearSet, verdict: Verdict, mode: str,
    residue_cap: int = 10**6,
) -> bool:
    """Re-check a separability verdict for a pair of linear sets, exactly.

    Positive verdicts: the separator provably contains one set and misses the
    other (residue and class sets of linear sets are computable exactly).
    Negative verdicts: replay the slice trace (slices are subsets, so a
    non-separable leaf makes the inputs non-separable), then check the
    integer combination, and for unary mode that the leaf pair is linked.
    """
    if mode not in ("modular", "unary"):
        raise ValueError(f"unknown mode {mode!r}")
    if ls.dim != ms.dim:
        raise DimensionMismatch("pair of unequal dimension")

    if isinstance(verdict, SeparableVerdict):
        sep = verdict.separator
        if mode == "modular":
            if not isinstance(sep, ModularSet) or sep.dim != ls.dim:
                return False
            res_l = mod_residues(ls, sep.n, max_size=residue_cap)
            res_m = mod_residues(ms, sep.n, max_size=residue_cap)
            return res_l <= sep.residues and not (res_m & sep.residues)
        if not isinstance(sep, UnarySet) or sep.dim != ls.dim:
            return False
        cls_l = unary_classes_of_linear(ls, sep.n)
        cls_m = unary_classes_of_linear(ms, sep.n)
        return cls_l <= sep.classes and not (cls_m & sep.classes)

    cur_l, cur_m = ls, ms
    for step in verdict.trace:
        side, coord, value, idx = step
        if side not in ("left", "right") or value < 0:
            return False
        src = cur_l if side == "left" else cur_m
        if not 0 <= coord < src.dim:
            return False
        comps = intersect_hyperplane(src, coord, value).components
        if not 0 <= idx < len(comps):
            return False
        if side == "left":
            cur_l = comps[idx]
        else:
            cur_m = comps[idx]

    gens = cur_l.periods + cur_m.periods
    if verdict.vectors != gens or len(verdict.coeffs) != len(gens):
        return False
    total = vzero(ls.dim)
    for a, g in zip(verdict.coeffs, gens):
        total = vadd(total, vscale(a, g))
    if total != vsub(cur_l.base, cur_m.base):
        return False
    if mode == "modular":
        return verdict.trace == ()
    linked = linked_support(cur_l, cur_m)
    if linked is None:
        return False
    return verdict.linked is None or tuple(verdict.linked) == linked
