"""Linear, semilinear, modular and unary subsets of N^d.

Modular sets are unions of classes of componentwise congruence mod n.
Unary sets refine them: below the threshold n a coordinate is pinned to an
exact value, at or above n only its residue mod n matters. Classes of that
equivalence are the atoms both kinds of set are built from.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .errors import BudgetExceeded, DimensionMismatch
from .intlin import (
    Vec,
    as_vec,
    check_dim,
    nonneg_member,
    residue_subgroup,
    vadd,
    vmod,
    vscale,
    vsub,
    vzero,
)

SMALL = "small"
LARGE = "large"

CoordClass = tuple[str, int]
UnaryClassT = tuple[CoordClass, ...]


@dataclass(frozen=True)
class LinearSet:
    """{base} + nonnegative integer combinations of the periods."""

    base: Vec
    periods: tuple[Vec, ...]

    def __init__(self, base: Sequence[int], periods: Iterable[Sequence[int]] = ()):
        base = as_vec(base)
        if any(x < 0 for x in base):
            raise ValueError("base must be nonnegative")
        cleaned: list[Vec] = []
        for p in periods:
            p = as_vec(p)
            if len(p) != len(base):
                raise DimensionMismatch(
                    f"period has dimension {len(p)}, expected {len(base)}"
                )
            if any(x < 0 for x in p):
                raise ValueError("periods must be nonnegative")
            if any(p) and p not in cleaned:
                cleaned.append(p)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "periods", tuple(sorted(cleaned)))

    @property
    def dim(self) -> int:
        return len(self.base)

    def member(self, v: Sequence[int]) -> bool:
        return linear_member(self, v)

    def support(self) -> frozenset[int]:
        """Coordinates touched by at least one period."""
        return frozenset(
            j for j in range(self.dim) if any(p[j] for p in self.periods)
        )


@dataclass(frozen=True)
class SemilinearSet:
    components: tuple[LinearSet, ...]

    def __init__(self, components: Iterable[LinearSet] = ()):
        comps = tuple(components)
        dims = {c.dim for c in comps}
        if len(dims) > 1:
            raise DimensionMismatch("components of mixed dimension")
        object.__setattr__(self, "components", comps)

    def member(self, v: Sequence[int]) -> bool:
        return any(linear_member(c, v) for c in self.components)


@dataclass(frozen=True)
class ModularSet:
    """Union of congruence classes mod n: v is in iff (v mod n) is listed."""

    n: int
    dim: int
    residues: frozenset[Vec]

    def __init__(self, n: int, dim: int, residues: Iterable[Sequence[int]]):
        if n < 1:
            raise ValueError("modulus must be positive")
        rs = frozenset(as_vec(r) for r in residues)
        for r in rs:
            if len(r) != dim:
                raise DimensionMismatch(f"residue has dimension {len(r)}, expected {dim}")
            if any(not (0 <= x < n) for x in r):
                raise ValueError(f"residue entries must lie in [0, {n})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "residues", rs)

    def member(self, v: Sequence[int]) -> bool:
        return modular_member(self, v)


@dataclass(frozen=True)
class UnarySet:
    """Union of threshold-n unary classes.

    A class fixes, per coordinate, either an exact value below n
    (("small", v) with 0 <= v < n) or a residue for values at least n
    (("large", r) with 0 <= r < n).
    """

    n: int
    dim: int
    classes: frozenset[UnaryClassT]

    def __init__(self, n: int, dim: int, classes: Iterable[UnaryClassT]):
        if n < 1:
            raise ValueError("threshold must be positive")
        cls = frozenset(tuple(c) for c in classes)
        for c in cls:
            if len(c) != dim:
                raise DimensionMismatch(f"class has {len(c)} coordinates, expected {dim}")
            for kind, val in c:
                if kind not in (SMALL, LARGE):
                    raise ValueError(f"unknown coordinate class kind {kind!r}")
                if not 0 <= val < n:
                    raise ValueError(f"coordinate class value must lie in [0, {n})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "classes", cls)

    def member(self, v: Sequence[int]) -> bool:
        return unary_member(self, v)


def linear_member(ls: LinearSet, v: Sequence[int]) -> bool:
    check_dim(ls.dim, [v])
    rest = vsub(v, ls.base)
    if any(x < 0 for x in rest):
        return False
    return nonneg_member(rest, ls.periods) is not None


def modular_member(ms: ModularSet, v: Sequence[int]) -> bool:
    check_dim(ms.dim, [v])
    if any(x < 0 for x in v):
        raise ValueError("members live in N^d")
    return vmod(v, ms.n) in ms.residues


def unary_class_of(v: Sequence[int], n: int) -> UnaryClassT:
    """The threshold-n class containing v."""
    if n < 1:
        raise ValueError("threshold must be positive")
    if any(x < 0 for x in v):
        raise ValueError("members live in N^d")
    return tuple(
        (SMALL, x) if x < n else (LARGE, x % n) for x in v
    )


def unary_member(us: UnarySet, v: Sequence[int]) -> bool:
    check_dim(us.dim, [v])
    return unary_class_of(v, us.n) in us.classes


def unary_equivalent(u: Sequence[int], v: Sequence[int], n: int) -> bool:
    """Componentwise: equal below n, congruent mod n at or above n, same side."""
    if len(u) != len(v):
        raise DimensionMismatch("vectors of unequal dimension")
    return unary_class_of(u, n) == unary_class_of(v, n)


def mod_residues(ls: LinearSet, n: int, max_size: int = 10**6) -> frozenset[Vec]:
    """Exact residue set of the linear set mod n.

    Residues of nonnegative combinations already form the full subgroup
    generated by the period residues, so no coefficient search is needed.
    """
    if n < 1:
        raise ValueError("modulus must be positive")
    sub = residue_subgroup(ls.periods, n, ls.dim, max_size=max_size)
    b = vmod(ls.base, n)
    return frozenset(vmod(vadd(b, w), n) for w in sub)


def modular_to_unary(ms: ModularSet) -> UnarySet:
    """Same set of vectors, written as threshold-n classes."""
    classes: set[UnaryClassT] = set()
    for r in ms.residues:
        per_coord = [((SMALL, x), (LARGE, x)) for x in r]
        classes.update(itertools.product(*per_coord))
    return UnarySet(ms.n, ms.dim, classes)


def _coord_descriptors(n: int) -> list[CoordClass]:
    return [(SMALL, v) for v in range(n)] + [(LARGE, r) for r in range(n)]


def all_unary_classes(n: int, dim: int, max_count: int = 500_000) -> frozenset:
    """All threshold-n classes in dimension dim, (2n)**dim many."""
    if (2 * n) ** dim > max_count:
        raise BudgetExceeded(
            f"class enumeration of size (2*{n})**{dim} exceeds {max_count}"
        )
    return frozenset(itertools.product(*[_coord_descriptors(n)] * dim))


def _refine_coord(desc: CoordClass, n: int, m: int) -> list[CoordClass]:
    # Split one threshold-n descriptor into threshold-m descriptors (n | m).
    kind, val = desc
    if kind == SMALL:
        return [(SMALL, val)]
    out: list[CoordClass] = [(SMALL, x) for x in range(n, m) if x % n == val]
    out.extend((LARGE, r) for r in range(m) if r % n == val)
    return out


def refine_unary(us: UnarySet, m: int, max_count: int = 500_000) -> UnarySet:
    """The same set expressed with the coarser equivalence replaced by threshold m."""
    if m % us.n:
        raise ValueError("new threshold must be a multiple of the old one")
    if m == us.n:
        return us
    classes: set[UnaryClassT] = set()
    for c in us.classes:
        options = [_refine_coord(d, us.n, m) for d in c]
        size = 1
        for o in options:
            size *= len(o)
        if len(classes) + size > max_count:
            raise BudgetExceeded(f"refinement exceeds {max_count} classes")
        classes.update(itertools.product(*options))
    return UnarySet(m, us.dim, classes)


def _lcm(a: int, b: int) -> int:
    import math

    return a * b // math.gcd(a, b)


def _common_threshold(sets: Sequence[UnarySet]) -> int:
    n = 1
    for s in sets:
        n = _lcm(n, s.n)
    return n


def unary_union(*sets: UnarySet) -> UnarySet:
    if not sets:
        raise ValueError("union of no sets has no dimension")
    dim = sets[0].dim
    check = [s for s in sets if s.dim != dim]
    if check:
        raise DimensionMismatch("union of sets of mixed dimension")
    n = _common_threshold(sets)
    classes: set[UnaryClassT] = set()
    for s in sets:
        classes.update(refine_unary(s, n).classes)
    return UnarySet(n, dim, classes)


def unary_intersection(*sets: UnarySet) -> UnarySet:
    if not sets:
        raise ValueError("intersection of no sets has no dimension")
    dim = sets[0].dim
    if any(s.dim != dim for s in sets):
        raise DimensionMismatch("intersection of sets of mixed dimension")
    n = _common_threshold(sets)
    refined = [frozenset(refine_unary(s, n).classes) for s in sets]
    classes = set(refined[0])
    for r in refined[1:]:
        classes &= r
    return UnarySet(n, dim, classes)


def unary_complement(us: UnarySet, max_count: int = 500_000) -> UnarySet:
    classes = set(all_unary_classes(us.n, us.dim, max_count=max_count))
    classes -= us.classes
    return UnarySet(us.n, us.dim, classes)


def unary_boolean(
    op: Literal["union", "intersection", "complement"], sets: Sequence[UnarySet]
) -> UnarySet:
    """Boolean combination after refining all arguments to the lcm threshold."""
    if op == "union":
        return unary_union(*sets)
    if op == "intersection":
        return unary_intersection(*sets)
    if op == "complement":
        if len(sets) != 1:
            raise ValueError("complement takes exactly one set")
        return unary_complement(sets[0])
    raise ValueError(f"unknown operation {op!r}")


def unary_pin(dim: int, coord: int, value: int, n: int | None = None,
              max_count: int = 500_000) -> UnarySet:
    """{x in N^dim : x[coord] == value}, as a unary set of threshold n > value."""
    if n is None:
        n = value + 1
    if not 0 <= coord < dim:
        raise ValueError("coordinate out of range")
    if value >= n:
        raise ValueError("pinned value must lie below the threshold")
    per_coord = [
        [(SMALL, value)] if j == coord else _coord_descriptors(n)
        for j in range(dim)
    ]
    size = 1
    for o in per_coord:
        size *= len(o)
    if size > max_count:
        raise BudgetExceeded(f"pin set of {size} classes exceeds {max_count}")
    return UnarySet(n, dim, itertools.product(*per_coord))


def unary_full(dim: int, n: int = 1) -> UnarySet:
    """All of N^dim."""
    return UnarySet(n, dim, all_unary_classes(n, dim))


def unary_empty(dim: int, n: int = 1) -> UnarySet:
    return UnarySet(n, dim, ())


def intersect_hyperplane(ls: LinearSet, coord: int, value: int) -> SemilinearSet:
    """The members with x[coord] == value, as a finite union of linear sets.

    Periods positive at coord admit finitely many coefficient choices; each
    choice shifts the base, and the coord-zero periods survive unchanged.
    """
    if not 0 <= coord < ls.dim:
        raise ValueError("coordinate out of range")
    if value < 0:
        raise ValueError("value must be nonnegative")
    slack = value - ls.base[coord]
    if slack < 0:
        return SemilinearSet(())
    positive = [p for p in ls.periods if p[coord] > 0]
    flat = tuple(p for p in ls.periods if p[coord] == 0)

    components: list[LinearSet] = []
    seen: set[tuple[Vec, tuple[Vec, ...]]] = set()

    def walk(k: int, rest: int, shift: Vec) -> None:
        if k == len(positive):
            if rest == 0:
                comp = LinearSet(vadd(ls.base, shift), flat)
                key = (comp.base, comp.periods)
                if key not in seen:
                    seen.add(key)
                    components.append(comp)
            return
        p = positive[k]
        for a in range(rest // p[coord], -1, -1):
            walk(k + 1, rest - a * p[coord], vadd(shift, vscale(a, p)))

    walk(0, slack, vzero(ls.dim))
    return SemilinearSet(components)


def linear_members_bounded(ls: LinearSet, bound: int) -> frozenset[Vec]:
    """All members with every entry <= bound. Complete: periods are nonnegative."""
    if any(x > bound for x in ls.base):
        return frozenset()
    seen = {ls.base}
    frontier = [ls.base]
    while frontier:
        cur = frontier.pop()
        for p in ls.periods:
            nxt = vadd(cur, p)
            if any(x > bound for x in nxt):
                continue
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)
