"""Exact integer linear algebra: lattices, residue subgroups, nonnegative solutions.

Everything here works on plain tuples of Python ints, so intermediate values
may grow without overflow. All public values are immutable and safe to share
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, DimensionMismatch

Vec = tuple[int, ...]


def as_vec(entries: Iterable[int]) -> Vec:
    return tuple(int(x) for x in entries)


def vadd(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(k: int, a: Sequence[int]) -> Vec:
    return tuple(k * x for x in a)


def vmod(a: Sequence[int], n: int) -> Vec:
    return tuple(x % n for x in a)


def vle(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def vzero(dim: int) -> Vec:
    return (0,) * dim


def check_dim(dim: int, vectors: Iterable[Sequence[int]], what: str = "vector") -> None:
    for v in vectors:
        if len(v) != dim:
            raise DimensionMismatch(f"{what} has dimension {len(v)}, expected {dim}")


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # Returns (x, y, g) with a*x + b*y == g == gcd(a, b), g >= 0.
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _row_combine(u: Sequence[int], v: Sequence[int], a: int, b: int) -> list[int]:
    return [a * x + b * y for x, y in zip(u, v)]


@dataclass(frozen=True)
class LatticeBasis:
    """Echelon basis of the integer span of the vectors fed in so far.

    rows[i] has its leading nonzero entry (the pivot, positive) at column
    pivots[i]; pivot columns strictly increase; entries of earlier rows in a
    pivot column are reduced into [0, pivot). transforms[i] expresses rows[i]
    as an integer combination of the original input vectors, in feed order.
    Any correct normal form would do; spans are what callers compare.
    """

    dim: int
    rows: tuple[Vec, ...] = ()
    pivots: tuple[int, ...] = ()
    transforms: tuple[Vec, ...] = ()
    ngens: int = 0

    @staticmethod
    def empty(dim: int) -> "LatticeBasis":
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        return LatticeBasis(dim)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _padded_transforms(self, width: int) -> list[list[int]]:
        return [list(t) + [0] * (width - len(t)) for t in self.transforms]

    def add(self, v: Sequence[int]) -> tuple["LatticeBasis", bool]:
        """Feed one vector. Returns (new basis, grew) with grew false iff
        v already lay in the current span."""
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector has dimension {len(v)}, expected {self.dim}")
        width = self.ngens + 1
        rows = [list(r) for r in self.rows]
        pivots = list(self.pivots)
        trs = self._padded_transforms(width)
        w = [int(x) for x in v]
        t = [0] * self.ngens + [1]
        grew = False
        for j in range(self.dim):
            if w[j] == 0:
                continue
            if j in pivots:
                i = pivots.index(j)
                a, b = rows[i][j], w[j]
                if b % a == 0:
                    q = b // a
                    w = _row_combine(w, rows[i], 1, -q)
                    t = _row_combine(t, trs[i], 1, -q)
                else:
                    x, y, g = _xgcd(a, b)
                    new_row = _row_combine(rows[i], w, x, y)
                    new_tr = _row_combine(trs[i], t, x, y)
                    w = _row_combine(w, rows[i], a // g, -(b // g))
                    t = _row_combine(t, trs[i], a // g, -(b // g))
                    rows[i], trs[i] = new_row, new_tr
                    grew = True
            else:
                if w[j] < 0:
                    w = [-x for x in w]
                    t = [-x for x in t]
                pos = sum(1 for p in pivots if p < j)
                rows.insert(pos, w)
                trs.insert(pos, t)
                pivots.insert(pos, j)
                grew = True
                break
        if not grew:
            # w reduced to zero against the existing rows; span unchanged,
            # but the generator still owns a coefficient slot in feed order.
            return (
                LatticeBasis(self.dim, self.rows, self.pivots,
                             self.transforms, width),
                False,
            )
        _left_reduce(rows, pivots, trs)
        return (
            LatticeBasis(
                self.dim,
                tuple(tuple(r) for r in rows),
                tuple(pivots),
                tuple(tuple(tr) for tr in trs),
                width,
            ),
            True,
        )

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector has dimension {len(v)}, expected {self.dim}")
        w = list(v)
        for i, j in enumerate(self.pivots):
            if w[j] % self.rows[i][j]:
                return False
            q = w[j] // self.rows[i][j]
            if q:
                w = _row_combine(w, self.rows[i], 1, -q)
        return not any(w)

    def express(self, v: Sequence[int]) -> Optional[Vec]:
        """Coefficients over the original generators recombining to v, or None."""
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector has dimension {len(v)}, expected {self.dim}")
        w = list(v)
        coeffs = [0] * self.ngens
        trs = self._padded_transforms(self.ngens)
        for i, j in enumerate(self.pivots):
            if w[j] % self.rows[i][j]:
                return None
            q = w[j] // self.rows[i][j]
            if q:
                w = _row_combine(w, self.rows[i], 1, -q)
                coeffs = _row_combine(coeffs, trs[i], 1, q)
        if any(w):
            return None
        return tuple(coeffs)


def _left_reduce(rows: list[list[int]], pivots: list[int], trs: list[list[int]]) -> None:
    # Entries of earlier rows in each pivot column are reduced into [0, pivot).
    for k in range(len(rows)):
        for i in range(k):
            p = pivots[k]
            q = rows[i][p] // rows[k][p]
            if q:
                rows[i] = _row_combine(rows[i], rows[k], 1, -q)
                trs[i] = _row_combine(trs[i], trs[k], 1, -q)


def hnf(generators: Sequence[Sequence[int]], dim: int) -> LatticeBasis:
    """Normal-form basis of the integer span of `generators` in Z^dim."""
    basis = LatticeBasis.empty(dim)
    for g in generators:
        basis, _ = basis.add(g)
    return basis


def finite_base(seen: LatticeBasis, new: Sequence[int]) -> tuple[LatticeBasis, bool]:
    """Incremental span extension; the added flag is false iff new was spanned.

    Feeding any sequence of vectors grows the span at most dim + log2(largest
    pivot product) many times, so a stream of witnesses stabilizes finitely.
    """
    return seen.add(new)


def lattice_member(
    v: Sequence[int], generators: Sequence[Sequence[int]], dim: Optional[int] = None
) -> Optional[Vec]:
    """Integer coefficients a with sum(a_i * g_i) == v, or None.

    Membership in the full integer lattice: coefficients may be negative.
    """
    if dim is None:
        dim = len(v)
    check_dim(dim, [v])
    check_dim(dim, generators, "generator")
    basis = hnf(generators, dim)
    coeffs = basis.express(v)
    if coeffs is None:
        return None
    acc = [0] * dim
    for a, g in zip(coeffs, generators):
        if a:
            acc = _row_combine(acc, g, 1, a)
    if tuple(acc) != as_vec(v):
        raise AssertionError("coefficient recombination failed")
    return coeffs


def residue_subgroup(
    generators: Sequence[Sequence[int]],
    n: int,
    dim: int,
    max_size: int = 10**6,
) -> frozenset[Vec]:
    """The subgroup of (Z_n)^dim generated by the generators' residues.

    Closure under addition suffices: every element has finite order, so the
    generated monoid already contains inverses.
    """
    if n <= 0:
        raise ValueError("modulus must be positive")
    check_dim(dim, generators, "generator")
    gens = {vmod(g, n) for g in generators}
    gens.discard(vzero(dim))
    seen: set[Vec] = {vzero(dim)}
    frontier = [vzero(dim)]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = vmod(vadd(cur, g), n)
            if nxt not in seen:
                if len(seen) >= max_size:
                    raise BudgetExceeded(
                        f"residue subgroup exceeds {max_size} elements at modulus {n}"
                    )
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def mod_lattice_member(
    v: Sequence[int],
    generators: Sequence[Sequence[int]],
    n: int,
    closure_limit: int = 4096,
) -> bool:
    """Whether v mod n lies in the subgroup generated by the generators mod n.

    Two independent routes: explicit subgroup closure when n**dim is small,
    otherwise lattice membership with n*e_i adjoined. Tests compare them.
    """
    if n <= 0:
        raise ValueError("modulus must be positive")
    dim = len(v)
    check_dim(dim, generators, "generator")
    if n == 1:
        return True
    if n**dim <= closure_limit:
        return vmod(v, n) in residue_subgroup(generators, n, dim)
    augmented = list(generators) + [
        tuple(n if j == i else 0 for j in range(dim)) for i in range(dim)
    ]
    return hnf(augmented, dim).contains(v)


def nonneg_member(
    v: Sequence[int], periods: Sequence[Sequence[int]]
) -> Optional[Vec]:
    """Nonnegative integer coefficients a with sum(a_i * p_i) == v, or None.

    Periods must be nonnegative; zero periods are dropped (their coefficient
    is reported as 0). Depth-first search over bounded coefficients with an
    integer-lattice prune on every suffix.
    """
    dim = len(v)
    check_dim(dim, periods, "period")
    if any(x < 0 for x in v):
        raise ValueError("target vector must be nonnegative")
    for p in periods:
        if any(x < 0 for x in p):
            raise ValueError("periods must be nonnegative")
    live = [(i, as_vec(p)) for i, p in enumerate(periods) if any(p)]
    target = as_vec(v)

    # suffix_basis[k] spans the integer lattice of live periods k..end.
    suffix_basis: list[LatticeBasis] = [LatticeBasis.empty(dim)] * (len(live) + 1)
    for k in range(len(live) - 1, -1, -1):
        suffix_basis[k] = suffix_basis[k + 1].add(live[k][1])[0]

    failed: set[tuple[int, Vec]] = set()

    def dfs(k: int, rest: Vec) -> Optional[list[int]]:
        if not any(rest):
            return [0] * (len(live) - k)
        if k == len(live):
            return None
        key = (k, rest)
        if key in failed:
            return None
        if not suffix_basis[k].contains(rest):
            failed.add(key)
            return None
        p = live[k][1]
        bound = min(rest[j] // p[j] for j in range(dim) if p[j] > 0)
        for a in range(bound, -1, -1):
            sub = dfs(k + 1, vsub(rest, vscale(a, p)))
            if sub is not None:
                return [a] + sub
        failed.add(key)
        return None

    sol = dfs(0, target)
    if sol is None:
        return None
    out = [0] * len(periods)
    for (i, _), a in zip(live, sol):
        out[i] = a
    return tuple(out)
