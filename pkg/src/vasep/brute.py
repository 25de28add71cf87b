"""Exhaustive reference computations used as ground truth in tests.

Everything here is written for transparency over speed and independently of
the decision modules: bounded breadth-first reachability, coefficient-box
enumeration of linear sets, a from-scratch integer linear solver, and pair
searches for the two equivalences. The CLI exposes these for spot checks.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .intlin import Vec, as_vec
from .linsets import LinearSet
from .vas import SectionedVas, Vas

Verdict = tuple[str, object]


def canon_modular(v: Sequence[int], n: int) -> Vec:
    return tuple(x % n for x in v)


def canon_unary(v: Sequence[int], n: int) -> Vec:
    # values below n kept, values >= n folded to n + (residue mod n)
    return tuple(x if x < n else n + (x - n) % n for x in v)


def bounded_reach(vas: Vas, bound: int, cap: int = 1_000_000) -> set[Vec]:
    """All configurations reachable via configurations with entries <= bound.

    This is the bounded-enumeration semantics: successors leaving the box
    are pruned, so the result is exactly the reachability set of the
    box-restricted system.
    """
    if any(x > bound for x in vas.source):
        return set()
    seen = {vas.source}
    frontier = [vas.source]
    while frontier:
        cur = frontier.pop()
        for t in vas.transitions:
            nxt = tuple(a + b for a, b in zip(cur, t))
            if any(x < 0 or x > bound for x in nxt) or nxt in seen:
                continue
            if len(seen) >= cap:
                raise BudgetExceeded(f"bounded reach exceeded {cap} states")
            seen.add(nxt)
            frontier.append(nxt)
    return seen


def section_members(svas: SectionedVas, bound: int,
                    cap: int = 1_000_000) -> set[Vec]:
    """Kept-part projections of bounded-reachable configs in the section."""
    sec = svas.section
    out = set()
    for v in bounded_reach(svas.vas, bound, cap):
        if sec.matches(v):
            out.add(sec.project(v))
    return out


def linear_members(ls: LinearSet, bound: int,
                   cap: int = 1_000_000) -> set[Vec]:
    """All members of the linear set with every entry <= bound. Complete:
    periods are nonnegative, so coefficients are bounded inside the box."""
    out: set[Vec] = set()
    if any(x > bound for x in ls.base):
        return out

    def rec(cur: tuple[int, ...], idx: int) -> None:
        if len(out) >= cap:
            raise BudgetExceeded(f"member enumeration exceeded {cap}")
        out.add(cur)
        for j in range(idx, len(ls.periods)):
            nxt = tuple(a + b for a, b in zip(cur, ls.periods[j]))
            if all(x <= bound for x in nxt):
                rec(nxt, j)

    rec(ls.base, 0)
    return out


def linear_member_exact(ls: LinearSet, v: Sequence[int]) -> bool:
    """Exact membership by full coefficient search. Terminates because every
    period is nonzero and nonnegative, bounding each coefficient."""
    v = as_vec(v)
    if len(v) != ls.dim:
        return False
    rest = tuple(a - b for a, b in zip(v, ls.base))
    if any(x < 0 for x in rest):
        return False

    def rec(rest: Vec, idx: int) -> bool:
        if not any(rest):
            return True
        if idx >= len(ls.periods):
            return False
        p = ls.periods[idx]
        top = min(rest[j] // p[j] for j in range(len(p)) if p[j] > 0)
        for c in range(top + 1):
            nxt = tuple(r - c * x for r, x in zip(rest, p))
            if all(x >= 0 for x in nxt) and rec(nxt, idx + 1):
                return True
        return False

    return rec(rest, 0)


def linear_residues(ls: LinearSet, n: int, cap: int = 10_000_000) -> set[Vec]:
    """Exact residue set of the linear set mod n.

    Residues depend only on coefficients mod n, so the box [0, n)^m is
    complete.
    """
    m = len(ls.periods)
    if n ** m > cap:
        raise BudgetExceeded(f"residue box {n}**{m} exceeds {cap}")
    out = set()
    for coeffs in itertools.product(range(n), repeat=m):
        v = list(ls.base)
        for c, p in zip(coeffs, ls.periods):
            for j in range(len(v)):
                v[j] += c * p[j]
        out.add(tuple(x % n for x in v))
    return out


def solve_integer(vectors: Sequence[Vec], target: Sequence[int]) -> tuple[int, ...] | None:
    """Integer coefficients with sum(c[i] * vectors[i]) == target, or None.

    Column-by-column gcd elimination on rows [vector | bookkeeping]; the
    surviving echelon rows generate the same lattice, and forward
    substitution with divisibility checks decides membership.
    """
    target = as_vec(target)
    m = len(vectors)
    dim = len(target)
    for v in vectors:
        if len(v) != dim:
            raise ValueError("vector dimensions disagree")
    rows = [list(v) + [0] * m for v in vectors]
    for i in range(m):
        rows[i][dim + i] = 1
    pivots: list[tuple[int, list[int]]] = []
    active = list(range(m))
    for col in range(dim):
        holders = [i for i in active if rows[i][col] != 0]
        while len(holders) > 1:
            holders.sort(key=lambda i: abs(rows[i][col]))
            small, big = holders[0], holders[1]
            q = rows[big][col] // rows[small][col]
            rows[big] = [a - q * b for a, b in zip(rows[big], rows[small])]
            holders = [i for i in holders if rows[i][col] != 0]
        if holders:
            piv = holders[0]
            pivots.append((col, rows[piv]))
            active.remove(piv)
    coeffs = [0] * m
    residual = list(target)
    for col, row in pivots:
        if residual[col] % row[col] != 0:
            return None
        c = residual[col] // row[col]
        for j in range(dim):
            residual[j] -= c * row[j]
        for j in range(m):
            coeffs[j] += c * row[dim + j]
    if any(residual):
        return None
    return tuple(coeffs)


def modular_separability(ls: LinearSet, ms: LinearSet, max_n: int = 12,
                         residue_cap: int = 10_000_000) -> Verdict:
    """Reference decision for modular separability of two linear sets.

    not_separable when the base difference lies in the integer span of all
    periods; separable when some modulus up to max_n has disjoint exact
    residue sets; unknown otherwise (never wrong, sometimes silent).
    """
    diff = tuple(a - b for a, b in zip(ls.base, ms.base))
    coeffs = solve_integer(ls.periods + ms.periods, diff)
    if coeffs is not None:
        return "not_separable", coeffs
    for n in range(2, max_n + 1):
        try:
            ra = linear_residues(ls, n, residue_cap)
            rb = linear_residues(ms, n, residue_cap)
        except BudgetExceeded:
            return "unknown", None
        if not ra & rb:
            return "separable", n
    return "unknown", None


def pair_search_linear(ls: LinearSet, ms: LinearSet, n: int, mode: str,
                       bound: int, cap: int = 1_000_000) -> tuple[Vec, Vec] | None:
    """A pair of equivalent members (mod n or at threshold n) with entries
    <= bound, or None if the bounded search finds none."""
    canon = canon_modular if mode == "modular" else canon_unary
    index: dict[Vec, Vec] = {}
    for u in sorted(linear_members(ls, bound, cap)):
        index.setdefault(canon(u, n), u)
    for v in sorted(linear_members(ms, bound, cap)):
        u = index.get(canon(v, n))
        if u is not None:
            return u, v
    return None


def pair_search_sections(a: SectionedVas, b: SectionedVas, n: int, mode: str,
                         bound: int, cap: int = 1_000_000) -> tuple[Vec, Vec] | None:
    """Equivalent members of two sections, found inside the value box."""
    canon = canon_modular if mode == "modular" else canon_unary
    index: dict[Vec, Vec] = {}
    for u in sorted(section_members(a, bound, cap)):
        index.setdefault(canon(u, n), u)
    for v in sorted(section_members(b, bound, cap)):
        u = index.get(canon(v, n))
        if u is not None:
            return u, v
    return None


def nonneg_solutions(target: Sequence[int], periods: Sequence[Vec],
                     coeff_bound: int | None = None) -> list[tuple[int, ...]]:
    """All nonnegative coefficient tuples with sum(c[i] * periods[i]) == target.

    Complete without an explicit bound when every period is nonnegative and
    nonzero; coeff_bound additionally clips each coefficient.
    """
    target = as_vec(target)
    out: list[tuple[int, ...]] = []

    def rec(rest: Vec, idx: int, picked: tuple[int, ...]) -> None:
        if idx == len(periods):
            if not any(rest):
                out.append(picked)
            return
        p = periods[idx]
        if any(x < 0 for x in p) or not any(p):
            raise ValueError("periods must be nonnegative and nonzero")
        top = min(rest[j] // p[j] for j in range(len(p)) if p[j] > 0)
        if coeff_bound is not None:
            top = min(top, coeff_bound)
        for c in range(top + 1):
            nxt = tuple(r - c * x for r, x in zip(rest, p))
            if all(x >= 0 for x in nxt):
                rec(nxt, idx + 1, picked + (c,))

    if all(x >= 0 for x in target):
        rec(target, 0, ())
    return out


def parikh_members(lv, max_len: int, cap: int = 200_000) -> set[Vec]:
    """Letter-count vectors of words accepted within max_len steps.

    Independent of the counter-gadget reduction: runs the labeled system
    directly and applies the acceptance condition to raw configurations.
    """
    sigma = lv.alphabet()
    pos = {a: i for i, a in enumerate(sigma)}
    start = (lv.vas.source, (0,) * len(sigma))
    level = {start}
    seen = {start}
    out: set[Vec] = set()

    def accepts(cfg: Vec) -> bool:
        if lv.accept_kind == "exact":
            return cfg == lv.accept_target
        return all(x >= t for x, t in zip(cfg, lv.accept_target))

    if accepts(lv.vas.source):
        out.add(start[1])
    for _ in range(max_len):
        nxt_level = set()
        for cfg, counts in level:
            for t, lab in zip(lv.vas.transitions, lv.labels):
                nc = tuple(a + b for a, b in zip(cfg, t))
                if any(x < 0 for x in nc):
                    continue
                counted = list(counts)
                if lab is not None:
                    counted[pos[lab]] += 1
                node = (nc, tuple(counted))
                if node in seen:
                    continue
                if len(seen) >= cap:
                    raise BudgetExceeded(f"parikh search exceeded {cap} nodes")
                seen.add(node)
                nxt_level.add(node)
                if accepts(nc):
                    out.add(node[1])
        level = nxt_level
    return out
