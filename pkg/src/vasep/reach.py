"""Bounded reachability checks with layered unreachability provers.

A ReachInstance asks whether any of finitely many targets is reachable.
Searching forward semi-decides the positive side; the negative side is
semi-decided by a stack of sound provers:

  residue          reachable residues mod n form a closed finite set
  lattice          target - source must lie in the lattice of the deltas
  monotone         a coordinate moved in one direction only cannot come back
  state_equation   firing counts must solve source + A x = target over N
  block_exhaustion a block with a finite reachability set is enumerated

Instances built here are block products: every transition touches exactly
one block, so reachability factors blockwise, and a proof for one block's
restriction of a target rules the whole target out.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DimensionMismatch
from .intlin import Vec, hnf, vadd, vmod, vzero
from .vas import Run, Vas, validate_run

DEFAULT_MODULI = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)


@dataclass(frozen=True)
class Block:
    """A contiguous coordinate range touched by a private set of transitions."""

    lo: int
    hi: int
    tindexes: tuple[int, ...]


@dataclass(frozen=True)
class ReachInstance:
    """Can the system reach any of the targets?"""

    vas: Vas
    targets: tuple[Vec, ...]
    blocks: tuple[Block, ...]
    provenance: tuple[tuple[str, int], ...]
    tag: str = ""

    def __init__(self, vas: Vas, targets: Iterable[Vec],
                 blocks: Iterable[Block],
                 provenance: Iterable[tuple[str, int]] = (),
                 tag: str = ""):
        targets = tuple(tuple(t) for t in targets)
        blocks = tuple(blocks)
        provenance = tuple(provenance)
        for t in targets:
            if len(t) != vas.dim:
                raise DimensionMismatch(
                    f"target has dimension {len(t)}, expected {vas.dim}")
            if any(x < 0 for x in t):
                raise ValueError("targets must be nonnegative")
        pos = 0
        for b in blocks:
            if b.lo != pos or b.hi <= b.lo:
                raise ValueError("blocks must tile the coordinates in order")
            pos = b.hi
        if pos != vas.dim:
            raise ValueError("blocks must cover every coordinate")
        for i, t in enumerate(vas.transitions):
            touched = [b for b in blocks if any(t[b.lo:b.hi])]
            if len(touched) > 1:
                raise ValueError(f"transition {i} touches more than one block")
            if touched and i not in touched[0].tindexes:
                raise ValueError(f"transition {i} missing from its block")
        if provenance and len(provenance) != len(vas.transitions):
            raise ValueError("provenance must label every transition")
        object.__setattr__(self, "vas", vas)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "provenance", provenance)
        object.__setattr__(self, "tag", tag)

    def block_vas(self, b: Block) -> Vas:
        deltas = [self.vas.transitions[i][b.lo:b.hi] for i in b.tindexes]
        return Vas(b.hi - b.lo, self.vas.source[b.lo:b.hi], deltas)


@dataclass(frozen=True)
class Found:
    run: Run
    target: Vec


@dataclass(frozen=True)
class ProvedEmpty:
    proofs: tuple[dict, ...]
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Unknown:
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SearchOutcome:
    found: Found | None
    visited: int
    complete: bool


def forward_search(instance: ReachInstance, max_states: int = 200_000,
                   value_cap: int | None = None) -> SearchOutcome:
    """Breadth-first exploration from the source.

    complete=True means the whole reachability set was enumerated: nothing
    was cut by the state budget or the value cap, so an absent target is
    genuinely unreachable.
    """
    vas = instance.vas
    targets = set(instance.targets)
    source = vas.source

    def reconstruct(cfg: Vec) -> Found:
        labels: list[int] = []
        cur = cfg
        while parents[cur] is not None:
            prev, idx = parents[cur]
            labels.append(idx)
            cur = prev
        labels.reverse()
        return Found(validate_run(vas, labels), cfg)

    parents: dict[Vec, tuple[Vec, int] | None] = {source: None}
    if source in targets:
        return SearchOutcome(Found(Run(source, ()), source), 1, True)
    queue: deque[Vec] = deque([source])
    truncated = False
    while queue:
        cur = queue.popleft()
        for idx, t in enumerate(vas.transitions):
            nxt = vadd(cur, t)
            if any(x < 0 for x in nxt):
                continue
            if nxt in parents:
                continue
            if value_cap is not None and any(x > value_cap for x in nxt):
                truncated = True
                continue
            if len(parents) >= max_states:
                truncated = True
                continue
            parents[nxt] = (cur, idx)
            if nxt in targets:
                return SearchOutcome(reconstruct(nxt), len(parents), False)
            queue.append(nxt)
    return SearchOutcome(None, len(parents), not truncated)


def _residue_closure(source: Vec, deltas: Sequence[Vec], n: int,
                     cap: int) -> frozenset[Vec] | None:
    start = vmod(source, n)
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for d in deltas:
            nxt = vmod(vadd(cur, d), n)
            if nxt not in seen:
                if len(seen) >= cap:
                    return None
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def _monotone_profile(deltas: Sequence[Vec], dim: int) -> list[int]:
    # +1: never decreases, -1: never increases, 0: both ways
    out = []
    for j in range(dim):
        ups = any(d[j] > 0 for d in deltas)
        downs = any(d[j] < 0 for d in deltas)
        out.append(0 if (ups and downs) else (-1 if downs else 1))
    return out


def state_equation_feasible(deltas: Sequence[Vec], rhs: Vec,
                            max_nodes: int = 20_000) -> bool | None:
    """Does sum x_i * deltas_i = rhs admit a solution over N?

    Bounded minimal-solution search on the homogenized system: columns are
    the deltas plus -rhs, whose coefficient is held at most 1. A node grows
    by a unit whose column points against the node's current value; found
    solutions prune their dominators. Returns None when the node budget runs
    out before the frontier empties.
    """
    if not any(rhs):
        return True
    cols = [tuple(d) for d in deltas] + [tuple(-x for x in rhs)]
    m = len(cols)
    last = m - 1

    def dot(u: Vec, v: Vec) -> int:
        return sum(a * b for a, b in zip(u, v))

    solutions: list[tuple[int, ...]] = []
    start_nodes = []
    for i in range(m):
        y = tuple(1 if j == i else 0 for j in range(m))
        start_nodes.append((y, cols[i]))
    seen = {y for y, _ in start_nodes}
    queue = deque(start_nodes)
    popped = 0
    while queue:
        y, val = queue.popleft()
        popped += 1
        if popped > max_nodes:
            return None
        if not any(val):
            if y[last] == 1:
                return True
            solutions.append(y)
            continue
        for i in range(m):
            if i == last and y[last] >= 1:
                continue
            if dot(val, cols[i]) >= 0:
                continue
            ny = y[:i] + (y[i] + 1,) + y[i + 1:]
            if ny in seen:
                continue
            if any(all(ny[j] >= s[j] for j in range(m)) for s in solutions):
                continue
            seen.add(ny)
            queue.append((ny, vadd(val, cols[i])))
    return False


class _ProverState:
    """Caches shared across targets while proving one instance empty."""

    def __init__(self, instance: ReachInstance, moduli: Sequence[int],
                 residue_cap: int, block_states: int, prover_nodes: int):
        self.instance = instance
        self.moduli = tuple(moduli)
        self.residue_cap = residue_cap
        self.block_states = block_states
        self.prover_nodes = prover_nodes
        self.block_sys = [instance.block_vas(b) for b in instance.blocks]
        self.residues: dict[tuple[int, int], frozenset[Vec] | None] = {}
        self.lattices: dict[int, object] = {}
        self.monotone: dict[int, list[int]] = {}
        self.reach_sets: dict[int, frozenset[Vec] | None] = {}

    def residue_proof(self, bi: int, target: Vec) -> dict | None:
        sys = self.block_sys[bi]
        for n in self.moduli:
            key = (bi, n)
            if key not in self.residues:
                self.residues[key] = _residue_closure(
                    sys.source, sys.transitions, n, self.residue_cap)
            closure = self.residues[key]
            if closure is not None and vmod(target, n) not in closure:
                return {"prover": "residue", "block": bi, "modulus": n}
        return None

    def lattice_proof(self, bi: int, target: Vec) -> dict | None:
        sys = self.block_sys[bi]
        if bi not in self.lattices:
            self.lattices[bi] = hnf(sys.transitions, sys.dim)
        basis = self.lattices[bi]
        diff = tuple(t - s for t, s in zip(target, sys.source))
        if not basis.contains(diff):
            return {"prover": "lattice", "block": bi}
        return None

    def monotone_proof(self, bi: int, target: Vec) -> dict | None:
        sys = self.block_sys[bi]
        if bi not in self.monotone:
            self.monotone[bi] = _monotone_profile(sys.transitions, sys.dim)
        prof = self.monotone[bi]
        for j in range(sys.dim):
            if prof[j] > 0 and target[j] < sys.source[j]:
                return {"prover": "monotone", "block": bi, "coord": j,
                        "direction": "up"}
            if prof[j] < 0 and target[j] > sys.source[j]:
                return {"prover": "monotone", "block": bi, "coord": j,
                        "direction": "down"}
        return None

    def state_equation_proof(self, bi: int, target: Vec) -> dict | None:
        sys = self.block_sys[bi]
        rhs = tuple(t - s for t, s in zip(target, sys.source))
        out = state_equation_feasible(sys.transitions, rhs, self.prover_nodes)
        if out is False:
            return {"prover": "state_equation", "block": bi}
        return None

    def exhaustion_proof(self, bi: int, target: Vec) -> dict | None:
        if bi not in self.reach_sets:
            self.reach_sets[bi] = self._enumerate(bi, self.block_states)
        members = self.reach_sets[bi]
        if members is not None and target not in members:
            return {"prover": "block_exhaustion", "block": bi,
                    "states": len(members)}
        return None

    def _enumerate(self, bi: int, cap: int) -> frozenset[Vec] | None:
        # None when the block's reachability set is not shown finite in budget
        sys = self.block_sys[bi]
        seen = {sys.source}
        frontier = [sys.source]
        while frontier:
            cur = frontier.pop()
            for t in sys.transitions:
                nxt = vadd(cur, t)
                if any(x < 0 for x in nxt) or nxt in seen:
                    continue
                if len(seen) >= cap:
                    return None
                seen.add(nxt)
                frontier.append(nxt)
        return frozenset(seen)

    def prove_target(self, target: Vec) -> dict | None:
        for bi, b in enumerate(self.instance.blocks):
            part = target[b.lo:b.hi]
            for attempt in (self.residue_proof, self.lattice_proof,
                            self.monotone_proof, self.state_equation_proof,
                            self.exhaustion_proof):
                proof = attempt(bi, part)
                if proof is not None:
                    proof["target"] = list(target)
                    return proof
        return None


def decide(instance: ReachInstance, *, max_states: int = 200_000,
           value_cap: int | None = None, prover_nodes: int = 20_000,
           residue_cap: int = 200_000, block_states: int = 50_000,
           moduli: Sequence[int] = DEFAULT_MODULI) -> Found | ProvedEmpty | Unknown:
    """Search for a target; failing that, try to prove all targets out."""
    out = forward_search(instance, max_states=max_states, value_cap=value_cap)
    if out.found is not None:
        return out.found
    stats = {"visited": out.visited, "complete": out.complete}
    if out.complete:
        return ProvedEmpty(
            ({"prover": "exhaustion", "states": out.visited},), stats)
    state = _ProverState(instance, moduli, residue_cap, block_states,
                         prover_nodes)
    proofs = []
    for target in instance.targets:
        proof = state.prove_target(target)
        if proof is None:
            stats["unproved_target"] = list(target)
            return Unknown(stats)
        proofs.append(proof)
    return ProvedEmpty(tuple(proofs), stats)


def _pair_instance(expa: Vas, expb: Vas, keep: Sequence[int], n: int,
                   dec_coords: Sequence[int], ranges: Sequence[range],
                   target_cap: int, tag: str) -> ReachInstance:
    if expa.dim != expb.dim:
        raise DimensionMismatch("expansions of unequal dimension")
    d = expa.dim
    dim = 2 * d
    transitions: list[Vec] = []
    provenance: list[tuple[str, int]] = []
    a_idx: list[int] = []
    b_idx: list[int] = []
    for j, t in enumerate(expa.transitions):
        a_idx.append(len(transitions))
        transitions.append(t + vzero(d))
        provenance.append(("a", j))
    for j, t in enumerate(expb.transitions):
        b_idx.append(len(transitions))
        transitions.append(vzero(d) + t)
        provenance.append(("b", j))
    for i in dec_coords:
        dec = [0] * dim
        dec[i] = -n
        a_idx.append(len(transitions))
        transitions.append(tuple(dec))
        provenance.append(("deca", i))
    for i in dec_coords:
        dec = [0] * dim
        dec[d + i] = -n
        b_idx.append(len(transitions))
        transitions.append(tuple(dec))
        provenance.append(("decb", i))

    count = 1
    for r in ranges:
        count *= len(r)
    if count > target_cap:
        raise BudgetExceeded(f"{count} product targets exceed {target_cap}")
    targets = []
    for combo in itertools.product(*ranges):
        w = [0] * d
        for i, j in enumerate(keep):
            w[j] = combo[i]
        targets.append(tuple(w) + tuple(w))

    blocks = (Block(0, d, tuple(a_idx)), Block(d, dim, tuple(b_idx)))
    vas = Vas(dim, expa.source + expb.source, transitions)
    return ReachInstance(vas, targets, blocks, provenance, tag=tag)


def modpair_instance(expa: Vas, expb: Vas, keep: Sequence[int], n: int,
                     target_cap: int = 100_000) -> ReachInstance:
    """Some u in one expansion and v in the other agree mod n, iff a target
    (r, r) with r below n on the kept coordinates is reachable here.

    Each side may shed multiples of n from kept coordinates; shedding strips
    off to an ordinary run of that side, so reaching a diagonal target is
    exactly a congruent pair.
    """
    if n < 1:
        raise ValueError("modulus must be positive")
    keep = tuple(keep)
    ranges = [range(n)] * len(keep)
    return _pair_instance(expa, expb, keep, n, keep, ranges, target_cap,
                          tag=f"mod:{n}")


def unarypair_instances(expa: Vas, expb: Vas, keep: Sequence[int], n: int,
                        target_cap: int = 100_000) -> tuple[ReachInstance, ...]:
    """One instance per low/high pattern over the kept coordinates.

    A pair equivalent at threshold n agrees exactly on its low coordinates
    (below n) and mod n on its high ones (at least n). High coordinates may
    shed multiples of n but the targets stay at n or above, so both sides
    provably sit at n or above there; low coordinates cannot shed at all.
    """
    if n < 1:
        raise ValueError("threshold must be positive")
    keep = tuple(keep)
    out = []
    for sigma in itertools.product((0, 1), repeat=len(keep)):
        dec = [keep[i] for i in range(len(keep)) if sigma[i]]
        ranges = [range(n, 2 * n) if sigma[i] else range(n)
                  for i in range(len(keep))]
        out.append(_pair_instance(
            expa, expb, keep, n, dec, ranges, target_cap,
            tag="unary:" + str(n) + ":" + "".join(map(str, sigma))))
    return tuple(out)


def emptiness_instance(exp: Vas, keep: Sequence[int]) -> ReachInstance:
    """The expansion is nonempty iff zero is reachable once kept coordinates
    may be drained one unit at a time."""
    keep = tuple(keep)
    transitions: list[Vec] = []
    provenance: list[tuple[str, int]] = []
    for j, t in enumerate(exp.transitions):
        transitions.append(t)
        provenance.append(("t", j))
    for i in keep:
        dec = [0] * exp.dim
        dec[i] = -1
        transitions.append(tuple(dec))
        provenance.append(("dec", i))
    vas = Vas(exp.dim, exp.source, transitions)
    block = Block(0, exp.dim, tuple(range(len(transitions))))
    return ReachInstance(vas, (vzero(exp.dim),), (block,), provenance,
                         tag="empty")


def extract_side(instance: ReachInstance, run: Run, kind: str,
                 side_vas: Vas) -> Run:
    """Project a product run onto one side's original transitions.

    Dropping the other side's steps and this side's shedding steps leaves a
    valid run: removals only ever raise the remaining configurations.
    """
    if not instance.provenance:
        raise ValueError("instance carries no provenance labels")
    labels = [instance.provenance[t][1] for t in run.labels()
              if instance.provenance[t][0] == kind]
    return validate_run(side_vas, labels)
