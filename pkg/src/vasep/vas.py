"""Vector addition systems, with and without states, and their sections.

A section of a reachability set projects onto kept coordinates those
reachable vectors whose remaining coordinates equal prescribed values.
Normalization turns any section into an expansion (fixed values all zero)
over a padded system, which is the shape the pair reductions work on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidRun
from .intlin import Vec, as_vec, vadd, vle, vsub, vzero


@dataclass(frozen=True)
class Vas:
    """Plain VAS: a source in N^d and finitely many transitions in Z^d."""

    dim: int
    source: Vec
    transitions: tuple[Vec, ...]

    def __init__(self, dim: int, source: Sequence[int],
                 transitions: Iterable[Sequence[int]]):
        source = as_vec(source)
        trans = tuple(as_vec(t) for t in transitions)
        if len(source) != dim:
            raise DimensionMismatch(f"source has dimension {len(source)}, expected {dim}")
        if any(x < 0 for x in source):
            raise ValueError("source must be nonnegative")
        for t in trans:
            if len(t) != dim:
                raise DimensionMismatch(f"transition has dimension {len(t)}, expected {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "transitions", trans)


@dataclass(frozen=True)
class Vass:
    """VASS: VAS with a finite control state."""

    dim: int
    states: tuple[str, ...]
    source: tuple[str, Vec]
    transitions: tuple[tuple[str, Vec, str], ...]

    def __init__(self, dim: int, states: Sequence[str],
                 source: tuple[str, Sequence[int]],
                 transitions: Iterable[tuple[str, Sequence[int], str]]):
        states = tuple(states)
        if len(set(states)) != len(states):
            raise ValueError("duplicate state names")
        q0, v0 = source
        v0 = as_vec(v0)
        if q0 not in states:
            raise ValueError(f"unknown source state {q0!r}")
        if len(v0) != dim:
            raise DimensionMismatch(f"source has dimension {len(v0)}, expected {dim}")
        if any(x < 0 for x in v0):
            raise ValueError("source must be nonnegative")
        trans = []
        for q, delta, r in transitions:
            delta = as_vec(delta)
            if q not in states or r not in states:
                raise ValueError(f"transition between unknown states {q!r}, {r!r}")
            if len(delta) != dim:
                raise DimensionMismatch(
                    f"transition has dimension {len(delta)}, expected {dim}")
            trans.append((q, delta, r))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "source", (q0, v0))
        object.__setattr__(self, "transitions", tuple(trans))


@dataclass(frozen=True)
class Run:
    """A fired sequence of transitions with the configurations it visits.

    Each step records (transition index, config before, config after).
    """

    start: Vec
    steps: tuple[tuple[int, Vec, Vec], ...]

    @property
    def target(self) -> Vec:
        return self.steps[-1][2] if self.steps else self.start

    def labels(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


def validate_run(vas: Vas, labels: Sequence[int], start: Vec | None = None) -> Run:
    """Fire the labels from start (default: the source), checking nonnegativity."""
    cur = vas.source if start is None else as_vec(start)
    if len(cur) != vas.dim:
        raise DimensionMismatch(f"start has dimension {len(cur)}, expected {vas.dim}")
    if any(x < 0 for x in cur):
        raise InvalidRun("start must be nonnegative")
    steps = []
    for pos, t in enumerate(labels):
        if not 0 <= t < len(vas.transitions):
            raise InvalidRun(f"step {pos}: no transition with index {t}")
        nxt = vadd(cur, vas.transitions[t])
        if any(x < 0 for x in nxt):
            raise InvalidRun(f"step {pos}: transition {t} drops below zero")
        steps.append((t, cur, nxt))
        cur = nxt
    return Run(vas.source if start is None else as_vec(start), tuple(steps))


def embed_positions(small: Run, big: Run) -> tuple[int, ...] | None:
    """Greedy leftmost matching of small's steps into big's.

    A step matches when it fires the same transition from a dominating
    configuration. Greedy matching is complete for subsequence search.
    """
    positions = []
    j = 0
    for t, before, after in small.steps:
        while j < len(big.steps):
            bt, bbefore, bafter = big.steps[j]
            if bt == t and vle(before, bbefore) and vle(after, bafter):
                break
            j += 1
        if j == len(big.steps):
            return None
        positions.append(j)
        j += 1
    return tuple(positions)


def run_embeds(small: Run, big: Run) -> bool:
    """small embeds into big: matched steps dominate and so does the target."""
    if small.start != big.start:
        return False
    if not vle(small.target, big.target):
        return False
    return embed_positions(small, big) is not None


def _segments(run: Run, positions: tuple[int, ...]) -> list[list[int]]:
    # labels strictly between consecutive matched positions, plus the tail
    labels = run.labels()
    out = []
    prev = -1
    for m in positions:
        out.append(list(labels[prev + 1:m]))
        prev = m
    out.append(list(labels[prev + 1:]))
    return out


def pump_compose(vas: Vas, base: Run, first: Run, second: Run) -> Run:
    """Combine two runs both embedding the same base into one run.

    The result interleaves the extra segments of both around the shared base
    steps and reaches target(first) + target(second) - target(base). Matched
    configurations dominate the base's, which keeps every interleaved
    configuration nonnegative.
    """
    if not (run_embeds(base, first) and run_embeds(base, second)):
        raise InvalidRun("base does not embed into both runs")
    seg1 = _segments(first, embed_positions(base, first))
    seg2 = _segments(second, embed_positions(base, second))
    labels: list[int] = []
    base_labels = base.labels()
    for j in range(len(base_labels)):
        labels += seg1[j] + seg2[j] + [base_labels[j]]
    labels += seg1[-1] + seg2[-1]
    out = validate_run(vas, labels, start=base.start)
    want = vadd(first.target, vsub(second.target, base.target))
    if out.target != want:
        raise InvalidRun("composed run misses the predicted target")
    return out


def pump_linear(vas: Vas, base: Run, pump: Run, count: int) -> Run:
    """The run reaching target(base) + count * (target(pump) - target(base))."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return base
    cur = pump
    for _ in range(count - 1):
        cur = pump_compose(vas, base, cur, pump)
    return cur


@dataclass(frozen=True)
class SectionSpec:
    """Kept coordinates and exact values required of all the others."""

    dim: int
    keep: tuple[int, ...]
    fixed: tuple[tuple[int, int], ...]

    def __init__(self, dim: int, keep: Sequence[int],
                 fixed: Iterable[tuple[int, int]] = ()):
        keep = tuple(keep)
        fixed = tuple(sorted((int(j), int(u)) for j, u in fixed))
        if list(keep) != sorted(set(keep)):
            raise ValueError("keep must be strictly increasing")
        cover = set(keep) | {j for j, _ in fixed}
        if len(fixed) != len({j for j, _ in fixed}) or set(keep) & {j for j, _ in fixed}:
            raise ValueError("keep and fixed coordinates must not repeat")
        if cover != set(range(dim)):
            raise ValueError("keep and fixed must cover every coordinate")
        if any(u < 0 for _, u in fixed):
            raise ValueError("fixed values must be nonnegative")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "keep", keep)
        object.__setattr__(self, "fixed", fixed)

    def matches(self, v: Sequence[int]) -> bool:
        return all(v[j] == u for j, u in self.fixed)

    def project(self, v: Sequence[int]) -> Vec:
        return tuple(v[j] for j in self.keep)

    def lift(self, w: Sequence[int]) -> Vec:
        """The unique full vector with the kept part w and the fixed values."""
        if len(w) != len(self.keep):
            raise DimensionMismatch(
                f"kept part has dimension {len(w)}, expected {len(self.keep)}")
        out = [0] * self.dim
        for i, j in enumerate(self.keep):
            out[j] = int(w[i])
        for j, u in self.fixed:
            out[j] = u
        return tuple(out)


@dataclass(frozen=True)
class SectionedVas:
    vas: Vas
    section: SectionSpec

    def __init__(self, vas: Vas, section: SectionSpec):
        if section.dim != vas.dim:
            raise DimensionMismatch("section dimension differs from the system's")
        object.__setattr__(self, "vas", vas)
        object.__setattr__(self, "section", section)

    @property
    def arity(self) -> int:
        return len(self.section.keep)


def full_section(vas: Vas) -> SectionedVas:
    """The whole reachability set, as a section keeping every coordinate."""
    return SectionedVas(vas, SectionSpec(vas.dim, range(vas.dim)))


def _embed(v: Sequence[int], dim: int, offset: int) -> Vec:
    out = [0] * dim
    for i, x in enumerate(v):
        out[offset + i] = x
    return tuple(out)


def normalize_single(svas: SectionedVas) -> tuple[Vas, int]:
    """Reshape a section into an expansion: zeros required off the kept block.

    Coordinates are reordered kept-first, a guard coordinate starting at 1 is
    appended, and one closing transition subtracts the fixed values and the
    guard. A vector extended by zeros is reachable in the result exactly when
    it lies in the section: the closing step can always be commuted to the
    end of a run, since later steps only gain headroom from the values it
    removes.
    """
    vas, sec = svas.vas, svas.section
    k = len(sec.keep)
    fixed_coords = [j for j, _ in sec.fixed]
    order = list(sec.keep) + fixed_coords
    dim = vas.dim + 1

    def reorder(v: Vec, guard: int) -> Vec:
        return tuple(v[j] for j in order) + (guard,)

    source = reorder(vas.source, 1)
    transitions = [reorder(t, 0) for t in vas.transitions]
    closing = tuple([0] * k + [-u for _, u in sec.fixed] + [-1])
    return Vas(dim, source, transitions + [closing]), k


def pad_to(vas: Vas, dim: int) -> Vas:
    """Insert always-zero coordinates just before the final (guard) one."""
    if dim < vas.dim:
        raise DimensionMismatch("cannot pad to a smaller dimension")
    if dim == vas.dim:
        return vas
    extra = dim - vas.dim

    def widen(v: Vec) -> Vec:
        return v[:-1] + (0,) * extra + (v[-1],)

    return Vas(dim, widen(vas.source), tuple(widen(t) for t in vas.transitions))


def normalize_pair(a: SectionedVas, b: SectionedVas) -> tuple[Vas, Vas, tuple[int, ...]]:
    """Normalize both sections to expansions over one common dimension."""
    if a.arity != b.arity:
        raise DimensionMismatch("sections of unequal arity")
    ea, k = normalize_single(a)
    eb, _ = normalize_single(b)
    dim = max(ea.dim, eb.dim)
    return pad_to(ea, dim), pad_to(eb, dim), tuple(range(k))


def vass_to_vas(vass: Vass, target: str, keep: Sequence[int] | None = None,
                fixed: Iterable[tuple[int, int]] = ()) -> SectionedVas:
    """Compile a VASS into a sectioned VAS over counters+states+edges.

    Each control transition splits in two around a private in-flight
    coordinate, so exactly one state or in-flight coordinate holds a token
    at any time. The section pins the token to the target state and applies
    the given keep/fixed split to the original counters.
    """
    if target not in vass.states:
        raise ValueError(f"unknown target state {target!r}")
    d = vass.dim
    nq = len(vass.states)
    nt = len(vass.transitions)
    dim = d + nq + nt
    sidx = {q: d + i for i, q in enumerate(vass.states)}

    q0, v0 = vass.source
    source = list(v0) + [0] * (nq + nt)
    source[sidx[q0]] = 1

    transitions: list[Vec] = []
    for j, (q, delta, r) in enumerate(vass.transitions):
        pend = d + nq + j
        pick = [0] * dim
        pick[sidx[q]] -= 1
        pick[pend] += 1
        land = list(delta) + [0] * (nq + nt)
        land[pend] -= 1
        land[sidx[r]] += 1
        transitions.append(tuple(pick))
        transitions.append(tuple(land))

    if keep is None:
        keep = range(d)
    keep = tuple(keep)
    if any(not 0 <= j < d for j in keep):
        raise ValueError("keep must name counter coordinates")
    counter_fixed = tuple((int(j), int(u)) for j, u in fixed)
    if any(not 0 <= j < d for j, _ in counter_fixed):
        raise ValueError("fixed must name counter coordinates")
    section_fixed = list(counter_fixed)
    for q in vass.states:
        section_fixed.append((sidx[q], 1 if q == target else 0))
    for j in range(nt):
        section_fixed.append((d + nq + j, 0))
    return SectionedVas(
        Vas(dim, source, transitions),
        SectionSpec(dim, keep, section_fixed),
    )


def _unit(dim: int, j: int, value: int = 1) -> Vec:
    out = [0] * dim
    out[j] = value
    return tuple(out)


def section_union(a: SectionedVas, b: SectionedVas) -> SectionedVas:
    """A sectioned VAS whose section is the union of the two given sections.

    A control state picks a side; the chosen side runs its normalized system
    and hands its kept block over to shared output coordinates one unit at a
    time, while the idle side's block is drained to zero. The final section
    demands both blocks empty, so handover and draining must complete.
    """
    if a.arity != b.arity:
        raise DimensionMismatch("sections of unequal arity")
    ea, k = normalize_single(a)
    eb, _ = normalize_single(b)
    da, db = ea.dim, eb.dim
    dim = k + da + db
    offa, offb = k, k + da

    source = tuple([0] * k) + ea.source + eb.source
    trans: list[tuple[str, Vec, str]] = [
        ("pick", vzero(dim), "runa"),
        ("pick", vzero(dim), "runb"),
        ("runa", vzero(dim), "done"),
        ("runb", vzero(dim), "done"),
    ]
    for t in ea.transitions:
        trans.append(("runa", _embed(t, dim, offa), "runa"))
    for t in eb.transitions:
        trans.append(("runb", _embed(t, dim, offb), "runb"))
    for j in range(db):
        trans.append(("runa", _unit(dim, offb + j, -1), "runa"))
    for j in range(da):
        trans.append(("runb", _unit(dim, offa + j, -1), "runb"))
    for i in range(k):
        move_a = [0] * dim
        move_a[i], move_a[offa + i] = 1, -1
        trans.append(("runa", tuple(move_a), "runa"))
        move_b = [0] * dim
        move_b[i], move_b[offb + i] = 1, -1
        trans.append(("runb", tuple(move_b), "runb"))

    vass = Vass(dim, ("pick", "runa", "runb", "done"), ("pick", source), trans)
    return vass_to_vas(
        vass, "done",
        keep=range(k),
        fixed=[(j, 0) for j in range(k, dim)],
    )


def section_intersection(a: SectionedVas, b: SectionedVas) -> SectionedVas:
    """A sectioned VAS whose section is the intersection of the given sections.

    Both copies of a doubled system replay the first side in lockstep; then
    the second copy walks the other side's transitions in reverse, and the
    section demands it land exactly on that side's source. A reversed walk
    from a reachable vector back to the source visits the same nonnegative
    configurations as the forward run it mirrors.
    """
    ea, eb, keep = normalize_pair(a, b)
    d = ea.dim
    k = len(keep)
    dim = 2 * d

    def both(t: Vec) -> Vec:
        return t + t

    source = ea.source + ea.source
    trans: list[tuple[str, Vec, str]] = [("fwd", vzero(dim), "back")]
    for t in ea.transitions:
        trans.append(("fwd", both(t), "fwd"))
    for t in eb.transitions:
        trans.append(("back", vzero(d) + tuple(-x for x in t), "back"))

    vass = Vass(dim, ("fwd", "back"), ("fwd", source), trans)
    fixed = [(j, 0) for j in range(k, d)]
    fixed += [(d + j, eb.source[j]) for j in range(d)]
    return vass_to_vas(vass, "back", keep=range(k), fixed=fixed)


def hardness_instance(vass: Vass, state: str) -> tuple[SectionedVas, SectionedVas]:
    """Two sectioned systems separable exactly when the state is unreachable.

    Both extend the system with one tag counter, started at 0 and 1. The
    second may shed its tag at the chosen state. If the state is reachable
    both sections contain the tag-0 point of some common counter vector, so
    no separator of any kind exists; if not, both sections are empty.
    """
    if state not in vass.states:
        raise ValueError(f"unknown state {state!r}")
    d = vass.dim

    def extend(v: Vec, tag: int) -> Vec:
        return tuple(v) + (tag,)

    q0, v0 = vass.source
    base_trans = [(q, extend(t, 0), r) for q, t, r in vass.transitions]
    zero = Vass(d + 1, vass.states, (q0, extend(v0, 0)), base_trans)
    one = Vass(
        d + 1, vass.states, (q0, extend(v0, 1)),
        base_trans + [(state, _unit(d + 1, d, -1), state)],
    )
    return (
        vass_to_vas(zero, state, keep=range(d + 1)),
        vass_to_vas(one, state, keep=range(d + 1)),
    )
