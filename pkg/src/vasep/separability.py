"""Deciding separability of two VAS sections, with checkable certificates.

Two semi-procedures run under a fair budget schedule. The positive side
walks moduli n = 1, 2, 3, ... and tries to prove, via the product
reachability instances, that no equivalent pair (mod n, or at threshold n)
exists; success yields a separator read off the first side's classes. The
negative side enumerates pairs of run-built linear subsets of the two
expansions and asks the linear-set layer for a nonseparability proof, which
transfers to the full sections. Soundness of an answer never depends on
budgets; budgets only decide whether an answer is reached.
"""

from __future__ import annotations

import itertools
import random
import threading
from dataclasses import asdict, dataclass, field
from typing import Iterable, Literal, Sequence

from .errors import BudgetExceeded, DimensionMismatch, InvalidRun
from .intlin import Vec, vadd, vmod, vsub, vzero
from .linsets import (
    LinearSet,
    ModularSet,
    UnarySet,
    all_unary_classes,
    modular_member,
    unary_class_of,
    unary_member,
)
from .linsep import (
    NotSeparableVerdict,
    SliceStep,
    diophantine_witness,
    linked_support,
    unary_separable_linear,
    verify_linsep,
)
from .reach import (
    Found,
    ProvedEmpty,
    ReachInstance,
    Unknown,
    decide,
    emptiness_instance,
    forward_search,
    modpair_instance,
    state_equation_feasible,
    unarypair_instances,
    _residue_closure,
)
from .vas import Run, SectionedVas, Vas, normalize_pair, run_embeds, validate_run

Mode = Literal["modular", "unary"]


@dataclass(frozen=True)
class Budgets:
    """Effort knobs. Soundness never depends on these."""

    states: int = 200_000          # forward-search ceiling per instance
    max_n: int = 16                # last modulus/threshold the schedule tries
    max_run_len: int = 8           # longest runs enumerated as witness parts
    max_witness_pairs: int = 400   # total linear-pair tests
    pos_quantum: int = 10_000      # explored configs per n per round
    neg_quantum: int = 50          # pair tests per round
    prover_nodes: int = 20_000     # firing-count search nodes
    residue_cap: int = 200_000     # residue closure size cap
    block_states: int = 50_000     # per-block exhaustive enumeration cap
    target_cap: int = 100_000      # product targets per instance
    member_cap: int = 4_000        # members enumerated for separator synthesis
    run_nodes: int = 100_000       # run-tree nodes for witness enumeration
    max_runs: int = 600            # expansion-target runs kept per side
    max_pumps: int = 12            # pump runs per witness
    workers: int = 1               # 2 runs the two procedures concurrently
    seed: int | None = None        # optional shuffle of pair order


@dataclass(frozen=True)
class Witness:
    """A base run and pump runs it embeds into, all targeting the expansion.

    Realizes the linear set {target(base)} + combinations of the pump
    increments: any member is the target of an actual run obtained by
    repeated composition, so the set is contained in the expansion.
    """

    base: Run
    pumps: tuple[Run, ...]

    def linear(self, keep: Sequence[int]) -> LinearSet:
        b = _project(self.base.target, keep)
        periods = []
        for p in self.pumps:
            periods.append(_project(vsub(p.target, self.base.target), keep))
        return LinearSet(b, periods)


@dataclass(frozen=True)
class Certificate:
    verdict: str                      # separable | not_separable | unknown
    mode: str
    n: int | None = None
    separator: ModularSet | UnarySet | None = None
    witness_u: Witness | None = None
    witness_v: Witness | None = None
    coeffs: tuple[int, ...] | None = None
    coeff_vectors: tuple[Vec, ...] | None = None
    linked: tuple[int, ...] | None = None
    path: str | None = None
    trace: tuple[SliceStep, ...] = ()
    proofs: tuple[dict, ...] | None = None
    member_bound: int | None = None
    budget: dict | None = None
    version: str = "1"


def _project(v: Vec, keep: Sequence[int]) -> Vec:
    return tuple(v[i] for i in keep)


def _in_expansion(v: Vec, off: Sequence[int]) -> bool:
    return all(v[j] == 0 for j in off)


def _off_coords(dim: int, keep: Sequence[int]) -> tuple[int, ...]:
    ks = set(keep)
    return tuple(j for j in range(dim) if j not in ks)


def expansion_members(exp: Vas, keep: Sequence[int], cap: int) -> list[Vec]:
    """Kept-part projections of expansion members, found by breadth-first
    search over at most cap configurations. Deterministic; not complete."""
    off = _off_coords(exp.dim, keep)
    seen = {exp.source}
    queue = [exp.source]
    members: list[Vec] = []
    got: set[Vec] = set()
    if _in_expansion(exp.source, off):
        members.append(_project(exp.source, keep))
        got.add(members[0])
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for t in exp.transitions:
            nxt = vadd(cur, t)
            if any(x < 0 for x in nxt) or nxt in seen:
                continue
            if len(seen) >= cap:
                return members
            seen.add(nxt)
            queue.append(nxt)
            if _in_expansion(nxt, off):
                w = _project(nxt, keep)
                if w not in got:
                    got.add(w)
                    members.append(w)
    return members


def enumerate_expansion_runs(exp: Vas, keep: Sequence[int], max_len: int,
                             max_runs: int, max_nodes: int) -> list[Run]:
    """Runs whose target lies in the expansion, shortest first.

    Breadth-first over the run tree; growing any cap only appends to the
    returned list, so indexes are stable across budget rounds.
    """
    off = _off_coords(exp.dim, keep)
    runs: list[Run] = []
    if _in_expansion(exp.source, off):
        runs.append(Run(exp.source, ()))
    if len(runs) >= max_runs:
        return runs
    queue: list[tuple[tuple[int, ...], Vec]] = [((), exp.source)]
    head = 0
    created = 1
    while head < len(queue):
        labels, cfg = queue[head]
        head += 1
        if len(labels) >= max_len:
            continue
        for i, t in enumerate(exp.transitions):
            nxt = vadd(cfg, t)
            if any(x < 0 for x in nxt):
                continue
            if created >= max_nodes:
                return runs
            created += 1
            nl = labels + (i,)
            if _in_expansion(nxt, off):
                runs.append(validate_run(exp, nl))
                if len(runs) >= max_runs:
                    return runs
            queue.append((nl, nxt))
    return runs


def build_witnesses(runs: Sequence[Run], max_pumps: int) -> list[Witness]:
    """One witness per distinct base target: the base plus every embedding
    run contributing a fresh increment, up to max_pumps of them.

    Larger witnesses dominate: if any sub-witness pair proves the sections
    nonseparable, so does the pair of these (supersets are harder to
    separate), so one maximal witness per base loses nothing.
    """
    seen_targets: set[Vec] = set()
    out = []
    for base in runs:
        if base.target in seen_targets:
            continue
        seen_targets.add(base.target)
        periods: list[Vec] = []
        pumps: list[Run] = []
        for cand in runs:
            if len(pumps) >= max_pumps:
                break
            delta = vsub(cand.target, base.target)
            if not any(delta) or delta in periods:
                continue
            if any(x < 0 for x in delta) or not run_embeds(base, cand):
                continue
            periods.append(delta)
            pumps.append(cand)
        out.append(Witness(base, tuple(pumps)))
    return out


def realize_member(exp: Vas, witness: Witness,
                   coeffs: Sequence[int]) -> Run:
    """An actual run whose target is base + sum coeffs[i] * increment[i]."""
    from .vas import pump_compose

    if len(coeffs) != len(witness.pumps):
        raise ValueError("one coefficient per pump required")
    cur = witness.base
    for c, pump in zip(coeffs, witness.pumps):
        if c < 0:
            raise ValueError("coefficients must be nonnegative")
        for _ in range(c):
            cur = pump_compose(exp, witness.base, cur, pump)
    return cur


def positive_stage(expa: Vas, expb: Vas, keep: Sequence[int], n: int,
                   mode: Mode, budgets: Budgets = Budgets(),
                   max_states: int | None = None) -> tuple[str, object]:
    """One shot of the positive side at a single n.

    Returns ("disjoint", proofs), ("overlap", evidence) with a checkable
    product run, or ("unknown", stats).
    """
    try:
        if mode == "modular":
            instances: tuple[ReachInstance, ...] = (
                modpair_instance(expa, expb, keep, n, budgets.target_cap),)
        else:
            instances = unarypair_instances(expa, expb, keep, n,
                                            budgets.target_cap)
    except BudgetExceeded as exc:
        return "unknown", {"reason": str(exc)}
    proofs: list[dict] = []
    states = budgets.states if max_states is None else max_states
    for inst in instances:
        out = decide(inst, max_states=states,
                     prover_nodes=budgets.prover_nodes,
                     residue_cap=budgets.residue_cap,
                     block_states=budgets.block_states)
        if isinstance(out, Found):
            return "overlap", {"instance": inst.tag, "run": out.run,
                               "target": out.target}
        if isinstance(out, Unknown):
            return "unknown", dict(out.stats, instance=inst.tag)
        for p in out.proofs:
            proofs.append(dict(p, instance=inst.tag))
    return "disjoint", tuple(proofs)


def check_emptiness(exp: Vas, keep: Sequence[int],
                    budgets: Budgets) -> tuple[str, tuple[dict, ...] | None]:
    inst = emptiness_instance(exp, keep)
    out = decide(inst, max_states=min(budgets.states, 2 * budgets.pos_quantum),
                 prover_nodes=budgets.prover_nodes,
                 residue_cap=budgets.residue_cap,
                 block_states=budgets.block_states)
    if isinstance(out, Found):
        return "nonempty", None
    if isinstance(out, ProvedEmpty):
        return "empty", out.proofs
    return "unknown", None


def _empty_separator(mode: Mode, k: int) -> ModularSet | UnarySet:
    if mode == "modular":
        return ModularSet(1, k, ())
    return UnarySet(1, k, ())


def _full_separator(mode: Mode, k: int) -> ModularSet | UnarySet:
    if mode == "modular":
        return ModularSet(1, k, (vzero(k),))
    return UnarySet(1, k, all_unary_classes(1, k))


def synthesize_separator(members: Iterable[Vec], n: int, k: int,
                         mode: Mode) -> ModularSet | UnarySet:
    """Classes of the first side's bounded-confirmed members at modulus n."""
    if mode == "modular":
        return ModularSet(n, k, {vmod(w, n) for w in members})
    return UnarySet(n, k, {unary_class_of(w, n) for w in members})


def _test_pair(wa: Witness, wb: Witness, keep: Sequence[int], mode: Mode,
               budgets: Budgets) -> NotSeparableVerdict | None:
    la = wa.linear(keep)
    lb = wb.linear(keep)
    if mode == "modular":
        coeffs = diophantine_witness(la, lb)
        if coeffs is None:
            return None
        return NotSeparableVerdict(la.periods + lb.periods, coeffs,
                                   path="lattice")
    try:
        verdict = unary_separable_linear(la, lb, max_n=budgets.max_n,
                                         residue_cap=budgets.residue_cap)
    except BudgetExceeded:
        return None
    return verdict if isinstance(verdict, NotSeparableVerdict) else None


class _NegativeState:
    """Incremental witness-pair exploration, stable across budget rounds."""

    def __init__(self, expa: Vas, expb: Vas, keep: tuple[int, ...],
                 mode: Mode, budgets: Budgets):
        self.expa, self.expb, self.keep = expa, expb, keep
        self.mode, self.budgets = mode, budgets
        self.tested: dict[tuple[int, int], tuple[int, int]] = {}
        self.pairs_spent = 0
        self.exhausted = False
        self.rng = (random.Random(budgets.seed)
                    if budgets.seed is not None else None)

    def _enumerate(self, rnd: int) -> tuple[list[Witness], list[Witness]]:
        b = self.budgets
        max_len = min(1 + rnd, b.max_run_len)
        max_runs = min(150 * rnd, b.max_runs)
        max_nodes = min(20_000 * rnd, b.run_nodes)
        runs_a = enumerate_expansion_runs(self.expa, self.keep, max_len,
                                          max_runs, max_nodes)
        runs_b = enumerate_expansion_runs(self.expb, self.keep, max_len,
                                          max_runs, max_nodes)
        return (build_witnesses(runs_a, b.max_pumps),
                build_witnesses(runs_b, b.max_pumps))

    def round(self, rnd: int) -> Certificate | None:
        b = self.budgets
        wits_a, wits_b = self._enumerate(rnd)
        todo: list[tuple[int, int]] = []
        for i, j in sorted(itertools.product(range(len(wits_a)),
                                             range(len(wits_b))),
                           key=lambda ij: (ij[0] + ij[1], ij[0])):
            shape = (len(wits_a[i].pumps), len(wits_b[j].pumps))
            if self.tested.get((i, j)) == shape:
                continue
            todo.append((i, j))
        if self.rng is not None:
            self.rng.shuffle(todo)
        quota = b.neg_quantum
        for i, j in todo:
            if quota <= 0 or self.pairs_spent >= b.max_witness_pairs:
                break
            quota -= 1
            self.pairs_spent += 1
            self.tested[(i, j)] = (len(wits_a[i].pumps), len(wits_b[j].pumps))
            verdict = _test_pair(wits_a[i], wits_b[j], self.keep, self.mode, b)
            if verdict is not None:
                la = wits_a[i].linear(self.keep)
                lb = wits_b[j].linear(self.keep)
                return Certificate(
                    verdict="not_separable", mode=self.mode,
                    witness_u=wits_a[i], witness_v=wits_b[j],
                    coeffs=verdict.coeffs,
                    coeff_vectors=la.periods + lb.periods,
                    linked=verdict.linked, path=verdict.path,
                    trace=verdict.trace,
                    budget=asdict(b))
        saturated = (min(1 + rnd, b.max_run_len) == b.max_run_len
                     and min(150 * rnd, b.max_runs) == b.max_runs
                     and min(20_000 * rnd, b.run_nodes) == b.run_nodes)
        if (saturated and not todo) or self.pairs_spent >= b.max_witness_pairs:
            self.exhausted = True
        return None


class _PositiveState:
    """Per-n instance bookkeeping: searches grow by rounds, provers run once."""

    def __init__(self, expa: Vas, expb: Vas, keep: tuple[int, ...],
                 mode: Mode, budgets: Budgets):
        self.expa, self.expb, self.keep = expa, expb, keep
        self.mode, self.budgets = mode, budgets
        first = 2 if mode == "modular" else 1
        self.pending: list[int] = list(range(first, budgets.max_n + 1))
        self.instances: dict[int, tuple[ReachInstance, ...] | None] = {}
        self.done: dict[tuple[int, str], tuple[dict, ...]] = {}
        self.provers_ran: set[tuple[int, str]] = set()
        self.stuck: set[int] = set()
        self.exhausted = False

    def _instances_for(self, n: int) -> tuple[ReachInstance, ...] | None:
        if n not in self.instances:
            b = self.budgets
            try:
                if self.mode == "modular":
                    self.instances[n] = (modpair_instance(
                        self.expa, self.expb, self.keep, n, b.target_cap),)
                else:
                    self.instances[n] = unarypair_instances(
                        self.expa, self.expb, self.keep, n, b.target_cap)
            except BudgetExceeded:
                self.instances[n] = None
        return self.instances[n]

    def round(self, rnd: int) -> Certificate | None:
        b = self.budgets
        states = min(b.states, rnd * b.pos_quantum)
        budget_topped = states >= b.states
        for n in list(self.pending):
            instances = self._instances_for(n)
            if instances is None:
                self.stuck.add(n)
                self.pending.remove(n)
                continue
            all_done = True
            progressed = False
            for inst in instances:
                key = (n, inst.tag)
                if key in self.done:
                    continue
                out = forward_search(inst, max_states=states)
                if out.found is not None:
                    # equivalent pair exists at this n; n cannot separate
                    self.pending.remove(n)
                    all_done = False
                    progressed = True
                    break
                if out.complete:
                    self.done[key] = (
                        {"prover": "exhaustion", "states": out.visited,
                         "instance": inst.tag},)
                    progressed = True
                    continue
                if key not in self.provers_ran:
                    self.provers_ran.add(key)
                    proofs = self._prove(inst)
                    if proofs is not None:
                        self.done[key] = proofs
                        progressed = True
                        continue
                all_done = False
            if n not in self.pending:
                continue
            if all_done:
                proofs = []
                for inst in instances:
                    proofs.extend(self.done[(n, inst.tag)])
                return self._separable(n, tuple(proofs))
            if budget_topped and not progressed:
                self.stuck.add(n)
                self.pending.remove(n)
        if not self.pending:
            self.exhausted = True
        return None

    def _prove(self, inst: ReachInstance) -> tuple[dict, ...] | None:
        out = decide(inst, max_states=1,
                     prover_nodes=self.budgets.prover_nodes,
                     residue_cap=self.budgets.residue_cap,
                     block_states=self.budgets.block_states)
        if isinstance(out, ProvedEmpty):
            return tuple(dict(p, instance=inst.tag) for p in out.proofs)
        return None

    def _separable(self, n: int, proofs: tuple[dict, ...]) -> Certificate:
        b = self.budgets
        members = expansion_members(self.expa, self.keep, b.member_cap)
        sep = synthesize_separator(members, n, len(self.keep), self.mode)
        return Certificate(
            verdict="separable", mode=self.mode, n=n, separator=sep,
            proofs=proofs, member_bound=b.member_cap, budget=asdict(b))


def decide_separability(a: SectionedVas, b: SectionedVas, mode: Mode,
                        budgets: Budgets = Budgets()) -> Certificate:
    """Decide whether some modular (or unary) set separates the two sections.

    Sound for both answers regardless of budgets; returns an unknown
    certificate with a budget report when neither side concludes in budget.
    """
    if mode not in ("modular", "unary"):
        raise ValueError(f"unknown mode {mode!r}")
    expa, expb, keep = normalize_pair(a, b)
    k = len(keep)

    state_a, proofs_a = check_emptiness(expa, keep, budgets)
    if state_a == "empty":
        return Certificate(
            verdict="separable", mode=mode, n=1,
            separator=_empty_separator(mode, k),
            proofs=tuple(dict(p, instance="empty:a") for p in proofs_a),
            member_bound=budgets.member_cap, budget=asdict(budgets))
    state_b, proofs_b = check_emptiness(expb, keep, budgets)
    if state_b == "empty":
        return Certificate(
            verdict="separable", mode=mode, n=1,
            separator=_full_separator(mode, k),
            proofs=tuple(dict(p, instance="empty:b") for p in proofs_b),
            member_bound=budgets.member_cap, budget=asdict(budgets))

    pos = _PositiveState(expa, expb, tuple(keep), mode, budgets)
    neg = _NegativeState(expa, expb, tuple(keep), mode, budgets)

    if budgets.workers >= 2:
        return _parallel(pos, neg, budgets)

    rnd = 0
    while True:
        rnd += 1
        cert = pos.round(rnd)
        if cert is not None:
            return cert
        cert = neg.round(rnd)
        if cert is not None:
            return cert
        if pos.exhausted and neg.exhausted:
            return _unknown(mode, pos, neg, budgets, rnd)
        if rnd > 64 + budgets.max_n:
            return _unknown(mode, pos, neg, budgets, rnd)


def _unknown(mode: Mode, pos: _PositiveState, neg: _NegativeState,
             budgets: Budgets, rounds: int) -> Certificate:
    report = {
        "rounds": rounds,
        "pending_n": sorted(pos.pending),
        "stuck_n": sorted(pos.stuck),
        "pairs_tested": neg.pairs_spent,
        "budgets": asdict(budgets),
    }
    return Certificate(verdict="unknown", mode=mode, budget=report)


def _parallel(pos: _PositiveState, neg: _NegativeState,
              budgets: Budgets) -> Certificate:
    result: dict[str, Certificate] = {}
    lock = threading.Lock()
    stop = threading.Event()

    def spin(side) -> None:
        rnd = 0
        while not stop.is_set():
            rnd += 1
            cert = side.round(rnd)
            if cert is not None:
                with lock:
                    result.setdefault("cert", cert)
                stop.set()
                return
            if side.exhausted or rnd > 64 + budgets.max_n:
                return

    threads = [threading.Thread(target=spin, args=(s,)) for s in (pos, neg)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if "cert" in result:
        return result["cert"]
    return _unknown(pos.mode, pos, neg, budgets, 0)


def _witness_ok(exp: Vas, keep: Sequence[int], witness: Witness) -> bool:
    off = _off_coords(exp.dim, keep)
    try:
        base = validate_run(exp, witness.base.labels())
        pumps = [validate_run(exp, p.labels()) for p in witness.pumps]
    except InvalidRun:
        return False
    if base.steps != witness.base.steps or base.start != witness.base.start:
        return False
    if not _in_expansion(base.target, off):
        return False
    for given, rebuilt in zip(witness.pumps, pumps):
        if rebuilt.steps != given.steps or rebuilt.start != given.start:
            return False
        if not _in_expansion(rebuilt.target, off):
            return False
        if not run_embeds(base, rebuilt):
            return False
    return True


def _recheck_proof(inst: ReachInstance, proof: dict, budgets: Budgets) -> bool:
    target = proof.get("target")
    prover = proof.get("prover")
    if prover == "exhaustion":
        out = forward_search(inst, max_states=int(proof["states"]) + 1)
        return out.complete and out.found is None
    if target is None:
        return False
    target = tuple(int(x) for x in target)
    if target not in inst.targets:
        return False
    bi = int(proof.get("block", -1))
    if not 0 <= bi < len(inst.blocks):
        return False
    blk = inst.blocks[bi]
    sys = inst.block_vas(blk)
    part = target[blk.lo:blk.hi]
    if prover == "residue":
        closure = _residue_closure(sys.source, sys.transitions,
                                   int(proof["modulus"]), budgets.residue_cap)
        return closure is not None and vmod(part, int(proof["modulus"])) not in closure
    if prover == "lattice":
        from .intlin import hnf
        basis = hnf(sys.transitions, sys.dim)
        return not basis.contains(vsub(part, sys.source))
    if prover == "monotone":
        j = int(proof["coord"])
        if not 0 <= j < sys.dim:
            return False
        if proof.get("direction") == "up":
            return (all(t[j] >= 0 for t in sys.transitions)
                    and part[j] < sys.source[j])
        return (all(t[j] <= 0 for t in sys.transitions)
                and part[j] > sys.source[j])
    if prover == "state_equation":
        rhs = vsub(part, sys.source)
        return state_equation_feasible(sys.transitions, rhs,
                                       budgets.prover_nodes) is False
    if prover == "block_exhaustion":
        seen = {sys.source}
        frontier = [sys.source]
        while frontier:
            cur = frontier.pop()
            for t in sys.transitions:
                nxt = vadd(cur, t)
                if any(x < 0 for x in nxt) or nxt in seen:
                    continue
                if len(seen) >= budgets.block_states:
                    return False
                seen.add(nxt)
                frontier.append(nxt)
        return part not in seen
    return False


def _verify_separable(expa: Vas, expb: Vas, keep: tuple[int, ...],
                      cert: Certificate, budgets: Budgets) -> bool:
    sep = cert.separator
    k = len(keep)
    if sep is None or cert.n is None or sep.dim != k:
        return False
    if isinstance(sep, ModularSet):
        if cert.mode != "modular":
            return False
        inside = lambda w: modular_member(sep, w)
    elif isinstance(sep, UnarySet):
        if cert.mode != "unary":
            return False
        inside = lambda w: unary_member(sep, w)
    else:
        return False

    proofs = cert.proofs or ()
    tags = {p.get("instance") for p in proofs}
    if tags and all(isinstance(t, str) and t.startswith("empty:") for t in tags):
        if len(tags) != 1:
            return False
        side = next(iter(tags)).split(":", 1)[1]
        if side not in ("a", "b"):
            return False
        exp = expa if side == "a" else expb
        inst = emptiness_instance(exp, keep)
        for p in proofs:
            if not _recheck_proof(inst, p, budgets):
                return False
    else:
        n = cert.n
        try:
            if cert.mode == "modular":
                instances: tuple[ReachInstance, ...] = (
                    modpair_instance(expa, expb, keep, n, budgets.target_cap),)
            else:
                instances = unarypair_instances(expa, expb, keep, n,
                                                budgets.target_cap)
        except BudgetExceeded:
            return False
        by_tag: dict[str, list[dict]] = {}
        for p in proofs:
            by_tag.setdefault(str(p.get("instance")), []).append(p)
        for inst in instances:
            got = by_tag.get(inst.tag)
            if got is None:
                return False
            exh = [p for p in got if p.get("prover") == "exhaustion"]
            if exh:
                if not all(_recheck_proof(inst, p, budgets) for p in exh):
                    return False
                continue
            covered = {tuple(int(x) for x in p.get("target", ()))
                       for p in got}
            if set(inst.targets) - covered:
                return False
            for p in got:
                if not _recheck_proof(inst, p, budgets):
                    return False

    bound = cert.member_bound or budgets.member_cap
    for w in expansion_members(expa, keep, bound):
        if not inside(w):
            return False
    for w in expansion_members(expb, keep, bound):
        if inside(w):
            return False
    return True


def _verify_not_separable(expa: Vas, expb: Vas, keep: tuple[int, ...],
                          cert: Certificate) -> bool:
    if cert.witness_u is None or cert.witness_v is None or cert.coeffs is None:
        return False
    if not _witness_ok(expa, keep, cert.witness_u):
        return False
    if not _witness_ok(expb, keep, cert.witness_v):
        return False
    la = cert.witness_u.linear(keep)
    lb = cert.witness_v.linear(keep)
    if cert.coeff_vectors is not None:
        if tuple(cert.coeff_vectors) != la.periods + lb.periods:
            return False
    verdict = NotSeparableVerdict(
        la.periods + lb.periods, tuple(cert.coeffs), cert.linked,
        cert.path or "lattice", tuple(cert.trace))
    return verify_linsep(la, lb, verdict, cert.mode)


def verify_certificate(a: SectionedVas, b: SectionedVas, cert: Certificate,
                       budgets: Budgets = Budgets()) -> bool:
    """Independently re-check a certificate against the two sections.

    Unknown certificates carry no claim and verify vacuously. All checks are
    re-derivations: runs are re-validated, proofs re-proved, and separators
    re-tested against bounded-confirmed members on both sides.
    """
    if cert.mode not in ("modular", "unary"):
        return False
    try:
        expa, expb, keep = normalize_pair(a, b)
    except (DimensionMismatch, ValueError):
        return False
    if cert.verdict == "unknown":
        return True
    if cert.budget and isinstance(cert.budget, dict):
        merged = {f: cert.budget[f] for f in cert.budget
                  if f in Budgets.__dataclass_fields__
                  and isinstance(cert.budget[f], int)}
        try:
            budgets = Budgets(**{**asdict(budgets), **merged})
        except TypeError:
            pass
    if cert.verdict == "separable":
        return _verify_separable(expa, expb, tuple(keep), cert, budgets)
    if cert.verdict == "not_separable":
        return _verify_not_separable(expa, expb, tuple(keep), cert)
    return False
