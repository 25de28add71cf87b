"""The reachability oracle: search, unreachability provers, product instances."""

import itertools

import pytest

from vasep import brute
from vasep.errors import BudgetExceeded
from vasep.reach import (
    Block,
    Found,
    ProvedEmpty,
    ReachInstance,
    Unknown,
    decide,
    emptiness_instance,
    extract_side,
    forward_search,
    modpair_instance,
    state_equation_feasible,
    unarypair_instances,
)
from vasep.separability import Budgets, _recheck_proof
from vasep.vas import Vas, full_section, normalize_pair, validate_run
from conftest import example1, positives, random_vas, zero_section


def full_block(vas: Vas) -> tuple[Block, ...]:
    return (Block(0, vas.dim, tuple(range(len(vas.transitions)))),)


def instance(vas: Vas, targets) -> ReachInstance:
    return ReachInstance(vas, targets, full_block(vas))


def test_instance_validation():
    vas = example1()
    with pytest.raises(ValueError):
        ReachInstance(vas, [(0, 0, 0)], ())  # blocks must cover coordinates
    with pytest.raises(ValueError):
        ReachInstance(vas, [(0, 0, 0)],
                      (Block(0, 3, (0,)),))  # transition 1 missing
    with pytest.raises(ValueError):
        instance(vas, [(-1, 0, 0)])
    two = (Block(0, 1, (0,)), Block(1, 3, (1,)))
    with pytest.raises(ValueError):
        # both transitions touch both halves
        ReachInstance(vas, [(0, 0, 0)], two)


def test_forward_search_finds_run():
    inst = instance(example1(), [(0, 2, 1)])
    out = forward_search(inst)
    assert out.found is not None
    assert out.found.target == (0, 2, 1)
    replay = validate_run(inst.vas, out.found.run.labels())
    assert replay.target == (0, 2, 1)


def test_forward_search_source_hit():
    vas = Vas(2, (1, 1), [(1, 0)])
    out = forward_search(instance(vas, [(1, 1)]))
    assert out.found is not None and len(out.found.run) == 0
    assert out.complete


def test_forward_search_exhausts_finite_space():
    vas = Vas(1, (1,), [(-2,)])
    out = forward_search(instance(vas, [(5,)]))
    assert out.found is None
    assert out.complete and out.visited == 1


def test_forward_search_counts_match_box_reach(rng):
    for _ in range(60):
        dim = rng.randint(1, 2)
        vas = random_vas(rng, dim, rng.randint(0, 3))
        if any(x > 4 for x in vas.source):
            continue
        box = brute.bounded_reach(vas, 4)
        out = forward_search(instance(vas, [(9, ) * dim]), value_cap=4)
        assert out.found is None
        assert out.visited == len(box)


def test_state_equation_hand_cases():
    assert state_equation_feasible([(2,)], (4,)) is True
    assert state_equation_feasible([(2,)], (3,)) is False
    assert state_equation_feasible([(1, -1), (0, 1)], (2, 3)) is True
    assert state_equation_feasible([(-1,)], (1,)) is False
    assert state_equation_feasible([], (0, 0)) is True


def test_state_equation_false_means_no_solution(rng):
    for _ in range(120):
        dim = rng.randint(1, 2)
        m = rng.randint(1, 3)
        deltas = [tuple(rng.randint(-2, 2) for _ in range(dim)) for _ in range(m)]
        rhs = tuple(rng.randint(0, 3) for _ in range(dim))
        got = state_equation_feasible(deltas, rhs, max_nodes=50_000)
        small = None
        for combo in itertools.product(range(5), repeat=m):
            if all(sum(c * d[j] for c, d in zip(combo, deltas)) == rhs[j]
                   for j in range(dim)):
                small = combo
                break
        if got is False:
            assert small is None
        if small is not None:
            assert got is not False


def test_decide_found():
    out = decide(instance(example1(), [(0, 2, 1)]))
    assert isinstance(out, Found)
    assert out.target == (0, 2, 1)


def test_decide_proved_empty_with_checkable_proofs():
    # a + b - c == 1 is invariant; this target violates it
    inst = instance(example1(), [(0, 0, 5)])
    out = decide(inst)
    assert isinstance(out, ProvedEmpty)
    budgets = Budgets()
    for proof in out.proofs:
        assert _recheck_proof(inst, proof, budgets)


def test_decide_complete_search_proof():
    vas = Vas(1, (1,), [(-2,)])
    out = decide(instance(vas, [(5,)]))
    assert isinstance(out, ProvedEmpty)
    assert out.proofs[0]["prover"] == "exhaustion"
    assert _recheck_proof(instance(vas, [(5,)]), out.proofs[0], Budgets())


def test_decide_unknown_on_tiny_budget():
    vas = Vas(1, (0,), [(1,)])
    # every value is reachable, so no prover can rule the target out,
    # and the budget stops the search before it gets there
    out = decide(instance(vas, [(10_000,)]), max_states=5, prover_nodes=10,
                 residue_cap=4, block_states=5, moduli=(2,))
    assert isinstance(out, Unknown)


def expansions(sa, sb):
    ea, eb, keep = normalize_pair(sa, sb)
    return ea, eb, keep


def test_modpair_instance_found_matches_congruent_pair():
    ea, eb, keep = expansions(zero_section(), positives())
    inst = modpair_instance(ea, eb, keep, 1)
    out = forward_search(inst, max_states=50_000)
    assert out.found is not None
    d = ea.dim
    ru = extract_side(inst, out.found.run, "a", ea)
    rv = extract_side(inst, out.found.run, "b", eb)
    pu, pv = ru.target, rv.target
    assert not any(pu[j] for j in range(d) if j not in keep)
    assert not any(pv[j] for j in range(d) if j not in keep)
    for j in keep:
        assert (pu[j] - pv[j]) % 1 == 0


def test_modpair_consistency_random(rng):
    for _ in range(25):
        va = random_vas(rng, 1, rng.randint(0, 2))
        vb = random_vas(rng, 1, rng.randint(0, 2))
        sa, sb = full_section(va), full_section(vb)
        n = rng.choice([1, 2, 3])
        ea, eb, keep = expansions(sa, sb)
        inst = modpair_instance(ea, eb, keep, n)
        out = forward_search(inst, max_states=20_000, value_cap=24)
        pair = brute.pair_search_sections(sa, sb, n, "modular", 8)
        if pair is not None:
            # a congruent pair in the small box must be reachable here
            hit = forward_search(inst, max_states=200_000, value_cap=30)
            assert hit.found is not None
        if out.found is not None:
            ru = extract_side(inst, out.found.run, "a", ea)
            rv = extract_side(inst, out.found.run, "b", eb)
            for j in keep:
                assert (ru.target[j] - rv.target[j]) % n == 0


def test_unarypair_instances_shapes():
    ea, eb, keep = expansions(zero_section(), positives())
    insts = unarypair_instances(ea, eb, keep, 2)
    assert len(insts) == 2 ** len(keep)
    tags = {i.tag for i in insts}
    assert tags == {"unary:2:0", "unary:2:1"}
    for inst in insts:
        sigma = inst.tag.split(":")[2]
        for t in inst.targets:
            for i, j in enumerate(keep):
                if sigma[i] == "1":
                    assert 2 <= t[j] < 4
                else:
                    assert t[j] < 2


def test_unarypair_consistency_random(rng):
    for _ in range(20):
        va = random_vas(rng, 1, rng.randint(0, 2))
        vb = random_vas(rng, 1, rng.randint(0, 2))
        sa, sb = full_section(va), full_section(vb)
        n = rng.choice([1, 2])
        ea, eb, keep = expansions(sa, sb)
        found_any = False
        for inst in unarypair_instances(ea, eb, keep, n):
            out = forward_search(inst, max_states=100_000, value_cap=14)
            if out.found is None:
                continue
            found_any = True
            ru = extract_side(inst, out.found.run, "a", ea)
            rv = extract_side(inst, out.found.run, "b", eb)
            pu = tuple(ru.target[j] for j in keep)
            pv = tuple(rv.target[j] for j in keep)
            assert brute.canon_unary(pu, n) == brute.canon_unary(pv, n)
        pair = brute.pair_search_sections(sa, sb, n, "unary", 5)
        if pair is not None:
            assert found_any


def test_emptiness_instance():
    ea, eb, keep = expansions(zero_section(), positives())
    out = forward_search(emptiness_instance(ea, keep))
    assert out.found is not None  # zero is a member
    out = forward_search(emptiness_instance(eb, keep), max_states=5_000)
    assert out.found is not None  # members exist, draining reaches zero
    empty_vas = Vas(1, (1,), [])  # source 1 never drains without keep
    inst = emptiness_instance(empty_vas, ())
    out = forward_search(inst)
    assert out.found is None and out.complete


def test_extract_side_requires_provenance():
    vas = Vas(1, (0,), [(1,)])
    inst = instance(vas, [(1,)])
    out = forward_search(inst)
    with pytest.raises(ValueError):
        extract_side(inst, out.found.run, "a", vas)


def test_target_cap():
    ea, eb, keep = expansions(zero_section(), positives())
    with pytest.raises(BudgetExceeded):
        modpair_instance(ea, eb, keep, 50, target_cap=10)
