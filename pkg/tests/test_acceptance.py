"""Acceptance gate: ten checks, one pass line each (run with -s to see them)."""

import functools
import json
import random
import time
from collections import deque

from vasep import brute, cli, jsonio
from vasep.errors import BudgetExceeded
from vasep.linsep import (
    NotSeparableVerdict,
    SeparableVerdict,
    modular_separable_linear,
    unary_separable_linear,
)
from vasep.linsets import ModularSet, UnarySet, unary_member
from vasep.reach import extract_side, forward_search
from vasep.separability import Budgets, decide_separability, positive_stage
from vasep.vas import (
    Vas,
    Vass,
    full_section,
    hardness_instance,
    normalize_pair,
    pump_compose,
    pump_linear,
    validate_run,
    vass_to_vas,
)
from conftest import (
    equivalent_pair,
    evens,
    example1,
    example1_section,
    example2,
    fixture_path,
    odds,
    positives,
    random_linear,
    random_vas,
    zero_section,
)

FAST = Budgets(states=20_000, max_n=6, max_run_len=6, max_witness_pairs=150,
               pos_quantum=4_000, max_runs=150, run_nodes=30_000)


def criterion(num):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] criterion {num}: FAIL")
                raise
            print(f"[acceptance] criterion {num}: PASS")
        return wrapper
    return deco


@criterion(1)
def test_criterion_1_bounded_reach_closed_form():
    start = time.monotonic()
    got = brute.bounded_reach(example1(), 12)
    want = {(a, b, c)
            for a in range(13) for b in range(13) for c in range(13)
            if a + b == c + 1 and (a - b) % 3 == 1}
    assert got == want
    assert time.monotonic() - start < 5.0


@criterion(2)
def test_criterion_2_section_members():
    got = brute.section_members(example1_section(), 12)
    assert got == {(0, 8), (3, 5), (6, 2)}


@criterion(3)
def test_criterion_3_control_state_compilation():
    start = time.monotonic()
    svas = vass_to_vas(example2(), "p", keep=range(3))
    members = brute.section_members(svas, 8, cap=10**6)
    got = {v for v in members if v[2] <= 3}
    want = {(a, b, c)
            for a in range(9) for b in range(9) for c in range(4)
            if 1 <= a + b <= 2 ** c}
    assert got == want
    assert time.monotonic() - start < 30.0


@criterion(4)
def test_criterion_4_modular_oracle_equivalence():
    rng = random.Random(40_001)
    conclusive = 0
    for _ in range(400):
        if conclusive >= 220:
            break
        dim = rng.randint(1, 3)
        ls = random_linear(rng, dim, hi=4, max_periods=3)
        ms = random_linear(rng, dim, hi=4, max_periods=3)
        kind, payload = brute.modular_separability(ls, ms, max_n=12)
        if kind == "unknown":
            continue
        verdict = modular_separable_linear(ls, ms)
        if kind == "not_separable":
            assert isinstance(verdict, NotSeparableVerdict)
        else:
            assert isinstance(verdict, SeparableVerdict)
        if isinstance(verdict, NotSeparableVerdict):
            total = [0] * dim
            for c, vec in zip(verdict.coeffs, verdict.vectors):
                for j in range(dim):
                    total[j] += c * vec[j]
            diff = [x - y for x, y in zip(ls.base, ms.base)]
            assert total == diff
        conclusive += 1
    assert conclusive >= 200


@criterion(5)
def test_criterion_5_unary_recursion():
    rng = random.Random(50_002)
    processed = 0
    for _ in range(260):
        dim = rng.randint(1, 3)
        ls = random_linear(rng, dim, hi=3, max_periods=3)
        ms = random_linear(rng, dim, hi=3, max_periods=3)
        try:
            verdict = unary_separable_linear(ls, ms, max_n=8)
        except BudgetExceeded:
            continue
        if isinstance(verdict, SeparableVerdict):
            sep = verdict.separator
            bound = 3 * sep.n + 5
            for v in brute.linear_members(ls, bound, cap=300_000):
                assert unary_member(sep, v)
            for v in brute.linear_members(ms, bound, cap=300_000):
                assert not unary_member(sep, v)
        else:
            for n in (1, 2, 3, 4, 5, 6):
                u, v = equivalent_pair(ls, ms, verdict, n)
                assert brute.linear_member_exact(ls, u)
                assert brute.linear_member_exact(ms, v)
                assert brute.canon_unary(u, n) == brute.canon_unary(v, n)
        processed += 1
    assert processed >= 200


def _random_embedded_triple(rng, vas, max_len=4, tries=40):
    labels = []
    cur = vas.source
    for _ in range(rng.randint(0, max_len)):
        opts = [i for i, t in enumerate(vas.transitions)
                if all(x + y >= 0 for x, y in zip(cur, t))]
        if not opts:
            break
        i = rng.choice(opts)
        labels.append(i)
        cur = tuple(x + y for x, y in zip(cur, vas.transitions[i]))
    base = validate_run(vas, labels)
    from vasep.errors import InvalidRun
    from vasep.vas import run_embeds
    pumps = []
    for _ in range(tries):
        if len(pumps) == 2:
            break
        ext = list(base.labels())
        for _ in range(rng.randint(1, 3)):
            pos = rng.randint(0, len(ext))
            ext.insert(pos, rng.randrange(len(vas.transitions)))
        try:
            run = validate_run(vas, ext)
        except InvalidRun:
            continue
        if run_embeds(base, run):
            pumps.append(run)
    if len(pumps) < 2:
        return None
    return base, pumps[0], pumps[1]


@criterion(6)
def test_criterion_6_pumping_property_suite():
    rng = random.Random(60_003)
    built = 0
    attempts = 0
    while built < 1000 and attempts < 6000:
        attempts += 1
        dim = rng.randint(1, 3)
        vas = random_vas(rng, dim, rng.randint(1, 3))
        triple = _random_embedded_triple(rng, vas)
        if triple is None:
            continue
        base, first, second = triple
        out = pump_compose(vas, base, first, second)
        want = tuple(f + s - b for f, s, b in
                     zip(first.target, second.target, base.target))
        assert out.target == want
        validate_run(vas, out.labels())
        count = rng.randint(0, 3)
        lin = pump_linear(vas, base, first, count)
        inc = tuple(f - b for f, b in zip(first.target, base.target))
        assert lin.target == tuple(b + count * i
                                   for b, i in zip(base.target, inc))
        built += 1
    assert built == 1000


@criterion(7)
def test_criterion_7_end_to_end_parity(tmp_path, capsys):
    start = time.monotonic()
    cert = decide_separability(evens(), odds(), "modular", FAST)
    assert time.monotonic() - start < 10.0
    assert cert.verdict == "separable" and cert.n == 2
    assert isinstance(cert.separator, ModularSet)

    start = time.monotonic()
    self_cert = decide_separability(evens(), evens(), "modular", FAST)
    assert time.monotonic() - start < 10.0
    assert self_cert.verdict == "not_separable"

    for name, c in (("sep.cert", cert), ("self.cert", self_cert)):
        path = tmp_path / name
        path.write_text(jsonio.dumps(jsonio.emit_certificate(c)))
        problem = ("evens_vs_odds.json" if name == "sep.cert"
                   else "evens_vs_evens.json")
        code = cli.main(["verify", fixture_path(problem), str(path)])
        assert capsys.readouterr().out.strip() == "valid"
        assert code == 0


@criterion(8)
def test_criterion_8_zero_vs_positives():
    start = time.monotonic()
    cert = decide_separability(zero_section(), positives(), "unary", FAST)
    assert time.monotonic() - start < 10.0
    assert cert.verdict == "separable" and cert.n == 1
    assert isinstance(cert.separator, UnarySet)
    assert cert.separator.classes == frozenset({(("small", 0),)})

    start = time.monotonic()
    cert = decide_separability(zero_section(), positives(), "modular", FAST)
    assert time.monotonic() - start < 10.0
    assert cert.verdict == "not_separable"


@criterion(9)
def test_criterion_9_instance_soundness():
    rng = random.Random(90_004)
    trials = 0
    while trials < 500:
        va = random_vas(rng, 1, rng.randint(0, 2))
        vb = random_vas(rng, 1, rng.randint(0, 2))
        sa, sb = full_section(va), full_section(vb)
        ea, eb, keep = normalize_pair(sa, sb)
        mode = rng.choice(["modular", "unary"])
        n = rng.choice([1, 2, 3])
        verdict, evidence = positive_stage(ea, eb, keep, n, mode, FAST)
        pair = brute.pair_search_sections(sa, sb, n, mode, 6 * n)
        if verdict == "disjoint":
            assert pair is None  # a found pair would contradict the proofs
        elif verdict == "overlap":
            # the product run projects to genuinely equivalent members
            canon = (brute.canon_modular if mode == "modular"
                     else brute.canon_unary)
            run = evidence["run"]
            inst = evidence["instance"]
            from vasep.reach import modpair_instance, unarypair_instances
            if mode == "modular":
                rebuilt = modpair_instance(ea, eb, keep, n)
            else:
                rebuilt = next(i for i in
                               unarypair_instances(ea, eb, keep, n)
                               if i.tag == inst)
            ru = extract_side(rebuilt, run, "a", ea)
            rv = extract_side(rebuilt, run, "b", eb)
            pu = tuple(ru.target[j] for j in keep)
            pv = tuple(rv.target[j] for j in keep)
            assert canon(pu, n) == canon(pv, n)
        trials += 1
    assert trials == 500


def _direct_state_reach(vass, cap=4000):
    q0, v0 = vass.source
    seen = {(q0, v0)}
    states = {q0}
    dq = deque(seen)
    complete = True
    while dq:
        q, v = dq.popleft()
        for s, t, r in vass.transitions:
            if s != q:
                continue
            nxt = tuple(x + y for x, y in zip(v, t))
            if any(x < 0 for x in nxt):
                continue
            if (r, nxt) in seen:
                continue
            if len(seen) >= cap:
                complete = False
                continue
            seen.add((r, nxt))
            states.add(r)
            dq.append((r, nxt))
    return states, complete


@criterion(10)
def test_criterion_10_hardness_gadget():
    budgets = Budgets(states=8_000, max_n=3, max_run_len=10,
                      max_witness_pairs=80, pos_quantum=3_000,
                      max_runs=150, run_nodes=30_000)

    reach = Vass(1, ("p", "q"), ("p", (0,)),
                 [("p", (1,), "p"), ("p", (0,), "q"), ("q", (-1,), "q")])
    sa, sb = hardness_instance(reach, "q")
    assert decide_separability(sa, sb, "modular", budgets).verdict == \
        "not_separable"

    unreach = Vass(1, ("p", "q"), ("p", (0,)), [("p", (1,), "p")])
    ua, ub = hardness_instance(unreach, "q")
    assert decide_separability(ua, ub, "modular", budgets).verdict == \
        "separable"

    rng = random.Random(100_005)
    states = ("s0", "s1")
    conclusive = 0
    for _ in range(50):
        trans = []
        for _ in range(rng.randint(1, 3)):
            trans.append((rng.choice(states),
                          (rng.randint(-1, 1),),
                          rng.choice(states)))
        vass = Vass(1, states, ("s0", (rng.randint(0, 1),)), trans)
        reached, complete = _direct_state_reach(vass)
        if "s1" in reached:
            truth = "reachable"
        elif complete:
            truth = "unreachable"
        else:
            continue
        ha, hb = hardness_instance(vass, "s1")
        cert = decide_separability(ha, hb, "modular", budgets)
        if cert.verdict == "unknown":
            continue
        if truth == "reachable":
            assert cert.verdict == "not_separable"
        else:
            assert cert.verdict == "separable"
        conclusive += 1
    assert conclusive >= 15
