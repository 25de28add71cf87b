"""Command line front end.

Exit codes for `sep`: 0 separable, 1 not separable, 2 undecided in budget.
`verify`: 0 valid certificate, 1 invalid. `reach`: 0 reachable, 1 proved
unreachable, 2 undecided. Argument and input errors exit with 3 or higher,
never 0, 1, or 2.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import brute, jsonio
from .commutative import (
    commutative_regular_separability,
    parikh_section,
    merged_alphabet,
    verify_commutative,
)
from .errors import BudgetExceeded, InvalidRun, SchemaError
from .reach import Block, ReachInstance, Found, ProvedEmpty, decide
from .separability import Budgets, decide_separability, verify_certificate
from .vas import hardness_instance, normalize_pair, normalize_single


class _Parser(argparse.ArgumentParser):
    # exit 3 on bad usage so 0/1/2 keep their verdict meaning
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    b = Budgets()
    p.add_argument("--budget-states", type=int, default=b.states,
                   metavar="N", help="forward search state budget")
    p.add_argument("--max-run-len", type=int, default=b.max_run_len,
                   metavar="N", help="longest runs used in witnesses")
    p.add_argument("--max-n", type=int, default=b.max_n, metavar="N",
                   help="last modulus or threshold tried")
    p.add_argument("--max-witness-pairs", type=int,
                   default=b.max_witness_pairs, metavar="N",
                   help="total witness pair tests")
    p.add_argument("--workers", type=int, default=b.workers, metavar="N",
                   help="2 runs both procedures concurrently")
    p.add_argument("--seed", type=int, default=None, metavar="S",
                   help="shuffle witness pair order deterministically")


def _budgets(args: argparse.Namespace) -> Budgets:
    return Budgets(states=args.budget_states, max_n=args.max_n,
                   max_run_len=args.max_run_len,
                   max_witness_pairs=args.max_witness_pairs,
                   workers=args.workers, seed=args.seed)


def cmd_sep(args: argparse.Namespace) -> int:
    problem = jsonio.parse_problem(jsonio.read_json(args.problem))
    budgets = _budgets(args)
    if problem["kind"] == "sections":
        mode = args.mode or problem["mode"]
        cert = decide_separability(problem["a"], problem["b"], mode, budgets)
        sys.stdout.write(jsonio.dumps(jsonio.emit_certificate(cert)))
    else:
        if args.mode not in (None, "unary"):
            raise SchemaError("language problems are decided in unary mode",
                              "--mode")
        ccert = commutative_regular_separability(problem["a"], problem["b"],
                                                 budgets)
        sys.stdout.write(jsonio.dumps(
            jsonio.emit_commutative_certificate(ccert)))
        cert = ccert.certificate
    return {"separable": 0, "not_separable": 1, "unknown": 2}[cert.verdict]


def cmd_verify(args: argparse.Namespace) -> int:
    problem = jsonio.parse_problem(jsonio.read_json(args.problem))
    data = jsonio.read_json(args.certificate)
    if problem["kind"] == "sections":
        expa, expb, _ = normalize_pair(problem["a"], problem["b"])
        try:
            cert = jsonio.parse_certificate(data, expa, expb)
        except InvalidRun:
            ok = False
        else:
            ok = verify_certificate(problem["a"], problem["b"], cert)
    else:
        lv, lw = problem["a"], problem["b"]
        sigma = merged_alphabet(lv, lw)
        sa, sb = parikh_section(lv, sigma), parikh_section(lw, sigma)
        expa, expb, _ = normalize_pair(sa, sb)
        try:
            ccert = jsonio.parse_commutative_certificate(data, expa, expb)
        except InvalidRun:
            ok = False
        else:
            ok = verify_commutative(lv, lw, ccert)
    if args.json:
        sys.stdout.write(jsonio.dumps({"valid": ok}))
    else:
        print("valid" if ok else "invalid")
    return 0 if ok else 1


def cmd_reach(args: argparse.Namespace) -> int:
    data = jsonio.read_json(args.instance)
    obj = jsonio._obj(data, "$", ("vas", "targets"))
    vas = jsonio.parse_vas(obj["vas"], "$.vas")
    targets = [jsonio._vec(t, f"$.targets[{i}]", vas.dim)
               for i, t in enumerate(jsonio._list(obj["targets"], "$.targets"))]
    instance = ReachInstance(
        vas, targets, [Block(0, vas.dim, range(len(vas.transitions)))])
    out = decide(instance, max_states=args.budget_states)
    if isinstance(out, Found):
        report = {"outcome": "reachable", "target": list(out.target),
                  "run": list(out.run.labels())}
        code = 0
    elif isinstance(out, ProvedEmpty):
        report = {"outcome": "unreachable", "proofs": [dict(p) for p in out.proofs]}
        code = 1
    else:
        report = {"outcome": "unknown", "stats": jsonio._check_jsonable(
            out.stats, "$.stats")}
        code = 2
    if args.json:
        sys.stdout.write(jsonio.dumps(report))
    else:
        print(report["outcome"])
    return code


def cmd_normalize(args: argparse.Namespace) -> int:
    data = jsonio.read_json(args.file)
    if isinstance(data, dict) and "a" in data:
        problem = jsonio.parse_problem(data)
        if problem["kind"] != "sections":
            raise SchemaError("only section problems can be normalized", "$")
        expa, expb, keep = normalize_pair(problem["a"], problem["b"])
        out = {"a": jsonio.emit_vas(expa), "b": jsonio.emit_vas(expb),
               "keep": list(keep)}
    else:
        svas = jsonio.parse_sectioned(data)
        exp, k = normalize_single(svas)
        out = {"vas": jsonio.emit_vas(exp), "keep": list(range(k))}
    sys.stdout.write(jsonio.dumps(out))
    return 0


def cmd_gen_hardness(args: argparse.Namespace) -> int:
    vass = jsonio.parse_vass(jsonio.read_json(args.vass))
    a, b = hardness_instance(vass, args.state)
    sys.stdout.write(jsonio.dumps(
        jsonio.emit_problem("sections", a, b, args.mode)))
    return 0


def cmd_brute(args: argparse.Namespace) -> int:
    data = jsonio.read_json(args.file)
    if args.what == "members":
        if isinstance(data, dict) and "base" in data:
            ls = jsonio.parse_linear(data)
            members = brute.linear_members(ls, args.bound, args.cap)
        else:
            svas = jsonio.parse_sectioned(data)
            members = brute.section_members(svas, args.bound, args.cap)
        sys.stdout.write(jsonio.dumps(
            {"bound": args.bound, "members": [list(v) for v in sorted(members)]}))
        return 0
    if args.what == "pairs":
        if args.n is None:
            raise SchemaError("pair search requires --n", "--n")
        obj = jsonio._obj(data, "$", ("a", "b"), ("kind", "mode"))
        if isinstance(obj["a"], dict) and "base" in obj["a"]:
            la = jsonio.parse_linear(obj["a"], "$.a")
            lb = jsonio.parse_linear(obj["b"], "$.b")
            pair = brute.pair_search_linear(la, lb, args.n, args.mode,
                                            args.bound, args.cap)
        else:
            problem = jsonio.parse_problem(data)
            if problem["kind"] != "sections":
                raise SchemaError("pair search needs sections or linear sets",
                                  "$")
            pair = brute.pair_search_sections(problem["a"], problem["b"],
                                              args.n, args.mode, args.bound,
                                              args.cap)
        if pair is None:
            sys.stdout.write(jsonio.dumps({"found": False}))
            return 1
        sys.stdout.write(jsonio.dumps(
            {"found": True, "u": list(pair[0]), "v": list(pair[1])}))
        return 0
    obj = jsonio._obj(data, "$", ("target", "periods"))
    target = jsonio._vec(obj["target"], "$.target")
    periods = [jsonio._vec(p, f"$.periods[{i}]", len(target))
               for i, p in enumerate(jsonio._list(obj["periods"], "$.periods"))]
    sols = brute.nonneg_solutions(target, periods, args.coeff_bound)
    sys.stdout.write(jsonio.dumps(
        {"solutions": [list(s) for s in sols]}))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="vasep",
                     description="separability of VAS reachability sections")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p_sep = sub.add_parser("sep", help="decide separability of a problem")
    p_sep.add_argument("problem", help="problem JSON file")
    p_sep.add_argument("--mode", choices=("modular", "unary"), default=None,
                       help="override the problem's mode")
    _add_budget_flags(p_sep)
    p_sep.set_defaults(func=cmd_sep)

    p_ver = sub.add_parser("verify", help="check a certificate")
    p_ver.add_argument("problem", help="problem JSON file")
    p_ver.add_argument("certificate", help="certificate JSON file")
    p_ver.add_argument("--json", action="store_true",
                       help="emit a JSON report")
    p_ver.set_defaults(func=cmd_verify)

    p_reach = sub.add_parser("reach", help="decide a reachability instance")
    p_reach.add_argument("instance", help="instance JSON file")
    p_reach.add_argument("--budget-states", type=int,
                         default=Budgets().states, metavar="N",
                         help="forward search state budget")
    p_reach.add_argument("--json", action="store_true",
                         help="emit a JSON report")
    p_reach.set_defaults(func=cmd_reach)

    p_norm = sub.add_parser("normalize",
                            help="compile sections to guarded expansions")
    p_norm.add_argument("file", help="sectioned VAS or problem JSON file")
    p_norm.set_defaults(func=cmd_normalize)

    p_hard = sub.add_parser("gen-hardness",
                            help="emit the reachability reduction problem")
    p_hard.add_argument("vass", help="VASS JSON file")
    p_hard.add_argument("--state", required=True,
                        help="control state whose reachability is encoded")
    p_hard.add_argument("--mode", choices=("modular", "unary"),
                        default="modular")
    p_hard.set_defaults(func=cmd_gen_hardness)

    p_brute = sub.add_parser("brute", help="exhaustive reference searches")
    p_brute.add_argument("what", choices=("members", "pairs", "nonneg"))
    p_brute.add_argument("file", help="input JSON file")
    p_brute.add_argument("--bound", type=int, default=12, metavar="B",
                         help="value box for member enumeration")
    p_brute.add_argument("--n", type=int, default=None,
                         help="modulus or threshold for pair search")
    p_brute.add_argument("--mode", choices=("modular", "unary"),
                         default="modular")
    p_brute.add_argument("--cap", type=int, default=1_000_000,
                         help="enumeration size cap")
    p_brute.add_argument("--coeff-bound", type=int, default=None,
                         metavar="C", help="clip coefficients in nonneg search")
    p_brute.set_defaults(func=cmd_brute)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
