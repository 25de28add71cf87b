"""Wire formats: strict JSON readers and writers for every artifact.

Readers validate shape and types by hand and reject unknown fields, bools
posing as ints, and ragged dimensions, reporting a JSON-path in every
error. Writers emit deterministic documents: set-like collections are
sorted, runs are stored as transition-index sequences and re-fired on load.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Sequence

from .commutative import CommutativeCertificate, LabeledVas
from .errors import SchemaError
from .intlin import Vec
from .linsets import LARGE, SMALL, LinearSet, ModularSet, UnarySet
from .separability import Certificate, Witness
from .vas import Run, SectionSpec, SectionedVas, Vas, Vass, validate_run

FORMAT_VERSION = "1"


def _obj(data: Any, path: str, required: Sequence[str],
         optional: Sequence[str] = ()) -> dict:
    if not isinstance(data, dict):
        raise SchemaError("expected an object", path)
    for key in required:
        if key not in data:
            raise SchemaError(f"missing field {key!r}", path)
    allowed = set(required) | set(optional)
    for key in data:
        if key not in allowed:
            raise SchemaError(f"unknown field {key!r}", path)
    return data


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError("expected an integer", path)
    return x


def _nat(x: Any, path: str) -> int:
    v = _int(x, path)
    if v < 0:
        raise SchemaError("expected a nonnegative integer", path)
    return v


def _str(x: Any, path: str) -> str:
    if not isinstance(x, str):
        raise SchemaError("expected a string", path)
    return x


def _list(x: Any, path: str) -> list:
    if not isinstance(x, list):
        raise SchemaError("expected an array", path)
    return x


def _vec(x: Any, path: str, dim: int | None = None) -> Vec:
    items = _list(x, path)
    if dim is not None and len(items) != dim:
        raise SchemaError(f"expected {dim} entries, got {len(items)}", path)
    return tuple(_int(v, f"{path}[{i}]") for i, v in enumerate(items))


def _labels(x: Any, path: str) -> tuple[int, ...]:
    items = _list(x, path)
    return tuple(_nat(v, f"{path}[{i}]") for i, v in enumerate(items))


# -- core systems -----------------------------------------------------------

def parse_vas(data: Any, path: str = "$") -> Vas:
    obj = _obj(data, path, ("dim", "source", "transitions"))
    dim = _nat(obj["dim"], f"{path}.dim")
    source = _vec(obj["source"], f"{path}.source", dim)
    trans = [_vec(t, f"{path}.transitions[{i}]", dim)
             for i, t in enumerate(_list(obj["transitions"], f"{path}.transitions"))]
    try:
        return Vas(dim, source, trans)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def emit_vas(vas: Vas) -> dict:
    return {"dim": vas.dim, "source": list(vas.source),
            "transitions": [list(t) for t in vas.transitions]}


def parse_vass(data: Any, path: str = "$") -> Vass:
    obj = _obj(data, path, ("dim", "states", "source", "transitions"))
    dim = _nat(obj["dim"], f"{path}.dim")
    states = [_str(q, f"{path}.states[{i}]")
              for i, q in enumerate(_list(obj["states"], f"{path}.states"))]
    src = _obj(obj["source"], f"{path}.source", ("state", "values"))
    source = (_str(src["state"], f"{path}.source.state"),
              _vec(src["values"], f"{path}.source.values", dim))
    trans = []
    for i, t in enumerate(_list(obj["transitions"], f"{path}.transitions")):
        tp = f"{path}.transitions[{i}]"
        items = _list(t, tp)
        if len(items) != 3:
            raise SchemaError("expected [from, delta, to]", tp)
        trans.append((_str(items[0], f"{tp}[0]"), _vec(items[1], f"{tp}[1]", dim),
                      _str(items[2], f"{tp}[2]")))
    try:
        return Vass(dim, states, source, trans)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def emit_vass(vass: Vass) -> dict:
    q0, v0 = vass.source
    return {"dim": vass.dim, "states": list(vass.states),
            "source": {"state": q0, "values": list(v0)},
            "transitions": [[q, list(d), r] for q, d, r in vass.transitions]}


def parse_section(data: Any, dim: int, path: str = "$") -> SectionSpec:
    obj = _obj(data, path, ("keep", "fixed"))
    keep = [_nat(j, f"{path}.keep[{i}]")
            for i, j in enumerate(_list(obj["keep"], f"{path}.keep"))]
    fixed_obj = obj["fixed"]
    if not isinstance(fixed_obj, dict):
        raise SchemaError("expected an object", f"{path}.fixed")
    fixed = []
    for key, val in fixed_obj.items():
        kp = f"{path}.fixed[{key!r}]"
        if not isinstance(key, str) or not key.lstrip("-").isdigit():
            raise SchemaError("coordinate keys must be integer strings", kp)
        fixed.append((int(key), _nat(val, kp)))
    try:
        return SectionSpec(dim, keep, fixed)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def emit_section(sec: SectionSpec) -> dict:
    return {"keep": list(sec.keep),
            "fixed": {str(j): u for j, u in sorted(sec.fixed)}}


def parse_sectioned(data: Any, path: str = "$") -> SectionedVas:
    obj = _obj(data, path, ("vas", "section"))
    vas = parse_vas(obj["vas"], f"{path}.vas")
    sec = parse_section(obj["section"], vas.dim, f"{path}.section")
    return SectionedVas(vas, sec)


def emit_sectioned(svas: SectionedVas) -> dict:
    return {"vas": emit_vas(svas.vas), "section": emit_section(svas.section)}


# -- labeled systems --------------------------------------------------------

def parse_labeled(data: Any, path: str = "$") -> LabeledVas:
    obj = _obj(data, path, ("dim", "source", "transitions", "labels",
                            "acceptance"))
    vas = parse_vas({"dim": obj["dim"], "source": obj["source"],
                     "transitions": obj["transitions"]}, path)
    raw = _list(obj["labels"], f"{path}.labels")
    labels = []
    for i, lab in enumerate(raw):
        if lab is None:
            labels.append(None)
        else:
            labels.append(_str(lab, f"{path}.labels[{i}]"))
    acc = _obj(obj["acceptance"], f"{path}.acceptance", ("kind", "target"))
    kind = _str(acc["kind"], f"{path}.acceptance.kind")
    if kind not in ("cover", "exact"):
        raise SchemaError("kind must be 'cover' or 'exact'",
                          f"{path}.acceptance.kind")
    target = _vec(acc["target"], f"{path}.acceptance.target", vas.dim)
    try:
        return LabeledVas(vas, labels, kind, target)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def emit_labeled(lv: LabeledVas) -> dict:
    out = emit_vas(lv.vas)
    out["labels"] = list(lv.labels)
    out["acceptance"] = {"kind": lv.accept_kind,
                         "target": list(lv.accept_target)}
    return out


# -- set families -----------------------------------------------------------

def parse_linear(data: Any, path: str = "$") -> LinearSet:
    obj = _obj(data, path, ("base", "periods"))
    base = _vec(obj["base"], f"{path}.base")
    periods = [_vec(p, f"{path}.periods[{i}]", len(base))
               for i, p in enumerate(_list(obj["periods"], f"{path}.periods"))]
    try:
        return LinearSet(base, periods)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def emit_linear(ls: LinearSet) -> dict:
    return {"base": list(ls.base), "periods": [list(p) for p in ls.periods]}


def parse_modular(data: Any, path: str = "$") -> ModularSet:
    obj = _obj(data, path, ("n", "residues"), optional=("dim",))
    n = _int(obj["n"], f"{path}.n")
    rows = _list(obj["residues"], f"{path}.residues")
    if "dim" in obj:
        dim = _nat(obj["dim"], f"{path}.dim")
    elif rows:
        dim = len(_list(rows[0], f"{path}.residues[0]"))
    else:
        raise SchemaError("dim required when residues are empty", path)
    residues = [_vec(r, f"{path}.residues[{i}]", dim)
                for i, r in enumerate(rows)]
    try:
        return ModularSet(n, dim, residues)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def emit_modular(ms: ModularSet) -> dict:
    return {"n": ms.n, "dim": ms.dim,
            "residues": [list(r) for r in sorted(ms.residues)]}


def parse_unary(data: Any, path: str = "$") -> UnarySet:
    obj = _obj(data, path, ("n", "classes"), optional=("dim",))
    n = _int(obj["n"], f"{path}.n")
    rows = _list(obj["classes"], f"{path}.classes")
    if "dim" in obj:
        dim = _nat(obj["dim"], f"{path}.dim")
    elif rows:
        dim = len(_list(rows[0], f"{path}.classes[0]"))
    else:
        raise SchemaError("dim required when classes are empty", path)
    classes = []
    for i, row in enumerate(rows):
        rp = f"{path}.classes[{i}]"
        items = _list(row, rp)
        if len(items) != dim:
            raise SchemaError(f"expected {dim} descriptors", rp)
        cls = []
        for j, desc in enumerate(items):
            dp = f"{rp}[{j}]"
            if not isinstance(desc, dict) or len(desc) != 1:
                raise SchemaError("expected {'small': v} or {'large': r}", dp)
            (kind, val), = desc.items()
            if kind not in (SMALL, LARGE):
                raise SchemaError(f"unknown descriptor kind {kind!r}", dp)
            cls.append((kind, _nat(val, dp)))
        classes.append(tuple(cls))
    try:
        return UnarySet(n, dim, classes)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def emit_unary(us: UnarySet) -> dict:
    return {"n": us.n, "dim": us.dim,
            "classes": [[{kind: val} for kind, val in cls]
                        for cls in sorted(us.classes)]}


# -- problems ---------------------------------------------------------------

def parse_problem(data: Any, path: str = "$") -> dict:
    """A separability problem: two sections plus mode, or two languages."""
    obj = _obj(data, path, ("a", "b"), optional=("kind", "mode"))
    kind = obj.get("kind", "sections")
    if kind not in ("sections", "languages"):
        raise SchemaError("kind must be 'sections' or 'languages'",
                          f"{path}.kind")
    if kind == "sections":
        mode = obj.get("mode", "modular")
        if mode not in ("modular", "unary"):
            raise SchemaError("mode must be 'modular' or 'unary'",
                              f"{path}.mode")
        return {"kind": kind, "mode": mode,
                "a": parse_sectioned(obj["a"], f"{path}.a"),
                "b": parse_sectioned(obj["b"], f"{path}.b")}
    if "mode" in obj and obj["mode"] != "unary":
        raise SchemaError("language problems are decided in unary mode",
                          f"{path}.mode")
    return {"kind": kind, "mode": "unary",
            "a": parse_labeled(obj["a"], f"{path}.a"),
            "b": parse_labeled(obj["b"], f"{path}.b")}


def emit_problem(kind: str, a, b, mode: str = "modular") -> dict:
    if kind == "sections":
        return {"kind": kind, "mode": mode,
                "a": emit_sectioned(a), "b": emit_sectioned(b)}
    return {"kind": kind, "a": emit_labeled(a), "b": emit_labeled(b)}


# -- certificates -----------------------------------------------------------

_PROOF_KEYS = ("prover", "block", "modulus", "coord", "direction", "states",
               "target", "instance")


def _parse_proof(data: Any, path: str) -> dict:
    if not isinstance(data, dict):
        raise SchemaError("expected a proof object", path)
    if "prover" not in data:
        raise SchemaError("missing field 'prover'", path)
    out = {}
    for key, val in data.items():
        kp = f"{path}.{key}"
        if key not in _PROOF_KEYS:
            raise SchemaError(f"unknown proof field {key!r}", path)
        if key == "target":
            out[key] = list(_vec(val, kp))
        elif key in ("prover", "direction", "instance"):
            out[key] = _str(val, kp)
        else:
            out[key] = _int(val, kp)
    return out


def _check_jsonable(data: Any, path: str) -> Any:
    if data is None or isinstance(data, (bool, int, str)):
        return data
    if isinstance(data, list):
        return [_check_jsonable(v, f"{path}[{i}]") for i, v in enumerate(data)]
    if isinstance(data, dict):
        out = {}
        for key, val in data.items():
            if not isinstance(key, str):
                raise SchemaError("object keys must be strings", path)
            out[key] = _check_jsonable(val, f"{path}.{key}")
        return out
    raise SchemaError("unsupported value", path)


def _parse_witness(data: Any, exp: Vas, path: str) -> Witness:
    obj = _obj(data, path, ("base_run", "pump_runs"))
    base = validate_run(exp, _labels(obj["base_run"], f"{path}.base_run"))
    pumps = []
    for i, labels in enumerate(_list(obj["pump_runs"], f"{path}.pump_runs")):
        pumps.append(validate_run(
            exp, _labels(labels, f"{path}.pump_runs[{i}]")))
    return Witness(base, tuple(pumps))


def emit_witness(w: Witness) -> dict:
    return {"base_run": list(w.base.labels()),
            "pump_runs": [list(p.labels()) for p in w.pumps]}


_CERT_REQUIRED = ("verdict", "mode")
_CERT_OPTIONAL = ("version", "n", "separator", "witness_u", "witness_v",
                  "coeffs", "coeff_vectors", "linked", "path", "trace",
                  "proofs", "member_bound", "budget")


def parse_certificate(data: Any, expa: Vas, expb: Vas,
                      path: str = "$") -> Certificate:
    """Rebuild a certificate against the pair's normalized expansions.

    Runs are re-fired from the labels; an unfireable run raises InvalidRun,
    which callers should treat as a failed verification, not a schema error.
    """
    obj = _obj(data, path, _CERT_REQUIRED, _CERT_OPTIONAL)
    verdict = _str(obj["verdict"], f"{path}.verdict")
    if verdict not in ("separable", "not_separable", "unknown"):
        raise SchemaError(f"unknown verdict {verdict!r}", f"{path}.verdict")
    mode = _str(obj["mode"], f"{path}.mode")
    if mode not in ("modular", "unary"):
        raise SchemaError(f"unknown mode {mode!r}", f"{path}.mode")
    n = None
    if obj.get("n") is not None:
        n = _int(obj["n"], f"{path}.n")
    separator = None
    if obj.get("separator") is not None:
        sp = f"{path}.separator"
        separator = (parse_modular(obj["separator"], sp) if mode == "modular"
                     else parse_unary(obj["separator"], sp))
    witness_u = witness_v = None
    if obj.get("witness_u") is not None:
        witness_u = _parse_witness(obj["witness_u"], expa, f"{path}.witness_u")
    if obj.get("witness_v") is not None:
        witness_v = _parse_witness(obj["witness_v"], expb, f"{path}.witness_v")
    coeffs = None
    if obj.get("coeffs") is not None:
        coeffs = _vec(obj["coeffs"], f"{path}.coeffs")
    coeff_vectors = None
    if obj.get("coeff_vectors") is not None:
        coeff_vectors = tuple(
            _vec(v, f"{path}.coeff_vectors[{i}]")
            for i, v in enumerate(_list(obj["coeff_vectors"],
                                        f"{path}.coeff_vectors")))
    linked = None
    if obj.get("linked") is not None:
        linked = tuple(_nat(j, f"{path}.linked[{i}]")
                       for i, j in enumerate(_list(obj["linked"],
                                                   f"{path}.linked")))
    route = None
    if obj.get("path") is not None:
        route = _str(obj["path"], f"{path}.path")
    trace = []
    for i, step in enumerate(_list(obj.get("trace", []), f"{path}.trace")):
        spath = f"{path}.trace[{i}]"
        items = _list(step, spath)
        if len(items) != 4:
            raise SchemaError("expected [side, coord, value, index]", spath)
        side = _str(items[0], f"{spath}[0]")
        if side not in ("left", "right"):
            raise SchemaError("side must be 'left' or 'right'", f"{spath}[0]")
        trace.append((side, _nat(items[1], f"{spath}[1]"),
                      _nat(items[2], f"{spath}[2]"),
                      _nat(items[3], f"{spath}[3]")))
    proofs = None
    if obj.get("proofs") is not None:
        proofs = tuple(_parse_proof(p, f"{path}.proofs[{i}]")
                       for i, p in enumerate(_list(obj["proofs"],
                                                   f"{path}.proofs")))
    member_bound = None
    if obj.get("member_bound") is not None:
        member_bound = _nat(obj["member_bound"], f"{path}.member_bound")
    budget = None
    if obj.get("budget") is not None:
        budget = _check_jsonable(obj["budget"], f"{path}.budget")
        if not isinstance(budget, dict):
            raise SchemaError("expected an object", f"{path}.budget")
    version = _str(obj.get("version", FORMAT_VERSION), f"{path}.version")
    return Certificate(
        verdict=verdict, mode=mode, n=n, separator=separator,
        witness_u=witness_u, witness_v=witness_v, coeffs=coeffs,
        coeff_vectors=coeff_vectors, linked=linked, path=route,
        trace=tuple(trace), proofs=proofs, member_bound=member_bound,
        budget=budget, version=version)


def emit_certificate(cert: Certificate) -> dict:
    out: dict[str, Any] = {"version": cert.version, "verdict": cert.verdict,
                           "mode": cert.mode}
    if cert.n is not None:
        out["n"] = cert.n
    if cert.separator is not None:
        out["separator"] = (emit_modular(cert.separator)
                            if isinstance(cert.separator, ModularSet)
                            else emit_unary(cert.separator))
    if cert.witness_u is not None:
        out["witness_u"] = emit_witness(cert.witness_u)
    if cert.witness_v is not None:
        out["witness_v"] = emit_witness(cert.witness_v)
    if cert.coeffs is not None:
        out["coeffs"] = list(cert.coeffs)
    if cert.coeff_vectors is not None:
        out["coeff_vectors"] = [list(v) for v in cert.coeff_vectors]
    if cert.linked is not None:
        out["linked"] = list(cert.linked)
    if cert.path is not None:
        out["path"] = cert.path
    if cert.trace:
        out["trace"] = [list(step) for step in cert.trace]
    if cert.proofs is not None:
        out["proofs"] = [dict(p) for p in cert.proofs]
    if cert.member_bound is not None:
        out["member_bound"] = cert.member_bound
    if cert.budget is not None:
        out["budget"] = cert.budget
    return out


def parse_commutative_certificate(data: Any, expa: Vas, expb: Vas,
                                  path: str = "$") -> CommutativeCertificate:
    obj = _obj(data, path, _CERT_REQUIRED + ("alphabet",),
               _CERT_OPTIONAL + ("language_separator",))
    alphabet = tuple(
        _str(a, f"{path}.alphabet[{i}]")
        for i, a in enumerate(_list(obj["alphabet"], f"{path}.alphabet")))
    lang = None
    if obj.get("language_separator") is not None:
        lang = parse_unary(obj["language_separator"],
                           f"{path}.language_separator")
    inner = {k: v for k, v in obj.items()
             if k not in ("alphabet", "language_separator")}
    cert = parse_certificate(inner, expa, expb, path)
    return CommutativeCertificate(cert, alphabet, lang)


def emit_commutative_certificate(ccert: CommutativeCertificate) -> dict:
    out = emit_certificate(ccert.certificate)
    out["alphabet"] = list(ccert.alphabet)
    if ccert.language_separator is not None:
        out["language_separator"] = emit_unary(ccert.language_separator)
    return out


# -- file helpers -----------------------------------------------------------

def read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", path) from exc


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"
