"""Commutative regular separability of VAS languages via letter counters.

A labeled VAS accepts words by reaching its target vector exactly, or by
covering it. Appending one counter per letter turns the Parikh image of the
language into a section of a larger VAS: unary separability of the two
Parikh sections is equivalent to separability of the commutative closures
by a commutative regular language, and the unary separator doubles as a
description of that regular separator (the inverse Parikh image of its
classes).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .intlin import Vec, as_vec
from .linsets import UnarySet
from .separability import Budgets, Certificate, decide_separability, verify_certificate
from .vas import SectionSpec, SectionedVas, Vas, Vass, vass_to_vas

COVER = "cover"
EXACT = "exact"


@dataclass(frozen=True)
class LabeledVas:
    """A VAS with letter labels on transitions and an acceptance condition.

    labels[i] is the letter produced by transitions[i], or None for a
    silent transition. A word is accepted when some run producing it ends
    in a configuration equal to (exact) or dominating (cover) the target.
    """

    vas: Vas
    labels: tuple[str | None, ...]
    accept_kind: str
    accept_target: Vec

    def __init__(self, vas: Vas, labels: Sequence[str | None],
                 accept_kind: str, accept_target: Sequence[int]):
        labels = tuple(labels)
        if len(labels) != len(vas.transitions):
            raise ValueError("one label (or None) per transition required")
        for lab in labels:
            if lab is not None and (not isinstance(lab, str) or not lab):
                raise ValueError(f"bad letter {lab!r}")
        if accept_kind not in (COVER, EXACT):
            raise ValueError(f"unknown acceptance kind {accept_kind!r}")
        target = as_vec(accept_target)
        if len(target) != vas.dim:
            raise DimensionMismatch(
                f"acceptance target has dimension {len(target)}, expected {vas.dim}")
        if any(x < 0 for x in target):
            raise ValueError("acceptance target must be nonnegative")
        object.__setattr__(self, "vas", vas)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "accept_kind", accept_kind)
        object.__setattr__(self, "accept_target", target)

    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted({lab for lab in self.labels if lab is not None}))


def merged_alphabet(*lvs: LabeledVas) -> tuple[str, ...]:
    letters: set[str] = set()
    for lv in lvs:
        letters.update(lv.alphabet())
    return tuple(sorted(letters))


def parikh_section(lv: LabeledVas,
                   alphabet: Iterable[str] | None = None) -> SectionedVas:
    """Section whose members are the Parikh images of accepted words.

    One counter per alphabet letter is appended; counters only grow, one
    unit per produced letter. Exact acceptance pins the original
    coordinates to the target. Cover acceptance goes through a two-state
    control: a closing move subtracts the target (so it must be dominated),
    after which original coordinates drain freely to zero.
    """
    sigma = tuple(alphabet) if alphabet is not None else lv.alphabet()
    if len(set(sigma)) != len(sigma):
        raise ValueError("alphabet has repeated letters")
    missing = set(lv.alphabet()) - set(sigma)
    if missing:
        raise ValueError(f"labels outside alphabet: {sorted(missing)}")
    d = lv.vas.dim
    pos = {a: d + i for i, a in enumerate(sigma)}
    dim = d + len(sigma)

    def widen(delta: Vec, lab: str | None) -> Vec:
        out = list(delta) + [0] * len(sigma)
        if lab is not None:
            out[pos[lab]] += 1
        return tuple(out)

    counters = tuple(range(d, dim))
    deltas = [widen(t, lab) for t, lab in zip(lv.vas.transitions, lv.labels)]
    source = tuple(lv.vas.source) + (0,) * len(sigma)

    if lv.accept_kind == EXACT:
        vas = Vas(dim, source, deltas)
        fixed = [(i, lv.accept_target[i]) for i in range(d)]
        return SectionedVas(vas, SectionSpec(dim, counters, fixed))

    close = tuple(-x for x in lv.accept_target) + (0,) * len(sigma)
    drains = []
    for i in range(d):
        unit = [0] * dim
        unit[i] = -1
        drains.append(tuple(unit))
    vass = Vass(
        dim, ("run", "fin"), ("run", source),
        [("run", delta, "run") for delta in deltas]
        + [("run", close, "fin")]
        + [("fin", drain, "fin") for drain in drains],
    )
    return vass_to_vas(vass, "fin", keep=counters,
                       fixed=[(i, 0) for i in range(d)])


@dataclass(frozen=True)
class CommutativeCertificate:
    """A separability certificate plus its reading as a regular separator.

    When separable, the language separator is the commutative regular
    language of all words whose letter counts fall in one of the unary
    classes, over the recorded alphabet ordering.
    """

    certificate: Certificate
    alphabet: tuple[str, ...]
    language_separator: UnarySet | None


def commutative_regular_separability(
        lv: LabeledVas, lw: LabeledVas, budgets: Budgets = Budgets(),
) -> CommutativeCertificate:
    """Decide whether a commutative regular language separates the
    commutative closures of the two accepted languages."""
    sigma = merged_alphabet(lv, lw)
    a = parikh_section(lv, sigma)
    b = parikh_section(lw, sigma)
    cert = decide_separability(a, b, "unary", budgets)
    sep = cert.separator if cert.verdict == "separable" else None
    if sep is not None and not isinstance(sep, UnarySet):
        sep = None
    return CommutativeCertificate(cert, sigma, sep)


def regular_sep_commutative_closures(
        lv: LabeledVas, lw: LabeledVas, budgets: Budgets = Budgets(),
) -> CommutativeCertificate:
    """Regular separability of the commutative closures themselves.

    A commutative closure is separable from another by a regular language
    exactly when a commutative regular one works, so this is the same
    decision and reduction.
    """
    return commutative_regular_separability(lv, lw, budgets)


def verify_commutative(lv: LabeledVas, lw: LabeledVas,
                       ccert: CommutativeCertificate,
                       budgets: Budgets = Budgets()) -> bool:
    """Re-check the wrapped certificate against rebuilt Parikh sections."""
    sigma = merged_alphabet(lv, lw)
    if tuple(ccert.alphabet) != sigma:
        return False
    cert = ccert.certificate
    if cert.mode != "unary":
        return False
    if cert.verdict == "separable":
        if ccert.language_separator != cert.separator:
            return False
    elif ccert.language_separator is not None:
        return False
    a = parikh_section(lv, sigma)
    b = parikh_section(lw, sigma)
    return verify_certificate(a, b, cert, budgets)
