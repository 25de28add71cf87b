"""Separability of VAS reachability sections, with checkable certificates."""

from .errors import BudgetExceeded, DimensionMismatch, InvalidRun, SchemaError
from .intlin import (
    LatticeBasis,
    Vec,
    hnf,
    lattice_member,
    mod_lattice_member,
    nonneg_member,
    residue_subgroup,
)
from .linsets import (
    LinearSet,
    ModularSet,
    SemilinearSet,
    UnarySet,
    intersect_hyperplane,
    linear_member,
    mod_residues,
    modular_member,
    modular_to_unary,
    unary_class_of,
    unary_member,
)
from .linsep import (
    NotSeparableVerdict,
    SeparableVerdict,
    diophantine_witness,
    linked_support,
    modular_separable_linear,
    unary_separable_linear,
    verify_linsep,
)
from .vas import (
    Run,
    SectionSpec,
    SectionedVas,
    Vas,
    Vass,
    full_section,
    hardness_instance,
    normalize_pair,
    normalize_single,
    pump_compose,
    pump_linear,
    run_embeds,
    section_intersection,
    section_union,
    validate_run,
    vass_to_vas,
)
from .reach import (
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
    unarypair_instances,
)
from .separability import (
    Budgets,
    Certificate,
    Witness,
    decide_separability,
    positive_stage,
    verify_certificate,
)
from .commutative import (
    CommutativeCertificate,
    LabeledVas,
    commutative_regular_separability,
    parikh_section,
    regular_sep_commutative_closures,
    verify_commutative,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
