"""Schur and Bogomolov multipliers of finite permutation groups, with replayable certificates."""

__version__ = "0.1.0"

from .config import settings
from .errors import (
    BogomolovError,
    CriterionDisagreement,
    HypothesisViolated,
    InconsistentPresentation,
    InvalidGroup,
    InvalidPermutation,
    NotAutomorphism,
    NotCentral,
    NotCocycle,
    NotMember,
    TooLarge,
    Unsupported,
)
from .linalg import AbGroupMap, FinAbGroup, SparseIntMatrix, kernel_mod, smith_normal_form, solve_mod
from .perm import PermGroup, Permutation, commutator
from .cohomology import (
    Cochain2,
    CohomClass,
    coboundary,
    h2_mod,
    restrict_class,
    schur_multiplier,
    semidirect_multiplier,
)
from .criteria import (
    B0Certificate,
    b0_primary_decomposition,
    b0_report,
    bogomolov_multiplier,
    central_extension,
    commutator_witness_central,
    cyclic_by_abelian_shortcut,
    excludes_from_b0,
    gamma_minimal_obstructions,
    k_gamma,
    replay_certificate,
    sylow_shortcut,
    verify_quasisimple,
)
from .catalog import GroupSpec, LieOutDescriptor, build, named, out_group, parse_name, verify_out_lemma

__all__ = [
    "__version__",
    "settings",
    "BogomolovError",
    "CriterionDisagreement",
    "HypothesisViolated",
    "InconsistentPresentation",
    "InvalidGroup",
    "InvalidPermutation",
    "NotAutomorphism",
    "NotCentral",
    "NotCocycle",
    "NotMember",
    "TooLarge",
    "Unsupported",
    "AbGroupMap",
    "FinAbGroup",
    "SparseIntMatrix",
    "kernel_mod",
    "smith_normal_form",
    "solve_mod",
    "PermGroup",
    "Permutation",
    "commutator",
    "Cochain2",
    "CohomClass",
    "coboundary",
    "h2_mod",
    "restrict_class",
    "schur_multiplier",
    "semidirect_multiplier",
    "B0Certificate",
    "b0_primary_decomposition",
    "b0_report",
    "bogomolov_multiplier",
    "central_extension",
    "commutator_witness_central",
    "cyclic_by_abelian_shortcut",
    "excludes_from_b0",
    "gamma_minimal_obstructions",
    "k_gamma",
    "replay_certificate",
    "sylow_shortcut",
    "verify_quasisimple",
    "GroupSpec",
    "LieOutDescriptor",
    "build",
    "named",
    "out_group",
    "parse_name",
    "verify_out_lemma",
]
