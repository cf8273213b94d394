"""Exact mod-p homology engine for double loop spaces of odd Moore spaces.

Everything is computed over F_p with integer matrices: the free algebra
of generators and its weight-graded summands, the staged (Bockstein)
homology pages of three models, the mod-2 six-class Steenrod module, and
the arithmetic catalog of the torsion families those computations feed.
"""

from .algebra_core import (
    Coefficients,
    LinComb,
    Term,
    ad_v,
    basis_primitive_counts,
    beta_q,
    bracket,
    fp_homology,
    gen_u,
    gen_v,
    lie_normal_form,
    lyndon_basis,
    lyndon_words,
    primitive_dims_oracle,
    q_op,
    tensor_embedding,
)
from .bss import (
    Page,
    PageSlice,
    PresentationReport,
    ScheduledMap,
    StagedModel,
    SurvivorReport,
    check_acyclic,
    compute_page,
    survivor_check,
    verify_presented_page,
    word,
)
from .catalog import (
    FamilyEntry,
    adams_period,
    cmn_summands,
    entries_to_csv,
    entries_to_json,
    even_families,
    low_homotopy,
    odd_families,
)
from .errors import (
    CutoffError,
    DifferentialError,
    EngineError,
    OracleMismatchError,
    RangeIncompleteError,
)
from .freecomm import (
    GeneratorTable,
    Monomial,
    SummandHomology,
    TopGroups,
    dj_homology,
    dpk_top_groups,
    generator_table,
    monomial,
    monomial_basis,
    poincare_series,
)
from .mod2 import (
    ChainReport,
    Decomposition,
    SteenrodModule,
    build_d2_module,
    decomposition_search,
    verify_chain_identity,
)
from .models import (
    AbstractGen,
    ClassPair,
    build_fibre_page_model,
    build_omega2_model,
    build_tensor_model,
    sigma_tau_classes,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractGen",
    "ChainReport",
    "ClassPair",
    "Coefficients",
    "CutoffError",
    "Decomposition",
    "DifferentialError",
    "EngineError",
    "FamilyEntry",
    "GeneratorTable",
    "LinComb",
    "Monomial",
    "OracleMismatchError",
    "Page",
    "PageSlice",
    "PresentationReport",
    "RangeIncompleteError",
    "ScheduledMap",
    "StagedModel",
    "SteenrodModule",
    "SummandHomology",
    "SurvivorReport",
    "Term",
    "TopGroups",
    "ad_v",
    "adams_period",
    "basis_primitive_counts",
    "beta_q",
    "bracket",
    "build_d2_module",
    "build_fibre_page_model",
    "build_omega2_model",
    "build_tensor_model",
    "check_acyclic",
    "cmn_summands",
    "compute_page",
    "decomposition_search",
    "dj_homology",
    "dpk_top_groups",
    "entries_to_csv",
    "entries_to_json",
    "even_families",
    "fp_homology",
    "gen_u",
    "gen_v",
    "generator_table",
    "lie_normal_form",
    "low_homotopy",
    "lyndon_basis",
    "lyndon_words",
    "monomial",
    "monomial_basis",
    "odd_families",
    "poincare_series",
    "primitive_dims_oracle",
    "q_op",
    "sigma_tau_classes",
    "survivor_check",
    "tensor_embedding",
    "verify_chain_identity",
    "verify_presented_page",
    "word",
]
