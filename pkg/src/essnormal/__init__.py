"""Rational self-maps of the disk with essentially normal composition operators."""

from .cf_interp import (
    AugmentationChain,
    CFData,
    a_matrix,
    augment_jet,
    chain_matrix,
    construct_basic_interpolant,
    hankel_matrix,
    is_positive_definite,
    minimal_interpolant,
    parametrization_chain,
    reduce_jet,
    solution_from_chain,
)
from .config import Tolerances, tolerances, using_tolerances
from .contact import (
    ContactPoint,
    ContactProfile,
    clark_atoms,
    composite_contact_order,
    contact_profile,
    denjoy_wolff,
    is_compact_symbol,
    order_of_contact_at,
)
from .errors import EssNormalError, NumericalError, ValidationError
from .essnorm import (
    Classification,
    CombinationTerm,
    almost_inverse_data,
    basic_from_data,
    classify,
    combination_report,
    decompose_into_basics,
    generate_ess_normal,
    is_compact_combination,
    is_outer_regular,
    sigma_branch_jet,
)
from .expr import format_map, parse_map
from .h2num import (
    FiniteSection,
    adjoint_pointwise,
    compactness_diagnostic,
    cphi_matrix,
    self_commutator,
)
from .jets import Jet, faa_di_bruno, jet_add, jet_invert, jet_mul, jet_of_rational, jet_reciprocal, middle_term_F
from .ratfun import (
    Poly,
    PolyMatrix2,
    RationalMap,
    cayley,
    cayley_inverse,
    compose,
    critical_values,
    exterior_map,
    lft_apply,
)

__version__ = "0.1.0"

__all__ = [
    "a_matrix",
    "adjoint_pointwise",
    "almost_inverse_data",
    "augment_jet",
    "AugmentationChain",
    "basic_from_data",
    "cayley",
    "cayley_inverse",
    "CFData",
    "chain_matrix",
    "clark_atoms",
    "Classification",
    "classify",
    "combination_report",
    "CombinationTerm",
    "compactness_diagnostic",
    "compose",
    "composite_contact_order",
    "construct_basic_interpolant",
    "contact_profile",
    "ContactPoint",
    "ContactProfile",
    "cphi_matrix",
    "critical_values",
    "decompose_into_basics",
    "denjoy_wolff",
    "EssNormalError",
    "exterior_map",
    "faa_di_bruno",
    "FiniteSection",
    "format_map",
    "generate_ess_normal",
    "hankel_matrix",
    "is_compact_combination",
    "is_compact_symbol",
    "is_outer_regular",
    "is_positive_definite",
    "Jet",
    "jet_add",
    "jet_invert",
    "jet_mul",
    "jet_of_rational",
    "jet_reciprocal",
    "lft_apply",
    "middle_term_F",
    "minimal_interpolant",
    "NumericalError",
    "order_of_contact_at",
    "parametrization_chain",
    "parse_map",
    "Poly",
    "PolyMatrix2",
    "RationalMap",
    "reduce_jet",
    "self_commutator",
    "sigma_branch_jet",
    "solution_from_chain",
    "tolerances",
    "Tolerances",
    "using_tolerances",
    "ValidationError",
]
