"""Cellular-automaton pseudo-random number generators and their quality analysis."""

from .bitlinalg import BitMatrix, BitVector, identity, mat_mul, mat_pow, mat_vec, rank, rational_rank
from .ca import (
    FactorTable,
    Gf2Poly,
    RuleVector,
    char_poly,
    characteristic_matrix,
    n1_fraction,
    step,
    verify_maximal_period,
)
from .catalog import CatalogEntry, build_rule_vector, find_coprime_pairs, get_entry, load_catalog
from .chaos import is_chaotic_candidate, p_parameter, rule_flow
from .combined import Generator, GeneratorSpec, GeneratorState, next_word, period, seed, transition_matrix
from .equidist import EquidistQuery, EquidistReport, build_b_matrix, check_tl, me_verdict, phi_sets, resolution
from .errors import (
    CaprngError,
    CatalogError,
    DimensionError,
    InvalidInputError,
    InvalidSeedError,
    ResourceError,
    UnsupportedSizeError,
)

__version__ = "0.1.0"
