"""Exact computations on smooth square-free integers in residue classes."""

from .arith import (
    PSI,
    Factorization,
    SieveTables,
    build_sieve,
    crt_solve,
    factorize,
    is_prime,
    is_smooth,
    is_squarefree,
    prime_window,
    short_interval,
)
from .characters import (
    DirichletCharacter,
    UnitGroupStructure,
    build_character_group,
    exceptional_prime_census,
    max_nonprincipal_sf_sum,
    mean_value_check,
    squarefree_char_sum,
)
from .congruences import (
    PrimeBlock,
    count_I,
    count_N,
    count_N_squarefree,
    count_Q,
    count_R,
    count_structured_products,
    count_T,
)
from .errors import DomainError, IdentityViolation, NeedsLargerSieve, ResourceError
from .kloosterman import (
    all_residue_sums,
    average_over_prime_moduli,
    double_kloosterman,
    erdos_turan_bound,
    inverse_product_discrepancy,
    max_over_residues,
)
from .lemma_lab import (
    ap_upper_check,
    constants,
    smooth_lemma_census,
    sqfap_count,
    sums_lemma_census,
)
from .report import CountReport
from .representatives import (
    RepresentativeRecord,
    Status,
    booker_lower_bound,
    compute_M,
    compute_M_alpha_star,
    construct_thm13,
    smooth_squarefree_triple_search,
)
from .verify import verify_suite

__version__ = "0.1.0"
