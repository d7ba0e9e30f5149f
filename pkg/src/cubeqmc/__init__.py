"""Digital nets, polynomial lattice rules, and error bounds for weighted
quasi-Monte Carlo integration over a finite cube."""

from .bounds import (
    BoundContext,
    avg_formula,
    cbc_bound,
    info_complexity_bound,
    lemma_E_bound,
    net_bound,
    seq_bound,
    thm1_bound,
    tu_bound_nied,
    tu_bound_sobol,
    weight_condition_sums,
)
from .cbc import (
    B_dual,
    B_fast,
    Cube,
    GeneralWeights,
    PODWeights,
    ProductWeights,
    WeightScheme,
    average_B,
    cbc_construct,
    cbc_guarantee_rhs,
    markov_fraction,
    subsets,
)
from .dyadic import DyadicPoint, DyadicPointSet
from .errors import (
    ConfigError,
    CubeQMCError,
    NumericValidationError,
    WorkGuardError,
)
from .lattice import E_dual, E_walsh, PolyLatticeRule, character_sum, dual_contains, plps
from .measures import (
    CoordinateMeasure,
    Integrand,
    builtin_integrand,
    builtin_measure,
    haar_coeff,
    integration_error,
    lambda_jm,
    lemma1_bound,
    map_points,
    qmc_estimate,
)
from .nets import (
    BitMatrix,
    NetDefinition,
    exact_t,
    generate_net,
    is_projection_regular,
    load_matrices,
    save_matrices,
    sequence_prefix,
    sobol_matrices,
)
from .walsh import HaarIndex, dyadic_sub, haar, mu, phi_table, phi_value, wal, walsh_mean

__version__ = "1.0.0"

__all__ = [
    "BoundContext",
    "BitMatrix",
    "B_dual",
    "B_fast",
    "ConfigError",
    "CoordinateMeasure",
    "Cube",
    "CubeQMCError",
    "DyadicPoint",
    "DyadicPointSet",
    "E_dual",
    "E_walsh",
    "GeneralWeights",
    "HaarIndex",
    "Integrand",
    "NetDefinition",
    "NumericValidationError",
    "PODWeights",
    "PolyLatticeRule",
    "ProductWeights",
    "WeightScheme",
    "WorkGuardError",
    "average_B",
    "avg_formula",
    "builtin_integrand",
    "builtin_measure",
    "cbc_bound",
    "cbc_construct",
    "cbc_guarantee_rhs",
    "character_sum",
    "dual_contains",
    "dyadic_sub",
    "exact_t",
    "generate_net",
    "haar",
    "haar_coeff",
    "info_complexity_bound",
    "integration_error",
    "is_projection_regular",
    "lambda_jm",
    "lemma1_bound",
    "lemma_E_bound",
    "load_matrices",
    "map_points",
    "markov_fraction",
    "mu",
    "net_bound",
    "phi_table",
    "phi_value",
    "plps",
    "qmc_estimate",
    "save_matrices",
    "seq_bound",
    "sequence_prefix",
    "sobol_matrices",
    "subsets",
    "thm1_bound",
    "tu_bound_nied",
    "tu_bound_sobol",
    "wal",
    "walsh_mean",
    "weight_condition_sums",
]
