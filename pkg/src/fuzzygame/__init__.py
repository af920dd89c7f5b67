"""Games whose mixed strategies are possibility capacities.

Capacities and fuzzy integrals on finite spaces, t-norm tensor products,
expected payoffs, and grid search for Nash min/max-equilibria.
"""

from .capacity import (
    Capacity,
    CapacityClass,
    Density,
    FiniteSpace,
    classify,
    density_of,
    dual,
    from_density,
    greatest,
    is_necessity,
    is_possibility,
    make_capacity,
    max_subsets,
    point_mass,
)
from .equilibrium import (
    DensityGrid,
    EquilibriumResult,
    Landscape,
    best_response,
    density_grid,
    deviation_gain,
    find_equilibrium,
    improvement_landscape,
    quasiconvexity_grid_check,
)
from .errors import (
    ConstraintError,
    DomainError,
    FuzzyGameError,
    InvalidTNorm,
    NegativeValue,
    NotMonotone,
    NotNormalized,
    NotPossibility,
    RangeError,
    SizeError,
    SpaceMismatch,
)
from .games import (
    Game,
    MixedProfile,
    PayoffRule,
    b_convex_combine,
    expected_payoff_choquet,
    expected_payoff_tnormed,
    quasiconvexity_witness_search,
)
from .integrals import (
    FiniteFunction,
    are_comonotone,
    check_axioms,
    choquet,
    integral_functional,
    level_set,
    recover_capacity,
    sugeno,
    t_normed,
)
from .tensor import ProductSpace, product_space, projection_check, tensor_density, tensor_general, tensor_nfold
from .tnorms import LUKASIEWICZ, MIN, PRODUCT, TNorm, apply, verify_axioms

__version__ = "0.1.0"
