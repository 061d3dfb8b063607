"""Product-formula splittings of exp(A_1 + ... + A_N) and exp([A_1, A_2]).

Construct and parse splitting methods, compute their commutator-expansion
coefficients and residual metrics, search for integer-coefficient methods,
evaluate the closed-form irrational ones, compose higher-order methods, and
benchmark everything against exact dense-matrix evolution.
"""

from .catalog import CATALOG, catalog_ids, get_entry, get_method
from .compose import auto_compose, double_to_even, make_palindromic, raise_order
from .gates import commutator_method_4, commutator_method_5, verify_commutator
from .harness import (
    OperatorSet,
    apply_method,
    build_ising_nnn,
    build_pauli_set,
    exact_evolution,
    frobenius_error,
    pauli_error,
    scaling_experiment,
)
from .irrational import (
    NoConvergenceError,
    newton_solve,
    r3_shortest,
    r4_symmetric,
)
from .notation import (
    Method,
    NotationError,
    Target,
    Unit,
    concat,
    format_method,
    method_from_json,
    method_to_json,
    parse_method,
    power,
    scale,
    transpose,
)
from .residuals import (
    B2_TABLE,
    CostModel,
    MethodReport,
    RhoVector,
    computer_time,
    report,
    rho_vector,
    scalar_R,
)
from .search import SearchSpec, brute_force_search, search
from .sigma import (
    OrderReport,
    SigmaVector,
    order_of,
    sigma_1112,
    sigma_p,
    sigma_pq,
    sigma_ppq,
    sigma_vector,
)

__version__ = "0.1.0"
