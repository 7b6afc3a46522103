"""quadgraph: functional graphs of X -> c(X^(q+1) + a*X^2) over GF(q^2).

Builds the exact graph over all q^2 states, predicts its decomposition in
closed form for a = +/-1 (plus partial facts for other a), and cross-verifies
the two against each other.
"""

from .dynamics import (
    MapParams,
    closed_form_even_iterate,
    closed_form_iterate_a1,
    eval_coords,
    eval_direct,
    fixed_points,
    fixed_points_bruteforce,
    iterate,
    preimage_count_predicted,
    preimages_bruteforce,
)
from .ffield import (
    ExtElement,
    FieldElement,
    PrimeField,
    QuadExt,
    chi2,
    chi2_int,
    euler_phi,
    ext_mul,
    ext_pow,
    find_nonsquare,
    frobenius,
    multiplicative_order,
    odd_part_and_divisors,
    sqrt_mod,
)
from .graph import (
    ComponentShape,
    Decomposition,
    FunctionalGraph,
    GraphSignature,
    ResourceLimitError,
    build_graph,
    decompose,
    signature_equal,
    t_shape,
    to_dot,
    tree_encoding,
    z_shape,
    zstar_shape,
)
from .theory import (
    PartialFacts,
    PredictedDecomposition,
    predict_a_minus1,
    predict_a_plus1,
    predict_cycle_census,
    predict_partial_general,
    predicted_node_count,
)
from .verify import SweepSummary, VerificationReport, sweep, verify_instance

__version__ = "0.1.0"

__all__ = [
    "MapParams",
    "PrimeField",
    "FieldElement",
    "QuadExt",
    "ExtElement",
    "chi2",
    "chi2_int",
    "find_nonsquare",
    "sqrt_mod",
    "ext_mul",
    "ext_pow",
    "frobenius",
    "multiplicative_order",
    "euler_phi",
    "odd_part_and_divisors",
    "eval_direct",
    "eval_coords",
    "iterate",
    "closed_form_even_iterate",
    "closed_form_iterate_a1",
    "preimages_bruteforce",
    "preimage_count_predicted",
    "fixed_points",
    "fixed_points_bruteforce",
    "FunctionalGraph",
    "Decomposition",
    "GraphSignature",
    "ComponentShape",
    "ResourceLimitError",
    "build_graph",
    "decompose",
    "signature_equal",
    "tree_encoding",
    "t_shape",
    "z_shape",
    "zstar_shape",
    "to_dot",
    "PredictedDecomposition",
    "PartialFacts",
    "predict_a_minus1",
    "predict_a_plus1",
    "predict_cycle_census",
    "predict_partial_general",
    "predicted_node_count",
    "VerificationReport",
    "SweepSummary",
    "verify_instance",
    "sweep",
    "__version__",
]
