"""Exact decision procedures for extreme molecules of Lipschitz-free spaces over finite metric spaces."""

from .exactlp import LinearProgram, LPSolution, Status, feasible, functional_range, in_convex_hull, solve
from .extremal import (
    MoleculeClassification,
    NormingPolytope,
    classify,
    d_pq,
    de_leeuw,
    exposing_functional,
    molecule_face,
    oracle_extreme,
    strongly_exposed_constant,
    verify_dpq_on_segment,
    verify_face_on_segment,
)
from .freespace import (
    FreeElement,
    LipFunction,
    Molecule,
    delta,
    in_subspace,
    lip_norm,
    molecule_element,
    norm_dual,
    norm_primal,
    pairing,
    product_function,
    subspace_intersection,
    support,
    weight_element,
)
from .metric import (
    FiniteMetricSpace,
    MetricAxiomError,
    diameter,
    from_graph,
    gap,
    gen_random,
    gen_tree,
    gen_ultrametric,
    is_ultrametric,
    segment,
    validate,
)

__version__ = "0.1.0"
