"""Bounds and certificates for the non-m-positive dimension of positive
linear maps, maximal multipartite NPT subspaces, and decomposable
entanglement witnesses."""

from .tensor_core import (
    HermOp,
    Inertia,
    DimensionError,
    NotHermitianError,
    kron,
    partial_trace,
    partial_transpose,
    herm_eigs,
    inertia,
    trace_norm,
    operator_norm,
    vec_row_major,
    projection_from_span,
)
from .map_catalog import (
    HPMap,
    apply,
    adjoint,
    compose,
    tensor_with_identity,
    ell,
    is_completely_positive,
    identity_map,
    transpose_map,
    depolarizing,
    reduction_map,
    choi_map,
    breuer_hall,
    counterexample_pair,
)
from .sdp_engine import (
    diamond_norm,
    diamond_distance,
    subspace_witness_sdp,
    state_from_subspace,
    finer_check,
)
from .bound_engine import (
    BoundReport,
    trivial_upper,
    lemma_bound,
    lemma_bound_scan,
    exact_nu,
    nu_ratio_upper,
)
from .search_engine import (
    SearchReport,
    random_density,
    neg_count,
    search_nu_lower,
    reduction_optimal_state,
    block_lift_state,
    subspace_from_state,
)
from .multipartite_npt import (
    SubspaceBasis,
    NptCertificate,
    parthasarathy_dim,
    npt_subspace_basis,
    is_in_subspace,
    npt_certificate,
    decomposable_witness,
    three_qubit_example,
    k_positive_example,
    schmidt_rank_probe,
)

__all__ = [name for name in dir() if not name.startswith("_")]
