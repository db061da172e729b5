"""Unbalanced entropic optimal transport for semantic feature alignment."""

from uft._core import (  # noqa: F401
    MatchingReport,
    SolverOptions,
    TransportSolution,
    UftError,
    argmax_match_cosine,
    argmax_match_plan,
    barycentric_warp,
    brute_force_assignment,
    compute_masses,
    contextual_loss,
    cosine_cost_matrix,
    cycle_loss,
    dual_objective,
    expand_plan,
    feature_consistency_loss,
    gen_clustered_pair,
    matching_report,
    plan_from_duals,
    primal_objective,
    seace_denormalize,
    semantic_activation_matrix,
    solve_balanced,
    solve_unbalanced,
    uot_projected_gradient,
)
