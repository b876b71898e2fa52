//! Gauss rules, closed-form moments and multi-dimensional sphere/ball rules.

pub mod gauss;
pub mod moments;
pub mod rules;

pub use gauss::{composite_gauss_legendre, gauss_jacobi, gauss_laguerre, gauss_legendre, GaussRule};
pub use moments::{
    dirichlet_moment, dirichlet_moment_reduced, gamma_duplication_check, sphere_area,
    sphere_area_identity, sphere_moment, MultiIndex,
};
pub use rules::{
    build_ball_rule, build_sphere_rule, BallRule, Estimate, MomentTable, NodeSet, QuadratureRule,
    RuleKind, SphereRule, DEFAULT_SEED, MAX_LEVEL, TENSOR_MAX_BALL_DIM, TENSOR_MAX_SPHERE_DIM,
};
