//! Exact desk-scale verification of the sharp constants in the
//! Khintchine inequality, its multiple (tensor) version, and the mixed
//! (l_{p/(p-1)}, l_2) Littlewood inequalities for multilinear forms.
//!
//! Everything is computed by finite, exact means: Rademacher moments are
//! full averages over sign hypercubes (enumerated in Gray order with
//! compensated incremental updates), form norms are suprema over sign
//! extreme points with an exact dual-norm contraction in the first slot,
//! and the constant family A_p is evaluated from a Lanczos gamma with
//! the branch point p0 located by bisection. Witness arrays certify the
//! lower bounds: the block-ones array attains the dyadic-branch constant
//! at finite size, the uniform array converges to the Gaussian-branch
//! constant by the central limit theorem.

pub mod constants;
pub mod error;
pub mod exponent;
pub mod forms;
pub mod gray;
pub mod io;
pub mod kahan;
pub mod moments;
pub mod norms;
pub mod tensor;
pub mod witness;

pub use constants::{
    breakpoint, gamma, gaussian_moment_limit, haagerup_constant, ln_gamma, mixed_littlewood_constant,
    multiple_khintchine_constant, solve_p0, Branch, Breakpoint, HaagerupConstant,
};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use forms::{
    equivalence_report, equivalence_report_with, form_norm, form_norm_with,
    littlewood_form_construction, littlewood_form_construction_with, mixed_lhs_inner,
    mixed_lhs_outer, verify_mixed_littlewood, verify_mixed_littlewood_with, InequalityReport,
    MixedTheorem, MultilinearForm, HOLDS_SLACK,
};
pub use gray::{EnumConfig, DEFAULT_BIT_BUDGET};
pub use kahan::{compensated_sum, KahanSum};
pub use moments::{
    exact_moment, exact_moment_with, moment_rank_one, moment_rank_one_with, rademacher,
    MomentMethod, MomentResult,
};
pub use norms::{lp_norm, minkowski_gap, mixed_norm, RealMatrix};
pub use tensor::{l2_of_tensor, sign_transform, CoefficientTensor, SignAssignment};
pub use witness::{
    binomial_moment, block_ones_witness, lower_bound_sweep, lower_bound_sweep_with,
    uniform_witness, witness_ratio, witness_ratio_with, witness_sweep_with, WitnessKind,
    WitnessReport,
};
