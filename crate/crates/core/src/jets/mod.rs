//! The standard action of ℋₙ on crossed products 𝒜ₙ = C_c^∞(Fℝⁿ) ⋊ Diff ℝⁿ.
//!
//! [`exact`] works with ε-deformation jets over ℚ; [`numeric`] uses globally
//! invertible maps of ℝ and quadrature for trace identities in codimension 1;
//! [`forms`] carries the Godbillon–Vey pullback.

pub mod exact;
pub mod forms;
pub mod numeric;
pub mod poly;
pub mod series;

pub use exact::{
    act, gamma, gamma_by_fields, rank_sanity, verify_action_suite, verify_gamma_cocycle, verify_gamma_suite,
    verify_hopf_action, CrossedElement,
    DeformationScalar, FormalDiffeo, GammaTable,
};
pub use forms::{gv_pairing_check, gv_pullback_check, DifferentialForm, Expr};
pub use numeric::{
    act_numeric, chi_tau, trace_quadrature, verify_trace_identities, GlobalDiffeo, NFun, NumericConfig, NumericCrossed,
    Quadrature, SmoothFn, SupportBox,
};
pub use poly::{FrameFunction, MPoly, Ring};
