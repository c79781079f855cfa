//! Checks of the identities that single out the exponential law among
//! Laplace transforms: exact rational arithmetic for the combinatorial
//! ones, double-double floating point for the transform-level ones.

pub mod analytic;
pub mod exact;
pub mod series;
pub mod verify;

pub use analytic::{
    decomposition_residual, functional_eq_residual, lemma1_residual, scaled_identity_residual,
    ExponentialPsi, FnPsi, PsiEvaluator,
};
pub use exact::{
    binomial, brackets, lemma2_i, lemma2_ii, lemma2_ii_closed_form, lemma2_remark,
    lemma2_remark_corrected, rational, v_from_w, BracketPair, RationalScalar,
};
pub use series::{exponential_moments, psi_coeffs_from_moments, uniform_moments, PsiSeries};
pub use verify::{run_verify, FamilyReport, VerifyConfig, VerifyReport};
