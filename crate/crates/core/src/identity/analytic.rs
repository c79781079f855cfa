//! Laplace-transform identities satisfied by the exponential law.
//!
//! With `Φ(t) = λ/(λ+t)`, `Φ_1(t) = (w-1) Φ(wt)` and `Φ_2(t) = ((w-1)/w) Φ(t)`:
//!
//! ```text
//! Φ_1 Φ_2^n = Φ_1 - Σ_{k=1}^n Φ_2^k
//! 1 = v^n Ψ^n(t) - (v-1) Ψ(wt) Σ_{k<n} v^k Ψ^k(t),   Ψ = 1/Φ, v = w/(w-1)
//! ```
//!
//! The individual terms reach `|Φ_2|^n ≈ 9^{10}` at `w = 0.1` and
//! `(vΨ)^n ≈ 10^{11}` at `w = 10`, so residuals are evaluated in
//! double-double arithmetic; rounding in plain `f64` would otherwise swamp
//! the identity at the `1e-10` level.

use crate::ddouble::DoubleDouble;

use crate::dist::{Dist, Law};
use crate::error::{invalid, Result};
use crate::identity::series::PsiSeries;

type Dd = DoubleDouble;

fn dd(x: f64) -> Dd {
    DoubleDouble::from(x)
}

fn check_multiplier(w: f64) -> Result<()> {
    if !(w > 0.0 && w.is_finite()) || w == 1.0 {
        return Err(invalid(format!(
            "w = {w} must be positive, finite and different from 1"
        )));
    }
    Ok(())
}

fn check_common(n: u32, w: f64, t: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    check_multiplier(w)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(crate::error::domain(format!(
            "t = {t} must be finite and nonnegative"
        )));
    }
    Ok(())
}

fn exp_lt(lambda: Dd, t: Dd) -> Dd {
    lambda / (lambda + t)
}

/// `|Φ_1 Φ_2^n - Φ_1 + Σ_{k=1}^n Φ_2^k|` for the exponential transform with
/// rate `lambda`.
pub fn lemma1_residual(n: u32, w: f64, lambda: f64, t: f64) -> Result<f64> {
    check_common(n, w, t)?;
    crate::dist::check_rate("lambda", lambda)?;
    let (w, l, t) = (dd(w), dd(lambda), dd(t));
    let phi1 = (w - 1.0) * exp_lt(l, w * t);
    let phi2 = (w - 1.0) / w * exp_lt(l, t);
    let mut power = dd(1.0);
    let mut sum = dd(0.0);
    for _ in 0..n {
        power *= phi2;
        sum += power;
    }
    Ok(f64::from((phi1 * power - phi1 + sum).abs()))
}

/// `|(w-1)/((1+wt)(1+t)) - w/(1+wt) + 1/(1+t)|`.
pub fn decomposition_residual(w: f64, t: f64) -> Result<f64> {
    check_common(1, w, t)?;
    let (w, t) = (dd(w), dd(t));
    let a = w * t + 1.0;
    let b = t + 1.0;
    Ok(f64::from(((w - 1.0) / (a * b) - w / a + b.recip()).abs()))
}

/// Residual of the identity rescaled by `(w-1)^{n+1}/w^n`:
/// `|(w-1)^{n+1}/w^n Φ(wt)Φ^n(t) - (w-1)Φ(wt) + Σ_{k=1}^n ((w-1)/w)^k Φ^k(t)|`.
pub fn scaled_identity_residual(n: u32, w: f64, lambda: f64, t: f64) -> Result<f64> {
    check_common(n, w, t)?;
    crate::dist::check_rate("lambda", lambda)?;
    let (w, l, t) = (dd(w), dd(lambda), dd(t));
    let phi = exp_lt(l, t);
    let phi_w = exp_lt(l, w * t);
    let ratio = (w - 1.0) / w;
    let lhs = (w - 1.0) * ratio.powi(n) * phi_w * phi.powi(n);
    let mut term = dd(1.0);
    let mut sum = dd(0.0);
    for _ in 0..n {
        term *= ratio * phi;
        sum += term;
    }
    Ok(f64::from((lhs - (w - 1.0) * phi_w + sum).abs()))
}

/// Source of `Ψ(t) = 1/Φ(t)` values.
pub trait PsiEvaluator {
    fn psi(&self, t: f64) -> Result<f64>;

    /// Double-double evaluation; defaults to widening the `f64` value.
    fn psi_extended(&self, t: DoubleDouble) -> Result<DoubleDouble> {
        self.psi(f64::from(t)).map(DoubleDouble::from)
    }
}

/// `Ψ(t) = 1 + t/λ`, the reciprocal transform of `Exp(λ)`.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialPsi {
    pub lambda: f64,
}

impl PsiEvaluator for ExponentialPsi {
    fn psi(&self, t: f64) -> Result<f64> {
        Ok(1.0 + t / self.lambda)
    }

    fn psi_extended(&self, t: DoubleDouble) -> Result<DoubleDouble> {
        Ok(t / self.lambda + 1.0)
    }
}

/// Every supported law is a sum of exponential stages, so
/// `Ψ(t) = Π_i (1 + t/r_i)` over its stage rates.
impl PsiEvaluator for Dist {
    fn psi(&self, t: f64) -> Result<f64> {
        Ok(1.0 / self.laplace(t)?)
    }

    fn psi_extended(&self, t: DoubleDouble) -> Result<DoubleDouble> {
        crate::dist::check_t(f64::from(t))?;
        Ok(self
            .stage_rates()
            .into_iter()
            .fold(dd(1.0), |acc, r| acc * (t / r + 1.0)))
    }
}

impl PsiEvaluator for PsiSeries {
    fn psi(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t))
    }

    fn psi_extended(&self, t: DoubleDouble) -> Result<DoubleDouble> {
        Ok(self.eval_extended(t))
    }
}

/// Adapter for plain closures (evaluated in `f64` only).
pub struct FnPsi<F>(pub F);

impl<F: Fn(f64) -> f64> PsiEvaluator for FnPsi<F> {
    fn psi(&self, t: f64) -> Result<f64> {
        Ok((self.0)(t))
    }
}

/// `|1 - v^nΨ^n(t) + (v-1)Ψ(wt) Σ_{k<n} v^kΨ^k(t)|` with `v = w/(w-1)`.
///
/// Zero for every `t` when `Ψ(t) = 1 + t/λ`; fails if `Ψ(0) ≠ 1`.
pub fn functional_eq_residual<P: PsiEvaluator + ?Sized>(
    n: u32,
    w: f64,
    psi: &P,
    t: f64,
) -> Result<f64> {
    check_common(n, w, t)?;
    let at_zero = psi.psi(0.0)?;
    if (at_zero - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("Ψ(0) = {at_zero}, expected 1")));
    }
    let (wd, td) = (dd(w), dd(t));
    let v = wd / (wd - 1.0);
    let p = psi.psi_extended(td)?;
    let p_w = psi.psi_extended(wd * td)?;
    let vp = v * p;
    let mut power = dd(1.0);
    let mut sum = dd(0.0);
    for _ in 0..n {
        sum += power;
        power *= vp;
    }
    Ok(f64::from((-power + (v - 1.0) * p_w * sum + 1.0).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ErlangParams;

    #[test]
    fn lemma1_examples() {
        // Φ_1 = 1/3, Φ_2 = 1/4 at n=1, w=2, λ=1, t=1.
        assert!(lemma1_residual(1, 2.0, 1.0, 1.0).unwrap() < 1e-30);
        for n in 1..6 {
            assert!(lemma1_residual(n, 3.0, 1.0, 0.0).unwrap() < 1e-28);
        }
        for i in 1..=100 {
            let t = 0.1 * f64::from(i);
            assert!(lemma1_residual(3, 0.5, 2.0, t).unwrap() < 1e-12);
        }
        assert!(lemma1_residual(2, 1.0, 1.0, 1.0).is_err());
        assert!(lemma1_residual(2, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn decomposition_examples() {
        assert!(decomposition_residual(2.0, 1.0).unwrap() < 1e-30);
        assert_eq!(decomposition_residual(3.0, 0.0).unwrap(), 0.0);
        assert!(decomposition_residual(0.25, 5.0).unwrap() < 1e-14);
    }

    #[test]
    fn functional_equation_examples() {
        let exp = ExponentialPsi { lambda: 1.0 };
        assert!(functional_eq_residual(2, 2.0, &exp, 1.0).unwrap() < 1e-28);
        let erl2: Dist = ErlangParams::new(2, 1.0).unwrap().into();
        assert!(functional_eq_residual(2, 2.0, &erl2, 0.0).unwrap() < 1e-28);
        assert!(functional_eq_residual(2, 2.0, &erl2, 1.0).unwrap() > 0.1);
        let closure = FnPsi(|t: f64| (1.0 + t).powi(2));
        assert!(functional_eq_residual(2, 2.0, &closure, 1.0).unwrap() > 0.1);
        let bad = FnPsi(|t: f64| 2.0 + t);
        assert!(functional_eq_residual(2, 2.0, &bad, 1.0).is_err());
    }

    #[test]
    fn plain_f64_would_not_be_enough() {
        // Over a grid the naive f64 residual reaches ~1e-7 at w = 0.1, n = 10;
        // the extended evaluation stays far below the tolerance.
        let (n, w, lambda) = (10, 0.1, 1.0);
        let mut worst_naive: f64 = 0.0;
        let mut worst_extended: f64 = 0.0;
        for i in 0..100 {
            let t = 0.1 * f64::from(i);
            let phi1 = (w - 1.0) * lambda / (lambda + w * t);
            let phi2 = (w - 1.0) / w * lambda / (lambda + t);
            let naive = (phi1 * f64::powi(phi2, n) - phi1
                + (1..=n).map(|k| f64::powi(phi2, k)).sum::<f64>())
            .abs();
            worst_naive = worst_naive.max(naive);
            worst_extended = worst_extended.max(lemma1_residual(n as u32, w, lambda, t).unwrap());
        }
        assert!(worst_extended < 1e-12);
        assert!(worst_naive > 1e-10, "naive {worst_naive:e}");
    }
}
