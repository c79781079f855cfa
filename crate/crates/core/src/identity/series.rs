//! Power series of `Ψ = 1/Φ`, the reciprocal Laplace transform, recovered
//! from moments.
//!
//! Under Cramér's condition `Φ(t) = Σ_k (-1)^k m_k t^k / k!` near zero, and
//! the coefficients `a_j` of `Ψ(t) = Σ_j a_j t^j` follow from the formal
//! reciprocal `a_0 = 1`, `a_j = -Σ_{i=1}^{j} c_i a_{j-i}`. An exponential law
//! with rate `λ` is exactly `a = (1, 1/λ, 0, 0, …)`.

use crate::ddouble::DoubleDouble;

use crate::error::{Error, Result};

/// Coefficients `a_0..=a_J` of `Ψ(t) = 1/Φ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiSeries {
    pub coeffs: Vec<f64>,
}

impl PsiSeries {
    /// Truncated-series value (Horner).
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn eval_extended(&self, t: DoubleDouble) -> DoubleDouble {
        self.coeffs
            .iter()
            .rev()
            .fold(DoubleDouble::ZERO, |acc, &c| acc * t + c)
    }

    /// `Some(λ)` when the coefficients match `(1, 1/λ, 0, …)`: `a_0 = 1` and
    /// `a_1 > 0` within `tol`, every higher coefficient below `tol`.
    pub fn exponential_rate(&self, tol: f64) -> Option<f64> {
        let (a0, a1) = (*self.coeffs.first()?, *self.coeffs.get(1)?);
        let higher_vanish = self.coeffs[2..].iter().all(|a| a.abs() < tol);
        ((a0 - 1.0).abs() < tol && a1 > tol && higher_vanish).then(|| 1.0 / a1)
    }
}

/// `a_0..=a_J` from raw moments `m_1..=m_J` (`m_0 = 1` implied).
pub fn psi_coeffs_from_moments(moments: &[f64], order: usize) -> Result<PsiSeries> {
    if moments.len() < order {
        return Err(Error::Length {
            needed: order,
            got: moments.len(),
        });
    }
    // Laplace-series coefficients c_k = (-1)^k m_k / k!
    let mut c = Vec::with_capacity(order + 1);
    c.push(1.0);
    let mut fact = 1.0;
    for (k, &m) in moments.iter().take(order).enumerate() {
        let k = k + 1;
        fact *= k as f64;
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        c.push(sign * m / fact);
    }
    let mut a = Vec::with_capacity(order + 1);
    a.push(1.0);
    for j in 1..=order {
        let s: f64 = (1..=j).map(|i| c[i] * a[j - i]).sum();
        a.push(-s);
    }
    Ok(PsiSeries { coeffs: a })
}

/// `m_k = k!/λ^k`, `k = 1..=order`.
pub fn exponential_moments(lambda: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order);
    let mut m = 1.0;
    for k in 1..=order {
        m *= k as f64 / lambda;
        out.push(m);
    }
    out
}

/// `m_k = 1/(k+1)` for the uniform law on `[0, 1]`.
pub fn uniform_moments(order: usize) -> Vec<f64> {
    (1..=order).map(|k| 1.0 / (k as f64 + 1.0)).collect()
}
