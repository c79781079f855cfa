//! Incomplete gamma function for integer shape and the positive-term
//! series used by the EME density.

use crate::error::{Error, Result};

/// `ln k!`, exact summation for the small shapes used here.
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| f64::from(i).ln()).sum()
}

/// `(ln |Q(n, t)|, sign)` with `Q(n, t) = e^{-t} Σ_{k<n} t^k / k!`.
///
/// Terms are combined in log space around the largest one, so very large
/// `|t|` (where `e^{-t}` or `t^k/k!` overflow on their own) stays finite.
/// For `t < 0` the terms alternate in sign.
pub(crate) fn ln_upper_gamma_int_signed(n: u32, t: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let abs_t = t.abs();
    let ln_abs_t = abs_t.ln();
    let mut ln_terms = Vec::with_capacity(n as usize);
    let mut l = -t;
    ln_terms.push(l);
    for k in 1..n {
        l += ln_abs_t - f64::from(k).ln();
        ln_terms.push(l);
    }
    let max = ln_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: f64 = ln_terms
        .iter()
        .enumerate()
        .map(|(k, &lk)| {
            let sign = if t < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            sign * (lk - max).exp()
        })
        .sum();
    if scaled == 0.0 {
        return (f64::NEG_INFINITY, 1.0);
    }
    (max + scaled.abs().ln(), scaled.signum())
}

/// Regularized upper incomplete gamma `Q(n, t) = Γ(n, t) / (n-1)!` for
/// integer `n ≥ 1` and any finite real `t`, via the finite sum
/// `e^{-t} Σ_{k=0}^{n-1} t^k / k!`.
///
/// For `t ≥ 0` the result lies in `[0, 1]`. Negative `t` is allowed and
/// can produce values of either sign and very large magnitude; an
/// [`Error::Overflow`] is returned when the value is not representable.
pub fn regularized_upper_gamma_int(n: u32, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(crate::error::invalid("incomplete gamma shape must be >= 1"));
    }
    if !t.is_finite() {
        return Err(crate::error::domain(format!("t = {t} is not finite")));
    }
    let (ln_abs, sign) = ln_upper_gamma_int_signed(n, t);
    if ln_abs > f64::MAX.ln() {
        return Err(Error::Overflow(format!(
            "Q({n}, {t}) has magnitude exp({ln_abs:.1})"
        )));
    }
    let q = sign * ln_abs.exp();
    Ok(if t >= 0.0 { q.clamp(0.0, 1.0) } else { q })
}

/// Regularized lower incomplete gamma `P(n, t) = 1 - Q(n, t)` for `t ≥ 0`,
/// accurate for small `t` where `1 - Q` would cancel.
pub fn regularized_lower_gamma_int(n: u32, t: f64) -> f64 {
    debug_assert!(n >= 1 && t >= 0.0);
    if t == 0.0 {
        return 0.0;
    }
    if t < f64::from(n) {
        // e^{-t} t^n / n! · Σ_k n! t^k / (n+k)!
        let ln_s = ln_lower_tail_series(n, t);
        (-t + f64::from(n) * t.ln() - ln_factorial(n) + ln_s)
            .exp()
            .min(1.0)
    } else {
        let (ln_q, _) = ln_upper_gamma_int_signed(n, t);
        (-ln_q.exp()).ln_1p().exp().clamp(0.0, 1.0)
    }
}

/// Sum of a positive series given its first term `1` and the ratio
/// `term_{k+1} / term_k`, returned as a logarithm. Rescales internally so
/// sums beyond `f64::MAX` are still representable.
fn ln_positive_series(z: f64, ratio: impl Fn(u32) -> f64) -> f64 {
    let mut ln_scale = 0.0;
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut k = 0u32;
    loop {
        term *= ratio(k);
        k += 1;
        sum += term;
        if sum > 1e280 {
            sum *= 1e-280;
            term *= 1e-280;
            ln_scale += 280.0 * std::f64::consts::LN_10;
        }
        // Terms decrease once k exceeds z.
        if (f64::from(k) > z && term <= sum * 1e-17) || term == 0.0 {
            break;
        }
    }
    ln_scale + sum.ln()
}

/// `ln Σ_{k≥0} n! z^k / (n+k)!` for `z ≥ 0`; equals `ln M(1, n+1, z)`.
pub(crate) fn ln_lower_tail_series(n: u32, z: f64) -> f64 {
    ln_positive_series(z, |k| z / f64::from(n + k + 1))
}

/// `ln Σ_{k≥0} n/(n+k) · s^k / k!` for `s ≥ 0`; equals `ln M(n, n+1, s)`.
pub(crate) fn ln_kummer_series(n: u32, s: f64) -> f64 {
    let nf = f64::from(n);
    // term_{k+1}/term_k = s/(k+1) · (n+k)/(n+k+1)
    ln_positive_series(s, |k| {
        let kf = f64::from(k);
        s / (kf + 1.0) * (nf + kf) / (nf + kf + 1.0)
    })
}
