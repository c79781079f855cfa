//! Maximum-likelihood fitting of EME parameters.
//!
//! The log-likelihood over `(λ, w)` is maximized by a Nelder–Mead search in
//! `(ln λ, ln w)`, started from the method-of-moments inversion of
//! `mean = (n+w)/λ`, `var = (n+w²)/λ²`.

use serde::Serialize;

use crate::dist::{eme_ln_pdf, EmeParams, EPS_W};
use crate::error::{invalid, Error, Result};
use crate::sample::SampleBatch;

pub const MAX_ITERATIONS: usize = 500;
pub const REL_TOLERANCE: f64 = 1e-9;

/// Which stage counts to try.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageCount {
    Fixed(u32),
    /// Fit every `n` in `1..=max` and keep the best log-likelihood.
    SearchUpTo(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmeFit {
    pub n: u32,
    pub lambda: f64,
    pub w: f64,
    pub log_likelihood: f64,
    /// Log-likelihood at the method-of-moments start point.
    pub start_log_likelihood: f64,
    pub iterations: usize,
}

impl EmeFit {
    pub fn params(&self) -> Result<EmeParams> {
        EmeParams::new(self.n, self.lambda, self.w)
    }
}

/// `Σ ln f(x_i)` under EME(n, λ, w); any `w > 0` is accepted, `|w - 1| < EPS_W`
/// evaluates the Erlang(n+1, λ) limit.
pub fn eme_log_likelihood(data: &[f64], n: u32, lambda: f64, w: f64) -> f64 {
    data.iter().map(|&x| eme_ln_pdf(n, lambda, w, x)).sum()
}

pub fn fit_eme_mle(data: &SampleBatch, stages: StageCount) -> Result<EmeFit> {
    data.require_positive()?;
    let xs = data.values();
    let first = xs[0];
    if xs.iter().all(|&x| x == first) {
        return Err(Error::DegenerateData(format!(
            "all {} observations equal {first}",
            xs.len()
        )));
    }
    match stages {
        StageCount::Fixed(0) | StageCount::SearchUpTo(0) => {
            Err(invalid("stage count must be >= 1"))
        }
        StageCount::Fixed(n) => fit_fixed(xs, n, data.mean(), data.variance()),
        StageCount::SearchUpTo(max) => {
            let mut best: Option<EmeFit> = None;
            for n in 1..=max {
                let fit = fit_fixed(xs, n, data.mean(), data.variance())?;
                if best.is_none_or(|b| fit.log_likelihood > b.log_likelihood) {
                    best = Some(fit);
                }
            }
            Ok(best.expect("max >= 1"))
        }
    }
}

/// Candidate `w` values from the moment equations. With `r = var/mean²`,
/// `r (n+w)² = n + w²`; `r` ranges over `[1/(n+1), 1)` and every interior
/// value except `[1/n, 1)` has one root on each side of `w = 1`.
fn moment_starts(n: u32, r: f64) -> Vec<f64> {
    let n = f64::from(n);
    let a = r - 1.0;
    let b = 2.0 * r * n;
    let c = r * n * n - n;
    let mut roots = Vec::new();
    if a.abs() < 1e-12 {
        if b != 0.0 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((-b + sq) / (2.0 * a));
            roots.push((-b - sq) / (2.0 * a));
        }
    }
    let mut starts: Vec<f64> = roots
        .into_iter()
        .filter(|w| w.is_finite() && *w > 0.0)
        .map(|w| {
            if (w - 1.0).abs() < 1e-3 {
                1.0 + 1e-3f64.copysign(w - 1.0)
            } else {
                w
            }
        })
        .collect();
    if starts.is_empty() {
        starts = if r >= 1.0 {
            vec![10.0]
        } else {
            vec![1.5, 1.0 / 1.5]
        };
    }
    starts
}

fn fit_fixed(xs: &[f64], n: u32, mean: f64, var: f64) -> Result<EmeFit> {
    let objective = |p: &[f64; 2]| {
        let ll = eme_log_likelihood(xs, n, p[0].exp(), p[1].exp());
        if ll.is_nan() {
            f64::INFINITY
        } else {
            -ll
        }
    };
    let r = var / (mean * mean);
    let mut start = None;
    for w in moment_starts(n, r) {
        let lambda = (f64::from(n) + w) / mean;
        let p = [lambda.ln(), w.ln()];
        let f = objective(&p);
        if start.is_none_or(|(_, g)| f < g) {
            start = Some((p, f));
        }
    }
    let (p0, f0) = start.expect("at least one start");
    let mut result = nelder_mead(&objective, p0, 0.1)?;
    // One restart around the optimum guards against premature collapse.
    let again = nelder_mead(&objective, result.point, 0.05)?;
    if again.value <= result.value {
        result.iterations += again.iterations;
        result.point = again.point;
        result.value = again.value;
    }
    let mut w = result.point[1].exp();
    if (w - 1.0).abs() < EPS_W {
        // Inside the Erlang-limit band: report a representable multiplier.
        w = 1.0 + EPS_W.copysign(w - 1.0);
    }
    Ok(EmeFit {
        n,
        lambda: result.point[0].exp(),
        w,
        log_likelihood: -result.value,
        start_log_likelihood: -f0,
        iterations: result.iterations,
    })
}

struct Minimum {
    point: [f64; 2],
    value: f64,
    iterations: usize,
}

/// Nelder–Mead minimization in two dimensions with the standard
/// reflection/expansion/contraction/shrink coefficients.
fn nelder_mead<F: Fn(&[f64; 2]) -> f64>(f: &F, start: [f64; 2], step: f64) -> Result<Minimum> {
    let mut simplex = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut values = simplex.map(|p| f(&p));
    let lerp =
        |a: &[f64; 2], b: &[f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let mut spread = f64::INFINITY;
    for iteration in 0..MAX_ITERATIONS {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let (best, worst) = (values[0], values[2]);
        spread = (worst - best).abs() / best.abs().max(1e-300);
        let size = (simplex[1][0] - simplex[0][0])
            .abs()
            .max((simplex[2][0] - simplex[0][0]).abs())
            + (simplex[1][1] - simplex[0][1])
                .abs()
                .max((simplex[2][1] - simplex[0][1]).abs());
        if best.is_finite() && (spread <= REL_TOLERANCE || size < 1e-12) {
            return Ok(Minimum {
                point: simplex[0],
                value: best,
                iterations: iteration,
            });
        }
        let centroid = lerp(&simplex[0], &simplex[1], 0.5);
        let reflected = lerp(&simplex[2], &centroid, 2.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = lerp(&simplex[2], &centroid, 3.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] {
                lerp(&simplex[2], &centroid, 1.5)
            } else {
                lerp(&simplex[2], &centroid, 0.5)
            };
            let fc = f(&contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(&simplex[0], &simplex[i], 0.5);
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    Err(Error::Convergence {
        iterations: MAX_ITERATIONS,
        spread,
    })
}
