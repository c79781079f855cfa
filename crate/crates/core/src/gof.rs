//! Goodness-of-fit test for exponentiality.
//!
//! For `X ~ Exp(λ)` the Laplace transform satisfies, for every `t ≥ 0`,
//!
//! ```text
//! (w-1)^{n+1}/w^n Φ(wt) Φ^n(t) = (w-1) Φ(wt) - Σ_{k=1}^n ((w-1)/w)^k Φ^k(t)
//! ```
//!
//! and no other law does. The test plugs the empirical transform of the
//! mean-rescaled data into the difference `D(t)` of the two sides and uses
//! `T = N Σ_g D(t_g)^2 e^{-c t_g} Δt` over a uniform grid on `(0, 10]`.
//! Rescaling by the sample mean makes `T` scale-free, so its null law is
//! that of standard exponential samples of the same size; the p-value comes
//! from a parametric bootstrap under that null.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::exp_variate;
use crate::error::{invalid, Error, Result};
use crate::rng;
use crate::sample::SampleBatch;

/// Upper end of the transform grid.
pub const T_MAX: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofConfig {
    /// Number of unit-weight summands in the characterizing sum.
    pub n: u32,
    /// Weight of the extra summand; positive and different from 1.
    pub w: f64,
    pub grid_points: usize,
    /// Decay `c` of the grid weight `e^{-ct}`.
    pub grid_decay: f64,
    pub bootstrap_reps: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for GofConfig {
    fn default() -> Self {
        Self {
            n: 2,
            w: 2.0,
            grid_points: 64,
            grid_decay: 1.0,
            bootstrap_reps: 999,
            level: 0.05,
            seed: rng::DEFAULT_SEED,
        }
    }
}

impl GofConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("gof: n must be >= 1"));
        }
        if !(self.w > 0.0 && self.w.is_finite()) || self.w == 1.0 {
            return Err(invalid(format!(
                "gof: w = {} must be positive and != 1",
                self.w
            )));
        }
        if self.grid_points == 0 {
            return Err(invalid("gof: grid_points must be >= 1"));
        }
        if !(self.grid_decay > 0.0 && self.grid_decay.is_finite()) {
            return Err(invalid("gof: grid_decay must be positive"));
        }
        if self.bootstrap_reps < 99 {
            return Err(invalid(format!(
                "gof: bootstrap_reps = {} must be >= 99",
                self.bootstrap_reps
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(invalid(format!(
                "gof: level = {} must lie in (0, 1)",
                self.level
            )));
        }
        Ok(())
    }

    fn step(&self) -> f64 {
        T_MAX / self.grid_points as f64
    }

    /// Grid nodes `t_g = g Δt`, `g = 1..=grid_points`.
    pub fn grid(&self) -> Vec<f64> {
        let dt = self.step();
        (1..=self.grid_points).map(|g| g as f64 * dt).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofResult {
    pub statistic: f64,
    pub p_value: f64,
    pub lambda_hat: f64,
    pub reject: bool,
    #[serde(skip)]
    pub replicates: Vec<f64>,
}

/// `(1/N) Σ e^{-t x_i}`.
pub fn empirical_laplace(data: &SampleBatch, t: f64) -> Result<f64> {
    crate::dist::check_t(t)?;
    Ok(data.values().iter().map(|&x| (-t * x).exp()).sum::<f64>() / data.len() as f64)
}

/// Difference of the two sides of the characterizing identity given
/// `Φ(t)` and `Φ(wt)`.
pub fn identity_residual(phi_t: f64, phi_wt: f64, n: u32, w: f64) -> f64 {
    let ratio = (w - 1.0) / w;
    let lhs = (w - 1.0) * ratio.powi(n as i32) * phi_wt * phi_t.powi(n as i32);
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..n {
        term *= ratio * phi_t;
        sum += term;
    }
    lhs - (w - 1.0) * phi_wt + sum
}

/// Empirical transform of `y` at `g Δt`, `g = 1..=points`, using powers of
/// `e^{-Δt y_i}`.
fn transform_on_grid(y: &[f64], step: f64, points: usize) -> Vec<f64> {
    let mut acc = vec![0.0; points];
    for &yi in y {
        let base = (-step * yi).exp();
        let mut p = 1.0;
        for slot in acc.iter_mut() {
            p *= base;
            *slot += p;
        }
    }
    let inv = 1.0 / y.len() as f64;
    acc.iter_mut().for_each(|v| *v *= inv);
    acc
}

fn rescaled(values: &[f64]) -> Result<(Vec<f64>, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyData);
    }
    if let Some(i) = values.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!(
            "observation {i} = {} must be positive and finite",
            values[i]
        )));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let lambda_hat = 1.0 / mean;
    Ok((values.iter().map(|&x| x * lambda_hat).collect(), lambda_hat))
}

/// Residuals `D(t_g)` on the grid for already rescaled observations.
fn grid_residuals(y: &[f64], cfg: &GofConfig) -> Vec<f64> {
    let step = cfg.step();
    let phi = transform_on_grid(y, step, cfg.grid_points);
    let phi_w = transform_on_grid(y, step * cfg.w, cfg.grid_points);
    phi.iter()
        .zip(&phi_w)
        .map(|(&p, &pw)| identity_residual(p, pw, cfg.n, cfg.w))
        .collect()
}

fn weighted_sum(residuals: &[f64], n_obs: usize, cfg: &GofConfig) -> f64 {
    let step = cfg.step();
    let s: f64 = residuals
        .iter()
        .enumerate()
        .map(|(g, d)| d * d * (-cfg.grid_decay * (g + 1) as f64 * step).exp())
        .sum();
    n_obs as f64 * s * step
}

fn statistic_of(values: &[f64], cfg: &GofConfig) -> Result<(f64, f64)> {
    let (y, lambda_hat) = rescaled(values)?;
    let d = grid_residuals(&y, cfg);
    Ok((weighted_sum(&d, y.len(), cfg), lambda_hat))
}

/// Test statistic `T` and the rate estimate `1/mean`.
pub fn gof_statistic(data: &SampleBatch, cfg: &GofConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    statistic_of(data.values(), cfg)
}

/// `T` computed from an arbitrary transform `phi` in place of the empirical one.
pub fn statistic_from_transform(phi: impl Fn(f64) -> f64, n_obs: usize, cfg: &GofConfig) -> f64 {
    let d: Vec<f64> = cfg
        .grid()
        .iter()
        .map(|&t| identity_residual(phi(t), phi(cfg.w * t), cfg.n, cfg.w))
        .collect();
    weighted_sum(&d, n_obs, cfg)
}

/// `(t_g, D(t_g))` for plotting.
pub fn residual_profile(data: &SampleBatch, cfg: &GofConfig) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    let (y, _) = rescaled(data.values())?;
    Ok(cfg
        .grid()
        .into_iter()
        .zip(grid_residuals(&y, cfg))
        .collect())
}

/// Bootstrap null statistics: replicate `b` draws `size` standard
/// exponentials from stream `(seed, "gof-bootstrap", b)`.
pub fn null_replicates(size: usize, cfg: &GofConfig) -> Vec<f64> {
    (0..cfg.bootstrap_reps)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng::stream(cfg.seed, "gof-bootstrap", b as u64);
            let draws: Vec<f64> = (0..size).map(|_| exp_variate(&mut rng, 1.0)).collect();
            statistic_of(&draws, cfg)
                .map(|(t, _)| t)
                .unwrap_or(f64::NAN)
        })
        .collect()
}

/// `(1 + #{T_b ≥ T}) / (B + 1)`.
pub fn bootstrap_p_value(statistic: f64, replicates: &[f64]) -> f64 {
    let exceed = replicates.iter().filter(|&&t| t >= statistic).count();
    (1 + exceed) as f64 / (replicates.len() + 1) as f64
}

pub fn gof_test(data: &SampleBatch, cfg: &GofConfig) -> Result<GofResult> {
    let (statistic, lambda_hat) = gof_statistic(data, cfg)?;
    let replicates = null_replicates(data.len(), cfg);
    let p_value = bootstrap_p_value(statistic, &replicates);
    Ok(GofResult {
        statistic,
        p_value,
        lambda_hat,
        reject: p_value <= cfg.level,
        replicates,
    })
}
