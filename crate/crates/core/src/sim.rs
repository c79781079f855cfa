//! Sequential stage chains and their absorption times.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{
    check_rate, exp_variate, Dist, EmeParams, ErlangParams, ExpParams, Law, ParamRecord,
    RateVector, DELTA_REL,
};
use crate::error::{invalid, Result};
use crate::rng;
use crate::sample::SampleBatch;

/// Transient stages visited in order, each left at its own rate, followed by
/// an absorbing state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageChain {
    stage_rates: Vec<f64>,
}

impl StageChain {
    pub fn new(stage_rates: Vec<f64>) -> Result<Self> {
        if stage_rates.is_empty() {
            return Err(invalid("stage chain needs at least one stage"));
        }
        for &r in &stage_rates {
            check_rate("stage rate", r)?;
        }
        Ok(Self { stage_rates })
    }

    pub fn stage_rates(&self) -> &[f64] {
        &self.stage_rates
    }

    pub fn len(&self) -> usize {
        self.stage_rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stage_rates.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.stage_rates.iter().map(|r| 1.0 / r).sum()
    }

    pub fn variance(&self) -> f64 {
        self.stage_rates.iter().map(|r| 1.0 / (r * r)).sum()
    }

    /// Closed-form law of the absorption time, when the rate pattern has one.
    ///
    /// Handles a single stage, all-equal rates, all rates equal but one, and
    /// pairwise distinct rates. Other patterns give an error.
    pub fn absorption_law(&self) -> Result<Dist> {
        let rates = &self.stage_rates;
        let close = |a: f64, b: f64| (a - b).abs() <= DELTA_REL * a.max(b);
        if rates.len() == 1 {
            return Ok(Dist::Exp(ExpParams::new(rates[0])?));
        }
        if rates.iter().all(|&r| close(r, rates[0])) {
            return Ok(Dist::Erlang(ErlangParams::new(
                rates.len() as u32,
                rates[0],
            )?));
        }
        let k = rates.len();
        for odd in (0..k).rev() {
            let base = rates[if odd == 0 { 1 } else { 0 }];
            let rest_equal = rates
                .iter()
                .enumerate()
                .all(|(i, &r)| i == odd || close(r, base));
            if rest_equal && k > 2 {
                return Ok(Dist::Eme(EmeParams::new(
                    (k - 1) as u32,
                    base,
                    base / rates[odd],
                )?));
            }
        }
        if k == 2 {
            return Ok(Dist::Eme(EmeParams::new(1, rates[0], rates[0] / rates[1])?));
        }
        RateVector::new(rates.clone())
            .map(Dist::Hypo)
            .map_err(|_| invalid(format!("no closed-form law for stage rates {rates:?}")))
    }
}

/// Chain `[λ1 × k, λ2]`; its absorption time is EME with `n = k`,
/// `λ = λ1`, `w = λ1/λ2`.
pub fn eme_chain(k: u32, lambda1: f64, lambda2: f64) -> Result<StageChain> {
    if k == 0 {
        return Err(invalid("eme_chain: k must be >= 1"));
    }
    check_rate("lambda1", lambda1)?;
    check_rate("lambda2", lambda2)?;
    let mut rates = vec![lambda1; k as usize];
    rates.push(lambda2);
    StageChain::new(rates)
}

fn absorption_time<R: Rng + ?Sized>(chain: &StageChain, rng: &mut R) -> f64 {
    chain.stage_rates.iter().map(|&r| exp_variate(rng, r)).sum()
}

/// Draws `count` absorption times from a single generator.
pub fn simulate_absorption<R: Rng + ?Sized>(
    chain: &StageChain,
    count: usize,
    rng: &mut R,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(invalid("simulate: count must be >= 1"));
    }
    let times = (0..count).map(|_| absorption_time(chain, rng)).collect();
    SampleBatch::new(times, "absorption")
}

/// Parallel variant: block `b` of `block` draws uses stream `(seed, "sim", b)`.
pub fn simulate_absorption_par(
    chain: &StageChain,
    count: usize,
    seed: u64,
    block: usize,
) -> Result<SampleBatch> {
    if count == 0 || block == 0 {
        return Err(invalid("simulate: count and block must be >= 1"));
    }
    let blocks = count.div_ceil(block);
    let times: Vec<f64> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = rng::stream(seed, "sim", b as u64);
            let len = block.min(count - b * block);
            (0..len)
                .map(|_| absorption_time(chain, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect();
    SampleBatch::new(times, "absorption")
}

/// `sup_x |F_N(x) - F(x)|`, checked on both sides of every sample point.
pub fn ks_distance(values: &[f64], cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Asymptotic 1% Kolmogorov-Smirnov critical value.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    #[serde(skip)]
    pub times: SampleBatch,
    pub count: usize,
    pub ks_distance: f64,
    pub critical_value: f64,
    pub reference: ParamRecord,
    pub passed: bool,
}

pub fn validate_against(times: SampleBatch, dist: &Dist) -> Result<SimResult> {
    let ks = ks_distance(times.values(), |x| dist.cdf(x))?;
    let critical = ks_critical_1pct(times.len());
    Ok(SimResult {
        count: times.len(),
        times,
        ks_distance: ks,
        critical_value: critical,
        reference: dist.to_record(),
        passed: ks < critical,
    })
}
