//! Parameter sweeps over every identity family, summarized as a report.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::analytic::{
    decomposition_residual, functional_eq_residual, lemma1_residual, scaled_identity_residual,
    ExponentialPsi,
};
use super::exact::{
    binomial, brackets, lemma2_i, lemma2_ii, lemma2_ii_closed_form, lemma2_remark,
    lemma2_remark_corrected, rational, v_from_w, RationalScalar,
};
use super::series::{exponential_moments, psi_coeffs_from_moments};
use crate::error::Result;
use crate::rng;

/// Multipliers used by the floating-point sweeps.
pub const FLOAT_MULTIPLIERS: [f64; 6] = [0.1, 0.5, 1.5, 2.0, 5.0, 10.0];
pub const FLOAT_RATES: [f64; 3] = [0.5, 1.0, 3.0];
pub const T_GRID_POINTS: usize = 100;
pub const LEMMA1_TOL: f64 = 1e-12;
pub const SCALED_TOL: f64 = 1e-12;
pub const DECOMPOSITION_TOL: f64 = 1e-14;
pub const FUNCTIONAL_EQ_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Upper bound on `n` in the exact binomial sweeps; the other sweeps
    /// use `min(max_n, 15)` (shifted identity), `min(max_n, 20)` (brackets)
    /// and `min(max_n, 10)` (floating point).
    pub max_n: u32,
    /// Largest shift `m` in the generalized identity.
    pub max_m: u32,
    /// Number of random rationals `v` (numerator and denominator up to 10^6).
    pub random_v: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_n: 30,
            max_m: 10,
            random_v: 40,
            seed: rng::DEFAULT_SEED,
        }
    }
}

impl VerifyConfig {
    /// A fast sweep for smoke tests.
    pub fn quick() -> Self {
        Self {
            max_n: 8,
            max_m: 3,
            random_v: 5,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: &'static str,
    pub sweep: String,
    pub exact: bool,
    pub checks: u64,
    pub failures: u64,
    /// Largest residual seen (floating-point families only).
    pub worst_residual: Option<f64>,
    /// Parameter points where `v^n = 1` and the `a_j` bracket vanishes.
    pub boundary_cases: Vec<String>,
    /// Free-form remarks about the sweep.
    pub notes: Vec<String>,
}

impl FamilyReport {
    fn new(family: &'static str, sweep: String, exact: bool) -> Self {
        Self {
            family,
            sweep,
            exact,
            checks: 0,
            failures: 0,
            worst_residual: None,
            boundary_cases: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn record_residual(&mut self, r: f64, tol: f64) {
        self.worst_residual = Some(self.worst_residual.map_or(r, |w| w.max(r)));
        self.record(r <= tol);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub families: Vec<FamilyReport>,
}

impl VerifyReport {
    pub fn total_failures(&self) -> u64 {
        self.families.iter().map(|f| f.failures).sum()
    }

    pub fn family(&self, name: &str) -> Option<&FamilyReport> {
        self.families.iter().find(|f| f.family == name)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "identity verification: max_n={} max_m={} random_v={} seed={}",
            self.config.max_n, self.config.max_m, self.config.random_v, self.config.seed
        )?;
        for fam in &self.families {
            write!(
                f,
                "{:<16} {:<5} checks={:<7} failures={:<4} ",
                fam.family,
                if fam.exact { "exact" } else { "float" },
                fam.checks,
                fam.failures
            )?;
            if let Some(r) = fam.worst_residual {
                write!(f, "worst_residual={r:.3e} ")?;
            }
            writeln!(f, "sweep: {}", fam.sweep)?;
            if !fam.boundary_cases.is_empty() {
                let shown: Vec<&str> = fam
                    .boundary_cases
                    .iter()
                    .take(3)
                    .map(String::as_str)
                    .collect();
                writeln!(
                    f,
                    "    boundary v^n=1: {} cases ({}{})",
                    fam.boundary_cases.len(),
                    shown.join("; "),
                    if fam.boundary_cases.len() > 3 {
                        "; ..."
                    } else {
                        ""
                    }
                )?;
            }
            for note in &fam.notes {
                writeln!(f, "    note: {note}")?;
            }
        }
        write!(f, "total failures: {}", self.total_failures())
    }
}

/// Random rationals `p/q`, `|p| ≤ 10^6`, `1 ≤ q ≤ 10^6`, excluding 0 and 1.
pub fn random_rationals(count: usize, seed: u64) -> Vec<RationalScalar> {
    let mut rng = rng::stream(seed, "verify-rationals", 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let q: i64 = rng.gen_range(1..=1_000_000);
        let v = rational(p, q);
        if !v.is_zero() && !v.is_one() {
            out.push(v);
        }
    }
    out
}

/// Multipliers `w ∈ {1/5, 1/2, 3/2, 2, 5}` for the bracket sweep.
pub fn bracket_multipliers() -> Vec<RationalScalar> {
    vec![
        rational(1, 5),
        rational(1, 2),
        rational(3, 2),
        rational(2, 1),
        rational(5, 1),
    ]
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let vs = random_rationals(cfg.random_v, cfg.seed);
    let mut families = vec![
        sweep_lemma2_i(cfg, &vs)?,
        sweep_lemma2_ii(cfg, &vs)?,
        sweep_remark(cfg, &vs)?,
        sweep_brackets(cfg, &vs)?,
    ];
    families.extend(sweep_float(cfg)?);
    families.push(sweep_series()?);
    Ok(VerifyReport {
        config: cfg.clone(),
        families,
    })
}

fn sweep_lemma2_i(cfg: &VerifyConfig, vs: &[RationalScalar]) -> Result<FamilyReport> {
    let mut rep = FamilyReport::new(
        "lemma2_i",
        format!("1<=j<=n<={}, {} random v", cfg.max_n, vs.len()),
        true,
    );
    for v in vs {
        for n in 1..=cfg.max_n {
            for j in 1..=n {
                rep.record(lemma2_i(n, j, v)?.is_zero());
            }
        }
    }
    Ok(rep)
}

fn sweep_lemma2_ii(cfg: &VerifyConfig, vs: &[RationalScalar]) -> Result<FamilyReport> {
    let mut rep = FamilyReport::new(
        "lemma2_ii",
        format!(
            "2<=j<=n<={}, {} random v; equals closed form, nonzero when v^n!=1",
            cfg.max_n,
            vs.len()
        ),
        true,
    );
    for v in vs {
        for n in 1..=cfg.max_n {
            let root_of_unity = num_traits::Pow::pow(v, n).is_one();
            for j in 2..=n.max(2) {
                let value = lemma2_ii(n, j, v)?;
                let closed = lemma2_ii_closed_form(n, j, v)?;
                let ok = value == closed && (root_of_unity || !value.is_zero());
                rep.record(ok);
                if root_of_unity {
                    rep.boundary_cases.push(format!("n={n} j={j} v={v}"));
                }
            }
        }
    }
    Ok(rep)
}

fn sweep_remark(cfg: &VerifyConfig, vs: &[RationalScalar]) -> Result<FamilyReport> {
    let max_n = cfg.max_n.min(15);
    let mut rep = FamilyReport::new(
        "lemma2_remark",
        format!(
            "n<={max_n}, m<={}, 1<=j<=n+m, {} random v; rhs C(n+m,j)v^n - C(m,j)",
            cfg.max_m,
            vs.len()
        ),
        true,
    );
    let mut offset_points = 0u64;
    for v in vs {
        for n in 1..=max_n {
            for m in 0..=cfg.max_m {
                for j in 1..=n + m {
                    let corrected = lemma2_remark_corrected(n, m, j, v)?;
                    let uncorrected = lemma2_remark(n, m, j, v)?;
                    let offset = RationalScalar::from_integer(binomial(i64::from(m), i64::from(j)));
                    if !offset.is_zero() {
                        offset_points += 1;
                    }
                    rep.record(corrected.is_zero() && uncorrected == -offset);
                }
            }
        }
    }
    if offset_points > 0 {
        rep.notes.push(format!(
            "without the -C(m,j) term the identity fails at {offset_points} points (all with 1<=j<=m); \
             the residual there is exactly -C(m,j)"
        ));
    }
    Ok(rep)
}

fn sweep_brackets(cfg: &VerifyConfig, vs: &[RationalScalar]) -> Result<FamilyReport> {
    let max_n = cfg.max_n.min(20);
    let mut rep = FamilyReport::new(
        "brackets",
        format!(
            "2<=n<={max_n}, 2<=j<=n+2, v=w/(w-1) for w in {{1/5,1/2,3/2,2,5}} and {} random v",
            vs.len()
        ),
        true,
    );
    let mut points: Vec<RationalScalar> = bracket_multipliers()
        .iter()
        .map(v_from_w)
        .collect::<Result<_>>()?;
    points.extend(vs.iter().cloned());
    for v in &points {
        for n in 2..=max_n {
            for j in 2..=n + 2 {
                let b = brackets(n, j, v)?;
                if b.is_root_of_unity_case() {
                    // The a_j bracket factors as (v^n - 1)(...), so it must vanish here.
                    rep.record(b.a1_bracket.is_zero() && b.aj_bracket.is_zero());
                    rep.boundary_cases.push(format!("n={n} j={j} v={v}"));
                } else {
                    rep.record(b.a1_bracket.is_zero() && !b.aj_bracket.is_zero());
                }
            }
        }
    }
    Ok(rep)
}

/// `t_i = i · t_max / (points - 1)`, `i = 0..points`.
pub fn t_grid(t_max: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| t_max * i as f64 / (points - 1) as f64)
}

fn sweep_float(cfg: &VerifyConfig) -> Result<Vec<FamilyReport>> {
    let max_n = cfg.max_n.min(10);
    let sweep = format!(
        "n<={max_n}, w in {FLOAT_MULTIPLIERS:?}, lambda in {FLOAT_RATES:?}, {T_GRID_POINTS}-point t-grid on [0, 10 lambda]"
    );
    let mut lemma1 = FamilyReport::new("lemma1", sweep.clone(), false);
    let mut scaled = FamilyReport::new("scaled_identity", sweep.clone(), false);
    let mut functional = FamilyReport::new("functional_eq", sweep.clone(), false);
    let mut decomposition = FamilyReport::new(
        "decomposition",
        format!("w in {FLOAT_MULTIPLIERS:?}, {T_GRID_POINTS}-point t-grid on [0, 30]"),
        false,
    );
    for &w in &FLOAT_MULTIPLIERS {
        for t in t_grid(30.0, T_GRID_POINTS) {
            decomposition.record_residual(decomposition_residual(w, t)?, DECOMPOSITION_TOL);
        }
        for &lambda in &FLOAT_RATES {
            let psi = ExponentialPsi { lambda };
            for n in 1..=max_n {
                for t in t_grid(10.0 * lambda, T_GRID_POINTS) {
                    lemma1.record_residual(lemma1_residual(n, w, lambda, t)?, LEMMA1_TOL);
                    scaled.record_residual(scaled_identity_residual(n, w, lambda, t)?, SCALED_TOL);
                    functional
                        .record_residual(functional_eq_residual(n, w, &psi, t)?, FUNCTIONAL_EQ_TOL);
                }
            }
        }
    }
    Ok(vec![lemma1, decomposition, scaled, functional])
}

fn sweep_series() -> Result<FamilyReport> {
    let mut rep = FamilyReport::new(
        "psi_series",
        format!("exponential moments, lambda in {FLOAT_RATES:?}, a_0..a_8"),
        false,
    );
    for &lambda in &FLOAT_RATES {
        let s = psi_coeffs_from_moments(&exponential_moments(lambda, 8), 8)?;
        rep.record_residual((s.coeffs[0] - 1.0).abs(), 1e-12);
        rep.record_residual((s.coeffs[1] - 1.0 / lambda).abs(), 1e-12);
        for a in &s.coeffs[2..] {
            rep.record_residual(a.abs(), 1e-10);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_sweep_has_no_failures() {
        let rep = run_verify(&VerifyConfig::quick()).unwrap();
        assert_eq!(rep.total_failures(), 0, "{rep}");
        let b = rep.family("brackets").unwrap();
        // w = 1/2 gives v = -1, degenerate for every even n.
        assert!(b
            .boundary_cases
            .iter()
            .any(|c| c.starts_with("n=2 j=2 v=-1")));
        let text = rep.to_string();
        assert!(text.contains("total failures: 0"));
    }

    #[test]
    fn random_rationals_exclude_zero_and_one() {
        let vs = random_rationals(200, 5);
        assert_eq!(vs.len(), 200);
        assert!(vs.iter().all(|v| !v.is_zero() && !v.is_one()));
        assert_eq!(vs, random_rationals(200, 5));
    }
}
