//! Exact rational evaluation of the combinatorial identities behind the
//! uniqueness argument: the binomial-sum identity, its shifted
//! generalization, the non-vanishing lemma, and the two coefficient
//! brackets that multiply `a_1^j` and `a_j`.
//!
//! Binomials follow the convention `C(k, m) = 0` for `m < 0` or `m > k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};

/// Exact rational in lowest terms with a positive denominator.
pub type RationalScalar = BigRational;

pub fn rational(numer: i64, denom: i64) -> RationalScalar {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `C(k, m)`, zero outside `0 ≤ m ≤ k`.
pub fn binomial(k: i64, m: i64) -> BigInt {
    if m < 0 || k < 0 || m > k {
        return BigInt::zero();
    }
    let m = m.min(k - m);
    let mut acc = BigInt::one();
    for i in 0..m {
        acc = acc * BigInt::from(k - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Σ_{k<len} c_k v^k` with integer coefficients, evaluated over a common
/// denominator so only one reduction is needed.
fn poly(coeffs: &[BigInt], v: &RationalScalar) -> RationalScalar {
    if coeffs.is_empty() {
        return RationalScalar::zero();
    }
    let deg = coeffs.len() - 1;
    let (p, q) = (v.numer(), v.denom());
    let mut p_pow = BigInt::one();
    let mut q_pows = Vec::with_capacity(deg + 1);
    q_pows.push(BigInt::one());
    for i in 0..deg {
        let next = &q_pows[i] * q;
        q_pows.push(next);
    }
    let mut acc = BigInt::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc += c * &p_pow * &q_pows[deg - k];
        }
        p_pow *= p;
    }
    BigRational::new(acc, q_pows[deg].clone())
}

fn pow(v: &RationalScalar, e: u32) -> RationalScalar {
    Pow::pow(v, e)
}

/// Σ_{k<n} C(k + shift, m) v^k
fn binomial_sum(n: u32, shift: u32, m: i64, v: &RationalScalar) -> RationalScalar {
    let coeffs: Vec<BigInt> = (0..i64::from(n))
        .map(|k| binomial(k + i64::from(shift), m))
        .collect();
    poly(&coeffs, v)
}

fn geometric_sums(n: u32, v: &RationalScalar) -> (RationalScalar, RationalScalar) {
    let ones = vec![BigInt::one(); n as usize];
    let ks: Vec<BigInt> = (0..n).map(BigInt::from).collect();
    (poly(&ones, v), poly(&ks, v))
}

fn check_v(v: &RationalScalar, allow_zero: bool) -> Result<()> {
    if v.is_one() {
        return Err(invalid("v = 1 is excluded"));
    }
    if !allow_zero && v.is_zero() {
        return Err(invalid("v = 0 is excluded"));
    }
    Ok(())
}

/// `v = w/(w-1)` for a rational multiplier `w > 0`, `w ≠ 1`.
pub fn v_from_w(w: &RationalScalar) -> Result<RationalScalar> {
    if !w.is_positive() || w.is_one() {
        return Err(invalid(format!(
            "w = {w} must be positive and different from 1"
        )));
    }
    Ok(w / (w - RationalScalar::one()))
}

/// Residual of the binomial-sum identity
/// `v Σ_{k<n} C(k, j-1) v^k + (v-1) Σ_{k<n} C(k, j) v^k = C(n, j) v^n`.
/// Zero for every `n ≥ 1`, `j ≥ 1`, `v ≠ 1`.
pub fn lemma2_i(n: u32, j: u32, v: &RationalScalar) -> Result<RationalScalar> {
    lemma2_remark(n, 0, j, v)
}

/// Integer coefficients of `v Σ_{k<n} C(k+m, j-1) v^k + (v-1) Σ_{k<n} C(k+m, j) v^k`
/// as a polynomial of degree `n` in `v`.
fn shifted_lhs_coeffs(n: u32, m: u32, j: u32, v: &RationalScalar) -> Result<Vec<BigInt>> {
    if n == 0 || j == 0 {
        return Err(invalid("n and j must be >= 1"));
    }
    check_v(v, true)?;
    let (j, m) = (i64::from(j), i64::from(m));
    let c1 = |k: i64| {
        if k < 0 || k >= i64::from(n) {
            BigInt::zero()
        } else {
            binomial(k + m, j - 1)
        }
    };
    let c2 = |k: i64| {
        if k < 0 || k >= i64::from(n) {
            BigInt::zero()
        } else {
            binomial(k + m, j)
        }
    };
    Ok((0..=i64::from(n))
        .map(|k| c1(k - 1) + c2(k - 1) - c2(k))
        .collect())
}

/// Residual `lhs - C(n+m, j) v^n` of the shifted identity in its usual
/// statement
/// `v Σ_{k<n} C(k+m, j-1) v^k + (v-1) Σ_{k<n} C(k+m, j) v^k = C(n+m, j) v^n`.
///
/// The sum telescopes to `C(n+m, j) v^n - C(m, j)`, so this residual is
/// exactly `-C(m, j)`: zero when `j > m` (in particular for `m = 0`), but
/// not for `1 ≤ j ≤ m`. [`lemma2_remark_corrected`] includes the constant.
pub fn lemma2_remark(n: u32, m: u32, j: u32, v: &RationalScalar) -> Result<RationalScalar> {
    let mut coeffs = shifted_lhs_coeffs(n, m, j, v)?;
    coeffs[n as usize] -= binomial(i64::from(n + m), i64::from(j));
    Ok(poly(&coeffs, v))
}

/// Residual of the telescoped identity
/// `v Σ C(k+m, j-1) v^k + (v-1) Σ C(k+m, j) v^k = C(n+m, j) v^n - C(m, j)`,
/// exactly zero for all `n ≥ 1`, `m ≥ 0`, `j ≥ 1`, `v ≠ 1`.
pub fn lemma2_remark_corrected(
    n: u32,
    m: u32,
    j: u32,
    v: &RationalScalar,
) -> Result<RationalScalar> {
    let mut coeffs = shifted_lhs_coeffs(n, m, j, v)?;
    coeffs[n as usize] -= binomial(i64::from(n + m), i64::from(j));
    coeffs[0] += binomial(i64::from(m), i64::from(j));
    Ok(poly(&coeffs, v))
}

/// `(v/(v-1))^{j-1} v Σ_{k<n} v^k + (v-1) Σ_{k<n} k v^k - n v^n`; nonzero
/// whenever `v^n ≠ 1`.
pub fn lemma2_ii(n: u32, j: u32, v: &RationalScalar) -> Result<RationalScalar> {
    if n == 0 || j < 2 {
        return Err(invalid("need n >= 1 and j >= 2"));
    }
    check_v(v, false)?;
    let one = RationalScalar::one();
    let ratio = v / (v - &one);
    let (geo, weighted) = geometric_sums(n, v);
    Ok(pow(&ratio, j - 1) * v * geo + (v - &one) * weighted
        - RationalScalar::from_integer(BigInt::from(n)) * pow(v, n))
}

/// `[(v/(v-1))^j - v/(v-1)] (v^n - 1)`, the factored form of [`lemma2_ii`].
pub fn lemma2_ii_closed_form(n: u32, j: u32, v: &RationalScalar) -> Result<RationalScalar> {
    if n == 0 || j < 2 {
        return Err(invalid("need n >= 1 and j >= 2"));
    }
    check_v(v, false)?;
    let one = RationalScalar::one();
    let ratio = v / (v - &one);
    Ok((pow(&ratio, j) - &ratio) * (pow(v, n) - one))
}

/// Coefficients of `a_1^j` and `a_j` in the `j`-th Taylor coefficient of the
/// functional equation, assuming `a_2 = … = a_{j-1} = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketPair {
    pub n: u32,
    pub j: u32,
    #[serde(serialize_with = "ser_rational")]
    pub v: RationalScalar,
    /// `C(n,j) v^n - v Σ C(k,j-1) v^k - (v-1) Σ C(k,j) v^k`; always zero.
    #[serde(serialize_with = "ser_rational")]
    pub a1_bracket: RationalScalar,
    /// `n v^n - (v/(v-1))^{j-1} v Σ v^k - (v-1) Σ k v^k`; zero only if `v^n = 1`.
    #[serde(serialize_with = "ser_rational")]
    pub aj_bracket: RationalScalar,
}

impl BracketPair {
    /// `v^n = 1`, where the `a_j` bracket vanishes (`v = -1`, `n` even,
    /// i.e. `w = 1/2`).
    pub fn is_root_of_unity_case(&self) -> bool {
        pow(&self.v, self.n).is_one()
    }
}

fn ser_rational<S: serde::Serializer>(
    r: &RationalScalar,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn brackets(n: u32, j: u32, v: &RationalScalar) -> Result<BracketPair> {
    if n < 2 || j < 2 {
        return Err(invalid("brackets need n >= 2 and j >= 2"));
    }
    check_v(v, false)?;
    let one = RationalScalar::one();
    let ji = i64::from(j);
    let a1_bracket = RationalScalar::from_integer(binomial(i64::from(n), ji)) * pow(v, n)
        - v * binomial_sum(n, 0, ji - 1, v)
        - (v - &one) * binomial_sum(n, 0, ji, v);
    let ratio = v / (v - &one);
    let (geo, weighted) = geometric_sums(n, v);
    let aj_bracket = RationalScalar::from_integer(BigInt::from(n)) * pow(v, n)
        - pow(&ratio, j - 1) * v * geo
        - (v - &one) * weighted;
    Ok(BracketPair {
        n,
        j,
        v: v.clone(),
        a1_bracket,
        aj_bracket,
    })
}
