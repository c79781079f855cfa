//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! carrying about 106 bits of significand. Error-free transformations
//! (two-sum, fused-multiply-add two-product) give each operation a relative
//! error near `2^-104`.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl From<DoubleDouble> for f64 {
    fn from(x: DoubleDouble) -> f64 {
        x.to_f64()
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Self::from(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from(q3)
    }
}

macro_rules! mixed_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for DoubleDouble {
            type Output = Self;
            fn $f(self, rhs: f64) -> Self {
                $tr::$f(self, Self::from(rhs))
            }
        }
        impl $tr<DoubleDouble> for f64 {
            type Output = DoubleDouble;
            fn $f(self, rhs: DoubleDouble) -> DoubleDouble {
                $tr::$f(DoubleDouble::from(self), rhs)
            }
        }
    )*};
}

mixed_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{FromPrimitive, Signed, ToPrimitive};
    use proptest::prelude::*;

    fn exact(x: DoubleDouble) -> BigRational {
        BigRational::from_f64(x.hi).unwrap() + BigRational::from_f64(x.lo).unwrap()
    }

    fn rel_err(got: DoubleDouble, want: &BigRational) -> f64 {
        let diff = (exact(got) - want).abs();
        let scale = want.abs().to_f64().unwrap().max(1e-300);
        diff.to_f64().unwrap() / scale
    }

    #[test]
    fn third() {
        let third = DoubleDouble::ONE / 3.0;
        assert!((third * 3.0 - 1.0).abs().to_f64() < 1e-31);
        assert!(third.lo() != 0.0);
    }

    proptest! {
        #[test]
        fn ops_match_exact_rationals(a in -1e3f64..1e3, b in 0.01f64..1e3, c in -1e3f64..1e3) {
            let (ea, eb, ec) = (
                BigRational::from_f64(a).unwrap(),
                BigRational::from_f64(b).unwrap(),
                BigRational::from_f64(c).unwrap(),
            );
            let x = DoubleDouble::from(a) / b;
            prop_assert!(rel_err(x, &(&ea / &eb)) < 1e-30);
            let y = x * c + b;
            prop_assert!(rel_err(y, &(&ea / &eb * &ec + &eb)) < 1e-29);
            let z = (y - x).powi(3);
            let ez = {
                let d = &ea / &eb * &ec + &eb - &ea / &eb;
                &d * &d * &d
            };
            prop_assert!(rel_err(z, &ez) < 1e-28);
        }
    }
}
