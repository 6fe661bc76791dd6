//! Scalar abstraction shared by the linear solver and the hitting engines.
//!
//! The exact path uses [`BigRational`]; `f64`/`f32` are supported for quick
//! floating-point estimates of the same systems.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::linalg::{self, Matrix};

/// A field element usable by [`crate::linalg`] and [`crate::hitting`].
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    /// `true` when arithmetic on this type is exact.
    const EXACT: bool;

    /// Whether a pivot candidate must be treated as zero.
    fn is_negligible(&self) -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("finite integer") / Self::from_i64(den).expect("finite integer")
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("finite integer")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Text rendering used in JSON output: `"p/q"` (or `"p"`) for rationals.
    fn render(&self) -> String;

    /// Solves `a · x = b` for an integer system.
    fn solve_integer(a: &Matrix<i64>, b: &[i64]) -> Result<Vec<Self>> {
        let a = a.map(|&v| Self::from_i64(v).expect("finite integer"));
        let b: Vec<Self> = b
            .iter()
            .map(|&v| Self::from_i64(v).expect("finite integer"))
            .collect();
        linalg::solve(&a, &b)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn render(&self) -> String {
        render_rational(self)
    }

    fn solve_integer(a: &Matrix<i64>, b: &[i64]) -> Result<Vec<Self>> {
        linalg::solve_fraction_free(a, b)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-6
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

/// `"p/q"` in lowest terms, or `"p"` when the denominator is one.
pub fn render_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str_radix(n.trim(), 10).ok()?;
            let d = BigInt::from_str_radix(d.trim(), 10).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(
            BigInt::from_str_radix(s, 10).ok()?,
        )),
    }
}

/// Shorthand for an exact `num/den` value.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rendering_is_reduced() {
        assert_eq!(ratio(152, 10).render(), "76/5");
        assert_eq!(ratio(-12, 1).render(), "-12");
        assert_eq!(ratio(6, -4).render(), "-3/2");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["0", "12", "76/5", "-888/7"] {
            assert_eq!(parse_rational(s).unwrap().render(), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn from_ratio_agrees_across_scalars() {
        let exact = <BigRational as Scalar>::from_ratio(7, 4);
        let float = <f64 as Scalar>::from_ratio(7, 4);
        assert_eq!(exact.to_f64_lossy(), float);
    }
}
