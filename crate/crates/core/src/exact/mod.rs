//! Exact integers, rationals, dense matrices and lattices.

mod hnf;
mod lattice;
mod matrix;
mod points;
mod reduce;

pub use hnf::{hnf, HermiteForm};
pub use lattice::Lattice;
pub use matrix::{bareiss_determinant, ExactMatrix};
pub use points::enumerate_triangular;
pub use reduce::{enumerate_ball, lll_reduce};

pub use num_bigint::BigInt;
pub use num_rational::BigRational as BigRat;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_int(v: &BigInt) -> BigRat {
    BigRat::from_integer(v.clone())
}

pub fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::Overflow(v.to_string()))
}

pub fn vec_to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(to_i64).collect()
}

/// Integer value of a rational that must be integral.
pub fn rat_to_int(v: &BigRat) -> Result<BigInt> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::InvalidInput(format!("{v} is not an integer")))
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a BigRat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn gcd_of(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray (sign preserved).
pub fn primitive_integer_vector(v: &[BigRat]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRat::from_integer(l.clone())).to_integer())
        .collect();
    let g = gcd_of(&ints);
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Largest power of two (possibly negative exponent) that is `<= bound`.
/// `bound` must be positive.
pub fn dyadic_floor(bound: &BigRat) -> BigRat {
    assert!(bound.is_positive(), "dyadic_floor needs a positive bound");
    let two = rat(2, 1);
    let mut p = BigRat::one();
    if &p <= bound {
        while &(&p * &two) <= bound {
            p = &p * &two;
        }
    } else {
        while &p > bound {
            p = &p / &two;
        }
    }
    p
}

/// Decimal rendering of `sqrt(value)` truncated to `digits` places, computed
/// with integer square roots only.
pub fn sqrt_decimal(value: &BigRat, digits: u32) -> String {
    assert!(!value.is_negative());
    let scale = BigInt::from(10u32).pow(2 * digits);
    let scaled = (value * BigRat::from_integer(scale)).to_integer();
    let root = scaled.sqrt();
    let unit = BigInt::from(10u32).pow(digits);
    let (whole, frac) = root.div_rem(&unit);
    if digits == 0 {
        whole.to_string()
    } else {
        format!("{}.{:0>width$}", whole, frac.to_string(), width = digits as usize)
    }
}
