//! Exact integer and rational linear algebra.
//!
//! Everything in this crate is computed over `BigInt` / `BigRational`; there
//! is no floating point anywhere. The module provides a small vector type,
//! a dense integer matrix with Smith and Hermite normal forms, and Gaussian
//! elimination over the rationals.

mod elim;
mod matrix;

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use elim::{nullspace, rank, rref, solve_unique, span_basis};
pub use matrix::{hermite_normal_form, integer_kernel_basis, smith_normal_form, IntMatrix, Snf};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// A vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        RatVector(vec![Rat::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = Rat::one();
        v
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_ints(entries: &[Int]) -> Self {
        RatVector(entries.iter().cloned().map(Rat::from_integer).collect())
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.0
    }

    pub fn entries_mut(&mut self) -> &mut [Rat] {
        &mut self.0
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn scale(&self, s: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: &Rat, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|x| -x).collect())
    }

    /// Integer entries; `None` when some entry has a denominator.
    pub fn to_ints(&self) -> Option<Vec<Int>> {
        self.0.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    /// Least common multiple of the entry denominators.
    pub fn denominator_lcm(&self) -> Int {
        self.0.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// The unique primitive integer vector on the ray through `self`.
    pub fn primitive(&self) -> Result<RatVector> {
        primitive_vector(self)
    }
}

impl Deref for RatVector {
    type Target = [Rat];
    fn deref(&self) -> &[Rat] {
        &self.0
    }
}

impl From<Vec<Rat>> for RatVector {
    fn from(v: Vec<Rat>) -> Self {
        RatVector(v)
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// Clears denominators and divides by the gcd of the numerators.
pub fn primitive_vector(v: &RatVector) -> Result<RatVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let l = v.denominator_lcm();
    let ints: Vec<Int> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    Ok(RatVector(ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect()))
}

/// Gcd-normalizes an integer vector; zero stays zero.
pub fn primitive_ints(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive_ints(v: &[Int]) -> bool {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    g.is_one()
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn sign(x: &Rat) -> std::cmp::Ordering {
    if x.is_positive() {
        std::cmp::Ordering::Greater
    } else if x.is_negative() {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_examples() {
        let p = RatVector::from_i64s(&[2, -4, 6]).primitive().unwrap();
        assert_eq!(p, RatVector::from_i64s(&[1, -2, 3]));
        let p = RatVector::new(vec![ratio(1, 2), ratio(3, 2)]).primitive().unwrap();
        assert_eq!(p, RatVector::from_i64s(&[1, 3]));
        let p = RatVector::from_i64s(&[0, 0, -5]).primitive().unwrap();
        assert_eq!(p, RatVector::from_i64s(&[0, 0, -1]));
    }

    #[test]
    fn primitive_of_zero_fails() {
        let err = RatVector::zeros(3).primitive().unwrap_err();
        assert_eq!(err.to_string(), "zero vector has no primitive generator");
    }

    #[test]
    fn rat_roundtrip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
    }
}
