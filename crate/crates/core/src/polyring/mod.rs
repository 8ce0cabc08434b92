//! Exact sparse polynomials over the rationals in the seven trace variables.
//!
//! The variable set is fixed: `t4, t1, t2, t3, t12, t13, t23`, in that index
//! order. Every symbolic object in the crate (relations, trace functions,
//! bivector entries, Jacobians, Gröbner bases) is a [`Poly`] over this set.

mod float;
mod matrix;
mod mono;
mod parse;
mod poly;

pub use float::FloatPoly;
pub use matrix::PolyMatrix;
pub use mono::{Mono, MonomialOrder};
pub use parse::ParseError;
pub use poly::Poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Exact rational coefficient.
pub type Rat = BigRational;

/// Number of trace variables.
pub const NVARS: usize = 7;

/// A point in trace coordinates, ordered like [`Var::ALL`].
pub type Point7 = [f64; NVARS];

/// Exact point in trace coordinates.
pub type RatPoint7 = [Rat; NVARS];

/// One of the seven trace coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    T4,
    T1,
    T2,
    T3,
    T12,
    T13,
    T23,
}

impl Var {
    /// Canonical order; the index of a variable is its position here.
    pub const ALL: [Var; NVARS] = [
        Var::T4,
        Var::T1,
        Var::T2,
        Var::T3,
        Var::T12,
        Var::T13,
        Var::T23,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Var> {
        Var::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T4 => "t4",
            Var::T1 => "t1",
            Var::T2 => "t2",
            Var::T3 => "t3",
            Var::T12 => "t12",
            Var::T13 => "t13",
            Var::T23 => "t23",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Var {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Var::from_name(s.trim()).ok_or_else(|| ParseError::UnknownVariable {
            pos: 0,
            name: s.trim().to_string(),
        })
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact conversion of a finite float.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64; scale through the quotient
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub(crate) fn is_one(r: &Rat) -> bool {
    r.is_one()
}

pub(crate) fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

#[cfg(test)]
pub(crate) use poly::tests::arb_poly;
