//! Exact rational arithmetic and integer-coefficient polynomials.
//!
//! Rationals are backed by `num-rational` (always stored reduced with a
//! positive denominator, which matches the invariants required here).
//! This module adds the operation surface used by the rest of the crate:
//! checked division, JSON encoding as decimal strings, and a small generic
//! polynomial type.

use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

use crate::{Int, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational encoding: {0}")]
    BadEncoding(String),
}

/// Build a reduced rational from an integer numerator/denominator pair.
pub fn rational(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_add(a: &Rat, b: &Rat) -> Rat {
    a + b
}

pub fn rat_mul(a: &Rat, b: &Rat) -> Rat {
    a * b
}

/// Exact division; division by zero is reported, never panics.
pub fn rat_div(a: &Rat, b: &Rat) -> Result<Rat, NumError> {
    if b.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    Ok(a / b)
}

/// Encode a rational as two decimal strings `["num", "den"]`.
///
/// JSON numbers cannot hold arbitrary-precision values, so the wire format
/// uses strings.
pub fn rat_to_json(r: &Rat) -> serde_json::Value {
    serde_json::json!([r.numer().to_string(), r.denom().to_string()])
}

/// Decode the `["num", "den"]` string-pair encoding.
pub fn rat_from_json(v: &serde_json::Value) -> Result<Rat, NumError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| NumError::BadEncoding(v.to_string()))?;
    let parse = |x: &serde_json::Value| -> Result<Int, NumError> {
        x.as_str()
            .and_then(|s| Int::from_str(s).ok())
            .ok_or_else(|| NumError::BadEncoding(x.to_string()))
    };
    let num = parse(&arr[0])?;
    let den = parse(&arr[1])?;
    if den.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    Ok(Rat::new(num, den))
}

/// Render as `num/den` (or just `num` when the denominator is 1).
pub fn rat_display(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Univariate polynomial with coefficients lowest degree first.
///
/// The leading coefficient is nonzero unless the polynomial is zero
/// (represented by an empty coefficient list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Zero + Clone> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }
}

impl<T> Polynomial<T>
where
    T: Zero + Clone + std::ops::Add<Output = T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    /// Exact evaluation by Horner's scheme.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc = acc + c.clone();
        }
        acc
    }
}

impl fmt::Display for Polynomial<Int> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.sign() == num_bigint::Sign::Minus {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.magnitude().to_string();
            let mag = if mag == "1" && i > 0 { String::new() } else { mag };
            match i {
                0 => write!(f, "{sign}{}", c.magnitude())?,
                1 => write!(f, "{sign}{mag}x")?,
                _ => write!(f, "{sign}{mag}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}
