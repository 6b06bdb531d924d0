//! Numeric abstractions shared by the decomposition and counting code.
//!
//! Fractional decompositions are generic over a [`Weight`] scalar so that the
//! same verifier runs on exact rationals (the default) and on floats.
//! Counting is generic over a [`Count`] accumulator: arbitrary precision by
//! default, machine integers where the caller knows the answer fits.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Scalar used for fractional edge weights and decomposition widths.
pub trait Weight: Num + PartialOrd + Clone + Debug + Display + FromPrimitive {
    /// Parses the exchange-format spelling (`"p/q"`, `"p"` or a decimal).
    fn parse_weight(text: &str) -> Option<Self>;

    /// Renders the value in the exchange-format spelling.
    fn format_weight(&self) -> String {
        self.to_string()
    }

    fn is_negative_weight(&self) -> bool {
        *self < Self::zero()
    }

    /// Lossy view used in reports and timing tables.
    fn to_f64_lossy(&self) -> f64;
}

impl Weight for BigRational {
    fn parse_weight(text: &str) -> Option<Self> {
        parse_ratio(text, |s| s.parse::<BigInt>().ok())
    }

    fn format_weight(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_negative_weight(&self) -> bool {
        self.is_negative()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Weight for Ratio<i64> {
    fn parse_weight(text: &str) -> Option<Self> {
        parse_ratio(text, |s| s.parse::<i64>().ok())
    }

    fn format_weight(&self) -> String {
        if *self.denom() == 1 {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Weight for f64 {
    fn parse_weight(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => {
                let p: f64 = p.trim().parse().ok()?;
                let q: f64 = q.trim().parse().ok()?;
                (q != 0.0).then(|| p / q)
            }
            None => text.parse().ok(),
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Weight for f32 {
    fn parse_weight(text: &str) -> Option<Self> {
        f64::parse_weight(text).map(|w| w as f32)
    }

    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

fn parse_ratio<T, F>(text: &str, parse_int: F) -> Option<Ratio<T>>
where
    T: Clone + num_integer::Integer,
    F: Fn(&str) -> Option<T>,
{
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p.trim())?;
            let q = parse_int(q.trim())?;
            (!q.is_zero()).then(|| Ratio::new(p, q))
        }
        None => Some(Ratio::from_integer(parse_int(text)?)),
    }
}

/// Accumulator for answer counts.
///
/// Anything closed under `+` and `*` with identities works; [`BigUint`] is the
/// default because `|D|^k` overflows 64 bits quickly.
pub trait Count: Zero + One + Clone + Debug + Display + PartialEq + Add<Output = Self> + Mul<Output = Self> {}

impl<T> Count for T where T: Zero + One + Clone + Debug + Display + PartialEq + Add<Output = T> + Mul<Output = T> {}

/// Converts a machine count into any accumulator by repeated doubling.
pub fn count_from_usize<C: Count>(n: usize) -> C {
    let mut result = C::zero();
    let mut power = C::one();
    let mut rest = n;
    while rest > 0 {
        if rest & 1 == 1 {
            result = result + power.clone();
        }
        power = power.clone() + power;
        rest >>= 1;
    }
    result
}
