//! Exact rational helpers shared by every module.
//!
//! All payoffs, probabilities and gaps are [`Q`] values (arbitrary precision
//! rationals). Floating point only appears inside the solvers' float modes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exact square root of a perfect rational square, `None` otherwise.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Lossless conversion of a finite `f64` to its dyadic rational value.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_f64(x).ok_or_else(|| Error::Format(format!("non-finite number {x}")))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `num/den`, or just `num` for integers.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num/den`, an integer, or a decimal literal.
///
/// Decimal literals go through `f64` and become the exact dyadic value of
/// that double, so `"0.1"` parses to the double nearest one tenth.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Format(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Q::from_integer(n));
    }
    let f: f64 = s
        .parse()
        .map_err(|_| Error::Format(format!("not a rational: {s:?}")))?;
    from_f64(f)
}

/// Rounds each probability to a multiple of `2^-bits` so the vector sums to
/// exactly one. The rounding residue goes to the largest entry.
pub fn quantize_simplex(p: &[f64], bits: u32) -> Vec<Q> {
    let scale = (1u64 << bits) as f64;
    let total: i128 = 1i128 << bits;
    let mut ints: Vec<i128> = p
        .iter()
        .map(|&v| (v.max(0.0) * scale).round() as i128)
        .collect();
    let sum: i128 = ints.iter().sum();
    let (imax, _) = ints
        .iter()
        .enumerate()
        .fold((0, i128::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    ints[imax] += total - sum;
    let den = BigInt::from(total);
    ints.into_iter()
        .map(|v| Q::new(BigInt::from(v), den.clone()))
        .collect()
}

pub fn sum(xs: &[Q]) -> Q {
    xs.iter().fold(Q::zero(), |acc, x| acc + x)
}

pub fn min_q<'a>(a: &'a Q, b: &'a Q) -> &'a Q {
    if a <= b {
        a
    } else {
        b
    }
}

pub(crate) fn floor_to_usize(x: &Q) -> usize {
    x.floor().to_integer().to_usize().unwrap_or(0)
}
