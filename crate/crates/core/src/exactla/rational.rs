use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used everywhere.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Parses `"p/q"`, `"p"` or a bare JSON integer text.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Schema(format!("not a rational number: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_q_json(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::String(s) => parse_q(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(q(n.as_i64().unwrap())),
        other => Err(Error::Schema(format!("expected rational, got {other}"))),
    }
}

/// Canonical text form: integers print bare, fractions as `p/q` in lowest terms.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Converts a rational known to be an integer that fits in i64.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if !x.denom().is_one() {
        return None;
    }
    i64::try_from(x.numer()).ok()
}
