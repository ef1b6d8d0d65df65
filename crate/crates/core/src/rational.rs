//! Exact rational scalars and their text encoding.
//!
//! Scalars are written as `"p/q"` strings, or as plain integers when the
//! denominator is one. Floating-point JSON numbers are rejected on input.

use num::{BigInt, BigRational, One, Zero};
use serde_json::Value;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| format!("not a rational: {text:?}"))?;
    let q: BigInt = den.parse().map_err(|_| format!("not a rational: {text:?}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator: {text:?}"));
    }
    Ok(Rational::new(p, q))
}

pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_json(q: &Rational) -> Value {
    Value::String(format(q))
}

pub fn vec_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(to_json).collect())
}

/// Accepts a JSON integer or a `"p/q"` string.
pub fn from_json(v: &Value) -> Result<Rational, String> {
    match v {
        Value::String(s) => parse(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                Err(format!("floating-point scalar {n} is not accepted; use a \"p/q\" string"))
            }
        }
        other => Err(format!("expected a rational scalar, found {other}")),
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
