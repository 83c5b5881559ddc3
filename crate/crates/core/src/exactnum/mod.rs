//! Exact rationals, truncated power series in `h` and symmetric Laurent
//! polynomials in `t`.

mod laurent;
mod series;

pub use laurent::{laurent_eval_exp, validate_manifold_alexander, LaurentPoly, SymmetricLaurent};
pub use series::TruncatedSeries;

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| Error::Malformed(format!("bad rational `{s}`")))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| Error::Malformed(format!("bad rational `{s}`")))?;
        if q.is_zero() {
            return Err(Error::Malformed(format!("zero denominator in `{s}`")));
        }
        Ok(Rational::new(p, q))
    } else {
        BigInt::from_str(s)
            .map(Rational::from_integer)
            .map_err(|_| Error::Malformed(format!("bad rational `{s}`")))
    }
}

/// Accepts a JSON string `"p/q"` or a JSON integer.
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
        other => Err(Error::Malformed(format!("expected rational string, got {other}"))),
    }
}

pub fn rational_to_json(q: &Rational) -> serde_json::Value {
    serde_json::Value::String(q.to_string())
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `h / (e^{h/2} - e^{-h/2})` to the given order.
pub fn nu_series(order: usize) -> TruncatedSeries {
    // (e^{h/2} - e^{-h/2}) / h = sum over odd k of 2^{1-k}/k! h^{k-1}
    let mut coeffs = vec![Rational::zero(); order + 1];
    for (j, c) in coeffs.iter_mut().enumerate() {
        if j % 2 == 0 {
            let k = j + 1;
            *c = Rational::new(BigInt::one(), factorial(k) * (BigInt::one() << (k - 1)));
        }
    }
    TruncatedSeries::new(coeffs, order)
        .inverse()
        .expect("sinh quotient has unit constant term")
}

/// `e^{h/2} - e^{-h/2}` to the given order.
pub fn sinh_half_series(order: usize) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|k| {
            if k % 2 == 1 {
                Rational::new(BigInt::one(), factorial(k) * (BigInt::one() << (k - 1)))
            } else {
                Rational::zero()
            }
        })
        .collect();
    TruncatedSeries::new(coeffs, order)
}

/// Coefficients `b_{2m}` of `-1/2 log(h / (e^{h/2} - e^{-h/2}))` for `2m <= max_degree`.
pub fn b_coefficients(max_degree: usize) -> BTreeMap<usize, Rational> {
    if max_degree < 2 {
        return BTreeMap::new();
    }
    let log = nu_series(max_degree)
        .log()
        .expect("nu series has constant term 1")
        .scale(&rat(-1, 2));
    (1..=max_degree / 2).map(|m| (2 * m, log.coeff(2 * m))).collect()
}

/// `log s` for a series with constant term 1.
pub fn series_log(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.log()
}

/// `exp s` for a series with constant term 0.
pub fn series_exp(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_examples() {
        assert_eq!(nu_series(0), TruncatedSeries::one(0));
        let expected = TruncatedSeries::new(vec![int(1), int(0), rat(-1, 24), int(0), rat(7, 5760)], 4);
        assert_eq!(nu_series(4), expected);
        assert_eq!(nu_series(5), TruncatedSeries::new(expected.coeffs().to_vec(), 5));
    }

    #[test]
    fn nu_times_sinh_is_h() {
        for n in 0..12 {
            let prod = &nu_series(n + 1) * &sinh_half_series(n + 1);
            assert_eq!(prod, TruncatedSeries::h(n + 1));
        }
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_coefficients(2), BTreeMap::from([(2, rat(1, 48))]));
        assert_eq!(b_coefficients(4), BTreeMap::from([(2, rat(1, 48)), (4, rat(-1, 5760))]));
        assert!(b_coefficients(0).is_empty());
    }

    #[test]
    fn b_independent_of_order() {
        let big = b_coefficients(16);
        for n in (2..16).step_by(2) {
            for (k, v) in b_coefficients(n) {
                assert_eq!(big[&k], v);
            }
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rat(-1, 5760).to_string(), "-1/5760");
        assert_eq!(int(3).to_string(), "3");
    }
}
