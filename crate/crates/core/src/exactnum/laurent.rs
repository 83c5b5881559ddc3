use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{factorial, rational_from_json, rational_to_json, Rational, TruncatedSeries};
use crate::error::{Error, Result};

/// A Laurent polynomial in `t` that is invariant under `t -> 1/t`.
///
/// Only the coefficients of `t^0 .. t^span` are stored; the coefficient of
/// `t^{-k}` is the coefficient of `t^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricLaurent {
    half: Vec<Rational>,
}

impl SymmetricLaurent {
    /// From the coefficients of `t^0, t^1, .., t^d`.
    pub fn from_half(mut half: Vec<Rational>) -> Self {
        if half.is_empty() {
            half.push(Rational::zero());
        }
        while half.len() > 1 && half.last().is_some_and(Zero::is_zero) {
            half.pop();
        }
        Self { half }
    }

    pub fn from_half_ints(half: &[i64]) -> Self {
        Self::from_half(half.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// From the full coefficient list `c_{-d}, .., c_d`; rejects asymmetric input.
    pub fn from_full(coeffs: &[Rational]) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::Malformed(format!(
                "symmetric Laurent polynomial needs an odd number of coefficients, got {}",
                coeffs.len()
            )));
        }
        let d = coeffs.len() / 2;
        for k in 1..=d {
            if coeffs[d + k] != coeffs[d - k] {
                return Err(Error::Normalization(format!(
                    "coefficients of t^{k} and t^-{k} differ ({} vs {})",
                    coeffs[d + k],
                    coeffs[d - k]
                )));
            }
        }
        Ok(Self::from_half(coeffs[d..].to_vec()))
    }

    pub fn one() -> Self {
        Self::from_half_ints(&[1])
    }

    pub fn span(&self) -> usize {
        self.half.len() - 1
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i64) -> Rational {
        self.half.get(k.unsigned_abs() as usize).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn half_coeffs(&self) -> &[Rational] {
        &self.half
    }

    pub fn full_coeffs(&self) -> Vec<Rational> {
        let d = self.span() as i64;
        (-d..=d).map(|k| self.coeff(k)).collect()
    }

    pub fn eval_at_one(&self) -> Rational {
        let mut s = self.half[0].clone();
        for c in &self.half[1..] {
            s += c * Rational::from_integer(BigInt::from(2));
        }
        s
    }

    /// Symmetric with value 1 at `t = 1`.
    pub fn is_normalized(&self) -> bool {
        self.eval_at_one().is_one()
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Normalization(format!(
                "Alexander polynomial must evaluate to 1 at t = 1, got {}",
                self.eval_at_one()
            )))
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (self.full_coeffs(), rhs.full_coeffs());
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::from_full(&out).expect("product of symmetric polynomials is symmetric")
    }

    /// The series of `p(e^h)` up to `h^order`.
    pub fn eval_exp(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = self.half[0].clone();
        for (k, c) in self.half.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            // c (e^{kh} + e^{-kh}): only even powers survive, each doubled
            for (j, slot) in coeffs.iter_mut().enumerate() {
                if j % 2 == 0 {
                    let kj = BigInt::from(k).pow(j as u32);
                    *slot += c * Rational::new(kj * BigInt::from(2), factorial(j));
                }
            }
        }
        TruncatedSeries::new(coeffs, order)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "span": self.span(),
            "coeffs": self.full_coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("Laurent polynomial needs a `coeffs` array".into()))?;
        let coeffs = coeffs.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
        if let Some(span) = v.get("span") {
            let span = span
                .as_u64()
                .ok_or_else(|| Error::Malformed("`span` must be a non-negative integer".into()))?;
            if coeffs.len() as u64 != 2 * span + 1 {
                return Err(Error::Malformed(format!(
                    "span {span} needs {} coefficients, got {}",
                    2 * span + 1,
                    coeffs.len()
                )));
            }
        }
        Self::from_full(&coeffs)
    }
}

/// `p(e^h)` as a truncated series.
pub fn laurent_eval_exp(p: &SymmetricLaurent, order: usize) -> TruncatedSeries {
    p.eval_exp(order)
}

impl fmt::Display for SymmetricLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.span() as i64;
        let mut first = true;
        for k in (-d..=d).rev() {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let var = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            let body = if var.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                var
            } else {
                format!("{mag}*{var}")
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A general Laurent polynomial `sum_k c_k t^{low + k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub low: i64,
    pub coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn new(low: i64, coeffs: Vec<Rational>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.low += lead as i64;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn eval_at_one(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("Laurent polynomial needs a `coeffs` array".into()))?
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()?;
        let low = match (v.get("low"), v.get("span")) {
            (Some(l), _) => l.as_i64().ok_or_else(|| Error::Malformed("`low` must be an integer".into()))?,
            (None, Some(s)) => -s.as_i64().ok_or_else(|| Error::Malformed("`span` must be an integer".into()))?,
            (None, None) => -((coeffs.len() / 2) as i64),
        };
        Ok(Self::new(low, coeffs))
    }
}

/// Brings a Laurent polynomial into the normalization used for manifolds with
/// `H_1 = Z`: symmetric under `t -> 1/t` and equal to 1 at `t = 1`.
///
/// The polynomial may be shifted by a power of `t` and rescaled by a rational
/// constant; anything else is rejected.
pub fn validate_manifold_alexander(p: &LaurentPoly) -> Result<SymmetricLaurent> {
    let at_one = p.eval_at_one();
    if at_one.is_zero() {
        return Err(Error::Normalization(
            "polynomial vanishes at t = 1; not an Alexander polynomial of an H_1 = Z manifold".into(),
        ));
    }
    let c = &p.coeffs;
    if c.iter().zip(c.iter().rev()).any(|(a, b)| a != b) {
        return Err(Error::Normalization(
            "coefficients are not palindromic; no unit multiple is symmetric".into(),
        ));
    }
    if c.len().is_multiple_of(2) {
        return Err(Error::Normalization(
            "odd width; centering would need a half-integer power of t".into(),
        ));
    }
    let inv = at_one.recip();
    let d = c.len() / 2;
    Ok(SymmetricLaurent::from_half(c[d..].iter().map(|x| x * &inv).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn eval_exp_examples() {
        assert_eq!(SymmetricLaurent::one().eval_exp(3), TruncatedSeries::one(3));
        let trefoil = SymmetricLaurent::from_half_ints(&[-1, 1]);
        assert_eq!(
            trefoil.eval_exp(4),
            TruncatedSeries::new(vec![int(1), int(0), int(1), int(0), rat(1, 12)], 4)
        );
        let fig8 = SymmetricLaurent::from_half_ints(&[3, -1]);
        assert_eq!(
            fig8.eval_exp(4),
            TruncatedSeries::new(vec![int(1), int(0), int(-1), int(0), rat(-1, 12)], 4)
        );
    }

    #[test]
    fn eval_exp_matches_termwise_exponentials() {
        // oracle: sum e^{kh} and e^{-kh} from the exp series directly
        let p = SymmetricLaurent::from_half_ints(&[5, -3, 1]);
        let order = 7;
        let mut expected = TruncatedSeries::zero(order);
        for k in -2i64..=2 {
            let e = TruncatedSeries::h(order).scale(&int(k)).exp().unwrap();
            expected = &expected + &e.scale(&p.coeff(k));
        }
        assert_eq!(p.eval_exp(order), expected);
    }

    #[test]
    fn asymmetric_is_rejected() {
        let c = vec![int(1), int(2), int(3)];
        assert!(matches!(SymmetricLaurent::from_full(&c), Err(Error::Normalization(_))));
        assert!(SymmetricLaurent::from_full(&[int(1), int(2)]).is_err());
    }

    #[test]
    fn json_round_trip_and_display() {
        let v: Value = serde_json::from_str(r#"{"span":1,"coeffs":["1","-1","1"]}"#).unwrap();
        let p = SymmetricLaurent::from_json(&v).unwrap();
        assert_eq!(p, SymmetricLaurent::from_half_ints(&[-1, 1]));
        assert_eq!(p.to_json(), v);
        assert_eq!(p.to_string(), "t - 1 + t^-1");
        assert!(p.is_normalized());
        let bad: Value = serde_json::from_str(r#"{"span":2,"coeffs":["1","-1","1"]}"#).unwrap();
        assert!(SymmetricLaurent::from_json(&bad).is_err());
    }

    #[test]
    fn product_of_symmetric() {
        let a = SymmetricLaurent::from_half_ints(&[-1, 1]);
        let b = SymmetricLaurent::from_half_ints(&[3, -1]);
        // (t - 1 + 1/t)(-t + 3 - 1/t) = -t^2 + 4t - 5 + 4/t - 1/t^2
        assert_eq!(a.mul(&b), SymmetricLaurent::from_half_ints(&[-5, 4, -1]));
    }

    #[test]
    fn manifold_normalization() {
        let trefoil = LaurentPoly::new(-1, vec![int(1), int(-1), int(1)]);
        assert_eq!(
            validate_manifold_alexander(&trefoil).unwrap(),
            SymmetricLaurent::from_half_ints(&[-1, 1])
        );
        let p52 = LaurentPoly::new(-1, vec![int(2), int(-3), int(2)]);
        assert_eq!(
            validate_manifold_alexander(&p52).unwrap(),
            SymmetricLaurent::from_half_ints(&[-3, 2])
        );
        // 2t^2 - 5t + 2 is 6_1 up to the unit -t
        let shifted = LaurentPoly::new(0, vec![int(2), int(-5), int(2)]);
        assert_eq!(
            validate_manifold_alexander(&shifted).unwrap(),
            SymmetricLaurent::from_half_ints(&[5, -2])
        );
        let asym = LaurentPoly::new(-2, vec![int(-1), int(1), int(1), int(0), int(1)]);
        assert!(matches!(validate_manifold_alexander(&asym), Err(Error::Normalization(_))));
        let zero_at_one = LaurentPoly::new(0, vec![int(1), int(-1)]);
        assert!(validate_manifold_alexander(&zero_at_one).is_err());
    }
}
