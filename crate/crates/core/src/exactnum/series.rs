use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// A power series in `h` known exactly up to and including `h^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Builds a series from its leading coefficients. Missing coefficients are
    /// zero, coefficients beyond `order` are dropped.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { order, coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![], order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rational::one()], order)
    }

    /// The series `h`.
    pub fn h(order: usize) -> Self {
        Self::new(vec![Rational::zero(), Rational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::new(self.coeffs[..=order].to_vec(), order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("series with zero constant term is not invertible".into()));
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for n in 1..=self.order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { order: self.order, coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if !rhs.coeffs[0].is_one() {
            return Err(Error::Domain("series division requires a unit constant term 1 in the divisor".into()));
        }
        Ok(self * &rhs.inverse()?)
    }

    /// `log s`, defined when the constant term is 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain(format!(
                "log requires constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        // L' = s'/s, i.e. n L_n = n s_n - sum_{k=1}^{n-1} k L_k s_{n-k}
        let mut out = vec![Rational::zero(); self.order + 1];
        for n in 1..=self.order {
            let mut acc = Rational::from_integer(BigInt::from(n)) * &self.coeffs[n];
            for k in 1..n {
                acc -= Rational::from_integer(BigInt::from(k)) * &out[k] * &self.coeffs[n - k];
            }
            out[n] = acc / Rational::from_integer(BigInt::from(n));
        }
        Ok(Self { order: self.order, coeffs: out })
    }

    /// `exp s`, defined when the constant term is 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(format!(
                "exp requires constant term 0, got {}",
                self.coeffs[0]
            )));
        }
        // E' = E s', i.e. n E_n = sum_{k=1}^{n} k s_k E_{n-k}
        let mut out = vec![Rational::zero(); self.order + 1];
        out[0] = Rational::one();
        for n in 1..=self.order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += Rational::from_integer(BigInt::from(k)) * &self.coeffs[k] * &out[n - k];
            }
            out[n] = acc / Rational::from_integer(BigInt::from(n));
        }
        Ok(Self { order: self.order, coeffs: out })
    }

    /// Evaluates the polynomial `sum_k p_k z^k` at `z = self`.
    pub fn compose_poly(&self, poly: &[Rational]) -> Self {
        let mut acc = Self::zero(self.order);
        for c in poly.iter().rev() {
            acc = &(&acc * self) + &Self::new(vec![c.clone()], self.order);
        }
        acc
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect();
        TruncatedSeries { order, coeffs }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect();
        TruncatedSeries { order, coeffs }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        TruncatedSeries { order, coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match k {
                0 => mag.to_string(),
                1 if mag.is_one() => "h".to_string(),
                1 => format!("{mag}*h"),
                _ if mag.is_one() => format!("h^{k}"),
                _ => format!("{mag}*h^{k}"),
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{nu_series, rat};

    fn series(c: &[Rational], order: usize) -> TruncatedSeries {
        TruncatedSeries::new(c.to_vec(), order)
    }

    #[test]
    fn mercator() {
        let s = TruncatedSeries::from_ints(&[1, 1], 3);
        let l = s.log().unwrap();
        assert_eq!(l, series(&[rat(0, 1), rat(1, 1), rat(-1, 2), rat(1, 3)], 3));
    }

    #[test]
    fn log_of_unit_is_zero() {
        assert!(TruncatedSeries::one(5).log().unwrap().is_zero());
    }

    #[test]
    fn log_nu() {
        let l = nu_series(4).log().unwrap();
        assert_eq!(l, series(&[rat(0, 1), rat(0, 1), rat(-1, 24), rat(0, 1), rat(1, 2880)], 4));
        assert_eq!(l.exp().unwrap(), nu_series(4));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(TruncatedSeries::zero(4).exp().unwrap(), TruncatedSeries::one(4));
        assert_eq!(
            TruncatedSeries::h(2).exp().unwrap(),
            series(&[rat(1, 1), rat(1, 1), rat(1, 2)], 2)
        );
        let s = series(&[rat(0, 1), rat(0, 1), rat(1, 48)], 4);
        assert_eq!(
            s.exp().unwrap(),
            series(&[rat(1, 1), rat(0, 1), rat(1, 48), rat(0, 1), rat(1, 4608)], 4)
        );
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(TruncatedSeries::from_ints(&[2, 1], 3).log(), Err(Error::Domain(_))));
        assert!(matches!(TruncatedSeries::from_ints(&[1, 1], 3).exp(), Err(Error::Domain(_))));
        assert!(TruncatedSeries::from_ints(&[0, 1], 3).inverse().is_err());
        let a = TruncatedSeries::one(3);
        assert!(a.div(&TruncatedSeries::from_ints(&[2, 1], 3)).is_err());
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = TruncatedSeries::from_ints(&[1, 1, 1, 1], 3);
        let b = TruncatedSeries::from_ints(&[1, 1], 1);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!(&a * &b, TruncatedSeries::from_ints(&[1, 2], 1));
    }

    #[test]
    fn display() {
        assert_eq!(nu_series(4).to_string(), "1 - 1/24*h^2 + 7/5760*h^4");
        assert_eq!(TruncatedSeries::zero(2).to_string(), "0");
        assert_eq!(TruncatedSeries::from_ints(&[0, -1, 1], 2).to_string(), "-h + h^2");
    }
}
