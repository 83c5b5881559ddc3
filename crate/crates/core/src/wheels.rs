//! The wheel algebra: polynomials in even wheels under disjoint union, its
//! exponential and logarithm, and the wheel series attached to an Alexander
//! polynomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::diagrams::{Diagram, DiagramCombination};
use crate::error::{Error, Result};
use crate::exactnum::{b_coefficients, factorial, rat, rational_from_json, rational_to_json, Rational, SymmetricLaurent, TruncatedSeries};

/// A sorted multiset of even wheel sizes; its degree is the sum of the sizes.
pub type WheelMonomial = Vec<usize>;

fn monomial_degree(m: &[usize]) -> usize {
    m.iter().sum()
}

/// A truncated element of the wheel algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WheelSeries {
    terms: BTreeMap<WheelMonomial, Rational>,
    max_degree: usize,
}

impl WheelSeries {
    pub fn zero(max_degree: usize) -> Self {
        Self { terms: BTreeMap::new(), max_degree }
    }

    pub fn one(max_degree: usize) -> Self {
        let mut s = Self::zero(max_degree);
        s.add(vec![], Rational::one()).expect("unit is admissible");
        s
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Adds `coeff` times a monomial; sizes must be even and positive. Terms above
    /// the truncation degree are dropped.
    pub fn add(&mut self, mut wheels: WheelMonomial, coeff: Rational) -> Result<()> {
        if let Some(&w) = wheels.iter().find(|&&w| w == 0 || w % 2 == 1) {
            return Err(Error::Domain(format!("wheel size {w} is not a positive even number")));
        }
        if monomial_degree(&wheels) > self.max_degree || coeff.is_zero() {
            return Ok(());
        }
        wheels.sort_unstable();
        let slot = self.terms.entry(wheels.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&wheels);
        }
        Ok(())
    }

    pub fn coeff(&self, wheels: &[usize]) -> Rational {
        let mut w = wheels.to_vec();
        w.sort_unstable();
        self.terms.get(&w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WheelMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The part of total degree exactly `degree`.
    pub fn degree_part(&self, degree: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| monomial_degree(m) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            max_degree: self.max_degree,
        }
    }

    /// Product under disjoint union, truncated at the smaller bound.
    pub fn mul(&self, rhs: &Self) -> Self {
        let max = self.max_degree.min(rhs.max_degree);
        let mut out = Self::zero(max);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                if monomial_degree(a) + monomial_degree(b) > max {
                    continue;
                }
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add(m, x * y).expect("sizes already validated");
            }
        }
        out
    }

    fn sub_unit(&self) -> Result<Self> {
        if !self.coeff(&[]).is_one() {
            return Err(Error::Domain("wheel series must have constant term 1".into()));
        }
        let mut x = self.clone();
        x.terms.remove(&Vec::new());
        Ok(x)
    }

    /// The diagram combination of the disjoint unions of standard wheels.
    pub fn to_combination(&self) -> DiagramCombination {
        let mut out = DiagramCombination::zero();
        for (m, c) in &self.terms {
            out.add_diagram(&wheel_union(m), c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({ "wheels": m, "coeff": rational_to_json(c) }))
                .collect(),
        )
    }

    pub fn from_json(v: &Value, max_degree: usize) -> Result<Self> {
        let items = v.as_array().ok_or_else(|| Error::Malformed("wheel series must be a list".into()))?;
        let mut s = Self::zero(max_degree);
        for item in items {
            let wheels = item
                .get("wheels")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Malformed("term needs a `wheels` list".into()))?
                .iter()
                .map(|w| w.as_u64().map(|w| w as usize).ok_or_else(|| Error::Malformed("wheel sizes are integers".into())))
                .collect::<Result<Vec<_>>>()?;
            let coeff = rational_from_json(item.get("coeff").ok_or_else(|| Error::Malformed("term needs `coeff`".into()))?)?;
            s.add(wheels, coeff)?;
        }
        Ok(s)
    }
}

/// Disjoint union of standard wheels of the given sizes.
pub fn wheel_union(sizes: &[usize]) -> Diagram {
    sizes.iter().fold(Diagram::empty(), |acc, &n| acc.disjoint_union(&Diagram::wheel(n).expect("positive size")))
}

/// The primitive part `sum c_{2m} w_{2m}` of the wheel algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlphaSeries {
    coeffs: BTreeMap<usize, Rational>,
}

impl AlphaSeries {
    pub fn new(coeffs: BTreeMap<usize, Rational>) -> Result<Self> {
        if let Some(&w) = coeffs.keys().find(|&&w| w == 0 || w % 2 == 1) {
            return Err(Error::Domain(format!("wheel size {w} is not a positive even number")));
        }
        Ok(Self { coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    /// Coefficient of the wheel with `size` legs.
    pub fn coeff(&self, size: usize) -> Rational {
        self.coeffs.get(&size).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        Self { coeffs: self.coeffs.iter().filter(|(&k, _)| k <= max_degree).map(|(&k, v)| (k, v.clone())).collect() }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.coeffs {
            m.insert(k.to_string(), rational_to_json(v));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Malformed("alpha series must be an object".into()))?;
        let mut coeffs = BTreeMap::new();
        for (k, c) in obj {
            let k: usize = k.parse().map_err(|_| Error::Malformed(format!("bad wheel size `{k}`")))?;
            coeffs.insert(k, rational_from_json(c)?);
        }
        Self::new(coeffs)
    }
}

/// `a'_{2m}` defined by `-1/2 log A(e^h) = sum a'_{2m} h^{2m}`.
pub fn a_prime_from_alexander(a: &SymmetricLaurent, max_degree: usize) -> Result<BTreeMap<usize, Rational>> {
    a.ensure_normalized()?;
    let log = a.eval_exp(max_degree).log()?.scale(&rat(-1, 2));
    let mut out = BTreeMap::new();
    for k in 1..=max_degree {
        let c = log.coeff(k);
        if k % 2 == 1 {
            if !c.is_zero() {
                return Err(Error::Inconsistent(format!("odd coefficient of h^{k} is {c}")));
            }
        } else {
            out.insert(k, c);
        }
    }
    Ok(out)
}

/// `alpha(M) = sum (2 b_{2m} + a'_{2m}(M)) w_{2m}` up to `max_degree`.
pub fn alpha_from_alexander(a: &SymmetricLaurent, max_degree: usize) -> Result<AlphaSeries> {
    let a_prime = a_prime_from_alexander(a, max_degree)?;
    let b = b_coefficients(max_degree);
    let coeffs = a_prime.into_iter().map(|(k, v)| (k, v + &b[&k] * rat(2, 1))).collect();
    AlphaSeries::new(coeffs)
}

/// `exp` under disjoint union, truncated at total degree `max_degree`.
pub fn exp_disjoint(alpha: &AlphaSeries, max_degree: usize) -> WheelSeries {
    // product over wheel sizes of sum_k c^k / k! w^k
    let mut out = WheelSeries::one(max_degree);
    for (&size, c) in alpha.coeffs.iter().filter(|(&s, _)| s <= max_degree) {
        let mut factor = WheelSeries::zero(max_degree);
        let mut power = Rational::one();
        for k in 0..=max_degree / size {
            factor
                .add(vec![size; k], &power / Rational::from_integer(factorial(k)))
                .expect("even sizes");
            power *= c;
        }
        out = out.mul(&factor);
    }
    out
}

/// Inverse of [`exp_disjoint`]; fails unless the input is an exponential.
pub fn log_disjoint(w: &WheelSeries) -> Result<AlphaSeries> {
    let x = w.sub_unit()?;
    let max = w.max_degree();
    // log(1 + x) = sum_{k>=1} (-1)^{k+1} x^k / k; x has no constant term
    let mut acc = WheelSeries::zero(max);
    let mut power = x.clone();
    for k in 1..=max {
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        for (m, c) in power.iter() {
            acc.add(m.clone(), c * rat(sign, k as i64))?;
        }
        power = power.mul(&x);
    }
    let mut coeffs = BTreeMap::new();
    for (m, c) in acc.iter() {
        if m.len() != 1 {
            return Err(Error::Domain(format!(
                "logarithm has a non-primitive term {m:?} with coefficient {c}; input is not an exponential"
            )));
        }
        coeffs.insert(m[0], c.clone());
    }
    AlphaSeries::new(coeffs)
}

/// Recovers the symmetric Alexander polynomial of span at most `span_bound`
/// from the coefficients `a'_{2m}`.
///
/// Writing `A = c_0 + sum_k c_k (t^k + t^-k)`, the condition
/// `A(e^h) = exp(-2 sum a'_{2m} h^{2m})` is linear in the `c_k`. The equations at
/// `h^0, h^2, .., h^{2 span}` determine them uniquely (a Vandermonde system in
/// `k^2`); any further supplied coefficients must then agree.
pub fn alexander_from_a_prime(coeffs: &BTreeMap<usize, Rational>, span_bound: usize) -> Result<SymmetricLaurent> {
    if let Some(&k) = coeffs.keys().find(|&&k| k == 0 || k % 2 == 1) {
        return Err(Error::Domain(format!("a' coefficients live in even positive degrees, got {k}")));
    }
    let known = coeffs.keys().next_back().copied().unwrap_or(0);
    if known < 2 * span_bound {
        return Err(Error::Span(format!(
            "span {span_bound} needs coefficients through degree {}, only {known} given",
            2 * span_bound
        )));
    }
    let order = known;
    let mut exponent = TruncatedSeries::zero(order);
    for (&k, v) in coeffs {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = v * rat(-2, 1);
        exponent = &exponent + &TruncatedSeries::new(c, order);
    }
    let target = exponent.exp()?;

    // matrix row j (equation at h^{2j}), column k (unknown c_k)
    let n = span_bound + 1;
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rational> = (0..n)
                .map(|k| {
                    if k == 0 {
                        if j == 0 { Rational::one() } else { Rational::zero() }
                    } else {
                        let num = BigInt::from(2) * BigInt::from(k).pow(2 * j as u32);
                        Rational::new(num, factorial(2 * j))
                    }
                })
                .collect();
            row.push(target.coeff(2 * j));
            row
        })
        .collect();
    let solution = solve_square(&mut rows).ok_or_else(|| Error::Inconsistent("singular span system".into()))?;
    let candidate = SymmetricLaurent::from_half(solution);
    let check = a_prime_from_alexander(&candidate, order)?;
    for (k, v) in coeffs {
        if check.get(k) != Some(v) {
            return Err(Error::Span(format!(
                "no Alexander polynomial of span <= {span_bound} matches a'_{k} = {v}"
            )));
        }
    }
    Ok(candidate)
}

/// Gauss-Jordan on an augmented square system.
fn solve_square(rows: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let (src, dst) = if r < col {
                    let (a, b) = rows.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
    }
    Some(rows.iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn trefoil() -> SymmetricLaurent {
        SymmetricLaurent::from_half_ints(&[-1, 1])
    }

    fn figure_eight() -> SymmetricLaurent {
        SymmetricLaurent::from_half_ints(&[3, -1])
    }

    #[test]
    fn a_prime_examples() {
        let zero = a_prime_from_alexander(&SymmetricLaurent::one(), 6).unwrap();
        assert!(zero.values().all(Zero::is_zero));
        assert_eq!(
            a_prime_from_alexander(&trefoil(), 4).unwrap(),
            BTreeMap::from([(2, rat(-1, 2)), (4, rat(5, 24))])
        );
        assert_eq!(
            a_prime_from_alexander(&figure_eight(), 4).unwrap(),
            BTreeMap::from([(2, rat(1, 2)), (4, rat(7, 24))])
        );
        let unnormalized = SymmetricLaurent::from_half_ints(&[1, 1]);
        assert!(matches!(a_prime_from_alexander(&unnormalized, 4), Err(Error::Normalization(_))));
    }

    #[test]
    fn a_prime_matches_series_oracle() {
        // oracle: -1/2 log of the explicit expansion 1 + h^2 + h^4/12
        let s = TruncatedSeries::new(vec![int(1), int(0), int(1), int(0), rat(1, 12)], 4);
        let l = s.log().unwrap().scale(&rat(-1, 2));
        let a = a_prime_from_alexander(&trefoil(), 4).unwrap();
        assert_eq!(a[&2], l.coeff(2));
        assert_eq!(a[&4], l.coeff(4));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(
            alpha_from_alexander(&SymmetricLaurent::one(), 4).unwrap().coeffs(),
            &BTreeMap::from([(2, rat(1, 24)), (4, rat(-1, 2880))])
        );
        assert_eq!(
            alpha_from_alexander(&trefoil(), 4).unwrap().coeffs(),
            &BTreeMap::from([(2, rat(-11, 24)), (4, rat(599, 2880))])
        );
        assert_eq!(
            alpha_from_alexander(&trefoil(), 2).unwrap().coeffs(),
            &BTreeMap::from([(2, rat(-11, 24))])
        );
    }

    #[test]
    fn exp_examples() {
        let a = AlphaSeries::new(BTreeMap::from([(2, rat(1, 24))])).unwrap();
        let e = exp_disjoint(&a, 4);
        let mut expected = WheelSeries::one(4);
        expected.add(vec![2], rat(1, 24)).unwrap();
        expected.add(vec![2, 2], rat(1, 1152)).unwrap();
        assert_eq!(e, expected);
        assert_eq!(exp_disjoint(&AlphaSeries::default(), 6), WheelSeries::one(6));
        let a = AlphaSeries::new(BTreeMap::from([(2, rat(3, 7)), (4, rat(-5, 11))])).unwrap();
        assert_eq!(exp_disjoint(&a, 6).coeff(&[4, 2]), rat(3, 7) * rat(-5, 11));
    }

    #[test]
    fn log_examples() {
        assert_eq!(log_disjoint(&WheelSeries::one(4)).unwrap(), AlphaSeries::default());
        let a = AlphaSeries::new(BTreeMap::from([(2, rat(-11, 24)), (4, rat(599, 2880))])).unwrap();
        assert_eq!(log_disjoint(&exp_disjoint(&a, 8)).unwrap(), a);
        let mut w = WheelSeries::one(4);
        w.add(vec![2], rat(1, 24)).unwrap();
        w.add(vec![2, 2], rat(1, 1152)).unwrap();
        assert_eq!(log_disjoint(&w).unwrap().coeffs(), &BTreeMap::from([(2, rat(1, 24))]));
        let mut bad = WheelSeries::one(4);
        bad.add(vec![2, 2], int(1)).unwrap();
        assert!(log_disjoint(&bad).is_err());
        assert!(log_disjoint(&WheelSeries::zero(4)).is_err());
    }

    #[test]
    fn alexander_reconstruction() {
        let t = alexander_from_a_prime(&BTreeMap::from([(2, rat(-1, 2)), (4, rat(5, 24))]), 1).unwrap();
        assert_eq!(t, trefoil());
        let one = alexander_from_a_prime(&BTreeMap::new(), 0).unwrap();
        assert_eq!(one, SymmetricLaurent::one());
        let f = alexander_from_a_prime(&BTreeMap::from([(2, rat(1, 2)), (4, rat(7, 24))]), 1).unwrap();
        assert_eq!(f, figure_eight());
        // a'_2 = 1 alone at span 1 forces -2t + 5 - 2/t
        let g = alexander_from_a_prime(&BTreeMap::from([(2, int(1))]), 1).unwrap();
        assert_eq!(g, SymmetricLaurent::from_half_ints(&[5, -2]));
        // inconsistent higher coefficient
        let bad = alexander_from_a_prime(&BTreeMap::from([(2, rat(-1, 2)), (4, int(7))]), 1);
        assert!(matches!(bad, Err(Error::Span(_))));
        // not enough data for the requested span
        assert!(matches!(alexander_from_a_prime(&BTreeMap::from([(2, int(1))]), 2), Err(Error::Span(_))));
    }

    #[test]
    fn json_formats() {
        let a = alpha_from_alexander(&trefoil(), 4).unwrap();
        assert_eq!(a.to_json().to_string(), r#"{"2":"-11/24","4":"599/2880"}"#);
        assert_eq!(AlphaSeries::from_json(&a.to_json()).unwrap(), a);
        let w = exp_disjoint(&a, 4);
        assert_eq!(WheelSeries::from_json(&w.to_json(), 4).unwrap(), w);
    }
}
