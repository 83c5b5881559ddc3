//! Weight systems: the Conway weight system on Chinese characters and the
//! multiplicative map `W` from trivalent graphs to polynomials in `c`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Signed, Zero};

use crate::closure::wheel_sign;
use crate::diagrams::{classify_components, Diagram, DiagramCombination};
use crate::error::{Error, Result};
use crate::exactnum::{int, Rational, TruncatedSeries};

/// A polynomial in the formal variable `c`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CPolynomial {
    coeffs: Vec<Rational>,
}

impl CPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// `c^k`.
    pub fn c_pow(k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = Rational::one();
        Self::new(v)
    }

    /// `c + a`.
    pub fn c_plus(a: i64) -> Self {
        Self::from_ints(&[a, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * k).collect())
    }

    pub fn eval(&self, c: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, x| acc * c + x)
    }
}

impl Add for &CPolynomial {
    type Output = CPolynomial;
    fn add(self, rhs: &CPolynomial) -> CPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        CPolynomial::new(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z)).collect(),
        )
    }
}

impl Sub for &CPolynomial {
    type Output = CPolynomial;
    fn sub(self, rhs: &CPolynomial) -> CPolynomial {
        self + &rhs.scale(&int(-1))
    }
}

impl Mul for &CPolynomial {
    type Output = CPolynomial;
    fn mul(self, rhs: &CPolynomial) -> CPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return CPolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPolynomial::new(out)
    }
}

impl fmt::Display for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match k {
                0 => mag.to_string(),
                _ => {
                    let var = if k == 1 { "c".to_string() } else { format!("c^{k}") };
                    if mag.is_one() { var } else { format!("{mag}*{var}") }
                }
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

/// The Conway weight system on one diagram: `(-2)^p` on a union of `p` even
/// wheels, zero on other interval-free diagrams.
pub fn w_conway_diagram(d: &Diagram) -> Result<Rational> {
    let reports = classify_components(d);
    if d.circles() > 0 || reports.iter().any(|r| r.is_interval) {
        return Err(Error::Unsupported("Conway weight system is evaluated on interval-free characters".into()));
    }
    let mut value = Rational::one();
    for r in &reports {
        match r.wheel {
            Some(n) if n % 2 == 0 => value *= int(-2),
            // odd wheels are zero by antisymmetry
            _ => return Ok(Rational::zero()),
        }
    }
    Ok(value)
}

/// Linear extension of [`w_conway_diagram`] to combinations.
///
/// Combinations store canonical representatives; a canonical wheel carries the
/// sign relating it to the standard wheel of the defining formula.
pub fn w_conway(x: &DiagramCombination) -> Result<Rational> {
    let mut total = Rational::zero();
    for (c, v) in x.iter() {
        let value = w_conway_diagram(c.diagram())?;
        if value.is_zero() {
            continue;
        }
        let sign: i64 = classify_components(c.diagram()).iter().map(|r| wheel_sign(r.wheel.unwrap()) as i64).product();
        total += v * value * int(sign);
    }
    Ok(total)
}

/// The multiplicative map `W`: resolves `H = (=) - (X)` at an edge until only
/// circles remain, each circle contributing a factor `c`.
///
/// Edges are resolved through the smallest dart of the canonical representative.
/// The relation is the so(3) identity for the epsilon tensor, so different
/// resolution orders agree after setting `c = 3` but not as polynomials: a
/// bubble on an edge evaluates to `2` one way and to `c - 1` the other.
pub fn w_eval(x: &DiagramCombination) -> Result<CPolynomial> {
    let mut total = CPolynomial::zero();
    for (c, v) in x.iter() {
        total = &total + &w_eval_diagram(c.diagram())?.scale(v);
    }
    Ok(total)
}

/// `W` specialized at a value of `c`.
pub fn w_eval_at(x: &DiagramCombination, c: &Rational) -> Result<Rational> {
    Ok(w_eval(x)?.eval(c))
}

pub fn w_eval_diagram(d: &Diagram) -> Result<CPolynomial> {
    w_eval_with(d, &mut |_| 0)
}

/// [`w_eval_diagram`] with a caller-chosen edge at every step: `pick` receives
/// the diagram and returns a dart on the edge to resolve (reduced modulo the
/// number of darts).
pub fn w_eval_with(d: &Diagram, pick: &mut impl FnMut(&Diagram) -> usize) -> Result<CPolynomial> {
    if d.legs() > 0 {
        return Err(Error::Domain("W is defined on diagrams without legs".into()));
    }
    if d.num_vertices() == 0 {
        return Ok(CPolynomial::c_pow(d.circles()));
    }
    if d.has_self_loop() {
        // zero by antisymmetry
        return Ok(CPolynomial::zero());
    }
    let e_u = pick(d) % d.num_darts();
    let (eq, cross) = resolve_h(d, e_u);
    let a = w_eval_with(&eq, pick)?;
    let b = w_eval_with(&cross, pick)?;
    Ok(&a - &b)
}

/// The two re-gluings of the edge through dart `e_u`.
///
/// With cyclic orders `(e_u, p, q)` and `(e_v, r, s)` at its ends, the boundary
/// points on one side of the edge are `q, r`, on the other `p, s`. The parallel
/// re-gluing joins `p-s` and `q-r`, the crossed one `p-r` and `q-s`.
pub fn resolve_h(d: &Diagram, e_u: usize) -> (Diagram, Diagram) {
    let e_v = d.partner(e_u);
    let (u, v) = (d.owner(e_u), d.owner(e_v));
    debug_assert_ne!(u, v);
    let rot = |vertex: usize, first: usize| -> (usize, usize) {
        let c = d.cell(vertex);
        let i = c.iter().position(|&x| x == first).unwrap();
        (c[(i + 1) % 3], c[(i + 2) % 3])
    };
    let (p, q) = rot(u, e_u);
    let (r, s) = rot(v, e_v);
    let eq = d.remove_and_join(&[u, v], &[(p, s), (q, r)]);
    let cross = d.remove_and_join(&[u, v], &[(p, r), (q, s)]);
    (eq, cross)
}

/// `sum_m value(x_m) h^m` up to `h^order`.
pub fn w_hbar_grade(
    x: &DiagramCombination,
    order: usize,
    value: impl Fn(&DiagramCombination) -> Result<Rational>,
) -> Result<TruncatedSeries> {
    let mut coeffs = vec![Rational::zero(); order + 1];
    for m in x.degrees() {
        if m <= order {
            coeffs[m] = value(&x.degree_part(m))?;
        }
    }
    Ok(TruncatedSeries::new(coeffs, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::close;
    use crate::exactnum::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w2() -> Diagram {
        Diagram::wheel(2).unwrap()
    }

    #[test]
    fn conway_examples() {
        assert_eq!(w_conway(&DiagramCombination::from_diagram(&w2())).unwrap(), int(-2));
        let u = w2().disjoint_union(&Diagram::wheel(4).unwrap());
        assert_eq!(w_conway(&DiagramCombination::from_diagram(&u)).unwrap(), int(4));
        assert_eq!(w_conway(&DiagramCombination::from_diagram(&Diagram::theta())).unwrap(), int(0));
        let with_interval = DiagramCombination::from_diagram(&w2().disjoint_union(&Diagram::interval()));
        assert!(w_conway(&with_interval).is_err());
        // orientation is respected
        let flipped = DiagramCombination::from_diagram(&Diagram::wheel(4).unwrap().flip_vertex(0));
        assert_eq!(w_conway(&flipped).unwrap(), int(2));
    }

    #[test]
    fn theta_value() {
        assert_eq!(w_eval_diagram(&Diagram::theta()).unwrap(), CPolynomial::from_ints(&[0, -1, 1]));
        let closed = close(&w2()).unwrap();
        assert_eq!(w_eval(closed.combination()).unwrap().to_string(), "c^2 - c");
    }

    #[test]
    fn circles_value() {
        for k in 0..4 {
            assert_eq!(w_eval_diagram(&Diagram::circles_only(k)).unwrap(), CPolynomial::c_pow(k));
        }
    }

    fn closed_wheel(n: usize) -> DiagramCombination {
        close(&Diagram::wheel(n).unwrap()).unwrap().into_combination()
    }

    #[test]
    fn wheel_recursion_at_three() {
        let three = int(3);
        let mut prev = w_eval_at(&closed_wheel(2), &three).unwrap();
        assert_eq!(prev, int(6));
        for m in 1..=3 {
            let next = w_eval_at(&closed_wheel(2 * m + 2), &three).unwrap();
            assert_eq!(next, prev.clone() * int(3 + 2 * m as i64), "m = {m}");
            prev = next;
        }
    }

    fn random_value(d: &Diagram, rng: &mut ChaCha8Rng, c: &Rational) -> Rational {
        w_eval_with(d, &mut |g: &Diagram| rng.gen_range(0..g.num_darts())).unwrap().eval(c)
    }

    #[test]
    fn resolution_order_invariance_at_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let three = int(3);
        for n in [2, 4, 6] {
            for t in crate::closure::closure_terms(&Diagram::wheel(n).unwrap()).unwrap() {
                let reference = w_eval_diagram(&t).unwrap().eval(&three);
                for _ in 0..4 {
                    assert_eq!(random_value(&t, &mut rng, &three), reference);
                }
            }
        }
    }

    #[test]
    fn bubble_depends_on_order_away_from_three() {
        // theta with a bubble on one edge: two bigons joined in a cycle
        let necklace = Diagram::new(
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]],
            &[(0, 3), (1, 5), (2, 6), (4, 9), (7, 11), (8, 10)],
            0,
        )
        .unwrap();
        let theta = w_eval_diagram(&Diagram::theta()).unwrap();
        let mut values = std::collections::BTreeSet::new();
        for start in 0..necklace.num_darts() {
            let mut first = true;
            let v = w_eval_with(&necklace, &mut |_| {
                let k = if first { start } else { 0 };
                first = false;
                k
            })
            .unwrap();
            values.insert(v.to_string());
            assert_eq!(v.eval(&int(3)), theta.eval(&int(3)) * int(2));
        }
        assert!(values.len() > 1);
    }

    #[test]
    fn multiplicative() {
        let t = Diagram::theta();
        let tt = t.disjoint_union(&t).with_circles(1);
        let expected = &(&w_eval_diagram(&t).unwrap() * &w_eval_diagram(&t).unwrap()) * &CPolynomial::c_pow(1);
        assert_eq!(w_eval_diagram(&tt).unwrap(), expected);
    }

    #[test]
    fn legs_rejected() {
        assert!(w_eval_diagram(&w2()).is_err());
    }

    #[test]
    fn hbar_grading() {
        let x = DiagramCombination::from_diagram(&w2());
        assert_eq!(
            w_hbar_grade(&x, 4, w_conway).unwrap(),
            TruncatedSeries::new(vec![int(0), int(0), int(-2)], 4)
        );
        assert_eq!(w_hbar_grade(&DiagramCombination::one(), 3, w_conway).unwrap(), TruncatedSeries::one(3));
        let mut y = x.clone();
        y.add_diagram(&w2().disjoint_union(&w2()), &int(1));
        assert_eq!(
            w_hbar_grade(&y, 4, w_conway).unwrap(),
            TruncatedSeries::new(vec![int(0), int(0), int(-2), int(0), int(4)], 4)
        );
    }

    #[test]
    fn display() {
        assert_eq!(CPolynomial::zero().to_string(), "0");
        assert_eq!(CPolynomial::new(vec![rat(1, 2), int(0), int(-3)]).to_string(), "-3*c^2 + 1/2");
    }
}
