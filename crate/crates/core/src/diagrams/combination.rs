use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{canonicalize, Canonical, CanonicalDiagram, Diagram};
use crate::error::{Error, Result};
use crate::exactnum::{rational_from_json, rational_to_json, Rational};

/// A finite formal sum of canonical diagrams with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagramCombination {
    terms: BTreeMap<CanonicalDiagram, Rational>,
}

impl DiagramCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit: one copy of the empty diagram.
    pub fn one() -> Self {
        Self::from_diagram(&Diagram::empty())
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let mut c = Self::zero();
        c.add_diagram(d, &Rational::one());
        c
    }

    pub fn from_canonical(c: CanonicalDiagram, coeff: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(c, coeff);
        out
    }

    pub fn add_term(&mut self, c: CanonicalDiagram, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `coeff * d`, canonicalizing `d` with its sign.
    pub fn add_diagram(&mut self, d: &Diagram, coeff: &Rational) {
        if let Canonical::Form(c, s) = canonicalize(d) {
            let v = if s > 0 { coeff.clone() } else { -coeff.clone() };
            self.add_term(c, v);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, coeff: &Rational) {
        for (c, v) in &other.terms {
            self.add_term(c.clone(), v * coeff);
        }
    }

    pub fn scale(&self, coeff: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalDiagram, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, c: &CanonicalDiagram) -> Rational {
        self.terms.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    /// The homogeneous part of the given degree.
    pub fn degree_part(&self, degree: usize) -> Self {
        Self {
            terms: self.terms.iter().filter(|(c, _)| c.degree() == degree).map(|(c, v)| (c.clone(), v.clone())).collect(),
        }
    }

    pub fn filter(&self, keep: impl Fn(&CanonicalDiagram) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(c, _)| keep(c)).map(|(c, v)| (c.clone(), v.clone())).collect() }
    }

    /// Degrees that occur, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(CanonicalDiagram::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Bilinear extension of disjoint union.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_diagram(&a.diagram().disjoint_union(b.diagram()), &(x * y));
            }
        }
        out
    }

    /// Applies a linear map given on diagrams.
    pub fn map_linear(&self, f: impl Fn(&Diagram) -> Result<Self>) -> Result<Self> {
        let mut out = Self::zero();
        for (c, v) in &self.terms {
            out.add_scaled(&f(c.diagram())?, v);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(c, v)| json!({ "diagram": c.diagram().to_json(), "coeff": rational_to_json(v) }))
                .collect(),
        )
    }

    /// Reads a list of `{"diagram": .., "coeff": "p/q"}`; a bare diagram is read
    /// as one copy of itself.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(items) => {
                let mut out = Self::zero();
                for item in items {
                    let d = Diagram::from_json(
                        item.get("diagram").ok_or_else(|| Error::Malformed("term needs a `diagram`".into()))?,
                    )?;
                    let c = match item.get("coeff") {
                        Some(c) => rational_from_json(c)?,
                        None => Rational::one(),
                    };
                    out.add_diagram(&d, &c);
                }
                Ok(out)
            }
            Value::Object(_) => Ok(Self::from_diagram(&Diagram::from_json(v)?)),
            _ => Err(Error::Malformed("expected a diagram or a list of terms".into())),
        }
    }
}

impl Add for &DiagramCombination {
    type Output = DiagramCombination;
    fn add(self, rhs: &DiagramCombination) -> DiagramCombination {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &DiagramCombination {
    type Output = DiagramCombination;
    fn sub(self, rhs: &DiagramCombination) -> DiagramCombination {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &DiagramCombination {
    type Output = DiagramCombination;
    fn neg(self) -> DiagramCombination {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let w2 = Diagram::wheel(2).unwrap();
        let mut c = DiagramCombination::from_diagram(&w2);
        c.add_diagram(&w2.flip_vertex(0), &int(1));
        assert!(c.is_zero());
        let c = DiagramCombination::from_diagram(&Diagram::wheel(3).unwrap());
        assert!(c.is_zero());
    }

    #[test]
    fn grading() {
        let w2 = Diagram::wheel(2).unwrap();
        let mut c = DiagramCombination::from_diagram(&w2);
        c.add_diagram(&w2.disjoint_union(&w2), &int(3));
        assert_eq!(c.degrees(), vec![2, 4]);
        assert_eq!(c.degree_part(4).len(), 1);
        let sq = DiagramCombination::from_diagram(&w2).disjoint_union(&DiagramCombination::from_diagram(&w2));
        assert_eq!(sq.scale(&int(3)), c.degree_part(4));
    }

    #[test]
    fn json_round_trip() {
        let mut c = DiagramCombination::from_diagram(&Diagram::theta());
        c.add_diagram(&Diagram::wheel(4).unwrap(), &int(-2));
        assert_eq!(DiagramCombination::from_json(&c.to_json()).unwrap(), c);
    }
}
