//! Closing the legs of diagrams, the circle substitution, the contraction
//! `iota_m` and the projection onto the wheel algebra.

use rayon::prelude::*;

use crate::diagrams::{canonicalize, classify_components, Canonical, Diagram, DiagramCombination};
use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};
use crate::wheels::WheelSeries;

/// All perfect matchings of `0..n`, smallest unmatched element first.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    }
    out
}

/// The closure of a diagram: a combination of leg-free diagrams, possibly with
/// circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    combination: DiagramCombination,
}

impl ClosureResult {
    pub fn combination(&self) -> &DiagramCombination {
        &self.combination
    }

    pub fn into_combination(self) -> DiagramCombination {
        self.combination
    }

    /// Replaces every circle by the scalar `-2m`.
    pub fn o_substitute(&self, m: usize) -> DiagramCombination {
        o_substitute(&self.combination, m)
    }
}

/// Glues one matching of the legs.
fn close_with(d: &Diagram, legs: &[usize], matching: &[(usize, usize)]) -> Diagram {
    let leg_vertices: Vec<usize> = legs.iter().map(|&x| d.owner(x)).collect();
    let joins: Vec<(usize, usize)> = matching.iter().map(|&(a, b)| (legs[a], legs[b])).collect();
    d.remove_and_join(&leg_vertices, &joins)
}

/// Sum over all `(2k-1)!!` ways of joining the `2k` legs in pairs.
pub fn close(d: &Diagram) -> Result<ClosureResult> {
    let legs = d.leg_darts();
    if legs.len() % 2 == 1 {
        return Err(Error::Domain(format!("cannot close a diagram with {} legs", legs.len())));
    }
    let matchings = perfect_matchings(legs.len());
    let forms: Vec<Canonical> = if matchings.len() > 64 {
        matchings.par_iter().map(|m| canonicalize(&close_with(d, &legs, m))).collect()
    } else {
        matchings.iter().map(|m| canonicalize(&close_with(d, &legs, m))).collect()
    };
    let mut combination = DiagramCombination::zero();
    for f in forms {
        if let Canonical::Form(c, s) = f {
            combination.add_term(c, int(s as i64));
        }
    }
    Ok(ClosureResult { combination })
}

/// The raw closure terms before merging, one per matching.
pub fn closure_terms(d: &Diagram) -> Result<Vec<Diagram>> {
    let legs = d.leg_darts();
    if legs.len() % 2 == 1 {
        return Err(Error::Domain(format!("cannot close a diagram with {} legs", legs.len())));
    }
    Ok(perfect_matchings(legs.len()).iter().map(|m| close_with(d, &legs, m)).collect())
}

pub fn close_combination(x: &DiagramCombination) -> Result<DiagramCombination> {
    x.map_linear(|d| close(d).map(ClosureResult::into_combination))
}

/// Each diagram with `c` circles becomes `(-2m)^c` times the circle-free diagram.
pub fn o_substitute(x: &DiagramCombination, m: usize) -> DiagramCombination {
    let value = int(-2 * m as i64);
    let mut out = DiagramCombination::zero();
    for (c, v) in x.iter() {
        let circles = c.diagram().circles();
        let factor = num_traits::pow::pow(value.clone(), circles);
        out.add_diagram(&c.diagram().clone().with_circles(0), &(v * factor));
    }
    out
}

/// `O_{-2m}(clos C)` when `C` has exactly `2m` legs, zero otherwise.
pub fn iota(d: &Diagram, m: usize) -> Result<DiagramCombination> {
    if d.legs() != 2 * m {
        return Ok(DiagramCombination::zero());
    }
    Ok(close(d)?.o_substitute(m))
}

pub fn iota_combination(x: &DiagramCombination, m: usize) -> Result<DiagramCombination> {
    x.map_linear(|d| iota(d, m))
}

/// Compares `O_{-2m}(clos(C + I))` with `(-2)(m - k) O_{-2m}(clos C)` for a
/// diagram `C` with `2k` legs.
pub fn interval_identity_check(c: &Diagram, m: usize) -> Result<bool> {
    let legs = c.legs();
    if legs % 2 == 1 {
        return Err(Error::Domain(format!("diagram has an odd number of legs ({legs})")));
    }
    let k = (legs / 2) as i64;
    let lhs = close(&c.disjoint_union(&Diagram::interval()))?.o_substitute(m);
    let rhs = close(c)?.o_substitute(m).scale(&int(-2 * (m as i64 - k)));
    Ok(lhs == rhs)
}

/// Sign relating the canonical representative of the wheel with `n` legs to
/// the standard wheel.
pub(crate) fn wheel_sign(n: usize) -> i8 {
    match canonicalize(&Diagram::wheel(n).expect("positive size")) {
        Canonical::Form(_, s) => s,
        Canonical::Zero => 0,
    }
}

/// Projection onto the wheel algebra on interval-free combinations: keeps the
/// terms all of whose components are wheels and drops the rest.
pub fn p_wh(x: &DiagramCombination) -> Result<WheelSeries> {
    let max = x.degrees().last().copied().unwrap_or(0);
    let mut out = WheelSeries::zero(max);
    for (c, v) in x.iter() {
        let d = c.diagram();
        if d.circles() > 0 {
            return Err(Error::Unsupported("circle components are not Chinese characters".into()));
        }
        let reports = classify_components(d);
        if reports.iter().any(|r| r.is_interval) {
            return Err(Error::Unsupported(
                "interval components need the deframing map, which is only available on interval-free input".into(),
            ));
        }
        if !reports.iter().all(|r| r.is_wheel()) {
            continue;
        }
        let mut sizes: Vec<usize> = reports.iter().map(|r| r.wheel.unwrap()).collect();
        sizes.sort_unstable();
        // canonical components are the canonical wheels; odd wheels never survive
        let sign: i8 = sizes.iter().map(|&n| wheel_sign(n)).product();
        out.add(sizes, v * Rational::from_integer(sign.into()))?;
    }
    Ok(out)
}

/// Fact-2 identity with trivial correction factors: `{iota_m(b)}_m` against
/// `clos(P_wh({b}_{2m}))`.
pub fn fact2_check(b: &DiagramCombination, m: usize) -> Result<bool> {
    let lhs = iota_combination(b, m)?.degree_part(m);
    let wheels = p_wh(&b.degree_part(2 * m))?;
    let rhs = close_combination(&wheels.to_combination())?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn double_factorial(n: usize) -> usize {
        (1..=n).rev().step_by(2).product()
    }

    #[test]
    fn matching_counts() {
        for k in 0..=5 {
            assert_eq!(perfect_matchings(2 * k).len(), double_factorial(2 * k - usize::from(k > 0)).max(1));
        }
        assert_eq!(perfect_matchings(10).len(), 945);
        assert!(perfect_matchings(3).is_empty());
    }

    #[test]
    fn close_wheel2_is_theta() {
        let c = close(&Diagram::wheel(2).unwrap()).unwrap();
        assert_eq!(c.combination(), &DiagramCombination::from_diagram(&Diagram::theta()));
    }

    #[test]
    fn close_interval_is_circle() {
        let c = close(&Diagram::interval()).unwrap();
        assert_eq!(c.combination(), &DiagramCombination::from_diagram(&Diagram::circles_only(1)));
    }

    #[test]
    fn close_needs_even_legs() {
        let y = Diagram::new(vec![vec![0, 1, 2], vec![3], vec![4], vec![5]], &[(0, 3), (1, 4), (2, 5)], 0).unwrap();
        assert!(close(&y).is_err());
    }

    #[test]
    fn closure_term_count_and_degrees() {
        let d = Diagram::wheel(4).unwrap().disjoint_union(&Diagram::wheel(2).unwrap());
        let terms = closure_terms(&d).unwrap();
        assert_eq!(terms.len(), 15);
        assert!(terms.iter().all(|t| t.degree() == d.degree() - d.legs() / 2 && t.legs() == 0));
    }

    #[test]
    fn circle_substitution() {
        let one = DiagramCombination::from_diagram(&Diagram::circles_only(1));
        assert_eq!(o_substitute(&one, 1), DiagramCombination::one().scale(&int(-2)));
        let two = DiagramCombination::from_diagram(&Diagram::circles_only(2));
        assert_eq!(o_substitute(&two, 2), DiagramCombination::one().scale(&int(16)));
        let theta = DiagramCombination::from_diagram(&Diagram::theta());
        assert_eq!(o_substitute(&theta, 3), theta);
    }

    #[test]
    fn iota_examples() {
        let w2 = Diagram::wheel(2).unwrap();
        assert_eq!(iota(&w2, 1).unwrap(), DiagramCombination::from_diagram(&Diagram::theta()));
        assert!(iota(&w2, 2).unwrap().is_zero());
        assert_eq!(iota(&Diagram::interval(), 1).unwrap(), DiagramCombination::one().scale(&int(-2)));
    }

    #[test]
    fn interval_identity_examples() {
        assert!(interval_identity_check(&Diagram::wheel(2).unwrap(), 2).unwrap());
        assert!(interval_identity_check(&Diagram::interval(), 2).unwrap());
        let lhs = close(&Diagram::interval().disjoint_union(&Diagram::interval())).unwrap().o_substitute(2);
        assert_eq!(lhs, DiagramCombination::one().scale(&int(8)));
        for m in 0..4 {
            assert!(interval_identity_check(&Diagram::empty(), m).unwrap());
        }
    }

    #[test]
    fn p_wh_examples() {
        let w = Diagram::wheel(2).unwrap().disjoint_union(&Diagram::wheel(4).unwrap());
        let p = p_wh(&DiagramCombination::from_diagram(&w)).unwrap();
        assert_eq!(p.coeff(&[2, 4]), int(1));
        assert_eq!(p.iter().count(), 1);
        // connected, two legs, four trivalent vertices: a wheel with a chord
        let chorded = Diagram::new(
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11], vec![12], vec![13]],
            &[(1, 3), (4, 6), (7, 9), (10, 0), (2, 12), (5, 13), (8, 11)],
            0,
        )
        .unwrap();
        assert_eq!(chorded.legs(), 2);
        let x = DiagramCombination::from_diagram(&chorded);
        assert!(!x.is_zero());
        assert!(p_wh(&x).unwrap().is_zero());
        let bad = DiagramCombination::from_diagram(&Diagram::interval().disjoint_union(&Diagram::wheel(2).unwrap()));
        assert!(matches!(p_wh(&bad), Err(Error::Unsupported(_))));
    }

    #[test]
    fn p_wh_respects_orientation() {
        let w4 = Diagram::wheel(4).unwrap();
        let mut x = DiagramCombination::zero();
        x.add_diagram(&w4.flip_vertex(1), &rat(3, 5));
        assert_eq!(p_wh(&x).unwrap().coeff(&[4]), rat(-3, 5));
    }

    #[test]
    fn fact2_examples() {
        let w2 = Diagram::wheel(2).unwrap();
        assert!(fact2_check(&DiagramCombination::from_diagram(&w2), 1).unwrap());
        assert!(fact2_check(&DiagramCombination::from_diagram(&w2.disjoint_union(&w2)), 2).unwrap());
    }
}
