use lmo_core::diagrams::{canonicalize, Canonical, Diagram, DiagramCombination};
use lmo_core::exactnum::{int, rat, Rational, SymmetricLaurent, TruncatedSeries};
use lmo_core::knots::{conway_from_pd, conway_from_pd_relabeled, KNOT_TABLE};
use lmo_core::lmo::{lmo_forward, lmo_invert};
use lmo_core::verify::{random_excess_character, random_relabel, random_wheel_union};
use lmo_core::weights::{w_conway, w_eval_diagram, w_eval_with};
use lmo_core::wheels::{a_prime_from_alexander, alexander_from_a_prime, wheel_union};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

/// Symmetric Laurent polynomial normalized so that A(1) = 1.
fn alexander() -> impl Strategy<Value = SymmetricLaurent> {
    prop::collection::vec(-6i64..=6, 0..=2).prop_map(|tail| {
        let c0 = 1 - 2 * tail.iter().sum::<i64>();
        let mut half = vec![c0];
        half.extend(tail);
        SymmetricLaurent::from_half_ints(&half)
    })
}

fn sample_diagram(rng: &mut ChaCha8Rng) -> Diagram {
    if rng.gen_bool(0.5) {
        wheel_union(&random_wheel_union(rng, 8))
    } else {
        let legs = 2 * rng.gen_range(0..=2);
        random_excess_character(rng, legs)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exp_log_round_trip(c in prop::collection::vec(rational(), 1..6)) {
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(c);
        let order = coeffs.len() - 1;
        let s = TruncatedSeries::new(coeffs, order);
        prop_assert_eq!(s.exp().unwrap().log().unwrap(), s);
    }

    #[test]
    fn canonical_form_ignores_labels(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = sample_diagram(&mut rng);
        let e = random_relabel(&d, &mut rng);
        prop_assert_eq!(canonicalize(&d), canonicalize(&e));
    }

    #[test]
    fn flipping_a_vertex_negates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = sample_diagram(&mut rng);
        let trivalent: Vec<usize> = (0..d.num_vertices()).filter(|&v| d.cell(v).len() == 3).collect();
        let v = trivalent[rng.gen_range(0..trivalent.len())];
        match (canonicalize(&d), canonicalize(&d.flip_vertex(v))) {
            (Canonical::Form(a, s), Canonical::Form(b, t)) => {
                prop_assert_eq!(a, b);
                prop_assert_eq!(s, -t);
            }
            (x, y) => prop_assert!(x.is_zero() && y.is_zero()),
        }
    }

    #[test]
    fn conway_weight_on_wheel_unions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = random_wheel_union(&mut rng, 12);
        let d = random_relabel(&wheel_union(&sizes), &mut rng);
        let w = w_conway(&DiagramCombination::from_diagram(&d)).unwrap();
        prop_assert_eq!(w, num_traits::pow(int(-2), sizes.len()));
    }

    #[test]
    fn alexander_a_prime_round_trip(a in alexander()) {
        let max = 2 * a.span().max(1);
        let coeffs = a_prime_from_alexander(&a, max).unwrap();
        prop_assert_eq!(alexander_from_a_prime(&coeffs, a.span()).unwrap(), a);
    }

    #[test]
    fn w_at_three_is_order_independent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = random_wheel_union(&mut rng, 6);
        let terms = lmo_core::closure::closure_terms(&wheel_union(&sizes)).unwrap();
        let t = &terms[rng.gen_range(0..terms.len())];
        let reference = w_eval_diagram(t).unwrap();
        let other = w_eval_with(t, &mut |g: &Diagram| rng.gen_range(0..g.num_darts())).unwrap();
        prop_assert_eq!(other.eval(&int(3)), reference.eval(&int(3)));
    }

    #[test]
    fn skein_ignores_arc_numbering(k in 0..KNOT_TABLE.len(), seed in any::<u64>()) {
        let pd = KNOT_TABLE[k].pd_code();
        prop_assume!(!pd.crossings().is_empty());
        let mut perm: Vec<usize> = (0..2 * pd.crossings().len()).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut ChaCha8Rng::seed_from_u64(seed));
        let c = conway_from_pd_relabeled(&pd, &perm).unwrap();
        prop_assert_eq!(c, conway_from_pd(&pd).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn lmo_round_trip(a in alexander()) {
        let z = lmo_forward(&a, 4).unwrap();
        prop_assert_eq!(lmo_invert(&z, 4, a.span()).unwrap(), a);
    }
}
