mod common;

use common::*;
use num_traits::One;
use proptest::prelude::*;

use cuspfol::gluing::cohomology::coboundary_solve;
use cuspfol::gluing::{build_cocycle, cocycle_compose_check, globality_check, step_two_automorphisms, Model};
use cuspfol::{Coeff, Jet2};

#[test]
fn function_support_matches_the_chart_change() {
    for d in 0..=8 {
        for i in 0..=d {
            let j = d - i;
            let f = Jet2::monomial(Coeff::one(), i, j, 8);
            assert_eq!(globality_check(&f, Model::F2).global, j <= 2 * i, "F2 x^{i} y^{j}");
            assert_eq!(globality_check(&f, Model::F1).global, j <= i, "F1 x^{i} y^{j}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn infeasibility_persists_with_order(s in germ(7), alpha in coeff(), t in jet2(7, 5)) {
        let mut seen_infeasible = false;
        for n in 2..=7 {
            let feasible = coboundary_solve(&s.truncate(n), &alpha, &t.truncate(n), n).unwrap().is_feasible();
            prop_assert!(!(seen_infeasible && feasible), "feasible at {} after an infeasible order", n);
            seen_infeasible |= !feasible;
        }
    }

    #[test]
    fn composed_cocycle_obeys_the_pair_relation(h0 in homography(), h1 in homography(), g in germ(8), ap in coeff()) {
        let n = 8;
        let (phi1, phi2) = step_two_automorphisms(&h0, &h1, n).unwrap();
        prop_assert!(phi1.regularity().unwrap().global && phi2.regularity().unwrap().global);
        prop_assert!(phi1.preserves_diagonal().unwrap());
        let c = cocycle_compose_check(&phi1, &build_cocycle(&g, &ap), &phi2).unwrap();
        prop_assert!(c.a.constant_term().is_one());
        let (two_fifths, three_halves) = (q(2, 5), q(3, 2));
        let ratio = |s: &cuspfol::germs::GermDiff1| &s.second_derivative() / &s.first_derivative();
        let lhs = &two_fifths * &(&c.alpha() - &(&three_halves * &ratio(&c.sigma)));
        let h_ratio = &h0.second_derivative() / &h0.first_derivative();
        let rhs = &(&(&two_fifths * &(&ap - &(&three_halves * &ratio(&g)))) * &h0.first_derivative()) - &h_ratio;
        prop_assert_eq!(lhs, rhs);
    }
}
