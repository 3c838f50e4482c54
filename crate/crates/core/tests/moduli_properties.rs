mod common;

use common::*;
use proptest::prelude::*;

use cuspfol::germs::moduli::{cstar_equivalent, normal_pair_equivalent, NormalPair};
use cuspfol::germs::{schwarzian, GermDiff1, Homography};
use cuspfol::{Coeff, Jet1};

fn rotate(f: &Jet1, eps: &Coeff) -> Jet1 {
    // ε²·f(εz)
    let lin = Jet1::monomial(eps.clone(), 1, f.order());
    f.compose(&lin).unwrap().scale(&(eps * eps))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn schwarzian_ignores_outer_homography(s in germ(10), h in homography()) {
        let outer = h.to_germ(10).compose(&s);
        prop_assert_eq!(schwarzian(&outer).unwrap(), schwarzian(&s).unwrap());
    }

    #[test]
    fn schwarzian_is_equivariant(s in germ(10), eps in nonzero()) {
        let lhs = schwarzian(&s.rescale_source(&eps)).unwrap();
        prop_assert_eq!(lhs, rotate(&schwarzian(&s).unwrap(), &eps));
    }

    #[test]
    fn vanishing_schwarzian_means_homography(h in homography()) {
        let s = h.to_germ(10);
        prop_assert!(schwarzian(&s).unwrap().is_zero());
        let fit = Homography::fit(&s);
        prop_assert_eq!(fit.to_jet(10), s.jet().clone());
    }

    #[test]
    fn cstar_is_an_equivalence(s in germ(9), e1 in prop_oneof![Just(1i64), Just(-1), Just(2)], e2 in prop_oneof![Just(1i64), Just(-1), Just(3)]) {
        let f = schwarzian(&s).unwrap();
        let (a, b) = (Coeff::from_int(e1), Coeff::from_int(e2));
        let g = rotate(&f, &a);
        let h = rotate(&g, &b);
        prop_assert!(cstar_equivalent(&f, &f).equivalent);
        prop_assert!(cstar_equivalent(&f, &g).equivalent);
        prop_assert!(cstar_equivalent(&g, &f).equivalent);
        prop_assert!(cstar_equivalent(&g, &h).equivalent);
        prop_assert!(cstar_equivalent(&f, &h).equivalent);
    }

    #[test]
    fn same_sigma_same_alpha_is_equivalent(s in germ(9)) {
        let a = s.canonical_alpha();
        let v = normal_pair_equivalent(&NormalPair::new(s.clone(), a.clone()), &NormalPair::new(s, a)).unwrap();
        prop_assert!(v.equivalent);
    }
}

#[test]
fn exponential_schwarzian_is_constant() {
    let s = cuspfol::first_integral::exp_minus_one(12);
    let f = schwarzian(&s).unwrap();
    assert_eq!(f, Jet1::constant(q(-1, 2), f.order()));
    let z2 = GermDiff1::new(Jet1::from_ints(&[0, 1, 1], 10)).unwrap();
    assert!(!cstar_equivalent(&schwarzian(&z2).unwrap(), &f.truncate(7)).equivalent);
}
