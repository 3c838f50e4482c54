mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;

use cuspfol::forms::reduce::{reduce_cusp, Verdict};
use cuspfol::forms::{Chart, OneForm};
use cuspfol::parse::parse_form;
use cuspfol::{Jet2, Var};

fn f_z(z: &cuspfol::Coeff, n: usize) -> OneForm {
    let mut a = Jet2::from_int_terms(&[(3, 1, 2), (0, 3, -1)], n);
    a.add_term(2, 2, z);
    OneForm::new(a, Jet2::from_int_terms(&[(1, 2, 1), (4, 0, -1)], n))
}

fn jacobian(p: &Jet2, r: &Jet2, n: usize) -> Jet2 {
    let d = |f: &Jet2, v| f.derive(v).with_order(n);
    d(p, Var::X).mul(&d(r, Var::Y)).sub(&d(p, Var::Y).mul(&d(r, Var::X)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pullback_commutes_with_wedge(
        ua in jet2(6, 4), ub in jet2(6, 4), va in jet2(6, 4), vb in jet2(6, 4),
        p in jet2(6, 3), r in jet2(6, 3), l in nonzero(),
    ) {
        let n = 6;
        // no constant term in the map
        let p = p.sub(&Jet2::constant(p.constant_term(), n)).add(&Jet2::x(n).scale(&l));
        let r = r.sub(&Jet2::constant(r.constant_term(), n)).add(&Jet2::y(n));
        let (u, v) = (OneForm::new(ua, ub), OneForm::new(va, vb));
        let lhs = u.pullback_map(&p, &r).unwrap().wedge(&v.pullback_map(&p, &r).unwrap());
        let rhs = u.wedge(&v).substitute(&p, &r).unwrap().mul(&jacobian(&p, &r, n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dicritical_cone_gains_one_division(cone in jet2(8, 3), hi in jet2(8, 6), hb in jet2(8, 6), radial in any::<bool>()) {
        let n = 8;
        let nu = 3;
        let p = cone.homogeneous_part(nu - 1);
        prop_assume!(!p.is_zero());
        let low = if radial {
            OneForm::radial(n).mul_fn(&p)
        } else {
            OneForm::new(p.mul(&Jet2::x(n)), p.mul(&Jet2::x(n)))
        };
        let keep_high = |f: &Jet2| {
            let mut out = Jet2::zero(n);
            for (i, j, c) in f.terms() {
                if i + j > nu {
                    out.set(i, j, c.clone());
                }
            }
            out
        };
        let w = low.add(&OneForm::new(keep_high(&hi), keep_high(&hb)));
        prop_assert_eq!(w.valuation().unwrap(), nu);
        let tangent = w.radial_tangency(nu).is_some();
        let (_, k) = w.pullback_blowup(Chart::XChart).exceptional_divide(Var::X);
        prop_assert_eq!(k == nu + 1, tangent);
        prop_assert_eq!(tangent, radial);
    }

    #[test]
    fn linear_changes_keep_the_verdict(a in nonzero(), b in coeff(), c in coeff(), d in nonzero(), z in coeff()) {
        let det = &(&a * &d) - &(&b * &c);
        prop_assume!(!det.is_zero());
        let n = 12;
        let (x, y) = (Jet2::x(n), Jet2::y(n));
        let (p, r) = (x.scale(&a).add(&y.scale(&b)), x.scale(&c).add(&y.scale(&d)));
        let w = f_z(&z, n);
        prop_assert_eq!(reduce_cusp(&w.pullback_map(&p, &r).unwrap()).verdict, Verdict::CuspTypeAbsolutelyDicritical);
        let node = OneForm::new(y.clone(), x.clone());
        prop_assert_eq!(reduce_cusp(&node.pullback_map(&p, &r).unwrap()).verdict, reduce_cusp(&node).verdict);
    }

    #[test]
    fn accepted_inputs_satisfy_cusp_relations(z in gaussian()) {
        let rep = reduce_cusp(&f_z(&z, 12));
        prop_assert_eq!(&rep.verdict, &Verdict::CuspTypeAbsolutelyDicritical);
        prop_assert!(rep.relations.unwrap().hold());
    }
}

#[test]
fn radial_form_has_the_wrong_tree() {
    let rep = reduce_cusp(&OneForm::radial(10));
    assert_ne!(rep.verdict, Verdict::CuspTypeAbsolutelyDicritical);
    let rep = reduce_cusp(&parse_form("x dy + y dx", 10).unwrap());
    assert_eq!(rep.verdict, Verdict::NotDicritical);
}
