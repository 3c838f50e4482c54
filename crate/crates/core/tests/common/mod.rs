#![allow(dead_code)]

use proptest::prelude::*;

use cuspfol::germs::{GermDiff1, Homography};
use cuspfol::{Coeff, Jet1, Jet2};

pub fn q(n: i64, d: i64) -> Coeff {
    Coeff::from_frac(n, d)
}

pub fn coeff() -> impl Strategy<Value = Coeff> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero() -> impl Strategy<Value = Coeff> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=4).prop_map(|(n, d)| q(n, d))
}

pub fn gaussian() -> impl Strategy<Value = Coeff> {
    (coeff(), coeff()).prop_map(|(a, b)| &a + &(&b * &Coeff::i()))
}

pub fn jet1(order: usize) -> impl Strategy<Value = Jet1> {
    proptest::collection::vec(coeff(), order + 1).prop_map(move |c| Jet1::from_coeffs(c, order))
}

pub fn jet2(order: usize, max_deg: usize) -> impl Strategy<Value = Jet2> {
    proptest::collection::vec((0..=max_deg, 0..=max_deg, coeff()), 0..8).prop_map(move |ts| {
        let mut j = Jet2::zero(order);
        for (i, k, c) in ts {
            if i + k <= order {
                j.add_term(i, k, &c);
            }
        }
        j
    })
}

pub fn germ(order: usize) -> impl Strategy<Value = GermDiff1> {
    (nonzero(), proptest::collection::vec(coeff(), order - 1)).prop_map(move |(lin, rest)| {
        let mut c = vec![Coeff::from_int(0), lin];
        c.extend(rest);
        GermDiff1::new(Jet1::from_coeffs(c, order)).unwrap()
    })
}

pub fn homography() -> impl Strategy<Value = Homography> {
    (nonzero(), coeff()).prop_map(|(l, m)| Homography::new(l, m).unwrap())
}
