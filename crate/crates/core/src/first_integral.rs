//! Rational first integrals through the transversal structure: a relation
//! `R₁ ∘ σ = R₂` between rational functions, and rationality tests on jets.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::germs::{GermDiff1, Homography};
use crate::jets::{Jet1, Jet2, Poly};
use crate::linalg::{Matrix, Solve};

/// `num / den` in lowest terms; `den(0) = 1` when `den(0) ≠ 0`, otherwise
/// `den` is monic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rational1 {
    pub num: Poly,
    pub den: Poly,
}

impl Rational1 {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let c0 = den.coeff(0);
        let norm = if c0.is_zero() { den.lead() } else { c0 };
        let inv = norm.inv().expect("nonzero");
        Ok(Rational1 {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn polynomial(p: Poly) -> Self {
        Rational1::new(p, Poly::one()).expect("nonzero denominator")
    }

    pub fn identity() -> Self {
        Rational1::polynomial(Poly::monomial(1))
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// `R ∘ h` for a homography `h(z) = λz/(1 + μz)`.
    pub fn compose_homography(&self, h: &Homography) -> Result<Rational1> {
        let d = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let lz = Poly::new(vec![Coeff::zero(), h.lambda.clone()]);
        let den_h = Poly::new(vec![Coeff::one(), h.mu.clone()]);
        let clear = |p: &Poly| {
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                let mut term = Poly::constant(c.clone());
                for _ in 0..k {
                    term = term.mul(&lz);
                }
                for _ in k..d {
                    term = term.mul(&den_h);
                }
                acc = acc.add(&term);
            }
            acc
        };
        Rational1::new(clear(&self.num), clear(&self.den))
    }

    /// Series expansion at 0, when the denominator does not vanish there.
    pub fn expand(&self, order: usize) -> Result<Jet1> {
        self.num.to_jet(order).div(&self.den.to_jet(order))
    }
}

impl fmt::Display for Rational1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num.fmt_var("z"))
        } else {
            write!(f, "({}) / ({})", self.num.fmt_var("z"), self.den.fmt_var("z"))
        }
    }
}

fn poly_at(p: &Poly, s: &Jet1) -> Jet1 {
    let n = s.order();
    let mut acc = Jet1::zero(n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(s);
        acc.set_coeff(0, &acc.coeff(0) + c);
    }
    acc
}

/// `P₁(σ)·Q₂ − P₂·Q₁(σ) ≡ 0` to order `N`.
pub fn verify_rational_relation(r1: &Rational1, r2: &Rational1, sigma: &GermDiff1, order: usize) -> bool {
    let s = sigma.jet().truncate(order);
    let n = s.order();
    let lhs = poly_at(&r1.num, &s).mul(&r2.den.to_jet(n));
    let rhs = r2.num.to_jet(n).mul(&poly_at(&r1.den, &s));
    lhs == rhs
}

/// `det (g_{d+1+i−j})_{0 ≤ i,j ≤ d}`; it vanishes whenever `g` is the expansion
/// of a rational function with numerator and denominator of degree `≤ d`.
pub fn hankel_determinant(g: &Jet1, d: usize) -> Result<Coeff> {
    if g.order() < 2 * d + 1 {
        return Err(Error::OrderTooSmall {
            have: g.order(),
            need: 2 * d + 1,
        });
    }
    let mut m = Matrix::zeros(d + 1, d + 1);
    for i in 0..=d {
        for j in 0..=d {
            let k = d + 1 + i;
            if k >= j {
                m.set(i, j, g.coeff(k - j));
            }
        }
    }
    Ok(m.det())
}

/// The rational function of type `(≤ d, ≤ d)` whose expansion agrees with
/// `g` to order `N`, if any. Requires `N ≥ 2d + 2`.
pub fn hankel_rationality(g: &Jet1, d: usize, order: usize) -> Result<Option<Rational1>> {
    let n = order.min(g.order());
    if n < 2 * d + 2 {
        return Err(Error::OrderTooSmall { have: n, need: 2 * d + 2 });
    }
    // Q = 1 + q₁z + … + q_d z^d kills the coefficients d+1..N of g·Q
    let rows: Vec<Vec<Coeff>> = (d + 1..=n)
        .map(|k| (1..=d).map(|j| g.coeff(k - j)).collect())
        .collect();
    let rhs: Vec<Coeff> = (d + 1..=n).map(|k| -g.coeff(k)).collect();
    let q = if d == 0 {
        if rhs.iter().all(Zero::is_zero) {
            Vec::new()
        } else {
            return Ok(None);
        }
    } else {
        match Matrix::from_rows(rows).solve(&rhs) {
            Solve::Solved(q) => q,
            Solve::Inconsistent { .. } => return Ok(None),
        }
    };
    let mut den = vec![Coeff::one()];
    den.extend(q);
    let den = Poly::new(den);
    let num = Poly::from_jet(&g.truncate(n).mul(&den.to_jet(n)).truncate(d));
    let r = Rational1::new(num, den)?;
    if r.expand(n)? != g.truncate(n) {
        return Ok(None);
    }
    Ok(Some(r))
}

/// The homography agreeing with `σ` to order `N`, if `σ` is one.
pub fn homography_of(sigma: &GermDiff1) -> Option<Homography> {
    let h = Homography::fit(sigma);
    (h.to_jet(sigma.order()) == *sigma.jet()).then_some(h)
}

/// `(y² + x³)/(xy)` and `(y² + x³)/(xy) + x` as numerator/denominator pairs.
pub fn homographic_case_first_integrals(order: usize) -> [(Jet2, Jet2); 2] {
    let den = Jet2::from_int_terms(&[(1, 1, 1)], order);
    [
        (Jet2::from_int_terms(&[(0, 2, 1), (3, 0, 1)], order), den.clone()),
        (Jet2::from_int_terms(&[(0, 2, 1), (3, 0, 1), (2, 1, 1)], order), den),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstIntegralSearch {
    pub degree_bound: usize,
    pub order: usize,
    /// Each tried `R₁` with the rational `R₁ ∘ σ` found, if any.
    pub trials: Vec<(Rational1, Option<Rational1>)>,
    /// The first relation `R₁ ∘ σ = R₂` found.
    pub relation: Option<(Rational1, Rational1)>,
    /// Hankel determinants of `σ` itself for degrees `1..=d`.
    pub sigma_hankel: Vec<Coeff>,
    /// A negative answer only covers `R₁ = z^k`, `k ≤ d`, with `R₂` of type
    /// `(≤ d, ≤ d)`; it is not a proof of non-existence.
    pub bounded: bool,
}

/// Tries `R₁ = z^k` for `1 ≤ k ≤ d` and tests `R₁ ∘ σ` for rationality.
pub fn no_first_integral_witness(sigma: &GermDiff1, d: usize, order: usize) -> Result<FirstIntegralSearch> {
    let s = sigma.jet().truncate(order);
    let mut trials = Vec::new();
    let mut relation = None;
    let mut pow = Jet1::constant(Coeff::one(), s.order());
    for k in 1..=d {
        pow = pow.mul(&s);
        let r1 = Rational1::polynomial(Poly::monomial(k));
        let found = hankel_rationality(&pow, d, order)?;
        if relation.is_none() {
            if let Some(r2) = &found {
                relation = Some((r1.clone(), r2.clone()));
            }
        }
        trials.push((r1, found));
    }
    let sigma_hankel = (1..=d)
        .map(|k| hankel_determinant(&s, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(FirstIntegralSearch {
        degree_bound: d,
        order,
        trials,
        relation,
        sigma_hankel,
        bounded: true,
    })
}

/// Jet of `e^z − 1`.
pub fn exp_minus_one(order: usize) -> GermDiff1 {
    let mut c = vec![Coeff::zero(); order + 1];
    let mut fact = Coeff::one();
    for (k, slot) in c.iter_mut().enumerate().skip(1) {
        fact = &fact * &Coeff::from_int(k as i64);
        *slot = fact.inv().expect("nonzero");
    }
    GermDiff1::new(Jet1::from_coeffs(c, order)).expect("invertible")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Rational1 {
        Rational1::identity()
    }

    #[test]
    fn relations() {
        let id = GermDiff1::identity(10);
        assert!(verify_rational_relation(&z(), &z(), &id, 10));
        let z2 = Rational1::polynomial(Poly::monomial(2));
        let neg = GermDiff1::new(Jet1::from_ints(&[0, -1], 10)).unwrap();
        assert!(verify_rational_relation(&z2, &z2, &neg, 10));
        let s = GermDiff1::new(Jet1::from_ints(&[0, 1, 1], 10)).unwrap();
        assert!(!verify_rational_relation(&z(), &z(), &s, 10));
    }

    #[test]
    fn geometric_series_and_polynomials() {
        let g = Jet1::from_coeffs(vec![Coeff::one(); 11], 10);
        let r = hankel_rationality(&g, 1, 10).unwrap().unwrap();
        assert_eq!(r.num, Poly::one());
        assert_eq!(r.den, Poly::from_ints(&[1, -1]));
        let cube = Jet1::monomial(Coeff::one(), 3, 10);
        let r = hankel_rationality(&cube, 3, 10).unwrap().unwrap();
        assert_eq!((r.num, r.den), (Poly::monomial(3), Poly::one()));
        assert!(hankel_rationality(&cube, 5, 10).is_err());
    }

    #[test]
    fn exponential_is_not_rational() {
        let e = exp_minus_one(16);
        assert!(hankel_rationality(e.jet(), 4, 16).unwrap().is_none());
        for d in 1..=4 {
            assert!(!hankel_determinant(e.jet(), d).unwrap().is_zero());
        }
        let rep = no_first_integral_witness(&e, 3, 16).unwrap();
        assert!(rep.relation.is_none());
    }

    #[test]
    fn homographic_relations_are_found() {
        let rep = no_first_integral_witness(&GermDiff1::identity(16), 1, 16).unwrap();
        assert_eq!(rep.relation, Some((z(), z())));
        let h = Homography::new(Coeff::one(), Coeff::from_int(-1)).unwrap().to_germ(16);
        let rep = no_first_integral_witness(&h, 2, 16).unwrap();
        let (r1, r2) = rep.relation.unwrap();
        assert!(verify_rational_relation(&r1, &r2, &h, 16));
        assert_eq!(homography_of(&h).unwrap().mu, Coeff::from_int(-1));
    }

    #[test]
    fn homography_composition() {
        let h = Homography::new(Coeff::from_int(2), Coeff::from_int(3)).unwrap();
        let r = Rational1::new(Poly::from_ints(&[0, 1, 1]), Poly::from_ints(&[1, 0, 2])).unwrap();
        let lhs = r.compose_homography(&h).unwrap().expand(10).unwrap();
        let rhs = r.expand(10).unwrap().compose(&h.to_jet(10)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
