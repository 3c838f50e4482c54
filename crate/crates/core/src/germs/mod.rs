//! Germs of diffeomorphisms of (C,0), homographies fixing 0, the Schwarzian
//! derivative and the moduli decisions built on it.

pub mod lattice;
pub mod moduli;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::jets::Jet1;

pub use moduli::{
    cstar_equivalent, homographic_symmetries, moduli_class, normal_pair_equivalent, CStarVerdict,
    ModuliClass, NormalPair, PairVerdict, SymmetryReport,
};

/// An invertible germ `z ↦ c₁z + c₂z² + …`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GermDiff1 {
    jet: Jet1,
}

impl GermDiff1 {
    pub fn new(jet: Jet1) -> Result<Self> {
        if jet.order() < 1 || !jet.coeff(0).is_zero() || jet.coeff(1).is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(GermDiff1 { jet })
    }

    pub fn identity(order: usize) -> Self {
        GermDiff1 {
            jet: Jet1::identity(order),
        }
    }

    pub fn jet(&self) -> &Jet1 {
        &self.jet
    }

    pub fn order(&self) -> usize {
        self.jet.order()
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &GermDiff1) -> GermDiff1 {
        GermDiff1 {
            jet: self.jet.compose(&inner.jet).expect("germs fix 0"),
        }
    }

    pub fn inverse(&self) -> GermDiff1 {
        GermDiff1 {
            jet: self.jet.comp_inverse().expect("germ is invertible"),
        }
    }

    pub fn truncate(&self, order: usize) -> GermDiff1 {
        GermDiff1 {
            jet: self.jet.truncate(order),
        }
    }

    /// `σ'(0)`
    pub fn first_derivative(&self) -> Coeff {
        self.jet.coeff(1)
    }

    /// `σ''(0)`, twice the coefficient of `z²`.
    pub fn second_derivative(&self) -> Coeff {
        &self.jet.coeff(2) * &Coeff::from_int(2)
    }

    /// `(3/2)·σ''(0)/σ'(0)`, the gluing parameter that makes a normal pair
    /// canonical.
    pub fn canonical_alpha(&self) -> Coeff {
        &(&self.second_derivative() * &Coeff::from_frac(3, 2)) / &self.first_derivative()
    }

    /// `σ(εz)`
    pub fn rescale_source(&self, eps: &Coeff) -> GermDiff1 {
        let lin = Jet1::monomial(eps.clone(), 1, self.order());
        GermDiff1 {
            jet: self.jet.compose(&lin).expect("linear map fixes 0"),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.jet == Jet1::identity(self.order())
    }
}

impl fmt::Display for GermDiff1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.jet)
    }
}

impl fmt::Debug for GermDiff1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GermDiff1({})", self.jet)
    }
}

/// `z ↦ λz / (1 + μz)`, the Möbius maps fixing 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Homography {
    pub lambda: Coeff,
    pub mu: Coeff,
}

impl Homography {
    pub fn new(lambda: Coeff, mu: Coeff) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(Homography { lambda, mu })
    }

    pub fn identity() -> Self {
        Homography {
            lambda: Coeff::one(),
            mu: Coeff::zero(),
        }
    }

    /// `z ↦ z / (a + bz)`
    pub fn from_denominator(a: Coeff, b: Coeff) -> Result<Self> {
        let inv = a.inv().ok_or(Error::NotInvertible)?;
        Ok(Homography {
            mu: &b * &inv,
            lambda: inv,
        })
    }

    /// The homography sharing the 2-jet of `s`.
    pub fn fit(s: &GermDiff1) -> Self {
        let c1 = s.jet().coeff(1);
        let c2 = s.jet().coeff(2);
        Homography {
            mu: -(&c2 / &c1),
            lambda: c1,
        }
    }

    pub fn to_jet(&self, order: usize) -> Jet1 {
        let mut coeffs = vec![Coeff::zero(); order + 1];
        let neg_mu = -&self.mu;
        let mut term = self.lambda.clone();
        for c in coeffs.iter_mut().skip(1) {
            *c = term.clone();
            term = &term * &neg_mu;
        }
        Jet1::from_coeffs(coeffs, order)
    }

    pub fn to_germ(&self, order: usize) -> GermDiff1 {
        GermDiff1::new(self.to_jet(order)).expect("λ ≠ 0")
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Homography) -> Homography {
        Homography {
            lambda: &self.lambda * &inner.lambda,
            mu: &inner.mu + &(&self.mu * &inner.lambda),
        }
    }

    pub fn inverse(&self) -> Homography {
        let inv = self.lambda.inv().expect("λ ≠ 0");
        Homography {
            mu: -(&self.mu * &inv),
            lambda: inv,
        }
    }

    /// `h'(0) = λ`
    pub fn first_derivative(&self) -> Coeff {
        self.lambda.clone()
    }

    /// `h''(0) = −2λμ`
    pub fn second_derivative(&self) -> Coeff {
        &(&self.lambda * &self.mu) * &Coeff::from_int(-2)
    }

    pub fn eval(&self, z: &Coeff) -> Option<Coeff> {
        let den = &Coeff::one() + &(&self.mu * z);
        den.inv().map(|d| &(&self.lambda * z) * &d)
    }
}

impl fmt::Display for Homography {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |c: &Coeff| {
            if c.is_real() || c.re().is_zero() {
                c.to_string()
            } else {
                format!("({c})")
            }
        };
        if self.mu.is_zero() {
            write!(f, "z ↦ {}·z", wrap(&self.lambda))
        } else {
            write!(f, "z ↦ {}·z/(1 + {}·z)", wrap(&self.lambda), wrap(&self.mu))
        }
    }
}

/// Schwarzian derivative `s'''/s' − (3/2)(s''/s')²`, returned at order `N − 3`.
///
/// Computed as `q' − q²/2` with `q = s''/s'`.
pub fn schwarzian(s: &GermDiff1) -> Result<Jet1> {
    let n = s.order();
    if n < 3 {
        return Err(Error::OrderTooSmall { have: n, need: 3 });
    }
    let d1 = s.jet().derive();
    let d2 = d1.derive();
    let q = d2.div(&d1)?;
    let half = Coeff::from_frac(1, 2);
    Ok(q.derive().sub(&q.mul(&q).scale(&half)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn germ(c: &[i64], n: usize) -> GermDiff1 {
        GermDiff1::new(Jet1::from_ints(c, n)).unwrap()
    }

    #[test]
    fn schwarzian_of_quadratic() {
        // −6/(1+2z)²
        let s = schwarzian(&germ(&[0, 1, 1], 10)).unwrap();
        let expect = Jet1::constant(Coeff::from_int(-6), 7)
            .div(&Jet1::from_ints(&[1, 4, 4], 7))
            .unwrap();
        assert_eq!(s, expect);
        assert_eq!(s.coeff(1), Coeff::from_int(24));
        assert_eq!(s.coeff(2), Coeff::from_int(-72));
    }

    #[test]
    fn homographies_have_zero_schwarzian() {
        let h = Homography::new(Coeff::from_int(3), Coeff::from_frac(-2, 7)).unwrap();
        assert!(schwarzian(&h.to_germ(12)).unwrap().is_zero());
        assert_eq!(schwarzian(&germ(&[0, 1], 2)), Err(Error::OrderTooSmall { have: 2, need: 3 }));
    }

    #[test]
    fn homography_group_law() {
        let a = Homography::new(Coeff::from_int(2), Coeff::from_int(1)).unwrap();
        let b = Homography::new(Coeff::from_frac(1, 3), Coeff::from_int(-4)).unwrap();
        let n = 9;
        assert_eq!(
            a.compose(&b).to_jet(n),
            a.to_jet(n).compose(&b.to_jet(n)).unwrap()
        );
        assert_eq!(a.compose(&a.inverse()), Homography::identity());
        let h = Homography::from_denominator(Coeff::from_int(2), Coeff::from_int(3)).unwrap();
        assert_eq!(h.lambda, Coeff::from_frac(1, 2));
        assert_eq!(h.mu, Coeff::from_frac(3, 2));
        assert_eq!(a.second_derivative(), &a.to_jet(4).coeff(2) * &Coeff::from_int(2));
    }
}
