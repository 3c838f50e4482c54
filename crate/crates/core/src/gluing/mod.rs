//! The two model foliations near the divisor components, the cocycles that
//! glue them, and the automorphisms of each model.
//!
//! Coordinates: `(x₁, y₁)` on the neighbourhood of the `(−2)`-curve, with
//! chart change `x₂ = 1/y₁, y₂ = y₁²x₁`; `(x₃, y₃)` on the neighbourhood of
//! the `(−1)`-curve, with `x₄ = 1/y₃, y₄ = y₃x₃`. Leaves are `{y = const}` on
//! both sides and the cocycle sends `(x₁, y₁)` to `(x₃, y₃)`.

pub mod cohomology;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::OneForm;
use crate::germs::{GermDiff1, Homography};
use crate::jets::{Jet1, Jet2, Var};
use crate::transversal::CornerGerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    /// Neighbourhood of the `(−2)`-curve.
    F2,
    /// Neighbourhood of the `(−1)`-curve.
    F1,
}

impl Model {
    /// Image of the monomial `x^i y^j` in the other chart of the model.
    ///
    /// The frame `x ∂/∂x` goes to `y' ∂/∂y'` in both models, so the same
    /// rule governs coefficients of vector fields `A·x ∂/∂x`.
    pub fn exponent_image(self, i: usize, j: usize) -> (i64, i64) {
        let (i, j) = (i as i64, j as i64);
        match self {
            Model::F2 => (2 * i - j, i),
            Model::F1 => (i - j, i),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::F2 => "F2",
            Model::F1 => "F1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalityReport {
    pub global: bool,
    /// Monomials whose image has a negative exponent.
    pub violations: Vec<(usize, usize)>,
}

/// Whether a function (or a coefficient of `x ∂/∂x`) given in the first chart
/// of `model` extends across the whole model, judged monomial by monomial.
pub fn globality_check(f: &Jet2, model: Model) -> GlobalityReport {
    let violations: Vec<(usize, usize)> = f
        .terms()
        .filter(|&(i, j, _)| {
            let (a, b) = model.exponent_image(i, j);
            a < 0 || b < 0
        })
        .map(|(i, j, _)| (i, j))
        .collect();
    GlobalityReport {
        global: violations.is_empty(),
        violations,
    }
}

/// `(x₁, y₁) ↦ (x₁·A(x₁, y₁) + σ(y₁), σ(y₁))`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingCocycle {
    pub sigma: GermDiff1,
    pub a: Jet2,
}

impl GluingCocycle {
    pub fn new(sigma: GermDiff1, a: Jet2) -> Result<Self> {
        if a.constant_term().is_zero() {
            return Err(Error::NotCocycleShape("A(0,0) = 0"));
        }
        Ok(GluingCocycle { sigma, a })
    }

    pub fn order(&self) -> usize {
        self.sigma.order().min(self.a.order())
    }

    /// Coefficient of `y₁` in `A`, the gluing parameter when `A(0,0) = 1`.
    pub fn alpha(&self) -> Coeff {
        self.a.coeff(0, 1)
    }

    /// Both components as jets at the cocycle's order.
    pub fn map(&self) -> (Jet2, Jet2) {
        let n = self.order();
        let s = Jet2::from_jet1(&self.sigma.jet().truncate(n), Var::Y);
        let first = Jet2::x(n).mul(&self.a.truncate(n)).add(&s);
        (first, s)
    }

    /// Reads a map back into cocycle shape: the second component must depend
    /// on `y₁` only and agree with the first on `{x₁ = 0}`.
    pub fn from_map(first: &Jet2, second: &Jet2) -> Result<Self> {
        if second.terms().any(|(i, _, _)| i > 0) {
            return Err(Error::NotCocycleShape("second component depends on x"));
        }
        let sigma = GermDiff1::new(second.restrict(Var::X))?;
        let s = Jet2::from_jet1(sigma.jet(), Var::Y);
        let a = first
            .sub(&s)
            .div_monomial(1, 0)
            .map_err(|_| Error::NotCocycleShape("first component differs from σ on {x = 0}"))?;
        let n = a.order();
        GluingCocycle::new(sigma.truncate(n), a)
    }

    /// The corner germ, obtained by pulling the foliation `dy₁ = 0` back along
    /// corner coordinates `(u, v)`: `u` is the coordinate `y₁` on the
    /// `(−2)`-curve, `v` the coordinate `y₃` on the `(−1)`-curve, and
    /// `(x₃, y₃) = (σ(u), σ(u) + v)` is carried to `(x₁, y₁)` through the
    /// inverse of the cocycle.
    pub fn corner_germ(&self) -> Result<CornerGerm> {
        let n = self.order();
        let u = Jet2::x(n);
        let v = Jet2::y(n);
        let su = u.compose_outer(self.sigma.jet())?;
        let (x3, y3) = (su.clone(), su.add(&v));
        let y1 = y3.compose_outer(self.sigma.inverse().jet())?;
        // x₁·A(x₁, y₁) = x₃ − σ(y₁), solved by fixed point from x₁ = 0
        let rhs = x3.sub(&y1.compose_outer(self.sigma.jet())?);
        let mut x1 = Jet2::zero(n);
        for _ in 0..=n {
            let a = self.a.with_order(n).substitute(&x1, &y1)?;
            x1 = rhs.div(&a)?;
        }
        let w = OneForm::dy(n).pullback_map(&x1, &y1)?;
        CornerGerm::new(w)
    }
}

/// `(id, α)` gives `A = 1 + α·y₁`.
pub fn build_cocycle(sigma: &GermDiff1, alpha: &Coeff) -> GluingCocycle {
    let n = sigma.order();
    let a = Jet2::from_terms([(0, 0, Coeff::one()), (0, 1, alpha.clone())], n);
    GluingCocycle {
        sigma: sigma.clone(),
        a,
    }
}

/// `(x, y) ↦ (x·A(x, y), h(y))` on one of the models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelAutomorphism {
    pub model: Model,
    pub a: Jet2,
    pub h: Homography,
}

fn h_over_z(h: &Homography, order: usize) -> Jet2 {
    let jet = h.to_jet(order + 1);
    let shifted: Vec<Coeff> = jet.coeffs()[1..].to_vec();
    Jet2::from_jet1(&Jet1::from_coeffs(shifted, order), Var::Y)
}

impl ModelAutomorphism {
    /// On `F2` with `h(z) = z/(a + bz)`: `A = lead·(1 + (b/a)y)²`. On `F1`
    /// with `h(z) = z/(α + βz)`: `A = (α + βy)/(α + βx)²`.
    pub fn from_homography(h: &Homography, model: Model, lead: &Coeff, order: usize) -> Result<Self> {
        let one = Jet2::one(order);
        let mu_y = Jet2::y(order).scale(&h.mu);
        let a = match model {
            Model::F2 => one.add(&mu_y).pow(2).scale(lead),
            Model::F1 => {
                let den = one.add(&Jet2::x(order).scale(&h.mu)).pow(2);
                one.add(&mu_y).scale(&h.lambda).div(&den)?
            }
        };
        Ok(ModelAutomorphism {
            model,
            a,
            h: h.clone(),
        })
    }

    /// `(εx, εy)`
    pub fn homothety(eps: &Coeff, model: Model, order: usize) -> Result<Self> {
        Ok(ModelAutomorphism {
            model,
            a: Jet2::constant(eps.clone(), order),
            h: Homography::new(eps.clone(), Coeff::zero())?,
        })
    }

    pub fn identity(model: Model, order: usize) -> Self {
        ModelAutomorphism {
            model,
            a: Jet2::one(order),
            h: Homography::identity(),
        }
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn map(&self, order: usize) -> (Jet2, Jet2) {
        let n = order.min(self.order());
        let first = Jet2::x(n).mul(&self.a.truncate(n));
        let second = Jet2::from_jet1(&self.h.to_jet(n), Var::Y);
        (first, second)
    }

    /// The factor `K` with `y' = K·y` in the second chart of the model; the
    /// map extends across the model when `K` is global there.
    pub fn second_chart_factor(&self) -> Result<Jet2> {
        let n = self.order();
        let q = h_over_z(&self.h, n);
        Ok(match self.model {
            Model::F2 => q.pow(2).mul(&self.a),
            Model::F1 => q.mul(&self.a),
        })
    }

    pub fn regularity(&self) -> Result<GlobalityReport> {
        Ok(globality_check(&self.second_chart_factor()?, self.model))
    }

    /// On `F1` the map must fix the curve `{x = y}`, i.e. `x·A(x, x) = h(x)`.
    pub fn preserves_diagonal(&self) -> Result<bool> {
        let n = self.order();
        let x = Jet2::x(n);
        let on_diag = x.mul(&self.a.substitute(&x, &x)?).restrict(Var::Y);
        Ok(on_diag == self.h.to_jet(n))
    }
}

/// `Φ₁ ∘ c ∘ Φ₂` put back into cocycle shape, for `Φ₂` on `F2` and `Φ₁` on
/// `F1`. The order drops by one.
pub fn cocycle_compose_check(
    phi1: &ModelAutomorphism,
    c: &GluingCocycle,
    phi2: &ModelAutomorphism,
) -> Result<GluingCocycle> {
    if phi1.model != Model::F1 || phi2.model != Model::F2 {
        return Err(Error::InvalidInput("expected an F1 automorphism after and an F2 one before".into()));
    }
    let n = c.order().min(phi1.order()).min(phi2.order());
    let (p1, p2) = phi2.map(n);
    let (g1, g2) = c.map();
    let (x3, y3) = (g1.with_order(n).substitute(&p1, &p2)?, g2.with_order(n).substitute(&p1, &p2)?);
    let (f1, f2) = phi1.map(n);
    let first = f1.substitute(&x3, &y3)?;
    let second = f2.substitute(&x3, &y3)?;
    GluingCocycle::from_map(&first, &second)
}

/// The Step-2 pair of automorphisms for `h₀` (on `F2`) and `h₁` (on `F1`):
/// the `F2` factor leads with `1/h₁'(0)`, so that the composite keeps
/// `A(0,0) = 1`.
pub fn step_two_automorphisms(
    h0: &Homography,
    h1: &Homography,
    order: usize,
) -> Result<(ModelAutomorphism, ModelAutomorphism)> {
    let lead = h1.first_derivative().inv().ok_or(Error::NotInvertible)?;
    let phi2 = ModelAutomorphism::from_homography(h0, Model::F2, &lead, order)?;
    let phi1 = ModelAutomorphism::from_homography(h1, Model::F1, &Coeff::one(), order)?;
    Ok((phi1, phi2))
}
