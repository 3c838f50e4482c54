//! First integrals of regular corner germs and the transversal structure
//! they induce between the two divisor components.

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::OneForm;
use crate::germs::GermDiff1;
use crate::jets::{Jet2, Var};
use crate::linalg::{Matrix, Solve};

/// A regular germ `A du + B dv` at the corner, transverse to both axes.
///
/// `{v = 0}` is the strict transform of the first exceptional curve and
/// `{u = 0}` is the second one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerGerm {
    form: OneForm,
}

impl CornerGerm {
    pub fn new(form: OneForm) -> Result<Self> {
        if form.a.constant_term().is_zero() {
            return Err(Error::InvalidCornerGerm("not transverse to {u = 0}: A(0,0) = 0"));
        }
        if form.b.constant_term().is_zero() {
            return Err(Error::InvalidCornerGerm("not transverse to {v = 0}: B(0,0) = 0"));
        }
        Ok(CornerGerm {
            form: form.with_names("u", "v"),
        })
    }

    pub fn form(&self) -> &OneForm {
        &self.form
    }

    /// Precomposes the chart with `(u, v) ↦ (su·u, sv·v)`.
    pub fn rescale(&self, su: &Coeff, sv: &Coeff) -> Result<CornerGerm> {
        let n = self.form.order();
        let w = self
            .form
            .pullback_map(&Jet2::x(n).scale(su), &Jet2::y(n).scale(sv))?;
        CornerGerm::new(w)
    }
}

/// Formal first integral `H` with `H(0,0) = 0`, `dH ∧ ω = 0` to the form's
/// order `n` (or `order` if smaller), normalized by `H(u,0) = u`. `H` is
/// returned at order `n + 1`.
pub fn regular_first_integral(c: &CornerGerm, order: usize) -> Result<Jet2> {
    let w = c.form();
    let n = order.min(w.order());
    let (a, b) = (w.a.truncate(n), w.b.truncate(n));
    let mut h = Jet2::zero(n + 1);
    h.set(1, 0, Coeff::one());
    // equation H_u·B − H_v·A = 0, read at degree d, fixes H's degree d+1 part
    for d in 0..=n {
        let known = h.derive(Var::X).truncate(d).mul(&b.truncate(d))
            .sub(&h.derive(Var::Y).truncate(d).mul(&a.truncate(d)));
        let rhs: Vec<Coeff> = (0..=d).map(|i| -known.coeff(i, d - i)).collect();
        // unknowns h_{i, d+1−i} for i = 0..=d (the pure u^{d+1} term is fixed)
        let mut m = Matrix::zeros(d + 1, d + 1);
        let (a0, b0) = (a.constant_term(), b.constant_term());
        for i in 0..=d {
            let j = d + 1 - i;
            // ∂u term lands on u^{i−1}v^{j}: row i−1
            if i > 0 {
                m.set(i - 1, i, &b0 * &Coeff::from_int(i as i64));
            }
            // ∂v term lands on u^{i}v^{j−1}: row i
            let cur = m.get(i, i).clone();
            m.set(i, i, &cur - &(&a0 * &Coeff::from_int(j as i64)));
        }
        match m.solve(&rhs) {
            Solve::Solved(x) => {
                for (i, v) in x.into_iter().enumerate() {
                    h.set(i, d + 1 - i, v);
                }
            }
            Solve::Inconsistent { .. } => {
                return Err(Error::InvalidCornerGerm("first-integral system is singular"));
            }
        }
    }
    Ok(h)
}

/// `(v ↦ H(0,v))⁻¹ ∘ (u ↦ H(u,0))` for a first integral `H`.
pub fn sigma_from_integral(h: &Jet2) -> Result<GermDiff1> {
    let on_d2 = h.restrict(Var::Y);
    let on_d1 = h.restrict(Var::X);
    let inv = on_d1.comp_inverse()?;
    GermDiff1::new(inv.compose(&on_d2)?)
}

/// The germ sending a point of the first divisor to the point of the second
/// divisor on the same local leaf, at order `min(order, form order)`.
pub fn transversal_structure(c: &CornerGerm, order: usize) -> Result<GermDiff1> {
    let h = regular_first_integral(c, order)?;
    let n = order.min(c.form().order());
    Ok(sigma_from_integral(&h)?.truncate(n))
}

/// The corner germ `d(y₁(u, v))` whose leaves are `σ(y₁) = σ(u) + v`, i.e.
/// the levels of `σ⁻¹(σ(u) + v)`; this is the corner picture of a gluing by
/// `(x₁, y₁) ↦ (x₁ + σ(y₁), σ(y₁))`.
pub fn corner_of_sigma(sigma: &GermDiff1) -> Result<CornerGerm> {
    let n = sigma.order();
    let s = Jet2::from_jet1(sigma.jet(), Var::X);
    let inner = s.add(&Jet2::y(n));
    let level = inner.compose_outer(sigma.inverse().jet())?;
    CornerGerm::new(OneForm::differential(&level))
}
