//! Solving `η = df + g·ω` degree by degree.

use num_traits::Zero;
use serde::Serialize;

use super::OneForm;
use crate::coeff::Coeff;
use crate::jets::Jet2;
use crate::linalg::{Matrix, Solve};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExactnessOutcome {
    /// `η − df − g·ω` vanishes to the requested order.
    Solved { f: Jet2, g: Jet2 },
    /// The truncated system first becomes inconsistent at this coefficient
    /// degree; `certificate` is a left-null vector of that system.
    Obstructed { degree: usize, certificate: Vec<Coeff> },
}

fn monomials(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for d in lo..=hi {
        for i in (0..=d).rev() {
            out.push((i, d - i));
        }
    }
    out
}

/// Linear system for coefficient degrees `≤ d`. Returns the matrix, the
/// right-hand side and the unknown layout.
fn system(eta: &OneForm, w: &OneForm, d: usize) -> (Matrix, Vec<Coeff>, Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let f_mons = monomials(1, d + 1);
    let g_mons = monomials(0, d);
    let rows = monomials(0, d);
    let nr = rows.len();
    let row_of = |i: usize, j: usize| rows.iter().position(|&m| m == (i, j));
    let mut m = Matrix::zeros(2 * nr, f_mons.len() + g_mons.len());
    for (c, &(i, j)) in f_mons.iter().enumerate() {
        // ∂x (x^i y^j) = i x^{i−1} y^j
        if i > 0 {
            if let Some(r) = row_of(i - 1, j) {
                m.set(r, c, Coeff::from_int(i as i64));
            }
        }
        if j > 0 {
            if let Some(r) = row_of(i, j - 1) {
                m.set(nr + r, c, Coeff::from_int(j as i64));
            }
        }
    }
    for (k, &(p, q)) in g_mons.iter().enumerate() {
        let c = f_mons.len() + k;
        for (off, coeff) in [(0, &w.a), (nr, &w.b)] {
            for (i, j, v) in coeff.terms() {
                if let Some(r) = row_of(i + p, j + q) {
                    let cur = m.get(off + r, c).clone();
                    m.set(off + r, c, &cur + v);
                }
            }
        }
    }
    let mut rhs = Vec::with_capacity(2 * nr);
    for &(i, j) in &rows {
        rhs.push(eta.a.coeff(i, j));
    }
    for &(i, j) in &rows {
        rhs.push(eta.b.coeff(i, j));
    }
    (m, rhs, f_mons, g_mons)
}

/// Finds `(f, g)` with `η − df − g·ω ≡ 0` up to coefficient degree `order`, or
/// the first degree at which no such pair exists.
///
/// Truncations are nested (degree-`d` equations never see unknowns of higher
/// degree), so one failure at the top order is localized by re-solving the
/// smaller systems.
pub fn relative_exactness_solve(eta: &OneForm, w: &OneForm, order: usize) -> ExactnessOutcome {
    let order = order.min(eta.order()).min(w.order());
    let (m, rhs, f_mons, g_mons) = system(eta, w, order);
    match m.solve(&rhs) {
        Solve::Solved(x) => {
            let mut f = Jet2::zero(order + 1);
            let mut g = Jet2::zero(order);
            for (k, &(i, j)) in f_mons.iter().enumerate() {
                f.set(i, j, x[k].clone());
            }
            for (k, &(i, j)) in g_mons.iter().enumerate() {
                g.set(i, j, x[f_mons.len() + k].clone());
            }
            ExactnessOutcome::Solved { f, g }
        }
        Solve::Inconsistent { certificate } => {
            for d in 0..order {
                let (m, rhs, ..) = system(eta, w, d);
                if let Solve::Inconsistent { certificate } = m.solve(&rhs) {
                    return ExactnessOutcome::Obstructed { degree: d, certificate };
                }
            }
            debug_assert!(certificate.iter().any(|c| !c.is_zero()));
            ExactnessOutcome::Obstructed {
                degree: order,
                certificate,
            }
        }
    }
}
