//! Truncated cohomological equation for vector fields `A·x ∂/∂x` on the two
//! models: a target on the overlap is a coboundary when it splits as a global
//! field on `F2` minus the transport of a global field on `F1`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{GluingCocycle, Model};
use crate::coeff::Coeff;
use crate::error::Result;
use crate::germs::GermDiff1;
use crate::jets::{Jet2, Var};
use crate::linalg::{Matrix, Solve};

fn monomials(order: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for d in 0..=order {
        for i in (0..=d).rev() {
            out.push((i, d - i));
        }
    }
    out
}

fn to_vector(f: &Jet2, rows: &[(usize, usize)]) -> Vec<Coeff> {
    rows.iter().map(|&(i, j)| f.coeff(i, j)).collect()
}

/// Basis of homogeneous `Ã` of degree `d` such that `(x − y)·Ã` is global on
/// `F1`, i.e. has no monomial `x^i y^j` with `i < j`.
pub fn admissible_f1_basis(d: usize) -> Vec<Jet2> {
    // Ã = Σ c_k x^k y^{d−k}; (x − y)Ã has x^i y^{d+1−i} coefficient c_{i−1} − c_i
    let bad: Vec<usize> = (0..=d + 1).filter(|&i| i < d + 1 - i).collect();
    let coeff_of = |i: usize| -> Vec<Coeff> {
        let mut row = vec![Coeff::zero(); d + 1];
        if i >= 1 {
            row[i - 1] = Coeff::one();
        }
        if i <= d {
            row[i] = &row[i] - &Coeff::one();
        }
        row
    };
    let kernel = if bad.is_empty() {
        (0..=d)
            .map(|k| {
                let mut e = vec![Coeff::zero(); d + 1];
                e[k] = Coeff::one();
                e
            })
            .collect()
    } else {
        Matrix::from_rows(bad.iter().map(|&i| coeff_of(i)).collect()).nullspace()
    };
    kernel
        .into_iter()
        .map(|v| Jet2::from_terms(v.into_iter().enumerate().map(|(k, c)| (k, d - k, c)), d))
        .collect()
}

/// Coefficient on `x₁ ∂/∂x₁` of the transport of `(x₃ − y₃)·Ã·x₃ ∂/∂x₃`
/// through the cocycle: `Ã(g)·g₁·A/(A + x₁A_x)`.
pub fn transport_f1_field(c: &GluingCocycle, a_tilde: &Jet2, order: usize) -> Result<Jet2> {
    let n = order.min(c.order());
    let (g1, g2) = c.map();
    let (g1, g2) = (g1.truncate(n), g2.truncate(n));
    let a = c.a.truncate(n);
    let ax = a.derive(Var::X).with_order(n);
    let factor = a.div(&a.add(&Jet2::x(n).mul(&ax)))?;
    Ok(a_tilde.with_order(n).substitute(&g1, &g2)?.mul(&g1).mul(&factor))
}

/// `A₂ − transport((x₃ − y₃)·Ã₁)`, the coboundary of a pair of fields.
pub fn coboundary(c: &GluingCocycle, a2: &Jet2, a1_tilde: &Jet2, order: usize) -> Result<Jet2> {
    Ok(a2.truncate(order).sub(&transport_f1_field(c, a1_tilde, order)?))
}

/// Coefficient on `x₁ ∂/∂x₁` of the derivative of the cocycle in the
/// direction `δA`: `δA/(A + x₁A_x)`.
pub fn deformation_target(c: &GluingCocycle, delta_a: &Jet2, order: usize) -> Result<Jet2> {
    let n = order.min(c.order());
    let a = c.a.truncate(n);
    let ax = a.derive(Var::X).with_order(n);
    delta_a.truncate(n).div(&a.add(&Jet2::x(n).mul(&ax)))
}

/// The image of `∂/∂α` for `A = 1 + α·y₁`: `y₁/(1 + α₀y₁)`.
pub fn kodaira_spencer_target(c: &GluingCocycle, order: usize) -> Result<Jet2> {
    deformation_target(c, &Jet2::y(order), order)
}

/// The linear system at a given order, with its column layout.
#[derive(Clone, Debug)]
pub struct CoboundarySystem {
    pub order: usize,
    pub matrix: Matrix,
    pub rows: Vec<(usize, usize)>,
    /// Monomials of `A₂` admitted by the `F2` support rule.
    pub f2_columns: Vec<(usize, usize)>,
    /// Basis elements of `Ã₁`.
    pub f1_columns: Vec<Jet2>,
}

impl CoboundarySystem {
    pub fn new(c: &GluingCocycle, order: usize) -> Result<Self> {
        let n = order.min(c.order());
        let rows = monomials(n);
        let f2_columns: Vec<(usize, usize)> = rows
            .iter()
            .copied()
            .filter(|&(i, j)| {
                let (a, b) = Model::F2.exponent_image(i, j);
                a >= 0 && b >= 0
            })
            .collect();
        let mut columns: Vec<Vec<Coeff>> = f2_columns
            .iter()
            .map(|&(i, j)| to_vector(&Jet2::monomial(Coeff::one(), i, j, n), &rows))
            .collect();
        let mut f1_columns = Vec::new();
        for d in 0..n {
            for b in admissible_f1_basis(d) {
                let t = transport_f1_field(c, &b, n)?;
                columns.push(to_vector(&t.scale(&Coeff::from_int(-1)), &rows));
                f1_columns.push(b);
            }
        }
        Ok(CoboundarySystem {
            order: n,
            matrix: Matrix::from_columns(rows.len(), &columns),
            rows,
            f2_columns,
            f1_columns,
        })
    }

    /// Dimension of the quotient of all targets by coboundaries at this order.
    pub fn corank(&self) -> usize {
        self.matrix.rows() - self.matrix.rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CoboundaryOutcome {
    /// `target = A₂ − transport(A₁)` with `A₁ = (x₃ − y₃)·Ã₁`.
    Feasible { a2: Jet2, a1_tilde: Jet2, a1: Jet2 },
    /// A row combination annihilating every coboundary but not the target.
    Infeasible { certificate: Vec<Coeff> },
}

impl CoboundaryOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CoboundaryOutcome::Feasible { .. })
    }
}

pub fn coboundary_solve_cocycle(c: &GluingCocycle, target: &Jet2, order: usize) -> Result<CoboundaryOutcome> {
    let sys = CoboundarySystem::new(c, order)?;
    let n = sys.order;
    let rhs = to_vector(target, &sys.rows);
    Ok(match sys.matrix.solve(&rhs) {
        Solve::Solved(x) => {
            let mut a2 = Jet2::zero(n);
            for (k, &(i, j)) in sys.f2_columns.iter().enumerate() {
                a2.set(i, j, x[k].clone());
            }
            let mut a1_tilde = Jet2::zero(n);
            for (k, b) in sys.f1_columns.iter().enumerate() {
                a1_tilde = a1_tilde.add(&b.with_order(n).scale(&x[sys.f2_columns.len() + k]));
            }
            let a1 = Jet2::x(n).sub(&Jet2::y(n)).mul(&a1_tilde);
            CoboundaryOutcome::Feasible { a2, a1_tilde, a1 }
        }
        Solve::Inconsistent { certificate } => CoboundaryOutcome::Infeasible { certificate },
    })
}

/// Solves for the cocycle `(σ, 1 + α₀y₁)`.
pub fn coboundary_solve(sigma: &GermDiff1, alpha0: &Coeff, target: &Jet2, order: usize) -> Result<CoboundaryOutcome> {
    let c = super::build_cocycle(sigma, alpha0);
    coboundary_solve_cocycle(&c, target, order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnfoldingVerdict {
    /// `∂A_ε/∂y₁(0,0)` does not depend on `ε`.
    pub hypothesis_holds: bool,
    /// Every sampled derivative is a coboundary.
    pub trivial: bool,
    pub samples: Vec<(Coeff, CoboundaryOutcome)>,
}

/// For `A_ε = Σ ε^k·family[k]`, solves the cohomological equation for
/// `∂/∂ε` of the cocycle at each sampled `ε`.
pub fn unfolding_triviality_check(
    sigma: &GermDiff1,
    family: &[Jet2],
    samples: &[Coeff],
    order: usize,
) -> Result<UnfoldingVerdict> {
    let hypothesis_holds = family.iter().skip(1).all(|f| f.coeff(0, 1).is_zero());
    let mut out = Vec::new();
    for eps in samples {
        let mut a = Jet2::zero(order);
        let mut da = Jet2::zero(order);
        let mut pow = Coeff::one();
        for (k, f) in family.iter().enumerate() {
            a = a.add(&f.with_order(order).scale(&pow));
            if k + 1 < family.len() {
                let next = &family[k + 1];
                da = da.add(&next.with_order(order).scale(&(&pow * &Coeff::from_int(k as i64 + 1))));
            }
            pow = &pow * eps;
        }
        let c = GluingCocycle::new(sigma.truncate(order), a)?;
        let target = deformation_target(&c, &da, order)?;
        out.push((eps.clone(), coboundary_solve_cocycle(&c, &target, order)?));
    }
    Ok(UnfoldingVerdict {
        hypothesis_holds,
        trivial: out.iter().all(|(_, o)| o.is_feasible()),
        samples: out,
    })
}
