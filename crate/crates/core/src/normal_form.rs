//! Formal normal form of cusp-type germs, built one degree at a time by
//! changes of coordinates `id + (P, Q)` with `P`, `Q` homogeneous.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::reduce::{reduce_cusp, CuspRelations, Verdict};
use crate::forms::OneForm;
use crate::jets::{Jet2, Var};
use crate::linalg::{Matrix, Solve};

/// Two homogeneous polynomials of a common degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousPair {
    pub degree: usize,
    pub p: Jet2,
    pub q: Jet2,
}

fn check_homogeneous(f: &Jet2, n: usize) -> Result<()> {
    match f.terms().find(|(i, j, _)| i + j != n) {
        Some((i, j, _)) => Err(Error::DegreeMismatch {
            expected: n,
            found: i + j,
        }),
        None => Ok(()),
    }
}

impl HomogeneousPair {
    pub fn new(degree: usize, p: Jet2, q: Jet2) -> Result<Self> {
        check_homogeneous(&p, degree)?;
        check_homogeneous(&q, degree)?;
        Ok(HomogeneousPair {
            degree,
            p: p.with_order(degree),
            q: q.with_order(degree),
        })
    }

    pub fn zero(degree: usize) -> Self {
        HomogeneousPair {
            degree,
            p: Jet2::zero(degree),
            q: Jet2::zero(degree),
        }
    }

    /// Coefficients of `p` then `q`, each listed as `x^n, x^{n-1}y, …, y^n`.
    pub fn to_vector(&self) -> Vec<Coeff> {
        pair_vector(&self.p, &self.q, self.degree)
    }

    pub fn from_vector(degree: usize, v: &[Coeff]) -> Self {
        let mons = monomials(degree);
        let mut p = Jet2::zero(degree);
        let mut q = Jet2::zero(degree);
        for (k, &(i, j)) in mons.iter().enumerate() {
            p.set(i, j, v[k].clone());
            q.set(i, j, v[mons.len() + k].clone());
        }
        HomogeneousPair { degree, p, q }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
}

fn monomials(n: usize) -> Vec<(usize, usize)> {
    (0..=n).map(|j| (n - j, j)).collect()
}

fn pair_vector(a: &Jet2, b: &Jet2, n: usize) -> Vec<Coeff> {
    let mons = monomials(n);
    mons.iter()
        .map(|&(i, j)| a.coeff(i, j))
        .chain(mons.iter().map(|&(i, j)| b.coeff(i, j)))
        .collect()
}

fn d(f: &Jet2, v: Var, n: usize) -> Jet2 {
    f.with_order(n + 1).derive(v).with_order(n)
}

/// `(x Q_x − y P_x + Q, x Q_y − x P_x + P)`, as printed in the literature
/// for the degree-by-degree elimination.
pub fn l_apply(pair: &HomogeneousPair) -> HomogeneousPair {
    let n = pair.degree;
    let (x, y) = (Jet2::x(n), Jet2::y(n));
    let (p, q) = (&pair.p, &pair.q);
    let first = x.mul(&d(q, Var::X, n)).sub(&y.mul(&d(p, Var::X, n))).add(q);
    let second = x.mul(&d(q, Var::Y, n)).sub(&x.mul(&d(p, Var::X, n))).add(p);
    HomogeneousPair {
        degree: n,
        p: first,
        q: second,
    }
}

fn operator_matrix(n: usize, rows: usize, f: impl Fn(&HomogeneousPair) -> Vec<Coeff>) -> Matrix {
    let dim = 2 * (n + 1);
    let columns: Vec<Vec<Coeff>> = (0..dim)
        .map(|k| {
            let mut e = vec![Coeff::zero(); dim];
            e[k] = Coeff::one();
            f(&HomogeneousPair::from_vector(n, &e))
        })
        .collect();
    Matrix::from_columns(rows, &columns)
}

pub fn l_matrix(n: usize) -> Matrix {
    operator_matrix(n, 2 * (n + 1), |p| l_apply(p).to_vector())
}

/// The preimage of `target` under [`l_apply`]. Fails with
/// [`Error::SingularOperator`] when the operator is not invertible in that
/// degree, which happens for every even degree.
pub fn l_solve(target: &HomogeneousPair) -> Result<HomogeneousPair> {
    let n = target.degree;
    if n < 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: n });
    }
    let m = l_matrix(n);
    if m.rank() < m.cols() {
        return Err(Error::SingularOperator { degree: n });
    }
    match m.solve(&target.to_vector()) {
        Solve::Solved(x) => Ok(HomogeneousPair::from_vector(n, &x)),
        Solve::Inconsistent { .. } => Err(Error::SingularOperator { degree: n }),
    }
}

/// First-order change of `y²(x dy − y dx)` under `id + (P, Q)`:
/// `y²(x Q_x − y P_x − 3Q) dx + (y²(P − y P_y + x Q_y) + 2xyQ) dy`,
/// homogeneous of coefficient degree `n + 2`.
pub fn linearized_action(pair: &HomogeneousPair) -> (Jet2, Jet2) {
    let n = pair.degree;
    let m = n + 2;
    let (x, y) = (Jet2::x(m), Jet2::y(m));
    let y2 = y.mul(&y);
    let (p, q) = (pair.p.with_order(m), pair.q.with_order(m));
    let (px, py) = (p.derive(Var::X).with_order(m), p.derive(Var::Y).with_order(m));
    let (qx, qy) = (q.derive(Var::X).with_order(m), q.derive(Var::Y).with_order(m));
    let da = y2.mul(&x.mul(&qx).sub(&y.mul(&px)).sub(&q.scale(&Coeff::from_int(3))));
    let db = y2
        .mul(&p.sub(&y.mul(&py)).add(&x.mul(&qy)))
        .add(&x.mul(&y).mul(&q).scale(&Coeff::from_int(2)));
    (da, db)
}

pub fn t_matrix(n: usize) -> Matrix {
    let m = n + 2;
    operator_matrix(n, 2 * (m + 1), |p| {
        let (a, b) = linearized_action(p);
        pair_vector(&a, &b, m)
    })
}

/// Component (0 for `dx`, 1 for `dy`) and monomial exponents.
pub type BasisForm = (usize, usize, usize);

/// Monomial forms spanning a complement of the image of the linearized
/// action in coefficient degree `m ≥ 4`: `x^m dx, x^{m−1}y dx, x^m dy,
/// x^{m−1}y dy`, except in degree 5 where `x^{m−1}y dy` is already reached
/// and `x³y² dx` is not.
pub fn residual_basis(m: usize) -> Vec<BasisForm> {
    let last = if m == 5 { (0, 3, 2) } else { (1, m - 1, 1) };
    vec![(0, m, 0), (0, m - 1, 1), (1, m, 0), last]
}

/// Monomials with `y`-exponent at least 2 versus at most 1 split the degree-`m`
/// coefficient space; returns the two dimensions.
pub fn direct_sum_dimensions(m: usize) -> (usize, usize) {
    let mons = monomials(m);
    let high = mons.iter().filter(|&&(_, j)| j >= 2).count();
    (2 * high, 2 * (mons.len() - high))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormData {
    pub order: usize,
    /// Coefficient of `y²` in the tangent cone before it is scaled to 1.
    pub cone_coefficient: Coeff,
    /// Coefficient of `x³(x dy − 2y dx)`.
    pub alpha: Coeff,
    /// Coefficient of `x³y dy`.
    pub a: Coeff,
    /// `n ↦ (a_n, b_n, c_n, d_n)`: coefficients of
    /// `x^{n−1}((a_n x + b_n y) dx + (c_n x + d_n y) dy)`.
    pub tail: BTreeMap<usize, [Coeff; 4]>,
    /// Coefficient of `x³y² dx`, which replaces `d₅` in degree 5.
    pub e5: Coeff,
    /// Linear map bringing the cone to `y²`.
    pub linear_change: (Jet2, Jet2),
    /// Accumulated change tangent to the identity.
    pub transform: (Jet2, Jet2),
}

impl NormalFormData {
    /// Equality of the normal-form coefficients, ignoring how they were reached.
    pub fn same_normal_form(&self, other: &NormalFormData) -> bool {
        self.alpha == other.alpha && self.a == other.a && self.tail == other.tail && self.e5 == other.e5
    }

    /// The composite `linear_change ∘ transform`.
    pub fn full_change(&self) -> Result<(Jet2, Jet2)> {
        let (t1, t2) = &self.transform;
        let (l1, l2) = &self.linear_change;
        let n = self.order;
        Ok((
            l1.with_order(n).substitute(t1, t2)?,
            l2.with_order(n).substitute(t1, t2)?,
        ))
    }
}

fn set_basis(a: &mut Jet2, b: &mut Jet2, (comp, i, j): BasisForm, c: Coeff) {
    if comp == 0 {
        a.set(i, j, c);
    } else {
        b.set(i, j, c);
    }
}

/// The form `y²ω_R + αx³(x dy − 2y dx) + a x³y dy + Σ tail + e₅x³y² dx`.
pub fn reconstruct(data: &NormalFormData) -> OneForm {
    let n = data.order;
    let mut w = crate::forms::reduce::cusp_template(&data.alpha, &data.a, n);
    let (mut a, mut b) = (w.a.clone(), w.b.clone());
    for (&k, c) in &data.tail {
        if k > n {
            continue;
        }
        a.add_term(k, 0, &c[0]);
        a.add_term(k - 1, 1, &c[1]);
        b.add_term(k, 0, &c[2]);
        b.add_term(k - 1, 1, &c[3]);
    }
    if n >= 5 {
        a.add_term(3, 2, &data.e5);
    }
    w = OneForm::new(a, b);
    w
}

/// Pulls back by `id + (P, Q)` with `P`, `Q` of valuation at least 2.
fn pull_shift(w: &OneForm, p: &Jet2, q: &Jet2) -> Result<OneForm> {
    let n = w.order();
    let a = w.a.substitute_shift(p, q)?;
    let b = w.b.substitute_shift(p, q)?;
    let dd = |f: &Jet2, v| f.derive(v).with_order(n);
    let one = Jet2::one(n);
    let a_new = a.mul(&one.add(&dd(p, Var::X))).add(&b.mul(&dd(q, Var::X)));
    let b_new = a.mul(&dd(p, Var::Y)).add(&b.mul(&one.add(&dd(q, Var::Y))));
    Ok(OneForm::new(a_new, b_new))
}

/// Normal form to coefficient degree `min(order, form order)`.
pub fn normalize(w: &OneForm, order: usize) -> Result<NormalFormData> {
    let rep = reduce_cusp(w);
    if rep.verdict != Verdict::CuspTypeAbsolutelyDicritical {
        return Err(Error::NotCuspType(format!("{}: {}", rep.verdict.name(), rep.reason)));
    }
    let n = order.min(w.order());
    let cone = rep.p2_coefficient.expect("set on cusp verdict");
    let linear_change = rep.linear_change.expect("set on cusp verdict");
    let mut cur = rep
        .normalized_form
        .expect("set on cusp verdict")
        .truncate(n)
        .scale(&cone.inv().ok_or(Error::NotInvertible)?);
    let mut t = (Jet2::x(n), Jet2::y(n));
    let mut residual: BTreeMap<usize, Vec<Coeff>> = BTreeMap::new();

    for m in 4..=n {
        let k = m - 2;
        let tm = t_matrix(k);
        let basis = residual_basis(m);
        let mut columns: Vec<Vec<Coeff>> = (0..tm.cols())
            .map(|c| (0..tm.rows()).map(|r| tm.get(r, c).clone()).collect())
            .collect();
        for &bf in &basis {
            let (mut a, mut b) = (Jet2::zero(m), Jet2::zero(m));
            set_basis(&mut a, &mut b, bf, Coeff::one());
            columns.push(pair_vector(&a, &b, m));
        }
        let sys = Matrix::from_columns(tm.rows(), &columns);
        if sys.rank() < sys.cols() {
            return Err(Error::SingularOperator { degree: k });
        }
        let target = pair_vector(&cur.a, &cur.b, m);
        let Solve::Solved(x) = sys.solve(&target) else {
            return Err(Error::SingularOperator { degree: k });
        };
        let dim = tm.cols();
        residual.insert(m, x[dim..].to_vec());
        let neg: Vec<Coeff> = x[..dim].iter().map(|c| -c).collect();
        let step = HomogeneousPair::from_vector(k, &neg);
        if step.is_zero() {
            continue;
        }
        let (p, q) = (step.p.with_order(n), step.q.with_order(n));
        cur = pull_shift(&cur, &p, &q)?;
        t = (t.0.substitute_shift(&p, &q)?, t.1.substitute_shift(&p, &q)?);
    }

    let rel = CuspRelations::of(&cur);
    if !rel.hold() {
        return Err(Error::NotCuspType("normalized form violates the degree 4 and 5 relations".into()));
    }
    let alpha = cur.b.coeff(4, 0);
    let a = cur.b.coeff(3, 1);
    let mut tail = BTreeMap::new();
    let mut e5 = Coeff::zero();
    for (&m, c) in residual.range(5..) {
        if m == 5 {
            tail.insert(m, [c[0].clone(), c[1].clone(), c[2].clone(), Coeff::zero()]);
            e5 = c[3].clone();
        } else {
            tail.insert(m, [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]);
        }
    }
    Ok(NormalFormData {
        order: n,
        cone_coefficient: cone,
        alpha,
        a,
        tail,
        e5,
        linear_change: (linear_change.0.with_order(n), linear_change.1.with_order(n)),
        transform: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f0(n: usize) -> OneForm {
        OneForm::new(
            Jet2::from_int_terms(&[(3, 1, 2), (0, 3, -1)], n),
            Jet2::from_int_terms(&[(1, 2, 1), (4, 0, -1)], n),
        )
    }

    #[test]
    fn printed_operator_example() {
        let pair = HomogeneousPair::new(2, Jet2::from_int_terms(&[(2, 0, 1)], 2), Jet2::zero(2)).unwrap();
        let out = l_apply(&pair);
        assert_eq!(out.p, Jet2::from_int_terms(&[(1, 1, -2)], 2));
        assert_eq!(out.q, Jet2::from_int_terms(&[(2, 0, -1)], 2));
    }

    #[test]
    fn printed_operator_parity() {
        for n in 2..=10 {
            let full = l_matrix(n).rank() == 2 * (n + 1);
            assert_eq!(full, n % 2 == 1, "degree {n}");
        }
    }

    #[test]
    fn linearized_action_is_injective_with_complement() {
        for n in 2..=10 {
            assert_eq!(t_matrix(n).rank(), 2 * (n + 1));
            let (hi, lo) = direct_sum_dimensions(n + 2);
            assert_eq!(hi + lo, 2 * (n + 3));
            assert_eq!(lo, 4);
        }
    }

    #[test]
    fn running_example_is_already_normal() {
        let nf = normalize(&f0(12), 12).unwrap();
        assert_eq!(nf.alpha, Coeff::from_int(-1));
        assert!(nf.a.is_zero());
        assert!(nf.e5.is_zero());
        assert!(nf.tail.values().flatten().all(|c| c.is_zero()));
    }

    #[test]
    fn template_is_fixed() {
        let w = crate::forms::reduce::cusp_template(&Coeff::one(), &Coeff::one(), 12);
        let nf = normalize(&w, 12).unwrap();
        assert_eq!((nf.alpha.clone(), nf.a.clone()), (Coeff::one(), Coeff::one()));
        assert_eq!(nf.transform, (Jet2::x(12), Jet2::y(12)));
        assert_eq!(reconstruct(&nf), w);
    }

    #[test]
    fn transform_recovers_input() {
        let w = OneForm::new(
            Jet2::from_int_terms(&[(3, 1, 4), (0, 3, -2), (2, 2, 1), (1, 4, 3), (5, 1, 1)], 11),
            Jet2::from_int_terms(&[(1, 2, 2), (4, 0, -2), (0, 4, 1), (2, 3, -1), (3, 2, 5)], 11),
        );
        let nf = normalize(&w, 11).unwrap();
        let (f1, f2) = nf.full_change().unwrap();
        let back = w.pullback_map(&f1, &f2).unwrap().scale(&nf.cone_coefficient.inv().unwrap());
        assert_eq!(back, reconstruct(&nf));
    }
}
