//! Germs of 1-forms `A dx + B dy`, blow-up pullbacks and divisor analysis.

pub mod exactness;
pub mod param;
pub mod reduce;

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::jets::{Jet2, Poly, Var};

pub use exactness::{relative_exactness_solve, ExactnessOutcome};
pub use reduce::{reduce_cusp, CornerData, CuspRelations, ReductionReport, Verdict};

/// `A dx + B dy` with both coefficients at the same order.
///
/// Equality compares coefficients only; the chart labels are cosmetic.
#[derive(Clone, Serialize)]
pub struct OneForm {
    pub a: Jet2,
    pub b: Jet2,
    pub names: (String, String),
}

impl PartialEq for OneForm {
    fn eq(&self, o: &OneForm) -> bool {
        self.a == o.a && self.b == o.b
    }
}

impl Eq for OneForm {}

/// Blow-up charts at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// `y = t·x`, new coordinates `(x, t)`, exceptional divisor `{x = 0}`.
    XChart,
    /// `x = s·y`, new coordinates `(s, y)`, exceptional divisor `{y = 0}`.
    YChart,
}

impl Chart {
    pub fn divisor_var(self) -> Var {
        match self {
            Chart::XChart => Var::X,
            Chart::YChart => Var::Y,
        }
    }
}

impl OneForm {
    pub fn new(a: Jet2, b: Jet2) -> Self {
        let n = a.order().min(b.order());
        OneForm {
            a: a.truncate(n),
            b: b.truncate(n),
            names: ("x".into(), "y".into()),
        }
    }

    pub fn with_names(mut self, x: &str, y: &str) -> Self {
        self.names = (x.into(), y.into());
        self
    }

    pub fn zero(order: usize) -> Self {
        OneForm::new(Jet2::zero(order), Jet2::zero(order))
    }

    /// `x dy − y dx`
    pub fn radial(order: usize) -> Self {
        OneForm::new(-&Jet2::y(order), Jet2::x(order))
    }

    /// `dx`
    pub fn dx(order: usize) -> Self {
        OneForm::new(Jet2::one(order), Jet2::zero(order))
    }

    /// `dy`
    pub fn dy(order: usize) -> Self {
        OneForm::new(Jet2::zero(order), Jet2::one(order))
    }

    /// `df`, one order lower than `f`.
    pub fn differential(f: &Jet2) -> Self {
        OneForm::new(f.derive(Var::X), f.derive(Var::Y))
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn truncate(&self, order: usize) -> Self {
        OneForm {
            a: self.a.truncate(order),
            b: self.b.truncate(order),
            names: self.names.clone(),
        }
    }

    /// Re-declares the order; raising it is only meaningful for polynomial forms.
    pub fn with_order(&self, order: usize) -> Self {
        OneForm {
            a: self.a.with_order(order),
            b: self.b.with_order(order),
            names: self.names.clone(),
        }
    }

    pub fn add(&self, o: &OneForm) -> Self {
        OneForm::new(self.a.add(&o.a), self.b.add(&o.b)).with_names(&self.names.0, &self.names.1)
    }

    pub fn sub(&self, o: &OneForm) -> Self {
        OneForm::new(self.a.sub(&o.a), self.b.sub(&o.b)).with_names(&self.names.0, &self.names.1)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        OneForm {
            a: self.a.scale(c),
            b: self.b.scale(c),
            names: self.names.clone(),
        }
    }

    /// `f·ω`
    pub fn mul_fn(&self, f: &Jet2) -> Self {
        OneForm::new(self.a.mul(f), self.b.mul(f)).with_names(&self.names.0, &self.names.1)
    }

    /// Minimal total degree of a nonzero coefficient.
    pub fn valuation(&self) -> Result<usize> {
        match (self.a.valuation(), self.b.valuation()) {
            (None, None) => Err(Error::ZeroForm(self.order())),
            (Some(p), None) | (None, Some(p)) => Ok(p),
            (Some(p), Some(q)) => Ok(p.min(q)),
        }
    }

    /// The homogeneous coefficient pair of degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> OneForm {
        OneForm {
            a: self.a.homogeneous_part(d),
            b: self.b.homogeneous_part(d),
            names: self.names.clone(),
        }
    }

    /// `P` with `A_d dx + B_d dy = P·(x dy − y dx)` when `x A_d + y B_d = 0`.
    pub fn radial_tangency(&self, d: usize) -> Option<Jet2> {
        let h = self.homogeneous_part(d);
        let n = self.order() + 1;
        let a = h.a.with_order(n);
        let b = h.b.with_order(n);
        let contraction = Jet2::x(n).mul(&a).add(&Jet2::y(n).mul(&b));
        if !contraction.is_zero() {
            return None;
        }
        let p = b.div_monomial(1, 0).ok()?;
        Some(p.with_order(self.order()))
    }

    /// Pullback by a polynomial map `(X, Y) ↦ (φ₁, φ₂)` without constant term.
    ///
    /// The map components are treated as exact polynomials, so their
    /// derivatives keep the full order.
    pub fn pullback_map(&self, phi1: &Jet2, phi2: &Jet2) -> Result<OneForm> {
        let n = self.order();
        let a = self.a.substitute(phi1, phi2)?;
        let b = self.b.substitute(phi1, phi2)?;
        let d = |f: &Jet2, v| f.derive(v).with_order(n);
        let a_new = a.mul(&d(phi1, Var::X)).add(&b.mul(&d(phi2, Var::X)));
        let b_new = a.mul(&d(phi1, Var::Y)).add(&b.mul(&d(phi2, Var::Y)));
        Ok(OneForm::new(a_new, b_new).with_names(&self.names.0, &self.names.1))
    }

    /// Pullback through one of the blow-up charts; no division is performed.
    pub fn pullback_blowup(&self, chart: Chart) -> OneForm {
        let n = self.order();
        let (x, y) = (Jet2::x(n), Jet2::y(n));
        let xy = x.mul(&y);
        match chart {
            Chart::XChart => {
                let a = self.a.substitute(&x, &xy).expect("no constant term");
                let b = self.b.substitute(&x, &xy).expect("no constant term");
                OneForm::new(a.add(&y.mul(&b)), x.mul(&b)).with_names(&self.names.0, "t")
            }
            Chart::YChart => {
                let a = self.a.substitute(&xy, &y).expect("no constant term");
                let b = self.b.substitute(&xy, &y).expect("no constant term");
                OneForm::new(y.mul(&a), x.mul(&a).add(&b)).with_names("s", &self.names.1)
            }
        }
    }

    /// Largest `k` with the divisor variable to the `k` dividing both
    /// coefficients, and the quotient.
    pub fn exceptional_divide(&self, divisor: Var) -> (OneForm, usize) {
        let k = match (self.a.var_valuation(divisor), self.b.var_valuation(divisor)) {
            (None, None) => return (self.clone(), 0),
            (Some(p), None) | (None, Some(p)) => p,
            (Some(p), Some(q)) => p.min(q),
        };
        let (kx, ky) = match divisor {
            Var::X => (k, 0),
            Var::Y => (0, k),
        };
        let div = |f: &Jet2| f.div_monomial(kx, ky).expect("valuation divides");
        let out = OneForm::new(div(&self.a), div(&self.b)).with_names(&self.names.0, &self.names.1);
        (out, k)
    }

    /// `ω ∧ η` as the coefficient of `dx ∧ dy`.
    pub fn wedge(&self, o: &OneForm) -> Jet2 {
        self.a.mul(&o.b).sub(&self.b.mul(&o.a))
    }

    /// Exchanges the two coordinates (and the two coefficients).
    pub fn swap_vars(&self) -> OneForm {
        OneForm {
            a: self.b.swap_vars(),
            b: self.a.swap_vars(),
            names: (self.names.1.clone(), self.names.0.clone()),
        }
    }

    pub fn to_text(&self) -> String {
        let names = (self.names.0.as_str(), self.names.1.as_str());
        let part = |f: &Jet2, d: &str| -> Option<String> {
            if f.is_zero() {
                return None;
            }
            let body = f.fmt_with(names);
            if body == "1" {
                Some(format!("d{d}"))
            } else if f.term_count() == 1 && !body.trim_start_matches('-').contains(['+', '-', ' ']) {
                Some(format!("{body} d{d}"))
            } else {
                Some(format!("({body}) d{d}"))
            }
        };
        match (part(&self.a, names.0), part(&self.b, names.1)) {
            (None, None) => "0".into(),
            (Some(p), None) | (None, Some(p)) => p,
            (Some(p), Some(q)) => match q.strip_prefix('-') {
                Some(rest) => format!("{p} - {rest}"),
                None => format!("{p} + {q}"),
            },
        }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.to_text(), self.order() + 1)
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `den·d(num) − num·d(den)`, the form whose leaves are levels of `num/den`.
pub fn form_of_meromorphic(num: &Jet2, den: &Jet2) -> Result<OneForm> {
    if num.is_zero() || den.is_zero() {
        return Err(Error::InvalidInput("zero numerator or denominator".into()));
    }
    let dn = OneForm::differential(num);
    let dd = OneForm::differential(den);
    let n = dn.order();
    Ok(dn.mul_fn(&den.truncate(n)).sub(&dd.mul_fn(&num.truncate(n))))
}

/// Where a tangency point sits on a divisor chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PointLocation {
    Origin,
    At(Coeff),
    /// Each root of this square-free factor, when none is representable.
    RootsOf(Poly),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyPoint {
    pub location: PointLocation,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorAnalysis {
    pub invariant: bool,
    /// Coefficient of the divisor's coordinate differential restricted to the divisor.
    pub restriction: Poly,
    /// Degree up to which the restriction is known.
    pub certified_degree: usize,
    /// Whether the restriction is a polynomial strictly inside the certified degree.
    pub certified: bool,
    pub points: Vec<TangencyPoint>,
}

impl DivisorAnalysis {
    pub fn distinct_points(&self) -> usize {
        self.points
            .iter()
            .map(|p| match &p.location {
                PointLocation::RootsOf(f) => f.degree().unwrap_or(0),
                _ => 1,
            })
            .sum()
    }

    /// Adds the point at infinity of the chart, whose multiplicity is the
    /// defect `d − deg` when the restriction is known to come from a
    /// homogeneous polynomial of degree `d`.
    pub fn with_projective_degree(mut self, d: usize) -> Self {
        let deg = self.restriction.degree().unwrap_or(0);
        if !self.invariant && d > deg {
            self.points.push(TangencyPoint {
                location: PointLocation::Infinity,
                multiplicity: d - deg,
            });
        }
        self
    }
}

/// Restricts the form to `{divisor = 0}` and locates the tangency points of
/// the foliation with that line.
pub fn divisor_analysis(w: &OneForm, divisor: Var) -> DivisorAnalysis {
    let along = match divisor {
        Var::X => w.b.restrict(Var::X),
        Var::Y => w.a.restrict(Var::Y),
    };
    let restriction = Poly::from_jet(&along);
    let certified_degree = along.order();
    let certified = restriction.degree().is_none_or(|d| d < certified_degree);
    let mut points = Vec::new();
    if restriction.is_zero() {
        return DivisorAnalysis {
            invariant: true,
            restriction,
            certified_degree,
            certified,
            points,
        };
    }
    let v = restriction.valuation().unwrap_or(0);
    if v > 0 {
        points.push(TangencyPoint {
            location: PointLocation::Origin,
            multiplicity: v,
        });
    }
    let rest = Poly::new(restriction.coeffs()[v..].to_vec());
    for (factor, mult) in rest.squarefree() {
        if factor.degree() == Some(1) {
            let root = -(&factor.coeff(0) / &factor.coeff(1));
            points.push(TangencyPoint {
                location: PointLocation::At(root),
                multiplicity: mult,
            });
        } else {
            points.push(TangencyPoint {
                location: PointLocation::RootsOf(factor),
                multiplicity: mult,
            });
        }
    }
    DivisorAnalysis {
        invariant: false,
        restriction,
        certified_degree,
        certified,
        points,
    }
}

/// Checks the form's coefficients' constant terms, used for regularity.
pub fn is_regular_at_origin(w: &OneForm) -> bool {
    !w.a.constant_term().is_zero() || !w.b.constant_term().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f0_form(n: usize) -> OneForm {
        OneForm::new(
            Jet2::from_int_terms(&[(3, 1, 2), (0, 3, -1)], n),
            Jet2::from_int_terms(&[(1, 2, 1), (4, 0, -1)], n),
        )
    }

    #[test]
    fn meromorphic_forms() {
        let n = 10;
        let num = Jet2::from_int_terms(&[(0, 2, 1), (3, 0, 1)], n);
        let den = Jet2::from_int_terms(&[(1, 1, 1)], n);
        assert_eq!(form_of_meromorphic(&num, &den).unwrap(), f0_form(n - 1));
        let x = Jet2::x(n);
        assert_eq!(form_of_meromorphic(&x, &Jet2::one(n)).unwrap(), OneForm::dx(n - 1));
        let w = form_of_meromorphic(&Jet2::from_int_terms(&[(1, 1, 1)], n), &Jet2::one(n)).unwrap();
        assert_eq!(w, OneForm::new(Jet2::y(n - 1), Jet2::x(n - 1)));
        assert!(form_of_meromorphic(&Jet2::zero(n), &x).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(f0_form(8).valuation().unwrap(), 3);
        assert_eq!(OneForm::dx(8).valuation().unwrap(), 0);
        let y2 = Jet2::from_int_terms(&[(0, 2, 1)], 8);
        assert_eq!(OneForm::radial(8).mul_fn(&y2).valuation().unwrap(), 3);
        assert_eq!(OneForm::zero(4).valuation(), Err(Error::ZeroForm(4)));
    }

    #[test]
    fn tangency_to_radial() {
        assert_eq!(
            f0_form(8).radial_tangency(3).unwrap(),
            Jet2::from_int_terms(&[(0, 2, 1)], 8)
        );
        assert!(OneForm::dx(8).radial_tangency(0).is_none());
        assert_eq!(OneForm::radial(8).radial_tangency(1).unwrap(), Jet2::one(8));
    }

    #[test]
    fn blowups() {
        let n = 12;
        let (w, k) = f0_form(n).pullback_blowup(Chart::XChart).exceptional_divide(Var::X);
        assert_eq!(k, 4);
        let expect = OneForm::new(
            Jet2::from_int_terms(&[(0, 1, 1)], n - 4),
            Jet2::from_int_terms(&[(0, 2, 1), (1, 0, -1)], n - 4),
        );
        assert_eq!(w, expect);
        assert_eq!(OneForm::dx(n).pullback_blowup(Chart::XChart), OneForm::dx(n));
        let r = OneForm::radial(n).pullback_blowup(Chart::XChart);
        assert_eq!(r, OneForm::new(Jet2::zero(n), Jet2::from_int_terms(&[(2, 0, 1)], n)));
        let (d, k) = r.exceptional_divide(Var::X);
        assert_eq!((d, k), (OneForm::dy(n - 2), 2));
        assert_eq!(OneForm::dx(n).exceptional_divide(Var::X).1, 0);
    }

    #[test]
    fn divisor_restrictions() {
        let n = 8;
        let w = OneForm::new(
            Jet2::from_int_terms(&[(0, 1, 1)], n),
            Jet2::from_int_terms(&[(0, 2, 1), (1, 0, -1)], n),
        );
        let d = divisor_analysis(&w, Var::X);
        assert!(!d.invariant);
        assert_eq!(
            d.points,
            vec![TangencyPoint {
                location: PointLocation::Origin,
                multiplicity: 2
            }]
        );
        let flat = OneForm::new(Jet2::one(n), Jet2::one(n));
        let d = divisor_analysis(&flat, Var::Y);
        assert!(!d.invariant && d.points.is_empty());
        let inv = OneForm::new(Jet2::zero(n), Jet2::x(n));
        assert!(divisor_analysis(&inv, Var::X).invariant);
    }

    #[test]
    fn text_rendering() {
        assert_eq!(f0_form(8).to_text(), "(-y^3 + 2*x^3*y) dx + (x*y^2 - x^4) dy");
        assert_eq!(OneForm::radial(3).to_text(), "-y dx + x dy");
    }
}
