//! Certification of the two-blow-up reduction.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{divisor_analysis, is_regular_at_origin, Chart, DivisorAnalysis, OneForm, PointLocation, TangencyPoint};
use crate::coeff::Coeff;
use crate::jets::{Jet2, Var};

/// Orders consumed by the two exceptional divisions (4 then 2).
pub const ORDER_LOSS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    CuspTypeAbsolutelyDicritical,
    NotDicritical,
    WrongReductionTree,
    /// The working order is too small to certify the decision.
    Inconclusive(usize),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::CuspTypeAbsolutelyDicritical => "CuspTypeAbsolutelyDicritical",
            Verdict::NotDicritical => "NotDicritical",
            Verdict::WrongReductionTree => "WrongReductionTree",
            Verdict::Inconclusive(_) => "Inconclusive",
        }
    }
}

/// Degree 4 and 5 coefficient relations forced by the cusp geometry, read in
/// coordinates where the tangent cone is `a·y²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspRelations {
    /// coefficient of `x⁴ dx`
    pub x4_dx: Coeff,
    /// coefficient of `x⁵ dx`
    pub x5_dx: Coeff,
    /// coefficient of `x³y dx` plus twice that of `x⁴ dy`
    pub mixed: Coeff,
}

impl CuspRelations {
    pub fn hold(&self) -> bool {
        self.x4_dx.is_zero() && self.x5_dx.is_zero() && self.mixed.is_zero()
    }

    pub fn of(w: &OneForm) -> Self {
        CuspRelations {
            x4_dx: w.a.coeff(4, 0),
            x5_dx: w.a.coeff(5, 0),
            mixed: &w.a.coeff(3, 1) + &(&w.b.coeff(4, 0) * &Coeff::from_int(2)),
        }
    }
}

/// The germ at the corner `p = D₂ ∩ D₁`, in coordinates `(u, v)` where
/// `{v = 0}` is the strict transform of the first divisor and `{u = 0}` is
/// the second divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerData {
    pub form: OneForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub order: usize,
    pub valuation: Option<usize>,
    pub is_valuation_3: bool,
    /// `P` with lowest part `P·ω_R`, in the input coordinates.
    pub tangent_cone: Option<Jet2>,
    /// Linear map `(X, Y) ↦ (x, y)` applied before blowing up.
    pub linear_change: Option<(Jet2, Jet2)>,
    pub normalized_form: Option<OneForm>,
    /// `a` in `P₂ = a·y²`, after the linear change.
    pub p2_coefficient: Option<Coeff>,
    pub first_chart_form: Option<OneForm>,
    pub exceptional_power_1: Option<usize>,
    pub first_divisor: Option<DivisorAnalysis>,
    pub singular_points_on_d2: Vec<TangencyPoint>,
    pub second_chart_form: Option<OneForm>,
    pub exceptional_power_2: Option<usize>,
    pub second_divisor: Option<DivisorAnalysis>,
    pub corner_regular: bool,
    pub transverse_to_d1: bool,
    pub transverse_to_d2: bool,
    pub relations: Option<CuspRelations>,
    pub corner: Option<CornerData>,
    pub verdict: Verdict,
    pub reason: String,
}

impl ReductionReport {
    fn new(order: usize) -> Self {
        ReductionReport {
            order,
            valuation: None,
            is_valuation_3: false,
            tangent_cone: None,
            linear_change: None,
            normalized_form: None,
            p2_coefficient: None,
            first_chart_form: None,
            exceptional_power_1: None,
            first_divisor: None,
            singular_points_on_d2: Vec::new(),
            second_chart_form: None,
            exceptional_power_2: None,
            second_divisor: None,
            corner_regular: false,
            transverse_to_d1: false,
            transverse_to_d2: false,
            relations: None,
            corner: None,
            verdict: Verdict::Inconclusive(order),
            reason: String::new(),
        }
    }

    fn stop(mut self, verdict: Verdict, reason: impl Into<String>) -> Self {
        self.verdict = verdict;
        self.reason = reason.into();
        self
    }
}

/// A linear map taking the double direction of `P = p₂₀x² + p₁₁xy + p₀₂y²`
/// to `{y = 0}`, or `None` when `P` is not a nonzero perfect square.
pub fn square_direction_change(p: &Jet2, order: usize) -> Option<(Jet2, Jet2)> {
    let (a, b, c) = (p.coeff(2, 0), p.coeff(1, 1), p.coeff(0, 2));
    let disc = &(&b * &b) - &(&(&a * &c) * &Coeff::from_int(4));
    if !disc.is_zero() || (a.is_zero() && c.is_zero()) {
        return None;
    }
    let (x, y) = (Jet2::x(order), Jet2::y(order));
    if c.is_zero() {
        // P = a·x², so the double line is x = 0
        return Some((y, x));
    }
    // P = c·(y + βx)² with β = b/(2c); new Y = y + βx
    let beta = &b / &(&c * &Coeff::from_int(2));
    Some((x.clone(), y.sub(&x.scale(&beta))))
}

/// Runs the reduction of the germ by two blow-ups and certifies each step.
pub fn reduce_cusp(w: &OneForm) -> ReductionReport {
    let n = w.order();
    let mut rep = ReductionReport::new(n);
    if n < ORDER_LOSS {
        return rep.stop(
            Verdict::Inconclusive(n),
            format!("order {n} is below the {ORDER_LOSS} needed to reach the corner"),
        );
    }
    let Ok(nu) = w.valuation() else {
        return rep.stop(Verdict::Inconclusive(n), "form vanishes to the working order");
    };
    rep.valuation = Some(nu);
    rep.is_valuation_3 = nu == 3;
    let Some(cone) = w.radial_tangency(nu) else {
        return rep.stop(
            Verdict::NotDicritical,
            "lowest homogeneous part is not tangent to the radial form; the first divisor is invariant",
        );
    };
    rep.tangent_cone = Some(cone.clone());
    if nu != 3 {
        return rep.stop(
            Verdict::WrongReductionTree,
            format!("dicritical at the first blow-up with valuation {nu}, not 3"),
        );
    }
    let Some((phi1, phi2)) = square_direction_change(&cone, n) else {
        return rep.stop(
            Verdict::WrongReductionTree,
            "tangent cone is not a double line; the first divisor carries several tangency points",
        );
    };
    let w1 = w.pullback_map(&phi1, &phi2).expect("linear map");
    rep.linear_change = Some((phi1, phi2));
    let a = w1.radial_tangency(3).expect("cone survives linear change").coeff(0, 2);
    rep.p2_coefficient = Some(a);
    rep.relations = Some(CuspRelations::of(&w1));
    rep.normalized_form = Some(w1.clone());

    let (w2, k1) = w1.pullback_blowup(Chart::XChart).exceptional_divide(Var::X);
    rep.first_chart_form = Some(w2.clone());
    rep.exceptional_power_1 = Some(k1);
    let d2 = divisor_analysis(&w2, Var::X).with_projective_degree(k1 - 2);
    rep.singular_points_on_d2 = d2.points.clone();
    rep.first_divisor = Some(d2.clone());
    let single_double_origin = d2.points
        == vec![TangencyPoint {
            location: PointLocation::Origin,
            multiplicity: 2,
        }];
    if !single_double_origin {
        return rep.stop(
            Verdict::WrongReductionTree,
            "first divisor does not carry exactly one tangency point of multiplicity 2",
        );
    }

    let (w3, k2) = w2.pullback_blowup(Chart::YChart).exceptional_divide(Var::Y);
    let w3 = w3.with_names("s", "t");
    rep.second_chart_form = Some(w3.clone());
    rep.exceptional_power_2 = Some(k2);
    if k2 < 2 {
        let d1 = divisor_analysis(&w3, Var::Y);
        let invariant = d1.invariant;
        rep.second_divisor = Some(d1);
        return if invariant {
            rep.stop(Verdict::NotDicritical, "the second divisor is invariant")
        } else {
            rep.stop(
                Verdict::WrongReductionTree,
                format!("second exceptional power is {k2}; the tangency point is not a radial singularity"),
            )
        };
    }
    let d1 = divisor_analysis(&w3, Var::Y).with_projective_degree(k2 - 2);
    rep.transverse_to_d1 = !d1.invariant && d1.points.is_empty();
    rep.second_divisor = Some(d1);
    rep.transverse_to_d2 = !w3.b.constant_term().is_zero();
    rep.corner_regular = is_regular_at_origin(&w3);
    rep.corner = Some(CornerData {
        form: w3.swap_vars().with_names("u", "v"),
    });
    if k2 != 2 || !(rep.corner_regular && rep.transverse_to_d1 && rep.transverse_to_d2) {
        return rep.stop(
            Verdict::WrongReductionTree,
            "second blow-up is not regular and transverse to both divisor components",
        );
    }
    rep.stop(
        Verdict::CuspTypeAbsolutelyDicritical,
        "two blow-ups give a regular foliation transverse to both components",
    )
}

/// `y²ω_R + αx³(x dy − 2y dx) + βx³y dy`, handy for building cusp germs.
pub fn cusp_template(alpha: &Coeff, beta: &Coeff, order: usize) -> OneForm {
    let y2 = Jet2::monomial(Coeff::one(), 0, 2, order);
    let base = OneForm::radial(order).mul_fn(&y2);
    let a = Jet2::monomial(alpha * &Coeff::from_int(-2), 3, 1, order);
    let b = Jet2::from_terms(
        [(4, 0, alpha.clone()), (3, 1, beta.clone())],
        order,
    );
    base.add(&OneForm::new(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fz_form(z: i64, n: usize) -> OneForm {
        OneForm::new(
            Jet2::from_int_terms(&[(3, 1, 2), (2, 2, z), (0, 3, -1)], n),
            Jet2::from_int_terms(&[(1, 2, 1), (4, 0, -1)], n),
        )
    }

    #[test]
    fn running_example() {
        let r = reduce_cusp(&fz_form(0, 12));
        assert_eq!(r.verdict, Verdict::CuspTypeAbsolutelyDicritical, "{}", r.reason);
        assert_eq!((r.exceptional_power_1, r.exceptional_power_2), (Some(4), Some(2)));
        let corner = r.second_chart_form.unwrap();
        assert_eq!(corner, OneForm::new(Jet2::one(6), Jet2::one(6)));
        assert!(r.relations.unwrap().hold());
    }

    #[test]
    fn parameter_family() {
        for z in [0, 1, 2, -3] {
            let r = reduce_cusp(&fz_form(z, 10));
            assert_eq!(r.verdict, Verdict::CuspTypeAbsolutelyDicritical, "z = {z}");
        }
    }

    #[test]
    fn radial_form_is_wrong_tree() {
        assert_eq!(reduce_cusp(&OneForm::radial(10)).verdict, Verdict::WrongReductionTree);
        assert_eq!(reduce_cusp(&OneForm::dx(10)).verdict, Verdict::NotDicritical);
        assert_eq!(reduce_cusp(&fz_form(0, 4)).verdict, Verdict::Inconclusive(4));
    }

    #[test]
    fn rotated_cone() {
        // swap x and y: the cone becomes x²
        let r = reduce_cusp(&fz_form(1, 10).swap_vars());
        assert_eq!(r.verdict, Verdict::CuspTypeAbsolutelyDicritical);
    }

    #[test]
    fn template_is_cusp_type() {
        let w = cusp_template(&Coeff::from_int(3), &Coeff::from_int(1), 10);
        assert_eq!(reduce_cusp(&w).verdict, Verdict::CuspTypeAbsolutelyDicritical);
        let w = cusp_template(&Coeff::zero(), &Coeff::from_int(1), 10);
        assert_eq!(reduce_cusp(&w).verdict, Verdict::WrongReductionTree);
    }
}
