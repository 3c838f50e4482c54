//! The C*-orbit decision on Schwarzians, homographic symmetry groups and
//! equivalence of normal pairs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::lattice::relation_lattice;
use super::{schwarzian, GermDiff1, Homography};
use crate::coeff::Coeff;
use crate::error::Result;
use crate::jets::{Jet1, Poly};

/// Outcome of deciding whether `f0(z) = ε² f1(εz)` for some `ε ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CStarVerdict {
    pub equivalent: bool,
    pub order: usize,
    pub reason: String,
    /// Constraints `ε^m = r`, one per nonzero coefficient.
    pub constraints: Vec<(i64, Coeff)>,
    /// `g` and `ρ` with the solution set `{ε : ε^g = ρ}`, when equivalent.
    pub reduced: Option<(i64, Coeff)>,
    /// Solutions lying in Q(i).
    pub witnesses: Vec<Coeff>,
    /// Equivalent over C but no solution is representable in Q(i).
    pub witness_in_extension: bool,
    /// False when the Q(i) root search was skipped because of size.
    pub search_complete: bool,
}

/// Decides the C*-action equivalence `f0(z) = ε² f1(εz)` at the common order.
pub fn cstar_equivalent(f0: &Jet1, f1: &Jet1) -> CStarVerdict {
    let order = f0.order().min(f1.order());
    let mut verdict = CStarVerdict {
        equivalent: false,
        order,
        reason: String::new(),
        constraints: Vec::new(),
        reduced: None,
        witnesses: Vec::new(),
        witness_in_extension: false,
        search_complete: true,
    };
    for k in 0..=order {
        let (d, c) = (f0.coeff(k), f1.coeff(k));
        match (d.is_zero(), c.is_zero()) {
            (true, true) => {}
            (false, false) => verdict.constraints.push((k as i64 + 2, &d / &c)),
            _ => {
                verdict.reason = format!("support mismatch at z^{k}");
                return verdict;
            }
        }
    }
    if verdict.constraints.is_empty() {
        verdict.equivalent = true;
        verdict.reason = "both jets vanish; every ε works".into();
        verdict.reduced = Some((0, Coeff::one()));
        verdict.witnesses = vec![Coeff::one()];
        return verdict;
    }
    let exps: Vec<i64> = verdict.constraints.iter().map(|c| c.0).collect();
    let lat = relation_lattice(&exps);
    for rel in &lat.relations {
        let prod = power_product(&verdict.constraints, rel);
        if !prod.is_one() {
            verdict.reason = format!("exponent relation {rel:?} gives {prod} instead of 1");
            return verdict;
        }
    }
    let rho = power_product(&verdict.constraints, &lat.bezout);
    verdict.equivalent = true;
    verdict.reason = format!("all constraints reduce to ε^{} = {}", lat.gcd, rho);
    let (roots, complete) = gaussian_roots(&rho, lat.gcd);
    verdict.search_complete = complete;
    verdict.witness_in_extension = complete && roots.is_empty();
    verdict.witnesses = roots;
    verdict.reduced = Some((lat.gcd, rho));
    verdict
}

fn power_product(constraints: &[(i64, Coeff)], exps: &[i64]) -> Coeff {
    constraints
        .iter()
        .zip(exps)
        .fold(Coeff::one(), |acc, ((_, r), &e)| &acc * &r.pow(e))
}

/// All `ε ∈ Q(i)` with `ε^g = ρ`.
///
/// With `Q` the common denominator of `ρ`, `εQ` is an algebraic integer of
/// Q(i), hence a Gaussian integer, so rounding a floating-point seed and
/// verifying exactly finds every root. The search is reported incomplete
/// when the Gaussian integers involved are too large for the seed.
fn gaussian_roots(rho: &Coeff, g: i64) -> (Vec<Coeff>, bool) {
    if rho.is_zero() || g <= 0 {
        return (Vec::new(), true);
    }
    let q = rho.common_denominator();
    let (re, im) = rho.to_f64_pair();
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let modulus = (re * re + im * im).sqrt().powf(1.0 / g as f64) * qf;
    if !modulus.is_finite() || modulus * modulus >= 2f64.powi(50) {
        return (Vec::new(), false);
    }
    let arg = im.atan2(re);
    let qc = Coeff::from_rational(BigRational::from_integer(q));
    let mut out: Vec<Coeff> = Vec::new();
    for k in 0..g {
        let theta = (arg + 2.0 * std::f64::consts::PI * k as f64) / g as f64;
        let a = (modulus * theta.cos()).round() as i64;
        let b = (modulus * theta.sin()).round() as i64;
        let cand = &Coeff::new(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
        ) / &qc;
        if !cand.is_zero() && cand.pow(g) == *rho && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out.sort_by_key(|c| c.to_string());
    (out, true)
}

/// Homographic symmetries `h` of `f`, that is solutions of
/// `f(h(z))·h'(z)² = f(z)` with `h(z) = λz/(1+μz)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub order: usize,
    /// `f` vanishes to the working order, so every homography is a symmetry.
    pub infinite: bool,
    pub leading_index: Option<usize>,
    /// Monic polynomial in λ whose roots are exactly the admissible λ.
    pub lambda_constraint: Option<Poly>,
    /// `μ = c·(λ − 1)`; `None` when the order is too small to fix μ.
    pub mu_factor: Option<Coeff>,
    /// Symmetries with λ ∈ {±1, ±i}.
    pub candidates: Vec<Homography>,
}

impl SymmetryReport {
    pub fn constraint_text(&self) -> String {
        match &self.lambda_constraint {
            Some(p) => format!("{} = 0", p.fmt_var("λ")),
            None => "none".into(),
        }
    }
}

/// Arithmetic in Q(i)[λ]/(λ^m − 1).
struct CyclicRing {
    modulus: Poly,
}

impl CyclicRing {
    fn reduce(&self, p: Poly) -> Poly {
        p.div_rem(&self.modulus).1
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(a.mul(b))
    }

    /// Truncated product of series with coefficients in the ring.
    fn series_mul(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let n = a.len().min(b.len());
        let mut out = vec![Poly::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !b[j].is_zero() {
                    out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
                }
            }
        }
        out.into_iter().map(|p| self.reduce(p)).collect()
    }
}

pub fn homographic_symmetries(f: &Jet1) -> SymmetryReport {
    let order = f.order();
    let Some(n0) = f.valuation() else {
        return SymmetryReport {
            order,
            infinite: true,
            leading_index: None,
            lambda_constraint: None,
            mu_factor: None,
            candidates: vec![Homography::identity()],
        };
    };
    let m = n0 + 2;
    let ring = CyclicRing {
        modulus: Poly::monomial(m).sub(&Poly::one()),
    };
    let mu_factor = (n0 < order).then(|| {
        &f.coeff(n0 + 1) / &(&f.coeff(n0) * &Coeff::from_int(n0 as i64 + 4))
    });
    let lambda = ring.reduce(Poly::monomial(1));
    // μ as a polynomial in λ
    let mu = match &mu_factor {
        Some(c) => Poly::new(vec![-c, c.clone()]),
        None => Poly::zero(),
    };
    let neg_mu = mu.scale(&Coeff::from_int(-1));
    let n = order + 1;
    let mut h = vec![Poly::zero(); n];
    let mut term = lambda.clone();
    for c in h.iter_mut().skip(1) {
        *c = term.clone();
        term = ring.mul(&term, &neg_mu);
    }
    // (1 + μz)^{-4} = Σ C(k+3, 3) (−μ)^k z^k
    let mut inv4 = vec![Poly::zero(); n];
    let mut pw = Poly::one();
    for (k, c) in inv4.iter_mut().enumerate() {
        let binom = ((k + 1) * (k + 2) * (k + 3) / 6) as i64;
        *c = pw.scale(&Coeff::from_int(binom));
        pw = ring.mul(&pw, &neg_mu);
    }
    // f(h) by Horner's rule
    let mut fh = vec![Poly::zero(); n];
    for k in (0..n).rev() {
        fh = ring.series_mul(&fh, &h);
        fh[0] = fh[0].add(&Poly::constant(f.coeff(k)));
    }
    let lam2 = ring.mul(&lambda, &lambda);
    let lhs = ring.series_mul(&fh, &inv4);
    let mut g = ring.modulus.clone();
    for k in 0..n {
        let e = ring.mul(&lhs[k], &lam2).sub(&Poly::constant(f.coeff(k)));
        if !e.is_zero() {
            g = g.gcd(&e);
        }
    }
    let g = g.monic();
    let mut candidates = Vec::new();
    for lam in [
        Coeff::one(),
        Coeff::from_int(-1),
        Coeff::i(),
        -Coeff::i(),
    ] {
        if g.eval(&lam).is_zero() {
            let mu_v = match &mu_factor {
                Some(c) => c * &(&lam - &Coeff::one()),
                None => Coeff::zero(),
            };
            candidates.push(Homography {
                lambda: lam,
                mu: mu_v,
            });
        }
    }
    SymmetryReport {
        order,
        infinite: false,
        leading_index: Some(n0),
        lambda_constraint: Some(g),
        mu_factor,
        candidates,
    }
}

/// A gluing datum `(σ, α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalPair {
    pub sigma: GermDiff1,
    pub alpha: Coeff,
}

/// The Schwarzian of the canonical representative together with its α.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliClass {
    pub schwarzian: Jet1,
    pub canonical_alpha: Coeff,
}

impl NormalPair {
    pub fn new(sigma: GermDiff1, alpha: Coeff) -> Self {
        NormalPair { sigma, alpha }
    }

    /// The homography `h₀ = z/(1+μz)` moving this pair to a canonical one.
    pub fn canonicalizing_homography(&self) -> Homography {
        let mu = &(&self.alpha - &self.sigma.canonical_alpha()) * &Coeff::from_frac(-1, 5);
        Homography {
            lambda: Coeff::one(),
            mu,
        }
    }

    /// `(σ∘h₀, (3/2)(σ∘h₀)''(0)/(σ∘h₀)'(0))`
    pub fn canonical(&self) -> NormalPair {
        let h0 = self
            .canonicalizing_homography()
            .to_germ(self.sigma.order());
        let sigma = self.sigma.compose(&h0);
        let alpha = sigma.canonical_alpha();
        NormalPair { sigma, alpha }
    }
}

pub fn moduli_class(p: &NormalPair) -> Result<ModuliClass> {
    let can = p.canonical();
    Ok(ModuliClass {
        schwarzian: schwarzian(&can.sigma)?,
        canonical_alpha: can.alpha,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub equivalent: bool,
    pub classes: (ModuliClass, ModuliClass),
    pub cstar: CStarVerdict,
    /// Coefficients `(c₀, c₁)` of the homographies `h₀ = λz/(1+μz)` with
    /// `μ = c₀ + c₁λ` that solve the α-compatibility relation.
    pub h0_family: (Coeff, Coeff),
}

pub fn normal_pair_equivalent(p0: &NormalPair, p1: &NormalPair) -> Result<PairVerdict> {
    let c0 = moduli_class(p0)?;
    let c1 = moduli_class(p1)?;
    let cstar = cstar_equivalent(&c0.schwarzian, &c1.schwarzian);
    let fifth = Coeff::from_frac(1, 5);
    let d0 = &(&p0.alpha - &p0.sigma.canonical_alpha()) * &fifth;
    let d1 = -(&(&p1.alpha - &p1.sigma.canonical_alpha()) * &fifth);
    Ok(PairVerdict {
        equivalent: cstar.equivalent,
        classes: (c0, c1),
        cstar,
        h0_family: (d0, d1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_witness() {
        let f1 = Jet1::from_ints(&[0, 1], 6);
        let f0 = Jet1::from_ints(&[0, 8], 6);
        let v = cstar_equivalent(&f0, &f1);
        assert!(v.equivalent);
        assert_eq!(v.witnesses, vec![Coeff::from_int(2)]);
        let v = cstar_equivalent(&Jet1::from_ints(&[0, 1, 1], 6), &f1);
        assert!(!v.equivalent);
        assert!(cstar_equivalent(&Jet1::zero(5), &Jet1::zero(5)).equivalent);
    }

    #[test]
    fn extension_witness() {
        // ε³ = 2 has no Gaussian-rational root
        let v = cstar_equivalent(&Jet1::from_ints(&[0, 2], 4), &Jet1::from_ints(&[0, 1], 4));
        assert!(v.equivalent);
        assert!(v.witness_in_extension);
    }

    #[test]
    fn symmetries_of_monomials() {
        let r = homographic_symmetries(&Jet1::from_ints(&[0, 1], 8));
        assert_eq!(r.lambda_constraint, Some(Poly::from_ints(&[-1, 0, 0, 1])));
        assert_eq!(r.candidates, vec![Homography::identity()]);
        let r = homographic_symmetries(&Jet1::from_ints(&[0, 0, 1], 8));
        assert_eq!(r.candidates.len(), 4);
        assert!(r.candidates.iter().all(|h| h.mu.is_zero()));
        assert!(homographic_symmetries(&Jet1::zero(8)).infinite);
    }

    #[test]
    fn identity_pairs_with_different_alpha() {
        let id = GermDiff1::identity(10);
        let p0 = NormalPair::new(id.clone(), Coeff::zero());
        let p1 = NormalPair::new(id, Coeff::from_int(5));
        let v = normal_pair_equivalent(&p0, &p1).unwrap();
        assert!(v.equivalent);
        assert_eq!(v.h0_family, (Coeff::zero(), Coeff::from_int(-1)));
    }
}
