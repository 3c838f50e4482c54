use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::jets::Jet1;
use crate::linalg::{Matrix, Solve};

/// Which of the two variables an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Var {
    X,
    Y,
}

/// Truncated power series in two variables: coefficients of `x^i y^j`
/// for `i + j ≤ order`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Jet2 {
    order: usize,
    terms: BTreeMap<(usize, usize), Coeff>,
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        Jet2 {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Coeff, order: usize) -> Self {
        Jet2::monomial(c, 0, 0, order)
    }

    pub fn one(order: usize) -> Self {
        Jet2::constant(Coeff::one(), order)
    }

    pub fn x(order: usize) -> Self {
        Jet2::monomial(Coeff::one(), 1, 0, order)
    }

    pub fn y(order: usize) -> Self {
        Jet2::monomial(Coeff::one(), 0, 1, order)
    }

    pub fn var(v: Var, order: usize) -> Self {
        match v {
            Var::X => Jet2::x(order),
            Var::Y => Jet2::y(order),
        }
    }

    pub fn monomial(c: Coeff, i: usize, j: usize, order: usize) -> Self {
        let mut f = Jet2::zero(order);
        f.set(i, j, c);
        f
    }

    /// Builds a jet from `(i, j, c)` triples; repeated exponents accumulate.
    pub fn from_terms<I>(terms: I, order: usize) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Coeff)>,
    {
        let mut f = Jet2::zero(order);
        for (i, j, c) in terms {
            f.add_term(i, j, &c);
        }
        f
    }

    pub fn from_int_terms(terms: &[(usize, usize, i64)], order: usize) -> Self {
        Jet2::from_terms(
            terms.iter().map(|&(i, j, c)| (i, j, Coeff::from_int(c))),
            order,
        )
    }

    /// `g(x)` seen as a series in two variables.
    pub fn from_jet1(g: &Jet1, v: Var) -> Self {
        let terms = g.coeffs().iter().enumerate().map(|(k, c)| match v {
            Var::X => (k, 0, c.clone()),
            Var::Y => (0, k, c.clone()),
        });
        Jet2::from_terms(terms, g.order())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize, j: usize) -> Coeff {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, c: Coeff) {
        if i + j > self.order {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), c);
        }
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: &Coeff) {
        if i + j > self.order || c.is_zero() {
            return;
        }
        let new = &self.coeff(i, j) + c;
        self.set(i, j, new);
    }

    /// Nonzero terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Coeff)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(0, 0)
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn homogeneous_part(&self, d: usize) -> Jet2 {
        Jet2 {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> Jet2 {
        let order = order.min(self.order);
        Jet2 {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j <= order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Re-declares the order. Raising it is only meaningful for polynomials.
    pub fn with_order(&self, order: usize) -> Jet2 {
        Jet2 {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j <= order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Jet2 {
        if c.is_zero() {
            return Jet2::zero(self.order);
        }
        Jet2 {
            order: self.order,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        let mut out = self.truncate(self.order.min(other.order));
        for (i, j, c) in other.terms() {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        let mut out = self.truncate(self.order.min(other.order));
        for (i, j, c) in other.terms() {
            out.add_term(i, j, &-c);
        }
        out
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let n = self.order.min(other.order);
        let mut acc: BTreeMap<(usize, usize), Coeff> = BTreeMap::new();
        for (&(i, j), a) in &self.terms {
            if i + j > n {
                continue;
            }
            for (&(k, l), b) in &other.terms {
                if i + j + k + l > n {
                    continue;
                }
                let e = acc.entry((i + k, j + l)).or_insert_with(Coeff::zero);
                *e += &(a * b);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Jet2 { order: n, terms: acc }
    }

    pub fn pow(&self, k: usize) -> Jet2 {
        let mut acc = Jet2::one(self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reciprocal of a unit.
    pub fn recip(&self) -> Result<Jet2> {
        let c0 = self.constant_term().inv().ok_or(Error::NotDivisible)?;
        // 1/(c0(1 + r)) = c0^{-1} Σ (−r)^k
        let r = self.scale(&c0).sub(&Jet2::one(self.order));
        let neg_r = r.scale(&Coeff::from_int(-1));
        let mut acc = Jet2::one(self.order);
        for _ in 0..self.order {
            acc = Jet2::one(self.order).add(&acc.mul(&neg_r));
        }
        Ok(acc.scale(&c0))
    }

    /// Quotient `q` with `q·b = a`.
    ///
    /// For a unit divisor the quotient has order `min(a, b)`. Otherwise, with
    /// `v` the valuation of `b`, the quotient is solved degree by degree and
    /// is known to order `min(a, b) − v`; it fails unless the division is exact
    /// up to that order.
    pub fn div(&self, b: &Jet2) -> Result<Jet2> {
        let n = self.order.min(b.order);
        let v = b.valuation().ok_or(Error::NotDivisible)?;
        if v == 0 {
            return Ok(self.truncate(n).mul(&b.truncate(n).recip()?));
        }
        if v > n || self.valuation().is_some_and(|va| va < v) {
            return Err(Error::NotDivisible);
        }
        let lead = b.homogeneous_part(v);
        let qn = n - v;
        let mut q = Jet2::zero(qn);
        let mut rem = self.truncate(n);
        for k in 0..=qn {
            let target = rem.homogeneous_part(k + v);
            let qk = divide_homogeneous(&target, &lead, k, v)?;
            if !qk.is_zero() {
                rem = rem.sub(&qk.with_order(n).mul(&b.truncate(n)));
                for (i, j, c) in qk.terms() {
                    q.set(i, j, c.clone());
                }
            }
        }
        Ok(q)
    }

    /// Divides by `x^kx y^ky` exactly; the order drops by `kx + ky`.
    pub fn div_monomial(&self, kx: usize, ky: usize) -> Result<Jet2> {
        let shift = kx + ky;
        if shift > self.order {
            return Err(Error::NotDivisible);
        }
        let mut out = Jet2::zero(self.order - shift);
        for (i, j, c) in self.terms() {
            if i < kx || j < ky {
                return Err(Error::NotDivisible);
            }
            out.set(i - kx, j - ky, c.clone());
        }
        Ok(out)
    }

    /// Multiplies by `x^kx y^ky`. Coefficients pushed past the order are dropped.
    pub fn mul_monomial(&self, kx: usize, ky: usize) -> Jet2 {
        let mut out = Jet2::zero(self.order);
        for (i, j, c) in self.terms() {
            out.set(i + kx, j + ky, c.clone());
        }
        out
    }

    /// Largest power of the variable dividing every term (`None` for zero).
    pub fn var_valuation(&self, v: Var) -> Option<usize> {
        self.terms
            .keys()
            .map(|&(i, j)| match v {
                Var::X => i,
                Var::Y => j,
            })
            .min()
    }

    /// Formal partial derivative; the order drops by one.
    pub fn derive(&self, v: Var) -> Jet2 {
        let n = self.order.saturating_sub(1);
        let mut out = Jet2::zero(n);
        for (i, j, c) in self.terms() {
            match v {
                Var::X if i > 0 => out.set(i - 1, j, c * &Coeff::from_int(i as i64)),
                Var::Y if j > 0 => out.set(i, j - 1, c * &Coeff::from_int(j as i64)),
                _ => {}
            }
        }
        out
    }

    /// `f(u, v)` for substitutions without constant term.
    pub fn substitute(&self, u: &Jet2, v: &Jet2) -> Result<Jet2> {
        if !u.constant_term().is_zero() || !v.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order.min(u.order).min(v.order);
        let u = u.truncate(n);
        let v = v.truncate(n);
        let maxi = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let maxj = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let mut vpow = vec![Jet2::one(n)];
        for _ in 0..maxj.min(n) {
            let next = vpow.last().unwrap().mul(&v);
            vpow.push(next);
        }
        // f = Σ_i u^i g_i(v), evaluated by Horner's rule in u
        let mut g = vec![Jet2::zero(n); maxi + 1];
        for (i, j, c) in self.terms() {
            if j < vpow.len() {
                g[i] = g[i].add(&vpow[j].scale(c));
            }
        }
        let mut acc = g[maxi].clone();
        for i in (0..maxi).rev() {
            acc = acc.mul(&u).add(&g[i]);
        }
        Ok(acc)
    }

    /// `f(x + p, y + q)` by Taylor expansion, for perturbations `p`, `q` of
    /// valuation at least 2.
    ///
    /// A term `∂ˣᵃ∂ʸᵇf · pᵃqᵇ` gains at least `a + b` in degree, so the
    /// derivatives' order loss is recovered and the result keeps the order of `f`.
    pub fn substitute_shift(&self, p: &Jet2, q: &Jet2) -> Result<Jet2> {
        let vp = p.valuation().unwrap_or(usize::MAX);
        let vq = q.valuation().unwrap_or(usize::MAX);
        if vp.min(vq) < 2 {
            return Err(Error::InvalidInput("shift must have valuation at least 2".into()));
        }
        let n = self.order.min(p.order).min(q.order);
        let v = vp.min(vq);
        let kmax = n / (v - 1);
        let mut out = self.truncate(n);
        // derivatives ∂ˣᵃ∂ʸᵇf, walked row by row
        let mut dx_row = self.truncate(n);
        let mut ppow = Jet2::one(n);
        let mut fact_a = Coeff::one();
        for a in 0..=kmax {
            if a > 0 {
                dx_row = dx_row.derive(Var::X);
                ppow = ppow.mul(p);
                fact_a = &fact_a * &Coeff::from_int(a as i64);
            }
            if dx_row.is_zero() || (a > 0 && ppow.is_zero()) {
                break;
            }
            let mut d = dx_row.clone();
            let mut qpow = Jet2::one(n);
            let mut fact_b = Coeff::one();
            for b in 0..=kmax - a {
                if b > 0 {
                    d = d.derive(Var::Y);
                    qpow = qpow.mul(q);
                    fact_b = &fact_b * &Coeff::from_int(b as i64);
                }
                if a + b == 0 {
                    continue;
                }
                if d.is_zero() || qpow.is_zero() {
                    break;
                }
                let w = ppow.mul(&qpow);
                let scale = (&fact_a * &fact_b).inv().expect("nonzero factorial");
                out = out.add(&d.with_order(n).mul(&w).scale(&scale));
            }
        }
        Ok(out)
    }

    /// `f(0, y)` or `f(x, 0)` as a one-variable jet in the surviving variable.
    pub fn restrict(&self, zero_var: Var) -> Jet1 {
        let mut out = Jet1::zero(self.order);
        for (i, j, c) in self.terms() {
            match zero_var {
                Var::X if i == 0 => out.set_coeff(j, c.clone()),
                Var::Y if j == 0 => out.set_coeff(i, c.clone()),
                _ => {}
            }
        }
        out
    }

    /// Swaps the roles of the two variables.
    pub fn swap_vars(&self) -> Jet2 {
        Jet2 {
            order: self.order,
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    pub fn eval(&self, x: &Coeff, y: &Coeff) -> Coeff {
        let mut acc = Coeff::zero();
        for (i, j, c) in self.terms() {
            acc += &(&(c * &x.pow(i as i64)) * &y.pow(j as i64));
        }
        acc
    }

    /// Applies `f ↦ g ∘ f` for a one-variable jet `g`, requiring `f(0,0) = 0`.
    pub fn compose_outer(&self, g: &Jet1) -> Result<Jet2> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order.min(g.order());
        let f = self.truncate(n);
        let mut acc = Jet2::constant(g.coeff(n), n);
        for k in (0..n).rev() {
            acc = acc.mul(&f);
            acc.add_term(0, 0, &g.coeff(k));
        }
        Ok(acc)
    }

    pub fn fmt_with(&self, names: (&str, &str)) -> String {
        let mut out = String::new();
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|(&(i, j), _)| (i + j, std::cmp::Reverse(i)));
        for (&(i, j), c) in keys {
            let mono = monomial_text(i, j, names);
            let c_txt = c.to_string();
            let body = if mono.is_empty() {
                c_txt
            } else if c_txt == "1" {
                mono
            } else if c_txt == "-1" {
                format!("-{mono}")
            } else if !c.is_real() && !c.re().is_zero() {
                format!("({c_txt})*{mono}")
            } else {
                format!("{c_txt}*{mono}")
            };
            if out.is_empty() {
                out = body;
            } else if let Some(rest) = body.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn monomial_text(i: usize, j: usize, names: (&str, &str)) -> String {
    let part = |name: &str, e: usize| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [part(names.0, i), part(names.1, j)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

/// Solves `q·lead = target` for homogeneous `q` of degree `k`, where `lead` is
/// homogeneous of degree `v`.
fn divide_homogeneous(target: &Jet2, lead: &Jet2, k: usize, v: usize) -> Result<Jet2> {
    if target.is_zero() {
        return Ok(Jet2::zero(k));
    }
    // unknown q_{a} is the coefficient of x^a y^{k−a}; equation row r is x^r y^{k+v−r}
    let mut m = Matrix::zeros(k + v + 1, k + 1);
    for a in 0..=k {
        for (i, _, c) in lead.terms() {
            m.set(a + i, a, c.clone());
        }
    }
    let rhs: Vec<Coeff> = (0..=k + v).map(|r| target.coeff(r, k + v - r)).collect();
    match m.solve(&rhs) {
        Solve::Solved(q) => Ok(Jet2::from_terms(
            q.into_iter().enumerate().map(|(a, c)| (a, k - a, c)),
            k,
        )),
        Solve::Inconsistent { .. } => Err(Error::NotDivisible),
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        Jet2::add(self, rhs)
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        Jet2::sub(self, rhs)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        Jet2::mul(self, rhs)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(&Coeff::from_int(-1))
    }
}

impl fmt::Display for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.fmt_with(("x", "y")), self.order + 1)
    }
}

impl serde::Serialize for Jet2 {
    /// `{"order": N, "terms": [[i, j, "c"], …]}`
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(usize, usize, &Coeff)> = self.terms().collect();
        let mut st = s.serialize_struct("Jet2", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
